//! Random class hierarchies and an independent LUB oracle.

use std::collections::BTreeSet;

use rand::Rng;

/// A forest of user classes `C0..Cn`; `parents[i]` is always `< i`.
#[derive(Clone, Debug)]
pub struct Hierarchy {
    pub parents: Vec<Option<usize>>,
}

impl Hierarchy {
    /// Builds a hierarchy from raw choices, one per class. A choice picks a
    /// parent among the earlier classes or none; parents at the depth limit
    /// are skipped so no chain of user classes exceeds `max_depth`.
    pub fn from_choices(choices: &[u32], max_depth: usize) -> Hierarchy {
        let mut parents: Vec<Option<usize>> = Vec::with_capacity(choices.len());
        let mut depth: Vec<usize> = Vec::with_capacity(choices.len());
        for (i, &c) in choices.iter().enumerate() {
            let pick = c as usize % (i + 1);
            let parent = if pick == i || depth[pick] >= max_depth {
                None
            } else {
                Some(pick)
            };
            depth.push(parent.map_or(1, |p| depth[p] + 1));
            parents.push(parent);
        }
        Hierarchy { parents }
    }

    pub fn random(rng: &mut impl Rng, max_classes: usize, max_depth: usize) -> Hierarchy {
        let n = rng.gen_range(1..=max_classes);
        let choices: Vec<u32> = (0..n).map(|_| rng.gen()).collect();
        Hierarchy::from_choices(&choices, max_depth)
    }

    pub fn len(&self) -> usize {
        self.parents.len()
    }

    pub fn name(i: usize) -> String {
        format!("C{i}")
    }

    /// Class `i` and its ancestors, nearest first, ending at `None` (Object).
    pub fn chain(&self, i: usize) -> Vec<Option<usize>> {
        let mut out = vec![Some(i)];
        let mut cur = self.parents[i];
        while let Some(p) = cur {
            out.push(Some(p));
            cur = self.parents[p];
        }
        out.push(None);
        out
    }

    pub fn depth(&self, i: usize) -> usize {
        self.chain(i).len() - 1
    }

    pub fn is_ancestor_or_self(&self, anc: usize, of: usize) -> bool {
        self.chain(of).contains(&Some(anc))
    }

    /// Brute force: intersect all superclass chains and keep the deepest
    /// member. `None` stands for Object.
    pub fn oracle_lub(&self, subset: &[usize]) -> Option<usize> {
        let mut common: BTreeSet<Option<usize>> = self.chain(subset[0]).into_iter().collect();
        for &c in &subset[1..] {
            let other: BTreeSet<Option<usize>> = self.chain(c).into_iter().collect();
            common = common.intersection(&other).copied().collect();
        }
        common
            .into_iter()
            .max_by_key(|c| c.map_or(0, |i| self.depth(i)))
            .unwrap()
    }

    pub fn source(&self) -> String {
        let mut s = String::new();
        for (i, p) in self.parents.iter().enumerate() {
            match p {
                Some(p) => s.push_str(&format!("class C{i} extends C{p} {{}}\n")),
                None => s.push_str(&format!("class C{i} {{}}\n")),
            }
        }
        s
    }
}
