mod common;

use std::collections::BTreeSet;

use common::hierarchy::Hierarchy;
use common::*;
use proptest::prelude::*;
use swarmc::desugar::desugar;
use swarmc::emitter::{emit, EmitConfig};
use swarmc::frontend::parse_sources;
use swarmc::runtime::{Policy, RunConfig};
use swarmc::symbols::{ClassId, SymbolTable, TypeRef};
use swarmc::typing::lookup::least_upper_bound;

fn hierarchy_strategy(max_classes: usize) -> impl Strategy<Value = Hierarchy> {
    prop::collection::vec(any::<u32>(), 1..=max_classes).prop_map(|c| Hierarchy::from_choices(&c, 6))
}

fn table_of(h: &Hierarchy) -> SymbolTable {
    compile_ok(&h.source()).table
}

fn ids(t: &SymbolTable, h: &Hierarchy) -> Vec<ClassId> {
    (0..h.len()).map(|i| t.lookup_class(&Hierarchy::name(i)).unwrap()).collect()
}

proptest! {
    #[test]
    fn lub_matches_chain_intersection(
        (h, subset) in hierarchy_strategy(50).prop_flat_map(|h| {
            let n = h.len();
            (Just(h), prop::collection::vec(0..n, 1..=8))
        })
    ) {
        let t = table_of(&h);
        let id = ids(&t, &h);
        let classes: Vec<ClassId> = subset.iter().map(|&i| id[i]).collect();
        let got = least_upper_bound(&t, &classes).unwrap();
        let want = h.oracle_lub(&subset).map_or(ClassId::OBJECT, |i| id[i]);
        prop_assert_eq!(got, want);
        // Upper bound of every input, and no strictly deeper common bound.
        for &c in &classes {
            prop_assert!(t.is_subclass(c, got));
        }
        for &c in &classes {
            for a in t.superclass_chain(c) {
                if classes.iter().all(|&x| t.is_subclass(x, a)) {
                    prop_assert!(t.is_subclass(got, a));
                }
            }
        }
    }

    #[test]
    fn subclassing_is_a_partial_order(h in hierarchy_strategy(30)) {
        let t = table_of(&h);
        let id = ids(&t, &h);
        for &a in &id {
            prop_assert!(t.superclass_chain(a).len() <= h.len() + 1);
            prop_assert!(t.is_subtype(TypeRef::Class(a), TypeRef::Class(a)));
            for &b in &id {
                let ab = t.is_subtype(TypeRef::Class(a), TypeRef::Class(b));
                let ba = t.is_subtype(TypeRef::Class(b), TypeRef::Class(a));
                if a != b {
                    prop_assert!(!(ab && ba));
                }
                for &c in &id {
                    if ab && t.is_subtype(TypeRef::Class(b), TypeRef::Class(c)) {
                        prop_assert!(t.is_subtype(TypeRef::Class(a), TypeRef::Class(c)));
                    }
                }
            }
        }
    }
}

/// A hierarchy where each class declares some of the group selectors
/// `g0..g2`, plus a main that exercises every statically valid group call
/// on homogeneous collections.
#[derive(Clone, Debug)]
struct GroupProgram {
    h: Hierarchy,
    groups: Vec<BTreeSet<usize>>,
    sizes: Vec<usize>,
}

const SELECTORS: usize = 3;

impl GroupProgram {
    fn declares(&self, c: usize, g: usize) -> Option<usize> {
        self.h.chain(c).into_iter().flatten().find(|&a| self.groups[a].contains(&g))
    }

    fn source(&self) -> String {
        let mut s = String::new();
        for i in 0..self.h.len() {
            match self.h.parents[i] {
                Some(p) => s.push_str(&format!("class C{i} extends C{p} {{\n")),
                None => s.push_str(&format!("class C{i} {{\n")),
            }
            for &g in &self.groups[i] {
                s.push_str(&format!("    @group\n    string g{g}() {{\n"));
                let mut expr = format!("\"C{i}.g{g}/\" + this.size()");
                if let Some(p) = self.h.parents[i] {
                    if self.declares(p, g).is_some() {
                        expr.push_str(" + \" \" + super.g");
                        expr.push_str(&format!("{g}()"));
                    }
                }
                // Call a lower selector, through an escape when the class
                // itself can see one.
                if g > 0 {
                    if let Some(d) = self.declares(i, g - 1) {
                        expr.push_str(&format!(" + \" <\" + C{i}.this.g{}() + \" \" + C{d}.this.g{}()", g - 1, g - 1));
                    }
                }
                s.push_str(&format!("        return {expr};\n    }}\n"));
            }
            s.push_str("}\n");
        }
        s.push_str("class Main {\n    static void main() {\n");
        for i in 0..self.h.len() {
            s.push_str(&format!("        Collection<C{i}> c{i} = new Collection<C{i}>();\n"));
            s.push_str(&format!(
                "        for (int k = 0; k < {}; k = k + 1) c{i}.add(new C{i}());\n",
                self.sizes[i]
            ));
            for g in 0..SELECTORS {
                if self.declares(i, g).is_some() {
                    s.push_str(&format!("        print(c{i}.g{g}());\n"));
                }
            }
        }
        s.push_str("    }\n}\n");
        s
    }
}

fn group_program() -> impl Strategy<Value = GroupProgram> {
    hierarchy_strategy(8).prop_flat_map(|h| {
        let n = h.len();
        (
            Just(h),
            prop::collection::vec(prop::collection::btree_set(0..SELECTORS, 0..=SELECTORS), n),
            prop::collection::vec(1usize..4, n),
        )
            .prop_map(|(h, groups, sizes)| GroupProgram { h, groups, sizes })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn group_lookup_is_monotone(p in group_program()) {
        let t = compile_ok(&p.source()).table;
        let id = ids(&t, &p.h);
        for c in 0..p.h.len() {
            for g in 0..SELECTORS {
                let sel = format!("g{g}");
                let Some((_, defining)) = t.lookup_group(id[c], &sel) else { continue };
                for (e, &sub) in id.iter().enumerate() {
                    if !p.h.is_ancestor_or_self(c, e) {
                        continue;
                    }
                    let found = t.lookup_group(sub, &sel);
                    prop_assert!(found.is_some());
                    prop_assert!(t.is_subclass(found.unwrap().1, defining));
                }
            }
        }
    }

    #[test]
    fn policies_agree_on_homogeneous_collections(p in group_program()) {
        let tp = compile_ok(&p.source());
        let s = run_tp(&tp, &RunConfig::default());
        let d = run_tp(&tp, &RunConfig { policy: Policy::Dynamic, ..RunConfig::default() });
        prop_assert!(s.result.is_ok());
        let calls = p.source().matches("print(").count();
        prop_assert_eq!(s.stdout.lines().count(), calls);
        prop_assert_eq!(&s.stdout, &d.stdout);
        let targets = |o: &swarmc::runtime::RunOutcome| o.trace.iter().map(|e| e.target).collect::<Vec<_>>();
        prop_assert_eq!(targets(&s), targets(&d));
    }

    #[test]
    fn desugaring_preserves_output(p in group_program()) {
        let tp = compile_ok(&p.source());
        let direct = run_tp(&tp, &RunConfig::default());
        let lowered = desugar(&tp).unwrap();
        let via_core = run_tp(&lowered.core, &RunConfig::default());
        prop_assert_eq!(direct.stdout, via_core.stdout);
        prop_assert_eq!(direct.result.is_ok(), via_core.result.is_ok());
    }

    #[test]
    fn damage_is_the_square_of_the_swarm(n in 0usize..=1000) {
        let src = sea_with(&format!(
            "Shark shark = new Shark();\n\
             Collection<Fish> swarm = new Collection<Fish>();\n\
             for (int k = 0; k < {n}; k = k + 1) swarm.add(new Fish());\n\
             swarm.swarmAttack(shark);\n\
             print(100 - shark.hitpoints);"
        ));
        prop_assert_eq!(run_src(&src).stdout, format!("{}\n", n * n));
    }
}

/// Random expression trees, written fully parenthesized.
fn expr_strategy() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        (0i64..1000).prop_map(|v| v.to_string()),
        Just("x".to_string()),
        Just("true".to_string()),
        Just("\"s\\n\"".to_string()),
        Just("null".to_string()),
        Just("this.f".to_string()),
    ];
    leaf.prop_recursive(5, 40, 3, |inner| {
        prop_oneof![
            (
                inner.clone(),
                prop::sample::select(vec!["+", "-", "*", "/", "==", "!=", "<", "<=", ">", ">=", "&&", "||"]),
                inner.clone()
            )
                .prop_map(|(a, op, b)| format!("({a} {op} {b})")),
            (prop::sample::select(vec!["-", "!"]), inner.clone()).prop_map(|(op, a)| format!("({op}{a})")),
            prop::collection::vec(inner.clone(), 0..3)
                .prop_map(|args| format!("this.m({})", args.join(", "))),
            prop::collection::vec(inner, 0..2).prop_map(|args| format!("new A({})", args.join(", "))),
        ]
    })
}

fn stmt_strategy() -> impl Strategy<Value = String> {
    let simple = prop_oneof![
        expr_strategy().prop_map(|e| format!("print({e});")),
        expr_strategy().prop_map(|e| format!("x = {e};")),
        expr_strategy().prop_map(|e| format!("int y = {e};")),
        expr_strategy().prop_map(|e| format!("return {e};")),
        Just("Collection<A> c = new Collection<A>();".to_string()),
    ];
    simple.prop_recursive(3, 20, 3, |inner| {
        prop_oneof![
            (expr_strategy(), prop::collection::vec(inner.clone(), 0..3))
                .prop_map(|(c, b)| format!("while ({c}) {{ {} }}", b.join(" "))),
            (expr_strategy(), inner.clone(), prop::option::of(inner.clone()))
                .prop_map(|(c, t, e)| match e {
                    Some(e) => format!("if ({c}) {t} else {e}"),
                    None => format!("if ({c}) {{ {t} }}"),
                }),
            (expr_strategy(), inner.clone())
                .prop_map(|(c, b)| format!("for (int i = 0; {c}; i = i + 1) {b}")),
            inner.prop_map(|b| format!("for (A a : this.all()) {{ {b} }}")),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn emitter_round_trips_random_programs(
        stmts in prop::collection::vec(stmt_strategy(), 0..6),
        group in any::<bool>(),
    ) {
        let marker = if group { "@group " } else { "" };
        let src = format!(
            "class A extends B {{ int f; A g;\n {marker}int m(int x, boolean b) {{ {} }} }}",
            stmts.join("\n")
        );
        let program = parse_sources(&single(&src)).unwrap();
        let cfg = EmitConfig::default();
        let text = emit(&program, &cfg);
        let again = parse_sources(&single(&text));
        prop_assert!(again.is_ok(), "{}", text);
        let again = again.unwrap();
        prop_assert_eq!(again.normalized(), program.normalized());
        prop_assert_eq!(emit(&again, &cfg), text);
    }
}
