#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};

use swarmc::frontend::Dialect;
use swarmc::runtime::{self, RunConfig, RunOutcome};
use swarmc::source::{Code, Diagnostic, SourceMap, SourceUnit};
use swarmc::typing::TypedProgram;

pub fn corpus_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/corpus")
}

/// Corpus program directories, sorted by name.
pub fn corpus_dirs() -> Vec<PathBuf> {
    let mut dirs: Vec<PathBuf> = fs::read_dir(corpus_root())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.is_dir())
        .collect();
    dirs.sort();
    dirs
}

pub fn swarm_files(dir: &Path) -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "swarm"))
        .collect();
    files.sort();
    files
}

pub fn corpus(name: &str) -> PathBuf {
    corpus_root().join(name)
}

pub fn load_dir(dir: &Path) -> SourceMap {
    let mut map = SourceMap::new();
    for f in swarm_files(dir) {
        map.add(SourceUnit::new(f.clone(), fs::read_to_string(&f).unwrap()));
    }
    map
}

pub fn single(src: &str) -> SourceMap {
    let mut map = SourceMap::new();
    map.add(SourceUnit::new("test.swarm", src));
    map
}

pub fn compile_src(src: &str) -> Result<TypedProgram, Vec<Diagnostic>> {
    swarmc::compile(&single(src), Dialect::Swarm)
}

pub fn compile_ok(src: &str) -> TypedProgram {
    match compile_src(src) {
        Ok(tp) => tp,
        Err(d) => panic!("unexpected diagnostics: {d:?}"),
    }
}

pub fn codes(src: &str) -> Vec<Code> {
    match compile_src(src) {
        Ok(_) => Vec::new(),
        Err(d) => d.iter().map(|d| d.code).collect(),
    }
}

pub fn compile_dir(dir: &Path) -> TypedProgram {
    swarmc::compile(&load_dir(dir), Dialect::Swarm).unwrap()
}

pub fn run_tp(tp: &TypedProgram, cfg: &RunConfig) -> RunOutcome {
    runtime::run(tp, cfg).unwrap()
}

pub fn run_src(src: &str) -> RunOutcome {
    run_tp(&compile_ok(src), &RunConfig::default())
}

/// Creature, Shark, Fish and Herring, shared by several tests.
pub const SEA: &str = r#"
class Creature {
    int hitpoints;

    void damage(int damage) {
        this.hitpoints = this.hitpoints - damage;
    }
}

class Shark extends Creature {
    Shark() {
        this.hitpoints = 100;
    }
}

class Fish extends Creature {
    Fish() {
        this.hitpoints = 1;
    }

    void attack(Creature creature) {
        creature.damage(0);
    }

    @group
    void swarmAttack(Creature creature) {
        int swarmSize = this.size();
        creature.damage(swarmSize * swarmSize);
    }
}

class Herring extends Fish {
    @group
    void swarmAttack(Creature creature) {
        super.swarmAttack(creature);
        this.tauntVictim();
    }

    @group
    void tauntVictim() {
        print("taunt");
    }
}
"#;

pub fn sea_with(main: &str) -> String {
    format!("{SEA}\nclass Main {{\n    static void main() {{\n{main}\n    }}\n}}\n")
}

pub mod hierarchy;
