mod common;

use std::collections::BTreeSet;
use std::fs;

use common::*;
use swarmc::desugar::{desugar, plan_wrappers, reattribute, strip_group_methods};
use swarmc::emitter::{emit, EmitConfig};
use swarmc::frontend::{parse_sources, Dialect};
use swarmc::symbols::{ClassId, SymbolTable};
use swarmc::typing::lookup::Builtin;

fn emitted(tp: &swarmc::typing::TypedProgram) -> String {
    emit(&tp.program, &EmitConfig::default())
}

fn selectors(t: &SymbolTable, c: ClassId) -> BTreeSet<String> {
    t.class(c).selectors().map(str::to_string).collect()
}

#[test]
fn example_fight_gets_one_root_plan() {
    let tp = compile_dir(&corpus("example_fight"));
    let plans = plan_wrappers(&tp.table);
    assert_eq!(plans.len(), 1);
    assert_eq!(plans[0].wrapper_name, "Fish$Group");
    assert!(plans[0].is_root());
    assert_eq!(plans[0].delegation, Builtin::ALL);
}

#[test]
fn herring_plan_extends_fish_plan() {
    let tp = compile_ok(SEA);
    let plans = plan_wrappers(&tp.table);
    let names: Vec<_> = plans.iter().map(|p| p.wrapper_name.as_str()).collect();
    assert_eq!(names, ["Fish$Group", "Herring$Group"]);
    assert_eq!(plans[1].super_wrapper, tp.table.lookup_class("Fish"));
    assert!(plan_wrappers(&compile_ok("class A { void f() {} }").table).is_empty());
}

#[test]
fn fish_listing_matches_golden_file() {
    let dir = corpus("fish_listing");
    let out = tempfile::tempdir().unwrap();
    let code = swarmc::cli::desugar_files(&swarm_files(&dir), Dialect::Swarm, out.path(), &mut Vec::new());
    assert_eq!(code, swarmc::cli::Exit::Ok);
    let got = fs::read_to_string(out.path().join("Fish.core.swarm")).unwrap();
    let golden = fs::read_to_string(
        std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/fish_listing.Fish.core.swarm"),
    )
    .unwrap();
    assert_eq!(got, golden);
    assert!(got.contains("class Fish$Group {"));
    assert!(got.contains("    Collection<? extends Fish> delegate;"));
}

#[test]
fn herring_wrapper_has_no_duplicated_delegation() {
    let d = desugar(&compile_ok(SEA)).unwrap();
    let t = &d.core.table;
    let hw = t.lookup_class("Herring$Group").unwrap();
    assert_eq!(t.superclass(hw), t.lookup_class("Fish$Group"));
    assert_eq!(
        selectors(t, hw),
        ["swarmAttack", "tauntVictim"].map(String::from).into()
    );
    let text = emitted(&d.core);
    assert!(text.contains("class Herring$Group extends Fish$Group {"));
    assert!(text.contains("super(delegate);"));
}

#[test]
fn group_size_replaces_delegated_size() {
    let d = desugar(&compile_ok("class Fish { @group int size() { return 3; } }")).unwrap();
    let t = &d.core.table;
    let w = t.lookup_class("Fish$Group").unwrap();
    assert_eq!(
        selectors(t, w),
        ["add", "get", "isEmpty", "size"].map(String::from).into()
    );
}

#[test]
fn stripping_removes_exactly_the_group_methods() {
    let tp = compile_ok(SEA);
    let plans = plan_wrappers(&tp.table);
    let mut t = tp.table.clone();
    strip_group_methods(&mut t, &plans);
    let c = |n| t.lookup_class(n).unwrap();
    assert_eq!(selectors(&t, c("Fish")), ["attack".to_string()].into());
    assert!(selectors(&t, c("Herring")).is_empty());
    assert_eq!(selectors(&t, c("Creature")), selectors(&tp.table, c("Creature")));
}

#[test]
fn call_sites_are_wrapped_by_the_nearest_plan() {
    let src = sea_with(
        "Collection<Fish> swarm = new Collection<Fish>();\n\
         Collection<Herring> herrings = new Collection<Herring>();\n\
         Shark shark = new Shark();\n\
         swarm.swarmAttack(shark);\n\
         herrings.swarmAttack(shark);",
    );
    let text = emitted(&desugar(&compile_ok(&src)).unwrap().core);
    assert!(text.contains("new Fish$Group(swarm).swarmAttack(shark);"));
    assert!(text.contains("new Herring$Group(herrings).swarmAttack(shark);"));

    let text = emitted(&desugar(&compile_dir(&corpus("nearest_plan"))).unwrap().core);
    assert!(text.contains("new Animal$Group(whales).count()"));
    assert!(text.contains("new Orca$Group(orcas).count()"));
    assert!(text.contains("new Animal$Group(mammals).count()"));
}

#[test]
fn programs_without_groups_only_lose_annotations() {
    for name in ["plain_oo", "static_recursion"] {
        let tp = compile_dir(&corpus(name));
        let plain = EmitConfig {
            include_group_annotations: false,
            ..EmitConfig::default()
        };
        let before = emit(&tp.program, &plain);
        assert_eq!(emitted(&desugar(&tp).unwrap().core), before, "{name}");
    }
}

#[test]
fn distribution_holds_over_the_corpus() {
    for dir in corpus_dirs() {
        let tp = compile_dir(&dir);
        let d = desugar(&tp).unwrap();
        let (src, core) = (&tp.table, &d.core.table);
        for plan in &d.plans {
            let e = plan.element;
            let name = src.name(e);
            let groups: BTreeSet<String> = src.class(e).group_methods.keys().cloned().collect();
            let instance: BTreeSet<String> = src.class(e).instance_methods.keys().cloned().collect();
            let ce = core.lookup_class(name).unwrap();
            assert_eq!(selectors(core, ce), instance, "{name}");
            let w = core.lookup_class(&plan.wrapper_name).unwrap();
            let ws = selectors(core, w);
            assert!(ws.is_superset(&groups), "{name}");
            let extra: BTreeSet<String> = ws
                .difference(&groups)
                .filter(|s| !s.contains('$'))
                .cloned()
                .collect();
            let want: BTreeSet<String> = if plan.is_root() {
                Builtin::ALL
                    .iter()
                    .map(|b| b.selector().to_string())
                    .filter(|s| !groups.contains(s))
                    .collect()
            } else {
                BTreeSet::new()
            };
            assert_eq!(extra, want, "{}", plan.wrapper_name);
        }
    }
}

#[test]
fn wrapper_inheritance_parallels_element_inheritance() {
    for dir in corpus_dirs() {
        let tp = compile_dir(&dir);
        let d = desugar(&tp).unwrap();
        for a in &d.plans {
            for b in &d.plans {
                let wa = d.core.table.lookup_class(&a.wrapper_name).unwrap();
                let wb = d.core.table.lookup_class(&b.wrapper_name).unwrap();
                assert_eq!(
                    tp.table.is_subclass(a.element, b.element),
                    d.core.table.is_subclass(wa, wb),
                    "{} vs {}",
                    a.wrapper_name,
                    b.wrapper_name
                );
            }
        }
    }
}

#[test]
fn emitted_core_reparses_and_attributes_cleanly() {
    for dir in corpus_dirs() {
        let text = emitted(&desugar(&compile_dir(&dir)).unwrap().core);
        let program = parse_sources(&single(&text)).unwrap();
        assert!(reattribute(program).is_ok(), "{}", dir.display());
        assert!(swarmc::compile(&single(&text), Dialect::Core).is_ok());
    }
}

#[test]
fn desugaring_core_code_is_the_identity() {
    for dir in corpus_dirs() {
        let text = emitted(&desugar(&compile_dir(&dir)).unwrap().core);
        let core = swarmc::compile(&single(&text), Dialect::Core).unwrap();
        let again = desugar(&core).unwrap();
        assert!(again.plans.is_empty());
        assert_eq!(again.core.program.normalized(), core.program.normalized());
        assert_eq!(emitted(&again.core), text);
    }
}

#[test]
fn desugaring_is_deterministic() {
    for dir in corpus_dirs() {
        let tp = compile_dir(&dir);
        assert_eq!(emitted(&desugar(&tp).unwrap().core), emitted(&desugar(&tp).unwrap().core));
    }
}
