//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails or runs over its time budget.

mod common;

use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::time::{Duration, Instant};

use common::hierarchy::Hierarchy;
use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use swarmc::cli::{main_with, Exit};
use swarmc::desugar::desugar;
use swarmc::emitter::{emit, EmitConfig};
use swarmc::runtime::{self, DispatchTarget, Policy, RunConfig};
use swarmc::source::Code;
use swarmc::symbols::ClassId;
use swarmc::typing::lookup::least_upper_bound;

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check, Duration);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn cli(args: &[String]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let mut argv = vec!["swarmc".to_string()];
    argv.extend_from_slice(args);
    let code = main_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn args(cmd: &[&str], dir: &Path) -> Vec<String> {
    cmd.iter()
        .map(|s| s.to_string())
        .chain(swarm_files(dir).into_iter().map(|p| p.to_string_lossy().into_owned()))
        .collect()
}

fn example_fight_reproduction() -> Check {
    let (code, out, err) = cli(&args(&["run"], &corpus("example_fight")));
    ensure!(code == 0, "exit {code}: {err}");
    let want = "Shark alive with 100 hitpoints.\nShark defeated with -9900 hitpoints.\n";
    ensure!(out == want, "stdout was {out:?}");
    Ok(())
}

fn transformation_shape() -> Check {
    let dir = tempfile::tempdir().unwrap();
    let mut a = args(&["desugar"], &corpus("fish_listing"));
    a.extend(["-o".to_string(), dir.path().to_string_lossy().into_owned()]);
    let (code, _, err) = cli(&a);
    ensure!(code == 0, "exit {code}: {err}");
    let got = fs::read_to_string(dir.path().join("Fish.core.swarm")).unwrap();
    let golden = fs::read_to_string(
        Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/fish_listing.Fish.core.swarm"),
    )
    .unwrap();
    ensure!(got == golden, "desugared Fish differs from the golden file:\n{got}");
    // The structure the golden file pins down, spelled out.
    let wrapper = got
        .split("class Fish$Group {")
        .nth(1)
        .ok_or("no top-level class Fish$Group")?;
    for needle in [
        "    Collection<? extends Fish> delegate;\n",
        "    Fish$Group(Collection<? extends Fish> delegate) {\n        this.delegate = delegate;",
        "    void swarmAttack(Creature creature) {\n        int swarmSize = this.size();\n        creature.damage(swarmSize * swarmSize);\n    }",
        "    boolean add(Fish param0) {\n        return this.delegate.add(param0);\n    }",
        "    int size() {\n        return this.delegate.size();\n    }",
        "    boolean isEmpty() {\n        return this.delegate.isEmpty();\n    }",
        "    Fish get(int param0) {\n        return this.delegate.get(param0);\n    }",
    ] {
        ensure!(wrapper.contains(needle), "Fish$Group lacks {needle:?}");
    }
    let fish = got.split("class Fish$Group").next().unwrap();
    ensure!(!fish.contains("swarmAttack"), "swarmAttack was not moved out of Fish");
    Ok(())
}

fn inheritance_parallelism() -> Check {
    let dir = corpus("herring");
    let tp = compile_dir(&dir);
    let lowered = desugar(&tp).map_err(|d| format!("{d:?}"))?;
    let text = emit(&lowered.core.program, &EmitConfig::default());
    ensure!(
        text.contains("class Herring$Group extends Fish$Group {"),
        "Herring$Group does not extend Fish$Group"
    );
    let direct = run_tp(&tp, &RunConfig::default());
    let via_core = run_tp(&lowered.core, &RunConfig::default());
    let lines: Vec<&str> = direct.stdout.lines().collect();
    ensure!(
        lines[..3] == ["fish formula for 4", "taunt from 4 herrings", "shark at 84"],
        "unexpected order: {lines:?}"
    );
    ensure!(direct.stdout == via_core.stdout, "desugared run differs");
    // Dispatch trace of the herring call: Herring.swarmAttack, the Fish
    // formula's size(), then tauntVictim.
    let t = &tp.table;
    let group_events: Vec<String> = direct
        .trace
        .iter()
        .filter(|e| e.selector != "add")
        .map(|e| match e.target {
            DispatchTarget::Method { defining, .. } => format!("{}.{}", t.name(defining), e.selector),
            DispatchTarget::Builtin(b) => b.selector().to_string(),
        })
        .take(4)
        .collect();
    ensure!(
        group_events == ["Herring.swarmAttack", "size", "Herring.tauntVictim", "size"],
        "trace was {group_events:?}"
    );
    Ok(())
}

fn lookup_conformance() -> Check {
    let main = "Shark shark = new Shark();\n\
                Collection<Fish> swarm = new Collection<Fish>();\n\
                for (int n = 0; n < 3; n = n + 1) swarm.add(new Herring());\n\
                swarm.swarmAttack(shark);\n\
                print(shark.hitpoints);";
    let tp = compile_ok(&sea_with(main));
    let dynamic = run_tp(
        &tp,
        &RunConfig {
            policy: Policy::Dynamic,
            ..RunConfig::default()
        },
    );
    ensure!(dynamic.stdout == "taunt\n91\n", "dynamic run printed {:?}", dynamic.stdout);
    let herring = tp.table.lookup_class("Herring").unwrap();
    let attack = dynamic.trace.iter().find(|e| e.selector == "swarmAttack").unwrap();
    ensure!(
        matches!(attack.target, DispatchTarget::Method { defining, .. } if defining == herring),
        "dynamic swarmAttack resolved to {:?}",
        attack.target
    );
    let statically = run_tp(&tp, &RunConfig::default());
    ensure!(statically.stdout == "91\n", "static run printed {:?}", statically.stdout);

    let taunt = sea_with(
        "Collection<Fish> swarm = new Collection<Fish>();\n\
         swarm.add(new Herring());\n\
         swarm.tauntVictim();",
    );
    let d = compile_src(&taunt).err().ok_or("tauntVictim on Collection<Fish> compiled")?;
    ensure!(d.iter().map(|d| d.code).collect::<Vec<_>>() == [Code::E021], "got {d:?}");

    // Both policies agree on every homogeneous group dispatch in the corpus,
    // up to the first dispatch where the receiver is not homogeneous.
    let mut compared = 0;
    for dir in corpus_dirs() {
        let tp = compile_dir(&dir);
        let s = run_tp(&tp, &RunConfig::default());
        let d = run_tp(
            &tp,
            &RunConfig {
                policy: Policy::Dynamic,
                ..RunConfig::default()
            },
        );
        for (a, b) in s.trace.iter().zip(&d.trace) {
            let is_group = matches!(a.target, DispatchTarget::Method { .. });
            if is_group && !a.homogeneous {
                break;
            }
            ensure!(
                a.target == b.target,
                "{}: {} dispatched to {:?} statically, {:?} dynamically",
                dir.display(),
                a.selector,
                a.target,
                b.target
            );
            compared += is_group as usize;
        }
    }
    ensure!(compared > 20, "only {compared} homogeneous group dispatches compared");
    Ok(())
}

fn empty_collection() -> Check {
    let dir = corpus("empty_swarm");
    let (code, out, err) = cli(&args(&["run", "--policy", "dynamic"], &dir));
    ensure!(code == Exit::Runtime as i32, "dynamic exit {code}");
    ensure!(out.is_empty(), "dynamic stdout {out:?}");
    ensure!(
        err == "runtime error: group lookup on empty collection\n",
        "dynamic stderr {err:?}"
    );
    let (code, out, err) = cli(&args(&["run", "--policy", "static"], &dir));
    ensure!(code == 0, "static exit {code}: {err}");
    ensure!(out == "target has 10\n", "static stdout {out:?}");
    ensure!(err.is_empty(), "static stderr {err:?}");
    Ok(())
}

fn lub_oracle() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut cases = 0;
    for _ in 0..500 {
        let h = Hierarchy::random(&mut rng, 50, 6);
        ensure!((0..h.len()).all(|i| h.depth(i) <= 6), "generator exceeded depth 6");
        let tp = compile_src(&h.source()).map_err(|d| format!("{d:?}"))?;
        let t = &tp.table;
        let id: Vec<ClassId> = (0..h.len())
            .map(|i| t.lookup_class(&Hierarchy::name(i)).unwrap())
            .collect();
        for _ in 0..20 {
            let k = rng.gen_range(1..=h.len().min(10));
            let subset: Vec<usize> = (0..k).map(|_| rng.gen_range(0..h.len())).collect();
            let classes: Vec<ClassId> = subset.iter().map(|&i| id[i]).collect();
            let got = least_upper_bound(t, &classes);
            let want = h.oracle_lub(&subset).map_or(ClassId::OBJECT, |i| id[i]);
            ensure!(got == Some(want), "hierarchy {:?}, subset {subset:?}", h.parents);
            cases += 1;
        }
    }
    ensure!(cases == 10_000, "ran {cases} cases");
    Ok(())
}

fn master_equivalence() -> Check {
    let dirs = corpus_dirs();
    ensure!(dirs.len() >= 15, "corpus has {} programs", dirs.len());
    for required in [
        "idiom_subclass",
        "idiom_reopen",
        "idiom_helper",
        "shadowing",
        "escape_builtin",
        "escape_pinned",
        "group_super_chain",
    ] {
        ensure!(dirs.iter().any(|d| d.ends_with(required)), "corpus lacks {required}");
    }
    for dir in &dirs {
        let (code, out, err) = cli(&args(&["crosscheck"], dir));
        ensure!(code == 0, "{}: exit {code}\n{out}{err}", dir.display());
        // The corpus also pins the direct output.
        let expected = fs::read_to_string(dir.join("expected.stdout")).unwrap();
        let o = runtime::run(&compile_dir(dir), &RunConfig::default()).unwrap();
        ensure!(o.stdout == expected, "{}: stdout {:?}", dir.display(), o.stdout);
    }
    Ok(())
}

fn damage_law() -> Check {
    // One program, a fresh swarm and a fresh target for every n.
    let tp = compile_ok(&sea_with(
        "for (int n = 0; n <= 1000; n = n + 1) {\n\
             Shark shark = new Shark();\n\
             Collection<Fish> swarm = new Collection<Fish>();\n\
             for (int k = 0; k < n; k = k + 1) swarm.add(new Fish());\n\
             swarm.swarmAttack(shark);\n\
             print(100 - shark.hitpoints);\n\
         }",
    ));
    let o = run_tp(&tp, &RunConfig::default());
    ensure!(o.result.is_ok(), "{:?}", o.result);
    let lines: Vec<&str> = o.stdout.lines().collect();
    ensure!(lines.len() == 1001, "{} results", lines.len());
    for (n, line) in lines.iter().enumerate() {
        ensure!(*line == (n * n).to_string(), "n = {n}: damage {line}");
    }
    Ok(())
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 example fight reproduction", example_fight_reproduction, Duration::from_secs(1)),
        ("2 transformation shape", transformation_shape, Duration::MAX),
        ("3 inheritance parallelism", inheritance_parallelism, Duration::MAX),
        ("4 lookup-procedure conformance", lookup_conformance, Duration::MAX),
        ("5 empty-collection behavior", empty_collection, Duration::MAX),
        ("6 LUB oracle suite", lub_oracle, Duration::from_secs(5)),
        ("7 master equivalence", master_equivalence, Duration::from_secs(5)),
        ("8 damage law", damage_law, Duration::from_secs(5)),
    ];
    let mut failed = 0;
    for (name, check, budget) in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|p| Err(format!("panicked: {:?}", p.downcast_ref::<String>())));
        let took = start.elapsed();
        let result = result.and_then(|()| {
            if took > budget {
                Err(format!("took {took:?}, budget {budget:?}"))
            } else {
                Ok(())
            }
        });
        match result {
            Ok(()) => println!("PASS criterion {name} ({} ms)", took.as_millis()),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name} ({} ms): {why}", took.as_millis());
            }
        }
    }
    if failed > 0 {
        println!("{failed} of 8 acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all 8 acceptance criteria passed");
}
