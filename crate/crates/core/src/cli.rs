//! The `swarmc` command line.
//!
//! Exit codes: 0 success, 1 compile diagnostics, 2 runtime error, 3
//! crosscheck mismatch, 64 usage error, 66 unreadable input, 73 unwritable
//! output.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use similar::TextDiff;

use crate::desugar::{self, reattribute};
use crate::emitter::{emit_unit, EmitConfig};
use crate::frontend::ast::Program;
use crate::frontend::Dialect;
use crate::runtime::{self, Policy, RunConfig, RunOutcome};
use crate::source::{Diagnostic, SourceMap, SourceUnit};
use crate::typing::TypedProgram;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    Diagnostics = 1,
    Runtime = 2,
    Mismatch = 3,
    Usage = 64,
    NoInput = 66,
    CantCreate = 73,
}

#[derive(Parser, Debug)]
#[command(name = "swarmc", version, about = "SwarmLang compiler and interpreter")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and type-check the given files.
    Check {
        /// Treat the input as core code (no group features).
        #[arg(long)]
        core: bool,
        /// Print the wrapper classes the program would get.
        #[arg(long)]
        emit_groups: bool,
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Lower group methods and write `<name>.core.swarm` files.
    Desugar {
        #[arg(long)]
        core: bool,
        #[arg(short = 'o', long = "out", required = true)]
        out: PathBuf,
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Interpret the program.
    Run {
        #[arg(long)]
        core: bool,
        #[arg(long, value_enum, default_value_t = PolicyArg::Static)]
        policy: PolicyArg,
        /// Entry point as `Class.method`.
        #[arg(long)]
        entry: Option<String>,
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Run directly and after desugaring; compare the results.
    Crosscheck {
        #[arg(long)]
        entry: Option<String>,
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum PolicyArg {
    Static,
    Dynamic,
}

/// Parses `args` (including the program name) and runs the command.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    Exit::Ok as i32
                }
                _ => {
                    let _ = write!(err, "{text}");
                    Exit::Usage as i32
                }
            };
        }
    };
    let exit = match cli.command {
        Command::Check {
            core,
            emit_groups,
            files,
        } => check(&files, dialect(core), emit_groups, out, err),
        Command::Desugar { core, out: dir, files } => desugar_files(&files, dialect(core), &dir, err),
        Command::Run {
            core,
            policy,
            entry,
            files,
        } => {
            let policy = match policy {
                PolicyArg::Static => Policy::Static,
                PolicyArg::Dynamic => Policy::Dynamic,
            };
            match run_config(policy, entry.as_deref(), err) {
                Ok(cfg) => run(&files, dialect(core), &cfg, out, err),
                Err(e) => e,
            }
        }
        Command::Crosscheck { entry, files } => match run_config(Policy::Static, entry.as_deref(), err)
        {
            Ok(cfg) => crosscheck_with(&files, &cfg, &|_| {}, out, err),
            Err(e) => e,
        },
    };
    exit as i32
}

fn dialect(core: bool) -> Dialect {
    if core {
        Dialect::Core
    } else {
        Dialect::Swarm
    }
}

fn run_config(policy: Policy, entry: Option<&str>, err: &mut dyn Write) -> Result<RunConfig, Exit> {
    let mut cfg = RunConfig {
        policy,
        ..RunConfig::default()
    };
    if let Some(entry) = entry {
        match entry.split_once('.') {
            Some((c, m)) if !c.is_empty() && !m.is_empty() && !m.contains('.') => {
                cfg.entry_class = Some(c.to_string());
                cfg.entry_method = m.to_string();
            }
            _ => {
                let _ = writeln!(err, "error: --entry expects `Class.method`, got `{entry}`");
                return Err(Exit::Usage);
            }
        }
    }
    Ok(cfg)
}

/// Reads every input file into a source map.
pub fn load(files: &[PathBuf], err: &mut dyn Write) -> Result<SourceMap, Exit> {
    let mut map = SourceMap::new();
    for path in files {
        match fs::read_to_string(path) {
            Ok(text) => {
                map.add(SourceUnit::new(path.clone(), text));
            }
            Err(e) => {
                let _ = writeln!(err, "error: cannot read {}: {e}", path.display());
                return Err(Exit::NoInput);
            }
        }
    }
    Ok(map)
}

fn report(diags: &[Diagnostic], sources: &SourceMap, err: &mut dyn Write) -> Exit {
    for d in diags {
        let _ = writeln!(err, "{}", d.render(sources));
    }
    Exit::Diagnostics
}

fn compile(
    files: &[PathBuf],
    dialect: Dialect,
    err: &mut dyn Write,
) -> Result<(SourceMap, TypedProgram), Exit> {
    let sources = load(files, err)?;
    match crate::compile(&sources, dialect) {
        Ok(tp) => Ok((sources, tp)),
        Err(diags) => Err(report(&diags, &sources, err)),
    }
}

pub fn check(
    files: &[PathBuf],
    dialect: Dialect,
    emit_groups: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Exit {
    let tp = match compile(files, dialect, err) {
        Ok((_, tp)) => tp,
        Err(e) => return e,
    };
    if emit_groups {
        let table = &tp.table;
        for plan in desugar::plan_wrappers(table) {
            let sup = plan
                .super_wrapper
                .map(|s| crate::symbols::wrapper_name(table.name(s)))
                .unwrap_or_else(|| "Object".into());
            let moved: Vec<&str> = plan
                .moved
                .iter()
                .map(|&m| table.method(m).selector.as_str())
                .collect();
            let delegated: Vec<&str> = if plan.is_root() {
                plan.delegation.iter().map(|b| b.selector()).collect()
            } else {
                Vec::new()
            };
            let _ = writeln!(
                out,
                "{} extends {sup}: group [{}] delegation [{}]",
                plan.wrapper_name,
                moved.join(", "),
                delegated.join(", ")
            );
        }
    }
    Exit::Ok
}

/// Output path for `input` inside `dir`: same stem, `.core.swarm` suffix.
/// An input that is already `x.core.swarm` maps to the same name.
pub fn core_path(dir: &Path, input: &Path) -> PathBuf {
    let stem = input
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".into());
    let stem = stem.strip_suffix(".core").unwrap_or(&stem);
    dir.join(format!("{stem}.core.swarm"))
}

pub fn desugar_files(files: &[PathBuf], dialect: Dialect, dir: &Path, err: &mut dyn Write) -> Exit {
    let (sources, tp) = match compile(files, dialect, err) {
        Ok(x) => x,
        Err(e) => return e,
    };
    let lowered = match desugar::desugar(&tp) {
        Ok(d) => d,
        Err(diags) => return report(&diags, &sources, err),
    };
    if let Err(e) = fs::create_dir_all(dir) {
        let _ = writeln!(err, "error: cannot create {}: {e}", dir.display());
        return Exit::CantCreate;
    }
    let cfg = EmitConfig::default();
    for unit in &lowered.core.program.units {
        let path = core_path(dir, sources.path(unit.file));
        if let Err(e) = fs::write(&path, emit_unit(unit, &cfg)) {
            let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
            return Exit::CantCreate;
        }
    }
    Exit::Ok
}

fn execute(
    tp: &TypedProgram,
    sources: &SourceMap,
    cfg: &RunConfig,
    err: &mut dyn Write,
) -> Result<RunOutcome, Exit> {
    runtime::run(tp, cfg).map_err(|d| report(&[d], sources, err))
}

pub fn run(
    files: &[PathBuf],
    dialect: Dialect,
    cfg: &RunConfig,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Exit {
    let (sources, tp) = match compile(files, dialect, err) {
        Ok(x) => x,
        Err(e) => return e,
    };
    let outcome = match execute(&tp, &sources, cfg, err) {
        Ok(o) => o,
        Err(e) => return e,
    };
    let _ = out.write_all(outcome.stdout.as_bytes());
    match outcome.result {
        Ok(()) => Exit::Ok,
        Err(e) => {
            let _ = writeln!(err, "runtime error: {}", e.message);
            Exit::Runtime
        }
    }
}

/// Program output followed by a line recording whether the run completed.
/// Error messages are left out: a null receiver, for instance, fails inside
/// the wrapper constructor after desugaring rather than at the call.
fn transcript(o: &RunOutcome) -> String {
    let status = match o.result {
        Ok(()) => "completed",
        Err(_) => "runtime error",
    };
    format!("{}-- {status}\n", o.stdout)
}

/// Crosscheck with a hook that may alter the lowered program before it runs.
pub fn crosscheck_with(
    files: &[PathBuf],
    cfg: &RunConfig,
    mutate: &dyn Fn(&mut Program),
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Exit {
    let (sources, tp) = match compile(files, Dialect::Swarm, err) {
        Ok(x) => x,
        Err(e) => return e,
    };
    let cfg = RunConfig {
        policy: Policy::Static,
        ..cfg.clone()
    };
    let direct = match execute(&tp, &sources, &cfg, err) {
        Ok(o) => o,
        Err(e) => return e,
    };
    let mut lowered = match desugar::desugar(&tp) {
        Ok(d) => d.core.program,
        Err(diags) => return report(&diags, &sources, err),
    };
    mutate(&mut lowered);
    let core = match reattribute(lowered) {
        Ok(c) => c,
        Err(diags) => return report(&diags, &sources, err),
    };
    let via_core = match execute(&core, &sources, &cfg, err) {
        Ok(o) => o,
        Err(e) => return e,
    };
    let (a, b) = (transcript(&direct), transcript(&via_core));
    if a == b {
        let _ = writeln!(out, "crosscheck passed");
        Exit::Ok
    } else {
        let diff = TextDiff::from_lines(&a, &b);
        let _ = write!(
            out,
            "{}",
            diff.unified_diff().header("direct", "desugared")
        );
        Exit::Mismatch
    }
}
