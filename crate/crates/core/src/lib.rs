//! SwarmLang compiler and reference interpreter.
//!
//! The pipeline is parse, enter, attribute; programs using group methods can
//! then be lowered to the core dialect with [`desugar`] and printed with
//! [`emitter`], or executed directly with [`runtime`].

pub mod cli;
pub mod desugar;
pub mod emitter;
pub mod frontend;
pub mod runtime;
pub mod source;
pub mod symbols;
pub mod typing;

use frontend::Dialect;
use source::{sort_diagnostics, Diagnostic, SourceMap};
use typing::TypedProgram;

/// Parses, enters and attributes `sources`. Diagnostics come back sorted by
/// position.
pub fn compile(sources: &SourceMap, dialect: Dialect) -> Result<TypedProgram, Vec<Diagnostic>> {
    let sorted = |mut d: Vec<Diagnostic>| {
        sort_diagnostics(&mut d);
        d
    };
    let program = frontend::parse_sources(sources).map_err(sorted)?;
    let dialect_errors = frontend::check_dialect(&program, dialect);
    if !dialect_errors.is_empty() {
        return Err(sorted(dialect_errors));
    }
    let table = symbols::enter(&program, dialect).map_err(sorted)?;
    typing::attribute(program, table, dialect).map_err(sorted)
}
