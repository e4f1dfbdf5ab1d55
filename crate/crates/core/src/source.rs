//! Source files, spans and diagnostics shared by every compiler phase.

use std::fmt;
use std::path::{Path, PathBuf};

/// Index of a file inside a [`SourceMap`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FileId(pub u32);

/// A region of source text. Lines and columns are 1-based; `end_col` points
/// one past the last character of the region.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Span {
    pub file: FileId,
    pub start_line: u32,
    pub start_col: u32,
    pub end_line: u32,
    pub end_col: u32,
}

impl Span {
    pub fn new(file: FileId, start: (u32, u32), end: (u32, u32)) -> Self {
        Span {
            file,
            start_line: start.0,
            start_col: start.1,
            end_line: end.0,
            end_col: end.1,
        }
    }

    /// Smallest span covering both `self` and `other`.
    pub fn to(self, other: Span) -> Span {
        let (start_line, start_col) =
            (self.start_line, self.start_col).min((other.start_line, other.start_col));
        let (end_line, end_col) = (self.end_line, self.end_col).max((other.end_line, other.end_col));
        Span {
            file: self.file,
            start_line,
            start_col,
            end_line,
            end_col,
        }
    }

    pub fn is_empty(&self) -> bool {
        (self.start_line, self.start_col) >= (self.end_line, self.end_col)
    }
}

/// One input file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SourceUnit {
    pub path: PathBuf,
    pub text: String,
}

impl SourceUnit {
    pub fn new(path: impl Into<PathBuf>, text: impl Into<String>) -> Self {
        SourceUnit {
            path: path.into(),
            text: text.into(),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct SourceMap {
    units: Vec<SourceUnit>,
}

impl SourceMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, unit: SourceUnit) -> FileId {
        self.units.push(unit);
        FileId(self.units.len() as u32 - 1)
    }

    pub fn get(&self, id: FileId) -> &SourceUnit {
        &self.units[id.0 as usize]
    }

    pub fn path(&self, id: FileId) -> &Path {
        &self.get(id).path
    }

    pub fn iter(&self) -> impl Iterator<Item = (FileId, &SourceUnit)> {
        self.units
            .iter()
            .enumerate()
            .map(|(i, u)| (FileId(i as u32), u))
    }

    pub fn len(&self) -> usize {
        self.units.len()
    }

    pub fn is_empty(&self) -> bool {
        self.units.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Severity::Error => f.write_str("error"),
            Severity::Warning => f.write_str("warning"),
        }
    }
}

/// Diagnostic codes. The numeric ranges follow the phase that reports them:
/// E00x lexing/parsing, E01x enter, E02x/E03x attribution, E04x entry point,
/// E099 internal desugaring failures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Code {
    E001,
    E002,
    E003,
    E005,
    E006,
    E007,
    E010,
    E011,
    E012,
    E013,
    E014,
    E015,
    E016,
    E017,
    E019,
    E020,
    E021,
    E022,
    E023,
    E024,
    E025,
    E026,
    E027,
    E028,
    E029,
    E030,
    E031,
    E032,
    E033,
    E034,
    E040,
    E041,
    E099,
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: Code,
    pub message: String,
    pub span: Span,
}

impl Diagnostic {
    pub fn error(code: Code, span: Span, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Error,
            code,
            message: message.into(),
            span,
        }
    }

    /// Renders as `path:line:col: error[E0xx]: message`. Diagnostics without
    /// a source position (line 0) omit the location.
    pub fn render(&self, sources: &SourceMap) -> String {
        if self.span.start_line == 0 || self.span.file.0 as usize >= sources.len() {
            return format!("{}[{}]: {}", self.severity, self.code, self.message);
        }
        format!(
            "{}:{}:{}: {}[{}]: {}",
            sources.path(self.span.file).display(),
            self.span.start_line,
            self.span.start_col,
            self.severity,
            self.code,
            self.message
        )
    }
}

/// Sorts diagnostics by position so output is stable across runs.
pub fn sort_diagnostics(diags: &mut [Diagnostic]) {
    diags.sort_by(|a, b| {
        (a.span.file, a.span.start_line, a.span.start_col, a.code)
            .cmp(&(b.span.file, b.span.start_line, b.span.start_col, b.code))
    });
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_uses_path_line_col() {
        let mut map = SourceMap::new();
        let id = map.add(SourceUnit::new("fish.swarm", "class Fish {}"));
        let d = Diagnostic::error(Code::E021, Span::new(id, (3, 7), (3, 12)), "no group method");
        assert_eq!(d.render(&map), "fish.swarm:3:7: error[E021]: no group method");
    }

    #[test]
    fn span_union() {
        let f = FileId(0);
        let a = Span::new(f, (1, 5), (1, 9));
        let b = Span::new(f, (2, 1), (2, 3));
        assert_eq!(a.to(b), Span::new(f, (1, 5), (2, 3)));
        assert_eq!(b.to(a), Span::new(f, (1, 5), (2, 3)));
    }
}
