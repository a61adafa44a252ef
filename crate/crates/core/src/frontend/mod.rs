//! MiniOO front end: source files in, checked [`Program`] out.

pub mod ast;
mod check;
mod entities;
pub mod lexer;
mod parser;
pub mod printer;

use std::fmt;
use std::path::Path;

use thiserror::Error;

pub use ast::{Program, Span};
pub use entities::{extract_entities, visit_calls, CallSite};
pub use printer::print_program;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub file: String,
    pub span: Span,
    pub message: String,
}

impl Diagnostic {
    pub fn new(file: &str, span: Span, message: impl Into<String>) -> Self {
        Diagnostic {
            file: file.to_string(),
            span,
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.file, self.span, self.message)
    }
}

#[derive(Debug, Error)]
pub enum FrontendError {
    #[error("{} syntax error(s):\n{}", .0.len(), join(.0))]
    Syntax(Vec<Diagnostic>),
    #[error("{} semantic error(s):\n{}", .0.len(), join(.0))]
    Semantic(Vec<Diagnostic>),
    #[error("cannot read snapshot: {0}")]
    Io(#[from] std::io::Error),
}

impl FrontendError {
    pub fn diagnostics(&self) -> &[Diagnostic] {
        match self {
            FrontendError::Syntax(d) | FrontendError::Semantic(d) => d,
            FrontendError::Io(_) => &[],
        }
    }
}

fn join(diags: &[Diagnostic]) -> String {
    diags
        .iter()
        .map(|d| format!("  {d}"))
        .collect::<Vec<_>>()
        .join("\n")
}

/// A checked program together with the non-fatal diagnostics found on the way.
#[derive(Debug, Clone)]
pub struct Snapshot {
    pub program: Program,
    pub warnings: Vec<Diagnostic>,
}

/// Parses and checks a set of `(file name, source)` pairs. Files are processed
/// in name order, so the result does not depend on the order given.
pub fn parse_snapshot<N, S>(files: &[(N, S)]) -> Result<Snapshot, FrontendError>
where
    N: AsRef<str>,
    S: AsRef<str>,
{
    let mut ordered: Vec<(&str, &str)> = files.iter().map(|(n, s)| (n.as_ref(), s.as_ref())).collect();
    ordered.sort_by(|a, b| a.0.cmp(b.0));
    let mut next_id = 0;
    let mut classes = Vec::new();
    let mut syntax = Vec::new();
    for (name, src) in ordered {
        let (mut cs, errs) = parser::parse_file(name, src, &mut next_id);
        classes.append(&mut cs);
        syntax.extend(errs);
    }
    if !syntax.is_empty() {
        return Err(FrontendError::Syntax(syntax));
    }
    let mut program = Program { classes };
    let out = check::check_program(&mut program);
    if !out.errors.is_empty() {
        return Err(FrontendError::Semantic(out.errors));
    }
    Ok(Snapshot {
        program,
        warnings: out.warnings,
    })
}

/// Parses a single in-memory source text.
pub fn parse_source(src: &str) -> Result<Snapshot, FrontendError> {
    parse_snapshot(&[("input.moo", src)])
}

/// Reads every `.moo` file directly inside `dir`.
pub fn load_snapshot_dir(dir: &Path) -> Result<Snapshot, FrontendError> {
    let mut files = Vec::new();
    for entry in std::fs::read_dir(dir)? {
        let path = entry?.path();
        if path.is_file() && path.extension().is_some_and(|e| e == "moo") {
            let name = path
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_default();
            files.push((name, std::fs::read_to_string(&path)?));
        }
    }
    parse_snapshot(&files)
}

/// Re-checks a program built or edited in memory.
pub fn recheck(program: &Program) -> Result<Snapshot, FrontendError> {
    let mut program = program.clone();
    let out = check::check_program(&mut program);
    if !out.errors.is_empty() {
        return Err(FrontendError::Semantic(out.errors));
    }
    Ok(Snapshot {
        program,
        warnings: out.warnings,
    })
}
