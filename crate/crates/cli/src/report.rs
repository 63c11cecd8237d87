//! Report envelope, exit codes and plain-text table layout.

use serde::Serialize;
use serde_json::Value;

use regpow_core::Error;

use crate::parse::ParseError;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Exit {
    Success = 0,
    Hypothesis = 1,
    Usage = 2,
    Resource = 3,
}

impl Exit {
    pub fn code(self) -> i32 {
        self as i32
    }
}

/// The JSON document written for a successful command.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub warnings: Vec<String>,
    pub result: Value,
}

/// A finished command: the report, its text rendering and the exit status.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: Report,
    pub text: String,
    pub exit: Exit,
}

impl Outcome {
    pub fn render(&self, json: bool) -> String {
        if json {
            let mut s = serde_json::to_string_pretty(&self.report).expect("reports serialize");
            s.push('\n');
            return s;
        }
        let mut s = self.text.clone();
        for w in &self.report.warnings {
            s.push_str("warning: ");
            s.push_str(w);
            s.push('\n');
        }
        s
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Core(#[from] Error),
    #[error("usage error: {0}")]
    Usage(String),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

impl CliError {
    pub fn exit(&self) -> Exit {
        match self {
            CliError::Parse(_) | CliError::Usage(_) | CliError::Io { .. } => Exit::Usage,
            CliError::Core(e) => match e {
                Error::Arithmetic(_) | Error::Usage(_) => Exit::Usage,
                Error::Dimension { .. } | Error::Geometry { .. } | Error::SelfCheck(_) => Exit::Hypothesis,
                Error::Resource(_) => Exit::Resource,
            },
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Parse(_) => "parse",
            CliError::Usage(_) => "usage",
            CliError::Io { .. } => "io",
            CliError::Core(e) => match e {
                Error::Arithmetic(_) => "arithmetic",
                Error::Usage(_) => "usage",
                Error::Dimension { .. } => "dimension",
                Error::Geometry { .. } => "geometry",
                Error::Resource(_) => "resource",
                Error::SelfCheck(_) => "self_check",
            },
        }
    }

    pub fn witness(&self) -> Option<&str> {
        match self {
            CliError::Core(e) => e.witness(),
            _ => None,
        }
    }

    /// Diagnostic lines for stderr.
    pub fn diagnostic(&self) -> String {
        let mut s = format!("error: {self}\n");
        if let Some(w) = self.witness() {
            s.push_str(&format!("witness: {w}\n"));
        }
        s
    }

    /// The JSON error document written to stdout under `--json`.
    pub fn to_json(&self, command: &str) -> String {
        let mut error = serde_json::json!({
            "kind": self.kind(),
            "message": self.to_string(),
            "exit_code": self.exit().code(),
        });
        if let Some(w) = self.witness() {
            error["witness"] = w.into();
        }
        if let CliError::Parse(p) = self {
            error["line"] = p.line.into();
            error["column"] = p.col.into();
            error["expected"] = p.expected.clone().into();
        }
        let doc = serde_json::json!({ "command": command, "version": VERSION, "error": error });
        let mut s = serde_json::to_string_pretty(&doc).expect("errors serialize");
        s.push('\n');
        s
    }
}

/// Column-aligned text table; numeric columns are right-aligned, the rest left-aligned.
pub fn table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let numeric: Vec<bool> = (0..headers.len())
        .map(|c| rows.iter().all(|r| r[c] == "-" || r[c].parse::<i64>().is_ok()))
        .collect();
    let line = |cells: Vec<&str>| {
        let parts: Vec<String> = cells
            .iter()
            .zip(&widths)
            .zip(&numeric)
            .map(|((c, &w), &num)| if num { format!("{c:>w$}") } else { format!("{c:<w$}") })
            .collect();
        parts.join("  ").trim_end().to_string() + "\n"
    };
    let mut s = line(headers.to_vec());
    for row in rows {
        s += &line(row.iter().map(String::as_str).collect());
    }
    s
}

pub fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(|| "-".to_string(), |x| x.to_string())
}
