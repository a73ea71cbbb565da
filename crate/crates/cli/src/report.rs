//! Line-oriented `key: value` reports and the exit-code taxonomy.

use std::fmt::{self, Display};

use nlbox_core::compile::CompileError;
use nlbox_core::gf2::{EpsRankError, TableError};
use nlbox_core::library::LibraryError;
use nlbox_core::protocol::{AuditError, ExecError, FormatError, Violation};
use sha2::{Digest, Sha256};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Validation(String),
    Audit(String),
    Limit(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Audit(_) => 3,
            CliError::Limit(_) => 4,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Validation(_) => "validation",
            CliError::Audit(_) => "audit",
            CliError::Limit(_) => "limit",
        }
    }
}

impl Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (CliError::Usage(m)
        | CliError::Validation(m)
        | CliError::Audit(m)
        | CliError::Limit(m)) = self;
        write!(f, "{} error: {m}", self.kind())
    }
}

pub type CliResult<T> = Result<T, CliError>;

impl From<ExecError> for CliError {
    fn from(e: ExecError) -> Self {
        match e {
            ExecError::Limit { .. } => CliError::Limit(e.to_string()),
            ExecError::Domain { .. } => CliError::Usage(e.to_string()),
            ExecError::Invalid(_) => CliError::Validation(e.to_string()),
        }
    }
}

impl From<CompileError> for CliError {
    fn from(e: CompileError) -> Self {
        match e {
            CompileError::TooLarge { .. } => CliError::Limit(e.to_string()),
            CompileError::NotPrivate(_) => CliError::Audit(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<AuditError> for CliError {
    fn from(e: AuditError) -> Self {
        match e {
            AuditError::Exec(e) => e.into(),
            AuditError::WrongKind(_) => CliError::Validation(e.to_string()),
            _ => CliError::Audit(e.to_string()),
        }
    }
}

impl From<EpsRankError> for CliError {
    fn from(e: EpsRankError) -> Self {
        match e {
            EpsRankError::DimensionLimit { .. } => CliError::Limit(e.to_string()),
            EpsRankError::InvalidEps => CliError::Usage(e.to_string()),
            EpsRankError::InvalidEntry { .. } => CliError::Validation(e.to_string()),
        }
    }
}

impl From<TableError> for CliError {
    fn from(e: TableError) -> Self {
        CliError::Validation(format!("truth table: {e}"))
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        CliError::Validation(format!("protocol file: {e}"))
    }
}

impl From<LibraryError> for CliError {
    fn from(e: LibraryError) -> Self {
        match e {
            LibraryError::Size { .. } => CliError::Limit(e.to_string()),
            LibraryError::Probability(_) => CliError::Usage(e.to_string()),
        }
    }
}

pub fn violations(v: Vec<Violation>) -> CliError {
    CliError::Validation(
        v.iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join("; "),
    )
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Ordered `key: value` lines. Keys appear in insertion order, which is
/// fixed per command, so identical runs print identical bytes.
#[derive(Debug, Default)]
pub struct Report {
    lines: Vec<(String, String)>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        let mut r = Report::default();
        r.put("command", command);
        r
    }

    pub fn put(&mut self, key: impl Into<String>, value: impl Display) -> &mut Self {
        self.lines.push((key.into(), value.to_string()));
        self
    }

    pub fn render(&self, prefix: &str) -> String {
        let mut s = String::new();
        for (k, v) in &self.lines {
            s.push_str(prefix);
            s.push_str(k);
            s.push_str(": ");
            s.push_str(v);
            s.push('\n');
        }
        s
    }
}
