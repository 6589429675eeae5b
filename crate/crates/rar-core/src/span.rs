//! Source positions and diagnostics.

use alloc::string::String;
use core::fmt;

/// Opaque handle naming the file a span belongs to. The std side keeps the
/// mapping from handles to paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FileId(pub u32);

/// A 1-based, inclusive-start / exclusive-end line and column range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SourceSpan {
    pub file: FileId,
    pub start_line: u32,
    pub start_col: u32,
    pub end_line: u32,
    pub end_col: u32,
}

impl SourceSpan {
    pub fn new(file: FileId, start: (u32, u32), end: (u32, u32)) -> Self {
        debug_assert!(start <= end, "span start after end");
        SourceSpan {
            file,
            start_line: start.0,
            start_col: start.1,
            end_line: end.0,
            end_col: end.1,
        }
    }

    /// Zero-width span at a single position.
    pub fn point(file: FileId, line: u32, col: u32) -> Self {
        Self::new(file, (line, col), (line, col))
    }

    pub fn start(&self) -> (u32, u32) {
        (self.start_line, self.start_col)
    }

    pub fn end(&self) -> (u32, u32) {
        (self.end_line, self.end_col)
    }

    /// Smallest span covering both `self` and `other`.
    pub fn to(self, other: SourceSpan) -> SourceSpan {
        let start = self.start().min(other.start());
        let end = self.end().max(other.end());
        SourceSpan::new(self.file, start, end)
    }

    /// Zero-width span at the end of `self`.
    pub fn end_point(self) -> SourceSpan {
        SourceSpan::point(self.file, self.end_line, self.end_col)
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.start_line, self.start_col)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Error,
    Warning,
}

impl Severity {
    pub fn as_str(self) -> &'static str {
        match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        }
    }
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A rule violation or syntax error tied to a source location.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    /// Code from [`crate::checker::RULES`].
    pub rule_code: &'static str,
    pub message: String,
    pub span: SourceSpan,
}

impl Diagnostic {
    pub fn error(rule_code: &'static str, message: impl Into<String>, span: SourceSpan) -> Self {
        Diagnostic {
            severity: Severity::Error,
            rule_code,
            message: message.into(),
            span,
        }
    }

    pub fn warning(rule_code: &'static str, message: impl Into<String>, span: SourceSpan) -> Self {
        Diagnostic {
            severity: Severity::Warning,
            rule_code,
            message: message.into(),
            span,
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} {}: {}",
            self.span, self.severity, self.rule_code, self.message
        )
    }
}
