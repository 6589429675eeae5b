//! Diagnostic output formats.
//!
//! The line format is `<file>:<line>:<col>: <severity> <rule>: <message>`.
//! The structured format is a JSON array with one object per diagnostic.

use std::path::Path;

use rar_core::checker::lookup_rule;
use rar_core::Diagnostic;
use serde::{Deserialize, Serialize};

pub fn format_diagnostic(path: &Path, d: &Diagnostic) -> String {
    format!(
        "{}:{}:{}: {} {}: {}",
        path.display(),
        d.span.start_line,
        d.span.start_col,
        d.severity,
        d.rule_code,
        d.message
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonDiagnostic {
    pub file: String,
    pub line: u32,
    pub column: u32,
    pub end_line: u32,
    pub end_column: u32,
    pub severity: String,
    pub rule: String,
    pub message: String,
    /// Rule table description; absent only for codes outside the table.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rule_description: Option<String>,
}

impl JsonDiagnostic {
    pub fn new(path: &Path, d: &Diagnostic) -> Self {
        JsonDiagnostic {
            file: path.display().to_string(),
            line: d.span.start_line,
            column: d.span.start_col,
            end_line: d.span.end_line,
            end_column: d.span.end_col,
            severity: d.severity.as_str().to_owned(),
            rule: d.rule_code.to_owned(),
            message: d.message.clone(),
            rule_description: lookup_rule(d.rule_code).map(|r| r.description.to_owned()),
        }
    }
}

/// Serializes `(path, diagnostic)` pairs as a pretty-printed JSON array.
pub fn to_json<'a, I>(diags: I) -> String
where
    I: IntoIterator<Item = (&'a Path, &'a Diagnostic)>,
{
    let items: Vec<JsonDiagnostic> = diags
        .into_iter()
        .map(|(p, d)| JsonDiagnostic::new(p, d))
        .collect();
    serde_json::to_string_pretty(&items).expect("diagnostics serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rar_core::{FileId, SourceSpan};

    fn sample() -> Diagnostic {
        Diagnostic::error(
            "R001",
            "parameter `p` has reference type `&Pair`",
            SourceSpan::new(FileId(0), (11, 15), (11, 20)),
        )
    }

    #[test]
    fn line_format() {
        assert_eq!(
            format_diagnostic(Path::new("neg/R001.rar"), &sample()),
            "neg/R001.rar:11:15: error R001: parameter `p` has reference type `&Pair`"
        );
    }

    #[test]
    fn json_round_trip() {
        let d = sample();
        let text = to_json([(Path::new("a.rar"), &d)]);
        let back: Vec<JsonDiagnostic> = serde_json::from_str(&text).unwrap();
        assert_eq!(back.len(), 1);
        assert_eq!(back[0], JsonDiagnostic::new(Path::new("a.rar"), &d));
        assert_eq!(back[0].rule, "R001");
        assert_eq!((back[0].line, back[0].column), (11, 15));
        assert!(back[0]
            .rule_description
            .as_deref()
            .unwrap()
            .contains("reference"));
        assert_eq!(to_json(std::iter::empty()), "[]");
    }
}
