//! Reading RAR sources from disk.

use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use rar_core::{check_program, parse_source, Diagnostic, FileId, Program};

/// A source file held in memory together with the path it was read from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceFile {
    pub path: PathBuf,
    pub id: FileId,
    pub text: String,
}

impl SourceFile {
    pub fn read(path: impl AsRef<Path>, id: FileId) -> Result<SourceFile, LoadError> {
        let path = path.as_ref();
        let io_err = |source| LoadError::Io {
            path: path.to_path_buf(),
            source,
        };
        // `read_to_string` on a directory fails on some platforms only at the
        // first read, with an unhelpful message; say what is wrong up front.
        if fs::metadata(path).map_err(io_err)?.is_dir() {
            return Err(io_err(io::Error::new(
                io::ErrorKind::InvalidInput,
                "is a directory",
            )));
        }
        let text = fs::read_to_string(path).map_err(io_err)?;
        Ok(SourceFile {
            path: path.to_path_buf(),
            id,
            text,
        })
    }

    pub fn parse(&self) -> Result<Program, Vec<Diagnostic>> {
        parse_source(&self.text, self.id)
    }

    /// Syntax diagnostics if the file does not parse, otherwise the subset
    /// checker's findings.
    pub fn diagnostics(&self) -> Vec<Diagnostic> {
        match self.parse() {
            Ok(program) => check_program(&program),
            Err(diags) => diags,
        }
    }
}

#[derive(Debug)]
pub enum LoadError {
    Io {
        path: PathBuf,
        source: io::Error,
    },
    Syntax {
        path: PathBuf,
        diagnostics: Vec<Diagnostic>,
    },
}

impl LoadError {
    pub fn is_io(&self) -> bool {
        matches!(self, LoadError::Io { .. })
    }

    pub fn path(&self) -> &Path {
        match self {
            LoadError::Io { path, .. } | LoadError::Syntax { path, .. } => path,
        }
    }
}

impl fmt::Display for LoadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LoadError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            LoadError::Syntax { path, diagnostics } => {
                write!(
                    f,
                    "{}: {} syntax error(s)",
                    path.display(),
                    diagnostics.len()
                )?;
                if let Some(first) = diagnostics.first() {
                    write!(f, "; first at {}: {}", first.span, first.message)?;
                }
                Ok(())
            }
        }
    }
}

impl std::error::Error for LoadError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            LoadError::Io { source, .. } => Some(source),
            LoadError::Syntax { .. } => None,
        }
    }
}

/// Reads and parses one file.
pub fn parse_file(path: impl AsRef<Path>) -> Result<Program, LoadError> {
    let file = SourceFile::read(path, FileId(0))?;
    file.parse().map_err(|diagnostics| LoadError::Syntax {
        path: file.path.clone(),
        diagnostics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn corpus(name: &str) -> PathBuf {
        Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("../../corpus")
            .join(name)
    }

    #[test]
    fn corpus_file_item_counts() {
        let program = parse_file(corpus("arrayset.rar")).unwrap();
        assert_eq!(program.consts().count(), 1);
        assert_eq!(program.records().count(), 1);
        assert_eq!(program.functions().count(), 7);
    }

    #[test]
    fn missing_and_directory_are_io_errors() {
        let missing = parse_file(corpus("no_such_file.rar")).unwrap_err();
        assert!(missing.is_io());
        assert_eq!(
            match &missing {
                LoadError::Io { source, .. } => source.kind(),
                _ => unreachable!(),
            },
            io::ErrorKind::NotFound
        );
        let dir = parse_file(corpus("neg")).unwrap_err();
        assert!(dir.is_io(), "{dir}");
        assert!(dir.to_string().contains("directory"));
    }

    #[test]
    fn syntax_errors_are_not_io_errors() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(b"fn f() ->").unwrap();
        match parse_file(f.path()).unwrap_err() {
            LoadError::Syntax { diagnostics, .. } => {
                assert!(!diagnostics.is_empty());
                assert_eq!(diagnostics[0].rule_code, "P001");
                assert_eq!(diagnostics[0].span.start(), (1, 10));
            }
            other => panic!("expected syntax error, got {other}"),
        }
    }

    #[test]
    fn invalid_utf8_is_an_io_error() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(&[0x66, 0x6e, 0xff, 0xfe]).unwrap();
        assert!(parse_file(f.path()).unwrap_err().is_io());
    }
}
