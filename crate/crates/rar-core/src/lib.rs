//! Core of the RAR toolchain.
//!
//! Everything here is pure: source text goes in, tokens, syntax trees,
//! diagnostics and emitted C++ text come out. The crate also carries the
//! executable Arrayset reference model together with the set oracle used to
//! check it. File access, process spawning and the command line live in the
//! `rar` companion crate.

#![no_std]

extern crate alloc;

pub mod arrayset;
pub mod ast;
pub mod checker;
pub mod emit;
pub mod lexer;
pub mod oracle;
pub mod parser;
pub mod span;

pub use arrayset::Arrayset;
pub use ast::Program;
pub use checker::check_program;
pub use emit::{emit_program, Dialect, EmitOptions};
pub use lexer::tokenize;
pub use parser::parse;
pub use span::{Diagnostic, FileId, Severity, SourceSpan};

/// Tokenizes and parses `source` in one step, folding lexical errors into
/// diagnostics.
pub fn parse_source(source: &str, file: FileId) -> Result<Program, alloc::vec::Vec<Diagnostic>> {
    let tokens = tokenize(source, file).map_err(|e| alloc::vec![e.into_diagnostic()])?;
    parse(&tokens)
}
