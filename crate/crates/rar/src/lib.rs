//! Host side of the RAR toolchain: reading sources from disk, the diagnostic
//! and trace file formats, the property-check drivers with wall-clock timing,
//! the differential harness that compiles emitted C++, and the `rarc`
//! command line.

pub mod cli;
pub mod differential;
pub mod harness;
pub mod report;
pub mod script;
pub mod source;

pub use differential::{run_differential, DiffConfig, DiffError, DiffReport};
pub use harness::{corpus_test, CorpusTestConfig, CorpusTestReport};
pub use script::{format_trace, parse_script, parse_trace, ScriptError};
pub use source::{parse_file, LoadError, SourceFile};
