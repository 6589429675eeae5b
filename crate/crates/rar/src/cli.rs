//! The `rarc` command line.
//!
//! Exit statuses: 0 success, 1 check or verification failure, 2 IO, usage or
//! environment failure.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rar_core::oracle::Reference;
use rar_core::{emit_program, Dialect, EmitOptions, FileId};

use crate::differential::{self, DiffConfig};
use crate::harness::{corpus_test, CorpusTestConfig};
use crate::report::{format_diagnostic, to_json};
use crate::source::SourceFile;

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_ENVIRONMENT: u8 = 2;

/// Overrides the corpus directory used by `difftest`.
pub const CORPUS_ENV: &str = "RAR_CORPUS_DIR";

#[derive(Debug, Parser)]
#[command(
    name = "rarc",
    version,
    about = "Restricted Algorithmic Rust checker and RAC transpiler"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DialectArg {
    Ac,
    Vivado,
    Plain,
}

impl From<DialectArg> for Dialect {
    fn from(d: DialectArg) -> Dialect {
        match d {
            DialectArg::Ac => Dialect::AlgorithmicC,
            DialectArg::Vivado => Dialect::VivadoHLS,
            DialectArg::Plain => Dialect::PlainCxx,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check RAR sources against the subset rules.
    Check {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        /// Print diagnostics as a JSON array.
        #[arg(long)]
        json: bool,
    },
    /// Translate a RAR source file to RAC C++.
    Transpile {
        path: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long, value_enum, default_value_t = DialectArg::Plain)]
        dialect: DialectArg,
    },
    /// Check the Arrayset reference model against the set oracle.
    CorpusTest {
        /// Capacity of the randomized run.
        #[arg(long, default_value_t = 256, value_parser = clap::value_parser!(u64).range(1..=1 << 20))]
        capacity: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Number of randomized sequences.
        #[arg(long, default_value_t = 10_000)]
        iters: u64,
    },
    /// Compile the transpiled corpus and compare its trace to the reference.
    Difftest {
        /// Compiler command, e.g. "g++ -O2". Falls back to $RAR_CC, then PATH.
        #[arg(long)]
        cc: Option<String>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Number of operations.
        #[arg(long, default_value_t = 10_000)]
        iters: usize,
        #[arg(long, default_value_t = 256, value_parser = clap::value_parser!(u64).range(1..=1 << 20))]
        capacity: u64,
    },
}

/// Parses `args` (program name first) and runs the command.
pub fn main_with_args<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli, &mut stdout.lock(), &mut stderr.lock()),
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_ENVIRONMENT
            } else {
                EXIT_OK
            };
            let _ = e.print();
            code
        }
    }
}

pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    match cli.command {
        Command::Check { paths, json } => cmd_check(&paths, json, out, err),
        Command::Transpile {
            path,
            output,
            dialect,
        } => cmd_transpile(&path, &output, dialect.into(), err),
        Command::CorpusTest {
            capacity,
            seed,
            iters,
        } => cmd_corpus_test(capacity as usize, seed, iters, out, err),
        Command::Difftest {
            cc,
            seed,
            iters,
            capacity,
        } => cmd_difftest(cc.as_deref(), seed, iters, capacity as usize, out, err),
    }
}

pub fn cmd_check(paths: &[PathBuf], json: bool, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let mut io_failed = false;
    let mut found = Vec::new();
    for (i, path) in paths.iter().enumerate() {
        match SourceFile::read(path, FileId(i as u32)) {
            Ok(file) => found.extend(file.diagnostics().into_iter().map(|d| (path.as_path(), d))),
            Err(e) => {
                let _ = writeln!(err, "rarc: {e}");
                io_failed = true;
            }
        }
    }
    if json {
        let _ = writeln!(out, "{}", to_json(found.iter().map(|(p, d)| (*p, d))));
    } else {
        for (p, d) in &found {
            let _ = writeln!(out, "{}", format_diagnostic(p, d));
        }
    }
    if io_failed {
        EXIT_ENVIRONMENT
    } else if found.iter().any(|(_, d)| d.is_error()) {
        EXIT_FAILURE
    } else {
        EXIT_OK
    }
}

pub fn cmd_transpile(path: &Path, output: &Path, dialect: Dialect, err: &mut dyn Write) -> u8 {
    let file = match SourceFile::read(path, FileId(0)) {
        Ok(f) => f,
        Err(e) => {
            let _ = writeln!(err, "rarc: {e}");
            return EXIT_ENVIRONMENT;
        }
    };
    let (program, diags) = match file.parse() {
        Ok(p) => {
            let d = rar_core::check_program(&p);
            (Some(p), d)
        }
        Err(d) => (None, d),
    };
    for d in &diags {
        let _ = writeln!(err, "{}", format_diagnostic(path, d));
    }
    let program = match program {
        Some(p) if !diags.iter().any(|d| d.is_error()) => p,
        _ => {
            let _ = writeln!(err, "rarc: {} not written", output.display());
            return EXIT_FAILURE;
        }
    };
    let text = emit_program(&program, &EmitOptions::with_dialect(dialect));
    match fs::write(output, text) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "rarc: {}: {e}", output.display());
            EXIT_ENVIRONMENT
        }
    }
}

pub fn cmd_corpus_test(
    capacity: usize,
    seed: u64,
    iters: u64,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> u8 {
    let config = CorpusTestConfig::new(capacity, seed, iters);
    match corpus_test(&Reference, &config) {
        Ok(report) => {
            let _ = write!(out, "{report}");
            if report.passed() {
                EXIT_OK
            } else {
                EXIT_FAILURE
            }
        }
        Err(e) => {
            let _ = writeln!(err, "rarc: {e}");
            EXIT_ENVIRONMENT
        }
    }
}

fn corpus_dir() -> PathBuf {
    if let Some(dir) = std::env::var_os(CORPUS_ENV) {
        return PathBuf::from(dir);
    }
    let local = PathBuf::from("corpus");
    if local.join(differential::CORPUS_FILE).is_file() {
        local
    } else {
        differential::default_corpus_dir()
    }
}

pub fn cmd_difftest(
    cc: Option<&str>,
    seed: u64,
    iters: usize,
    capacity: usize,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> u8 {
    let compiler = match differential::resolve_compiler(cc) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "rarc: {e}");
            return EXIT_ENVIRONMENT;
        }
    };
    let config = DiffConfig {
        corpus_dir: corpus_dir(),
        shim_dir: differential::default_shim_dir(),
        compiler,
        seed,
        n: iters,
        capacity,
    };
    match differential::run_differential(&config) {
        Ok(report) => match &report.divergence {
            None => {
                let _ = writeln!(
                    out,
                    "difftest: {} trace lines identical (seed {seed}, capacity {capacity}) in {:.2?}",
                    report.events_compared, report.elapsed
                );
                EXIT_OK
            }
            Some(d) => {
                let _ = writeln!(out, "difftest: {d}");
                EXIT_FAILURE
            }
        },
        Err(e) => {
            let _ = writeln!(err, "rarc: {e}");
            if e.is_environment() {
                EXIT_ENVIRONMENT
            } else {
                EXIT_FAILURE
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn clap_definition_is_valid() {
        Cli::command().debug_assert();
    }

    #[test]
    fn defaults() {
        let cli = Cli::try_parse_from(["rarc", "corpus-test"]).unwrap();
        assert!(matches!(
            cli.command,
            Command::CorpusTest {
                capacity: 256,
                seed: 1,
                iters: 10_000
            }
        ));
        let cli = Cli::try_parse_from(["rarc", "difftest"]).unwrap();
        assert!(matches!(
            cli.command,
            Command::Difftest {
                cc: None,
                seed: 1,
                iters: 10_000,
                capacity: 256
            }
        ));
        let cli = Cli::try_parse_from(["rarc", "transpile", "a.rar", "-o", "a.cpp"]).unwrap();
        assert!(matches!(
            cli.command,
            Command::Transpile {
                dialect: DialectArg::Plain,
                ..
            }
        ));
    }

    #[test]
    fn usage_errors() {
        for args in [
            &["rarc"][..],
            &["rarc", "check"],
            &["rarc", "transpile", "a.rar"],
            &[
                "rarc",
                "transpile",
                "a.rar",
                "-o",
                "b",
                "--dialect",
                "verilog",
            ],
            &["rarc", "corpus-test", "--capacity", "0"],
            &["rarc", "difftest", "--seed", "-1"],
        ] {
            assert!(Cli::try_parse_from(args).is_err(), "{args:?}");
        }
        assert_eq!(main_with_args(["rarc", "frobnicate"]), EXIT_ENVIRONMENT);
    }

    #[test]
    fn dialect_flags_match_core_names() {
        for d in [DialectArg::Ac, DialectArg::Vivado, DialectArg::Plain] {
            let name = d.to_possible_value().unwrap().get_name().to_owned();
            assert_eq!(Dialect::from_flag(&name), Some(Dialect::from(d)));
        }
    }
}
