//! Differential testing of the emitted C++ against the reference model.
//!
//! The corpus is transpiled with `ARR_SZ` set to the requested capacity,
//! compiled together with the shim's `trace_main.cpp` (which `#include`s the
//! emitted `arrayset.cpp`), and fed a random op script on stdin. Its trace
//! must match the reference trace line for line.

use std::env;
use std::ffi::OsString;
use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::thread;
use std::time::{Duration, Instant};

use rar_core::ast::Item;
use rar_core::oracle::{random_ops, trace_run, ValueRange};
use rar_core::{check_program, emit_program, Dialect, EmitOptions, FileId};

use crate::report::format_diagnostic;
use crate::script::{format_script, format_trace_line, parse_trace_line};
use crate::source::SourceFile;

/// File name of the corpus program inside the corpus directory.
pub const CORPUS_FILE: &str = "arrayset.rar";
/// Name the emitted program is written under; `trace_main.cpp` includes it.
pub const EMITTED_FILE: &str = "arrayset.cpp";
pub const TRACE_MAIN: &str = "trace_main.cpp";
pub const SHIM_HEADER: &str = "rac_shim.h";

/// Appended to every compile; the emitted code and shim must build clean.
pub const STRICT_FLAGS: [&str; 5] = ["-std=c++17", "-Wall", "-Wextra", "-Wpedantic", "-Werror"];

/// Compilers tried, in order, when none is configured.
pub const DEFAULT_COMPILERS: [&str; 3] = ["c++", "g++", "clang++"];

pub const CC_ENV: &str = "RAR_CC";
pub const SHIM_ENV: &str = "RAR_SHIM_DIR";

#[derive(Debug)]
pub enum DiffError {
    Io {
        what: String,
        source: io::Error,
    },
    /// The corpus does not parse or check.
    Corpus(String),
    NoCompiler,
    NoShim(PathBuf),
    Compile {
        command: String,
        output: String,
    },
    Run {
        status: String,
        stderr: String,
    },
}

impl DiffError {
    /// Whether the failure lies in the environment rather than in the code
    /// under test.
    pub fn is_environment(&self) -> bool {
        matches!(
            self,
            DiffError::Io { .. } | DiffError::NoCompiler | DiffError::NoShim(_)
        )
    }

    fn io(what: impl Into<String>) -> impl FnOnce(io::Error) -> DiffError {
        let what = what.into();
        move |source| DiffError::Io { what, source }
    }
}

impl fmt::Display for DiffError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiffError::Io { what, source } => write!(f, "{what}: {source}"),
            DiffError::Corpus(msg) => write!(f, "corpus does not transpile:\n{msg}"),
            DiffError::NoCompiler => write!(
                f,
                "no C++ compiler found (tried {}); pass --cc \"<compiler> [flags]\" or set {CC_ENV}",
                DEFAULT_COMPILERS.join(", ")
            ),
            DiffError::NoShim(dir) => write!(
                f,
                "shim not found: {} must contain {SHIM_HEADER} and {TRACE_MAIN}; set {SHIM_ENV}",
                dir.display()
            ),
            DiffError::Compile { command, output } => {
                write!(f, "compile failed: {command}\n{output}")
            }
            DiffError::Run { status, stderr } => {
                write!(f, "trace program failed ({status})\n{stderr}")
            }
        }
    }
}

impl std::error::Error for DiffError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            DiffError::Io { source, .. } => Some(source),
            _ => None,
        }
    }
}

/// Splits a `--cc` value such as `"g++ -O2"` into program and arguments.
pub fn split_command(cmd: &str) -> Option<Vec<String>> {
    let words: Vec<String> = cmd.split_whitespace().map(str::to_owned).collect();
    (!words.is_empty()).then_some(words)
}

/// First of `candidates` found as an executable file on `path`.
pub fn find_on_path(candidates: &[&str], path: Option<OsString>) -> Option<PathBuf> {
    let dirs: Vec<PathBuf> = path
        .map(|p| env::split_paths(&p).collect())
        .unwrap_or_default();
    candidates
        .iter()
        .find_map(|name| dirs.iter().map(|d| d.join(name)).find(|p| p.is_file()))
}

/// Compiler command from, in order: `flag`, the `RAR_CC` variable, the first
/// default compiler on `PATH`.
pub fn resolve_compiler(flag: Option<&str>) -> Result<Vec<String>, DiffError> {
    if let Some(cmd) = flag {
        return split_command(cmd).ok_or(DiffError::NoCompiler);
    }
    if let Ok(cmd) = env::var(CC_ENV) {
        if let Some(words) = split_command(&cmd) {
            return Ok(words);
        }
    }
    find_on_path(&DEFAULT_COMPILERS, env::var_os("PATH"))
        .map(|p| vec![p.display().to_string()])
        .ok_or(DiffError::NoCompiler)
}

/// `RAR_SHIM_DIR` if set, otherwise the shim shipped with this crate's tests.
pub fn default_shim_dir() -> PathBuf {
    match env::var_os(SHIM_ENV) {
        Some(dir) => PathBuf::from(dir),
        None => Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/shim"),
    }
}

/// Default location of the corpus directory in a source checkout.
pub fn default_corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

/// Transpiles the corpus to plain C++ with `ARR_SZ` replaced by `capacity`.
pub fn emit_corpus(corpus_dir: &Path, capacity: usize) -> Result<String, DiffError> {
    if capacity == 0 {
        return Err(DiffError::Corpus("capacity must be at least 1".into()));
    }
    let file =
        SourceFile::read(corpus_dir.join(CORPUS_FILE), FileId(0)).map_err(|e| DiffError::Io {
            what: e.path().display().to_string(),
            source: match e {
                crate::source::LoadError::Io { source, .. } => source,
                crate::source::LoadError::Syntax { .. } => unreachable!("read does not parse"),
            },
        })?;
    let render = |diags: &[rar_core::Diagnostic]| {
        diags
            .iter()
            .map(|d| format_diagnostic(&file.path, d))
            .collect::<Vec<_>>()
            .join("\n")
    };
    let mut program = file.parse().map_err(|d| DiffError::Corpus(render(&d)))?;
    let mut found = false;
    for item in &mut program.items {
        if let Item::Const(c) = item {
            if c.name.name == "ARR_SZ" {
                c.value = capacity as u64;
                found = true;
            }
        }
    }
    if !found {
        return Err(DiffError::Corpus(
            "no `ARR_SZ` constant in the corpus".into(),
        ));
    }
    let errors: Vec<_> = check_program(&program)
        .into_iter()
        .filter(|d| d.is_error())
        .collect();
    if !errors.is_empty() {
        return Err(DiffError::Corpus(render(&errors)));
    }
    Ok(emit_program(
        &program,
        &EmitOptions::with_dialect(Dialect::PlainCxx),
    ))
}

#[derive(Debug, Clone)]
pub struct DiffConfig {
    pub corpus_dir: PathBuf,
    pub shim_dir: PathBuf,
    /// Compiler program followed by any flags of its own.
    pub compiler: Vec<String>,
    pub seed: u64,
    /// Number of operations.
    pub n: usize,
    pub capacity: usize,
}

/// First point where the two traces disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Divergence {
    /// 1-based trace line.
    pub line: usize,
    /// The line, quoted with its terminator; `None` past the end of that
    /// trace.
    pub expected: Option<String>,
    pub actual: Option<String>,
    /// Names of the differing fields, when both lines parse.
    pub fields: Vec<&'static str>,
}

impl fmt::Display for Divergence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |s: &Option<String>| s.clone().unwrap_or_else(|| "<end of trace>".into());
        write!(f, "trace diverges at line {}", self.line)?;
        if !self.fields.is_empty() {
            write!(f, " ({})", self.fields.join(", "))?;
        }
        write!(
            f,
            "\n  reference: {}\n  compiled:  {}",
            show(&self.expected),
            show(&self.actual)
        )
    }
}

#[derive(Debug, Clone)]
pub struct DiffReport {
    pub events_compared: usize,
    pub divergence: Option<Divergence>,
    pub elapsed: Duration,
}

impl DiffReport {
    pub fn passed(&self) -> bool {
        self.divergence.is_none()
    }
}

fn differing_fields(expected: &str, actual: &str) -> Vec<&'static str> {
    let (Ok(e), Ok(a)) = (parse_trace_line(expected), parse_trace_line(actual)) else {
        return Vec::new();
    };
    let checks: [(&'static str, bool); 6] = [
        ("seq", e.seq != a.seq),
        ("op", e.op != a.op),
        ("ret", e.ret != a.ret),
        ("len", e.len != a.len),
        ("len_free", e.len_free != a.len_free),
        ("digest", e.digest != a.digest),
    ];
    checks.into_iter().filter(|c| c.1).map(|c| c.0).collect()
}

/// Compares two traces line by line. Terminators are part of each line, so
/// a missing final newline is a divergence.
pub fn compare_traces(expected: &str, actual: &str) -> Option<Divergence> {
    let (mut e, mut a) = (expected.split_inclusive('\n'), actual.split_inclusive('\n'));
    for line in 1.. {
        match (e.next(), a.next()) {
            (None, None) => return None,
            (x, y) if x == y => {}
            (x, y) => {
                let fields = match (x, y) {
                    (Some(x), Some(y)) => {
                        differing_fields(x.trim_end_matches('\n'), y.trim_end_matches('\n'))
                    }
                    _ => Vec::new(),
                };
                let show = |s: Option<&str>| s.map(|s| format!("{s:?}"));
                return Some(Divergence {
                    line,
                    expected: show(x),
                    actual: show(y),
                    fields,
                });
            }
        }
    }
    unreachable!()
}

/// A compiled trace program.
#[derive(Debug)]
pub struct TraceBinary {
    pub path: PathBuf,
    // Keeps the build directory alive.
    _dir: tempfile::TempDir,
}

/// Writes `cpp` as the emitted program and compiles it with the shim.
pub fn compile_trace_program(
    cpp: &str,
    shim_dir: &Path,
    compiler: &[String],
) -> Result<TraceBinary, DiffError> {
    if !shim_dir.join(SHIM_HEADER).is_file() || !shim_dir.join(TRACE_MAIN).is_file() {
        return Err(DiffError::NoShim(shim_dir.to_path_buf()));
    }
    let (program, flags) = compiler.split_first().ok_or(DiffError::NoCompiler)?;
    let dir = tempfile::Builder::new()
        .prefix("rar-difftest-")
        .tempdir()
        .map_err(DiffError::io("creating build directory"))?;
    fs::write(dir.path().join(EMITTED_FILE), cpp).map_err(DiffError::io("writing emitted C++"))?;
    let exe = dir.path().join("trace_main");
    let mut cmd = Command::new(program);
    cmd.args(flags)
        .args(STRICT_FLAGS)
        .arg("-I")
        .arg(dir.path())
        .arg("-I")
        .arg(shim_dir)
        .arg(shim_dir.join(TRACE_MAIN))
        .arg("-o")
        .arg(&exe);
    let shown = format!("{cmd:?}");
    let out = match cmd.output() {
        Ok(out) => out,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Err(DiffError::NoCompiler),
        Err(e) => return Err(DiffError::io(format!("running {program}"))(e)),
    };
    if !out.status.success() {
        let mut output = String::from_utf8_lossy(&out.stdout).into_owned();
        output.push_str(&String::from_utf8_lossy(&out.stderr));
        return Err(DiffError::Compile {
            command: shown,
            output,
        });
    }
    Ok(TraceBinary {
        path: exe,
        _dir: dir,
    })
}

/// Runs a compiled trace program on `script`, returning its stdout.
pub fn run_trace_program(
    binary: &Path,
    capacity: usize,
    script: &str,
) -> Result<String, DiffError> {
    let mut child = Command::new(binary)
        .arg(capacity.to_string())
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .map_err(DiffError::io(format!("starting {}", binary.display())))?;
    let mut stdin = child.stdin.take().expect("piped stdin");
    let script = script.to_owned();
    // Feed stdin from another thread so a large trace cannot deadlock on a
    // full stdout pipe.
    let writer = thread::spawn(move || stdin.write_all(script.as_bytes()));
    let out = child
        .wait_with_output()
        .map_err(DiffError::io("waiting for trace program"))?;
    let fed = writer.join().expect("stdin writer panicked");
    if !out.status.success() {
        return Err(DiffError::Run {
            status: out.status.to_string(),
            stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
        });
    }
    // A broken pipe here means the program exited early but successfully,
    // which the trace comparison reports as a length mismatch.
    if let Err(e) = fed {
        if e.kind() != io::ErrorKind::BrokenPipe {
            return Err(DiffError::io("writing op script")(e));
        }
    }
    String::from_utf8(out.stdout).map_err(|e| DiffError::Run {
        status: "exit 0".into(),
        stderr: format!("trace output is not UTF-8: {e}"),
    })
}

/// Compiles `cpp` and checks its trace against the reference on
/// `random_ops(seed, n)` with values in `[0, capacity + 2]`.
pub fn run_differential_on(cpp: &str, config: &DiffConfig) -> Result<DiffReport, DiffError> {
    let start = Instant::now();
    let binary = compile_trace_program(cpp, &config.shim_dir, &config.compiler)?;
    let ops = random_ops(
        config.seed,
        config.n,
        ValueRange::for_capacity(config.capacity),
    );
    let reference =
        trace_run(&ops, config.capacity).map_err(|e| DiffError::Corpus(e.to_string()))?;
    let expected: String = reference
        .iter()
        .map(|e| format_trace_line(e) + "\n")
        .collect();
    let actual = run_trace_program(&binary.path, config.capacity, &format_script(&ops))?;
    let divergence = compare_traces(&expected, &actual);
    Ok(DiffReport {
        events_compared: reference.len(),
        divergence,
        elapsed: start.elapsed(),
    })
}

/// Transpiles the corpus and compares its compiled trace to the reference.
pub fn run_differential(config: &DiffConfig) -> Result<DiffReport, DiffError> {
    let cpp = emit_corpus(&config.corpus_dir, config.capacity)?;
    run_differential_on(&cpp, config)
}

#[cfg(test)]
mod tests {
    use super::*;

    const LINE: &str = "1 add 3 - 1 4 0123456789abcdef";

    #[test]
    fn split_command_words() {
        assert_eq!(split_command("g++  -O2 ").unwrap(), ["g++", "-O2"]);
        assert_eq!(split_command("   "), None);
    }

    #[test]
    fn path_search() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("g++"), "").unwrap();
        let path = env::join_paths([Path::new("/nonexistent"), dir.path()]).unwrap();
        assert_eq!(
            find_on_path(&DEFAULT_COMPILERS, Some(path.clone())),
            Some(dir.path().join("g++"))
        );
        assert_eq!(find_on_path(&["clang++"], Some(path)), None);
        assert_eq!(find_on_path(&DEFAULT_COMPILERS, None), None);
    }

    #[test]
    fn identical_traces() {
        assert_eq!(compare_traces("", ""), None);
        let t = format!("{LINE}\n{LINE}\n");
        assert_eq!(compare_traces(&t, &t), None);
    }

    #[test]
    fn field_level_divergence() {
        let other = "1 add 3 - 2 4 0123456789abcdef";
        let d = compare_traces(&format!("{LINE}\n"), &format!("{other}\n")).unwrap();
        assert_eq!(d.line, 1);
        assert_eq!(d.fields, ["len"]);
        assert!(d.to_string().contains("(len)"));
    }

    #[test]
    fn length_mismatch() {
        let d = compare_traces(&format!("{LINE}\n{LINE}\n"), &format!("{LINE}\n")).unwrap();
        assert_eq!(d.line, 2);
        assert_eq!(d.actual, None);
        assert!(d.to_string().contains("<end of trace>"));
        let d = compare_traces("", &format!("{LINE}\n")).unwrap();
        assert_eq!((d.line, d.expected), (1, None));
    }

    #[test]
    fn missing_final_newline_is_a_divergence() {
        let d = compare_traces(&format!("{LINE}\n"), LINE).unwrap();
        assert_eq!(d.line, 1);
        assert!(d.fields.is_empty());
        assert_eq!(d.actual.unwrap(), format!("{LINE:?}"));
    }

    #[test]
    fn emit_substitutes_capacity() {
        let cpp = emit_corpus(&default_corpus_dir(), 5).unwrap();
        assert!(cpp.contains("const uint ARR_SZ = 5;"));
        assert!(cpp.contains("#include \"rac_shim.h\""));
        assert!(matches!(
            emit_corpus(&default_corpus_dir(), 0),
            Err(DiffError::Corpus(_))
        ));
        let missing = emit_corpus(Path::new("/nonexistent"), 5).unwrap_err();
        assert!(missing.is_environment());
    }

    #[test]
    fn missing_shim_is_an_environment_error() {
        let dir = tempfile::tempdir().unwrap();
        let e = compile_trace_program("", dir.path(), &["c++".into()]).unwrap_err();
        assert!(matches!(e, DiffError::NoShim(_)));
        assert!(e.is_environment());
    }

    #[test]
    fn unknown_compiler_is_an_environment_error() {
        let e = compile_trace_program("", &default_shim_dir(), &["/nonexistent/bin/c++".into()])
            .unwrap_err();
        assert!(matches!(e, DiffError::NoCompiler), "{e}");
    }
}
