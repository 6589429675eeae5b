//! Op scripts and trace lines, the two text formats shared with the compiled
//! trace program.
//!
//! Script: one op per line, `add <v>`, `del <v>` or `is <v>`. Blank lines are
//! skipped and do not advance the op count.
//!
//! Trace: one line per op, `<seq> <op> <v> <ret|-> <len> <len_free> <digest>`
//! where `ret` is `true`/`false` for `is` and `-` otherwise and the digest is
//! 16 lowercase hex digits. Lines end in `\n` with no trailing blanks.

use std::fmt;
use std::fmt::Write as _;

use rar_core::oracle::{OpRequest, OpTag, TraceEvent};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScriptError {
    /// 1-based line number.
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ScriptError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ScriptError {}

fn parse_op(text: &str) -> Result<OpRequest, String> {
    let mut words = text.split_whitespace();
    let (Some(keyword), Some(value), None) = (words.next(), words.next(), words.next()) else {
        return Err(format!("expected `add|del|is <value>`, found `{text}`"));
    };
    let tag = OpTag::from_keyword(keyword)
        .ok_or_else(|| format!("unknown operation `{keyword}`; expected add, del or is"))?;
    let val = value
        .parse::<i64>()
        .map_err(|e| format!("bad value `{value}`: {e}"))?;
    Ok(OpRequest { tag, val })
}

pub fn parse_script(text: &str) -> Result<Vec<OpRequest>, ScriptError> {
    let mut ops = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let op = parse_op(line).map_err(|message| ScriptError {
            line: i + 1,
            message,
        })?;
        ops.push(op);
    }
    Ok(ops)
}

pub fn format_script(ops: &[OpRequest]) -> String {
    let mut out = String::with_capacity(ops.len() * 8);
    for op in ops {
        writeln!(out, "{op}").unwrap();
    }
    out
}

pub fn format_trace_line(e: &TraceEvent) -> String {
    let ret = match e.ret {
        Some(true) => "true",
        Some(false) => "false",
        None => "-",
    };
    format!(
        "{} {} {} {} {} {:016x}",
        e.seq, e.op, ret, e.len, e.len_free, e.digest
    )
}

pub fn format_trace(events: &[TraceEvent]) -> String {
    let mut out = String::with_capacity(events.len() * 48);
    for e in events {
        out.push_str(&format_trace_line(e));
        out.push('\n');
    }
    out
}

/// Parses one trace line; the inverse of [`format_trace_line`].
pub fn parse_trace_line(line: &str) -> Result<TraceEvent, String> {
    let fields: Vec<&str> = line.split(' ').collect();
    let [seq, op, val, ret, len, len_free, digest] = fields[..] else {
        return Err(format!(
            "expected 7 space-separated fields, found {}",
            fields.len()
        ));
    };
    let num = |name: &str, s: &str| {
        s.parse::<u64>()
            .map_err(|e| format!("bad {name} `{s}`: {e}"))
    };
    let op = parse_op(&format!("{op} {val}"))?;
    let ret = match ret {
        "true" => Some(true),
        "false" => Some(false),
        "-" => None,
        other => return Err(format!("bad ret `{other}`")),
    };
    if digest.len() != 16
        || !digest
            .bytes()
            .all(|b| matches!(b, b'0'..=b'9' | b'a'..=b'f'))
    {
        return Err(format!(
            "bad digest `{digest}`; expected 16 lowercase hex digits"
        ));
    }
    let event = TraceEvent {
        seq: num("seq", seq)?,
        op,
        ret,
        len: num("len", len)? as usize,
        len_free: num("len_free", len_free)? as usize,
        digest: u64::from_str_radix(digest, 16).map_err(|e| e.to_string())?,
    };
    // Reject non-canonical spellings such as `+5` or `007`.
    if format_trace_line(&event) != line {
        return Err(format!("non-canonical trace line `{line}`"));
    }
    Ok(event)
}

/// Parses a whole trace; errors carry the 1-based line number.
pub fn parse_trace(text: &str) -> Result<Vec<TraceEvent>, ScriptError> {
    text.lines()
        .enumerate()
        .map(|(i, l)| {
            parse_trace_line(l).map_err(|message| ScriptError {
                line: i + 1,
                message,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rar_core::oracle::{random_ops, trace_run, ValueRange};

    #[test]
    fn script_round_trip() {
        let ops = random_ops(3, 200, ValueRange::new(-5, 300));
        assert_eq!(parse_script(&format_script(&ops)).unwrap(), ops);
        assert_eq!(parse_script("").unwrap(), []);
        assert_eq!(
            parse_script("add 33\n\n  \nis -4\r\n").unwrap(),
            [OpRequest::add(33), OpRequest::is_element(-4)]
        );
    }

    #[test]
    fn script_errors_cite_the_line() {
        let e = parse_script("frob 1").unwrap_err();
        assert_eq!(e.line, 1);
        assert!(e
            .to_string()
            .starts_with("line 1: unknown operation `frob`"));
        assert_eq!(parse_script("add 1\n\ndel\n").unwrap_err().line, 3);
        assert_eq!(parse_script("add 1 2").unwrap_err().line, 1);
        assert_eq!(parse_script("is 99999999999999999999").unwrap_err().line, 1);
        assert_eq!(parse_script("Add 1").unwrap_err().line, 1);
    }

    #[test]
    fn trace_lines() {
        let ops = [
            OpRequest::add(33),
            OpRequest::add(22),
            OpRequest::is_element(33),
        ];
        let trace = trace_run(&ops, 5).unwrap();
        let text = format_trace(&trace);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].starts_with("1 add 33 - 1 4 "));
        assert!(lines[2].starts_with("3 is 33 true 2 3 "));
        assert!(text.ends_with('\n'));
        assert!(text.lines().all(|l| l == l.trim_end()));
        assert_eq!(lines[1].rsplit(' ').next().unwrap().len(), 16);
        assert_eq!(parse_trace(&text).unwrap(), trace);
    }

    #[test]
    fn trace_parse_rejects_noise() {
        for bad in [
            "",
            "1 add 33 - 1 4",
            "1 add 33 - 1 4 00000000000000000 ",
            "1 add 33 maybe 1 4 0000000000000000",
            "1 add 33 - 1 4 000000000000000G",
            "1 add 33 - 1 4 ABCDEF0000000000",
            "01 add 33 - 1 4 0000000000000000",
            "1  add 33 - 1 4 0000000000000000",
        ] {
            assert!(parse_trace_line(bad).is_err(), "{bad:?}");
        }
        assert!(parse_trace_line("1 add 33 - 1 4 0000000000000000").is_ok());
    }
}
