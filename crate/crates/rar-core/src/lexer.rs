//! Tokenizer for RAR source text.
//!
//! Comments are kept as [`TokenKind::Comment`] tokens so that the token
//! stream plus the whitespace between tokens reproduces the input exactly.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::ast::{Token, TokenKind};
use crate::span::{Diagnostic, FileId, SourceSpan};

/// Reserved words. Everything else matching the identifier grammar is an
/// [`TokenKind::Identifier`].
pub const KEYWORDS: [&str; 24] = [
    "const", "struct", "fn", "let", "mut", "if", "else", "for", "in", "return", "true", "false",
    "as", "usize", "bool", "u8", "u16", "u32", "u64", "i8", "i16", "i32", "i64", "uint",
];

// Longest match first.
const PUNCTS: [&str; 31] = [
    "->", "..", "==", "!=", "<=", ">=", "&&", "||", "<<", ">>", "{", "}", "(", ")", "[", "]", ";",
    ":", ",", ".", "=", "<", ">", "+", "-", "*", "/", "%", "!", "&", "|",
];

pub fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LexError {
    UnknownCharacter { ch: char, span: SourceSpan },
    UnterminatedComment { span: SourceSpan },
}

impl LexError {
    pub fn span(&self) -> SourceSpan {
        match self {
            LexError::UnknownCharacter { span, .. } | LexError::UnterminatedComment { span } => {
                *span
            }
        }
    }

    pub fn into_diagnostic(self) -> Diagnostic {
        let code = match self {
            LexError::UnknownCharacter { .. } => "L001",
            LexError::UnterminatedComment { .. } => "L002",
        };
        Diagnostic::error(code, self.to_string(), self.span())
    }
}

impl fmt::Display for LexError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LexError::UnknownCharacter { ch, .. } => write!(f, "unknown character {ch:?}"),
            LexError::UnterminatedComment { .. } => f.write_str("unterminated block comment"),
        }
    }
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
    line: u32,
    col: u32,
    file: FileId,
}

impl<'a> Cursor<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn bump_n(&mut self, n: usize) {
        for _ in 0..n {
            self.bump();
        }
    }

    fn eat_while(&mut self, pred: impl Fn(char) -> bool) {
        while self.peek().is_some_and(&pred) {
            self.bump();
        }
    }

    fn here(&self) -> (u32, u32) {
        (self.line, self.col)
    }
}

/// Splits `source` into tokens, comments included.
pub fn tokenize(source: &str, file: FileId) -> Result<Vec<Token>, LexError> {
    let mut cur = Cursor {
        src: source,
        pos: 0,
        line: 1,
        col: 1,
        file,
    };
    let mut tokens = Vec::new();

    while let Some(c) = cur.peek() {
        if matches!(c, ' ' | '\t' | '\n' | '\r') {
            cur.bump();
            continue;
        }
        let start = cur.here();
        let offset = cur.pos;
        let kind = if cur.rest().starts_with("//") {
            cur.eat_while(|c| c != '\n');
            TokenKind::Comment
        } else if cur.rest().starts_with("/*") {
            lex_block_comment(&mut cur, start)?;
            TokenKind::Comment
        } else if c.is_ascii_alphabetic() || c == '_' {
            cur.eat_while(|c| c.is_ascii_alphanumeric() || c == '_');
            if is_keyword(&source[offset..cur.pos]) {
                TokenKind::Keyword
            } else {
                TokenKind::Identifier
            }
        } else if c.is_ascii_digit() {
            if cur.rest().starts_with("0x") || cur.rest().starts_with("0X") {
                cur.bump_n(2);
                cur.eat_while(|c| c.is_ascii_hexdigit());
            } else {
                cur.eat_while(|c| c.is_ascii_digit());
            }
            TokenKind::IntLiteral
        } else if c == '#' {
            cur.bump();
            TokenKind::AttributeMarker
        } else if let Some(p) = PUNCTS.iter().find(|p| cur.rest().starts_with(**p)) {
            cur.bump_n(p.len());
            TokenKind::Punct
        } else {
            cur.bump();
            return Err(LexError::UnknownCharacter {
                ch: c,
                span: SourceSpan::new(file, start, cur.here()),
            });
        };
        tokens.push(Token {
            kind,
            lexeme: String::from(&source[offset..cur.pos]),
            span: SourceSpan::new(file, start, cur.here()),
            offset,
        });
    }
    Ok(tokens)
}

fn lex_block_comment(cur: &mut Cursor<'_>, start: (u32, u32)) -> Result<(), LexError> {
    cur.bump_n(2);
    let mut depth = 1usize;
    while depth > 0 {
        if cur.rest().starts_with("*/") {
            cur.bump_n(2);
            depth -= 1;
        } else if cur.rest().starts_with("/*") {
            cur.bump_n(2);
            depth += 1;
        } else if cur.bump().is_none() {
            return Err(LexError::UnterminatedComment {
                span: SourceSpan::new(cur.file, start, cur.here()),
            });
        }
    }
    Ok(())
}

/// Parses an integer literal lexeme (decimal or `0x` hexadecimal).
pub fn int_value(lexeme: &str) -> Option<u64> {
    if let Some(hex) = lexeme
        .strip_prefix("0x")
        .or_else(|| lexeme.strip_prefix("0X"))
    {
        u64::from_str_radix(hex, 16).ok()
    } else {
        lexeme.parse().ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn kinds_and_lexemes(src: &str) -> Vec<(TokenKind, String)> {
        tokenize(src, FileId(0))
            .unwrap()
            .into_iter()
            .map(|t| (t.kind, t.lexeme))
            .collect()
    }

    #[test]
    fn let_statement() {
        use TokenKind::*;
        let got = kinds_and_lexemes("let x: usize = 0;");
        let want: Vec<(TokenKind, String)> = vec![
            (Keyword, "let".into()),
            (Identifier, "x".into()),
            (Punct, ":".into()),
            (Keyword, "usize".into()),
            (Punct, "=".into()),
            (IntLiteral, "0".into()),
            (Punct, ";".into()),
        ];
        assert_eq!(got, want);
    }

    #[test]
    fn empty_source() {
        assert!(tokenize("", FileId(0)).unwrap().is_empty());
    }

    #[test]
    fn uint_const_literal() {
        let toks = tokenize("const ARR_SZ: uint = 256;", FileId(0)).unwrap();
        let lits: Vec<_> = toks
            .iter()
            .filter(|t| t.kind == TokenKind::IntLiteral)
            .collect();
        assert_eq!(lits.len(), 1);
        assert_eq!(lits[0].lexeme, "256");
        assert!(toks[3].is_keyword("uint"));
    }

    #[test]
    fn range_is_not_a_float() {
        let got = kinds_and_lexemes("0..ARR_SZ");
        assert_eq!(got[0].1, "0");
        assert_eq!(got[1], (TokenKind::Punct, "..".into()));
    }

    #[test]
    fn spans_are_one_based() {
        let toks = tokenize("fn\n  f", FileId(3)).unwrap();
        assert_eq!(toks[0].span, SourceSpan::new(FileId(3), (1, 1), (1, 3)));
        assert_eq!(toks[1].span, SourceSpan::new(FileId(3), (2, 3), (2, 4)));
    }

    #[test]
    fn comments_are_tokens() {
        let toks = tokenize("a // tail\n/* b\n c */ d", FileId(0)).unwrap();
        assert_eq!(toks.len(), 4);
        assert_eq!(toks[1].kind, TokenKind::Comment);
        assert_eq!(toks[1].lexeme, "// tail");
        assert_eq!(toks[2].lexeme, "/* b\n c */");
        assert_eq!(toks[2].span.end(), (3, 6));
    }

    #[test]
    fn unknown_character() {
        let err = tokenize("let $x", FileId(0)).unwrap_err();
        assert_eq!(
            err,
            LexError::UnknownCharacter {
                ch: '$',
                span: SourceSpan::new(FileId(0), (1, 5), (1, 6)),
            }
        );
        assert_eq!(err.into_diagnostic().rule_code, "L001");
    }

    #[test]
    fn unterminated_comment() {
        let err = tokenize("x /* never /* closed */", FileId(0)).unwrap_err();
        assert!(matches!(err, LexError::UnterminatedComment { .. }));
        assert_eq!(err.span().start(), (1, 3));
    }

    #[test]
    fn hex_literals() {
        assert_eq!(int_value("0x1F"), Some(31));
        assert_eq!(int_value("256"), Some(256));
        assert_eq!(int_value("0x"), None);
    }

    #[test]
    fn attribute_marker() {
        let toks = tokenize("#[derive(Copy, Clone)]", FileId(0)).unwrap();
        assert_eq!(toks[0].kind, TokenKind::AttributeMarker);
        assert_eq!(toks[0].lexeme, "#");
    }
}
