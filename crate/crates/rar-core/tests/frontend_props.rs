use proptest::prelude::*;
use rar_core::ast::{render_ast, TokenKind};
use rar_core::{check_program, parse, parse_source, tokenize, FileId};

const CORPUS: [&str; 9] = [
    include_str!("../../../corpus/arrayset.rar"),
    include_str!("../../../corpus/neg/R001_ref_param.rar"),
    include_str!("../../../corpus/neg/R002_mutual_recursion.rar"),
    include_str!("../../../corpus/neg/R003_nonconst_bound.rar"),
    include_str!("../../../corpus/neg/R004_signed_index.rar"),
    include_str!("../../../corpus/neg/R005_static_mut.rar"),
    include_str!("../../../corpus/neg/R006_missing_return.rar"),
    include_str!("../../../corpus/neg/R007_external_call.rar"),
    include_str!("../../../corpus/neg/R008_forward_call.rar"),
];

/// Lexemes joined with the source text between them.
fn rebuild(src: &str) -> String {
    let tokens = tokenize(src, FileId(0)).unwrap();
    let mut out = String::new();
    let mut at = 0;
    for t in &tokens {
        let gap = &src[at..t.offset];
        assert!(
            gap.chars().all(char::is_whitespace),
            "non-blank gap {gap:?}"
        );
        out.push_str(gap);
        out.push_str(&t.lexeme);
        at = t.offset + t.lexeme.len();
    }
    out.push_str(&src[at..]);
    out
}

#[test]
fn lexemes_reconstruct_corpus_files() {
    for src in CORPUS {
        assert_eq!(rebuild(src), src);
    }
}

#[test]
fn comments_are_tokens_but_not_syntax() {
    let src = CORPUS[0];
    let tokens = tokenize(src, FileId(0)).unwrap();
    assert!(tokens.iter().any(|t| t.kind == TokenKind::Comment));
    let without: Vec<_> = tokens
        .iter()
        .filter(|t| t.kind != TokenKind::Comment)
        .cloned()
        .collect();
    assert_eq!(
        render_ast(&parse(&tokens).unwrap()),
        render_ast(&parse(&without).unwrap())
    );
}

#[test]
fn checking_is_deterministic_and_pure() {
    for src in CORPUS {
        let program = parse_source(src, FileId(0)).unwrap();
        let before = program.clone();
        let first = check_program(&program);
        assert_eq!(first, check_program(&program));
        assert_eq!(program, before);
    }
}

fn rar_fragment() -> impl Strategy<Value = String> {
    let words = prop::sample::select(vec![
        "fn",
        "let",
        "mut",
        "if",
        "else",
        "for",
        "in",
        "return",
        "const",
        "struct",
        "as",
        "usize",
        "i64",
        "bool",
        "uint",
        "x",
        "aset",
        "ARR_SZ",
        "0",
        "256",
        "0x1f",
        "(",
        ")",
        "{",
        "}",
        "[",
        "]",
        ";",
        ":",
        ",",
        ".",
        "..",
        "->",
        "=",
        "==",
        "<",
        ">=",
        "&&",
        "||",
        "+",
        "-",
        "*",
        "!",
        "&",
        "#",
        "#[derive(Copy, Clone)]",
        "static",
        "while",
        "// c\n",
        "/* c */",
    ]);
    prop::collection::vec(words, 0..60).prop_map(|w| w.join(" "))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn arbitrary_text_never_panics(src in any::<String>()) {
        let _ = parse_source(&src, FileId(0));
    }

    #[test]
    fn token_soup_never_panics(src in rar_fragment()) {
        if let Ok(program) = parse_source(&src, FileId(0)) {
            let _ = check_program(&program);
        }
    }

    #[test]
    fn lexeme_conservation(src in rar_fragment()) {
        prop_assert_eq!(rebuild(&src), src);
    }

    #[test]
    fn failures_are_errors_with_spans(src in rar_fragment()) {
        if let Err(diags) = parse_source(&src, FileId(0)) {
            prop_assert!(!diags.is_empty());
            for d in diags {
                prop_assert!(d.is_error());
                prop_assert!(d.span.start_line >= 1 && d.span.start_col >= 1);
            }
        }
    }

    #[test]
    fn render_is_deterministic(src in rar_fragment()) {
        if let Ok(a) = parse_source(&src, FileId(0)) {
            let b = parse_source(&src, FileId(0)).unwrap();
            prop_assert_eq!(render_ast(&a), render_ast(&b));
        }
    }
}
