//! Recursive-descent parser from tokens to a [`Program`].
//!
//! Syntax errors become `P001` diagnostics. After an error the parser skips
//! ahead to the next token that can start an item, so one file may report
//! several independent errors.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::ast::*;
use crate::lexer::int_value;
use crate::span::{Diagnostic, FileId, SourceSpan};

pub const SYNTAX_ERROR: &str = "P001";

type PResult<T> = Result<T, Diagnostic>;

/// Parses a token stream (as produced by [`crate::tokenize`]) into a program.
/// Comment tokens are ignored.
pub fn parse(tokens: &[Token]) -> Result<Program, Vec<Diagnostic>> {
    let toks: Vec<&Token> = tokens
        .iter()
        .filter(|t| t.kind != TokenKind::Comment)
        .collect();
    let eof = tokens
        .last()
        .map(|t| t.span.end_point())
        .unwrap_or_else(|| SourceSpan::point(FileId::default(), 1, 1));
    let mut p = Parser { toks, pos: 0, eof };
    let mut items = Vec::new();
    let mut diags = Vec::new();
    while !p.at_end() {
        let item_start = p.pos;
        match p.item() {
            Ok(item) => items.push(item),
            Err(d) => {
                diags.push(d);
                p.recover(item_start);
            }
        }
    }
    if diags.is_empty() {
        Ok(Program { items })
    } else {
        Err(diags)
    }
}

struct Parser<'t> {
    toks: Vec<&'t Token>,
    pos: usize,
    eof: SourceSpan,
}

// Binding powers, loosest first.
const PREC_OR: u8 = 1;
const PREC_AND: u8 = 2;
const PREC_CMP: u8 = 3;
const PREC_BITOR: u8 = 4;
const PREC_BITXOR: u8 = 5;
const PREC_BITAND: u8 = 6;
const PREC_SHIFT: u8 = 7;
const PREC_ADD: u8 = 8;
const PREC_MUL: u8 = 9;

fn binary_prec(op: BinOp) -> u8 {
    match op {
        BinOp::Or => PREC_OR,
        BinOp::And => PREC_AND,
        BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge | BinOp::Eq | BinOp::Ne => PREC_CMP,
        BinOp::BitOr => PREC_BITOR,
        BinOp::BitXor => PREC_BITXOR,
        BinOp::BitAnd => PREC_BITAND,
        BinOp::Shl | BinOp::Shr => PREC_SHIFT,
        BinOp::Add | BinOp::Sub => PREC_ADD,
        BinOp::Mul | BinOp::Div | BinOp::Rem => PREC_MUL,
    }
}

impl<'t> Parser<'t> {
    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn peek(&self) -> Option<&'t Token> {
        self.toks.get(self.pos).copied()
    }

    fn peek_at(&self, n: usize) -> Option<&'t Token> {
        self.toks.get(self.pos + n).copied()
    }

    fn here(&self) -> SourceSpan {
        self.peek().map(|t| t.span).unwrap_or(self.eof)
    }

    fn prev_span(&self) -> SourceSpan {
        self.pos
            .checked_sub(1)
            .and_then(|i| self.toks.get(i))
            .map(|t| t.span)
            .unwrap_or(self.eof)
    }

    fn error<T>(&self, msg: impl Into<String>) -> PResult<T> {
        Err(Diagnostic::error(SYNTAX_ERROR, msg, self.here()))
    }

    fn unexpected<T>(&self, expected: &str) -> PResult<T> {
        match self.peek() {
            Some(t) => self.error(format!("expected {expected}, found `{}`", t.lexeme)),
            None => self.error(format!("expected {expected}, found end of input")),
        }
    }

    fn bump(&mut self) -> &'t Token {
        let t = self.toks[self.pos];
        self.pos += 1;
        t
    }

    fn check_punct(&self, p: &str) -> bool {
        self.peek().is_some_and(|t| t.is_punct(p))
    }

    fn check_keyword(&self, k: &str) -> bool {
        self.peek().is_some_and(|t| t.is_keyword(k))
    }

    fn check_ident(&self, name: &str) -> bool {
        self.peek()
            .is_some_and(|t| t.is(TokenKind::Identifier, name))
    }

    fn eat_punct(&mut self, p: &str) -> bool {
        if self.check_punct(p) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_keyword(&mut self, k: &str) -> bool {
        if self.check_keyword(k) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_punct(&mut self, p: &str) -> PResult<&'t Token> {
        if self.check_punct(p) {
            Ok(self.bump())
        } else {
            self.unexpected(&format!("`{p}`"))
        }
    }

    fn expect_keyword(&mut self, k: &str) -> PResult<&'t Token> {
        if self.check_keyword(k) {
            Ok(self.bump())
        } else {
            self.unexpected(&format!("`{k}`"))
        }
    }

    fn ident(&mut self) -> PResult<Ident> {
        match self.peek() {
            Some(t) if t.kind == TokenKind::Identifier => {
                self.pos += 1;
                Ok(Ident {
                    name: t.lexeme.clone(),
                    span: t.span,
                })
            }
            _ => self.unexpected("identifier"),
        }
    }

    fn int_literal(&mut self) -> PResult<(u64, SourceSpan)> {
        match self.peek() {
            Some(t) if t.kind == TokenKind::IntLiteral => match int_value(&t.lexeme) {
                Some(v) => {
                    self.pos += 1;
                    Ok((v, t.span))
                }
                None => self.error(format!("integer literal `{}` out of range", t.lexeme)),
            },
            _ => self.unexpected("integer literal"),
        }
    }

    fn recover(&mut self, item_start: usize) {
        if self.pos == item_start && !self.at_end() {
            self.pos += 1;
        }
        while let Some(t) = self.peek() {
            let starts_item = t.is_keyword("fn")
                || t.is_keyword("const")
                || t.is_keyword("struct")
                || t.kind == TokenKind::AttributeMarker
                || t.is(TokenKind::Identifier, "static");
            if starts_item {
                break;
            }
            self.pos += 1;
        }
    }

    // ---- items -------------------------------------------------------

    fn item(&mut self) -> PResult<Item> {
        let start = self.here();
        let copy_derive = if self
            .peek()
            .is_some_and(|t| t.kind == TokenKind::AttributeMarker)
        {
            self.derive_attribute()?;
            true
        } else {
            false
        };
        if copy_derive {
            if !self.check_keyword("struct") {
                return self.unexpected("`struct` after `#[derive(Copy, Clone)]`");
            }
            return self.record(start, true).map(Item::Record);
        }
        if self.check_keyword("const") {
            self.const_def().map(Item::Const)
        } else if self.check_keyword("struct") {
            self.record(start, false).map(Item::Record)
        } else if self.check_keyword("fn") {
            self.function().map(Item::Fn)
        } else if self.check_ident("static") {
            self.static_def().map(Item::Static)
        } else {
            self.unexpected("item (`const`, `struct` or `fn`)")
        }
    }

    fn derive_attribute(&mut self) -> PResult<()> {
        let marker = self.bump();
        self.expect_punct("[")?;
        if !self.check_ident("derive") {
            return Err(Diagnostic::error(
                SYNTAX_ERROR,
                "only `#[derive(Copy, Clone)]` attributes are supported",
                marker.span.to(self.here()),
            ));
        }
        self.pos += 1;
        self.expect_punct("(")?;
        let mut names = Vec::new();
        loop {
            names.push(self.ident()?);
            if !self.eat_punct(",") || self.check_punct(")") {
                break;
            }
        }
        self.expect_punct(")")?;
        let close = self.expect_punct("]")?;
        let mut sorted: Vec<&str> = names.iter().map(|n| n.as_str()).collect();
        sorted.sort_unstable();
        if sorted != ["Clone", "Copy"] {
            return Err(Diagnostic::error(
                SYNTAX_ERROR,
                "only `#[derive(Copy, Clone)]` attributes are supported",
                marker.span.to(close.span),
            ));
        }
        Ok(())
    }

    fn const_def(&mut self) -> PResult<ConstDef> {
        let start = self.expect_keyword("const")?.span;
        let name = self.ident()?;
        self.expect_punct(":")?;
        let ty = self.type_expr()?;
        self.expect_punct("=")?;
        let (value, _) = self.int_literal()?;
        let end = self.expect_punct(";")?.span;
        Ok(ConstDef {
            name,
            ty,
            value,
            span: start.to(end),
        })
    }

    fn static_def(&mut self) -> PResult<StaticDef> {
        let start = self.bump().span;
        let mutable = self.eat_keyword("mut");
        let name = self.ident()?;
        self.expect_punct(":")?;
        let ty = self.type_expr()?;
        self.expect_punct("=")?;
        let value = self.expr()?;
        let end = self.expect_punct(";")?.span;
        Ok(StaticDef {
            name,
            mutable,
            ty,
            value,
            span: start.to(end),
        })
    }

    fn record(&mut self, start: SourceSpan, copy_derive: bool) -> PResult<RecordDef> {
        self.expect_keyword("struct")?;
        let name = self.ident()?;
        self.expect_punct("{")?;
        let mut fields = Vec::new();
        while !self.check_punct("}") {
            let fname = self.ident()?;
            self.expect_punct(":")?;
            let ty = self.type_expr()?;
            fields.push(FieldDef { name: fname, ty });
            if !self.eat_punct(",") {
                break;
            }
        }
        let end = self.expect_punct("}")?.span;
        Ok(RecordDef {
            name,
            fields,
            copy_derive,
            span: start.to(end),
        })
    }

    fn function(&mut self) -> PResult<FnDef> {
        let start = self.expect_keyword("fn")?.span;
        let name = self.ident()?;
        self.expect_punct("(")?;
        let mut params = Vec::new();
        while !self.check_punct(")") {
            params.push(self.param()?);
            if !self.eat_punct(",") {
                break;
            }
        }
        self.expect_punct(")")?;
        self.expect_punct("->")?;
        let return_type = self.type_expr()?;
        let body = self.block()?;
        Ok(FnDef {
            name,
            params,
            return_type,
            body,
            span: start.to(self.prev_span()),
        })
    }

    /// Accepts both `mut name: T` and the `name: mut T` spelling.
    fn param(&mut self) -> PResult<Param> {
        let start = self.here();
        let mut mutable = self.eat_keyword("mut");
        let name = self.ident()?;
        self.expect_punct(":")?;
        if self.eat_keyword("mut") {
            if mutable {
                return self.error("parameter marked `mut` twice");
            }
            mutable = true;
        }
        let ty = self.type_expr()?;
        Ok(Param {
            name,
            span: start.to(ty.span),
            ty,
            mutable,
        })
    }

    fn type_expr(&mut self) -> PResult<TypeExpr> {
        let start = self.here();
        let Some(t) = self.peek() else {
            return self.unexpected("type");
        };
        let scalar = match (t.kind, t.lexeme.as_str()) {
            (TokenKind::Keyword, "usize") => Some(TypeKind::UnsignedIndex { uint_alias: false }),
            (TokenKind::Keyword, "uint") => Some(TypeKind::UnsignedIndex { uint_alias: true }),
            (TokenKind::Keyword, "bool") => Some(TypeKind::Bool),
            (TokenKind::Keyword, kw) if kw.len() > 1 => {
                let (sign, bits) = kw.split_at(1);
                match (sign, bits.parse().ok().and_then(IntWidth::from_bits)) {
                    ("u", Some(w)) => Some(TypeKind::UnsignedInt(w)),
                    ("i", Some(w)) => Some(TypeKind::SignedInt(w)),
                    _ => None,
                }
            }
            _ => None,
        };
        if let Some(kind) = scalar {
            self.pos += 1;
            return Ok(TypeExpr { kind, span: t.span });
        }
        if t.kind == TokenKind::Identifier {
            self.pos += 1;
            return Ok(TypeExpr {
                kind: TypeKind::Named(t.lexeme.clone()),
                span: t.span,
            });
        }
        if self.eat_punct("&") {
            let mutable = self.eat_keyword("mut");
            let inner = self.type_expr()?;
            return Ok(TypeExpr {
                span: start.to(inner.span),
                kind: TypeKind::Ref {
                    mutable,
                    inner: Box::new(inner),
                },
            });
        }
        if self.eat_punct("[") {
            let element = self.type_expr()?;
            self.expect_punct(";")?;
            let length = match self.peek() {
                Some(t) if t.kind == TokenKind::Identifier => {
                    self.pos += 1;
                    ArrayLen::Const(t.lexeme.clone())
                }
                Some(t) if t.kind == TokenKind::IntLiteral => {
                    ArrayLen::Literal(self.int_literal()?.0)
                }
                _ => return self.unexpected("array length (constant name or literal)"),
            };
            let end = self.expect_punct("]")?.span;
            return Ok(TypeExpr {
                kind: TypeKind::ArrayOf {
                    element: Box::new(element),
                    length,
                },
                span: start.to(end),
            });
        }
        self.unexpected("type")
    }

    // ---- statements --------------------------------------------------

    fn block(&mut self) -> PResult<Vec<Stmt>> {
        self.expect_punct("{")?;
        let mut stmts = Vec::new();
        while !self.check_punct("}") {
            if self.at_end() {
                return self.unexpected("`}`");
            }
            stmts.push(self.stmt()?);
        }
        self.bump();
        Ok(stmts)
    }

    fn stmt(&mut self) -> PResult<Stmt> {
        let start = self.here();
        if self.eat_keyword("let") {
            let mutable = self.eat_keyword("mut");
            let name = self.ident()?;
            if !self.check_punct(":") {
                return self.unexpected("`:` and a type annotation");
            }
            self.bump();
            let ty = self.type_expr()?;
            let init = if self.eat_punct("=") {
                Some(self.expr()?)
            } else {
                None
            };
            let end = self.expect_punct(";")?.span;
            return Ok(Stmt {
                kind: StmtKind::Let {
                    name,
                    ty,
                    mutable,
                    init,
                },
                span: start.to(end),
            });
        }
        if self.check_keyword("if") {
            return self.if_stmt();
        }
        if self.eat_keyword("for") {
            let var = self.ident()?;
            self.expect_keyword("in")?;
            let lower = self.expr()?;
            self.expect_punct("..")?;
            let upper = self.expr()?;
            let body = self.block()?;
            return Ok(Stmt {
                kind: StmtKind::ForRange {
                    var,
                    lower,
                    upper,
                    body,
                },
                span: start.to(self.prev_span()),
            });
        }
        if self.eat_keyword("return") {
            let value = self.expr()?;
            let end = self.expect_punct(";")?.span;
            return Ok(Stmt {
                kind: StmtKind::Return(value),
                span: start.to(end),
            });
        }
        for word in ["while", "loop", "break", "continue", "match"] {
            if self.check_ident(word) {
                return self.error(format!("`{word}` is not part of the RAR subset"));
            }
        }
        if self.peek().is_some_and(|t| t.kind == TokenKind::Identifier) {
            if self.peek_at(1).is_some_and(|t| t.is_punct("(")) {
                return self
                    .error("expression statements are not supported; bind the result with `let`");
            }
            let target = self.lvalue()?;
            self.expect_punct("=")?;
            let value = self.expr()?;
            let end = self.expect_punct(";")?.span;
            return Ok(Stmt {
                kind: StmtKind::Assign { target, value },
                span: start.to(end),
            });
        }
        self.unexpected("statement")
    }

    fn if_stmt(&mut self) -> PResult<Stmt> {
        let start = self.expect_keyword("if")?.span;
        let cond = self.expr()?;
        let then_body = self.block()?;
        let else_body = if self.eat_keyword("else") {
            if self.check_keyword("if") {
                Some(alloc::vec![self.if_stmt()?])
            } else {
                Some(self.block()?)
            }
        } else {
            None
        };
        Ok(Stmt {
            kind: StmtKind::If {
                cond,
                then_body,
                else_body,
            },
            span: start.to(self.prev_span()),
        })
    }

    fn lvalue(&mut self) -> PResult<LValue> {
        let root = self.ident()?;
        let mut path = Vec::new();
        loop {
            if self.eat_punct(".") {
                path.push(Place::Field(self.ident()?));
            } else if self.eat_punct("[") {
                let idx = self.expr()?;
                self.expect_punct("]")?;
                path.push(Place::Index(idx));
            } else {
                break;
            }
        }
        Ok(LValue {
            span: root.span.to(self.prev_span()),
            root,
            path,
        })
    }

    // ---- expressions -------------------------------------------------

    fn expr(&mut self) -> PResult<Expr> {
        self.binary(PREC_OR)
    }

    fn peek_binop(&self) -> Option<BinOp> {
        let t = self.peek()?;
        if t.kind != TokenKind::Punct {
            return None;
        }
        BinOp::from_symbol(&t.lexeme)
    }

    fn binary(&mut self, min_prec: u8) -> PResult<Expr> {
        let mut lhs = self.cast()?;
        while let Some(op) = self.peek_binop() {
            let prec = binary_prec(op);
            if prec < min_prec {
                break;
            }
            self.bump();
            let rhs = self.binary(prec + 1)?;
            if prec == PREC_CMP
                && self
                    .peek_binop()
                    .is_some_and(|o| binary_prec(o) == PREC_CMP)
            {
                return self.error("comparison operators cannot be chained; add parentheses");
            }
            let span = lhs.span.to(rhs.span);
            lhs = Expr {
                kind: ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)),
                span,
            };
        }
        Ok(lhs)
    }

    fn cast(&mut self) -> PResult<Expr> {
        let mut e = self.unary()?;
        while self.eat_keyword("as") {
            let ty = self.type_expr()?;
            let span = e.span.to(ty.span);
            e = Expr {
                kind: ExprKind::Cast(Box::new(e), ty),
                span,
            };
        }
        Ok(e)
    }

    fn unary(&mut self) -> PResult<Expr> {
        let start = self.here();
        let op = if self.eat_punct("-") {
            Some(UnOp::Neg)
        } else if self.eat_punct("!") {
            Some(UnOp::Not)
        } else {
            None
        };
        match op {
            Some(op) => {
                let operand = self.unary()?;
                Ok(Expr {
                    span: start.to(operand.span),
                    kind: ExprKind::Unary(op, Box::new(operand)),
                })
            }
            None => {
                if self.check_punct("&") || self.check_punct("*") {
                    return self
                        .error("references and dereferences are not part of the RAR subset");
                }
                self.postfix()
            }
        }
    }

    fn postfix(&mut self) -> PResult<Expr> {
        let mut e = self.primary()?;
        loop {
            if self.eat_punct(".") {
                let field = self.ident()?;
                if self.check_punct("(") {
                    return self.error("method calls are not part of the RAR subset");
                }
                let span = e.span.to(field.span);
                e = Expr {
                    kind: ExprKind::Field(Box::new(e), field),
                    span,
                };
            } else if self.eat_punct("[") {
                let idx = self.expr()?;
                let end = self.expect_punct("]")?.span;
                let span = e.span.to(end);
                e = Expr {
                    kind: ExprKind::Index(Box::new(e), Box::new(idx)),
                    span,
                };
            } else {
                return Ok(e);
            }
        }
    }

    fn primary(&mut self) -> PResult<Expr> {
        let Some(t) = self.peek() else {
            return self.unexpected("expression");
        };
        match t.kind {
            TokenKind::IntLiteral => {
                let (v, span) = self.int_literal()?;
                Ok(Expr {
                    kind: ExprKind::IntLit(v),
                    span,
                })
            }
            TokenKind::Keyword if t.lexeme == "true" || t.lexeme == "false" => {
                self.pos += 1;
                Ok(Expr {
                    kind: ExprKind::BoolLit(t.lexeme == "true"),
                    span: t.span,
                })
            }
            TokenKind::Identifier => {
                let name = self.ident()?;
                if self.eat_punct("(") {
                    let mut args = Vec::new();
                    while !self.check_punct(")") {
                        args.push(self.expr()?);
                        if !self.eat_punct(",") {
                            break;
                        }
                    }
                    let end = self.expect_punct(")")?.span;
                    Ok(Expr {
                        span: name.span.to(end),
                        kind: ExprKind::Call(name, args),
                    })
                } else {
                    Ok(Expr {
                        span: name.span,
                        kind: ExprKind::Var(name.name),
                    })
                }
            }
            TokenKind::Punct if t.lexeme == "(" => {
                self.pos += 1;
                let mut inner = self.expr()?;
                let end = self.expect_punct(")")?.span;
                inner.span = t.span.to(end);
                Ok(inner)
            }
            _ => self.unexpected("expression"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexer::tokenize;

    fn parse_src(src: &str) -> Result<Program, Vec<Diagnostic>> {
        parse(&tokenize(src, FileId(0)).unwrap())
    }

    #[test]
    fn arrayset_record() {
        let p = parse_src(
            "struct Arrayset { anext: [usize; ARR_SZ], avals: [i64; ARR_SZ], free_head: usize, used_head: usize, }",
        )
        .unwrap();
        let Item::Record(r) = &p.items[0] else {
            panic!("expected record")
        };
        let names: Vec<&str> = r.fields.iter().map(|f| f.name.as_str()).collect();
        assert_eq!(names, ["anext", "avals", "free_head", "used_head"]);
        assert!(!r.copy_derive);
        let TypeKind::ArrayOf { element, length } = &r.fields[1].ty.kind else {
            panic!("expected array field")
        };
        assert_eq!(element.kind, TypeKind::SignedInt(IntWidth::W64));
        assert_eq!(*length, ArrayLen::Const("ARR_SZ".into()));
    }

    #[test]
    fn truncated_fn_reports_at_end() {
        let src = "fn f() ->";
        let diags = parse_src(src).unwrap_err();
        assert_eq!(diags.len(), 1);
        assert!(diags[0].is_error());
        assert_eq!(diags[0].span, SourceSpan::point(FileId(0), 1, 10));
    }

    #[test]
    fn both_mut_spellings() {
        let p = parse_src(
            "fn a(x: mut Arrayset) -> Arrayset { return x; }\nfn b(mut x: Arrayset) -> Arrayset { return x; }",
        )
        .unwrap();
        for f in p.functions() {
            assert!(f.params[0].mutable);
            assert_eq!(f.params[0].ty.kind, TypeKind::Named("Arrayset".into()));
        }
    }

    #[test]
    fn precedence_follows_rust() {
        let p = parse_src("fn f(a: u8, b: u8) -> bool { return a & b == 1 || a < 2 && b > 3; }")
            .unwrap();
        let text = render_ast(&p);
        assert!(
            text.contains("(|| (== (& a b) 1) (&& (< a 2) (> b 3)))"),
            "{text}"
        );
    }

    #[test]
    fn cast_binds_tighter_than_mul() {
        let p = parse_src("fn f(a: i64) -> usize { return -a as usize * 2; }").unwrap();
        assert!(render_ast(&p).contains("(* (as (- a) usize) 2)"));
    }

    #[test]
    fn chained_comparison_rejected() {
        assert!(parse_src("fn f(a: u8) -> bool { return a < 1 < 2; }").is_err());
    }

    #[test]
    fn other_attributes_rejected() {
        let diags = parse_src("#[repr(C)] struct S { a: u8 }").unwrap_err();
        assert!(diags[0].message.contains("derive(Copy, Clone)"));
        assert!(parse_src("#[derive(Debug)] struct S { a: u8 }").is_err());
        assert!(parse_src("#[derive(Clone, Copy)] struct S { a: u8 }").is_ok());
    }

    #[test]
    fn while_rejected() {
        let diags = parse_src("fn f() -> u8 { while x { } return 0; }").unwrap_err();
        assert!(diags[0].message.contains("while"));
    }

    #[test]
    fn recovery_reports_each_bad_item() {
        let diags =
            parse_src("fn f( { }\nconst A: usize = ;\nfn g() -> u8 { return 0; }").unwrap_err();
        assert_eq!(diags.len(), 2);
    }

    #[test]
    fn static_items_parse() {
        let p = parse_src("static mut COUNTER: usize = 0;").unwrap();
        assert!(matches!(&p.items[0], Item::Static(s) if s.mutable));
    }

    #[test]
    fn else_if_nests() {
        let p = parse_src("fn f(a: u8) -> u8 { if a == 0 { return 1; } else if a == 1 { return 2; } else { return 3; } }").unwrap();
        let f = p.function("f").unwrap();
        let StmtKind::If {
            else_body: Some(e), ..
        } = &f.body[0].kind
        else {
            panic!()
        };
        assert!(matches!(e[0].kind, StmtKind::If { .. }));
    }

    #[test]
    fn reference_types_parse() {
        let p = parse_src("fn f(a: &mut Arrayset) -> u8 { return 0; }").unwrap();
        assert!(matches!(
            p.functions().next().unwrap().params[0].ty.kind,
            TypeKind::Ref { mutable: true, .. }
        ));
    }
}
