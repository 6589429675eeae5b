//! Syntax tree for Restricted Algorithmic Rust.
//!
//! Every node the parser builds carries the [`SourceSpan`] of the text it was
//! parsed from. Nodes are plain immutable data; all behaviour lives in the
//! lexer, parser, checker and emitter.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::{self, Write};

use crate::span::SourceSpan;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Identifier,
    IntLiteral,
    Keyword,
    Punct,
    Comment,
    /// The `#` that opens an attribute.
    AttributeMarker,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    /// Exact source text of the token.
    pub lexeme: String,
    pub span: SourceSpan,
    /// Byte offset of the first character of `lexeme` in the source.
    pub offset: usize,
}

impl Token {
    pub fn is(&self, kind: TokenKind, lexeme: &str) -> bool {
        self.kind == kind && self.lexeme == lexeme
    }

    pub fn is_punct(&self, p: &str) -> bool {
        self.is(TokenKind::Punct, p)
    }

    pub fn is_keyword(&self, k: &str) -> bool {
        self.is(TokenKind::Keyword, k)
    }
}

/// A name together with where it was written.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ident {
    pub name: String,
    pub span: SourceSpan,
}

impl Ident {
    pub fn as_str(&self) -> &str {
        &self.name
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Program {
    pub items: Vec<Item>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Item {
    Const(ConstDef),
    /// `static` items are parsed so the checker can reject them.
    Static(StaticDef),
    Record(RecordDef),
    Fn(FnDef),
}

impl Item {
    pub fn name(&self) -> &Ident {
        match self {
            Item::Const(c) => &c.name,
            Item::Static(s) => &s.name,
            Item::Record(r) => &r.name,
            Item::Fn(f) => &f.name,
        }
    }

    pub fn span(&self) -> SourceSpan {
        match self {
            Item::Const(c) => c.span,
            Item::Static(s) => s.span,
            Item::Record(r) => r.span,
            Item::Fn(f) => f.span,
        }
    }
}

impl Program {
    pub fn consts(&self) -> impl Iterator<Item = &ConstDef> {
        self.items.iter().filter_map(|i| match i {
            Item::Const(c) => Some(c),
            _ => None,
        })
    }

    pub fn records(&self) -> impl Iterator<Item = &RecordDef> {
        self.items.iter().filter_map(|i| match i {
            Item::Record(r) => Some(r),
            _ => None,
        })
    }

    pub fn functions(&self) -> impl Iterator<Item = &FnDef> {
        self.items.iter().filter_map(|i| match i {
            Item::Fn(f) => Some(f),
            _ => None,
        })
    }

    pub fn function(&self, name: &str) -> Option<&FnDef> {
        self.functions().find(|f| f.name.name == name)
    }

    pub fn record(&self, name: &str) -> Option<&RecordDef> {
        self.records().find(|r| r.name.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstDef {
    pub name: Ident,
    pub ty: TypeExpr,
    pub value: u64,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StaticDef {
    pub name: Ident,
    pub mutable: bool,
    pub ty: TypeExpr,
    pub value: Expr,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecordDef {
    pub name: Ident,
    pub fields: Vec<FieldDef>,
    /// Whether `#[derive(Copy, Clone)]` was present. Recorded, never emitted.
    pub copy_derive: bool,
    pub span: SourceSpan,
}

impl RecordDef {
    pub fn field(&self, name: &str) -> Option<&FieldDef> {
        self.fields.iter().find(|f| f.name.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldDef {
    pub name: Ident,
    pub ty: TypeExpr,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FnDef {
    pub name: Ident,
    pub params: Vec<Param>,
    pub return_type: TypeExpr,
    pub body: Vec<Stmt>,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Param {
    pub name: Ident,
    pub ty: TypeExpr,
    pub mutable: bool,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IntWidth {
    W8,
    W16,
    W32,
    W64,
}

impl IntWidth {
    pub fn bits(self) -> u32 {
        match self {
            IntWidth::W8 => 8,
            IntWidth::W16 => 16,
            IntWidth::W32 => 32,
            IntWidth::W64 => 64,
        }
    }

    pub fn from_bits(bits: u32) -> Option<Self> {
        match bits {
            8 => Some(IntWidth::W8),
            16 => Some(IntWidth::W16),
            32 => Some(IntWidth::W32),
            64 => Some(IntWidth::W64),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeExpr {
    pub kind: TypeKind,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TypeKind {
    /// `usize`, or the `uint` alias when `uint_alias` is set.
    UnsignedIndex {
        uint_alias: bool,
    },
    SignedInt(IntWidth),
    UnsignedInt(IntWidth),
    Bool,
    ArrayOf {
        element: Box<TypeExpr>,
        length: ArrayLen,
    },
    Named(String),
    /// `&T` / `&mut T`. Never valid RAR; kept so the checker can say why.
    Ref {
        mutable: bool,
        inner: Box<TypeExpr>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ArrayLen {
    Const(String),
    Literal(u64),
}

impl fmt::Display for ArrayLen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArrayLen::Const(name) => f.write_str(name),
            ArrayLen::Literal(n) => write!(f, "{n}"),
        }
    }
}

impl TypeKind {
    pub fn is_index(&self) -> bool {
        matches!(self, TypeKind::UnsignedIndex { .. })
    }

    pub fn is_integer(&self) -> bool {
        matches!(
            self,
            TypeKind::UnsignedIndex { .. } | TypeKind::SignedInt(_) | TypeKind::UnsignedInt(_)
        )
    }

    pub fn is_scalar(&self) -> bool {
        self.is_integer() || matches!(self, TypeKind::Bool)
    }

    /// Structural equality that treats `uint` and `usize` as the same type.
    pub fn same_as(&self, other: &TypeKind) -> bool {
        match (self, other) {
            (TypeKind::UnsignedIndex { .. }, TypeKind::UnsignedIndex { .. }) => true,
            (
                TypeKind::ArrayOf {
                    element: a,
                    length: la,
                },
                TypeKind::ArrayOf {
                    element: b,
                    length: lb,
                },
            ) => la == lb && a.kind.same_as(&b.kind),
            (
                TypeKind::Ref {
                    mutable: ma,
                    inner: a,
                },
                TypeKind::Ref {
                    mutable: mb,
                    inner: b,
                },
            ) => ma == mb && a.kind.same_as(&b.kind),
            (a, b) => a == b,
        }
    }
}

impl fmt::Display for TypeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeKind::UnsignedIndex { uint_alias: false } => f.write_str("usize"),
            TypeKind::UnsignedIndex { uint_alias: true } => f.write_str("uint"),
            TypeKind::SignedInt(w) => write!(f, "i{}", w.bits()),
            TypeKind::UnsignedInt(w) => write!(f, "u{}", w.bits()),
            TypeKind::Bool => f.write_str("bool"),
            TypeKind::ArrayOf { element, length } => write!(f, "[{}; {}]", element.kind, length),
            TypeKind::Named(n) => f.write_str(n),
            TypeKind::Ref {
                mutable: true,
                inner,
            } => write!(f, "&mut {}", inner.kind),
            TypeKind::Ref {
                mutable: false,
                inner,
            } => write!(f, "&{}", inner.kind),
        }
    }
}

impl fmt::Display for TypeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.kind.fmt(f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stmt {
    pub kind: StmtKind,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StmtKind {
    Let {
        name: Ident,
        ty: TypeExpr,
        mutable: bool,
        init: Option<Expr>,
    },
    Assign {
        target: LValue,
        value: Expr,
    },
    If {
        cond: Expr,
        then_body: Vec<Stmt>,
        else_body: Option<Vec<Stmt>>,
    },
    /// `for var in lower..upper { body }`
    ForRange {
        var: Ident,
        lower: Expr,
        upper: Expr,
        body: Vec<Stmt>,
    },
    Return(Expr),
}

/// Assignment target: a variable followed by field and index steps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LValue {
    pub root: Ident,
    pub path: Vec<Place>,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Place {
    Field(Ident),
    Index(Expr),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprKind {
    IntLit(u64),
    BoolLit(bool),
    Var(String),
    Field(Box<Expr>, Ident),
    Index(Box<Expr>, Box<Expr>),
    Call(Ident, Vec<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Unary(UnOp, Box<Expr>),
    Cast(Box<Expr>, TypeExpr),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Rem,
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
    And,
    Or,
    BitAnd,
    BitOr,
    BitXor,
    Shl,
    Shr,
}

impl BinOp {
    pub const ALL: [BinOp; 18] = [
        BinOp::Add,
        BinOp::Sub,
        BinOp::Mul,
        BinOp::Div,
        BinOp::Rem,
        BinOp::Lt,
        BinOp::Le,
        BinOp::Gt,
        BinOp::Ge,
        BinOp::Eq,
        BinOp::Ne,
        BinOp::And,
        BinOp::Or,
        BinOp::BitAnd,
        BinOp::BitOr,
        BinOp::BitXor,
        BinOp::Shl,
        BinOp::Shr,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Rem => "%",
            BinOp::Lt => "<",
            BinOp::Le => "<=",
            BinOp::Gt => ">",
            BinOp::Ge => ">=",
            BinOp::Eq => "==",
            BinOp::Ne => "!=",
            BinOp::And => "&&",
            BinOp::Or => "||",
            BinOp::BitAnd => "&",
            BinOp::BitOr => "|",
            BinOp::BitXor => "^",
            BinOp::Shl => "<<",
            BinOp::Shr => ">>",
        }
    }

    pub fn from_symbol(s: &str) -> Option<BinOp> {
        BinOp::ALL.iter().copied().find(|op| op.symbol() == s)
    }

    pub fn is_comparison(self) -> bool {
        matches!(
            self,
            BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge | BinOp::Eq | BinOp::Ne
        )
    }

    pub fn is_logical(self) -> bool {
        matches!(self, BinOp::And | BinOp::Or)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnOp {
    Neg,
    Not,
}

impl UnOp {
    pub fn symbol(self) -> &'static str {
        match self {
            UnOp::Neg => "-",
            UnOp::Not => "!",
        }
    }
}

/// Stable, indented S-expression dump of `program`, one item per top-level
/// form. Used for golden tests and debugging.
pub fn render_ast(program: &Program) -> String {
    let mut out = String::new();
    for item in &program.items {
        render_item(&mut out, item);
    }
    out
}

fn render_item(out: &mut String, item: &Item) {
    match item {
        Item::Const(c) => {
            let _ = writeln!(out, "(const {} {} {})", c.name.name, c.ty, c.value);
        }
        Item::Static(s) => {
            let _ = writeln!(
                out,
                "(static{} {} {} {})",
                if s.mutable { " mut" } else { "" },
                s.name.name,
                s.ty,
                ExprDump(&s.value)
            );
        }
        Item::Record(r) => {
            let _ = writeln!(
                out,
                "(record {}{}",
                r.name.name,
                if r.copy_derive { " copy" } else { "" }
            );
            for f in &r.fields {
                let _ = writeln!(out, "  (field {} {})", f.name.name, f.ty);
            }
            out.push_str(")\n");
        }
        Item::Fn(f) => {
            let _ = write!(out, "(fn {} (", f.name.name);
            for (i, p) in f.params.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                let _ = write!(
                    out,
                    "({}{} {})",
                    if p.mutable { "mut " } else { "" },
                    p.name.name,
                    p.ty
                );
            }
            let _ = writeln!(out, ") -> {}", f.return_type);
            render_block(out, &f.body, 1);
            out.push_str(")\n");
        }
    }
}

fn indent(out: &mut String, depth: usize) {
    for _ in 0..depth {
        out.push_str("  ");
    }
}

fn render_block(out: &mut String, body: &[Stmt], depth: usize) {
    for stmt in body {
        render_stmt(out, stmt, depth);
    }
}

fn render_stmt(out: &mut String, stmt: &Stmt, depth: usize) {
    indent(out, depth);
    match &stmt.kind {
        StmtKind::Let {
            name,
            ty,
            mutable,
            init,
        } => {
            let m = if *mutable { "mut " } else { "" };
            match init {
                Some(e) => {
                    let _ = writeln!(out, "(let {m}{} {} {})", name.name, ty, ExprDump(e));
                }
                None => {
                    let _ = writeln!(out, "(let {m}{} {})", name.name, ty);
                }
            }
        }
        StmtKind::Assign { target, value } => {
            let _ = writeln!(out, "(set {} {})", LValueDump(target), ExprDump(value));
        }
        StmtKind::If {
            cond,
            then_body,
            else_body,
        } => {
            let _ = writeln!(out, "(if {}", ExprDump(cond));
            indent(out, depth + 1);
            out.push_str("(then\n");
            render_block(out, then_body, depth + 2);
            indent(out, depth + 1);
            out.push_str(")\n");
            if let Some(else_body) = else_body {
                indent(out, depth + 1);
                out.push_str("(else\n");
                render_block(out, else_body, depth + 2);
                indent(out, depth + 1);
                out.push_str(")\n");
            }
            indent(out, depth);
            out.push_str(")\n");
        }
        StmtKind::ForRange {
            var,
            lower,
            upper,
            body,
        } => {
            let _ = writeln!(
                out,
                "(for {} {} {}",
                var.name,
                ExprDump(lower),
                ExprDump(upper)
            );
            render_block(out, body, depth + 1);
            indent(out, depth);
            out.push_str(")\n");
        }
        StmtKind::Return(e) => {
            let _ = writeln!(out, "(return {})", ExprDump(e));
        }
    }
}

struct ExprDump<'a>(&'a Expr);

impl fmt::Display for ExprDump<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.kind {
            ExprKind::IntLit(n) => write!(f, "{n}"),
            ExprKind::BoolLit(b) => write!(f, "{b}"),
            ExprKind::Var(v) => f.write_str(v),
            ExprKind::Field(base, field) => write!(f, "(. {} {})", ExprDump(base), field.name),
            ExprKind::Index(base, idx) => write!(f, "([] {} {})", ExprDump(base), ExprDump(idx)),
            ExprKind::Call(callee, args) => {
                write!(f, "(call {}", callee.name)?;
                for a in args {
                    write!(f, " {}", ExprDump(a))?;
                }
                f.write_str(")")
            }
            ExprKind::Binary(op, l, r) => {
                write!(f, "({} {} {})", op.symbol(), ExprDump(l), ExprDump(r))
            }
            ExprKind::Unary(op, e) => write!(f, "({} {})", op.symbol(), ExprDump(e)),
            ExprKind::Cast(e, t) => write!(f, "(as {} {})", ExprDump(e), t),
        }
    }
}

struct LValueDump<'a>(&'a LValue);

impl fmt::Display for LValueDump<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lv = self.0;
        for step in lv.path.iter().rev() {
            match step {
                Place::Field(_) => f.write_str("(. ")?,
                Place::Index(_) => f.write_str("([] ")?,
            }
        }
        f.write_str(&lv.root.name)?;
        for step in &lv.path {
            match step {
                Place::Field(name) => write!(f, " {})", name.name)?,
                Place::Index(e) => write!(f, " {})", ExprDump(e))?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::span::{FileId, SourceSpan};
    use alloc::vec;

    fn sp() -> SourceSpan {
        SourceSpan::point(FileId(0), 1, 1)
    }

    fn ident(name: &str) -> Ident {
        Ident {
            name: name.into(),
            span: sp(),
        }
    }

    fn arr_sz() -> Program {
        Program {
            items: vec![Item::Const(ConstDef {
                name: ident("ARR_SZ"),
                ty: TypeExpr {
                    kind: TypeKind::UnsignedIndex { uint_alias: true },
                    span: sp(),
                },
                value: 256,
                span: sp(),
            })],
        }
    }

    #[test]
    fn empty_program_renders_empty() {
        assert_eq!(render_ast(&Program::default()), "");
    }

    #[test]
    fn const_renders_name_type_value_once() {
        let text = render_ast(&arr_sz());
        assert_eq!(text, "(const ARR_SZ uint 256)\n");
        assert_eq!(text.matches("ARR_SZ").count(), 1);
        assert_eq!(text.matches("256").count(), 1);
    }

    #[test]
    fn render_is_deterministic() {
        let p = arr_sz();
        assert_eq!(render_ast(&p), render_ast(&p));
    }

    #[test]
    fn lvalue_dump_nests_steps() {
        let lv = LValue {
            root: ident("aset"),
            path: vec![
                Place::Field(ident("anext")),
                Place::Index(Expr {
                    kind: ExprKind::Var("i".into()),
                    span: sp(),
                }),
            ],
            span: sp(),
        };
        assert_eq!(
            alloc::format!("{}", LValueDump(&lv)),
            "([] (. aset anext) i)"
        );
    }

    #[test]
    fn binop_symbols_round_trip() {
        for op in BinOp::ALL {
            assert_eq!(BinOp::from_symbol(op.symbol()), Some(op));
        }
    }
}
