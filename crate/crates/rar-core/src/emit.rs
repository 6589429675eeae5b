//! RAC (C++) text generation.
//!
//! Emission is a direct walk of the syntax tree: statements keep their
//! order, records and arrays stay by-value, and expressions are re-printed
//! with parentheses chosen for C precedence rather than copied from the
//! source.

use alloc::string::String;
use core::fmt::{self, Write};

use crate::ast::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Dialect {
    AlgorithmicC,
    VivadoHLS,
    #[default]
    PlainCxx,
}

impl Dialect {
    pub const ALL: [Dialect; 3] = [Dialect::AlgorithmicC, Dialect::VivadoHLS, Dialect::PlainCxx];

    /// Command-line spelling: `ac`, `vivado` or `plain`.
    pub fn flag(self) -> &'static str {
        match self {
            Dialect::AlgorithmicC => "ac",
            Dialect::VivadoHLS => "vivado",
            Dialect::PlainCxx => "plain",
        }
    }

    pub fn from_flag(flag: &str) -> Option<Dialect> {
        Dialect::ALL.into_iter().find(|d| d.flag() == flag)
    }
}

impl fmt::Display for Dialect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.flag())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EmitOptions {
    pub dialect: Dialect,
    indent_width: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndentWidthError(pub u8);

impl fmt::Display for IndentWidthError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "indent width {} is outside 1..=8", self.0)
    }
}

impl EmitOptions {
    pub const DEFAULT_INDENT: u8 = 2;

    pub fn new(dialect: Dialect, indent_width: u8) -> Result<Self, IndentWidthError> {
        if !(1..=8).contains(&indent_width) {
            return Err(IndentWidthError(indent_width));
        }
        Ok(EmitOptions {
            dialect,
            indent_width,
        })
    }

    pub fn with_dialect(dialect: Dialect) -> Self {
        EmitOptions {
            dialect,
            indent_width: Self::DEFAULT_INDENT,
        }
    }

    pub fn indent_width(&self) -> u8 {
        self.indent_width
    }
}

impl Default for EmitOptions {
    fn default() -> Self {
        Self::with_dialect(Dialect::PlainCxx)
    }
}

const BANNER: &str = "// Restricted Algorithmic C generated from RAR source.\n";

const INT_HEADERS: &str = "\
#if defined(RAC_TARGET_VIVADO_HLS)
#include <ap_int.h>
typedef ap_uint<8> ui8;
typedef ap_uint<16> ui16;
typedef ap_uint<32> ui32;
typedef ap_uint<64> ui64;
typedef ap_int<8> si8;
typedef ap_int<16> si16;
typedef ap_int<32> si32;
typedef ap_int<64> si64;
#elif defined(RAC_TARGET_ALGORITHMIC_C)
#include <ac_int.h>
typedef ac_int<8, false> ui8;
typedef ac_int<16, false> ui16;
typedef ac_int<32, false> ui32;
typedef ac_int<64, false> ui64;
typedef ac_int<8, true> si8;
typedef ac_int<16, true> si16;
typedef ac_int<32, true> si32;
typedef ac_int<64, true> si64;
#else
#error \"define RAC_TARGET_ALGORITHMIC_C or RAC_TARGET_VIVADO_HLS\"
#endif
#include <array>
using std::array;
typedef unsigned int uint;
";

/// Preprocessor prologue for `dialect`. The two HLS dialects share one
/// conditional block and differ only in which target symbol they define by
/// default.
pub fn header_prologue(dialect: Dialect) -> String {
    let mut out = String::from(BANNER);
    match dialect {
        Dialect::PlainCxx => out.push_str("#include \"rac_shim.h\"\n"),
        Dialect::AlgorithmicC => {
            out.push_str(
                "#ifndef RAC_TARGET_VIVADO_HLS\n#define RAC_TARGET_ALGORITHMIC_C\n#endif\n",
            );
            out.push_str(INT_HEADERS);
        }
        Dialect::VivadoHLS => {
            out.push_str(
                "#ifndef RAC_TARGET_ALGORITHMIC_C\n#define RAC_TARGET_VIVADO_HLS\n#endif\n",
            );
            out.push_str(INT_HEADERS);
        }
    }
    out
}

/// RAC spelling of a RAR type.
pub fn map_type(t: &TypeKind) -> String {
    let mut s = String::new();
    write_type(&mut s, t);
    s
}

fn write_type(out: &mut String, t: &TypeKind) {
    let _ = match t {
        TypeKind::UnsignedIndex { .. } => write!(out, "uint"),
        TypeKind::UnsignedInt(w) => write!(out, "ui{}", w.bits()),
        TypeKind::SignedInt(w) => write!(out, "si{}", w.bits()),
        TypeKind::Bool => write!(out, "bool"),
        TypeKind::ArrayOf { element, length } => {
            out.push_str("array<");
            write_type(out, &element.kind);
            write!(out, ", {length}>")
        }
        TypeKind::Named(name) => write!(out, "{name}"),
        // Rejected by the checker (R001); spelled as C++ references if seen.
        TypeKind::Ref { inner, .. } => {
            write_type(out, &inner.kind);
            write!(out, "&")
        }
    };
}

/// Emits the whole program. `program` is expected to have passed
/// [`crate::check_program`] without errors.
pub fn emit_program(program: &Program, opts: &EmitOptions) -> String {
    let mut e = Emitter {
        out: header_prologue(opts.dialect),
        indent: opts.indent_width as usize,
    };
    for item in &program.items {
        match item {
            Item::Const(c) => {
                e.out.push('\n');
                let _ = writeln!(
                    e.out,
                    "const {} {} = {};",
                    map_type(&c.ty.kind),
                    c.name.name,
                    c.value
                );
            }
            Item::Record(r) => e.record(r),
            Item::Fn(f) => e.function(f),
            Item::Static(_) => {}
        }
    }
    e.out
}

struct Emitter {
    out: String,
    indent: usize,
}

impl Emitter {
    fn pad(&mut self, depth: usize) {
        for _ in 0..depth * self.indent {
            self.out.push(' ');
        }
    }

    fn record(&mut self, r: &RecordDef) {
        let _ = writeln!(self.out, "\nstruct {} {{", r.name.name);
        for f in &r.fields {
            self.pad(1);
            let _ = writeln!(self.out, "{} {};", map_type(&f.ty.kind), f.name.name);
        }
        self.out.push_str("};\n");
    }

    fn function(&mut self, f: &FnDef) {
        let _ = write!(
            self.out,
            "\n{} {}(",
            map_type(&f.return_type.kind),
            f.name.name
        );
        for (i, p) in f.params.iter().enumerate() {
            if i > 0 {
                self.out.push_str(", ");
            }
            let _ = write!(self.out, "{} {}", map_type(&p.ty.kind), p.name.name);
        }
        self.out.push_str(") {\n");
        self.block(&f.body, 1);
        self.out.push_str("}\n");
    }

    fn block(&mut self, body: &[Stmt], depth: usize) {
        for s in body {
            self.stmt(s, depth);
        }
    }

    fn stmt(&mut self, s: &Stmt, depth: usize) {
        self.pad(depth);
        match &s.kind {
            StmtKind::Let { name, ty, init, .. } => {
                let _ = write!(self.out, "{} {}", map_type(&ty.kind), name.name);
                if let Some(init) = init {
                    let _ = write!(self.out, " = {}", CExpr(init, 0));
                }
                self.out.push_str(";\n");
            }
            StmtKind::Assign { target, value } => {
                self.out.push_str(&target.root.name);
                for step in &target.path {
                    let _ = match step {
                        Place::Field(f) => write!(self.out, ".{}", f.name),
                        Place::Index(i) => write!(self.out, "[{}]", CExpr(i, 0)),
                    };
                }
                let _ = writeln!(self.out, " = {};", CExpr(value, 0));
            }
            StmtKind::If {
                cond,
                then_body,
                else_body,
            } => {
                let _ = writeln!(self.out, "if ({}) {{", CExpr(cond, 0));
                self.block(then_body, depth + 1);
                self.pad(depth);
                match else_body {
                    Some(else_body) => {
                        self.out.push_str("} else {\n");
                        self.block(else_body, depth + 1);
                        self.pad(depth);
                        self.out.push_str("}\n");
                    }
                    None => self.out.push_str("}\n"),
                }
            }
            StmtKind::ForRange {
                var,
                lower,
                upper,
                body,
            } => {
                let v = &var.name;
                let _ = writeln!(
                    self.out,
                    "for (uint {v} = {}; {v} < {}; {v}++) {{",
                    CExpr(lower, 0),
                    CExpr(upper, C_REL + 1)
                );
                self.block(body, depth + 1);
                self.pad(depth);
                self.out.push_str("}\n");
            }
            StmtKind::Return(e) => {
                let _ = writeln!(self.out, "return {};", CExpr(e, 0));
            }
        }
    }
}

// C binding strengths, loosest first.
const C_OR: u8 = 3;
const C_AND: u8 = 4;
const C_BITOR: u8 = 5;
const C_BITXOR: u8 = 6;
const C_BITAND: u8 = 7;
const C_EQ: u8 = 8;
const C_REL: u8 = 9;
const C_SHIFT: u8 = 10;
const C_ADD: u8 = 11;
const C_MUL: u8 = 12;
const C_UNARY: u8 = 13;

fn c_prec(op: BinOp) -> u8 {
    match op {
        BinOp::Or => C_OR,
        BinOp::And => C_AND,
        BinOp::BitOr => C_BITOR,
        BinOp::BitXor => C_BITXOR,
        BinOp::BitAnd => C_BITAND,
        BinOp::Eq | BinOp::Ne => C_EQ,
        BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge => C_REL,
        BinOp::Shl | BinOp::Shr => C_SHIFT,
        BinOp::Add | BinOp::Sub => C_ADD,
        BinOp::Mul | BinOp::Div | BinOp::Rem => C_MUL,
    }
}

fn expr_prec(e: &Expr) -> u8 {
    match &e.kind {
        ExprKind::Binary(op, ..) => c_prec(*op),
        ExprKind::Unary(..) | ExprKind::Cast(..) => C_UNARY,
        _ => u8::MAX,
    }
}

/// Parentheses that C precedence does not require but that keep the
/// output free of `-Wparentheses` warnings and readable: `&&` inside `||`,
/// any other operator inside bitwise and shift operators, and comparisons
/// inside comparisons.
fn clarify(parent: BinOp, child: &Expr) -> bool {
    let ExprKind::Binary(child_op, ..) = &child.kind else {
        return false;
    };
    match parent {
        BinOp::Or => *child_op == BinOp::And,
        BinOp::BitAnd | BinOp::BitOr | BinOp::BitXor | BinOp::Shl | BinOp::Shr => {
            *child_op != parent
        }
        p if p.is_comparison() => child_op.is_comparison(),
        _ => false,
    }
}

/// An expression printed in a context that binds with strength `.1`.
struct CExpr<'a>(&'a Expr, u8);

impl fmt::Display for CExpr<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let CExpr(e, ctx) = *self;
        let wrap = expr_prec(e) < ctx;
        if wrap {
            f.write_str("(")?;
        }
        match &e.kind {
            ExprKind::IntLit(v) => write!(f, "{v}")?,
            ExprKind::BoolLit(b) => write!(f, "{b}")?,
            ExprKind::Var(name) => f.write_str(name)?,
            ExprKind::Field(base, field) => write!(f, "{}.{}", CExpr(base, u8::MAX), field.name)?,
            ExprKind::Index(base, idx) => write!(f, "{}[{}]", CExpr(base, u8::MAX), CExpr(idx, 0))?,
            ExprKind::Call(callee, args) => {
                write!(f, "{}(", callee.name)?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{}", CExpr(a, 0))?;
                }
                f.write_str(")")?;
            }
            ExprKind::Binary(op, l, r) => {
                let p = c_prec(*op);
                let lctx = if clarify(*op, l) { u8::MAX } else { p };
                let rctx = if clarify(*op, r) { u8::MAX } else { p + 1 };
                write!(f, "{} {} {}", CExpr(l, lctx), op.symbol(), CExpr(r, rctx))?;
            }
            ExprKind::Unary(op, operand) => {
                // Nested unary operands are parenthesized so `- -x` never
                // prints as the decrement token.
                let ctx = if matches!(operand.kind, ExprKind::Unary(..)) {
                    u8::MAX
                } else {
                    C_UNARY
                };
                write!(f, "{}{}", op.symbol(), CExpr(operand, ctx))?;
            }
            ExprKind::Cast(inner, ty) => {
                write!(f, "({}){}", map_type(&ty.kind), CExpr(inner, u8::MAX))?;
            }
        }
        if wrap {
            f.write_str(")")?;
        }
        Ok(())
    }
}
