//! RAR subset rules.
//!
//! [`check_program`] walks a parsed [`Program`] once per function, keeping a
//! small scope stack to type expressions, and then inspects the call graph.
//! Every diagnostic it produces cites an entry of [`RULES`].

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::ast::*;
use crate::span::{Diagnostic, Severity, SourceSpan};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rule {
    pub code: &'static str,
    pub severity: Severity,
    pub description: &'static str,
}

const fn rule(code: &'static str, severity: Severity, description: &'static str) -> Rule {
    Rule {
        code,
        severity,
        description,
    }
}

/// The documented rule table. Codes are unique.
pub const RULES: &[Rule] = &[
    rule("L001", Severity::Error, "unknown character in source"),
    rule("L002", Severity::Error, "unterminated block comment"),
    rule("P001", Severity::Error, "syntax error"),
    rule(
        "R001",
        Severity::Error,
        "no reference-typed parameters, locals or results; aggregates pass and return by value",
    ),
    rule("R002", Severity::Error, "no recursion, direct or mutual"),
    rule(
        "R003",
        Severity::Error,
        "loop bounds are compile-time constants; the loop variable is not assigned and loop bodies do not return",
    ),
    rule("R004", Severity::Error, "array index expressions have type usize"),
    rule(
        "R005",
        Severity::Error,
        "no global state; only `const` items at top level",
    ),
    rule("R006", Severity::Error, "every function returns on all paths"),
    rule(
        "R007",
        Severity::Error,
        "calls only to functions defined in the same program, with matching arity",
    ),
    rule(
        "R008",
        Severity::Error,
        "functions are declared before use (callee precedes caller)",
    ),
    rule(
        "R009",
        Severity::Error,
        "names resolve: no duplicates, no undeclared names, assignments only to mutable bindings",
    ),
    rule(
        "R010",
        Severity::Error,
        "well-typed declarations and expressions",
    ),
    rule(
        "W001",
        Severity::Warning,
        "`uint` is accepted as an alias for `usize` but is not a Rust type",
    ),
];

pub fn lookup_rule(code: &str) -> Option<&'static Rule> {
    RULES.iter().find(|r| r.code == code)
}

/// Compile-time constant bindings, by name.
pub type ConstEnv = BTreeMap<String, u64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstEvalError {
    NonConstant(SourceSpan),
    Underflow(SourceSpan),
    Overflow(SourceSpan),
}

impl ConstEvalError {
    pub fn span(&self) -> SourceSpan {
        match *self {
            ConstEvalError::NonConstant(s)
            | ConstEvalError::Underflow(s)
            | ConstEvalError::Overflow(s) => s,
        }
    }
}

impl fmt::Display for ConstEvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstEvalError::NonConstant(_) => {
                f.write_str("expression is not a compile-time constant")
            }
            ConstEvalError::Underflow(_) => {
                f.write_str("constant expression underflows below zero")
            }
            ConstEvalError::Overflow(_) => f.write_str("constant expression overflows"),
        }
    }
}

/// Evaluates an expression built from integer literals, constant names and
/// `+`, `-`, `*`.
pub fn evaluate_const(expr: &Expr, env: &ConstEnv) -> Result<u64, ConstEvalError> {
    match &expr.kind {
        ExprKind::IntLit(v) => Ok(*v),
        ExprKind::Var(name) => env
            .get(name)
            .copied()
            .ok_or(ConstEvalError::NonConstant(expr.span)),
        ExprKind::Binary(op, l, r) => {
            let (a, b) = (evaluate_const(l, env)?, evaluate_const(r, env)?);
            match op {
                BinOp::Add => a.checked_add(b).ok_or(ConstEvalError::Overflow(expr.span)),
                BinOp::Mul => a.checked_mul(b).ok_or(ConstEvalError::Overflow(expr.span)),
                BinOp::Sub => a.checked_sub(b).ok_or(ConstEvalError::Underflow(expr.span)),
                _ => Err(ConstEvalError::NonConstant(expr.span)),
            }
        }
        _ => Err(ConstEvalError::NonConstant(expr.span)),
    }
}

/// Returns every subset-rule violation in `program`, ordered by source
/// position. An empty result means the program is valid RAR.
pub fn check_program(program: &Program) -> Vec<Diagnostic> {
    let mut cx = Checker::new(program);
    cx.check_items();
    for (index, f) in program.functions().enumerate() {
        cx.check_function(index, f);
    }
    cx.check_call_graph();
    let mut diags = cx.diags;
    diags.sort_by_key(|d| (d.span.start(), d.rule_code));
    diags
}

/// Places see through references the way Rust auto-derefs them; the
/// reference itself is an R001 error reported at its declaration.
fn deref(t: &TypeKind) -> &TypeKind {
    match t {
        TypeKind::Ref { inner, .. } => deref(&inner.kind),
        other => other,
    }
}

/// Type of an expression as far as the checker can tell.
#[derive(Debug, Clone, PartialEq)]
enum Ty {
    Known(TypeKind),
    /// An integer literal, compatible with any integer type.
    IntLit,
}

impl Ty {
    fn is_integer(&self) -> bool {
        match self {
            Ty::Known(k) => k.is_integer(),
            Ty::IntLit => true,
        }
    }

    fn is_bool(&self) -> bool {
        matches!(self, Ty::Known(TypeKind::Bool))
    }

    fn compatible(&self, other: &Ty) -> bool {
        match (self, other) {
            (Ty::IntLit, t) | (t, Ty::IntLit) => t.is_integer(),
            (Ty::Known(a), Ty::Known(b)) => a.same_as(b),
        }
    }

    /// Joins two compatible operand types, preferring the concrete one.
    fn join(self, other: Ty) -> Ty {
        match (self, other) {
            (Ty::IntLit, t) => t,
            (t, _) => t,
        }
    }
}

impl fmt::Display for Ty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ty::Known(k) => k.fmt(f),
            Ty::IntLit => f.write_str("integer"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum BindingKind {
    Param,
    Local,
    LoopVar,
}

#[derive(Debug, Clone)]
struct Binding {
    ty: TypeKind,
    mutable: bool,
    kind: BindingKind,
}

struct CallEdge {
    caller: usize,
    callee: usize,
    span: SourceSpan,
}

struct Checker<'p> {
    program: &'p Program,
    consts: ConstEnv,
    const_types: BTreeMap<&'p str, &'p TypeExpr>,
    fn_index: BTreeMap<&'p str, usize>,
    fns: Vec<&'p FnDef>,
    edges: Vec<CallEdge>,
    diags: Vec<Diagnostic>,
    // Per-function state.
    scopes: Vec<BTreeMap<String, Binding>>,
    loop_depth: usize,
    return_type: Option<&'p TypeExpr>,
    current_fn: usize,
}

impl<'p> Checker<'p> {
    fn new(program: &'p Program) -> Self {
        let mut consts = ConstEnv::new();
        let mut const_types = BTreeMap::new();
        for c in program.consts() {
            consts.entry(c.name.name.clone()).or_insert(c.value);
            const_types.entry(c.name.as_str()).or_insert(&c.ty);
        }
        let fns: Vec<&FnDef> = program.functions().collect();
        let mut fn_index = BTreeMap::new();
        for (i, f) in fns.iter().enumerate() {
            fn_index.entry(f.name.as_str()).or_insert(i);
        }
        Checker {
            program,
            consts,
            const_types,
            fn_index,
            fns,
            edges: Vec::new(),
            diags: Vec::new(),
            scopes: Vec::new(),
            loop_depth: 0,
            return_type: None,
            current_fn: 0,
        }
    }

    fn error(&mut self, code: &'static str, span: SourceSpan, msg: String) {
        debug_assert!(lookup_rule(code).is_some());
        self.diags.push(Diagnostic::error(code, msg, span));
    }

    // ---- items -------------------------------------------------------

    fn check_items(&mut self) {
        let mut values: BTreeSet<&str> = BTreeSet::new();
        let mut records: BTreeSet<&str> = BTreeSet::new();
        for item in &self.program.items {
            let name = item.name();
            let fresh = match item {
                Item::Record(_) => records.insert(name.as_str()),
                _ => values.insert(name.as_str()),
            };
            if !fresh {
                self.error(
                    "R009",
                    name.span,
                    format!("`{}` is defined more than once", name.name),
                );
            }
            match item {
                Item::Const(c) => self.check_const(c),
                Item::Static(s) => {
                    let what = if s.mutable {
                        "mutable global state"
                    } else {
                        "global state"
                    };
                    self.error(
                        "R005",
                        s.span,
                        format!("`static {}` introduces {what}; only `const` items may appear at top level", s.name.name),
                    );
                }
                Item::Record(r) => self.check_record(r),
                Item::Fn(_) => {}
            }
        }
    }

    fn check_const(&mut self, c: &ConstDef) {
        self.check_type(&c.ty);
        let limit = match &c.ty.kind {
            TypeKind::UnsignedIndex { .. } | TypeKind::UnsignedInt(IntWidth::W64) => u64::MAX,
            TypeKind::UnsignedInt(w) => (1u64 << w.bits()) - 1,
            TypeKind::SignedInt(w) => (1u64 << (w.bits() - 1)) - 1,
            other => {
                self.error(
                    "R010",
                    c.ty.span,
                    format!(
                        "constant `{}` must have an integer type, not `{other}`",
                        c.name.name
                    ),
                );
                return;
            }
        };
        if c.value > limit {
            self.error(
                "R010",
                c.span,
                format!("value {} does not fit in `{}`", c.value, c.ty),
            );
        }
    }

    fn check_record(&mut self, r: &RecordDef) {
        let mut seen = BTreeSet::new();
        for field in &r.fields {
            if !seen.insert(field.name.as_str()) {
                self.error(
                    "R009",
                    field.name.span,
                    format!("field `{}` is declared more than once", field.name.name),
                );
            }
            self.check_type(&field.ty);
            let ok = match &field.ty.kind {
                TypeKind::ArrayOf { .. } => true,
                TypeKind::Ref { .. } => true, // already reported as R001
                k => k.is_scalar(),
            };
            if !ok {
                self.error(
                    "R010",
                    field.ty.span,
                    format!(
                        "field `{}` must be a scalar or array of scalars, not `{}`",
                        field.name.name, field.ty
                    ),
                );
            }
        }
    }

    /// Validates a written type: references, alias warnings, array shape and
    /// record names.
    fn check_type(&mut self, ty: &TypeExpr) {
        match &ty.kind {
            TypeKind::UnsignedIndex { uint_alias: true } => {
                self.diags.push(Diagnostic::warning(
                    "W001",
                    "`uint` is not a Rust type; treated as `usize`",
                    ty.span,
                ));
            }
            TypeKind::Ref { inner, .. } => {
                self.error(
                    "R001",
                    ty.span,
                    format!(
                        "reference type `{ty}` is not allowed; pass `{}` by value",
                        inner
                    ),
                );
                self.check_type(inner);
            }
            TypeKind::ArrayOf { element, length } => {
                self.check_type(element);
                if !element.kind.is_scalar() {
                    self.error(
                        "R010",
                        element.span,
                        format!("array elements must be scalar, not `{element}`"),
                    );
                }
                let len = match length {
                    ArrayLen::Literal(n) => Some(*n),
                    ArrayLen::Const(name) => self.consts.get(name).copied(),
                };
                match len {
                    Some(0) => self.error("R010", ty.span, "array length must be positive".into()),
                    Some(_) => {}
                    None => self.error(
                        "R010",
                        ty.span,
                        format!("array length `{length}` is not a defined constant"),
                    ),
                }
            }
            TypeKind::Named(name) if self.program.record(name).is_none() => {
                self.error("R009", ty.span, format!("unknown record type `{name}`"));
            }
            _ => {}
        }
    }

    // ---- functions ---------------------------------------------------

    fn check_function(&mut self, index: usize, f: &'p FnDef) {
        self.current_fn = index;
        self.scopes = vec![BTreeMap::new()];
        self.loop_depth = 0;
        self.return_type = Some(&f.return_type);
        for p in &f.params {
            self.check_type(&p.ty);
            self.declare(
                &p.name,
                Binding {
                    ty: p.ty.kind.clone(),
                    mutable: p.mutable,
                    kind: BindingKind::Param,
                },
                "parameter",
            );
        }
        self.check_type(&f.return_type);
        self.check_block(&f.body);
        if !block_returns(&f.body) {
            self.error(
                "R006",
                f.name.span,
                format!("function `{}` does not return on every path", f.name.name),
            );
        }
    }

    fn declare(&mut self, name: &Ident, binding: Binding, what: &str) {
        let scope = self.scopes.last_mut().expect("scope stack is never empty");
        if scope.contains_key(&name.name) {
            self.error(
                "R009",
                name.span,
                format!("{what} `{}` is already declared in this scope", name.name),
            );
            return;
        }
        scope.insert(name.name.clone(), binding);
    }

    fn lookup(&self, name: &str) -> Option<&Binding> {
        self.scopes.iter().rev().find_map(|s| s.get(name))
    }

    fn check_block(&mut self, body: &'p [Stmt]) {
        self.scopes.push(BTreeMap::new());
        for stmt in body {
            self.check_stmt(stmt);
        }
        self.scopes.pop();
    }

    fn check_stmt(&mut self, stmt: &'p Stmt) {
        match &stmt.kind {
            StmtKind::Let {
                name,
                ty,
                mutable,
                init,
            } => {
                self.check_type(ty);
                if let Some(init) = init {
                    if let Some(t) = self.type_of(init) {
                        self.expect_type(&t, &ty.kind, init.span, "initializer");
                    }
                }
                self.declare(
                    name,
                    Binding {
                        ty: ty.kind.clone(),
                        mutable: *mutable,
                        kind: BindingKind::Local,
                    },
                    "variable",
                );
            }
            StmtKind::Assign { target, value } => {
                let target_ty = self.check_lvalue(target);
                let value_ty = self.type_of(value);
                if let (Some(t), Some(v)) = (target_ty, value_ty) {
                    self.expect_type(&v, &t, value.span, "assigned value");
                }
            }
            StmtKind::If {
                cond,
                then_body,
                else_body,
            } => {
                self.expect_bool(cond, "`if` condition");
                self.check_block(then_body);
                if let Some(else_body) = else_body {
                    self.check_block(else_body);
                }
            }
            StmtKind::ForRange {
                var,
                lower,
                upper,
                body,
            } => {
                for bound in [lower, upper] {
                    if let Err(e) = evaluate_const(bound, &self.consts) {
                        self.error(
                            "R003",
                            bound.span,
                            format!("loop bound must be a compile-time constant ({e})"),
                        );
                    } else if let Some(t) = self.type_of(bound) {
                        self.expect_type(
                            &t,
                            &TypeKind::UnsignedIndex { uint_alias: false },
                            bound.span,
                            "loop bound",
                        );
                    }
                }
                self.scopes.push(BTreeMap::new());
                self.declare(
                    var,
                    Binding {
                        ty: TypeKind::UnsignedIndex { uint_alias: false },
                        mutable: false,
                        kind: BindingKind::LoopVar,
                    },
                    "loop variable",
                );
                self.loop_depth += 1;
                self.check_block(body);
                self.loop_depth -= 1;
                self.scopes.pop();
            }
            StmtKind::Return(value) => {
                if self.loop_depth > 0 {
                    self.error(
                        "R003",
                        stmt.span,
                        "`return` inside a loop body is not allowed; carry the result in a variable".into(),
                    );
                }
                if let (Some(t), Some(ret)) = (self.type_of(value), self.return_type) {
                    self.expect_type(&t, &ret.kind, value.span, "returned value");
                }
            }
        }
    }

    /// Checks an assignment target and returns the type of the place.
    fn check_lvalue(&mut self, lv: &'p LValue) -> Option<TypeKind> {
        let binding = match self.lookup(&lv.root.name) {
            Some(b) => b.clone(),
            None => {
                let msg = if self.consts.contains_key(&lv.root.name) {
                    format!("cannot assign to constant `{}`", lv.root.name)
                } else {
                    format!("assignment to undeclared variable `{}`", lv.root.name)
                };
                self.error("R009", lv.root.span, msg);
                return None;
            }
        };
        match binding.kind {
            BindingKind::LoopVar => {
                self.error(
                    "R003",
                    lv.span,
                    format!(
                        "loop variable `{}` is assigned inside the loop body",
                        lv.root.name
                    ),
                );
            }
            _ if !binding.mutable => {
                let what = if binding.kind == BindingKind::Param {
                    "parameter"
                } else {
                    "variable"
                };
                self.error(
                    "R009",
                    lv.span,
                    format!(
                        "cannot assign to immutable {what} `{}`; declare it `mut`",
                        lv.root.name
                    ),
                );
            }
            _ => {}
        }
        let mut ty = Some(binding.ty);
        for step in &lv.path {
            ty = match step {
                Place::Field(field) => ty.and_then(|t| self.field_type(&t, field)),
                Place::Index(idx) => {
                    self.check_index(idx);
                    ty.and_then(|t| self.element_type(&t, idx.span))
                }
            };
        }
        ty
    }

    fn field_type(&mut self, base: &TypeKind, field: &Ident) -> Option<TypeKind> {
        let base = deref(base);
        let TypeKind::Named(record) = base else {
            self.error(
                "R010",
                field.span,
                format!("field access `.{}` on non-record type `{base}`", field.name),
            );
            return None;
        };
        let program = self.program;
        match program.record(record).and_then(|r| r.field(&field.name)) {
            Some(def) => Some(def.ty.kind.clone()),
            None => {
                self.error(
                    "R009",
                    field.span,
                    format!("record `{record}` has no field `{}`", field.name),
                );
                None
            }
        }
    }

    fn element_type(&mut self, base: &TypeKind, span: SourceSpan) -> Option<TypeKind> {
        match deref(base) {
            TypeKind::ArrayOf { element, .. } => Some(element.kind.clone()),
            other => {
                self.error(
                    "R010",
                    span,
                    format!("indexing into non-array type `{other}`"),
                );
                None
            }
        }
    }

    fn check_index(&mut self, idx: &'p Expr) {
        if let Some(t) = self.type_of(idx) {
            let ok = match &t {
                Ty::IntLit => true,
                Ty::Known(k) => k.is_index(),
            };
            if !ok {
                self.error(
                    "R004",
                    idx.span,
                    format!("array index has type `{t}`; indices must be `usize`"),
                );
            }
        }
    }

    fn expect_type(&mut self, got: &Ty, want: &TypeKind, span: SourceSpan, what: &str) {
        if !got.compatible(&Ty::Known(want.clone())) {
            self.error(
                "R010",
                span,
                format!("{what} has type `{got}`, expected `{want}`"),
            );
        }
    }

    fn expect_bool(&mut self, e: &'p Expr, what: &str) {
        if let Some(t) = self.type_of(e) {
            if !t.is_bool() {
                self.error(
                    "R010",
                    e.span,
                    format!("{what} has type `{t}`, expected `bool`"),
                );
            }
        }
    }

    /// Types `e`, reporting problems inside it. `None` means an error was
    /// already reported and the caller should not pile on.
    fn type_of(&mut self, e: &'p Expr) -> Option<Ty> {
        match &e.kind {
            ExprKind::IntLit(_) => Some(Ty::IntLit),
            ExprKind::BoolLit(_) => Some(Ty::Known(TypeKind::Bool)),
            ExprKind::Var(name) => {
                if let Some(b) = self.lookup(name) {
                    return Some(Ty::Known(b.ty.clone()));
                }
                if let Some(ty) = self.const_types.get(name.as_str()) {
                    return Some(Ty::Known(ty.kind.clone()));
                }
                let msg = if self.fn_index.contains_key(name.as_str()) {
                    format!("function `{name}` used as a value")
                } else {
                    format!("undeclared name `{name}`")
                };
                self.error("R009", e.span, msg);
                None
            }
            ExprKind::Field(base, field) => {
                let base_ty = self.known(base)?;
                self.field_type(&base_ty, field).map(Ty::Known)
            }
            ExprKind::Index(base, idx) => {
                let base_ty = self.known(base);
                self.check_index(idx);
                self.element_type(&base_ty?, e.span).map(Ty::Known)
            }
            ExprKind::Call(callee, args) => self.type_of_call(callee, args, e.span),
            ExprKind::Binary(op, l, r) => {
                let (lt, rt) = (self.type_of(l), self.type_of(r));
                let (lt, rt) = (lt?, rt?);
                self.type_of_binary(*op, lt, rt, e.span)
            }
            ExprKind::Unary(op, operand) => {
                let t = self.type_of(operand)?;
                match op {
                    UnOp::Neg => match &t {
                        Ty::IntLit | Ty::Known(TypeKind::SignedInt(_)) => Some(t),
                        _ => {
                            self.error(
                                "R010",
                                e.span,
                                format!("cannot negate a value of type `{t}`"),
                            );
                            None
                        }
                    },
                    // Bitwise complement of integers has no single C spelling
                    // without type information, so `!` is boolean only.
                    UnOp::Not => {
                        if t.is_bool() {
                            Some(t)
                        } else {
                            self.error(
                                "R010",
                                e.span,
                                format!("`!` applies to `bool` only, found `{t}`"),
                            );
                            None
                        }
                    }
                }
            }
            ExprKind::Cast(inner, ty) => {
                self.check_type(ty);
                let t = self.type_of(inner)?;
                if !(t.is_integer() || t.is_bool()) || !ty.kind.is_integer() {
                    self.error(
                        "R010",
                        e.span,
                        format!("cannot cast `{t}` to `{ty}`; casts are between integer types"),
                    );
                    return None;
                }
                Some(Ty::Known(ty.kind.clone()))
            }
        }
    }

    /// Type of an expression used as a place base; literals never are.
    fn known(&mut self, e: &'p Expr) -> Option<TypeKind> {
        match self.type_of(e)? {
            Ty::Known(k) => Some(k),
            Ty::IntLit => {
                self.error(
                    "R010",
                    e.span,
                    "an integer literal has no fields or elements".into(),
                );
                None
            }
        }
    }

    fn type_of_call(&mut self, callee: &Ident, args: &'p [Expr], span: SourceSpan) -> Option<Ty> {
        let arg_types: Vec<Option<Ty>> = args.iter().map(|a| self.type_of(a)).collect();
        let Some(&index) = self.fn_index.get(callee.as_str()) else {
            self.error(
                "R007",
                callee.span,
                format!(
                    "call to `{}`, which is not defined in this program",
                    callee.name
                ),
            );
            return None;
        };
        let f = self.fns[index];
        self.edges.push(CallEdge {
            caller: self.current_fn,
            callee: index,
            span,
        });
        if f.params.len() != args.len() {
            self.error(
                "R007",
                span,
                format!(
                    "`{}` takes {} argument(s) but {} were supplied",
                    callee.name,
                    f.params.len(),
                    args.len()
                ),
            );
            return Some(Ty::Known(f.return_type.kind.clone()));
        }
        for ((param, arg), t) in f.params.iter().zip(args).zip(arg_types) {
            if let Some(t) = t {
                let what = format!("argument `{}`", param.name.name);
                self.expect_type(&t, &param.ty.kind, arg.span, &what);
            }
        }
        Some(Ty::Known(f.return_type.kind.clone()))
    }

    fn type_of_binary(&mut self, op: BinOp, lt: Ty, rt: Ty, span: SourceSpan) -> Option<Ty> {
        let sym = op.symbol();
        if op.is_logical() {
            if lt.is_bool() && rt.is_bool() {
                return Some(Ty::Known(TypeKind::Bool));
            }
            self.error(
                "R010",
                span,
                format!("`{sym}` needs `bool` operands, found `{lt}` and `{rt}`"),
            );
            return None;
        }
        if matches!(op, BinOp::Shl | BinOp::Shr) {
            if lt.is_integer() && rt.is_integer() {
                return Some(lt);
            }
            self.error(
                "R010",
                span,
                format!("`{sym}` needs integer operands, found `{lt}` and `{rt}`"),
            );
            return None;
        }
        if op.is_comparison() {
            let eq = matches!(op, BinOp::Eq | BinOp::Ne);
            let operands_ok = lt.compatible(&rt) && (lt.is_integer() || (eq && lt.is_bool()));
            if operands_ok {
                return Some(Ty::Known(TypeKind::Bool));
            }
            self.error(
                "R010",
                span,
                format!("cannot compare `{lt}` with `{rt}` using `{sym}`"),
            );
            return None;
        }
        let bitwise_bool = matches!(op, BinOp::BitAnd | BinOp::BitOr | BinOp::BitXor)
            && lt.is_bool()
            && rt.is_bool();
        if bitwise_bool || (lt.is_integer() && lt.compatible(&rt)) {
            return Some(lt.join(rt));
        }
        self.error(
            "R010",
            span,
            format!("mismatched operand types `{lt}` and `{rt}` for `{sym}`"),
        );
        None
    }

    // ---- call graph --------------------------------------------------

    fn check_call_graph(&mut self) {
        let n = self.fns.len();
        let mut adj = vec![BTreeSet::new(); n];
        for e in &self.edges {
            adj[e.caller].insert(e.callee);
        }
        // reach[i][j]: j is reachable from i by one or more calls.
        let mut reach = vec![vec![false; n]; n];
        for (start, row) in reach.iter_mut().enumerate() {
            let mut stack: Vec<usize> = adj[start].iter().copied().collect();
            while let Some(v) = stack.pop() {
                if !row[v] {
                    row[v] = true;
                    stack.extend(adj[v].iter().copied());
                }
            }
        }
        for (i, row) in reach.iter().enumerate() {
            if !row[i] {
                continue;
            }
            let members: Vec<&str> = (0..n)
                .filter(|&j| row[j] && reach[j][i])
                .map(|j| self.fns[j].name.as_str())
                .collect();
            let f = self.fns[i];
            let msg = if members.len() == 1 {
                format!("function `{}` calls itself", f.name.name)
            } else {
                format!(
                    "function `{}` is mutually recursive with {}",
                    f.name.name,
                    members
                        .iter()
                        .filter(|m| **m != f.name.name)
                        .map(|m| format!("`{m}`"))
                        .collect::<Vec<_>>()
                        .join(", ")
                )
            };
            self.error("R002", f.name.span, msg);
        }
        let mut forward = Vec::new();
        for e in &self.edges {
            let in_cycle = reach[e.callee][e.caller];
            if e.callee > e.caller && !in_cycle {
                forward.push((e.span, e.caller, e.callee));
            }
        }
        for (span, caller, callee) in forward {
            let msg = format!(
                "`{}` calls `{}`, which is defined later; move the callee above its caller",
                self.fns[caller].name.name, self.fns[callee].name.name
            );
            self.error("R008", span, msg);
        }
    }
}

/// True when every path through `body` reaches a `return`.
pub fn block_returns(body: &[Stmt]) -> bool {
    body.iter().any(|s| match &s.kind {
        StmtKind::Return(_) => true,
        StmtKind::If {
            then_body,
            else_body: Some(else_body),
            ..
        } => block_returns(then_body) && block_returns(else_body),
        _ => false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse_source;
    use crate::span::FileId;

    fn check(src: &str) -> Vec<Diagnostic> {
        let program = parse_source(src, FileId(0)).expect("parses");
        check_program(&program)
    }

    fn codes(src: &str) -> Vec<&'static str> {
        check(src).into_iter().map(|d| d.rule_code).collect()
    }

    const PRELUDE: &str = "const N: usize = 4;\nstruct S { a: [i64; N], h: usize, }\n";

    fn with_prelude(body: &str) -> String {
        format!("{PRELUDE}{body}")
    }

    #[test]
    fn rule_codes_are_unique() {
        let codes: BTreeSet<&str> = RULES.iter().map(|r| r.code).collect();
        assert_eq!(codes.len(), RULES.len());
    }

    #[test]
    fn evaluate_literal() {
        let e = Expr {
            kind: ExprKind::IntLit(256),
            span: SourceSpan::point(FileId(0), 1, 1),
        };
        assert_eq!(evaluate_const(&e, &ConstEnv::new()), Ok(256));
    }

    fn const_expr(src: &str) -> Expr {
        let p = parse_source(&format!("fn f() -> usize {{ return {src}; }}"), FileId(0)).unwrap();
        let StmtKind::Return(e) = &p.function("f").unwrap().body[0].kind else {
            unreachable!()
        };
        e.clone()
    }

    #[test]
    fn evaluate_lookup_and_arithmetic() {
        let mut env = ConstEnv::new();
        env.insert("ARR_SZ".into(), 5);
        assert_eq!(evaluate_const(&const_expr("ARR_SZ"), &env), Ok(5));
        env.insert("ARR_SZ".into(), 255);
        assert_eq!(evaluate_const(&const_expr("ARR_SZ + 1"), &env), Ok(256));
        assert_eq!(
            evaluate_const(&const_expr("(ARR_SZ - 5) * 2"), &env),
            Ok(500)
        );
    }

    #[test]
    fn evaluate_errors() {
        let env = ConstEnv::new();
        assert!(matches!(
            evaluate_const(&const_expr("x + 1"), &env),
            Err(ConstEvalError::NonConstant(_))
        ));
        assert!(matches!(
            evaluate_const(&const_expr("1 - 2"), &env),
            Err(ConstEvalError::Underflow(_))
        ));
        assert!(matches!(
            evaluate_const(&const_expr("4 / 2"), &env),
            Err(ConstEvalError::NonConstant(_))
        ));
    }

    #[test]
    fn clean_function() {
        let src = with_prelude(
            "fn f(mut s: S) -> S {\n  for i in 0..N { s.a[i] = 0; }\n  s.h = N;\n  return s;\n}\n",
        );
        assert_eq!(check(&src), vec![]);
    }

    #[test]
    fn reference_param_is_r001() {
        assert_eq!(
            codes(&with_prelude("fn f(s: &S) -> usize { return 0; }")),
            ["R001"]
        );
    }

    #[test]
    fn mutual_recursion_names_both() {
        let d = check("fn f(x: u8) -> u8 { return g(x); }\nfn g(x: u8) -> u8 { return f(x); }");
        assert_eq!(d.len(), 2);
        assert!(d.iter().all(|d| d.rule_code == "R002"));
        assert!(d[0].message.contains("`f`") && d[0].message.contains("`g`"));
        assert!(d[1].message.contains("`g`") && d[1].message.contains("`f`"));
    }

    #[test]
    fn self_recursion() {
        assert_eq!(codes("fn f(x: u8) -> u8 { return f(x); }"), ["R002"]);
    }

    #[test]
    fn loop_rules() {
        let src = with_prelude(
            "fn f(n: usize) -> usize {\n  let mut t: usize = 0;\n  for i in 0..n { t = t + i; }\n  return t;\n}\n",
        );
        assert_eq!(codes(&src), ["R003"]);
        let src = with_prelude(
            "fn f() -> usize {\n  let mut t: usize = 0;\n  for i in 0..N { i = 2; }\n  return t;\n}\n",
        );
        assert_eq!(codes(&src), ["R003"]);
        let src =
            with_prelude("fn f() -> usize {\n  for i in 0..N + 1 { return i; }\n  return 0;\n}\n");
        assert_eq!(codes(&src), ["R003"]);
    }

    #[test]
    fn signed_index_is_r004() {
        let src = with_prelude("fn f(s: S, k: i64) -> i64 { return s.a[k]; }");
        assert_eq!(codes(&src), ["R004"]);
        let src = with_prelude("fn f(s: S, k: i64) -> i64 { return s.a[k as usize]; }");
        assert_eq!(codes(&src), Vec::<&str>::new());
    }

    #[test]
    fn statics_are_r005() {
        assert_eq!(codes("static mut C: usize = 0;"), ["R005"]);
        assert_eq!(codes("static C: usize = 0;"), ["R005"]);
    }

    #[test]
    fn missing_return_is_r006() {
        assert_eq!(
            codes("fn f(x: u8) -> u8 { if x == 0 { return 1; } }"),
            ["R006"]
        );
        assert_eq!(
            codes("fn f(x: u8) -> u8 { if x == 0 { return 1; } else { return 2; } }"),
            Vec::<&str>::new()
        );
    }

    #[test]
    fn unknown_call_is_r007() {
        assert_eq!(codes("fn f(x: u8) -> u8 { return g(x); }"), ["R007"]);
        assert_eq!(
            codes("fn g(x: u8) -> u8 { return x; }\nfn f(x: u8) -> u8 { return g(x, x); }"),
            ["R007"]
        );
    }

    #[test]
    fn forward_call_is_r008() {
        assert_eq!(
            codes("fn f(x: u8) -> u8 { return g(x); }\nfn g(x: u8) -> u8 { return x; }"),
            ["R008"]
        );
    }

    #[test]
    fn binding_errors_are_r009() {
        assert_eq!(codes("fn f(x: u8) -> u8 { x = 1; return x; }"), ["R009"]);
        assert_eq!(codes("fn f() -> u8 { return y; }"), ["R009"]);
        assert_eq!(codes("const A: u8 = 1;\nconst A: u8 = 2;"), ["R009"]);
        assert_eq!(
            codes(&with_prelude("fn f(s: S) -> usize { return s.nope; }")),
            ["R009"]
        );
    }

    #[test]
    fn type_errors_are_r010() {
        assert_eq!(codes("fn f(x: u8) -> bool { return x; }"), ["R010"]);
        assert_eq!(codes("const A: u8 = 256;"), ["R010"]);
        assert_eq!(
            codes("fn f(x: u8) -> u8 { if x { return 1; } else { return 2; } }"),
            ["R010"]
        );
        assert_eq!(codes("struct T { a: u8, }\nstruct U { t: T, }"), ["R010"]);
    }

    #[test]
    fn uint_alias_warns() {
        let d = check("const ARR_SZ: uint = 256;");
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].severity, Severity::Warning);
        assert_eq!(d[0].rule_code, "W001");
    }

    #[test]
    fn every_diagnostic_cites_the_table() {
        let src = "static mut X: u8 = 0;\nfn f(a: &u8, k: i64) -> u8 { for i in 0..a { i = 1; } return h(k); }\nconst C: uint = 1;";
        for d in check(src) {
            assert!(lookup_rule(d.rule_code).is_some(), "{d}");
        }
    }

    #[test]
    fn check_is_deterministic() {
        let src = "fn f(x: u8) -> u8 { return g(x); }\nfn g(x: u8) -> u8 { return f(x); }\nfn h(k: i64, s: [u8; 2]) -> u8 { return s[k]; }";
        assert_eq!(check(src), check(src));
    }
}
