//! Executable invariants for the Arrayset and the drivers that check them.
//!
//! The abstraction function [`model_of`] maps a concrete state to the set of
//! values on its used list. The drivers run an implementation of
//! [`SetOps`] over operation sequences, either every sequence up to a
//! bounded length ([`exhaustive_check`]) or pseudo-random ones
//! ([`random_check`]), and after every step compare it with a plain
//! `BTreeSet` and evaluate the structural predicates below.
//!
//! Property codes used in reports:
//!
//! | code | property |
//! |------|----------|
//! | P1 | a good state below capacity contains `v` after `add(v)` |
//! | P2 | `add` below capacity inserts; `add` of an absent value at capacity is the identity |
//! | P3 | `del(v)` removes exactly `v` from the model |
//! | P4 | `add` of a present value and `del` of an absent value are the identity |
//! | P5 | used length plus free length equals the capacity |
//! | P6 | the two chains are acyclic, disjoint and cover every slot |
//! | P7 | `free_head != used_head` |
//! | P8 | `add`/`del` preserve `good_statep` |
//! | MODEL | the model equals the set oracle and membership queries agree with it |
//! | SHAPE | array lengths and link ranges are valid |

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::time::Duration;

use crate::arrayset::{Arrayset, ZeroCapacity};

// ---------------------------------------------------------------------
// Operations

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OpTag {
    Add,
    Del,
    IsElement,
}

impl OpTag {
    pub const ALL: [OpTag; 3] = [OpTag::Add, OpTag::Del, OpTag::IsElement];

    /// Keyword used in op scripts and trace lines.
    pub fn keyword(self) -> &'static str {
        match self {
            OpTag::Add => "add",
            OpTag::Del => "del",
            OpTag::IsElement => "is",
        }
    }

    pub fn from_keyword(word: &str) -> Option<OpTag> {
        OpTag::ALL.into_iter().find(|t| t.keyword() == word)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OpRequest {
    pub tag: OpTag,
    pub val: i64,
}

impl OpRequest {
    pub fn add(val: i64) -> Self {
        OpRequest {
            tag: OpTag::Add,
            val,
        }
    }

    pub fn del(val: i64) -> Self {
        OpRequest {
            tag: OpTag::Del,
            val,
        }
    }

    pub fn is_element(val: i64) -> Self {
        OpRequest {
            tag: OpTag::IsElement,
            val,
        }
    }
}

impl fmt::Display for OpRequest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.tag.keyword(), self.val)
    }
}

/// An implementation of the three set operations under test.
pub trait SetOps {
    fn add(&self, val: i64, set: Arrayset) -> Arrayset;
    fn del(&self, val: i64, set: Arrayset) -> Arrayset;
    fn is_element(&self, val: i64, set: &Arrayset) -> bool;

    /// Applies `op`, returning the new state and, for membership queries,
    /// the answer.
    fn apply(&self, op: OpRequest, set: Arrayset) -> (Arrayset, Option<bool>) {
        match op.tag {
            OpTag::Add => (self.add(op.val, set), None),
            OpTag::Del => (self.del(op.val, set), None),
            OpTag::IsElement => {
                let ret = self.is_element(op.val, &set);
                (set, Some(ret))
            }
        }
    }
}

/// The reference implementation in [`crate::arrayset`].
#[derive(Debug, Clone, Copy, Default)]
pub struct Reference;

impl SetOps for Reference {
    fn add(&self, val: i64, set: Arrayset) -> Arrayset {
        set.add(val)
    }

    fn del(&self, val: i64, set: Arrayset) -> Arrayset {
        set.del(val)
    }

    fn is_element(&self, val: i64, set: &Arrayset) -> bool {
        set.is_element(val)
    }
}

// ---------------------------------------------------------------------
// Abstraction function and predicates

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AbstractionError {
    /// The used list revisits slot `at` before reaching the terminator.
    Cycle { at: usize },
    /// A link on the used list points past the terminator.
    BadLink { at: usize, link: usize },
}

impl fmt::Display for AbstractionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AbstractionError::Cycle { at } => write!(f, "used list cycles back to slot {at}"),
            AbstractionError::BadLink { at, link } => {
                write!(f, "used list link anext[{at}] = {link} is out of range")
            }
        }
    }
}

/// The set of values on the used list.
pub fn model_of(aset: &Arrayset) -> Result<BTreeSet<i64>, AbstractionError> {
    let size = aset.capacity();
    let mut seen = vec![false; size];
    let mut model = BTreeSet::new();
    let mut curr = aset.used_head;
    while curr < size {
        if seen[curr] {
            return Err(AbstractionError::Cycle { at: curr });
        }
        seen[curr] = true;
        model.insert(aset.avals[curr]);
        let next = aset.anext[curr];
        if next > size {
            return Err(AbstractionError::BadLink {
                at: curr,
                link: next,
            });
        }
        curr = next;
    }
    Ok(model)
}

pub fn free_head_used_head_relation(aset: &Arrayset) -> bool {
    aset.free_head != aset.used_head
}

/// `val` occurs at most once among the used-list values.
pub fn no_dups(val: i64, aset: &Arrayset) -> bool {
    aset.used_values().filter(|v| *v == val).count() <= 1
}

/// No value occurs twice on the used list. Stronger than [`no_dups`] for any
/// single value; not part of [`good_statep`].
pub fn all_distinct(aset: &Arrayset) -> bool {
    let mut values: Vec<i64> = aset.used_values().collect();
    values.sort_unstable();
    values.windows(2).all(|w| w[0] != w[1])
}

/// Shape invariant: parallel arrays of one positive length, heads and links
/// no larger than that length.
pub fn arraysetp(aset: &Arrayset) -> bool {
    let size = aset.anext.len();
    size > 0
        && aset.avals.len() == size
        && aset.free_head <= size
        && aset.used_head <= size
        && aset.anext.iter().all(|&n| n <= size)
}

fn length_law(aset: &Arrayset) -> bool {
    aset.len() + aset.len_free() == aset.capacity()
}

/// Well-formedness, distinct heads, no duplicate of `val`, and the length
/// law, in that order; later conjuncts are only evaluated on well-formed
/// states.
pub fn good_statep(val: i64, aset: &Arrayset) -> bool {
    arraysetp(aset) && free_head_used_head_relation(aset) && no_dups(val, aset) && length_law(aset)
}

/// The used and free chains are acyclic, terminator-ended, disjoint, and
/// together visit every slot exactly once.
pub fn chains_partition(aset: &Arrayset) -> bool {
    if !arraysetp(aset) {
        return false;
    }
    let size = aset.capacity();
    let mut seen = vec![false; size];
    let mut visited = 0;
    for head in [aset.used_head, aset.free_head] {
        let mut curr = head;
        while curr < size {
            if seen[curr] {
                return false;
            }
            seen[curr] = true;
            visited += 1;
            curr = aset.anext[curr];
        }
    }
    visited == size
}

// ---------------------------------------------------------------------
// Pseudo-random operation sequences

/// SplitMix64. Each [`random_ops`] element draws two outputs: the first
/// picks the tag (`% 3`: add, del, is), the second the value
/// (`lo + out % (hi - lo + 1)`).
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
}

/// Inclusive range of operand values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValueRange {
    pub lo: i64,
    pub hi: i64,
}

impl ValueRange {
    pub fn new(lo: i64, hi: i64) -> Self {
        assert!(lo <= hi, "empty value range");
        ValueRange { lo, hi }
    }

    /// `[0, capacity + 2]`: small enough to force collisions, full sets and
    /// deletes of absent values.
    pub fn for_capacity(capacity: usize) -> Self {
        ValueRange::new(0, capacity as i64 + 2)
    }

    fn pick(&self, raw: u64) -> i64 {
        let span = self.hi.wrapping_sub(self.lo) as u64;
        match span.checked_add(1) {
            Some(n) => self.lo.wrapping_add((raw % n) as i64),
            None => raw as i64,
        }
    }
}

pub fn random_ops(seed: u64, n: usize, values: ValueRange) -> Vec<OpRequest> {
    let mut rng = SplitMix64::new(seed);
    (0..n)
        .map(|_| {
            let tag = OpTag::ALL[(rng.next_u64() % 3) as usize];
            let val = values.pick(rng.next_u64());
            OpRequest { tag, val }
        })
        .collect()
}

// ---------------------------------------------------------------------
// Traces

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

fn fnv1a_word(mut hash: u64, word: u64) -> u64 {
    for byte in word.to_le_bytes() {
        hash ^= u64::from(byte);
        hash = hash.wrapping_mul(FNV_PRIME);
    }
    hash
}

/// FNV-1a over the used-list values (head first) followed by the free-list
/// length, each as an 8-byte little-endian word. Free-slot values are not
/// observable and are excluded.
pub fn digest(aset: &Arrayset) -> u64 {
    let hash = aset
        .used_values()
        .fold(FNV_OFFSET, |h, v| fnv1a_word(h, v as u64));
    fnv1a_word(hash, aset.len_free() as u64)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEvent {
    /// 1-based position in the operation sequence.
    pub seq: u64,
    pub op: OpRequest,
    pub ret: Option<bool>,
    pub len: usize,
    pub len_free: usize,
    pub digest: u64,
}

/// Runs `ops` from an empty set of `capacity` slots with the reference
/// implementation.
pub fn trace_run(ops: &[OpRequest], capacity: usize) -> Result<Vec<TraceEvent>, ZeroCapacity> {
    trace_run_with(&Reference, ops, capacity)
}

pub fn trace_run_with<S: SetOps + ?Sized>(
    imp: &S,
    ops: &[OpRequest],
    capacity: usize,
) -> Result<Vec<TraceEvent>, ZeroCapacity> {
    let mut set = Arrayset::init(capacity)?;
    let mut trace = Vec::with_capacity(ops.len());
    for (i, &op) in ops.iter().enumerate() {
        let (next, ret) = imp.apply(op, set);
        set = next;
        trace.push(TraceEvent {
            seq: i as u64 + 1,
            op,
            ret,
            len: set.len(),
            len_free: set.len_free(),
            digest: digest(&set),
        });
    }
    Ok(trace)
}

// ---------------------------------------------------------------------
// Property checking

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Property {
    AddMembership,
    AddModel,
    DelModel,
    NoOpIdentity,
    LengthLaw,
    ChainPartition,
    HeadRelation,
    GoodStatePreserved,
    ModelEquivalence,
    Shape,
}

impl Property {
    pub fn code(self) -> &'static str {
        match self {
            Property::AddMembership => "P1",
            Property::AddModel => "P2",
            Property::DelModel => "P3",
            Property::NoOpIdentity => "P4",
            Property::LengthLaw => "P5",
            Property::ChainPartition => "P6",
            Property::HeadRelation => "P7",
            Property::GoodStatePreserved => "P8",
            Property::ModelEquivalence => "MODEL",
            Property::Shape => "SHAPE",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub property: Property,
    pub detail: String,
}

impl Violation {
    fn new(property: Property, detail: impl Into<String>) -> Self {
        Violation {
            property,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.property, self.detail)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub capacity: usize,
    /// The operations from the empty set up to and including the failing one.
    pub ops: Vec<OpRequest>,
    pub violation: Violation,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "capacity {}: {} after [", self.capacity, self.violation)?;
        for (i, op) in self.ops.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{op}")?;
        }
        f.write_str("]")
    }
}

/// At most this many failures are stored; `failure_count` keeps counting.
pub const MAX_RECORDED_FAILURES: usize = 32;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CheckReport {
    /// Complete operation sequences covered.
    pub cases_run: u64,
    /// Individual operations executed and checked.
    pub steps: u64,
    /// Steps where the hypothesis of P1 held and its conclusion was checked.
    pub p1_instances: u64,
    pub failure_count: u64,
    pub failures: Vec<Failure>,
    /// Filled in by callers that have a clock.
    pub elapsed: Duration,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }

    fn record(&mut self, failure: Failure) {
        self.failure_count += 1;
        if self.failures.len() < MAX_RECORDED_FAILURES {
            self.failures.push(failure);
        }
    }

    /// Combines two reports; associative, with the empty report as identity.
    pub fn merge(mut self, other: CheckReport) -> CheckReport {
        self.cases_run += other.cases_run;
        self.steps += other.steps;
        self.p1_instances += other.p1_instances;
        self.failure_count += other.failure_count;
        for f in other.failures {
            if self.failures.len() < MAX_RECORDED_FAILURES {
                self.failures.push(f);
            }
        }
        self.elapsed += other.elapsed;
        self
    }
}

/// Checks the single-state properties (SHAPE, P5, P6, P7) and that the
/// abstraction of `set` equals `expected`.
pub fn check_state(set: &Arrayset, expected: &BTreeSet<i64>) -> Result<(), Violation> {
    if !arraysetp(set) {
        return Err(Violation::new(Property::Shape, "state is not well-formed"));
    }
    if !length_law(set) {
        return Err(Violation::new(
            Property::LengthLaw,
            format!(
                "len {} + len_free {} != capacity {}",
                set.len(),
                set.len_free(),
                set.capacity()
            ),
        ));
    }
    if !chains_partition(set) {
        return Err(Violation::new(
            Property::ChainPartition,
            "used and free chains do not partition the slots",
        ));
    }
    if !free_head_used_head_relation(set) {
        return Err(Violation::new(
            Property::HeadRelation,
            format!("free_head == used_head == {}", set.free_head),
        ));
    }
    match model_of(set) {
        Ok(model) if model == *expected => Ok(()),
        Ok(model) => Err(Violation::new(
            Property::ModelEquivalence,
            format!("model {model:?} differs from oracle {expected:?}"),
        )),
        Err(e) => Err(Violation::new(
            Property::ModelEquivalence,
            format!("abstraction failed: {e}"),
        )),
    }
}

/// Values occurring more than once on the used list.
fn duplicated_values(set: &Arrayset) -> BTreeSet<i64> {
    let mut values: Vec<i64> = set.used_values().collect();
    values.sort_unstable();
    values
        .windows(2)
        .filter(|w| w[0] == w[1])
        .map(|w| w[0])
        .collect()
}

/// Structural part of [`good_statep`], which does not depend on the value.
fn good_structure(set: &Arrayset) -> bool {
    arraysetp(set) && free_head_used_head_relation(set) && length_law(set)
}

/// Outcome of one checked transition.
#[derive(Debug, Clone)]
pub struct Step {
    pub next: Arrayset,
    pub next_model: BTreeSet<i64>,
    pub ret: Option<bool>,
    pub p1_checked: bool,
}

/// Applies `op` to `set` (whose model is `model`, already verified by
/// [`check_state`]) and checks the transition properties, then the
/// single-state properties of the result.
pub fn check_step<S: SetOps + ?Sized>(
    imp: &S,
    set: &Arrayset,
    model: &BTreeSet<i64>,
    op: OpRequest,
) -> Result<Step, Violation> {
    let v = op.val;
    let capacity = set.capacity();
    let len = set.len();
    let present = model.contains(&v);
    let mut p1_checked = false;

    let (next, ret) = imp.apply(op, set.clone());
    let mut expected = model.clone();
    match op.tag {
        OpTag::Add => {
            if len < capacity {
                expected.insert(v);
            }
            if good_statep(v, set) && len < capacity {
                p1_checked = true;
                if !imp.is_element(v, &next) {
                    return Err(Violation::new(
                        Property::AddMembership,
                        format!("{v} is not an element after add({v})"),
                    ));
                }
            }
            if present && next != *set {
                return Err(Violation::new(
                    Property::NoOpIdentity,
                    format!("add({v}) of a present value changed the state"),
                ));
            }
            if len == capacity && !present && next != *set {
                return Err(Violation::new(
                    Property::AddModel,
                    format!("add({v}) on a full set changed the state"),
                ));
            }
        }
        OpTag::Del => {
            expected.remove(&v);
            if !present && next != *set {
                return Err(Violation::new(
                    Property::NoOpIdentity,
                    format!("del({v}) of an absent value changed the state"),
                ));
            }
        }
        OpTag::IsElement => {
            if ret != Some(present) {
                return Err(Violation::new(
                    Property::ModelEquivalence,
                    format!("is_element({v}) returned {ret:?}, oracle says {present}"),
                ));
            }
            if next != *set {
                return Err(Violation::new(
                    Property::ModelEquivalence,
                    "is_element changed the state",
                ));
            }
        }
    }

    if op.tag != OpTag::IsElement {
        // Simulation: abstract-then-apply must equal apply-then-abstract.
        match model_of(&next) {
            Ok(m) if m == expected => {}
            Ok(m) => {
                let property = match op.tag {
                    OpTag::Add => Property::AddModel,
                    _ => Property::DelModel,
                };
                return Err(Violation::new(
                    property,
                    format!("{op} took model {model:?} to {m:?}, expected {expected:?}"),
                ));
            }
            Err(e) => {
                return Err(Violation::new(
                    Property::ModelEquivalence,
                    format!("abstraction failed after {op}: {e}"),
                ));
            }
        }
        if no_dups(v, set) {
            check_good_state_preserved(set, &next, v, model)?;
        }
    }

    check_state(&next, &expected)?;
    Ok(Step {
        next,
        next_model: expected,
        ret,
        p1_checked,
    })
}

/// P8 for every value that can matter: the operand and every value on
/// either used list. For any other value `no_dups` holds trivially on both
/// sides, so `good_statep` reduces to the structural conjuncts checked here
/// too.
fn check_good_state_preserved(
    before: &Arrayset,
    after: &Arrayset,
    operand: i64,
    model: &BTreeSet<i64>,
) -> Result<(), Violation> {
    if !good_structure(before) {
        return Ok(());
    }
    let fail = |u: i64| {
        Violation::new(
            Property::GoodStatePreserved,
            format!("good_statep({u}, _) held before the operation but not after"),
        )
    };
    if good_statep(operand, before) && !good_statep(operand, after) {
        return Err(fail(operand));
    }
    if !good_structure(after) {
        return Err(fail(operand));
    }
    let dups_before = duplicated_values(before);
    if let Some(&u) = duplicated_values(after)
        .iter()
        .find(|u| !dups_before.contains(u))
    {
        return Err(fail(u));
    }
    debug_assert!(model
        .iter()
        .all(|&u| !good_statep(u, before) || good_statep(u, after)));
    Ok(())
}

/// Replays `ops` from an empty set, checking every property after every
/// step. Returns the first violation and the index of the op that caused
/// it (`None` for the initial state).
pub fn replay<S: SetOps + ?Sized>(
    imp: &S,
    capacity: usize,
    ops: &[OpRequest],
) -> Result<Option<(Option<usize>, Violation)>, ZeroCapacity> {
    let mut set = Arrayset::init(capacity)?;
    let mut model = BTreeSet::new();
    if let Err(v) = check_state(&set, &model) {
        return Ok(Some((None, v)));
    }
    for (i, &op) in ops.iter().enumerate() {
        match check_step(imp, &set, &model, op) {
            Ok(step) => {
                set = step.next;
                model = step.next_model;
            }
            Err(v) => return Ok(Some((Some(i), v))),
        }
    }
    Ok(None)
}

/// Shrinks a failing sequence by deleting single operations while some
/// property still fails.
pub fn minimize<S: SetOps + ?Sized>(imp: &S, capacity: usize, ops: &[OpRequest]) -> Vec<OpRequest> {
    let fails = |ops: &[OpRequest]| matches!(replay(imp, capacity, ops), Ok(Some(_)));
    let mut current: Vec<OpRequest> = ops.to_vec();
    if let Ok(Some((Some(i), _))) = replay(imp, capacity, &current) {
        current.truncate(i + 1);
    }
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..current.len() {
            let mut candidate = current.clone();
            candidate.remove(i);
            if fails(&candidate) {
                current = candidate;
                changed = true;
                break;
            }
        }
    }
    current
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExhaustiveError {
    ZeroCapacity,
    /// `(3 * alphabet)^depth` exceeds [`EXHAUSTIVE_LIMIT`].
    TooLarge {
        sequences: Option<u64>,
    },
}

impl fmt::Display for ExhaustiveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExhaustiveError::ZeroCapacity => ZeroCapacity.fmt(f),
            ExhaustiveError::TooLarge { sequences: Some(n) } => {
                write!(f, "{n} sequences exceed the limit of {EXHAUSTIVE_LIMIT}")
            }
            ExhaustiveError::TooLarge { sequences: None } => {
                write!(f, "sequence count overflows; limit is {EXHAUSTIVE_LIMIT}")
            }
        }
    }
}

/// Upper bound on `(3 * alphabet)^depth` accepted by [`exhaustive_check`].
pub const EXHAUSTIVE_LIMIT: u64 = 100_000_000;

/// Number of complete sequences of `depth` operations over `alphabet`
/// values, or `None` on overflow.
pub fn sequence_count(depth: u32, alphabet: u64) -> Option<u64> {
    alphabet.checked_mul(3)?.checked_pow(depth)
}

/// Runs every sequence of exactly `depth` operations drawn from
/// {add, del, is} x {0, .., alphabet-1} from an empty set, checking all
/// properties after every step (so every shorter sequence is covered as a
/// prefix). Below a failing step the subtree is not explored but its
/// sequences still count toward `cases_run`.
pub fn exhaustive_check<S: SetOps + ?Sized>(
    imp: &S,
    capacity: usize,
    depth: u32,
    alphabet: u64,
) -> Result<CheckReport, ExhaustiveError> {
    let total = sequence_count(depth, alphabet);
    match total {
        Some(n) if n <= EXHAUSTIVE_LIMIT => {}
        _ => return Err(ExhaustiveError::TooLarge { sequences: total }),
    }
    let init = Arrayset::init(capacity).map_err(|_| ExhaustiveError::ZeroCapacity)?;
    let alphabet_ops: Vec<OpRequest> = OpTag::ALL
        .into_iter()
        .flat_map(|tag| (0..alphabet as i64).map(move |val| OpRequest { tag, val }))
        .collect();

    let mut report = CheckReport::default();
    let empty = BTreeSet::new();
    if let Err(v) = check_state(&init, &empty) {
        report.cases_run = total.unwrap_or(0);
        report.record(Failure {
            capacity,
            ops: Vec::new(),
            violation: v,
        });
        return Ok(report);
    }
    let mut prefix = Vec::with_capacity(depth as usize);
    explore(
        imp,
        &alphabet_ops,
        &init,
        &empty,
        depth,
        &mut prefix,
        &mut report,
    );
    Ok(report)
}

fn explore<S: SetOps + ?Sized>(
    imp: &S,
    alphabet: &[OpRequest],
    set: &Arrayset,
    model: &BTreeSet<i64>,
    remaining: u32,
    prefix: &mut Vec<OpRequest>,
    report: &mut CheckReport,
) {
    if remaining == 0 {
        report.cases_run += 1;
        return;
    }
    for &op in alphabet {
        prefix.push(op);
        report.steps += 1;
        match check_step(imp, set, model, op) {
            Ok(step) => {
                report.p1_instances += u64::from(step.p1_checked);
                explore(
                    imp,
                    alphabet,
                    &step.next,
                    &step.next_model,
                    remaining - 1,
                    prefix,
                    report,
                );
            }
            Err(violation) => {
                report.cases_run += (alphabet.len() as u64).pow(remaining - 1);
                report.record(Failure {
                    capacity: set.capacity(),
                    ops: prefix.clone(),
                    violation,
                });
            }
        }
        prefix.pop();
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomConfig {
    pub seed: u64,
    /// Number of independent sequences, each starting from an empty set.
    pub sequences: u64,
    pub capacity: usize,
    /// Operations per sequence.
    pub sequence_len: usize,
    pub values: ValueRange,
}

impl RandomConfig {
    /// Defaults used by the command line: operand values in
    /// `[0, capacity + 2]` and `2 * capacity` operations per sequence,
    /// clamped to `[16, 256]`.
    pub fn new(seed: u64, sequences: u64, capacity: usize) -> Self {
        RandomConfig {
            seed,
            sequences,
            capacity,
            sequence_len: (2 * capacity).clamp(16, 256),
            values: ValueRange::for_capacity(capacity),
        }
    }

    /// Seed of the `index`-th sequence.
    pub fn sequence_seed(&self, index: u64) -> u64 {
        let mut rng = SplitMix64::new(self.seed ^ index.wrapping_mul(0xD1B5_4A32_D192_ED03));
        rng.next_u64()
    }
}

/// Checks `config.sequences` pseudo-random sequences. Failing sequences are
/// truncated at the failing step and shrunk with [`minimize`].
pub fn random_check<S: SetOps + ?Sized>(
    imp: &S,
    config: &RandomConfig,
) -> Result<CheckReport, ZeroCapacity> {
    random_check_range(imp, config, 0..config.sequences)
}

/// [`random_check`] over a sub-range of sequence indices, for sharding.
pub fn random_check_range<S: SetOps + ?Sized>(
    imp: &S,
    config: &RandomConfig,
    indices: core::ops::Range<u64>,
) -> Result<CheckReport, ZeroCapacity> {
    let init = Arrayset::init(config.capacity)?;
    let empty = BTreeSet::new();
    let mut report = CheckReport::default();
    if let Err(v) = check_state(&init, &empty) {
        report.cases_run = indices.end - indices.start;
        report.record(Failure {
            capacity: config.capacity,
            ops: Vec::new(),
            violation: v,
        });
        return Ok(report);
    }
    for index in indices {
        let ops = random_ops(
            config.sequence_seed(index),
            config.sequence_len,
            config.values,
        );
        report.cases_run += 1;
        let mut set = init.clone();
        let mut model = empty.clone();
        for (i, &op) in ops.iter().enumerate() {
            report.steps += 1;
            match check_step(imp, &set, &model, op) {
                Ok(step) => {
                    report.p1_instances += u64::from(step.p1_checked);
                    set = step.next;
                    model = step.next_model;
                }
                Err(violation) => {
                    let shrunk = minimize(imp, config.capacity, &ops[..=i]);
                    let violation = match replay(imp, config.capacity, &shrunk) {
                        Ok(Some((_, v))) => v,
                        _ => violation,
                    };
                    report.record(Failure {
                        capacity: config.capacity,
                        ops: shrunk,
                        violation,
                    });
                    break;
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrayset::tests::{s0, s_full};

    fn set_of(values: &[i64]) -> BTreeSet<i64> {
        values.iter().copied().collect()
    }

    #[test]
    fn model_of_examples() {
        assert_eq!(model_of(&s0()), Ok(set_of(&[22, 33])));
        assert_eq!(model_of(&Arrayset::init(256).unwrap()), Ok(BTreeSet::new()));
        assert_eq!(model_of(&s0().del(22)), Ok(set_of(&[33])));
    }

    #[test]
    fn model_of_reports_cycles() {
        let mut s = s0();
        s.anext[0] = 1;
        assert_eq!(model_of(&s), Err(AbstractionError::Cycle { at: 1 }));
    }

    #[test]
    fn head_relation() {
        assert!(free_head_used_head_relation(&s0()));
        let mut s = s0();
        s.free_head = 0;
        s.used_head = 0;
        assert!(!free_head_used_head_relation(&s));
        assert!(free_head_used_head_relation(&Arrayset::init(5).unwrap()));
    }

    #[test]
    fn duplicate_detection() {
        assert!(no_dups(22, &s0()));
        let mut s = s0();
        s.avals[0] = 7;
        s.avals[1] = 7;
        assert!(!no_dups(7, &s));
        assert!(!all_distinct(&s));
        assert!(all_distinct(&s0()));
        let empty = Arrayset::init(5).unwrap();
        assert!((-3..10).all(|v| no_dups(v, &empty)));
        // Free-slot values do not count.
        let mut s = s0();
        s.avals[2] = 22;
        assert!(no_dups(22, &s));
    }

    #[test]
    fn shape_predicate() {
        assert!(arraysetp(&s0()));
        assert!(arraysetp(&Arrayset::init(256).unwrap()));
        let mut s = s0();
        s.anext[0] = 5 + 3;
        assert!(!arraysetp(&s));
        let mut s = s0();
        s.avals.pop();
        assert!(!arraysetp(&s));
    }

    #[test]
    fn good_state_examples() {
        assert!(good_statep(44, &s0()));
        let init = Arrayset::init(256).unwrap();
        assert!([-1, 0, 1, 44, i64::MAX]
            .iter()
            .all(|&v| good_statep(v, &init)));
        // Cut the free list short: 2 -> 5.
        let mut s = s0();
        s.anext[2] = 5;
        assert!(!good_statep(44, &s));
    }

    #[test]
    fn partition_examples() {
        assert!(chains_partition(&s0()));
        assert!(chains_partition(&Arrayset::init(5).unwrap()));
        assert!(chains_partition(&s_full()));
        // Slot 3 reachable from both heads: used 3 -> 5, free 2 -> 3.
        let mut s = s0();
        s.used_head = 3;
        s.anext[3] = 5;
        assert!(!chains_partition(&s));
    }

    #[test]
    fn splitmix_reference_values() {
        // First outputs for seed 0 of the published SplitMix64 generator.
        let mut rng = SplitMix64::new(0);
        assert_eq!(rng.next_u64(), 0xE220_A839_7B1D_CDAF);
        assert_eq!(rng.next_u64(), 0x6E78_9E6A_A1B9_65F4);
        assert_eq!(rng.next_u64(), 0x06C4_5D18_8009_454F);
    }

    #[test]
    fn random_ops_contract() {
        let r = ValueRange::for_capacity(5);
        assert!(random_ops(1, 0, r).is_empty());
        assert_eq!(random_ops(9, 100, r), random_ops(9, 100, r));
        let ops = random_ops(1, 10_000, r);
        assert_eq!(ops.len(), 10_000);
        assert!(ops.iter().all(|op| (0..=7).contains(&op.val)));
        for tag in OpTag::ALL {
            assert!(ops.iter().any(|op| op.tag == tag));
        }
        assert_ne!(random_ops(1, 50, r), random_ops(2, 50, r));
    }

    #[test]
    fn value_range_full_width() {
        let r = ValueRange::new(i64::MIN, i64::MAX);
        assert_eq!(r.pick(5), 5);
        assert_eq!(ValueRange::new(-2, -2).pick(12345), -2);
    }

    #[test]
    fn fnv_known_vector() {
        // FNV-1a of the eight bytes "\0\0\0\0\0\0\0\0".
        assert_eq!(fnv1a_word(FNV_OFFSET, 0), 0xa8c7_f832_281a_39c5);
    }

    #[test]
    fn trace_examples() {
        assert!(trace_run(&[], 5).unwrap().is_empty());
        let t = trace_run(&[OpRequest::add(33), OpRequest::add(22)], 5).unwrap();
        let last = t.last().unwrap();
        assert_eq!((last.len, last.len_free), (2, 3));
        assert_eq!(last.ret, None);
        let t = trace_run(
            &[
                OpRequest::add(33),
                OpRequest::add(22),
                OpRequest::is_element(33),
            ],
            5,
        )
        .unwrap();
        assert_eq!(t[2].ret, Some(true));
        assert_eq!(t[2].seq, 3);
        assert!(t.iter().all(|e| e.len + e.len_free == 5));
        assert_eq!(trace_run(&[], 0), Err(ZeroCapacity));
    }

    #[test]
    fn digest_ignores_free_slot_values() {
        let mut a = s0();
        let d = digest(&a);
        a.avals[3] = 999;
        assert_eq!(digest(&a), d);
        a.avals[0] = 999;
        assert_ne!(digest(&a), d);
    }

    #[test]
    fn exhaustive_tiny_cases() {
        let r = exhaustive_check(&Reference, 3, 0, 1).unwrap();
        assert_eq!(r.cases_run, 1);
        assert!(r.passed());
        let r = exhaustive_check(&Reference, 1, 2, 1).unwrap();
        assert_eq!(r.cases_run, 9);
        assert!(r.passed());
        // [add 0, add 0] on capacity 1 exercises the full-set path.
        assert!(r.p1_instances > 0);
    }

    #[test]
    fn exhaustive_guard() {
        assert!(matches!(
            exhaustive_check(&Reference, 3, 20, 4),
            Err(ExhaustiveError::TooLarge { .. })
        ));
        assert_eq!(
            exhaustive_check(&Reference, 0, 1, 1),
            Err(ExhaustiveError::ZeroCapacity)
        );
    }

    /// Skips `anext[curr_index] = used_head` in `add`.
    struct DropsLink;

    impl SetOps for DropsLink {
        fn add(&self, val: i64, mut set: Arrayset) -> Arrayset {
            let size = set.capacity();
            let curr = set.free_head;
            if curr >= size || (set.used_head < size && set.is_element(val)) {
                return set;
            }
            set.free_head = set.anext[set.free_head];
            set.avals[curr] = val;
            set.used_head = curr;
            set
        }

        fn del(&self, val: i64, set: Arrayset) -> Arrayset {
            set.del(val)
        }

        fn is_element(&self, val: i64, set: &Arrayset) -> bool {
            set.is_element(val)
        }
    }

    #[test]
    fn mutant_is_caught_and_minimized() {
        let r = exhaustive_check(&DropsLink, 2, 2, 2).unwrap();
        assert!(!r.passed());
        assert_eq!(r.cases_run, 36);
        let r = random_check(&DropsLink, &RandomConfig::new(3, 20, 4)).unwrap();
        assert!(!r.passed());
        let f = &r.failures[0];
        // One add from empty already breaks the free list.
        assert_eq!(f.ops.len(), 1);
        assert_eq!(f.ops[0].tag, OpTag::Add);
    }

    #[test]
    fn reports_merge_associatively() {
        let a = exhaustive_check(&Reference, 1, 2, 1).unwrap();
        let b = exhaustive_check(&DropsLink, 2, 1, 1).unwrap();
        let c = exhaustive_check(&Reference, 2, 2, 1).unwrap();
        let left = a.clone().merge(b.clone()).merge(c.clone());
        let right = a.clone().merge(b.merge(c));
        assert_eq!(left, right);
        assert_eq!(a.clone().merge(CheckReport::default()), a);
    }

    #[test]
    fn random_reference_clean() {
        let r = random_check(&Reference, &RandomConfig::new(1, 200, 8)).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
        assert_eq!(r.cases_run, 200);
        assert_eq!(r.steps, 200 * 16);
    }
}
