//! Timed property-check drivers.
//!
//! The checks themselves live in `rar_core::oracle`; this module adds the
//! wall clock, splits randomized runs across threads and bundles the
//! randomized and exhaustive runs that make up `rarc corpus-test`.

use std::fmt;
use std::num::NonZeroUsize;
use std::thread;
use std::time::Instant;

use rar_core::arrayset::ZeroCapacity;
use rar_core::oracle::{
    exhaustive_check, minimize, random_check_range, replay, CheckReport, ExhaustiveError, Failure,
    RandomConfig, SetOps,
};

/// One bounded exhaustive enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExhaustiveRun {
    pub capacity: usize,
    pub depth: u32,
    pub alphabet: u64,
}

impl fmt::Display for ExhaustiveRun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "exhaustive capacity={} depth={} alphabet={}",
            self.capacity, self.depth, self.alphabet
        )
    }
}

const fn run(capacity: usize, depth: u32, alphabet: u64) -> ExhaustiveRun {
    ExhaustiveRun {
        capacity,
        depth,
        alphabet,
    }
}

/// Exhaustive runs of `corpus-test`. Each alphabet has one more value than
/// the capacity, so every run reaches the full set and then tries to add to
/// it.
pub const EXHAUSTIVE_PLAN: [ExhaustiveRun; 4] =
    [run(1, 6, 2), run(2, 6, 3), run(3, 6, 4), run(4, 5, 5)];

pub fn timed_exhaustive<S: SetOps + ?Sized>(
    imp: &S,
    plan: ExhaustiveRun,
) -> Result<CheckReport, ExhaustiveError> {
    let start = Instant::now();
    let mut report = exhaustive_check(imp, plan.capacity, plan.depth, plan.alphabet)?;
    report.elapsed = start.elapsed();
    Ok(report)
}

/// Randomized check split into `shards` contiguous index ranges, one thread
/// each. The merged report does not depend on `shards` except for the order
/// of recorded failures and, past the recording cap, which ones are kept.
pub fn timed_random<S: SetOps + Sync + ?Sized>(
    imp: &S,
    config: &RandomConfig,
    shards: NonZeroUsize,
) -> Result<CheckReport, ZeroCapacity> {
    let start = Instant::now();
    let n = config.sequences;
    let shards = (shards.get() as u64).min(n.max(1));
    let bounds: Vec<(u64, u64)> = (0..shards)
        .map(|k| (n * k / shards, n * (k + 1) / shards))
        .collect();
    let mut report = if shards == 1 {
        random_check_range(imp, config, 0..n)?
    } else {
        thread::scope(|s| {
            let handles: Vec<_> = bounds
                .iter()
                .map(|&(lo, hi)| s.spawn(move || random_check_range(imp, config, lo..hi)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("check worker panicked"))
                .try_fold(CheckReport::default(), |acc, r| r.map(|r| acc.merge(r)))
        })?
    };
    // Merged `elapsed` sums per-shard times; report wall time instead.
    report.elapsed = start.elapsed();
    Ok(report)
}

/// Shrinks a recorded failure to a locally minimal sequence that still
/// fails, and reports the violation that sequence produces.
pub fn minimized_counterexample<S: SetOps + ?Sized>(imp: &S, failure: &Failure) -> Failure {
    let ops = minimize(imp, failure.capacity, &failure.ops);
    match replay(imp, failure.capacity, &ops) {
        Ok(Some((_, violation))) => Failure {
            capacity: failure.capacity,
            ops,
            violation,
        },
        // The failure was recorded by a driver that stopped early; keep it.
        _ => failure.clone(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorpusTestConfig {
    /// Capacity of the randomized run.
    pub capacity: usize,
    pub seed: u64,
    /// Number of randomized sequences.
    pub iters: u64,
    pub shards: NonZeroUsize,
}

impl CorpusTestConfig {
    pub fn new(capacity: usize, seed: u64, iters: u64) -> Self {
        CorpusTestConfig {
            capacity,
            seed,
            iters,
            shards: thread::available_parallelism().unwrap_or(NonZeroUsize::MIN),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Stage {
    pub label: String,
    pub report: CheckReport,
}

#[derive(Debug, Clone)]
pub struct CorpusTestReport {
    pub stages: Vec<Stage>,
    /// Minimized form of the first failure found, if any.
    pub counterexample: Option<Failure>,
}

impl CorpusTestReport {
    pub fn passed(&self) -> bool {
        self.stages.iter().all(|s| s.report.passed())
    }

    pub fn total(&self) -> CheckReport {
        self.stages
            .iter()
            .fold(CheckReport::default(), |acc, s| acc.merge(s.report.clone()))
    }
}

impl fmt::Display for CorpusTestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.stages {
            let r = &s.report;
            writeln!(
                f,
                "{}: {} cases, {} steps, {} P1 instances, {} failures in {:.2?}",
                s.label, r.cases_run, r.steps, r.p1_instances, r.failure_count, r.elapsed
            )?;
        }
        match &self.counterexample {
            Some(c) => writeln!(f, "counterexample: {c}"),
            None => {
                let t = self.total();
                writeln!(f, "passed: {} cases, {} steps", t.cases_run, t.steps)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HarnessError {
    ZeroCapacity,
    Exhaustive(ExhaustiveError),
}

impl fmt::Display for HarnessError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HarnessError::ZeroCapacity => ZeroCapacity.fmt(f),
            HarnessError::Exhaustive(e) => e.fmt(f),
        }
    }
}

impl std::error::Error for HarnessError {}

/// Randomized check at `config.capacity`, then every run of
/// [`EXHAUSTIVE_PLAN`].
pub fn corpus_test<S: SetOps + Sync + ?Sized>(
    imp: &S,
    config: &CorpusTestConfig,
) -> Result<CorpusTestReport, HarnessError> {
    let random = RandomConfig::new(config.seed, config.iters, config.capacity);
    let mut stages = vec![Stage {
        label: format!(
            "random capacity={} seed={} sequences={} length={}",
            random.capacity, random.seed, random.sequences, random.sequence_len
        ),
        report: timed_random(imp, &random, config.shards)
            .map_err(|_| HarnessError::ZeroCapacity)?,
    }];
    for plan in EXHAUSTIVE_PLAN {
        stages.push(Stage {
            label: plan.to_string(),
            report: timed_exhaustive(imp, plan).map_err(HarnessError::Exhaustive)?,
        });
    }
    let counterexample = stages
        .iter()
        .find_map(|s| s.report.failures.first())
        .map(|f| minimized_counterexample(imp, f));
    Ok(CorpusTestReport {
        stages,
        counterexample,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rar_core::oracle::{sequence_count, OpRequest, Reference, EXHAUSTIVE_LIMIT};
    use rar_core::Arrayset;

    /// Forgets to link the new slot into the used list.
    struct DropsLink;

    impl SetOps for DropsLink {
        fn add(&self, val: i64, mut s: Arrayset) -> Arrayset {
            let cap = s.capacity();
            let curr = s.free_head;
            if curr >= cap || (s.used_head < cap && s.is_element(val)) {
                return s;
            }
            s.free_head = s.anext[curr];
            s.avals[curr] = val;
            s.used_head = curr;
            s
        }
        fn del(&self, val: i64, s: Arrayset) -> Arrayset {
            s.del(val)
        }
        fn is_element(&self, val: i64, s: &Arrayset) -> bool {
            s.is_element(val)
        }
    }

    #[test]
    fn plan_is_within_limits_and_covers_full_sets() {
        for p in EXHAUSTIVE_PLAN {
            assert!(sequence_count(p.depth, p.alphabet).unwrap() <= EXHAUSTIVE_LIMIT);
            assert!(p.alphabet > p.capacity as u64);
            assert!(p.depth as usize > p.capacity);
        }
    }

    #[test]
    fn sharding_does_not_change_counts() {
        let config = RandomConfig::new(11, 37, 6);
        let one = timed_random(&Reference, &config, NonZeroUsize::MIN).unwrap();
        let four = timed_random(&Reference, &config, NonZeroUsize::new(4).unwrap()).unwrap();
        assert!(one.passed() && four.passed());
        assert_eq!(
            (one.cases_run, one.steps, one.p1_instances),
            (four.cases_run, four.steps, four.p1_instances)
        );
        let many = timed_random(&Reference, &config, NonZeroUsize::new(100).unwrap()).unwrap();
        assert_eq!(many.cases_run, 37);
    }

    #[test]
    fn mutant_fails_with_short_counterexample() {
        let mut config = CorpusTestConfig::new(8, 1, 50);
        config.shards = NonZeroUsize::MIN;
        let report = corpus_test(&DropsLink, &config).unwrap();
        assert!(!report.passed());
        let c = report.counterexample.clone().expect("counterexample");
        assert!(c.ops.len() <= 2, "{c}");
        assert!(c.ops.iter().any(|op| *op == OpRequest::add(op.val)));
        assert!(report.to_string().contains("counterexample: "));
    }

    #[test]
    fn elapsed_is_filled() {
        let r = timed_exhaustive(&Reference, run(2, 4, 3)).unwrap();
        assert!(r.passed());
        assert_eq!(r.cases_run, 9u64.pow(4));
        assert!(r.elapsed > std::time::Duration::ZERO);
    }
}
