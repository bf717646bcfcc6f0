//! Exhaustive checks of the reduction theorem, its corollary and the
//! lemmas behind them, over every term or forest below a size bound.
//!
//! Each suite produces a [`VerificationReport`]. Work is split into
//! independent items that may run in parallel; per-item results are merged
//! in item order, so a report depends only on the suite and its
//! parameters. Wall time is kept out of the serialized form for the same
//! reason.

mod bad_sequence;
mod suites;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ot::EnumerateError;

pub use bad_sequence::{longest_controlled_bad_sequence, BadSequenceResult, Domain};
pub use suites::psi_picture;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    MainTheorem,
    Corollary,
    LinearOrder,
    OrderMonotonicity,
    Lexicographic,
    SubscriptRaising,
    Prefix,
    GSubset,
    DescendingSum,
    USubterm,
    D0Bound,
    OrderLaws,
    NormIdentity,
    NormBound,
    HeightLaw,
    PsiPicture,
    Coll,
    Exp,
    MinSubterm,
    Cases,
    Dtc1,
    HeightVsNorm,
    QuasiOrder,
    Determinism,
}

impl Suite {
    pub const ALL: [Suite; 24] = [
        Suite::MainTheorem,
        Suite::Corollary,
        Suite::LinearOrder,
        Suite::OrderMonotonicity,
        Suite::Lexicographic,
        Suite::SubscriptRaising,
        Suite::Prefix,
        Suite::GSubset,
        Suite::DescendingSum,
        Suite::USubterm,
        Suite::D0Bound,
        Suite::OrderLaws,
        Suite::NormIdentity,
        Suite::NormBound,
        Suite::HeightLaw,
        Suite::PsiPicture,
        Suite::Coll,
        Suite::Exp,
        Suite::MinSubterm,
        Suite::Cases,
        Suite::Dtc1,
        Suite::HeightVsNorm,
        Suite::QuasiOrder,
        Suite::Determinism,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Suite::MainTheorem => "main-theorem",
            Suite::Corollary => "corollary",
            Suite::LinearOrder => "linear-order",
            Suite::OrderMonotonicity => "order-monotonicity",
            Suite::Lexicographic => "lexicographic",
            Suite::SubscriptRaising => "subscript-raising",
            Suite::Prefix => "prefix",
            Suite::GSubset => "g-subset",
            Suite::DescendingSum => "descending-sum",
            Suite::USubterm => "lusubterm",
            Suite::D0Bound => "ld0domega",
            Suite::OrderLaws => "order-laws",
            Suite::NormIdentity => "norm-identity",
            Suite::NormBound => "norm-bound",
            Suite::HeightLaw => "height-law",
            Suite::PsiPicture => "lpsipicture",
            Suite::Coll => "lcoll",
            Suite::Exp => "lexp",
            Suite::MinSubterm => "lminsubterm",
            Suite::Cases => "lcases",
            Suite::Dtc1 => "ltc",
            Suite::HeightVsNorm => "height-vs-norm",
            Suite::QuasiOrder => "quasi-order",
            Suite::Determinism => "determinism",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Suite::MainTheorem => "T(a) covers into T(b) implies a ≼ b, principal a, b",
            Suite::Corollary => "ρ-trees of order-0 sums cover only when a ≼ b",
            Suite::LinearOrder => "≺ is irreflexive, trichotomous and transitive on all terms",
            Suite::OrderMonotonicity => "ord(a) < ord(b) implies a ≺ b",
            Suite::Lexicographic => "part-wise domination of sums implies a ≼ b",
            Suite::SubscriptRaising => "D_u a ∈ OT and u ≤ v imply D_v a ∈ OT",
            Suite::Prefix => "prefixes of the argument of D_u stay in OT",
            Suite::GSubset => "G_u a ⊆ OT for a ∈ OT",
            Suite::DescendingSum => "components of OT sums have descending orders",
            Suite::USubterm => "u-subterms of D_u a of order u are ≼ D_u a",
            Suite::D0Bound => "terms below D_0 D_{n+1} 0 have order 0 and lie in OT(n+1)",
            Suite::OrderLaws => "orders of coll, exp_u, Ψ_u and T(a)",
            Suite::NormIdentity => "node count of Ψ_u when u < ord(last)",
            Suite::NormBound => "||T(a)|| ≤ (n+1)·||a|| for a ∈ OT(n+1)",
            Suite::HeightLaw => "heights of Ψ_u, T(a) and ρ-trees",
            Suite::PsiPicture => "Ψ_u is a spine with the inputs branching off",
            Suite::Coll => "coll yields a tree of order u with the inputs as substructures",
            Suite::Exp => "exp_u yields a tree of order u with the inputs as substructures",
            Suite::MinSubterm => "minimal nodes of a given order sit under copies of T(b)",
            Suite::Cases => "coverings between colls, max-nodes nodes per pair, fall into one of two cases",
            Suite::Dtc1 => "double trees of height ≤ 1 cover exactly as their trees do",
            Suite::HeightVsNorm => "height(Q) ≥ |P| − 1 implies P covers into Q",
            Suite::QuasiOrder => "covering is reflexive and transitive",
            Suite::Determinism => "T(a) does not depend on cache state or evaluation order",
        }
    }

    /// Default parameters, small enough to finish in seconds.
    pub fn default_params(self) -> Params {
        let mut p = Params { max_subscript: 2, max_norm: 6, max_nodes: 5, sample: 200, seed: 0, triple_norm: 4 };
        match self {
            Suite::LinearOrder | Suite::OrderMonotonicity | Suite::Lexicographic => p.max_norm = 5,
            Suite::Cases => p.max_nodes = 10,
            _ => {}
        }
        p
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Suite {
    type Err = VerifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL.into_iter().find(|x| x.id() == s).ok_or_else(|| VerifyError::UnknownSuite(s.to_string()))
    }
}

/// Size bounds for a suite. Each suite reads only some of them and records
/// those in its report.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Params {
    pub max_subscript: u32,
    pub max_norm: usize,
    pub max_nodes: usize,
    /// Size of the random sample used for transitivity.
    pub sample: usize,
    pub seed: u64,
    /// All triples are checked for transitivity up to this norm.
    pub triple_norm: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Upper bound on checked instances; going over is an error.
    pub max_instances: u64,
    pub time_budget: Option<Duration>,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
}

pub const DEFAULT_MAX_INSTANCES: u64 = 200_000_000;
pub const DEFAULT_TIME_BUDGET: Duration = Duration::from_secs(3600);

impl Default for Limits {
    fn default() -> Self {
        Limits { max_instances: DEFAULT_MAX_INSTANCES, time_budget: Some(DEFAULT_TIME_BUDGET), jobs: None }
    }
}

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
    #[error(transparent)]
    Enumerate(#[from] EnumerateError),
    #[error("instance cap of {cap} exceeded")]
    InstanceCap { cap: u64 },
    #[error("time budget of {budget:?} exceeded")]
    TimeBudget { budget: Duration },
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("cannot start worker pool: {0}")]
    Pool(String),
}

impl VerifyError {
    /// True for the two resource-limit errors.
    pub fn is_cap(&self) -> bool {
        matches!(self, VerifyError::InstanceCap { .. } | VerifyError::TimeBudget { .. })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub params: BTreeMap<String, u64>,
    pub instances: u64,
    pub violations: Vec<String>,
    /// Counts that are recorded but not asserted, such as how often
    /// `a ≼ b` holds without a covering.
    pub stats: BTreeMap<String, u64>,
    pub passed: bool,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One line for humans, including the wall time.
    pub fn summary(&self) -> String {
        format!(
            "{}: {} ({} instances, {} violations, {:.2?})",
            self.suite,
            if self.passed { "pass" } else { "FAIL" },
            self.instances,
            self.violations.len(),
            self.wall_time
        )
    }
}

/// Counts and counterexamples from one slice of a suite.
#[derive(Debug, Default)]
pub(crate) struct Tally {
    instances: u64,
    violations: Vec<String>,
    stats: BTreeMap<&'static str, u64>,
}

impl Tally {
    pub(crate) fn check(&mut self, ok: bool, violation: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok {
            self.violations.push(violation());
        }
    }

    pub(crate) fn stat(&mut self, key: &'static str) {
        *self.stats.entry(key).or_default() += 1;
    }

    fn absorb(&mut self, other: Tally) {
        self.instances += other.instances;
        self.violations.extend(other.violations);
        for (k, v) in other.stats {
            *self.stats.entry(k).or_default() += v;
        }
    }
}

pub(crate) struct Ctx {
    pub(crate) params: Params,
    limits: Limits,
    start: Instant,
    used: AtomicU64,
}

impl Ctx {
    fn charge(&self, n: u64) -> Result<(), VerifyError> {
        let used = self.used.fetch_add(n, Ordering::Relaxed) + n;
        if used > self.limits.max_instances {
            return Err(VerifyError::InstanceCap { cap: self.limits.max_instances });
        }
        if let Some(budget) = self.limits.time_budget {
            if self.start.elapsed() > budget {
                return Err(VerifyError::TimeBudget { budget });
            }
        }
        Ok(())
    }

    /// Runs `f` on every item in parallel and merges the tallies in item
    /// order.
    pub(crate) fn each<T: Sync>(&self, items: &[T], f: impl Fn(&T, &mut Tally) + Sync) -> Result<Tally, VerifyError> {
        let parts: Vec<Tally> = items
            .par_iter()
            .map(|item| {
                let mut t = Tally::default();
                f(item, &mut t);
                self.charge(t.instances).map(|_| t)
            })
            .collect::<Result<_, _>>()?;
        let mut total = Tally::default();
        for t in parts {
            total.absorb(t);
        }
        Ok(total)
    }
}

/// Runs one suite under the given limits.
pub fn run_suite(suite: Suite, params: &Params, limits: &Limits) -> Result<VerificationReport, VerifyError> {
    let ctx = Ctx { params: *params, limits: *limits, start: Instant::now(), used: AtomicU64::new(0) };
    let run = || suites::run(suite, &ctx);
    let (tally, used) = match limits.jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| VerifyError::Pool(e.to_string()))?
            .install(run)?,
        None => run()?,
    };
    let violations = tally.violations;
    Ok(VerificationReport {
        suite: suite.id().to_string(),
        params: used.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
        instances: tally.instances,
        passed: violations.is_empty(),
        violations,
        stats: tally.stats.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
        wall_time: ctx.start.elapsed(),
    })
}

fn with_bounds(suite: Suite, max_subscript: u32, max_norm: usize) -> Params {
    Params { max_subscript, max_norm, ..suite.default_params() }
}

/// Checks the reduction theorem on all principal ordinal terms with
/// subscripts `≤ max_subscript` and norm `≤ max_norm`.
pub fn verify_main_theorem(max_subscript: u32, max_norm: usize) -> Result<VerificationReport, VerifyError> {
    let suite = Suite::MainTheorem;
    run_suite(suite, &with_bounds(suite, max_subscript, max_norm), &Limits::default())
}

/// Checks the corollary for order-0 sums through `ρ`.
pub fn verify_corollary(max_subscript: u32, max_norm: usize) -> Result<VerificationReport, VerifyError> {
    let suite = Suite::Corollary;
    run_suite(suite, &with_bounds(suite, max_subscript, max_norm), &Limits::default())
}

/// Runs a suite by id with default limits.
pub fn verify_lemma_suite(name: &str, params: &Params) -> Result<VerificationReport, VerifyError> {
    run_suite(name.parse()?, params, &Limits::default())
}
