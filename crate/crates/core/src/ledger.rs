//! Modeled query accounting.
//!
//! The solvers run classically; every subroutine that a quantum execution
//! would perform with a known query bound charges that bound here instead.
//! Charges are real-valued. Logarithms are base 2 and clamped below at 1.

use std::ops::Range;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Majority-vote repetitions per logical comparison in [`robust_minfind`].
///
/// At a per-call error of 1/3 a 51-way majority errs with probability about
/// 0.0069, so a knockout bracket of depth 20 still succeeds with probability
/// above 0.87.
pub const MAJORITY_REPETITIONS: usize = 51;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CostKind {
    /// Square-root style bounds of the quantum subroutines.
    QuantumIdeal,
    /// Linear classical read counts.
    Classical,
    /// Every charge is zero.
    None,
}

/// Which subroutine a charge belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Charge {
    Grover,
    MinFind,
    DsBuild,
    DsMatch,
    Base,
}

impl Charge {
    pub const ALL: [Charge; 5] = [Charge::Grover, Charge::MinFind, Charge::DsBuild, Charge::DsMatch, Charge::Base];

    pub fn name(self) -> &'static str {
        match self {
            Charge::Grover => "grover",
            Charge::MinFind => "minfind",
            Charge::DsBuild => "ds_build",
            Charge::DsMatch => "ds_match",
            Charge::Base => "base",
        }
    }

    fn slot(self) -> usize {
        self as usize
    }
}

/// Charge formulas and their constants.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CostModel<F> {
    pub kind: CostKind,
    pub grover: F,
    pub minfind: F,
    pub ds_build: F,
    pub ds_match: F,
}

impl<F: Scalar> CostModel<F> {
    /// Unit constants.
    pub fn new(kind: CostKind) -> Self {
        Self { kind, grover: F::one(), minfind: F::one(), ds_build: F::one(), ds_match: F::one() }
    }

    pub fn quantum() -> Self {
        Self::new(CostKind::QuantumIdeal)
    }

    pub fn classical() -> Self {
        Self::new(CostKind::Classical)
    }

    pub fn none() -> Self {
        Self::new(CostKind::None)
    }

    pub fn with_constants(kind: CostKind, grover: F, minfind: F, ds_build: F, ds_match: F) -> Result<Self> {
        for (name, value) in [("c_G", grover), ("c_M", minfind), ("c_D", ds_build), ("c_S", ds_match)] {
            if !(value > F::zero() && value.is_finite()) {
                return Err(Error::InvalidParameter(format!("{name} must be a positive finite constant")));
            }
        }
        Ok(Self { kind, grover, minfind, ds_build, ds_match })
    }

    /// Search over `m` items: `c_G * ceil(sqrt m)`.
    pub fn grover_cost(&self, m: usize) -> F {
        match self.kind {
            CostKind::QuantumIdeal => self.grover * ceil_sqrt::<F>(m),
            CostKind::Classical => self.grover * F::of_usize(m),
            CostKind::None => F::zero(),
        }
    }

    /// Minimum finding over `m` items whose comparisons cost `per_query` each.
    pub fn minfind_cost(&self, m: usize, per_query: F) -> F {
        match self.kind {
            CostKind::QuantumIdeal => self.minfind * ceil_sqrt::<F>(m) * per_query,
            CostKind::Classical => self.minfind * F::of_usize(m) * per_query,
            CostKind::None => F::zero(),
        }
    }

    /// Deterministic sampling of a length-`m` pattern with the given failure budget:
    /// `c_D * sqrt(m log m loglog m) * log max(1/budget, m)`.
    pub fn ds_build_cost(&self, m: usize, failure_budget: F) -> F {
        let len = F::of_usize(m);
        match self.kind {
            CostKind::QuantumIdeal => {
                let inner = len * len.log2_clamped() * len.loglog2_clamped();
                let confidence = failure_budget.recip().max(len).log2_clamped();
                self.ds_build * inner.sqrt() * confidence
            }
            CostKind::Classical => self.ds_build * len,
            CostKind::None => F::zero(),
        }
    }

    /// Sample-driven matching in a length-`n` text: `c_S * sqrt(n log m)`.
    pub fn ds_match_cost(&self, n: usize, m: usize) -> F {
        match self.kind {
            CostKind::QuantumIdeal => self.ds_match * (F::of_usize(n) * F::of_usize(m).log2_clamped()).sqrt(),
            CostKind::Classical => self.ds_match * F::of_usize(n),
            CostKind::None => F::zero(),
        }
    }

    /// Exhaustive base-case scan of `windows` windows of length `len`:
    /// minimum finding over the windows with Grover-priced comparisons.
    pub fn base_scan_cost(&self, windows: usize, len: usize) -> F {
        self.minfind_cost(windows.max(1), self.grover_cost(len))
    }
}

fn ceil_sqrt<F: Scalar>(m: usize) -> F {
    let mut r = (m as f64).sqrt() as usize;
    while r * r < m {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) >= m {
        r -= 1;
    }
    F::of_usize(r)
}

/// Per-subroutine tallies of modeled queries.
///
/// Buckets only ever grow; the grand total is their sum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QueryLedger<F> {
    model: CostModel<F>,
    totals: [F; 5],
}

impl<F: Scalar> QueryLedger<F> {
    pub fn new(model: CostModel<F>) -> Self {
        Self { model, totals: [F::zero(); 5] }
    }

    pub fn model(&self) -> &CostModel<F> {
        &self.model
    }

    /// Empty ledger under the same model.
    pub fn fresh(&self) -> Self {
        Self::new(self.model)
    }

    pub fn get(&self, charge: Charge) -> F {
        self.totals[charge.slot()]
    }

    pub fn total(&self) -> F {
        self.totals.iter().fold(F::zero(), |acc, &x| acc + x)
    }

    fn add(&mut self, charge: Charge, amount: F) -> F {
        debug_assert!(amount >= F::zero(), "charges are non-negative");
        self.totals[charge.slot()] = self.totals[charge.slot()] + amount;
        amount
    }

    pub fn charge_grover(&mut self, m: usize) -> F {
        let amount = self.model.grover_cost(m);
        self.add(Charge::Grover, amount)
    }

    pub fn charge_minfind(&mut self, m: usize, per_query: F) -> F {
        let amount = self.model.minfind_cost(m, per_query);
        self.add(Charge::MinFind, amount)
    }

    pub fn charge_ds_build(&mut self, m: usize, failure_budget: F) -> F {
        let amount = self.model.ds_build_cost(m, failure_budget);
        self.add(Charge::DsBuild, amount)
    }

    pub fn charge_ds_match(&mut self, n: usize, m: usize) -> F {
        let amount = self.model.ds_match_cost(n, m);
        self.add(Charge::DsMatch, amount)
    }

    pub fn charge_base(&mut self, windows: usize, len: usize) -> F {
        let amount = self.model.base_scan_cost(windows, len);
        self.add(Charge::Base, amount)
    }

    /// Bucket-wise addition of a disjoint ledger.
    pub fn merge(&mut self, other: &QueryLedger<F>) {
        for charge in Charge::ALL {
            self.add(charge, other.get(charge));
        }
    }

    /// Adds the composition of independent sub-computations whose costs combine
    /// in quadrature (adversary composition): each bucket receives
    /// `sqrt(sum of squares)` of the children's buckets.
    pub fn merge_composed(&mut self, children: &[QueryLedger<F>]) {
        for charge in Charge::ALL {
            let squares = children.iter().fold(F::zero(), |acc, c| acc + c.get(charge) * c.get(charge));
            self.add(charge, squares.sqrt());
        }
    }

    pub fn snapshot(&self) -> LedgerSnapshot {
        let f = |c: Charge| self.get(c).to_f64().unwrap_or(f64::NAN);
        let total = self.total().to_f64().unwrap_or(f64::NAN);
        LedgerSnapshot {
            grover: f(Charge::Grover),
            minfind: f(Charge::MinFind),
            ds_build: f(Charge::DsBuild),
            ds_match: f(Charge::DsMatch),
            base: f(Charge::Base),
            total,
            total_ceil: total.ceil() as u64,
        }
    }
}

/// Flat record of a ledger: one total per charge kind plus the grand total.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LedgerSnapshot {
    pub grover: f64,
    pub minfind: f64,
    pub ds_build: f64,
    pub ds_match: f64,
    pub base: f64,
    pub total: f64,
    pub total_ceil: u64,
}

impl LedgerSnapshot {
    pub const COLUMNS: [&'static str; 6] = ["grover", "minfind", "ds_build", "ds_match", "base", "total"];

    pub fn values(&self) -> [f64; 6] {
        [self.grover, self.minfind, self.ds_build, self.ds_match, self.base, self.total]
    }
}

/// Bounded-error view of an exact comparator: each call returns the exact bit
/// with probability `success`, its negation otherwise.
pub struct NoisyComparator<C> {
    exact: C,
    success: f64,
    rng: ChaCha8Rng,
}

impl<C: Fn(usize, usize) -> bool> NoisyComparator<C> {
    /// `success` must lie in `[2/3, 1]`.
    pub fn new(exact: C, success: f64, seed: u64) -> Result<Self> {
        if !(2.0 / 3.0 - 1e-12..=1.0).contains(&success) {
            return Err(Error::InvalidParameter(format!("comparator success probability {success} not in [2/3, 1]")));
        }
        Ok(Self { exact, success, rng: ChaCha8Rng::seed_from_u64(seed) })
    }

    /// Noise-free comparator.
    pub fn exact(exact: C) -> Self {
        Self { exact, success: 1.0, rng: ChaCha8Rng::seed_from_u64(0) }
    }

    pub fn success(&self) -> f64 {
        self.success
    }

    pub fn is_exact(&self) -> bool {
        self.success >= 1.0
    }

    pub fn compare(&mut self, i: usize, j: usize) -> bool {
        let bit = (self.exact)(i, j);
        if self.is_exact() || self.rng.random_bool(self.success) {
            bit
        } else {
            !bit
        }
    }

    fn majority(&mut self, i: usize, j: usize) -> bool {
        if self.is_exact() {
            return self.compare(i, j);
        }
        let yes = (0..MAJORITY_REPETITIONS).filter(|_| self.compare(i, j)).count();
        2 * yes > MAJORITY_REPETITIONS
    }
}

/// Index of the minimum of `items` under `cmp(i, j) = [item i < item j]`.
///
/// Runs a knockout bracket over the items in index order; ties go to the
/// smaller index, so a noise-free comparator yields the leftmost minimum. Each
/// logical comparison is a majority over [`MAJORITY_REPETITIONS`] noisy calls.
/// The ledger is charged the modeled `minfind(len, per_query)` bound
/// irrespective of the repetitions.
pub fn robust_minfind<F: Scalar, C: Fn(usize, usize) -> bool>(
    items: Range<usize>,
    cmp: &mut NoisyComparator<C>,
    ledger: &mut QueryLedger<F>,
    per_query: F,
) -> Result<usize> {
    if items.is_empty() {
        return Err(Error::InvalidLength("minimum finding over an empty range".into()));
    }
    ledger.charge_minfind(items.len(), per_query);
    let mut round: Vec<usize> = items.collect();
    while round.len() > 1 {
        let mut next = Vec::with_capacity(round.len().div_ceil(2));
        for pair in round.chunks(2) {
            match *pair {
                [a, b] => next.push(if cmp.majority(b, a) { b } else { a }),
                [a] => next.push(a),
                _ => unreachable!(),
            }
        }
        round = next;
    }
    Ok(round[0])
}
