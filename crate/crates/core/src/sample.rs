//! Deterministic samples.
//!
//! Stack the copies of a pattern `s` (length `n`) shifted by every offset
//! `j < n/2`; copy `j` covers columns `j..j + n`. A sample `(delta; i_0, ..)`
//! names columns at which every copy not congruent to `delta` modulo the
//! period of `s` disagrees with copy `delta`. Checking the text only at those
//! columns therefore leaves a single congruence class of candidate offsets.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ledger::QueryLedger;
use crate::scalar::Scalar;
use crate::strings::period;

/// Failure budget used when a caller does not supply one.
pub const DEFAULT_FAILURE_BUDGET: f64 = 1.0 / 3.0;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeterministicSample {
    pub delta: usize,
    pub witnesses: Vec<usize>,
}

impl DeterministicSample {
    pub fn len(&self) -> usize {
        self.witnesses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.witnesses.is_empty()
    }
}

/// Upper bound on sample size for a pattern of length `n`: `2 ceil(log2 n) + 2`.
pub fn size_cap(n: usize) -> usize {
    let ceil_log = if n <= 1 { 0 } else { (usize::BITS - (n - 1).leading_zeros()) as usize };
    2 * ceil_log + 2
}

/// Checks the three defining conditions by exhaustive scan.
pub fn verify_ds(s: &[u8], ds: &DeterministicSample) -> bool {
    let n = s.len();
    if n < 2 {
        return false;
    }
    let half = n / 2;
    let delta = ds.delta;
    if delta >= half {
        return false;
    }
    if ds.witnesses.iter().any(|&i| i < delta || i - delta >= n) {
        return false;
    }
    let d = period(s);
    (0..half)
        .filter(|j| j % d != delta % d)
        .all(|j| ds.witnesses.iter().any(|&i| i >= j && i - j < n && s[i - j] != s[i - delta]))
}

/// Offsets `j < n/2` whose copy agrees with copy `delta` at every witness it covers.
pub fn surviving_offsets(s: &[u8], ds: &DeterministicSample) -> Vec<usize> {
    let n = s.len();
    (0..n / 2)
        .filter(|&j| {
            ds.witnesses
                .iter()
                .all(|&i| !(i >= j && i - j < n) || s[i - j] == s[i - ds.delta])
        })
        .collect()
}

/// Builds a sample by candidate elimination and charges the modeled
/// deterministic-sampling cost at [`DEFAULT_FAILURE_BUDGET`].
pub fn build_ds<F: Scalar>(s: &[u8], ledger: &mut QueryLedger<F>) -> Result<DeterministicSample> {
    build_ds_with_budget(s, F::of(DEFAULT_FAILURE_BUDGET), ledger)
}

/// As [`build_ds`], charging at the given failure budget. The classical
/// construction itself never fails; the budget only enters the charge.
pub fn build_ds_with_budget<F: Scalar>(
    s: &[u8],
    failure_budget: F,
    ledger: &mut QueryLedger<F>,
) -> Result<DeterministicSample> {
    if s.len() < 2 {
        return Err(Error::InvalidLength(format!("deterministic samples need length >= 2, got {}", s.len())));
    }
    if !(failure_budget > F::zero() && failure_budget <= F::one()) {
        return Err(Error::InvalidParameter("failure budget must lie in (0, 1]".into()));
    }
    ledger.charge_ds_build(s.len(), failure_budget);
    Ok(construct(s))
}

/// Candidate elimination.
///
/// While the surviving offsets span more than one class modulo the period,
/// take the smallest survivor and the largest one outside its class. Their
/// copies differ somewhere inside the columns every survivor covers (the
/// overlap is longer than `n/2`, so agreement there would make their distance
/// a multiple of the period). Record the first such column and keep only the
/// survivors showing the least frequent symbol in it, which at least halves
/// the survivors. The survivor with the smallest offset becomes `delta`.
fn construct(s: &[u8]) -> DeterministicSample {
    let n = s.len();
    let d = period(s);
    let mut candidates: Vec<usize> = (0..n / 2).collect();
    let mut witnesses = Vec::new();

    loop {
        let lo = candidates[0];
        let hi = *candidates.last().expect("survivor set is never empty");
        let Some(&other) = candidates.iter().rev().find(|&&j| (j - lo) % d != 0) else {
            break;
        };
        let column = (hi..lo + n)
            .find(|&i| s[i - lo] != s[i - other])
            .expect("copies from different period classes disagree on their common columns");

        let mut counts = [0usize; 256];
        for &j in &candidates {
            counts[usize::from(s[column - j])] += 1;
        }
        // least frequent symbol present; ties go to the one met first
        let keep = candidates
            .iter()
            .map(|&j| s[column - j])
            .min_by_key(|&c| counts[usize::from(c)])
            .expect("survivor set is never empty");

        witnesses.push(column);
        candidates.retain(|&j| s[column - j] == keep);
    }

    DeterministicSample { delta: candidates[0], witnesses }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ledger::{Charge, CostModel};
    use proptest::prelude::*;

    fn ledger() -> QueryLedger<f64> {
        QueryLedger::new(CostModel::quantum())
    }

    #[test]
    fn verify_examples() {
        assert!(verify_ds(b"aaaa", &DeterministicSample { delta: 0, witnesses: vec![] }));
        assert!(verify_ds(b"abab", &DeterministicSample { delta: 0, witnesses: vec![1] }));
        assert!(!verify_ds(b"abab", &DeterministicSample { delta: 0, witnesses: vec![0] }));
    }

    #[test]
    fn verify_rejects_malformed() {
        assert!(!verify_ds(b"a", &DeterministicSample::default()));
        assert!(!verify_ds(b"abcd", &DeterministicSample { delta: 2, witnesses: vec![] }));
        assert!(!verify_ds(b"abcd", &DeterministicSample { delta: 1, witnesses: vec![0] }));
        assert!(!verify_ds(b"abcd", &DeterministicSample { delta: 0, witnesses: vec![4] }));
        assert!(!verify_ds(b"abcd", &DeterministicSample { delta: 0, witnesses: vec![] }));
    }

    #[test]
    fn build_examples() {
        let mut l = ledger();
        let ds = build_ds(b"aaaa", &mut l).unwrap();
        assert_eq!(ds, DeterministicSample { delta: 0, witnesses: vec![] });

        let ds = build_ds(b"abab", &mut l).unwrap();
        assert!(verify_ds(b"abab", &ds));
        assert!(ds.len() <= size_cap(4));
        assert!(l.get(Charge::DsBuild) > 0.0);

        assert!(build_ds(b"a", &mut l).is_err());
    }

    #[test]
    fn build_charges_the_budgeted_formula() {
        let mut l = ledger();
        build_ds_with_budget(&[0u8, 1].repeat(512), 1.0 / 1024.0, &mut l).unwrap();
        let expected = CostModel::<f64>::quantum().ds_build_cost(1024, 1.0 / 1024.0);
        assert_eq!(l.get(Charge::DsBuild), expected);
        assert!(build_ds_with_budget(b"ab", 0.0, &mut l).is_err());
    }

    #[test]
    fn size_cap_values() {
        assert_eq!(size_cap(2), 4);
        assert_eq!(size_cap(4), 6);
        assert_eq!(size_cap(5), 8);
        assert_eq!(size_cap(4096), 26);
    }

    #[test]
    fn exhaustive_binary_up_to_12() {
        let mut l = QueryLedger::new(CostModel::<f64>::none());
        for n in 2..=12usize {
            for bits in 0u32..(1 << n) {
                let s: Vec<u8> = (0..n).map(|i| ((bits >> i) & 1) as u8).collect();
                let ds = build_ds(&s, &mut l).unwrap();
                assert!(verify_ds(&s, &ds), "{s:?} {ds:?}");
                assert!(ds.len() <= size_cap(n));
            }
        }
    }

    proptest! {
        #[test]
        fn built_samples_verify(
            alphabet in prop::sample::select(vec![2u8, 4, 26]),
            raw in proptest::collection::vec(any::<u8>(), 2..600),
        ) {
            let s: Vec<u8> = raw.iter().map(|c| c % alphabet).collect();
            let ds = build_ds(&s, &mut QueryLedger::new(CostModel::<f64>::none())).unwrap();
            prop_assert!(verify_ds(&s, &ds));
            prop_assert!(ds.len() <= size_cap(s.len()));
        }

        #[test]
        fn survivors_are_one_period_class(
            unit in proptest::collection::vec(0u8..2, 1..8),
            reps in 1usize..12,
            tail in 0usize..8,
        ) {
            let mut s: Vec<u8> = unit.repeat(reps);
            s.extend(unit.iter().cycle().take(tail.min(unit.len())));
            prop_assume!(s.len() >= 2);
            let ds = build_ds(&s, &mut QueryLedger::new(CostModel::<f64>::none())).unwrap();
            let d = period(&s);
            let expected: Vec<usize> = (0..s.len() / 2).filter(|j| j % d == ds.delta % d).collect();
            prop_assert_eq!(surviving_offsets(&s, &ds), expected);
        }
    }
}
