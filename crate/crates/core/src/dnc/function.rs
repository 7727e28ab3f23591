//! Function problem: leftmost minimal length-`len` substring by recursion on
//! overlapping blocks.
//!
//! For a string of length `n` and `n/2 <= len < n`, candidate starts are
//! `0..n - len`. They are covered by blocks `s[a..a + 2m]` whose own candidate
//! starts are `a..a + m`; each block is solved recursively for windows of
//! length `m`, yielding its leftmost and rightmost minimal indices `(x, y)`.
//! Among all `x` and `y` some index of a minimal length-`len` window survives
//! (exclusion rule), so a minimum search over the blocks followed by an
//! extremal-occurrence search of the winning window recovers the exact answer.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ledger::{robust_minfind, NoisyComparator, QueryLedger};
use crate::matching::{match_full, MatchResult};
use crate::scalar::Scalar;
use crate::strings::{min_substrings_brute, IndexSet};

/// Recursion parameters.
///
/// `d` sets the block factor `b(n) = 2^(d sqrt(log2 n))`; `c` is the constant
/// of the complexity recurrence the factor is tuned for (`d = 2 sqrt(log2 c)`)
/// and does not affect control flow. Problems of size at most `n0` are scanned
/// exhaustively. `comparator_success` below 1 injects comparator noise into
/// the block tournament.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FunctionParams<F> {
    pub c: F,
    pub d: F,
    pub n0: usize,
    pub comparator_success: F,
}

impl<F: Scalar> Default for FunctionParams<F> {
    fn default() -> Self {
        Self { c: F::two(), d: F::two(), n0: 64, comparator_success: F::one() }
    }
}

impl<F: Scalar> FunctionParams<F> {
    pub fn new(c: F, d: F, n0: usize) -> Result<Self> {
        let params = Self { c, d, n0, comparator_success: F::one() };
        params.validate()?;
        Ok(params)
    }

    /// Picks `d = 2 sqrt(log2 c)` for a recurrence constant `c > 1`.
    pub fn from_constant(c: F, n0: usize) -> Result<Self> {
        if !(c > F::one()) {
            return Err(Error::InvalidParameter("deriving d needs c > 1".into()));
        }
        Self::new(c, F::two() * c.log2().sqrt(), n0)
    }

    pub fn with_comparator_success(mut self, success: F) -> Result<Self> {
        self.comparator_success = success;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.c >= F::one() && self.c.is_finite()) {
            return Err(Error::InvalidParameter("c must be at least 1".into()));
        }
        if !(self.d > F::zero() && self.d.is_finite()) {
            return Err(Error::InvalidParameter("d must be positive".into()));
        }
        if self.n0 < 4 {
            return Err(Error::InvalidParameter("n0 must be at least 4".into()));
        }
        let p = self.comparator_success;
        if !(p >= F::of(2.0 / 3.0 - 1e-12) && p <= F::one()) {
            return Err(Error::InvalidParameter("comparator success probability must lie in [2/3, 1]".into()));
        }
        Ok(())
    }

    /// `b(n) = 2^(d sqrt(log2 n))`, rounded to the nearest integer, at least 2
    /// and at most `n`.
    pub fn block_factor(&self, n: usize) -> usize {
        let exponent = self.d * F::of_usize(n).log2().max(F::zero()).sqrt();
        let b = F::two().powf(exponent).round();
        let b = b.to_usize().unwrap_or(usize::MAX);
        b.clamp(2, n.max(2))
    }
}

/// Leftmost (`x`) and rightmost (`y`) minimal indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubproblemAnswer {
    pub x: usize,
    pub y: usize,
}

/// One internal node of the recursion: its string, window length and the
/// collected block extremes (indices into `text`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeTrace {
    pub text: Vec<u8>,
    pub len: usize,
    pub candidates: IndexSet,
}

struct Solver<'p, F> {
    params: &'p FunctionParams<F>,
    rng: ChaCha8Rng,
    trace: Option<Vec<NodeTrace>>,
}

struct Block {
    x: usize,
    y: usize,
    /// whichever of `x`, `y` starts the smaller length-`len` window (`x` on ties)
    best: usize,
}

impl<F: Scalar> Solver<'_, F> {
    fn solve(&mut self, s: &[u8], len: usize, ledger: &mut QueryLedger<F>) -> Result<SubproblemAnswer> {
        let n = s.len();
        let universe = n - len;
        if n <= self.params.n0 {
            ledger.charge_base(universe, len);
            let brute = min_substrings_brute(s, len)?;
            return Ok(SubproblemAnswer { x: brute.leftmost, y: brute.rightmost });
        }

        let m = len.div_ceil(self.params.block_factor(n)).min(universe);
        let count = universe.div_ceil(m);
        let window = |p: usize| &s[p..p + len];

        let mut blocks = Vec::with_capacity(count);
        let mut sub_cost = F::zero();
        for i in 0..count {
            // the last block is pulled left so that its candidates stay below `universe`
            let a = (i * m).min(universe - m);
            let mut sub_ledger = ledger.fresh();
            let ans = self.solve(&s[a..a + 2 * m], m, &mut sub_ledger)?;
            sub_cost = sub_cost.max(sub_ledger.total());
            let (x, y) = (a + ans.x, a + ans.y);
            let best = if window(y) < window(x) { y } else { x };
            blocks.push(Block { x, y, best });
        }
        if let Some(trace) = self.trace.as_mut() {
            trace.push(NodeTrace {
                text: s.to_vec(),
                len,
                candidates: IndexSet::from_unsorted(blocks.iter().flat_map(|b| [b.x, b.y]).collect()),
            });
        }

        // one comparator query solves two blocks and compares four windows
        let per_query = F::two() * sub_cost + ledger.model().grover_cost(len);
        let success = self.params.comparator_success.to_f64().unwrap_or(1.0);
        let mut cmp = NoisyComparator::new(
            |i: usize, j: usize| window(blocks[i].best) < window(blocks[j].best),
            success,
            self.rng.random(),
        )?;
        let winner = robust_minfind(0..count, &mut cmp, ledger, per_query)?;
        // choosing between x_k and y_k
        ledger.charge_grover(len);
        let z = blocks[winner].best;

        // occurrences restricted to candidate starts: drop the last symbol
        match match_full(&s[..n - 1], window(z), ledger)? {
            MatchResult::Found { leftmost, rightmost } => Ok(SubproblemAnswer { x: leftmost, y: rightmost }),
            MatchResult::NotFound => unreachable!("the winning window occurs at its own start"),
        }
    }
}

fn check_window_length(n: usize, len: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    if 2 * len < n || len > n {
        return Err(Error::InvalidLength(format!("window length {len} outside [n/2, n] for n = {n}")));
    }
    if len == n {
        return Err(Error::InvalidLength(format!("window length {len} leaves no candidate start in length {n}")));
    }
    Ok(())
}

/// Exact leftmost and rightmost minimal length-`len` windows among starts
/// `0..n - len`, for `n/2 <= len < n`.
pub fn min_len_substring_dnc<F: Scalar>(
    s: &[u8],
    len: usize,
    params: &FunctionParams<F>,
    ledger: &mut QueryLedger<F>,
    seed: u64,
) -> Result<SubproblemAnswer> {
    check_window_length(s.len(), len)?;
    params.validate()?;
    let mut solver = Solver { params, rng: ChaCha8Rng::seed_from_u64(seed), trace: None };
    solver.solve(s, len, ledger)
}

/// Runs the recursion noise-free and returns every internal node's candidate set.
pub fn trace_candidates<F: Scalar>(s: &[u8], len: usize, params: &FunctionParams<F>) -> Result<Vec<NodeTrace>> {
    check_window_length(s.len(), len)?;
    params.validate()?;
    let exact = FunctionParams { comparator_success: F::one(), ..*params };
    let mut solver = Solver { params: &exact, rng: ChaCha8Rng::seed_from_u64(0), trace: Some(Vec::new()) };
    solver.solve(s, len, &mut QueryLedger::new(crate::ledger::CostModel::none()))?;
    Ok(solver.trace.unwrap_or_default())
}

/// Smallest index of a minimal rotation: the leftmost minimal length-`n`
/// window of `s + s`.
pub fn lmsr_function<F: Scalar>(
    s: &[u8],
    params: &FunctionParams<F>,
    ledger: &mut QueryLedger<F>,
    seed: u64,
) -> Result<usize> {
    if s.is_empty() {
        return Err(Error::EmptyInput);
    }
    let doubled = [s, s].concat();
    Ok(min_len_substring_dnc(&doubled, s.len(), params, ledger, seed)?.x)
}

/// Brute-force `I` (minimal length-`len` starts of `s`) and `J` (minimal
/// length-`m` starts `a..a + m` within `s[a..a + 2m]`, as indices into `s`).
pub fn exclusion_sets(s: &[u8], len: usize, a: usize, m: usize) -> Result<(IndexSet, IndexSet)> {
    let n = s.len();
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    if 2 * len < n || len > n {
        return Err(Error::InvalidLength(format!("window length {len} outside [n/2, n] for n = {n}")));
    }
    if m == 0 || a + m > n - len {
        return Err(Error::InvalidParameter(format!("need m >= 1 and a + m <= n - len, got a = {a}, m = {m}")));
    }
    let big = min_substrings_brute(s, len)?.all;
    let block = min_substrings_brute(&s[a..a + 2 * m], m)?;
    let small = IndexSet::from_unsorted(block.all.as_slice().iter().map(|k| a + k).collect());
    Ok((big, small))
}

/// Whether `I ∩ {min J, max J} = ∅` implies `I ∩ J = ∅` on this instance.
pub fn exclusion_holds(s: &[u8], len: usize, a: usize, m: usize) -> Result<bool> {
    let (big, small) = exclusion_sets(s, len, a, m)?;
    let extremes = IndexSet::from_unsorted(small.min().into_iter().chain(small.max()).collect());
    Ok(big.intersects(&extremes) || !big.intersects(&small))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ledger::{Charge, CostModel};
    use crate::strings::{lmsr_booth, lmsr_brute};
    use proptest::prelude::*;

    fn solve(s: &[u8], len: usize, params: &FunctionParams<f64>) -> SubproblemAnswer {
        min_len_substring_dnc(s, len, params, &mut QueryLedger::new(CostModel::quantum()), 0).unwrap()
    }

    fn small() -> FunctionParams<f64> {
        FunctionParams::new(2.0, 2.0, 4).unwrap()
    }

    #[test]
    fn examples() {
        let params = FunctionParams::default();
        assert_eq!(solve(b"cabcab", 3, &params), SubproblemAnswer { x: 1, y: 1 });
        assert_eq!(solve(b"aaaa", 2, &params), SubproblemAnswer { x: 0, y: 1 });
        assert_eq!(solve(b"cabcab", 3, &small()), SubproblemAnswer { x: 1, y: 1 });
        assert_eq!(solve(b"aaaa", 2, &small()), SubproblemAnswer { x: 0, y: 1 });
    }

    #[test]
    fn rejects_lengths_outside_regime() {
        let mut l = QueryLedger::new(CostModel::<f64>::quantum());
        let p = FunctionParams::default();
        assert!(min_len_substring_dnc(b"abcdef", 2, &p, &mut l, 0).is_err());
        assert!(min_len_substring_dnc(b"abcdef", 6, &p, &mut l, 0).is_err());
        assert!(min_len_substring_dnc(b"", 0, &p, &mut l, 0).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(FunctionParams::new(0.5, 2.0, 64).is_err());
        assert!(FunctionParams::new(2.0, 0.0, 64).is_err());
        assert!(FunctionParams::new(2.0, 2.0, 3).is_err());
        assert!(FunctionParams::<f64>::default().with_comparator_success(0.5).is_err());
        let p = FunctionParams::<f64>::from_constant(2.0, 64).unwrap();
        assert!((p.d - 2.0).abs() < 1e-12);
        let p = FunctionParams::<f64>::default();
        assert_eq!(p.block_factor(4), 4);
        // 2^(2 sqrt 20) = 2^8.944 ~ 492.8
        assert_eq!(p.block_factor(1 << 20), 493);
        assert_eq!(FunctionParams::new(2.0, 0.01, 4).unwrap().block_factor(1000), 2);
    }

    #[test]
    fn lmsr_function_examples() {
        let p = FunctionParams::default();
        let mut l = QueryLedger::new(CostModel::<f64>::quantum());
        assert_eq!(lmsr_function(b"baca", &p, &mut l, 0).unwrap(), 3);
        assert_eq!(lmsr_function(b"aaaa", &p, &mut l, 0).unwrap(), 0);
        assert_eq!(lmsr_function(b"a", &p, &mut l, 0).unwrap(), 0);
        assert!(lmsr_function(b"", &p, &mut l, 0).is_err());
    }

    #[test]
    fn exhaustive_binary_with_deep_recursion() {
        let p = small();
        let mut l = QueryLedger::new(CostModel::<f64>::none());
        for n in 1..=12usize {
            for bits in 0u32..(1 << n) {
                let s: Vec<u8> = (0..n).map(|i| ((bits >> i) & 1) as u8).collect();
                assert_eq!(lmsr_function(&s, &p, &mut l, 0).unwrap(), lmsr_brute(&s).unwrap(), "{s:?}");
            }
        }
    }

    #[test]
    fn charges_land_in_expected_buckets() {
        let s: Vec<u8> = (0..500u32).map(|i| (i.wrapping_mul(2654435761) >> 13) as u8 % 4).collect();
        let mut l = QueryLedger::new(CostModel::<f64>::quantum());
        lmsr_function(&s, &FunctionParams::default(), &mut l, 0).unwrap();
        for c in [Charge::Grover, Charge::MinFind, Charge::DsBuild, Charge::DsMatch] {
            assert!(l.get(c) > 0.0, "{c:?}");
        }
        // sub-problem costs are folded into the minimum finding charge
        assert_eq!(l.get(Charge::Base), 0.0);
    }

    #[test]
    fn exclusion_examples() {
        let (i, j) = exclusion_sets(b"aaaaaaaa", 4, 0, 2).unwrap();
        assert!(i.intersects(&j));
        assert!(exclusion_holds(b"aaaaaaaa", 4, 0, 2).unwrap());
        assert!(exclusion_holds(b"abab", 2, 0, 1).is_ok());
        assert!(exclusion_holds(b"abab", 2, 2, 1).is_err());
        assert!(exclusion_holds(b"abab", 1, 0, 1).is_err());
    }

    #[test]
    fn generic_over_f32() {
        let p = FunctionParams::<f32>::default();
        let s = b"bbabaabbbaababbabababbbaaabbabbabbabbbbbbbabaababababaaabbbbbbbbababababaaaaa";
        let mut l = QueryLedger::new(CostModel::<f32>::quantum());
        assert_eq!(lmsr_function(s, &p, &mut l, 0).unwrap(), lmsr_booth(s));
        assert!(l.total() > 0.0);
    }

    fn instance() -> impl Strategy<Value = Vec<u8>> {
        (prop::sample::select(vec![2u8, 3, 26]), proptest::collection::vec(any::<u8>(), 1..400))
            .prop_map(|(k, raw)| raw.into_iter().map(|c| c % k).collect())
    }

    proptest! {
        #[test]
        fn matches_booth(s in instance(), n0 in 4usize..40, d in 0.5f64..3.0) {
            let p = FunctionParams::new(2.0, d, n0).unwrap();
            let mut l = QueryLedger::new(CostModel::<f64>::quantum());
            prop_assert_eq!(lmsr_function(&s, &p, &mut l, 0).unwrap(), lmsr_booth(&s));
        }

        #[test]
        fn window_problem_matches_brute(s in instance(), frac in 0.0f64..1.0, n0 in 4usize..20) {
            prop_assume!(s.len() >= 2);
            let n = s.len();
            let lo = n.div_ceil(2);
            let len = lo + ((frac * (n - lo) as f64) as usize).min(n - 1 - lo);
            let brute = min_substrings_brute(&s, len).unwrap();
            let got = solve(&s, len, &FunctionParams::new(2.0, 2.0, n0).unwrap());
            prop_assert_eq!((got.x, got.y), (brute.leftmost, brute.rightmost));
        }

        #[test]
        fn candidates_contain_parent_leftmost(s in instance(), n0 in 4usize..16) {
            prop_assume!(s.len() >= 2);
            let doubled = [&s[..], &s[..]].concat();
            let traces = trace_candidates(&doubled, s.len(), &FunctionParams::new(2.0, 2.0, n0).unwrap()).unwrap();
            for node in traces {
                let leftmost = min_substrings_brute(&node.text, node.len).unwrap().leftmost;
                prop_assert!(node.candidates.contains(leftmost));
            }
        }

        #[test]
        fn cost_model_does_not_change_answers(s in instance(), seed in any::<u64>()) {
            let p = FunctionParams::new(2.0, 2.0, 8).unwrap();
            let answers: Vec<usize> = [CostModel::<f64>::quantum(), CostModel::classical(), CostModel::none()]
                .into_iter()
                .map(|m| lmsr_function(&s, &p, &mut QueryLedger::new(m), seed).unwrap())
                .collect();
            prop_assert!(answers.windows(2).all(|w| w[0] == w[1]));
        }

        #[test]
        fn exclusion_rule_random(s in instance(), a in 0usize..100, m in 1usize..100, frac in 0.0f64..1.0) {
            prop_assume!(s.len() >= 2);
            let n = s.len();
            let lo = n.div_ceil(2);
            let len = lo + ((frac * (n - lo) as f64) as usize).min(n - 1 - lo);
            let room = n - len;
            let m = 1 + m % room;
            let a = a % (room - m + 1);
            prop_assert!(exclusion_holds(&s, len, a, m).unwrap());
        }
    }
}
