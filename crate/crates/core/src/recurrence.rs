//! Numeric iteration of the complexity recurrences and least-squares scaling
//! fits. All hidden constants are 1 and logarithms are base 2, clamped below
//! at 1.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Solution class of `T(n) = a T(n/b) + n^c log^p n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum AsymptoticClass {
    /// `n^exponent`
    Poly { exponent: f64 },
    /// `n^c log^p n`
    PolyLog { c: f64, p: f64 },
}

impl AsymptoticClass {
    /// The class's growth function at `n`.
    pub fn bound<F: Scalar>(&self, n: F) -> F {
        match *self {
            AsymptoticClass::Poly { exponent } => n.powf(F::of(exponent)),
            AsymptoticClass::PolyLog { c, p } => n.powf(F::of(c)) * n.log2_clamped().powf(F::of(p)),
        }
    }
}

fn fmt_number(x: f64) -> String {
    if (x - x.round()).abs() < 1e-9 {
        format!("{}", x.round() as i64)
    } else {
        format!("{x:.4}")
    }
}

impl fmt::Display for AsymptoticClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            AsymptoticClass::Poly { exponent } => write!(f, "O(n^{})", fmt_number(exponent)),
            AsymptoticClass::PolyLog { c, p } => write!(f, "O(n^{} log^{} n)", fmt_number(c), fmt_number(p)),
        }
    }
}

fn positive<F: Scalar>(name: &str, x: F) -> Result<()> {
    if x > F::zero() && x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be a positive finite number")))
    }
}

/// Master theorem for `T(n) = a T(n/b) + O(n^c log^p n)`.
pub fn master_solve<F: Scalar>(a: F, b: F, c: F, p: F) -> Result<AsymptoticClass> {
    positive("a", a)?;
    positive("b", b)?;
    positive("c", c)?;
    if !(p >= F::zero() && p.is_finite()) {
        return Err(Error::InvalidParameter("p must be non-negative".into()));
    }
    if b <= F::one() {
        return Err(Error::InvalidParameter("b must exceed 1".into()));
    }
    let critical = (a.ln() / b.ln()).to_f64().unwrap_or(f64::NAN);
    let (c, p) = (c.to_f64().unwrap_or(f64::NAN), p.to_f64().unwrap_or(f64::NAN));
    let class = if (critical - c).abs() < 1e-12 {
        AsymptoticClass::PolyLog { c, p: p + 1.0 }
    } else if critical > c {
        AsymptoticClass::Poly { exponent: critical }
    } else {
        AsymptoticClass::PolyLog { c, p }
    };
    Ok(class)
}

/// `T(n) = a T(n/b) + n^c log^p n` iterated over real `n`, with `T(n) = 1`
/// for `n <= b`.
pub fn iterate_master<F: Scalar>(a: F, b: F, c: F, p: F, n: F) -> F {
    let mut scale = F::one();
    let mut total = F::zero();
    let mut x = n;
    while x > b {
        total = total + scale * x.powf(c) * x.log2_clamped().powf(p);
        scale = scale * a;
        x = x / b;
    }
    total + scale
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecisionKind {
    /// `T(n) = 2 T(n/2) + n log^3 n loglog n`
    Plain,
    /// `T(n) = 2 T(n/2) + n log n`
    Preprocessed,
}

impl DecisionKind {
    /// Growth the iteration is expected to follow.
    pub fn expected<F: Scalar>(self, n: F) -> F {
        let l = n.log2_clamped();
        match self {
            DecisionKind::Plain => n * l.powi(4) * n.loglog2_clamped(),
            DecisionKind::Preprocessed => n * l * l,
        }
    }
}

/// One of the recurrences the lab can iterate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RecurrenceSpec<F> {
    Master { a: F, b: F, c: F, p: F },
    Function { c: F, d: F, n0: usize },
    DecisionPlain,
    DecisionPreprocessed,
}

impl<F: Scalar> RecurrenceSpec<F> {
    pub fn validate(&self) -> Result<()> {
        match *self {
            RecurrenceSpec::Master { a, b, c, p } => master_solve(a, b, c, p).map(|_| ()),
            RecurrenceSpec::Function { c, d, n0 } => FunctionRecurrence::new(c, d, n0).map(|_| ()),
            RecurrenceSpec::DecisionPlain | RecurrenceSpec::DecisionPreprocessed => Ok(()),
        }
    }

    /// Value at `n = 2^k`.
    pub fn iterate(&self, k: u32) -> Result<F> {
        self.validate()?;
        let n = F::two().powi(k as i32);
        Ok(match *self {
            RecurrenceSpec::Master { a, b, c, p } => iterate_master(a, b, c, p, n),
            RecurrenceSpec::Function { c, d, n0 } => iterate_function_recurrence(c, d, n0, k)?,
            RecurrenceSpec::DecisionPlain => iterate_decision_recurrence(DecisionKind::Plain, k),
            RecurrenceSpec::DecisionPreprocessed => iterate_decision_recurrence(DecisionKind::Preprocessed, k),
        })
    }

    /// Reference growth at `n = 2^k` for ratio columns.
    pub fn bound(&self, k: u32) -> Result<F> {
        let n = F::two().powi(k as i32);
        Ok(match *self {
            RecurrenceSpec::Master { a, b, c, p } => master_solve(a, b, c, p)?.bound(n),
            RecurrenceSpec::Function { d, .. } => n.sqrt() * F::two().powf(F::two() * d * F::of(f64::from(k)).sqrt()),
            RecurrenceSpec::DecisionPlain => DecisionKind::Plain.expected(n),
            RecurrenceSpec::DecisionPreprocessed => DecisionKind::Preprocessed.expected(n),
        })
    }
}

/// `T(x) = c (sqrt(b) T(x/b) + sqrt(b x) + sqrt(x log^3 x loglog x))` with
/// real `b(x) = max(2^(d sqrt(log2 x)), 2)` and `T(x) = n0` for `x <= n0`.
#[derive(Clone, Debug)]
pub struct FunctionRecurrence<F> {
    c: F,
    d: F,
    n0: usize,
    memo: HashMap<u64, F>,
}

impl<F: Scalar> FunctionRecurrence<F> {
    pub fn new(c: F, d: F, n0: usize) -> Result<Self> {
        if !(c > F::one() && c.is_finite()) {
            return Err(Error::InvalidParameter("c must exceed 1".into()));
        }
        positive("d", d)?;
        if n0 < 1 {
            return Err(Error::InvalidParameter("n0 must be positive".into()));
        }
        Ok(Self { c, d, n0, memo: HashMap::new() })
    }

    pub fn block_factor(&self, x: F) -> F {
        block_factor(self.d, x)
    }

    pub fn eval(&mut self, x: F) -> F {
        let n0 = F::of_usize(self.n0);
        if x <= n0 {
            return n0;
        }
        let key = x.to_f64().unwrap_or(f64::NAN).to_bits();
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let b = self.block_factor(x);
        let work = x * x.log2_clamped().powi(3) * x.loglog2_clamped();
        let value = self.c * (b.sqrt() * self.eval(x / b) + (b * x).sqrt() + work.sqrt());
        self.memo.insert(key, value);
        value
    }
}

fn block_factor<F: Scalar>(d: F, x: F) -> F {
    F::two().powf(d * x.log2().max(F::zero()).sqrt()).max(F::two())
}

/// Function recurrence at `n = 2^k`.
pub fn iterate_function_recurrence<F: Scalar>(c: F, d: F, n0: usize, k: u32) -> Result<F> {
    if k > 48 {
        return Err(Error::TooLarge { len: k as usize, cap: 48 });
    }
    Ok(FunctionRecurrence::new(c, d, n0)?.eval(F::two().powi(k as i32)))
}

/// Decision recurrences at `n = 2^k`, with `T(n) = n` for `n <= 2`.
pub fn iterate_decision_recurrence<F: Scalar>(kind: DecisionKind, k: u32) -> F {
    let mut n = F::two();
    let mut value = F::two();
    for _ in 1..k {
        n = n * F::two();
        let l = n.log2_clamped();
        let work = match kind {
            DecisionKind::Plain => n * l.powi(3) * n.loglog2_clamped(),
            DecisionKind::Preprocessed => n * l,
        };
        value = F::two() * value + work;
    }
    if k == 0 {
        F::one()
    } else {
        value
    }
}

/// `r(n) = (b(n/b(n)) + 2 sqrt(b(n))) / b(n)` at each grid point; tends to
/// `2^(-d^2/2)`.
pub fn verify_limit<F: Scalar>(c: F, d: F, grid: &[F]) -> Result<Vec<F>> {
    if !(c > F::one() && c.is_finite()) {
        return Err(Error::InvalidParameter("c must exceed 1".into()));
    }
    positive("d", d)?;
    if grid.is_empty() {
        return Err(Error::InvalidParameter("empty grid".into()));
    }
    if grid.windows(2).any(|w| !(w[0] < w[1])) || !(grid[0] > F::one()) {
        return Err(Error::InvalidParameter("grid must be increasing and above 1".into()));
    }
    Ok(grid
        .iter()
        .map(|&n| {
            let b = block_factor(d, n);
            (block_factor(d, n / b) + F::two() * b.sqrt()) / b
        })
        .collect())
}

/// `2^(-d^2/2)`.
pub fn limit_value<F: Scalar>(d: F) -> F {
    F::two().powf(-(d * d) / F::two())
}

/// First grid point from which every ratio stays below `1/c`.
pub fn limit_threshold<F: Scalar>(c: F, grid: &[F], ratios: &[F]) -> Option<F> {
    let bound = c.recip();
    let tail = ratios.iter().rev().take_while(|&&r| r < bound).count();
    (tail > 0).then(|| grid[grid.len() - tail])
}

/// Least-squares line through `(sqrt(log2 n), log2(Q / sqrt n))`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitReport<F> {
    pub slope: F,
    pub intercept: F,
    pub r_squared: F,
    pub residual_max: F,
}

pub fn fit_scaling<F: Scalar>(samples: &[(F, F)]) -> Result<FitReport<F>> {
    if samples.len() < 5 {
        return Err(Error::InvalidParameter(format!("fit needs at least 5 samples, got {}", samples.len())));
    }
    if samples.windows(2).any(|w| !(w[0].0 < w[1].0)) {
        return Err(Error::InvalidParameter("sample sizes must be strictly increasing".into()));
    }
    if samples.iter().any(|&(n, q)| !(n > F::one() && q > F::zero() && q.is_finite())) {
        return Err(Error::InvalidParameter("fit needs n > 1 and positive finite Q".into()));
    }
    let points: Vec<(F, F)> = samples.iter().map(|&(n, q)| (n.log2().sqrt(), (q / n.sqrt()).log2())).collect();
    let count = F::of_usize(points.len());
    let mean_x = points.iter().fold(F::zero(), |a, p| a + p.0) / count;
    let mean_y = points.iter().fold(F::zero(), |a, p| a + p.1) / count;
    let sxx = points.iter().fold(F::zero(), |a, p| a + (p.0 - mean_x).powi(2));
    let sxy = points.iter().fold(F::zero(), |a, p| a + (p.0 - mean_x) * (p.1 - mean_y));
    let syy = points.iter().fold(F::zero(), |a, p| a + (p.1 - mean_y).powi(2));
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let residuals = points.iter().map(|p| p.1 - (intercept + slope * p.0));
    let (ss_res, residual_max) =
        residuals.fold((F::zero(), F::zero()), |(ss, mx), r| (ss + r * r, mx.max(r.abs())));
    let scale = F::one().max(mean_y.abs());
    let r_squared = if syy <= F::of(1e-24) * scale * scale {
        F::one()
    } else {
        (F::one() - ss_res / syy).max(F::zero()).min(F::one())
    };
    Ok(FitReport { slope, intercept, r_squared, residual_max })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spread(values: &[f64]) -> f64 {
        let max = values.iter().cloned().fold(f64::MIN, f64::max);
        let min = values.iter().cloned().fold(f64::MAX, f64::min);
        max / min
    }

    #[test]
    fn master_examples() {
        assert_eq!(master_solve(2.0, 2.0, 1.0, 1.0).unwrap(), AsymptoticClass::PolyLog { c: 1.0, p: 2.0 });
        assert_eq!(master_solve(4.0, 2.0, 1.0, 0.0).unwrap(), AsymptoticClass::Poly { exponent: 2.0 });
        assert_eq!(master_solve(1.0, 2.0, 1.0, 0.0).unwrap(), AsymptoticClass::PolyLog { c: 1.0, p: 0.0 });
        assert_eq!(master_solve(2.0, 2.0, 1.0, 1.0).unwrap().to_string(), "O(n^1 log^2 n)");
        assert_eq!(master_solve(4.0, 2.0, 1.0, 0.0).unwrap().to_string(), "O(n^2)");
        assert!(master_solve(0.0, 2.0, 1.0, 0.0).is_err());
        assert!(master_solve(1.0, 2.0, 1.0, -1.0).is_err());
    }

    #[test]
    fn master_agrees_with_iteration() {
        for (a, b, c, p) in [(2.0, 2.0, 1.0, 1.0), (4.0, 2.0, 1.0, 0.0), (1.0, 2.0, 1.0, 0.0)] {
            let class = master_solve(a, b, c, p).unwrap();
            let ratios: Vec<f64> = (10..=30)
                .map(|k| {
                    let n = 2f64.powi(k);
                    iterate_master(a, b, c, p, n) / class.bound(n)
                })
                .collect();
            assert!(spread(&ratios) <= 3.0, "{a} {b} {c} {p}: {ratios:?}");
        }
        // a wrong class drifts
        let wrong = AsymptoticClass::PolyLog { c: 1.0, p: 1.0 };
        let ratios: Vec<f64> = (10..=30).map(|k| iterate_master(2.0, 2.0, 1.0, 1.0, 2f64.powi(k)) / wrong.bound(2f64.powi(k))).collect();
        assert!(spread(&ratios) > 2.5);
    }

    #[test]
    fn function_recurrence_base_and_one_step() {
        assert_eq!(iterate_function_recurrence(2.0, 2.0, 64, 6).unwrap(), 64.0);
        let n = 128.0f64;
        let b = 2f64.powf(2.0 * 7f64.sqrt());
        assert!(n / b <= 64.0);
        let expected = 2.0 * (b.sqrt() * 64.0 + (b * n).sqrt() + (n * 343.0 * 7f64.log2()).sqrt());
        let got = iterate_function_recurrence(2.0, 2.0, 64, 7).unwrap();
        assert!((got - expected).abs() < 1e-9 * expected);
    }

    #[test]
    fn function_recurrence_envelope() {
        for k in 10..=40u32 {
            let t = iterate_function_recurrence(2.0, 2.0, 64, k).unwrap();
            let bound = 2f64.powf(4.0 * f64::from(k).sqrt());
            assert!(t / 2f64.powi(k as i32).sqrt() <= bound, "k = {k}");
        }
        assert!(iterate_function_recurrence(2.0, 2.0, 64, 49).is_err());
        assert!(iterate_function_recurrence(1.0, 2.0, 64, 10).is_err());
    }

    #[test]
    fn function_recurrence_is_monotone() {
        let mut prev = 0.0;
        for k in 1..=48 {
            let t = iterate_function_recurrence(2.0, 2.0, 64, k).unwrap();
            assert!(t >= prev);
            prev = t;
        }
        for k in [10, 20, 30, 40] {
            let lo = iterate_function_recurrence(1.5, 2.0, 64, k).unwrap();
            let mid = iterate_function_recurrence(2.0, 2.0, 64, k).unwrap();
            let hi = iterate_function_recurrence(3.0, 2.0, 64, k).unwrap();
            assert!(lo <= mid && mid <= hi);
        }
    }

    #[test]
    fn decision_recurrences_track_their_bounds() {
        assert_eq!(iterate_decision_recurrence::<f64>(DecisionKind::Plain, 1), 2.0);
        assert_eq!(iterate_decision_recurrence::<f64>(DecisionKind::Preprocessed, 1), 2.0);
        for kind in [DecisionKind::Plain, DecisionKind::Preprocessed] {
            let ratios: Vec<f64> = (10..=40)
                .map(|k| iterate_decision_recurrence::<f64>(kind, k) / kind.expected(2f64.powi(k as i32)))
                .collect();
            assert!(spread(&ratios) <= 3.0, "{kind:?}: {ratios:?}");
        }
    }

    #[test]
    fn limit_examples() {
        let grid: Vec<f64> = (20..=40).map(|k| 2f64.powi(k)).collect();
        let ratios = verify_limit(2.0, 2.0, &grid).unwrap();
        let last = *ratios.last().unwrap();
        assert!((last - 0.25).abs() <= 0.2 * 0.25, "{last}");
        assert!(ratios.iter().all(|&r| r < 0.5));
        assert!(ratios.windows(2).all(|w| w[1] < w[0]));
        // r dips below the limit near 2^35 and approaches it from underneath
        assert!(ratios[..15].windows(2).all(|w| (w[1] - 0.25).abs() <= (w[0] - 0.25).abs()));
        assert!(ratios[20] < 0.25);
        assert_eq!(limit_threshold(2.0, &grid, &ratios), Some(grid[0]));
        assert_eq!(limit_value(2.0), 0.25);
        assert!(verify_limit(2.0, 2.0, &[8.0, 4.0]).is_err());
        assert!(verify_limit(1.0, 2.0, &grid).is_err());
    }

    #[test]
    fn fit_recovers_synthetic_models() {
        let samples: Vec<(f64, f64)> =
            (10..=20).map(|k| (2f64.powi(k), 2f64.powf(f64::from(k) / 2.0 + 3.0 * f64::from(k).sqrt()))).collect();
        let fit = fit_scaling(&samples).unwrap();
        assert!((fit.slope - 3.0).abs() <= 0.01);
        assert!(fit.r_squared >= 0.999);

        let flat: Vec<(f64, f64)> = (10..=20).map(|k| (2f64.powi(k), 2f64.powf(f64::from(k) / 2.0))).collect();
        let fit = fit_scaling(&flat).unwrap();
        assert!(fit.slope.abs() <= 0.01);

        assert!(fit_scaling(&flat[..4]).is_err());
        let mut unordered = flat.clone();
        unordered.swap(0, 1);
        assert!(fit_scaling(&unordered).is_err());
    }

    #[test]
    fn spec_dispatch() {
        let spec = RecurrenceSpec::<f64>::Function { c: 2.0, d: 2.0, n0: 64 };
        assert_eq!(spec.iterate(6).unwrap(), 64.0);
        assert!(RecurrenceSpec::<f64>::Function { c: 1.0, d: 2.0, n0: 64 }.validate().is_err());
        let spec = RecurrenceSpec::Master { a: 2.0f64, b: 2.0, c: 1.0, p: 0.0 };
        let r = spec.iterate(20).unwrap() / spec.bound(20).unwrap();
        assert!(r > 0.5 && r < 2.0);
        assert!(RecurrenceSpec::<f32>::DecisionPreprocessed.iterate(10).unwrap() > 0.0);
    }
}
