//! Divide-and-conquer solvers for the lexicographically minimal string
//! rotation (LMSR), executed classically while a [`QueryLedger`] records the
//! query cost an idealized quantum execution of the same recursion would pay.
//!
//! The crate is organized bottom-up:
//!
//! * [`strings`]: rotations, periods, Booth's algorithm and brute-force oracles.
//! * [`ledger`]: cost models, the query ledger and a bounded-error comparator.
//! * [`sample`]: deterministic samples (construction and verification).
//! * [`matching`]: leftmost/rightmost occurrence search driven by a sample.
//! * [`dnc`]: the function and decision solvers.
//! * [`recurrence`]: numeric iteration of the complexity recurrences and
//!   scaling-law fits.
//!
//! Numeric code is generic over [`Scalar`]; the aliases below fix it to `f64`.

pub mod dnc;
pub mod error;
pub mod ledger;
pub mod matching;
pub mod recurrence;
pub mod sample;
pub mod scalar;
pub mod strings;

pub use dnc::decision::{
    compute_g, decide_min_substrings, lmsr_decision, preprocess_ds_table, DsTable,
};
pub use dnc::function::{
    exclusion_holds, exclusion_sets, lmsr_function, min_len_substring_dnc, trace_candidates,
    FunctionParams, NodeTrace, SubproblemAnswer,
};
pub use error::{Error, Result};
pub use ledger::{robust_minfind, Charge, CostKind, CostModel, LedgerSnapshot, NoisyComparator, QueryLedger};
pub use matching::{match_full, match_with_ds, naive_extremes, MatchResult};
pub use recurrence::{
    fit_scaling, iterate_decision_recurrence, iterate_function_recurrence, master_solve,
    verify_limit, AsymptoticClass, DecisionKind, FitReport, FunctionRecurrence, RecurrenceSpec,
};
pub use sample::{build_ds, size_cap, surviving_offsets, verify_ds, DeterministicSample};
pub use scalar::Scalar;
pub use strings::{
    lex_compare, lmsr_booth, lmsr_brute, min_substrings_brute, min_substrings_inclusive, period, rotation, IndexSet,
    MinSubstrings, SigmaString,
};

/// Query ledger over `f64` charges.
pub type Ledger = QueryLedger<f64>;
/// Cost model over `f64` constants.
pub type Model = CostModel<f64>;
/// Function-solver parameters over `f64`.
pub type Params = FunctionParams<f64>;
/// Scaling fit over `f64`.
pub type Fit = FitReport<f64>;
