//! The two divide-and-conquer solvers.
//!
//! [`function`] finds the minimal rotation through the minimal length-`len`
//! substring problem on `s + s`, recursing on overlapping blocks and keeping
//! only the extreme minimal indices of each block. [`decision`] checks whether
//! a given rotation is minimal through a binary recursion whose combining step
//! is served by precomputed deterministic samples of the prefixes of the
//! candidate rotation.

pub mod decision;
pub mod function;
