//! Leftmost and rightmost occurrences of a pattern, located with the help of
//! a deterministic sample of the pattern.
//!
//! Candidate starts are split into blocks of `m/2` consecutive positions. In
//! each block the text is read only at the sample's witness columns, which
//! prunes the candidates; survivors are then verified in full. Blocks are
//! visited left to right for the leftmost occurrence and right to left for the
//! rightmost one, stopping at the first verified survivor.

use crate::error::{Error, Result};
use crate::ledger::QueryLedger;
use crate::sample::{build_ds, verify_ds, DeterministicSample};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatchResult {
    NotFound,
    Found { leftmost: usize, rightmost: usize },
}

impl MatchResult {
    pub fn found(&self) -> bool {
        matches!(self, MatchResult::Found { .. })
    }

    pub fn leftmost(&self) -> Option<usize> {
        match *self {
            MatchResult::Found { leftmost, .. } => Some(leftmost),
            MatchResult::NotFound => None,
        }
    }

    pub fn rightmost(&self) -> Option<usize> {
        match *self {
            MatchResult::Found { rightmost, .. } => Some(rightmost),
            MatchResult::NotFound => None,
        }
    }

    /// Adds `offset` to both indices.
    pub fn shifted(self, offset: usize) -> Self {
        match self {
            MatchResult::Found { leftmost, rightmost } => {
                MatchResult::Found { leftmost: leftmost + offset, rightmost: rightmost + offset }
            }
            MatchResult::NotFound => MatchResult::NotFound,
        }
    }
}

/// Reference answer: tries every start position.
pub fn naive_extremes(text: &[u8], pattern: &[u8]) -> MatchResult {
    if pattern.is_empty() || pattern.len() > text.len() {
        return MatchResult::NotFound;
    }
    let mut hits = (0..=text.len() - pattern.len()).filter(|&r| &text[r..r + pattern.len()] == pattern);
    match hits.next() {
        None => MatchResult::NotFound,
        Some(first) => MatchResult::Found { leftmost: first, rightmost: hits.last().unwrap_or(first) },
    }
}

/// Finds the extremal occurrences of `pattern` in `text` given a sample of the
/// pattern. Charges `ds_match(n, m)`.
pub fn match_with_ds<F: Scalar>(
    text: &[u8],
    pattern: &[u8],
    ds: &DeterministicSample,
    ledger: &mut QueryLedger<F>,
) -> Result<MatchResult> {
    let (n, m) = (text.len(), pattern.len());
    if m == 0 {
        return Err(Error::InvalidLength("empty pattern".into()));
    }
    if m > n {
        return Ok(MatchResult::NotFound);
    }
    if m == 1 {
        return Ok(scan_single(text, pattern[0], ledger));
    }
    if !verify_ds(pattern, ds) {
        return Err(Error::InvalidSample);
    }
    ledger.charge_ds_match(n, m);
    Ok(SampleMatcher::new(text, pattern, ds).extremes())
}

/// Builds a sample for `pattern` (charging `ds_build`) and delegates to
/// [`match_with_ds`]. Single-symbol patterns are scanned directly.
pub fn match_full<F: Scalar>(text: &[u8], pattern: &[u8], ledger: &mut QueryLedger<F>) -> Result<MatchResult> {
    let (n, m) = (text.len(), pattern.len());
    if m == 0 {
        return Err(Error::InvalidLength("empty pattern".into()));
    }
    if m > n {
        return Ok(MatchResult::NotFound);
    }
    if m == 1 {
        return Ok(scan_single(text, pattern[0], ledger));
    }
    let ds = build_ds(pattern, ledger)?;
    match_with_ds(text, pattern, &ds, ledger)
}

fn scan_single<F: Scalar>(text: &[u8], symbol: u8, ledger: &mut QueryLedger<F>) -> MatchResult {
    ledger.charge_grover(text.len());
    match (text.iter().position(|&c| c == symbol), text.iter().rposition(|&c| c == symbol)) {
        (Some(leftmost), Some(rightmost)) => MatchResult::Found { leftmost, rightmost },
        _ => MatchResult::NotFound,
    }
}

struct SampleMatcher<'a> {
    text: &'a [u8],
    pattern: &'a [u8],
    ds: &'a DeterministicSample,
    /// `agree[r]`: length of the longest common prefix of `text[r..]` and `pattern`.
    agree: Vec<usize>,
    block: usize,
    last_start: usize,
}

impl<'a> SampleMatcher<'a> {
    fn new(text: &'a [u8], pattern: &'a [u8], ds: &'a DeterministicSample) -> Self {
        Self {
            text,
            pattern,
            ds,
            agree: prefix_agreement(pattern, text),
            block: pattern.len() / 2,
            last_start: text.len() - pattern.len(),
        }
    }

    fn extremes(&self) -> MatchResult {
        let blocks = self.last_start / self.block + 1;
        let leftmost = (0..blocks).find_map(|b| self.survivors(b).into_iter().find(|&r| self.verified(r)));
        let Some(leftmost) = leftmost else {
            return MatchResult::NotFound;
        };
        let rightmost = (0..blocks)
            .rev()
            .find_map(|b| self.survivors(b).into_iter().rev().find(|&r| self.verified(r)))
            .expect("a leftmost occurrence implies a rightmost one");
        MatchResult::Found { leftmost, rightmost }
    }

    /// Starts in block `b` that agree with the text at every witness column they cover.
    fn survivors(&self, b: usize) -> Vec<usize> {
        let anchor = b * self.block;
        let end = (anchor + self.block).min(self.last_start + 1);
        let m = self.pattern.len();
        (anchor..end)
            .filter(|&r| {
                let j = r - anchor;
                self.ds
                    .witnesses
                    .iter()
                    .all(|&i| !(i >= j && i - j < m) || self.text[anchor + i] == self.pattern[i - j])
            })
            .collect()
    }

    fn verified(&self, r: usize) -> bool {
        self.agree[r] == self.pattern.len()
    }
}

/// For every start in `text`, the length of its longest common prefix with
/// `pattern` (extended Z-algorithm).
fn prefix_agreement(pattern: &[u8], text: &[u8]) -> Vec<usize> {
    let m = pattern.len();
    let z = z_function(pattern);
    let mut ext = vec![0usize; text.len()];
    let (mut left, mut right) = (0usize, 0usize);
    for i in 0..text.len() {
        let mut k = 0;
        if i < right {
            k = z[i - left].min(right - i);
        }
        while k < m && i + k < text.len() && text[i + k] == pattern[k] {
            k += 1;
        }
        ext[i] = k;
        if i + k > right {
            left = i;
            right = i + k;
        }
    }
    ext
}

fn z_function(s: &[u8]) -> Vec<usize> {
    let n = s.len();
    let mut z = vec![0usize; n];
    if n == 0 {
        return z;
    }
    z[0] = n;
    let (mut left, mut right) = (0usize, 0usize);
    for i in 1..n {
        let mut k = 0;
        if i < right {
            k = z[i - left].min(right - i);
        }
        while i + k < n && s[i + k] == s[k] {
            k += 1;
        }
        z[i] = k;
        if i + k > right {
            left = i;
            right = i + k;
        }
    }
    z
}
