//! String primitives over a byte alphabet, the linear-time baseline and the
//! brute-force oracles every divide-and-conquer result is checked against.
//!
//! Index universes follow the minimal length-`len` substring problem
//! literally: candidate starts are `0..n - len`, so the last full window at
//! `n - len` is *not* a candidate. Under the `s + s` reduction this is exactly
//! the set of rotation starts.

use std::cmp::Ordering;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest input the brute-force oracles accept.
pub const BRUTE_CAP: usize = 4096;

/// Default alphabet: all byte values, ordered numerically.
pub const BYTE_ALPHABET: usize = 256;

/// A non-empty string over a totally ordered alphabet of byte codes.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SigmaString(Vec<u8>);

impl SigmaString {
    pub fn new(symbols: impl Into<Vec<u8>>) -> Result<Self> {
        let symbols = symbols.into();
        if symbols.is_empty() {
            return Err(Error::EmptyInput);
        }
        Ok(Self(symbols))
    }

    /// Builds a string whose symbols must all be below `alphabet`.
    pub fn with_alphabet(symbols: impl Into<Vec<u8>>, alphabet: usize) -> Result<Self> {
        let s = Self::new(symbols)?;
        if let Some(&bad) = s.0.iter().find(|&&c| usize::from(c) >= alphabet) {
            return Err(Error::SymbolOutOfAlphabet { symbol: bad, alphabet });
        }
        Ok(s)
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<u8> {
        self.0
    }

    /// `self` followed by itself; rotations of `self` are its length-`n` windows.
    pub fn doubled(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(2 * self.0.len());
        out.extend_from_slice(&self.0);
        out.extend_from_slice(&self.0);
        out
    }
}

impl Deref for SigmaString {
    type Target = [u8];

    fn deref(&self) -> &[u8] {
        &self.0
    }
}

impl TryFrom<&str> for SigmaString {
    type Error = Error;

    fn try_from(value: &str) -> Result<Self> {
        Self::new(value.as_bytes())
    }
}

impl TryFrom<&[u8]> for SigmaString {
    type Error = Error;

    fn try_from(value: &[u8]) -> Result<Self> {
        Self::new(value)
    }
}

/// Strictly increasing set of indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    /// Collects indices, sorting and deduplicating them.
    pub fn from_unsorted(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        Self(indices)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn min(&self) -> Option<usize> {
        self.0.first().copied()
    }

    pub fn max(&self) -> Option<usize> {
        self.0.last().copied()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.0.binary_search(&index).is_ok()
    }

    pub fn intersects(&self, other: &IndexSet) -> bool {
        self.0.iter().any(|&i| other.contains(i))
    }

    /// Sets of size 0, 1 or 2 count as progressions.
    pub fn is_arithmetic_progression(&self) -> bool {
        match self.0.as_slice() {
            [] | [_] => true,
            [first, second, rest @ ..] => {
                let step = second - first;
                let mut prev = *second;
                rest.iter().all(|&x| {
                    let ok = x - prev == step;
                    prev = x;
                    ok
                })
            }
        }
    }
}

/// `s[i..] ++ s[..i]`.
pub fn rotation(s: &[u8], i: usize) -> Result<Vec<u8>> {
    if i >= s.len() {
        return Err(Error::IndexOutOfRange { index: i, len: s.len() });
    }
    let mut out = Vec::with_capacity(s.len());
    out.extend_from_slice(&s[i..]);
    out.extend_from_slice(&s[..i]);
    Ok(out)
}

/// Lexicographic order: a proper prefix sorts first, otherwise the first
/// mismatch decides.
pub fn lex_compare(a: &[u8], b: &[u8]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.cmp(y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    a.len().cmp(&b.len())
}

/// Length of the longest proper border of every prefix (KMP failure function).
pub(crate) fn failure_function(s: &[u8]) -> Vec<usize> {
    let mut fail = vec![0usize; s.len()];
    let mut k = 0;
    for i in 1..s.len() {
        while k > 0 && s[i] != s[k] {
            k = fail[k - 1];
        }
        if s[i] == s[k] {
            k += 1;
        }
        fail[i] = k;
    }
    fail
}

/// Smallest `d >= 1` with `s[i] == s[i + d]` for every `i < n - d`; `n` when
/// no shorter shift works. Returns 0 for the empty string.
pub fn period(s: &[u8]) -> usize {
    match failure_function(s).last() {
        Some(&border) => s.len() - border,
        None => 0,
    }
}

/// Booth's algorithm: the smallest index of a minimal rotation, in `O(n)`.
pub fn lmsr_booth(s: &[u8]) -> usize {
    let n = s.len();
    if n == 0 {
        return 0;
    }
    let at = |i: usize| s[i % n];
    // failure links of the current candidate, offset by one so that 0 means "none"
    let mut fail = vec![0usize; 2 * n];
    let mut k = 0usize;
    for j in 1..2 * n {
        let sj = at(j);
        let mut i = fail[j - k - 1];
        while i != 0 && sj != at(k + i) {
            if sj < at(k + i) {
                k = j - i;
            }
            i = fail[i - 1];
        }
        if sj != at(k + i) {
            // i == 0 here
            if sj < at(k) {
                k = j;
            }
            fail[j - k] = 0;
        } else {
            fail[j - k] = i + 1;
        }
    }
    k
}

/// Materializes all rotations and returns the smallest index of a minimal one.
pub fn lmsr_brute(s: &[u8]) -> Result<usize> {
    if s.is_empty() {
        return Err(Error::EmptyInput);
    }
    if s.len() > BRUTE_CAP {
        return Err(Error::TooLarge { len: s.len(), cap: BRUTE_CAP });
    }
    let rotations: Vec<Vec<u8>> = (0..s.len()).map(|i| rotation(s, i)).collect::<Result<_>>()?;
    let mut best = 0;
    for (i, r) in rotations.iter().enumerate().skip(1) {
        if lex_compare(r, &rotations[best]) == Ordering::Less {
            best = i;
        }
    }
    Ok(best)
}

/// Brute-force answer to the minimal length-`len` substring problem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinSubstrings {
    pub leftmost: usize,
    pub rightmost: usize,
    pub all: IndexSet,
}

/// Scans every candidate start in `0..n - len` and collects the minimal ones.
pub fn min_substrings_brute(s: &[u8], len: usize) -> Result<MinSubstrings> {
    let n = s.len();
    if len == 0 || len > n {
        return Err(Error::InvalidLength(format!("window length {len} not in 1..={n}")));
    }
    if n == len {
        return Err(Error::InvalidLength(format!(
            "window length {len} leaves an empty candidate range in a string of length {n}"
        )));
    }
    Ok(collect_minimal(s, len, n - len))
}

/// As [`min_substrings_brute`] but over every start `0..=n - len`, including
/// the window that ends at the last symbol.
pub fn min_substrings_inclusive(s: &[u8], len: usize) -> Result<MinSubstrings> {
    let n = s.len();
    if len == 0 || len > n {
        return Err(Error::InvalidLength(format!("window length {len} not in 1..={n}")));
    }
    Ok(collect_minimal(s, len, n - len + 1))
}

fn collect_minimal(s: &[u8], len: usize, starts: usize) -> MinSubstrings {
    let mut best: Vec<usize> = vec![0];
    for k in 1..starts {
        match lex_compare(&s[k..k + len], &s[best[0]..best[0] + len]) {
            Ordering::Less => {
                best.clear();
                best.push(k);
            }
            Ordering::Equal => best.push(k),
            Ordering::Greater => {}
        }
    }
    MinSubstrings {
        leftmost: best[0],
        rightmost: *best.last().expect("candidate range is non-empty"),
        all: IndexSet::from_unsorted(best),
    }
}
