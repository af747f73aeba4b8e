//! Indel edit distance, longest common subsequence and candidate similarity.
//!
//! With insertions and deletions as the only edit operations the two
//! quantities are tied by `2 * lcs(a, b) + ed(a, b) == |a| + |b|`. Both are
//! computed here by independent dynamic programs so the identity can be
//! checked rather than assumed.
//!
//! The similarity of a candidate `c` against a target `t` is
//! `lcs(c, t) / |c|`. It is asymmetric: it measures how much of the candidate
//! survives in the target.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;
use unicode_normalization::UnicodeNormalization;

/// Longest input, in characters, accepted by the dynamic programs.
pub const MAX_LEN: usize = 1024;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("input of {len} characters exceeds the {max} character limit", max = MAX_LEN)]
    TooLong { len: usize },
    #[error("similarity is undefined for an empty candidate")]
    EmptyCandidate,
}

/// A similarity value in `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Default)]
pub struct SimScore(f64);

impl SimScore {
    pub const ZERO: SimScore = SimScore(0.0);
    pub const ONE: SimScore = SimScore(1.0);

    /// Clamps into `[0, 1]`; NaN becomes 0.
    pub fn new(value: f64) -> Self {
        if value.is_nan() {
            SimScore(0.0)
        } else {
            SimScore(value.clamp(0.0, 1.0))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl fmt::Display for SimScore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

fn check_len(s: &[char]) -> Result<(), SimError> {
    if s.len() > MAX_LEN {
        Err(SimError::TooLong { len: s.len() })
    } else {
        Ok(())
    }
}

/// Orders the pair so the second slice is the shorter one; the DP row is
/// sized by it.
fn by_length<'a>(a: &'a [char], b: &'a [char]) -> (&'a [char], &'a [char]) {
    if a.len() >= b.len() {
        (a, b)
    } else {
        (b, a)
    }
}

/// Length of the longest common subsequence of `a` and `b`.
pub fn lcs_length(a: &[char], b: &[char]) -> Result<usize, SimError> {
    check_len(a)?;
    check_len(b)?;
    let (long, short) = by_length(a, b);
    // row[j] = lcs(long[..i], short[..j])
    let mut row = vec![0usize; short.len() + 1];
    for &lc in long {
        let mut diag = 0;
        for (j, &sc) in short.iter().enumerate() {
            let up = row[j + 1];
            row[j + 1] = if lc == sc {
                diag + 1
            } else {
                up.max(row[j])
            };
            diag = up;
        }
    }
    Ok(row[short.len()])
}

/// Minimal number of single-character insertions and deletions turning `a`
/// into `b`.
pub fn edit_distance_indel(a: &[char], b: &[char]) -> Result<usize, SimError> {
    check_len(a)?;
    check_len(b)?;
    let (long, short) = by_length(a, b);
    // row[j] = ed(long[..i], short[..j])
    let mut row: Vec<usize> = (0..=short.len()).collect();
    for (i, &lc) in long.iter().enumerate() {
        let mut diag = row[0];
        row[0] = i + 1;
        for (j, &sc) in short.iter().enumerate() {
            let up = row[j + 1];
            row[j + 1] = if lc == sc {
                diag
            } else {
                1 + up.min(row[j])
            };
            diag = up;
        }
    }
    Ok(row[short.len()])
}

/// NFC-normalizes and lowercases `s` into a character sequence.
pub fn normalize(s: &str) -> Vec<char> {
    s.nfc().flat_map(char::to_lowercase).collect()
}

/// `lcs(candidate, target) / |candidate|` on raw character sequences.
pub fn similarity_chars(candidate: &[char], target: &[char]) -> Result<SimScore, SimError> {
    if candidate.is_empty() {
        return Err(SimError::EmptyCandidate);
    }
    let lcs = lcs_length(candidate, target)?;
    Ok(SimScore::new(lcs as f64 / candidate.len() as f64))
}

/// Similarity of a translation candidate against a target string, after
/// [`normalize`] on both.
pub fn similarity(candidate: &str, target: &str) -> Result<SimScore, SimError> {
    similarity_chars(&normalize(candidate), &normalize(target))
}
