use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A subset `I ⊆ [n] = {1, …, n}`.
///
/// Indices are 1-based, unique and ascending. The binary form `η_I` has a
/// one exactly at the listed positions. Serializes as the sorted 1-based
/// index array.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SelectionMask {
    indices: Vec<usize>,
    n: usize,
}

impl SelectionMask {
    /// The empty set in dimension `n`.
    pub fn empty(n: usize) -> Self {
        SelectionMask { indices: Vec::new(), n }
    }

    /// The full set `[n]`.
    pub fn full(n: usize) -> Self {
        SelectionMask { indices: (1..=n).collect(), n }
    }

    /// Builds a mask from 1-based indices in any order. Duplicates and
    /// out-of-range values are rejected.
    pub fn from_indices(n: usize, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("n", "mask dimension must be >= 1"));
        }
        let mut indices: Vec<usize> = indices.into_iter().collect();
        indices.sort_unstable();
        for w in indices.windows(2) {
            if w[0] == w[1] {
                return Err(Error::Domain(format!("duplicate index {}", w[0])));
            }
        }
        if let Some(&bad) = indices.iter().find(|&&i| i == 0 || i > n) {
            return Err(Error::Domain(format!("index {bad} outside [1, {n}]")));
        }
        Ok(SelectionMask { indices, n })
    }

    /// Builds a mask from 0-based positions that are already strictly
    /// ascending and `< n`. Used by the kernels; unchecked in release builds.
    pub(crate) fn from_sorted_zero_based(n: usize, positions: impl IntoIterator<Item = usize>) -> Self {
        let indices: Vec<usize> = positions.into_iter().map(|p| p + 1).collect();
        debug_assert!(indices.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(indices.last().is_none_or(|&i| i <= n));
        SelectionMask { indices, n }
    }

    /// Builds a mask from a binary vector `η`.
    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        let positions = bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i);
        if bits.is_empty() {
            return Err(Error::invalid("n", "mask dimension must be >= 1"));
        }
        Ok(Self::from_sorted_zero_based(bits.len(), positions))
    }

    /// Parses the `0/1` string form.
    pub fn from_bit_string(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Domain(format!("invalid bit character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_bits(&bits)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Sorted 1-based indices.
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Membership test for a 1-based index.
    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    /// Binary representation `η_I`.
    pub fn to_bits(&self) -> Vec<bool> {
        let mut bits = vec![false; self.n];
        for &i in &self.indices {
            bits[i - 1] = true;
        }
        bits
    }

    /// The `0/1` string used in CSV columns.
    pub fn to_bit_string(&self) -> String {
        self.to_bits().into_iter().map(|b| if b { '1' } else { '0' }).collect()
    }

    pub fn is_subset(&self, other: &SelectionMask) -> bool {
        self.indices.iter().all(|&i| other.contains(i))
    }

    /// `|self \ other|`.
    pub fn difference_len(&self, other: &SelectionMask) -> Result<usize> {
        check_same_n(self, other)?;
        let (only_self, _) = merge_counts(&self.indices, &other.indices);
        Ok(only_self)
    }

    /// Applies a permutation of coordinates: index `i` maps to `perm[i-1] + 1`
    /// where `perm` is a 0-based permutation of `0..n`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::Dimension { expected: self.n, got: perm.len() });
        }
        Self::from_indices(self.n, self.indices.iter().map(|&i| perm[i - 1] + 1))
    }
}

impl fmt::Display for SelectionMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.indices.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for SelectionMask {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.indices.serialize(serializer)
    }
}

fn check_same_n(a: &SelectionMask, b: &SelectionMask) -> Result<()> {
    if a.n != b.n {
        return Err(Error::Dimension { expected: a.n, got: b.n });
    }
    Ok(())
}

/// Counts `(|a \ b|, |b \ a|)` for two sorted index lists.
fn merge_counts(a: &[usize], b: &[usize]) -> (usize, usize) {
    let (mut i, mut j) = (0, 0);
    let (mut only_a, mut only_b) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => {
                only_a += 1;
                i += 1;
            }
            Ordering::Greater => {
                only_b += 1;
                j += 1;
            }
            Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    (only_a + (a.len() - i), only_b + (b.len() - j))
}

/// Hamming distance `|η_a − η_b| = |a \ b| + |b \ a|`.
pub fn hamming(a: &SelectionMask, b: &SelectionMask) -> Result<usize> {
    check_same_n(a, b)?;
    let (x, y) = merge_counts(&a.indices, &b.indices);
    Ok(x + y)
}

/// `[n] \ a`.
pub fn mask_complement(a: &SelectionMask) -> SelectionMask {
    let mut out = Vec::with_capacity(a.n - a.len());
    let mut it = a.indices.iter().peekable();
    for i in 1..=a.n {
        if it.peek() == Some(&&i) {
            it.next();
        } else {
            out.push(i);
        }
    }
    SelectionMask { indices: out, n: a.n }
}
