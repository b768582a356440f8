//! Sort-and-sweep kernel shared by the preselector and the active-set oracle.
//!
//! Both criteria have the form `Σ_{i∉I} v_i + w·ℓ(|I|)` with `v_i ≥ 0`. For a
//! fixed cardinality `k` the complement sum is minimized by keeping the `k`
//! largest `v_i`, so the search over `2ⁿ` subsets collapses to `n + 1`
//! candidates read off one descending sort.

use crate::primitives::SelectionMask;
use crate::primitives::ell_with_q;

pub(crate) struct SortedSweep {
    n: usize,
    /// Positions (0-based) sorted by value descending, smaller position first on ties.
    order: Vec<usize>,
    /// `tail[k]` = sum of `v` over `order[k..]`; `tail.len() == n + 1`.
    tail: Vec<f64>,
}

impl SortedSweep {
    pub(crate) fn new(values: &[f64]) -> Self {
        let n = values.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));

        // Accumulate from the smallest value upward with Neumaier compensation.
        let mut tail = vec![0.0; n + 1];
        let (mut sum, mut comp) = (0.0f64, 0.0f64);
        for k in (0..n).rev() {
            let v = values[order[k]];
            let t = sum + v;
            if sum.abs() >= v.abs() {
                comp += (sum - t) + v;
            } else {
                comp += (v - t) + sum;
            }
            sum = t;
            tail[k] = sum + comp;
        }
        SortedSweep { n, order, tail }
    }

    pub(crate) fn n(&self) -> usize {
        self.n
    }

    /// Complement sum when the top `k` are kept.
    pub(crate) fn tail(&self, k: usize) -> f64 {
        self.tail[k]
    }

    /// `ℓ(k)` for `k = 0..=n`.
    pub(crate) fn ells(&self, q: f64) -> Vec<f64> {
        (0..=self.n).map(|k| ell_with_q(k, self.n, q).expect("k <= n")).collect()
    }

    /// Criterion value for each cardinality.
    pub(crate) fn criteria(&self, weight: f64, q: f64) -> Vec<f64> {
        self.ells(q)
            .iter()
            .enumerate()
            .map(|(k, l)| self.tail[k] + weight * l)
            .collect()
    }

    /// The candidate set of cardinality `k`.
    pub(crate) fn top(&self, k: usize) -> SelectionMask {
        let mut pos = self.order[..k].to_vec();
        pos.sort_unstable();
        SelectionMask::from_sorted_zero_based(self.n, pos)
    }

    /// `Σ i` (1-based) over each candidate set, `k = 0..=n`.
    pub(crate) fn index_sums(&self) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.n + 1);
        let mut acc = 0u64;
        out.push(0);
        for &p in &self.order {
            acc += p as u64 + 1;
            out.push(acc);
        }
        out
    }
}
