use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The default penalty base `q = e²`.
pub const DEFAULT_Q: f64 = 7.38905609893065;

/// Numeric conventions shared by every criterion.
///
/// `0/0` is read as `0` and `0·log(a/0)` as `0` throughout; only `q` is
/// configurable. Overriding `q` is experimental: every threshold in the
/// selector and the oracle assumes `q = e²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Conventions {
    pub q: f64,
}

impl Default for Conventions {
    fn default() -> Self {
        Conventions { q: 2f64.exp() }
    }
}

impl Conventions {
    pub fn validate(&self) -> Result<()> {
        if !(self.q.is_finite() && self.q > 1.0) {
            return Err(Error::invalid("q", format!("must be finite and > 1, got {}", self.q)));
        }
        Ok(())
    }
}

/// `ℓ(k) = k·ln(q·n/k)` with `q = e²` and `ℓ(0) = 0`.
///
/// Strictly increasing on `0..=n`; `ℓ(n) = 2n`.
pub fn ell(k: usize, n: usize) -> Result<f64> {
    ell_with_q(k, n, Conventions::default().q)
}

/// [`ell`] with an explicit base `q`.
pub fn ell_with_q(k: usize, n: usize, q: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("ell requires n >= 1".into()));
    }
    if k > n {
        return Err(Error::Domain(format!("ell requires 0 <= k <= n, got k = {k}, n = {n}")));
    }
    Ok(ell_raw(k, n, q))
}

#[inline]
pub(crate) fn ell_raw(k: usize, n: usize, q: f64) -> f64 {
    if k == 0 {
        0.0
    } else {
        let k = k as f64;
        k * (q * n as f64 / k).ln()
    }
}
