//! Minimax lower bounds for support recovery in Hamming loss under
//! independent Gaussian noise.
//!
//! For `s < n`, `s' ∈ (0, s]` and signal magnitude `a`:
//!
//! ```text
//! r_H ≥ s'·Ψ₊(s, a) − 4s'·exp(−(s − s')² / (2s))
//! Ψ₊(s, a) = (n/s − 1)·Φ(−a/2σ − (σ/a)·ln(n/s − 1)) + Φ(−a/2σ + (σ/a)·ln(n/s − 1))
//! ```
//!
//! When `a² ≤ 2σ² ln(n/s − 1)` and `s ≥ 20`, taking `s' = s/2` gives
//! `r_H ≥ s(1/4 − 2e^{−s/8}) > 0.085·s`: not even consistency is possible.

use serde::Serialize;

use crate::error::{Error, Result};

/// Standard normal CDF via the complementary error function.
pub fn std_normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundQuery {
    pub n: usize,
    pub s: usize,
    pub s_prime: f64,
    pub a: f64,
    pub sigma: f64,
}

impl BoundQuery {
    pub fn new(n: usize, s: usize, s_prime: f64, a: f64, sigma: f64) -> Result<Self> {
        let q = BoundQuery { n, s, s_prime, a, sigma };
        q.validate()?;
        Ok(q)
    }

    /// Query with the default `s' = s/2`.
    pub fn with_half(n: usize, s: usize, a: f64, sigma: f64) -> Result<Self> {
        Self::new(n, s, s as f64 / 2.0, a, sigma)
    }

    pub fn validate(&self) -> Result<()> {
        if self.s == 0 || self.s >= self.n {
            return Err(Error::Domain(format!("need 1 <= s < n, got s = {}, n = {}", self.s, self.n)));
        }
        if !(self.s_prime > 0.0 && self.s_prime <= self.s as f64) {
            return Err(Error::invalid("s_prime", format!("need 0 < s' <= s, got {}", self.s_prime)));
        }
        if !(self.a.is_finite() && self.a > 0.0) {
            return Err(Error::invalid("a", format!("must be finite and > 0, got {}", self.a)));
        }
        if !(self.sigma.is_finite() && self.sigma > 0.0) {
            return Err(Error::invalid("sigma", format!("must be finite and > 0, got {}", self.sigma)));
        }
        Ok(())
    }

    fn ratio_minus_one(&self) -> f64 {
        self.n as f64 / self.s as f64 - 1.0
    }

    /// `a² ≤ 2σ² ln(n/s − 1)`.
    pub fn is_inconsistent_regime(&self) -> bool {
        self.a * self.a <= 2.0 * self.sigma * self.sigma * self.ratio_minus_one().ln()
    }
}

/// `Ψ₊(s, a)`.
pub fn psi_plus(q: &BoundQuery) -> Result<f64> {
    q.validate()?;
    let r = q.ratio_minus_one();
    let lr = r.ln();
    let half = q.a / (2.0 * q.sigma);
    let shift = q.sigma / q.a * lr;
    Ok(r * std_normal_cdf(-half - shift) + std_normal_cdf(-half + shift))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LowerBound {
    pub value: f64,
    /// The bound is `≤ 0` and says nothing.
    pub vacuous: bool,
}

/// `s'·Ψ₊(s, a) − 4s'·exp(−(s − s')²/(2s))`, returned unclamped.
pub fn hamming_lower_bound(q: &BoundQuery) -> Result<LowerBound> {
    let psi = psi_plus(q)?;
    let s = q.s as f64;
    let gap = s - q.s_prime;
    let value = q.s_prime * psi - 4.0 * q.s_prime * (-(gap * gap) / (2.0 * s)).exp();
    Ok(LowerBound { value, vacuous: value <= 0.0 })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// `a² ≤ 2σ² ln(n/s − 1)`.
    Inconsistent,
    LowerBounded,
    Vacuous,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::Inconsistent => "inconsistent",
            Regime::LowerBounded => "lower-bounded",
            Regime::Vacuous => "vacuous",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseRow {
    pub n: usize,
    pub s: usize,
    #[serde(rename = "A")]
    pub a_level: f64,
    pub a: f64,
    pub lower_bound: f64,
    pub regime: Regime,
}

impl PhaseRow {
    pub const CSV_HEADER: &'static str = "n,s,A,a,lower_bound,regime";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.n,
            self.s,
            self.a_level,
            self.a,
            self.lower_bound,
            self.regime.as_str()
        )
    }
}

/// Tabulates the bound over an `(n, s, A)` grid with `s' = s/2` and
/// `a = σ·sqrt(A·ln(en/s))`.
pub fn phase_table(n_list: &[usize], s_list: &[usize], a_list: &[f64], sigma: f64) -> Result<Vec<PhaseRow>> {
    if n_list.is_empty() || s_list.is_empty() || a_list.is_empty() {
        return Err(Error::Empty("phase_table needs nonempty n, s and A grids"));
    }
    let mut rows = Vec::with_capacity(n_list.len() * s_list.len() * a_list.len());
    for &n in n_list {
        for &s in s_list {
            for &level in a_list {
                if !(level.is_finite() && level > 0.0) {
                    return Err(Error::invalid("A", format!("must be finite and > 0, got {level}")));
                }
                let a = sigma * (level * (std::f64::consts::E * n as f64 / s as f64).ln()).sqrt();
                let q = BoundQuery::with_half(n, s, a, sigma)?;
                let bound = hamming_lower_bound(&q)?;
                let regime = if q.is_inconsistent_regime() {
                    Regime::Inconsistent
                } else if bound.vacuous {
                    Regime::Vacuous
                } else {
                    Regime::LowerBounded
                };
                rows.push(PhaseRow {
                    n,
                    s,
                    a_level: level,
                    a,
                    lower_bound: bound.value,
                    regime,
                });
            }
        }
    }
    Ok(rows)
}
