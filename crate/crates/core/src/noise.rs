//! Noise generators for the robust observation model and an empirical check
//! of the exponential subset-sum tail condition.
//!
//! Every implemented law satisfies the tail condition
//! `P(Σ_{i∈I} ξ_i² ≥ p₀(I) + M) ≤ H e^{−αM}` with `p₀(I) ≤ C|I|`:
//!
//! * `iid-gaussian`: chi-square tails, any `C > 1`.
//! * `ar1`: stationary Gaussian AR(1), `C` growing with `(1+|ρ|)/(1−|ρ|)`.
//! * `bounded-uniform(b)`: `p₀(I) = b²|I|`, survival vanishes for every `α`.
//! * `rademacher`: `ξ_i² = 1`, so `p₀(I) = |I|`.
//! * `mean-of-m`: inherits the inner law with variance scaled by `1/m`.
//!
//! These constants are documentation only; nothing consumes them at runtime.

use rand::seq::index;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "kebab-case")]
pub enum NoiseModel {
    IidGaussian,
    /// `ξ_i = ρ ξ_{i−1} + sqrt(1−ρ²) z_i`, started from the stationary law.
    Ar1 { rho: f64 },
    /// Independent `Uniform[−b, b]`.
    BoundedUniform { b: f64 },
    Rademacher,
    /// Average of `m` independent draws of `inner`.
    MeanOfM { inner: Box<NoiseModel>, m: usize },
    /// Identically zero. Only useful as a deterministic stub.
    Zero,
}

impl NoiseModel {
    pub fn validate(&self) -> Result<()> {
        match self {
            NoiseModel::Ar1 { rho } if !(rho.is_finite() && rho.abs() < 1.0) => {
                Err(Error::invalid("rho", format!("need |rho| < 1, got {rho}")))
            }
            NoiseModel::BoundedUniform { b } if !(b.is_finite() && *b > 0.0) => {
                Err(Error::invalid("b", format!("must be finite and > 0, got {b}")))
            }
            NoiseModel::MeanOfM { m, .. } if *m == 0 => Err(Error::invalid("m", "must be >= 1")),
            NoiseModel::MeanOfM { inner, .. } => inner.validate(),
            _ => Ok(()),
        }
    }

    /// Marginal variance of one coordinate.
    pub fn marginal_variance(&self) -> f64 {
        match self {
            NoiseModel::IidGaussian | NoiseModel::Ar1 { .. } | NoiseModel::Rademacher => 1.0,
            NoiseModel::BoundedUniform { b } => b * b / 3.0,
            NoiseModel::MeanOfM { inner, m } => inner.marginal_variance() / *m as f64,
            NoiseModel::Zero => 0.0,
        }
    }
}

/// Draws one noise vector of length `n`. Deterministic given the stream.
pub fn sample_noise<R: Rng + ?Sized>(model: &NoiseModel, n: usize, rng: &mut R) -> Result<Vec<f64>> {
    model.validate()?;
    Ok(draw(model, n, rng))
}

fn draw<R: Rng + ?Sized>(model: &NoiseModel, n: usize, rng: &mut R) -> Vec<f64> {
    match model {
        NoiseModel::IidGaussian => (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect(),
        NoiseModel::Ar1 { rho } => {
            let innov = (1.0 - rho * rho).sqrt();
            let mut out = Vec::with_capacity(n);
            let mut prev = 0.0;
            for i in 0..n {
                let z: f64 = rng.sample(StandardNormal);
                let v = if i == 0 { z } else { rho * prev + innov * z };
                out.push(v);
                prev = v;
            }
            out
        }
        NoiseModel::BoundedUniform { b } => (0..n).map(|_| rng.random_range(-*b..=*b)).collect(),
        NoiseModel::Rademacher => (0..n).map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 }).collect(),
        NoiseModel::MeanOfM { inner, m } => {
            let mut acc = vec![0.0; n];
            for _ in 0..*m {
                for (a, v) in acc.iter_mut().zip(draw(inner, n, rng)) {
                    *a += v;
                }
            }
            let m = *m as f64;
            acc.into_iter().map(|a| a / m).collect()
        }
        NoiseModel::Zero => vec![0.0; n],
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticConfig {
    /// Constant `C` in the event `Σ_{i∈I} ξ_i² ≥ C|I| + M`.
    #[serde(rename = "C")]
    pub c: f64,
    /// Ascending grid of `M` values.
    pub m_grid: Vec<f64>,
    pub subset_sizes: Vec<usize>,
    pub reps: usize,
    pub slope_threshold: f64,
}

impl DiagnosticConfig {
    /// Grid `M = 0, 1, …, 20`, subset sizes `{1, 5, 10}`.
    pub fn new(c: f64, reps: usize) -> Self {
        DiagnosticConfig {
            c,
            m_grid: (0..=20).map(f64::from).collect(),
            subset_sizes: vec![1, 5, 10],
            reps,
            slope_threshold: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailDiagnosticReport {
    pub m_grid: Vec<f64>,
    /// Survival pooled over all subset sizes.
    pub empirical_survival: Vec<f64>,
    /// Survival per subset size, in `subset_sizes` order.
    pub survival_by_size: Vec<Vec<f64>>,
    pub subset_sizes: Vec<usize>,
    /// Least-squares slope of log-survival on `M`; `None` when fewer than two
    /// grid points have positive survival.
    pub fitted_slope: Option<f64>,
    pub passes: bool,
    pub note: Option<String>,
}

/// Estimates `P(Σ_{i∈I} ξ_i² ≥ C|I| + M)` on a grid of `M` for random subsets
/// `I` and checks that the log-survival decays at least linearly.
///
/// A diagnostic, not a proof of the tail condition.
pub fn a1_diagnostic<R: Rng + ?Sized>(
    model: &NoiseModel,
    n: usize,
    cfg: &DiagnosticConfig,
    rng: &mut R,
) -> Result<TailDiagnosticReport> {
    model.validate()?;
    if cfg.reps < 100 {
        return Err(Error::invalid("reps", format!("need at least 100, got {}", cfg.reps)));
    }
    if !(cfg.c.is_finite() && cfg.c > 0.0) {
        return Err(Error::invalid("C", format!("must be finite and > 0, got {}", cfg.c)));
    }
    if cfg.m_grid.is_empty() || cfg.m_grid.iter().any(|m| !m.is_finite()) || cfg.m_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("m_grid", "must be a nonempty strictly ascending list of finite values"));
    }
    if cfg.subset_sizes.is_empty() || cfg.subset_sizes.iter().any(|&s| s == 0 || s > n) {
        return Err(Error::invalid("subset_sizes", format!("sizes must lie in [1, {n}]")));
    }

    let grid_len = cfg.m_grid.len();
    let mut hits = vec![vec![0usize; grid_len]; cfg.subset_sizes.len()];
    for _ in 0..cfg.reps {
        let xi = draw(model, n, rng);
        for (row, &s) in hits.iter_mut().zip(&cfg.subset_sizes) {
            let sum: f64 = index::sample(rng, n, s).iter().map(|i| xi[i] * xi[i]).sum();
            let excess = sum - cfg.c * s as f64;
            for (h, &m) in row.iter_mut().zip(&cfg.m_grid) {
                if excess >= m {
                    *h += 1;
                }
            }
        }
    }

    let survival_by_size: Vec<Vec<f64>> = hits
        .iter()
        .map(|row| row.iter().map(|&h| h as f64 / cfg.reps as f64).collect())
        .collect();
    let total = (cfg.reps * cfg.subset_sizes.len()) as f64;
    let empirical_survival: Vec<f64> = (0..grid_len)
        .map(|j| hits.iter().map(|row| row[j]).sum::<usize>() as f64 / total)
        .collect();

    let points: Vec<(f64, f64)> = cfg
        .m_grid
        .iter()
        .zip(&empirical_survival)
        .filter(|(_, &s)| s > 0.0)
        .map(|(&m, &s)| (m, s.ln()))
        .collect();
    let (fitted_slope, passes, note) = if points.len() < 2 {
        (None, true, Some("survival vanished".to_string()))
    } else {
        let slope = least_squares_slope(&points);
        (Some(slope), slope <= -cfg.slope_threshold, None)
    };

    Ok(TailDiagnosticReport {
        m_grid: cfg.m_grid.clone(),
        empirical_survival,
        survival_by_size,
        subset_sizes: cfg.subset_sizes.clone(),
        fitted_slope,
        passes,
        note,
    })
}

fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}
