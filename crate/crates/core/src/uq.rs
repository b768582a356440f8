//! Hamming-ball confidence sets for the selector.
//!
//! The ball is `B(η̂, r̂) = { η : |η̂ − η| ≤ r̂ }` with the data-driven radius
//! `r̂ = n·(n / (|Ĩ| ∨ 1))^{−α'}`. The oracle radius `r* = n·(n / (|I*| ∨ 1))^{−α'}`
//! uses the active-set size instead. Valid coverage needs `α'` below a
//! regime-dependent exponent that has no computable value, so `α'` is a user
//! parameter (default 1).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::primitives::{hamming, SelectionMask};

/// Size of the preselector `Ĩ`; feeds the data-driven radius.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PreselectorSize(pub usize);

/// Size of the active set `I*`; feeds the oracle radius.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ActiveSize(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UqConfig {
    pub alpha4_prime: f64,
    pub m1_prime: f64,
}

impl Default for UqConfig {
    fn default() -> Self {
        UqConfig {
            alpha4_prime: 1.0,
            m1_prime: 4.0,
        }
    }
}

impl UqConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha4_prime.is_finite() && self.alpha4_prime > 0.0) {
            return Err(Error::invalid("alpha4_prime", format!("must be finite and > 0, got {}", self.alpha4_prime)));
        }
        if !(self.m1_prime.is_finite() && self.m1_prime > 0.0) {
            return Err(Error::invalid("m1_prime", format!("must be finite and > 0, got {}", self.m1_prime)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfidenceBall {
    pub center: SelectionMask,
    pub radius: f64,
}

fn radius_raw(size: usize, n: usize, alpha: f64) -> f64 {
    let nf = n as f64;
    nf * (size.max(1) as f64 / nf).powf(alpha)
}

/// `r̂ = n·((|Ĩ| ∨ 1)/n)^{α'}`. Non-decreasing in the preselector size;
/// `α' = 0` gives the trivial radius `n`.
pub fn radius(preselector_size: usize, n: usize, alpha4_prime: f64) -> Result<f64> {
    if n == 0 || preselector_size > n {
        return Err(Error::Domain(format!("need 0 <= size <= n, n >= 1; got size = {preselector_size}, n = {n}")));
    }
    if !(alpha4_prime.is_finite() && alpha4_prime >= 0.0) {
        return Err(Error::invalid("alpha4_prime", format!("must be finite and >= 0, got {alpha4_prime}")));
    }
    Ok(radius_raw(preselector_size, n, alpha4_prime))
}

/// The oracle radius `r*` for an active set of the given size.
pub fn oracle_radius(active: ActiveSize, n: usize, alpha4_prime: f64) -> Result<f64> {
    radius(active.0, n, alpha4_prime)
}

impl ConfidenceBall {
    /// The ball centred at the selector with the radius from the preselector size.
    pub fn new(center: SelectionMask, preselector: PreselectorSize, alpha4_prime: f64) -> Result<Self> {
        let radius = radius(preselector.0, center.n(), alpha4_prime)?;
        Ok(ConfidenceBall { center, radius })
    }

    pub fn contains(&self, eta: &SelectionMask) -> Result<bool> {
        ball_contains(self, eta)
    }
}

/// Whether `|center − η| ≤ radius`.
pub fn ball_contains(ball: &ConfidenceBall, eta: &SelectionMask) -> Result<bool> {
    Ok(hamming(&ball.center, eta)? as f64 <= ball.radius)
}

/// What one replication contributes to the coverage/size evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct UqRecord {
    pub preselector_size: PreselectorSize,
    pub active_size: ActiveSize,
    /// `|η̂ − η*|`
    pub hamming: usize,
}

impl UqRecord {
    pub fn from_masks(preselector_size: PreselectorSize, selected: &SelectionMask, active: &SelectionMask) -> Result<Self> {
        Ok(UqRecord {
            preselector_size,
            active_size: ActiveSize(active.len()),
            hamming: hamming(selected, active)?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UqReport {
    /// Fraction of replications with `η* ∉ B(η̂, r̂)`.
    pub coverage_fail_rate: f64,
    /// Fraction of replications with `r̂ ≥ M'₁·r*`.
    pub size_exceed_rate: f64,
    pub alpha4_prime: f64,
    pub m1_prime: f64,
}

/// Monte-Carlo estimates of the non-coverage and oversize probabilities.
pub fn evaluate_uq(reps: &[UqRecord], n: usize, cfg: &UqConfig) -> Result<UqReport> {
    cfg.validate()?;
    if reps.is_empty() {
        return Err(Error::Empty("evaluate_uq needs at least one replication"));
    }
    let mut miss = 0usize;
    let mut oversize = 0usize;
    for rec in reps {
        if rec.hamming > n || rec.active_size.0 > n {
            return Err(Error::Dimension { expected: n, got: rec.hamming.max(rec.active_size.0) });
        }
        let r_hat = radius(rec.preselector_size.0, n, cfg.alpha4_prime)?;
        let r_star = oracle_radius(rec.active_size, n, cfg.alpha4_prime)?;
        if rec.hamming as f64 > r_hat {
            miss += 1;
        }
        if r_hat >= cfg.m1_prime * r_star {
            oversize += 1;
        }
    }
    let r = reps.len() as f64;
    Ok(UqReport {
        coverage_fail_rate: miss as f64 / r,
        size_exceed_rate: oversize as f64 / r,
        alpha4_prime: cfg.alpha4_prime,
        m1_prime: cfg.m1_prime,
    })
}

/// [`evaluate_uq`] on mask-level records.
pub fn evaluate_uq_masks(
    reps: &[(PreselectorSize, SelectionMask, SelectionMask)],
    n: usize,
    cfg: &UqConfig,
) -> Result<UqReport> {
    let records = reps
        .iter()
        .map(|(p, sel, act)| {
            if sel.n() != n {
                return Err(Error::Dimension { expected: n, got: sel.n() });
            }
            UqRecord::from_masks(*p, sel, act)
        })
        .collect::<Result<Vec<_>>>()?;
    evaluate_uq(&records, n, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn m(n: usize, idx: &[usize]) -> SelectionMask {
        SelectionMask::from_indices(n, idx.iter().copied()).unwrap()
    }

    #[test]
    fn radius_examples() {
        assert!((radius(0, 100, 1.0).unwrap() - 1.0).abs() < 1e-12);
        assert!((radius(10, 100, 1.0).unwrap() - 10.0).abs() < 1e-12);
        for s in 0..=20 {
            assert_eq!(radius(s, 20, 0.0).unwrap(), 20.0);
        }
        assert!(radius(11, 10, 1.0).is_err());
        assert!(radius(1, 10, -1.0).is_err());
    }

    #[test]
    fn radius_monotone_and_bounded() {
        for &alpha in &[0.1, 0.5, 1.0, 3.0] {
            let mut prev = 0.0;
            for s in 0..=200 {
                let r = radius(s, 200, alpha).unwrap();
                assert!(r >= prev && r <= 200.0 + 1e-9);
                prev = r;
            }
        }
    }

    #[test]
    fn ball_membership() {
        let c = m(3, &[1]);
        for r in [0.0, 0.5, 2.0] {
            let ball = ConfidenceBall { center: c.clone(), radius: r };
            assert!(ball_contains(&ball, &c).unwrap());
        }
        let ball = ConfidenceBall { center: c.clone(), radius: 1.5 };
        assert!(!ball_contains(&ball, &m(3, &[2])).unwrap());
        let full = ConfidenceBall { center: c.clone(), radius: 3.0 };
        for bits in 0u8..8 {
            let eta = SelectionMask::from_bits(&[(bits & 1) != 0, (bits & 2) != 0, (bits & 4) != 0]).unwrap();
            assert!(full.contains(&eta).unwrap());
        }
        assert!(ball_contains(&ball, &m(4, &[1])).is_err());
    }

    #[test]
    fn exact_recovery_always_covers() {
        let a = m(10, &[2, 5]);
        let reps = vec![(PreselectorSize(0), a.clone(), a.clone()); 5];
        let r = evaluate_uq_masks(&reps, 10, &UqConfig::default()).unwrap();
        assert_eq!(r.coverage_fail_rate, 0.0);
    }

    #[test]
    fn degenerate_exponent_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let n = 50;
        let reps: Vec<UqRecord> = (0..200)
            .map(|_| UqRecord {
                preselector_size: PreselectorSize(rng.random_range(0..=n)),
                active_size: ActiveSize(rng.random_range(0..=n)),
                hamming: rng.random_range(0..=n),
            })
            .collect();
        for (m1, expect) in [(0.5, 1.0), (1.0, 1.0), (1.0 + 1e-12, 0.0), (4.0, 0.0)] {
            let cfg = UqConfig {
                alpha4_prime: f64::MIN_POSITIVE,
                m1_prime: m1,
            };
            let r = evaluate_uq(&reps, n, &cfg).unwrap();
            assert_eq!(r.coverage_fail_rate, 0.0);
            assert_eq!(r.size_exceed_rate, expect);
        }
    }

    #[test]
    fn coverage_failure_non_decreasing_in_alpha() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let n = 100;
        let reps: Vec<UqRecord> = (0..300)
            .map(|_| UqRecord {
                preselector_size: PreselectorSize(rng.random_range(0..=20)),
                active_size: ActiveSize(10),
                hamming: rng.random_range(0..=15),
            })
            .collect();
        let mut prev = 0.0;
        for step in 1..=30 {
            let cfg = UqConfig {
                alpha4_prime: step as f64 * 0.1,
                m1_prime: 4.0,
            };
            let r = evaluate_uq(&reps, n, &cfg).unwrap();
            assert!(r.coverage_fail_rate >= prev);
            prev = r.coverage_fail_rate;
        }
    }

    #[test]
    fn errors() {
        assert!(matches!(evaluate_uq(&[], 5, &UqConfig::default()), Err(Error::Empty(_))));
        let bad = UqConfig {
            alpha4_prime: 0.0,
            m1_prime: 1.0,
        };
        let rec = UqRecord {
            preselector_size: PreselectorSize(1),
            active_size: ActiveSize(1),
            hamming: 0,
        };
        assert!(evaluate_uq(&[rec], 5, &bad).is_err());
    }
}
