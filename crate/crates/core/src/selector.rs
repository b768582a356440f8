//! The risk-hull preselector `Ĩ(K)`, the thresholding selector `Î(K)` and the
//! Mallows `Cp` baseline.
//!
//! The preselector minimizes `Σ_{i∉I} X_i² + Kσ²ℓ(|I|)` over all subsets; the
//! selector then keeps every coordinate with `X_i² ≥ Kσ² ln(qn/|Ĩ|)`. The
//! selector is always a subset of the preselector.
//!
//! `K` has no computable default from the noise tail constants. `K = 4` is a
//! pilot-calibrated choice for independent unit-variance noise.

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::primitives::{Conventions, ObservationVector, SelectionMask};
use crate::sweep::SortedSweep;

/// Pilot-calibrated penalty constant for independent unit-variance noise.
pub const DEFAULT_K: f64 = 4.0;

/// How the threshold is formed when the preselector is empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EmptyPreselectorRule {
    /// `ln(qn/0) = ∞`: nothing is selected.
    #[default]
    Infinite,
    /// Use `|Ĩ| ∨ 1`, i.e. threshold `Kσ² ln(qn)`. For sensitivity studies.
    ClampToOne,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelectorConfig {
    /// Penalty constant `K`.
    #[serde(rename = "K")]
    pub k: f64,
    pub sigma: f64,
    #[serde(default = "default_q")]
    pub q: f64,
    #[serde(default)]
    pub empty_rule: EmptyPreselectorRule,
}

fn default_q() -> f64 {
    Conventions::default().q
}

impl SelectorConfig {
    pub fn new(k: f64, sigma: f64) -> Self {
        SelectorConfig {
            k,
            sigma,
            q: default_q(),
            empty_rule: EmptyPreselectorRule::Infinite,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.k.is_finite() && self.k > 0.0) {
            return Err(Error::invalid("K", format!("must be finite and > 0, got {}", self.k)));
        }
        if !(self.sigma.is_finite() && self.sigma > 0.0) {
            return Err(Error::invalid("sigma", format!("must be finite and > 0, got {}", self.sigma)));
        }
        Conventions { q: self.q }.validate()
    }

    fn weight(&self) -> f64 {
        self.k * (self.sigma * self.sigma)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelectionResult {
    pub preselector: SelectionMask,
    pub selected: SelectionMask,
    /// `+∞` when the preselector is empty; serialized as `null` in that case.
    #[serde(serialize_with = "finite_or_null")]
    pub threshold: f64,
    #[serde(rename = "criterion")]
    pub criterion_value: f64,
}

fn finite_or_null<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else {
        s.serialize_none()
    }
}

/// Computes `Ĩ(K)` and its criterion value in `O(n log n)`.
///
/// Exact minimizers are broken by the largest `Σ_{i∈I}(n − i)`; a remaining
/// tie (two candidates differing only by index `n`) goes to the larger set.
pub fn preselect(obs: &ObservationVector, cfg: &SelectorConfig) -> Result<(SelectionMask, f64)> {
    cfg.validate()?;
    let squares: Vec<f64> = obs.values().iter().map(|x| x * x).collect();
    let sweep = SortedSweep::new(&squares);
    let crit = sweep.criteria(cfg.weight(), cfg.q);
    let n = sweep.n() as u64;

    let best = crit.iter().copied().fold(f64::INFINITY, f64::min);
    // Σ(n−i) over the top-k set is k·n − Σi.
    let sums = sweep.index_sums();
    let mut chosen: Option<(usize, u64)> = None;
    for (k, &c) in crit.iter().enumerate() {
        if c != best {
            continue;
        }
        let score = k as u64 * n - sums[k];
        match chosen {
            Some((_, s)) if s > score => {}
            _ => chosen = Some((k, score)),
        }
    }
    let (k, _) = chosen.expect("criterion has a finite minimum");
    Ok((sweep.top(k), best))
}

/// Computes `Ĩ(K)` and `Î(K)` together with the threshold.
pub fn select(obs: &ObservationVector, cfg: &SelectorConfig) -> Result<SelectionResult> {
    let (preselector, criterion_value) = preselect(obs, cfg)?;
    let threshold = threshold_for(preselector.len(), obs.n(), cfg);
    let selected = SelectionMask::from_sorted_zero_based(
        obs.n(),
        obs.values()
            .iter()
            .enumerate()
            .filter(|(_, x)| *x * *x >= threshold)
            .map(|(i, _)| i),
    );
    assert!(
        selected.is_subset(&preselector),
        "selector {selected} escaped preselector {preselector}"
    );
    Ok(SelectionResult {
        preselector,
        selected,
        threshold,
        criterion_value,
    })
}

/// `Kσ² ln(qn/|Ĩ|)`, with the empty case governed by `cfg.empty_rule`.
pub fn threshold_for(preselector_size: usize, n: usize, cfg: &SelectorConfig) -> f64 {
    let size = match (preselector_size, cfg.empty_rule) {
        (0, EmptyPreselectorRule::Infinite) => return f64::INFINITY,
        (0, EmptyPreselectorRule::ClampToOne) => 1,
        (s, _) => s,
    };
    cfg.weight() * (cfg.q * n as f64 / size as f64).ln()
}

/// Mallows `Cp` selection: `{ i : X_i² > 2σ² }`.
pub fn mallows_cp(obs: &ObservationVector) -> SelectionMask {
    let cut = 2.0 * obs.sigma() * obs.sigma();
    SelectionMask::from_sorted_zero_based(
        obs.n(),
        obs.values()
            .iter()
            .enumerate()
            .filter(|(_, x)| *x * *x > cut)
            .map(|(i, _)| i),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primitives::ell;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn obs(x: &[f64], sigma: f64) -> ObservationVector {
        ObservationVector::new(x.to_vec(), sigma).unwrap()
    }

    /// Exhaustive argmin over all 2ⁿ subsets with the Σ(n−i) tie rule.
    fn brute_preselect(x: &[f64], k: f64, sigma: f64) -> (Vec<usize>, f64) {
        let n = x.len();
        let mut best: Option<(f64, u64, usize, u32)> = None;
        for bits in 0u32..(1 << n) {
            let size = bits.count_ones() as usize;
            let mut rest = 0.0;
            let mut score = 0u64;
            for (i, v) in x.iter().enumerate() {
                if bits & (1 << i) == 0 {
                    rest += v * v;
                } else {
                    score += (n - (i + 1)) as u64;
                }
            }
            let c = rest + k * (sigma * sigma) * ell(size, n).unwrap();
            let better = match best {
                None => true,
                Some((bc, bs, bsize, _)) => c < bc || (c == bc && (score > bs || (score == bs && size > bsize))),
            };
            if better {
                best = Some((c, score, size, bits));
            }
        }
        let (c, _, _, bits) = best.unwrap();
        ((0..n).filter(|i| bits & (1 << i) != 0).map(|i| i + 1).collect(), c)
    }

    #[test]
    fn zero_data_selects_nothing() {
        let (m, c) = preselect(&obs(&[0.0, 0.0, 0.0], 1.0), &SelectorConfig::new(1.0, 1.0)).unwrap();
        assert!(m.is_empty());
        assert_eq!(c, 0.0);
        let r = select(&obs(&[0.0, 0.0, 0.0], 1.0), &SelectorConfig::new(1.0, 1.0)).unwrap();
        assert!(r.selected.is_empty());
        assert_eq!(r.threshold, f64::INFINITY);
        let json = serde_json::to_value(&r).unwrap();
        assert!(json["threshold"].is_null());
    }

    #[test]
    fn two_coordinate_example() {
        let cfg = SelectorConfig::new(1.0, 1.0);
        let r = select(&obs(&[3.0, 0.0], 1.0), &cfg).unwrap();
        assert_eq!(r.preselector.indices(), &[1]);
        let expected = 2.0 + 2f64.ln();
        assert!((r.criterion_value - expected).abs() < 1e-12);
        assert!((r.criterion_value - 2.693_147_180_5).abs() < 1e-9);
        assert!((r.threshold - expected).abs() < 1e-12);
        assert_eq!(r.selected.indices(), &[1]);
    }

    #[test]
    fn matches_brute_force_on_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..400 {
            let n = rng.random_range(1..=10);
            let x: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..3.0)).collect();
            for &k in &[0.5, 1.0, 4.0] {
                let (m, c) = preselect(&obs(&x, 1.0), &SelectorConfig::new(k, 1.0)).unwrap();
                let (bm, bc) = brute_preselect(&x, k, 1.0);
                assert_eq!(m.indices(), bm.as_slice(), "x = {x:?}, K = {k}");
                assert!((c - bc).abs() <= 1e-12 * bc.abs().max(1.0));
            }
        }
    }

    #[test]
    fn tie_rules_on_integer_data() {
        // Integer squares make every complement sum exact, so ties are real.
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..300 {
            let n = rng.random_range(1..=9);
            let x: Vec<f64> = (0..n).map(|_| rng.random_range(-3i32..=3) as f64).collect();
            for &k in &[0.5, 1.0, 4.0] {
                let (m, _) = preselect(&obs(&x, 1.0), &SelectorConfig::new(k, 1.0)).unwrap();
                assert_eq!(m.indices(), brute_preselect(&x, k, 1.0).0.as_slice(), "x = {x:?}");
            }
        }
        // Equal magnitudes: the lower indices win within a cardinality.
        let (m, _) = preselect(&obs(&[5.0, 5.0, 5.0, 0.0], 1.0), &SelectorConfig::new(100.0 / 36.0, 1.0)).unwrap();
        assert!(m.is_empty() || m.indices()[0] == 1);
    }

    #[test]
    fn selected_matches_direct_threshold() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..300 {
            let n = rng.random_range(1..=12);
            let x: Vec<f64> = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
            let cfg = SelectorConfig::new(1.0, 1.0);
            let r = select(&obs(&x, 1.0), &cfg).unwrap();
            let (pre, _) = brute_preselect(&x, 1.0, 1.0);
            let t = if pre.is_empty() {
                f64::INFINITY
            } else {
                (7.38905609893065 * n as f64 / pre.len() as f64).ln()
            };
            let direct: Vec<usize> = (0..n).filter(|&i| x[i] * x[i] >= t).map(|i| i + 1).collect();
            assert_eq!(r.selected.indices(), direct.as_slice());
        }
    }

    #[test]
    fn monotone_in_k() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let n = rng.random_range(1..=50);
            let x: Vec<f64> = (0..n).map(|_| rng.random_range(-6.0..6.0)).collect();
            let o = obs(&x, 1.0);
            let mut prev: Option<(usize, f64)> = None;
            for step in 1..=40 {
                let k = step as f64 * 0.25;
                let (m, c) = preselect(&o, &SelectorConfig::new(k, 1.0)).unwrap();
                if let Some((size, crit)) = prev {
                    assert!(m.len() <= size);
                    assert!(c >= crit);
                }
                prev = Some((m.len(), c));
            }
        }
    }

    #[test]
    fn scale_and_permutation_relations() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..200 {
            let n = rng.random_range(1..=30);
            let x: Vec<f64> = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
            let cfg = SelectorConfig::new(1.0, 1.0);
            let base = select(&obs(&x, 1.0), &cfg).unwrap();
            for &c in &[0.5, 2.0, 4.0] {
                let xs: Vec<f64> = x.iter().map(|v| v * c).collect();
                let scaled = select(&obs(&xs, c), &SelectorConfig::new(1.0, c)).unwrap();
                assert_eq!(scaled.preselector, base.preselector);
                assert_eq!(scaled.selected, base.selected);
            }
            let mut perm: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                perm.swap(i, rng.random_range(0..=i));
            }
            let mut xp = vec![0.0; n];
            for i in 0..n {
                xp[perm[i]] = x[i];
            }
            let permuted = select(&obs(&xp, 1.0), &cfg).unwrap();
            assert_eq!(permuted.preselector, base.preselector.permuted(&perm).unwrap());
            assert_eq!(permuted.selected, base.selected.permuted(&perm).unwrap());
        }
    }

    #[test]
    fn clamp_rule_threshold() {
        let mut cfg = SelectorConfig::new(1.0, 1.0);
        cfg.empty_rule = EmptyPreselectorRule::ClampToOne;
        assert!((threshold_for(0, 4, &cfg) - (2.0 + 4f64.ln())).abs() < 1e-12);
        let r = select(&obs(&[0.5, 0.1], 1.0), &cfg).unwrap();
        assert!(r.preselector.is_empty() && r.selected.is_empty());
    }

    #[test]
    fn invalid_config_rejected() {
        let o = obs(&[1.0], 1.0);
        assert!(preselect(&o, &SelectorConfig::new(0.0, 1.0)).is_err());
        assert!(preselect(&o, &SelectorConfig::new(1.0, -1.0)).is_err());
    }

    fn brute_cp(x: &[f64], sigma: f64) -> Vec<usize> {
        let n = x.len();
        let mut best = (f64::INFINITY, 0u32);
        for bits in 0u32..(1 << n) {
            let c: f64 = (0..n)
                .map(|i| if bits & (1 << i) == 0 { x[i] * x[i] } else { 2.0 * sigma * sigma })
                .sum();
            if c < best.0 {
                best = (c, bits);
            }
        }
        (0..n).filter(|i| best.1 & (1 << i) != 0).map(|i| i + 1).collect()
    }

    #[test]
    fn mallows_cp_examples() {
        assert_eq!(mallows_cp(&obs(&[2.0, 0.0], 1.0)).indices(), &[1]);
        assert!(mallows_cp(&obs(&[0.0; 5], 1.0)).is_empty());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let n = rng.random_range(1..=12);
            let x: Vec<f64> = (0..n).map(|_| rng.random_range(-3.0..3.0)).collect();
            assert_eq!(mallows_cp(&obs(&x, 1.0)).indices(), brute_cp(&x, 1.0).as_slice());
        }
    }
}
