use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::DEFAULT_KS;
use crate::noise::NoiseModel;
use crate::oracle::{strong_signal_theta, SignPattern, SignalVector};
use crate::selector::{EmptyPreselectorRule, SelectorConfig};
use crate::uq::UqConfig;

use super::seed::splitmix64;

/// Sign assignment for a generated signal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum SignSpec {
    #[default]
    Positive,
    Alternating,
    /// Fair random signs derived from the master seed.
    Random,
    /// Explicit `±1` per support coordinate.
    Explicit(Vec<i8>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SignalSpec {
    Explicit {
        theta: Vec<f64>,
    },
    /// Support `{1..s}` with magnitudes just above `σ·sqrt(A·ln(qn/s))`.
    Strong {
        s: usize,
        #[serde(rename = "A")]
        a: f64,
        #[serde(default)]
        signs: SignSpec,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThetaCheck {
    #[serde(rename = "A0")]
    pub a0: f64,
    #[serde(rename = "A1")]
    pub a1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct OutputPaths {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reps_csv: Option<String>,
}

fn default_ks() -> Vec<usize> {
    DEFAULT_KS.to_vec()
}

/// One Monte-Carlo experiment cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n: usize,
    pub sigma: f64,
    #[serde(rename = "K")]
    pub k: f64,
    pub signal: SignalSpec,
    pub noise: NoiseModel,
    pub replications: usize,
    pub master_seed: u64,
    /// Level `A` of the evaluation active set. Defaults to the generator's
    /// `A` for strong signals; required for explicit signals.
    #[serde(rename = "oracle_A", default, skip_serializing_if = "Option::is_none")]
    pub oracle_a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_check: Option<ThetaCheck>,
    #[serde(default)]
    pub uq: UqConfig,
    #[serde(default = "default_ks")]
    pub kfwer_ks: Vec<usize>,
    #[serde(default)]
    pub empty_rule: EmptyPreselectorRule,
    #[serde(default)]
    pub output: OutputPaths,
}

fn field(path: &str, message: impl Into<String>) -> Error {
    Error::Config {
        path: path.to_string(),
        message: message.into(),
    }
}

fn positive(path: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(field(path, format!("must be finite and > 0, got {v}")))
    }
}

/// Parses and validates a JSON experiment config. Errors name the offending
/// field path and, for syntax errors, the line and column.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let cfg: ExperimentConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        field(&path, format!("{inner} (line {}, column {})", inner.line(), inner.column()))
    })?;
    cfg.validate()?;
    Ok(cfg)
}

impl ExperimentConfig {
    /// A strong-signal cell with iid Gaussian noise and default settings.
    pub fn strong_gaussian(n: usize, s: usize, a: f64, k: f64, replications: usize, master_seed: u64) -> Self {
        ExperimentConfig {
            n,
            sigma: 1.0,
            k,
            signal: SignalSpec::Strong {
                s,
                a,
                signs: SignSpec::Positive,
            },
            noise: NoiseModel::IidGaussian,
            replications,
            master_seed,
            oracle_a: None,
            theta_check: None,
            uq: UqConfig::default(),
            kfwer_ks: default_ks(),
            empty_rule: EmptyPreselectorRule::Infinite,
            output: OutputPaths::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(field("n", "must be >= 1"));
        }
        positive("sigma", self.sigma)?;
        positive("K", self.k)?;
        if self.replications == 0 {
            return Err(field("replications", "must be >= 1"));
        }
        match &self.signal {
            SignalSpec::Explicit { theta } => {
                if theta.len() != self.n {
                    return Err(field("signal.theta", format!("length {} does not match n = {}", theta.len(), self.n)));
                }
                if theta.iter().any(|v| !v.is_finite()) {
                    return Err(field("signal.theta", "values must be finite"));
                }
                if self.oracle_a.is_none() {
                    return Err(field("oracle_A", "required when the signal is explicit"));
                }
            }
            SignalSpec::Strong { s, a, signs } => {
                if *s == 0 || *s > self.n {
                    return Err(field("signal.s", format!("need 1 <= s <= n, got {s}")));
                }
                positive("signal.A", *a)?;
                if let SignSpec::Explicit(v) = signs {
                    if v.len() != *s || v.iter().any(|&x| x != 1 && x != -1) {
                        return Err(field("signal.signs", "explicit signs must be s values of +1/-1"));
                    }
                }
            }
        }
        if let Some(a) = self.oracle_a {
            positive("oracle_A", a)?;
        }
        if let Some(tc) = self.theta_check {
            if !(tc.a0.is_finite() && tc.a0 >= 0.0) {
                return Err(field("theta_check.A0", "must be finite and >= 0"));
            }
            if !(tc.a1.is_finite() && tc.a0 <= tc.a1) {
                return Err(field("theta_check", format!("need A0 <= A1, got A0 = {}, A1 = {}", tc.a0, tc.a1)));
            }
        }
        self.noise.validate().map_err(|e| field("noise", e.to_string()))?;
        self.uq.validate().map_err(|e| field("uq", e.to_string()))?;
        if self.kfwer_ks.contains(&0) {
            return Err(field("kfwer_ks", "k must be >= 1"));
        }
        self.selector().validate().map_err(|e| field("K", e.to_string()))
    }

    pub fn selector(&self) -> SelectorConfig {
        let mut sel = SelectorConfig::new(self.k, self.sigma);
        sel.empty_rule = self.empty_rule;
        sel
    }

    /// The fixed signal of the experiment.
    pub fn theta(&self) -> Result<SignalVector> {
        match &self.signal {
            SignalSpec::Explicit { theta } => SignalVector::new(theta.clone()),
            SignalSpec::Strong { s, a, signs } => {
                let pattern = match signs {
                    SignSpec::Positive => SignPattern::Positive,
                    SignSpec::Alternating => SignPattern::Alternating,
                    SignSpec::Random => SignPattern::Random {
                        seed: splitmix64(self.master_seed ^ 0x5349_474e),
                    },
                    SignSpec::Explicit(v) => SignPattern::Explicit { signs: v.clone() },
                };
                strong_signal_theta(self.n, *s, *a, self.sigma, &pattern)
            }
        }
    }

    /// The level used for the evaluation active set.
    pub fn evaluation_level(&self) -> f64 {
        match (&self.signal, self.oracle_a) {
            (_, Some(a)) => a,
            (SignalSpec::Strong { a, .. }, None) => *a,
            (SignalSpec::Explicit { .. }, None) => unreachable!("validated"),
        }
    }
}
