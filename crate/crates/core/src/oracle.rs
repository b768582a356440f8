//! The generalized active set `I*(A, θ)`, the variable selection path, the
//! active-set path over `A ≥ 0` and membership in the distinct-active-set
//! class.
//!
//! `I*(A, θ)` minimizes `r²(I, θ) = Σ_{i∉I} θ_i² + Aσ²ℓ(|I|)`; among
//! minimizers the one with the smallest `Σ_{i∈I} i` is returned. This tie rule
//! differs from the preselector's on purpose.
//!
//! The set only depends on `A` and `σ` through `Aσ²`. There is no computable
//! map from the selector constant `K` to the control levels `(A0, A1)`; those
//! are always explicit inputs here.

use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::primitives::{Conventions, SelectionMask};
use crate::sweep::SortedSweep;

/// Relative margin added to strong-signal magnitudes.
pub const STRONG_SIGNAL_MARGIN: f64 = 1e-9;

/// The true mean vector `θ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct SignalVector {
    theta: Vec<f64>,
}

impl SignalVector {
    pub fn new(theta: Vec<f64>) -> Result<Self> {
        if theta.is_empty() {
            return Err(Error::invalid("theta", "signal must be nonempty"));
        }
        if let Some(i) = theta.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid("theta", format!("non-finite value at index {}", i + 1)));
        }
        Ok(SignalVector { theta })
    }

    /// The zero signal in dimension `n`.
    pub fn zeros(n: usize) -> Result<Self> {
        Self::new(vec![0.0; n])
    }

    pub fn values(&self) -> &[f64] {
        &self.theta
    }

    pub fn n(&self) -> usize {
        self.theta.len()
    }

    /// Support `S(θ) = { i : θ_i ≠ 0 }`.
    pub fn support(&self) -> SelectionMask {
        SelectionMask::from_sorted_zero_based(
            self.n(),
            self.theta.iter().enumerate().filter(|(_, v)| **v != 0.0).map(|(i, _)| i),
        )
    }

    fn squares(&self) -> Vec<f64> {
        self.theta.iter().map(|t| t * t).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ActiveSetResult {
    pub active: SelectionMask,
    pub r_squared: f64,
}

fn check_sigma(sigma: f64) -> Result<()> {
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::invalid("sigma", format!("must be finite and > 0, got {sigma}")));
    }
    Ok(())
}

fn check_a(name: &'static str, a: f64) -> Result<()> {
    if !(a.is_finite() && a >= 0.0) {
        return Err(Error::invalid(name, format!("must be finite and >= 0, got {a}")));
    }
    Ok(())
}

/// One affine candidate `r²(k; A) = intercept + A·slope`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Line {
    k: usize,
    intercept: f64,
    slope: f64,
}

impl Line {
    #[inline]
    fn at(&self, a: f64) -> f64 {
        self.intercept + a * self.slope
    }
}

fn lines(sweep: &SortedSweep, sigma: f64) -> Vec<Line> {
    let sigma2 = sigma * sigma;
    sweep
        .ells(Conventions::default().q)
        .into_iter()
        .enumerate()
        .map(|(k, l)| Line {
            k,
            intercept: sweep.tail(k),
            slope: sigma2 * l,
        })
        .collect()
}

/// Computes `I*(A, θ)` and `r²(θ)`.
pub fn active_set(theta: &SignalVector, a: f64, sigma: f64) -> Result<ActiveSetResult> {
    check_a("A", a)?;
    check_sigma(sigma)?;
    let sweep = SortedSweep::new(&theta.squares());
    let lines = lines(&sweep, sigma);
    let values: Vec<f64> = lines.iter().map(|l| l.at(a)).collect();
    let best = values.iter().copied().fold(f64::INFINITY, f64::min);
    let sums = sweep.index_sums();
    let k = (0..values.len())
        .filter(|&k| values[k] == best)
        .min_by_key(|&k| sums[k])
        .expect("at least one candidate");
    Ok(ActiveSetResult {
        active: sweep.top(k),
        r_squared: best,
    })
}

/// The variable selection path: the distinct level sets
/// `{ i : θ_i² ≥ θ²_[k] }`, from `∅` up to `[n]`.
pub fn vsp(theta: &SignalVector) -> Vec<SelectionMask> {
    let squares = theta.squares();
    let n = theta.n();
    let mut out = vec![SelectionMask::empty(n)];
    let mut levels: Vec<f64> = squares.clone();
    levels.sort_by(|a, b| b.total_cmp(a));
    levels.dedup();
    for level in levels {
        out.push(SelectionMask::from_sorted_zero_based(
            n,
            squares.iter().enumerate().filter(|(_, v)| **v >= level).map(|(i, _)| i),
        ));
    }
    out
}

/// One constant piece of `A ↦ I*(A, θ)` on `[a_low, a_high)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelectionPathEntry {
    pub a_low: f64,
    /// `+∞` for the last entry; serialized as `null`.
    #[serde(serialize_with = "finite_or_null")]
    pub a_high: f64,
    pub active: SelectionMask,
}

fn finite_or_null<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else {
        s.serialize_none()
    }
}

/// The full active-set path: a partition of `[0, ∞)` into half-open
/// intervals, each mapped to its active set. Active sets shrink as `A`
/// grows.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelectionPath {
    entries: Vec<SelectionPathEntry>,
    #[serde(skip)]
    lines: Vec<Line>,
}

impl SelectionPath {
    pub fn entries(&self) -> &[SelectionPathEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The active set at `a ≥ 0` (right-continuous at breakpoints).
    pub fn active_at(&self, a: f64) -> Result<&SelectionMask> {
        check_a("A", a)?;
        let mut idx = self.entries.partition_point(|e| e.a_low <= a) - 1;
        // Within a few ulp of a breakpoint, settle it with the same float
        // expression the pointwise oracle uses.
        if idx + 1 < self.entries.len() && near(a, self.entries[idx + 1].a_low) {
            let (cur, next) = (self.lines[idx], self.lines[idx + 1]);
            if next.at(a) <= cur.at(a) {
                idx += 1;
            }
        } else if idx > 0 && near(a, self.entries[idx].a_low) {
            let (prev, cur) = (self.lines[idx - 1], self.lines[idx]);
            if prev.at(a) < cur.at(a) {
                idx -= 1;
            }
        }
        Ok(&self.entries[idx].active)
    }
}

fn near(a: f64, b: f64) -> bool {
    (a - b).abs() <= 4.0 * f64::EPSILON * a.abs().max(b.abs())
}

/// Sign of `a·b − c·d`, resolved exactly via fused multiply-add error terms
/// when the rounded products are within 4 ulp.
fn cmp_products(a: f64, b: f64, c: f64, d: f64) -> Ordering {
    let (p1, p2) = (a * b, c * d);
    if !near(p1, p2) {
        return p1.total_cmp(&p2);
    }
    let e1 = a.mul_add(b, -p1);
    let e2 = c.mul_add(d, -p2);
    ((p1 - p2) + (e1 - e2)).partial_cmp(&0.0).unwrap_or(Ordering::Equal)
}

/// Computes the whole path `{ I*(A, θ) : A ≥ 0 }` as the lower envelope of
/// the `n + 1` affine criteria `r²(k; A)`.
pub fn active_set_path(theta: &SignalVector, sigma: f64) -> Result<SelectionPath> {
    check_sigma(sigma)?;
    let sweep = SortedSweep::new(&theta.squares());
    let all = lines(&sweep, sigma);

    // Envelope over A ≥ 0 visits lines by decreasing slope. Each stack element
    // carries the line and the left end of its interval.
    let mut stack: Vec<(Line, f64)> = Vec::with_capacity(all.len());
    for &line in all.iter().rev() {
        while let Some(&(top, _)) = stack.last() {
            let dominated = if stack.len() == 1 {
                // Interval of the bottom starts at 0: `line` takes over at
                // A ≤ 0 iff its intercept is not larger.
                line.intercept <= top.intercept
            } else {
                let (prev, _) = stack[stack.len() - 2];
                // crossing(top, line) ≤ crossing(prev, top)
                cmp_products(
                    line.intercept - top.intercept,
                    prev.slope - top.slope,
                    top.intercept - prev.intercept,
                    top.slope - line.slope,
                ) != Ordering::Greater
            };
            if dominated {
                stack.pop();
            } else {
                break;
            }
        }
        let start = match stack.last() {
            None => 0.0,
            Some(&(top, _)) => (line.intercept - top.intercept) / (top.slope - line.slope),
        };
        stack.push((line, start));
    }

    let mut entries = Vec::with_capacity(stack.len());
    for (i, &(line, start)) in stack.iter().enumerate() {
        let a_high = stack.get(i + 1).map_or(f64::INFINITY, |&(_, s)| s);
        entries.push(SelectionPathEntry {
            a_low: start,
            a_high,
            active: sweep.top(line.k),
        });
    }
    let lines = stack.into_iter().map(|(l, _)| l).collect();
    Ok(SelectionPath { entries, lines })
}

/// Whether `I*(A1, θ) = I*(A0, θ)`, i.e. `θ` has a distinct active set
/// between the two control levels.
pub fn in_theta_k(theta: &SignalVector, sigma: f64, a0: f64, a1: f64) -> Result<bool> {
    check_a("A0", a0)?;
    check_a("A1", a1)?;
    if a0 > a1 {
        return Err(Error::Precondition(format!("A0 = {a0} must not exceed A1 = {a1}")));
    }
    Ok(active_set(theta, a1, sigma)?.active == active_set(theta, a0, sigma)?.active)
}

/// Sign assignment for generated signals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "pattern", rename_all = "kebab-case")]
pub enum SignPattern {
    #[default]
    Positive,
    Alternating,
    /// Independent fair signs drawn from a seeded stream.
    Random { seed: u64 },
    /// Explicit `±1` values, one per support coordinate.
    Explicit { signs: Vec<i8> },
}

/// A signal with support `{1, …, s}` and magnitudes just above
/// `σ·sqrt(A·ln(qn/s))`, so that `I*(A', θ) = {1, …, s}` for every `A' ≤ A`.
pub fn strong_signal_theta(n: usize, s: usize, a: f64, sigma: f64, signs: &SignPattern) -> Result<SignalVector> {
    if n == 0 || s == 0 || s > n {
        return Err(Error::invalid("s", format!("need 1 <= s <= n, got s = {s}, n = {n}")));
    }
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::invalid("A", format!("must be finite and > 0, got {a}")));
    }
    check_sigma(sigma)?;
    let q = Conventions::default().q;
    let magnitude = sigma * (a * (q * n as f64 / s as f64).ln() * (1.0 + STRONG_SIGNAL_MARGIN)).sqrt();

    let signs: Vec<f64> = match signs {
        SignPattern::Positive => vec![1.0; s],
        SignPattern::Alternating => (0..s).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect(),
        SignPattern::Random { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            (0..s).map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 }).collect()
        }
        SignPattern::Explicit { signs } => {
            if signs.len() != s {
                return Err(Error::Dimension { expected: s, got: signs.len() });
            }
            if signs.iter().any(|&v| v != 1 && v != -1) {
                return Err(Error::invalid("signs", "explicit signs must be +1 or -1"));
            }
            signs.iter().map(|&v| v as f64).collect()
        }
    };
    let mut theta = vec![0.0; n];
    for (t, sign) in theta.iter_mut().zip(signs) {
        *t = sign * magnitude;
    }
    SignalVector::new(theta)
}
