use crate::error::{Error, Result};

/// Observed data `X = θ + σξ` together with the noise intensity `σ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservationVector {
    x: Vec<f64>,
    sigma: f64,
}

impl ObservationVector {
    pub fn new(x: Vec<f64>, sigma: f64) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::invalid("x", "observation vector must be nonempty"));
        }
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::invalid("sigma", format!("must be finite and > 0, got {sigma}")));
        }
        if let Some(i) = x.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid("x", format!("non-finite value at index {}", i + 1)));
        }
        Ok(ObservationVector { x, sigma })
    }

    pub fn values(&self) -> &[f64] {
        &self.x
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }
}
