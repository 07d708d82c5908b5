use crate::error::{Error, Result};

/// Probability mass must sum to 1 within this tolerance.
pub const MASS_TOLERANCE: f64 = 1e-9;

/// Unit for entropies, mutual informations, and capacities.
///
/// All internal computation is in nats; bit values are produced by dividing
/// by ln 2 at the interface.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InfoUnit {
    Nats,
    Bits,
}

impl InfoUnit {
    /// Convert a value measured in nats into this unit.
    pub fn from_nats(self, nats: f64) -> f64 {
        match self {
            InfoUnit::Nats => nats,
            InfoUnit::Bits => nats / std::f64::consts::LN_2,
        }
    }

    /// Convert a value in this unit into nats.
    pub fn to_nats(self, value: f64) -> f64 {
        match self {
            InfoUnit::Nats => value,
            InfoUnit::Bits => value * std::f64::consts::LN_2,
        }
    }
}

/// Probability distribution over a finite set {0, ..., len - 1}.
///
/// Weights are nonnegative and sum to 1 within [`MASS_TOLERANCE`]. Inputs are
/// never renormalized silently; use [`Distribution::normalized`] when that is
/// wanted.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    weights: Vec<f64>,
}

impl Distribution {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Domain("distribution over empty set".into()));
        }
        let mut sum = 0.0;
        for (i, &w) in weights.iter().enumerate() {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::NonStochastic(format!("weight {i} is {w}")));
            }
            sum += w;
        }
        if (sum - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::NonStochastic(format!(
                "weights sum to {sum}, deviation {:.3e} exceeds {MASS_TOLERANCE:.0e}",
                (sum - 1.0).abs()
            )));
        }
        Ok(Self { weights })
    }

    /// Explicitly rescale nonnegative weights to total mass 1.
    pub fn normalized(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Domain("distribution over empty set".into()));
        }
        let mut sum = 0.0;
        for (i, &w) in weights.iter().enumerate() {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::NonStochastic(format!("weight {i} is {w}")));
            }
            sum += w;
        }
        if sum <= 0.0 {
            return Err(Error::NonStochastic("total mass is zero".into()));
        }
        Ok(Self {
            weights: weights.into_iter().map(|w| w / sum).collect(),
        })
    }

    pub fn uniform(len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::Domain("distribution over empty set".into()));
        }
        Ok(Self {
            weights: vec![1.0 / len as f64; len],
        })
    }

    pub fn point_mass(len: usize, at: usize) -> Result<Self> {
        if at >= len {
            return Err(Error::Index(format!("point mass at {at}, support size {len}")));
        }
        let mut weights = vec![0.0; len];
        weights[at] = 1.0;
        Ok(Self { weights })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Shannon entropy, with 0 log 0 read as 0.
    pub fn entropy(&self, unit: InfoUnit) -> f64 {
        unit.from_nats(entropy_nats(&self.weights))
    }
}

/// Entropy of a weight slice in nats; zero terms contribute zero.
pub(crate) fn entropy_nats(weights: &[f64]) -> f64 {
    let mut h = 0.0;
    for &w in weights {
        if w > 0.0 {
            h -= w * w.ln();
        }
    }
    h
}
