//! Threshold projection and the eroded / intermediate / dilated designs.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::neighborhoods::NeighborhoodOperator;

/// Below this sharpness the projection is replaced by its limit `H(x) = x`.
const LINEAR_LIMIT: f64 = 1e-8;

/// One of the three realizations of the robust formulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Design {
    Eroded,
    Intermediate,
    Dilated,
}

impl Design {
    pub const ALL: [Design; 3] = [Design::Eroded, Design::Intermediate, Design::Dilated];

    pub fn name(self) -> &'static str {
        match self {
            Design::Eroded => "ero",
            Design::Intermediate => "int",
            Design::Dilated => "dil",
        }
    }

    pub fn slot(self) -> usize {
        self as usize
    }
}

impl core::str::FromStr for Design {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "ero" | "eroded" => Ok(Design::Eroded),
            "int" | "intermediate" | "blueprint" => Ok(Design::Intermediate),
            "dil" | "dilated" => Ok(Design::Dilated),
            other => Err(Error::InvalidConfig(format!("unknown design `{other}`"))),
        }
    }
}

/// Projection thresholds, ordered `eroded >= intermediate >= dilated`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdSet {
    eroded: f64,
    intermediate: f64,
    dilated: f64,
}

impl ThresholdSet {
    pub fn new(eroded: f64, intermediate: f64, dilated: f64) -> Result<Self> {
        let ok = |v: f64| v > 0.0 && v < 1.0;
        if !(ok(eroded) && ok(intermediate) && ok(dilated)) {
            return Err(Error::InvalidThresholds(format!(
                "thresholds must lie in (0, 1): {eroded}, {intermediate}, {dilated}"
            )));
        }
        if !(eroded >= intermediate && intermediate >= dilated) {
            return Err(Error::InvalidThresholds(format!(
                "need eroded >= intermediate >= dilated: {eroded}, {intermediate}, {dilated}"
            )));
        }
        Ok(Self { eroded, intermediate, dilated })
    }

    /// `[0.5 + delta, 0.5, 0.5 - delta]`.
    pub fn symmetric(delta: f64) -> Result<Self> {
        Self::new(0.5 + delta, 0.5, 0.5 - delta)
    }

    pub fn get(&self, design: Design) -> f64 {
        match design {
            Design::Eroded => self.eroded,
            Design::Intermediate => self.intermediate,
            Design::Dilated => self.dilated,
        }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.eroded, self.intermediate, self.dilated]
    }

    /// Whether the intermediate threshold sits halfway between the others.
    pub fn is_symmetric(&self) -> bool {
        ((self.eroded - self.intermediate) - (self.intermediate - self.dilated)).abs() < 1e-12
    }
}

/// Smoothed Heaviside projection of `x` with sharpness `beta` about `mu`.
pub fn heaviside(x: f64, beta: f64, mu: f64) -> f64 {
    if beta < LINEAR_LIMIT {
        return x;
    }
    let a = math::tanh(beta * mu);
    (a + math::tanh(beta * (x - mu))) / (a + math::tanh(beta * (1.0 - mu)))
}

/// Derivative of [`heaviside`] with respect to `x`.
pub fn heaviside_derivative(x: f64, beta: f64, mu: f64) -> f64 {
    if beta < LINEAR_LIMIT {
        return 1.0;
    }
    let t = math::tanh(beta * (x - mu));
    beta * (1.0 - t * t) / (math::tanh(beta * mu) + math::tanh(beta * (1.0 - mu)))
}

/// Projects a filtered field with one threshold.
pub fn project(filtered: &[f64], beta: f64, mu: f64) -> Vec<f64> {
    filtered.iter().map(|&x| heaviside(x, beta, mu)).collect()
}

/// The three projected designs.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignTriple {
    pub eroded: Vec<f64>,
    pub intermediate: Vec<f64>,
    pub dilated: Vec<f64>,
}

impl DesignTriple {
    pub fn get(&self, design: Design) -> &[f64] {
        match design {
            Design::Eroded => &self.eroded,
            Design::Intermediate => &self.intermediate,
            Design::Dilated => &self.dilated,
        }
    }
}

/// Filters `rho` and projects it at all three thresholds.
pub fn project_triple(
    rho: &[f64],
    filter: &NeighborhoodOperator,
    thresholds: &ThresholdSet,
    beta: f64,
) -> Result<(Vec<f64>, DesignTriple)> {
    let filtered = filter.apply(rho)?;
    let triple = DesignTriple {
        eroded: project(&filtered, beta, thresholds.get(Design::Eroded)),
        intermediate: project(&filtered, beta, thresholds.get(Design::Intermediate)),
        dilated: project(&filtered, beta, thresholds.get(Design::Dilated)),
    };
    Ok((filtered, triple))
}

/// Pulls a gradient with respect to a projected design back to the design
/// variables: `D^T (H'(filtered) * grad)`.
pub fn chain_to_design(
    grad_projected: &[f64],
    filtered: &[f64],
    beta: f64,
    mu: f64,
    filter: &NeighborhoodOperator,
) -> Result<Vec<f64>> {
    if grad_projected.len() != filtered.len() {
        return Err(Error::LengthMismatch { expected: filtered.len(), got: grad_projected.len() });
    }
    let scaled: Vec<f64> =
        grad_projected.iter().zip(filtered).map(|(&g, &x)| g * heaviside_derivative(x, beta, mu)).collect();
    filter.apply_transpose(&scaled)
}

/// Measure of non-discreteness: mean of `4 rho (1 - rho)`.
pub fn gray_level(rho: &[f64]) -> f64 {
    if rho.is_empty() {
        return 0.0;
    }
    rho.iter().map(|&r| 4.0 * r * (1.0 - r)).sum::<f64>() / rho.len() as f64
}
