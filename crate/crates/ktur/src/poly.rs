//! Real polynomials in one variable, coefficients stored low → high.
//!
//! These carry the non-quadratic phase terms of the generalized
//! time-frequency kernel and the position part of polynomial observables.
//! Degree is capped at 6; nothing in the supported transform family needs
//! more, and the oscillation guard's extremum search stays trivial.

use crate::error::{KtError, Result};
use serde::{Deserialize, Serialize};

/// Highest polynomial degree accepted anywhere in the crate.
pub const MAX_DEGREE: usize = 6;

/// A real polynomial `c₀ + c₁x + … + c_d x^d`, `d ≤ 6`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RealPoly {
    coeffs: Vec<f64>,
}

impl RealPoly {
    /// Build from coefficients (low → high). Trailing zeros are trimmed.
    pub fn new(coeffs: &[f64]) -> Result<Self> {
        let mut c = coeffs.to_vec();
        while c.len() > 1 && c.last() == Some(&0.0) {
            c.pop();
        }
        if c.is_empty() {
            c.push(0.0);
        }
        if c.len() - 1 > MAX_DEGREE {
            return Err(KtError::PolynomialDegree(c.len() - 1, MAX_DEGREE));
        }
        if c.iter().any(|v| !v.is_finite()) {
            return Err(KtError::PolynomialDegree(0, MAX_DEGREE));
        }
        Ok(RealPoly { coeffs: c })
    }

    pub fn zero() -> Self {
        RealPoly { coeffs: vec![0.0] }
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        RealPoly {
            coeffs: vec![0.0, 1.0],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Horner evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> RealPoly {
        if self.coeffs.len() == 1 {
            return RealPoly::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| k as f64 * c)
            .collect();
        RealPoly { coeffs }
    }

    pub fn scale(&self, s: f64) -> RealPoly {
        RealPoly {
            coeffs: self.coeffs.iter().map(|&c| c * s).collect(),
        }
    }

    pub fn add(&self, other: &RealPoly) -> RealPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = vec![0.0; n];
        for (i, c) in coeffs.iter_mut().enumerate() {
            *c = self.coeffs.get(i).copied().unwrap_or(0.0)
                + other.coeffs.get(i).copied().unwrap_or(0.0);
        }
        let mut p = RealPoly { coeffs };
        while p.coeffs.len() > 1 && p.coeffs.last() == Some(&0.0) {
            p.coeffs.pop();
        }
        p
    }
}
