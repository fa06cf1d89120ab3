//! Uniform one-dimensional sampling grids.

use crate::error::{KtError, Result};
use serde::{Deserialize, Serialize};

/// A uniform grid of `n_points` samples over the half-open interval
/// `[-half_width, half_width)`, so sample `i` sits at
/// `xᵢ = -half_width + i·spacing`.
///
/// The half-open convention matches discrete-Fourier periodicity exactly,
/// which is what makes the spectral derivative and the trapezoid rule (equal
/// to the rectangle rule for decaying periodic extensions) spectrally
/// accurate here.
///
/// ```
/// use ktur::Grid;
/// let g = Grid::new(1024, 10.0).unwrap();
/// assert_eq!(g.spacing(), 20.0 / 1024.0);
/// assert_eq!(g.coord(0), -10.0);
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    n_points: usize,
    half_width: f64,
    spacing: f64,
}

impl Grid {
    /// Smallest admissible grid.
    pub const MIN_POINTS: usize = 8;

    pub fn new(n_points: usize, half_width: f64) -> Result<Self> {
        if n_points < Self::MIN_POINTS {
            return Err(KtError::InvalidGrid(format!(
                "n_points = {n_points}, need at least {}",
                Self::MIN_POINTS
            )));
        }
        if !(half_width > 0.0) || !half_width.is_finite() {
            return Err(KtError::InvalidGrid(format!(
                "half_width = {half_width}, need a positive finite value"
            )));
        }
        Ok(Grid {
            n_points,
            half_width,
            spacing: 2.0 * half_width / n_points as f64,
        })
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Coordinate of sample `i`.
    pub fn coord(&self, i: usize) -> f64 {
        -self.half_width + i as f64 * self.spacing
    }

    pub fn coords(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(|i| self.coord(i))
    }

    /// Largest wavenumber the grid resolves, `π/Δ`.
    pub fn nyquist(&self) -> f64 {
        std::f64::consts::PI / self.spacing
    }

    /// Short human-readable form used in error messages.
    pub fn describe(&self) -> String {
        format!("({}, {})", self.n_points, self.half_width)
    }
}
