//! Decomposition of sampled signals into the Hermite–Gauss (photon-number)
//! basis: the discrete-domain transform `f ↦ Cₙ = ∫ ψₙ*(x) f(x) dx`, with
//! moments of the number variable taken against `|Cₙ|²`.

use num_complex::Complex64;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{KtError, Result};
use crate::grid::Grid;
use crate::signal::{hermite_half_width, hermite_ladder, SampledSignal};
use crate::tol;

/// Coefficients `C₀ … C_{n_max}` of a signal in the Hermite–Gauss basis,
/// plus the energy the truncation left behind.
#[derive(Debug, Clone, PartialEq)]
pub struct NumberDecomposition {
    coeffs: Vec<Complex64>,
    truncation_residual: f64,
    grid: Grid,
}

impl NumberDecomposition {
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn n_max(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `‖f‖² − Σ|Cₙ|²`: energy outside the truncated basis.
    pub fn truncation_residual(&self) -> f64 {
        self.truncation_residual
    }

    /// Grid the decomposition was taken on.
    pub fn grid(&self) -> Grid {
        self.grid
    }
}

impl Serialize for NumberDecomposition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("NumberDecomposition", 3)?;
        s.serialize_field("n_max", &self.n_max())?;
        s.serialize_field("residual", &self.truncation_residual)?;
        let pairs: Vec<[f64; 2]> = self.coeffs.iter().map(|c| [c.re, c.im]).collect();
        s.serialize_field("coeffs", &pairs)?;
        s.end()
    }
}

fn check_basis_fits(n_max: usize, grid: Grid) -> Result<()> {
    if n_max > tol::HERMITE_N_MAX {
        return Err(KtError::Resolution(format!(
            "n_max = {n_max} exceeds the supported maximum {}",
            tol::HERMITE_N_MAX
        )));
    }
    let needed = hermite_half_width(n_max);
    if grid.half_width() < needed {
        return Err(KtError::Resolution(format!(
            "ψ_{n_max} needs half-width ≥ {needed:.2}, grid has {}",
            grid.half_width()
        )));
    }
    Ok(())
}

/// Project `f` onto ψ₀…ψ_{n_max}: `Cₙ = ⟨ψₙ|f⟩` by quadrature.
pub fn decompose(f: &SampledSignal, n_max: usize) -> Result<NumberDecomposition> {
    let grid = f.grid();
    check_basis_fits(n_max, grid)?;
    let basis = hermite_ladder(n_max, grid);
    let dx = grid.spacing();
    let coeffs: Vec<Complex64> = basis
        .iter()
        .map(|psi| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (b, v) in psi.iter().zip(f.values()) {
                acc += v * *b;
            }
            acc * dx
        })
        .collect();
    let captured: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
    Ok(NumberDecomposition {
        coeffs,
        truncation_residual: f.norm_sq() - captured,
        grid,
    })
}

/// Mean and variance of the number variable against the discrete
/// distribution `|Cₙ|²`, renormalized by the captured energy so that the
/// truncation bias is explicit in the residual instead of hidden in the
/// moments.
pub fn number_moments(d: &NumberDecomposition) -> Result<(f64, f64)> {
    if d.truncation_residual > tol::TRUNCATION_RESIDUAL {
        return Err(KtError::InsufficientBasis {
            residual: d.truncation_residual,
            allowed: tol::TRUNCATION_RESIDUAL,
        });
    }
    let total: f64 = d.coeffs.iter().map(|c| c.norm_sqr()).sum();
    if total == 0.0 {
        return Err(KtError::InsufficientBasis {
            residual: d.truncation_residual,
            allowed: tol::TRUNCATION_RESIDUAL,
        });
    }
    let mut n_mean = 0.0;
    let mut n2_mean = 0.0;
    for (n, c) in d.coeffs.iter().enumerate() {
        let w = c.norm_sqr() / total;
        n_mean += n as f64 * w;
        n2_mean += (n as f64) * (n as f64) * w;
    }
    Ok((n_mean, n2_mean - n_mean * n_mean))
}

/// The symmetrized momentum–number covariance `½⟨{p̂,n̂}⟩ − p̄·n̄`
/// evaluated entirely in coefficient space, where `n̂` is diagonal and
/// `p̂` is tridiagonal: `⟨m|p̂|n⟩ = i√((n+1)/2)·δ_{m,n+1} − i√(n/2)·δ_{m,n-1}`.
///
/// This is the independent cross-check of the grid-side operator engine
/// used by [`crate::bounds::pn_bound`]; the two readings must agree to
/// quadrature accuracy.
pub fn momentum_number_covariance(d: &NumberDecomposition) -> Result<f64> {
    if d.truncation_residual > tol::TRUNCATION_RESIDUAL {
        return Err(KtError::InsufficientBasis {
            residual: d.truncation_residual,
            allowed: tol::TRUNCATION_RESIDUAL,
        });
    }
    let c = &d.coeffs;
    // ⟨p̂⟩ and ½⟨p̂n̂ + n̂p̂⟩ over the tridiagonal matrix elements:
    // only the m = n+1 band contributes twice the real part.
    let mut p_mean = 0.0;
    let mut sym = 0.0;
    for n in 0..c.len() - 1 {
        let amp = ((n as f64 + 1.0) / 2.0).sqrt();
        // i·amp·conj(C_{n+1})·C_n summed with its conjugate partner
        let z = (c[n + 1].conj() * c[n]) * Complex64::new(0.0, amp);
        p_mean += 2.0 * z.re;
        sym += (2.0 * n as f64 + 1.0) * z.re;
    }
    let (n_mean, _) = number_moments(d)?;
    Ok(sym - p_mean * n_mean)
}

/// Adjoint of [`decompose`]: `Σ Cₙ ψₙ` on the target grid.
pub fn reconstruct(d: &NumberDecomposition, grid: Grid) -> Result<SampledSignal> {
    check_basis_fits(d.n_max(), grid)?;
    let basis = hermite_ladder(d.n_max(), grid);
    let mut values = vec![Complex64::new(0.0, 0.0); grid.n_points()];
    for (c, psi) in d.coeffs.iter().zip(&basis) {
        for (v, b) in values.iter_mut().zip(psi) {
            *v += c * *b;
        }
    }
    SampledSignal::new(grid, values, "number-reconstruction")
}
