//! The quadratic-phase kernel family and its four named members
//! (fractional Fourier, linear canonical, fractional squeezing,
//! generalized time-frequency), plus direct quadrature application and
//! composition/unitarity checkers.
//!
//! Every kernel here has the pure-phase form
//!
//! ```text
//! K(p, x) = prefactor · exp[ i( ½ p·a_quad·p + extra_p(p)
//!                             + ½ x·b_quad·x + extra_x(x) − p·c_mat·x ) ]
//! ```
//!
//! with real symmetric `a_quad`, `b_quad`, nonsingular `c_mat`, and a
//! complex prefactor constrained by norm preservation to
//! `|prefactor|²·(2π)ⁿ·|det c_mat| = 1`. Grids are one-dimensional; the
//! matrices exist so the commutator/covariance algebra in
//! [`crate::bounds`] works at any dimension.
//!
//! Transforms are applied by direct `O(N·M)` summation of the kernel
//! against the signal. There is deliberately no chirp-FFT fast path: the
//! cubic phases of the time-frequency kernel break the chirp
//! decomposition, and at desk scale the direct sum runs in seconds.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{DegenerateLimit, KtError, Result};
use crate::grid::Grid;
use crate::poly::RealPoly;
use crate::signal::{edge_to_peak_ratio, SampledSignal};
use crate::tol;

/// A member of the quadratic-phase kernel family, optionally carrying
/// polynomial extra phases in each variable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "KernelJson", try_from = "KernelJson")]
pub struct QuadPhaseKernel {
    dim: usize,
    a_quad: DMatrix<f64>,
    b_quad: DMatrix<f64>,
    c_mat: DMatrix<f64>,
    prefactor: Complex64,
    extra_x_phase: Option<RealPoly>,
    extra_p_phase: Option<RealPoly>,
    label: String,
}

impl QuadPhaseKernel {
    /// General quadratic kernel in any dimension, with the real positive
    /// prefactor `√(|det C|/(2π)ⁿ)` fixed by norm preservation.
    pub fn quadratic(
        a_quad: DMatrix<f64>,
        b_quad: DMatrix<f64>,
        c_mat: DMatrix<f64>,
        label: impl Into<String>,
    ) -> Result<Self> {
        let dim = c_mat.nrows();
        let det = c_mat.clone().determinant();
        let prefactor = Complex64::new(
            (det.abs() / (2.0 * PI).powi(dim as i32)).sqrt(),
            0.0,
        );
        Self::build(dim, a_quad, b_quad, c_mat, prefactor, None, None, label)
    }

    #[allow(clippy::too_many_arguments)]
    fn build(
        dim: usize,
        a_quad: DMatrix<f64>,
        b_quad: DMatrix<f64>,
        c_mat: DMatrix<f64>,
        prefactor: Complex64,
        extra_x_phase: Option<RealPoly>,
        extra_p_phase: Option<RealPoly>,
        label: impl Into<String>,
    ) -> Result<Self> {
        let k = QuadPhaseKernel {
            dim,
            a_quad,
            b_quad,
            c_mat,
            prefactor,
            extra_x_phase: extra_x_phase.filter(|p| !p.is_zero()),
            extra_p_phase: extra_p_phase.filter(|p| !p.is_zero()),
            label: label.into(),
        };
        k.validate()?;
        Ok(k)
    }

    fn validate(&self) -> Result<()> {
        let n = self.dim;
        for (name, m) in [
            ("a_quad", &self.a_quad),
            ("b_quad", &self.b_quad),
            ("c_mat", &self.c_mat),
        ] {
            if m.nrows() != n || m.ncols() != n {
                return Err(KtError::InvalidGrid(format!(
                    "kernel matrix {name} is {}×{}, expected {n}×{n}",
                    m.nrows(),
                    m.ncols()
                )));
            }
        }
        for (name, m) in [("a_quad", &self.a_quad), ("b_quad", &self.b_quad)] {
            let defect = (m - m.transpose()).abs().max();
            if defect > tol::MATRIX_SYMMETRY {
                return Err(KtError::SingularParameter(format!(
                    "{name} not symmetric (defect {defect:.3e})"
                )));
            }
        }
        let det = self.c_mat.clone().determinant();
        if det.abs() <= 1e-12 {
            return Err(KtError::SingularParameter(format!(
                "c_mat is singular (det = {det:.3e})"
            )));
        }
        let defect = self.parseval_defect();
        if defect > tol::PREFACTOR_CONSTRAINT {
            return Err(KtError::SingularParameter(format!(
                "prefactor violates |D·det C| = 1 (defect {defect:.3e})"
            )));
        }
        Ok(())
    }

    /// `| |prefactor|²·(2π)ⁿ/|det C| − 1 |`; zero for a norm-preserving
    /// kernel (the `|D_K·det C_K| = 1` constraint with the prefactor
    /// written as `1/((2π)^{n/2}√D_K)`).
    pub fn parseval_defect(&self) -> f64 {
        let det = self.c_mat.clone().determinant();
        (self.prefactor.norm_sqr() * (2.0 * PI).powi(self.dim as i32) / det.abs() - 1.0).abs()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn a_quad(&self) -> &DMatrix<f64> {
        &self.a_quad
    }

    pub fn b_quad(&self) -> &DMatrix<f64> {
        &self.b_quad
    }

    pub fn c_mat(&self) -> &DMatrix<f64> {
        &self.c_mat
    }

    pub fn prefactor(&self) -> Complex64 {
        self.prefactor
    }

    pub fn extra_x_phase(&self) -> Option<&RealPoly> {
        self.extra_x_phase.as_ref()
    }

    pub fn extra_p_phase(&self) -> Option<&RealPoly> {
        self.extra_p_phase.as_ref()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// No extra phases: the closed-form W/F algebra applies.
    pub fn is_quadratic(&self) -> bool {
        self.extra_x_phase.is_none() && self.extra_p_phase.is_none()
    }

    /// Scalar coefficients of a one-dimensional kernel.
    pub(crate) fn scalars(&self) -> Result<(f64, f64, f64)> {
        if self.dim != 1 {
            return Err(KtError::UnsupportedDimension(self.dim));
        }
        Ok((self.a_quad[(0, 0)], self.b_quad[(0, 0)], self.c_mat[(0, 0)]))
    }

    /// Kernel value `K(p, x)` for a one-dimensional kernel.
    pub fn eval(&self, p: f64, x: f64) -> Complex64 {
        debug_assert_eq!(self.dim, 1, "eval is defined for 1-D kernels");
        let a = self.a_quad[(0, 0)];
        let b = self.b_quad[(0, 0)];
        let c = self.c_mat[(0, 0)];
        let mut phase = 0.5 * a * p * p + 0.5 * b * x * x - p * c * x;
        if let Some(ep) = &self.extra_p_phase {
            phase += ep.eval(p);
        }
        if let Some(ex) = &self.extra_x_phase {
            phase += ex.eval(x);
        }
        self.prefactor * Complex64::from_polar(1.0, phase)
    }
}

/// Principal-branch square root; argument lands in (−π/2, π/2].
fn sqrt_principal(z: Complex64) -> Complex64 {
    z.sqrt()
}

/// Fractional Fourier kernel of angle `alpha` (radians):
/// coefficients `a = b = cot α`, `c = 1/sin α`, prefactor
/// `√((1 − i cot α)/2π)` on the principal branch. `α = π/2` is the
/// ordinary Fourier transform.
///
/// Angles with `|sin α|` below [`tol::KERNEL_DEGENERACY`] are rejected with
/// the exact limit map: identity at α ≡ 0, parity at α ≡ π (mod 2π).
pub fn make_frft(alpha: f64) -> Result<QuadPhaseKernel> {
    let s = alpha.sin();
    if s.abs() < tol::KERNEL_DEGENERACY {
        let r = alpha.rem_euclid(2.0 * PI);
        let limit = if (r - PI).abs() < 1.0 {
            DegenerateLimit::Parity
        } else {
            DegenerateLimit::Identity
        };
        return Err(KtError::DegenerateKernel { limit });
    }
    let cot = alpha.cos() / s;
    let prefactor = sqrt_principal(Complex64::new(1.0, -cot) / (2.0 * PI));
    QuadPhaseKernel::build(
        1,
        DMatrix::from_element(1, 1, cot),
        DMatrix::from_element(1, 1, cot),
        DMatrix::from_element(1, 1, 1.0 / s),
        prefactor,
        None,
        None,
        format!("frft({alpha})"),
    )
}

/// One-dimensional linear canonical kernel for matrix parameters
/// `(a, b, ·, d)`: coefficients `a_quad = d/b`, `b_quad = a/b`,
/// `c = 1/b`, prefactor `√(1/(2πib))`.
///
/// The third matrix parameter `c` of `M = (a, b, c, d)` never enters the
/// kernel and is not taken. `b ≈ 0` is the scaling/chirp limit, which has
/// no integral kernel.
pub fn make_lct(a: f64, b: f64, d: f64) -> Result<QuadPhaseKernel> {
    if b.abs() < tol::LCT_B_MIN {
        return Err(KtError::DegenerateKernel {
            limit: DegenerateLimit::Scaling,
        });
    }
    let prefactor = sqrt_principal(Complex64::new(0.0, 2.0 * PI * b).inv());
    QuadPhaseKernel::build(
        1,
        DMatrix::from_element(1, 1, d / b),
        DMatrix::from_element(1, 1, a / b),
        DMatrix::from_element(1, 1, 1.0 / b),
        prefactor,
        None,
        None,
        format!("lct({a},{b},{d})"),
    )
}

/// Fractional squeezing kernel with squeeze order `alpha` and phase
/// `theta`: `c = 1/(sinh α cos θ)`,
/// `b_quad = 1/(tanh α cos θ) + tan θ`,
/// `a_quad = 1/(tanh α cos θ) − tan θ`,
/// prefactor `√(1/(2πi cos θ sinh α))`. Additive in `alpha` at fixed
/// `theta`.
pub fn make_squeeze(alpha: f64, theta: f64) -> Result<QuadPhaseKernel> {
    let (sh, ch) = (alpha.sinh(), alpha.cosh());
    let (st, ct) = (theta.sin(), theta.cos());
    if ct.abs() < tol::KERNEL_DEGENERACY {
        return Err(KtError::SingularParameter(format!(
            "cos θ = {ct:.3e} at θ = {theta}"
        )));
    }
    if sh.abs() < tol::KERNEL_DEGENERACY || (sh * ct).abs() < tol::KERNEL_DEGENERACY {
        return Err(KtError::DegenerateKernel {
            limit: DegenerateLimit::Identity,
        });
    }
    let u = ch / (sh * ct); // 1/(tanh α cos θ)
    let t = st / ct;
    let prefactor = sqrt_principal(Complex64::new(0.0, 2.0 * PI * ct * sh).inv());
    QuadPhaseKernel::build(
        1,
        DMatrix::from_element(1, 1, u - t),
        DMatrix::from_element(1, 1, u + t),
        DMatrix::from_element(1, 1, 1.0 / (sh * ct)),
        prefactor,
        None,
        None,
        format!("squeeze({alpha},{theta})"),
    )
}

/// Generalized time-frequency kernel: quadratic part `a = b = 2·g(φ)`,
/// `c = 1/l(φ)`, extra phases `+f(p)` and `−f(x)`, prefactor
/// `√(1/(2πi l(φ)))`.
pub fn make_gtf(phi: f64, g_of_phi: f64, l_of_phi: f64, f_poly: RealPoly) -> Result<QuadPhaseKernel> {
    if l_of_phi.abs() < tol::KERNEL_DEGENERACY {
        return Err(KtError::DegenerateKernel {
            limit: DegenerateLimit::Identity,
        });
    }
    let prefactor = sqrt_principal(Complex64::new(0.0, 2.0 * PI * l_of_phi).inv());
    let neg = f_poly.scale(-1.0);
    QuadPhaseKernel::build(
        1,
        DMatrix::from_element(1, 1, 2.0 * g_of_phi),
        DMatrix::from_element(1, 1, 2.0 * g_of_phi),
        DMatrix::from_element(1, 1, 1.0 / l_of_phi),
        prefactor,
        Some(neg),
        Some(f_poly),
        format!("gtf({phi})"),
    )
}

/// The cubic-phase specialization `l = sin φ`, `g = ½ cot φ`, `f(x) = x³`.
pub fn gtf_standard(phi: f64) -> Result<QuadPhaseKernel> {
    let s = phi.sin();
    if s.abs() < tol::KERNEL_DEGENERACY {
        return Err(KtError::DegenerateKernel {
            limit: DegenerateLimit::Identity,
        });
    }
    let cubic = RealPoly::new(&[0.0, 0.0, 0.0, 1.0]).expect("cubic is within the degree cap");
    make_gtf(phi, 0.5 * phi.cos() / s, s, cubic)
}

/// Norms before and after a transform.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitarityReport {
    pub norm_in: f64,
    pub norm_out: f64,
    pub relative_defect: f64,
}

/// Apply `T_K[f](p_j) = Σ_i K(p_j, x_i) f(x_i) Δx` by direct quadrature.
///
/// Preconditions enforced:
/// * the signal decays at the grid boundary ([`tol::BOUNDARY_DECAY`]);
/// * the kernel phase is resolvable: over the signal's effective support
///   (samples above [`tol::SUPPORT_EPS`] of the peak) and the extreme
///   output coordinates, `|∂φ/∂x| = |b·x + extra_x′(x) − p·c|` must stay
///   below the input Nyquist rate `π/Δx`, else the quadrature would alias
///   silently.
///
/// Output samples are computed independently (data-parallel) with a fixed
/// left-to-right summation order, so results do not depend on thread count.
pub fn apply_transform(
    k: &QuadPhaseKernel,
    f: &SampledSignal,
    out_grid: Grid,
) -> Result<SampledSignal> {
    let (a, b, c) = k.scalars()?;
    let ratio = edge_to_peak_ratio(f);
    if ratio > tol::BOUNDARY_DECAY {
        return Err(KtError::AliasingRisk {
            ratio,
            allowed: tol::BOUNDARY_DECAY,
        });
    }

    let grid = f.grid();
    let dx = grid.spacing();
    let values = f.values();
    let peak = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if peak == 0.0 {
        return Ok(SampledSignal::zero(out_grid).with_label(k.label.clone()));
    }

    nyquist_guard(k, f, out_grid, b, c, peak)?;

    // x-dependent part of the phase, folded into the signal once
    let ex = k.extra_x_phase.clone();
    let weighted: Vec<Complex64> = grid
        .coords()
        .zip(values)
        .map(|(x, v)| {
            let mut phase = 0.5 * b * x * x;
            if let Some(ex) = &ex {
                phase += ex.eval(x);
            }
            v * Complex64::from_polar(1.0, phase)
        })
        .collect();

    let ep = k.extra_p_phase.clone();
    let x0 = grid.coord(0);
    let n_in = grid.n_points();
    let out_coords: Vec<f64> = out_grid.coords().collect();
    let prefactor = k.prefactor * dx;

    let row = |p: f64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        let step = Complex64::from_polar(1.0, -p * c * dx);
        // re-anchor the phase recurrence periodically to stop drift
        const CHUNK: usize = 4096;
        let mut i = 0;
        while i < n_in {
            let hi = (i + CHUNK).min(n_in);
            let mut cur = Complex64::from_polar(1.0, -p * c * (x0 + i as f64 * dx));
            for w in &weighted[i..hi] {
                acc += w * cur;
                cur *= step;
            }
            i = hi;
        }
        let mut phase = 0.5 * a * p * p;
        if let Some(ep) = &ep {
            phase += ep.eval(p);
        }
        prefactor * Complex64::from_polar(1.0, phase) * acc
    };

    let out_values: Vec<Complex64> = if out_coords.len() * n_in >= 1 << 16 {
        out_coords.par_iter().map(|&p| row(p)).collect()
    } else {
        out_coords.iter().map(|&p| row(p)).collect()
    };

    SampledSignal::new(out_grid, out_values, k.label.clone())
}

/// The oscillation guard described on [`apply_transform`].
fn nyquist_guard(
    k: &QuadPhaseKernel,
    f: &SampledSignal,
    out_grid: Grid,
    b: f64,
    c: f64,
    peak: f64,
) -> Result<()> {
    let grid = f.grid();
    let values = f.values();
    let cutoff = tol::SUPPORT_EPS * peak;
    let first = values.iter().position(|v| v.norm() >= cutoff);
    let last = values.iter().rposition(|v| v.norm() >= cutoff);
    let (first, last) = match (first, last) {
        (Some(a), Some(b)) => (a, b),
        _ => return Ok(()),
    };
    let exd = k.extra_x_phase.as_ref().map(|p| p.derivative());
    let p_lo = out_grid.coord(0);
    let p_hi = out_grid.coord(out_grid.n_points() - 1);
    let limit = grid.nyquist();
    let mut max_freq = 0.0;
    let mut worst_p = p_lo;
    for i in first..=last {
        let x = grid.coord(i);
        let mut q = b * x;
        if let Some(exd) = &exd {
            q += exd.eval(x);
        }
        for p in [p_lo, p_hi] {
            let freq = (q - p * c).abs();
            if freq > max_freq {
                max_freq = freq;
                worst_p = p;
            }
        }
    }
    if max_freq > limit {
        return Err(KtError::GridTooCoarse {
            worst_p,
            max_freq,
            limit,
        });
    }
    Ok(())
}

/// Norm preservation check: `‖T_K[f]‖` against `‖f‖`.
pub fn check_parseval(
    k: &QuadPhaseKernel,
    f: &SampledSignal,
    out_grid: Grid,
) -> Result<UnitarityReport> {
    let out = apply_transform(k, f, out_grid)?;
    let norm_in = f.norm();
    let norm_out = out.norm();
    let relative_defect = if norm_in == 0.0 {
        0.0
    } else {
        (norm_out - norm_in).abs() / norm_in
    };
    Ok(UnitarityReport {
        norm_in,
        norm_out,
        relative_defect,
    })
}

/// Composition defect `‖T_α[T_β[f]] − T_{α+β}[f]‖ / ‖f‖` for an additive
/// family, with explicit intermediate and output grids.
pub fn check_additivity(
    maker: impl Fn(f64) -> Result<QuadPhaseKernel>,
    alpha: f64,
    beta: f64,
    f: &SampledSignal,
    mid_grid: Grid,
    out_grid: Grid,
) -> Result<f64> {
    let k_beta = maker(beta)?;
    let k_alpha = maker(alpha)?;
    let k_sum = maker(alpha + beta)?;
    let mid = apply_transform(&k_beta, f, mid_grid)?;
    let composed = apply_transform(&k_alpha, &mid, out_grid)?;
    let direct = apply_transform(&k_sum, f, out_grid)?;
    let norm = f.norm();
    Ok(composed.sub(&direct)?.norm() / norm)
}

/// [`check_additivity`] with every grid equal to the signal's own.
pub fn check_additivity_same_grid(
    maker: impl Fn(f64) -> Result<QuadPhaseKernel>,
    alpha: f64,
    beta: f64,
    f: &SampledSignal,
) -> Result<f64> {
    check_additivity(maker, alpha, beta, f, f.grid(), f.grid())
}

/// Wire format for kernel specs.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct KernelJson {
    label: String,
    dim: usize,
    a_quad: Vec<Vec<f64>>,
    b_quad: Vec<Vec<f64>>,
    c_mat: Vec<Vec<f64>>,
    prefactor_re: f64,
    prefactor_im: f64,
    /// Coefficients low → high; empty when absent.
    extra_x_phase: Vec<f64>,
    extra_p_phase: Vec<f64>,
}

fn matrix_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

fn rows_matrix(rows: &[Vec<f64>], dim: usize) -> Result<DMatrix<f64>> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(KtError::InvalidGrid(format!(
            "kernel JSON matrix is not {dim}×{dim}"
        )));
    }
    Ok(DMatrix::from_fn(dim, dim, |i, j| rows[i][j]))
}

impl From<QuadPhaseKernel> for KernelJson {
    fn from(k: QuadPhaseKernel) -> Self {
        KernelJson {
            label: k.label.clone(),
            dim: k.dim,
            a_quad: matrix_rows(&k.a_quad),
            b_quad: matrix_rows(&k.b_quad),
            c_mat: matrix_rows(&k.c_mat),
            prefactor_re: k.prefactor.re,
            prefactor_im: k.prefactor.im,
            extra_x_phase: k
                .extra_x_phase
                .map(|p| p.coeffs().to_vec())
                .unwrap_or_default(),
            extra_p_phase: k
                .extra_p_phase
                .map(|p| p.coeffs().to_vec())
                .unwrap_or_default(),
        }
    }
}

impl TryFrom<KernelJson> for QuadPhaseKernel {
    type Error = KtError;

    fn try_from(j: KernelJson) -> Result<Self> {
        let parse_poly = |c: &[f64]| -> Result<Option<RealPoly>> {
            if c.is_empty() {
                Ok(None)
            } else {
                Ok(Some(RealPoly::new(c)?))
            }
        };
        QuadPhaseKernel::build(
            j.dim,
            rows_matrix(&j.a_quad, j.dim)?,
            rows_matrix(&j.b_quad, j.dim)?,
            rows_matrix(&j.c_mat, j.dim)?,
            Complex64::new(j.prefactor_re, j.prefactor_im),
            parse_poly(&j.extra_x_phase)?,
            parse_poly(&j.extra_p_phase)?,
            j.label,
        )
    }
}
