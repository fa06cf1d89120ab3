//! Expectation values, variances, covariance blocks, higher moments, and
//! the transformed observable `p̂_K` read off a kernel's parameters.
//!
//! Operator products are evaluated by double application (`o₁` after `o₂`,
//! and `o₂` after `o₁`) rather than symbolic normal-ordering, which treats
//! every polynomial observable uniformly. The input signal is validated
//! once per call (normalization, boundary decay); intermediates inside a
//! product chain are applied without re-checking, since a polynomial factor
//! can lift the relative edge magnitude of an otherwise healthy signal
//! above the entry gate while contributing nothing measurable.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{KtError, Result};
use crate::grid::Grid;
use crate::kernel::{apply_transform, QuadPhaseKernel};
use crate::poly::RealPoly;
use crate::signal::{
    edge_to_peak_ratio, inner_product, spectral_derivative_unchecked, SampledSignal,
};
use crate::tol;

/// A Hermitian operator that can act on sampled signals.
pub trait Observable {
    fn label(&self) -> &str;

    /// Whether the operator contains `p̂` (and therefore needs the signal
    /// to decay at the boundary).
    fn differentiates(&self) -> bool;

    /// Application without preconditions; used inside product chains.
    fn apply_raw(&self, f: &SampledSignal) -> SampledSignal;
}

/// An observable of the form `c_p·p̂ + g(x̂)` with `g` a real polynomial.
/// Real coefficients make Hermiticity automatic.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyObservable {
    p_coeff: f64,
    x_poly: RealPoly,
    label: String,
}

impl PolyObservable {
    pub fn new(p_coeff: f64, x_poly: RealPoly, label: impl Into<String>) -> Result<Self> {
        if !p_coeff.is_finite() {
            return Err(KtError::SingularParameter(format!(
                "non-finite momentum coefficient {p_coeff}"
            )));
        }
        Ok(PolyObservable {
            p_coeff,
            x_poly,
            label: label.into(),
        })
    }

    /// `x̂`
    pub fn position() -> Self {
        PolyObservable {
            p_coeff: 0.0,
            x_poly: RealPoly::x(),
            label: "x".into(),
        }
    }

    /// `p̂`
    pub fn momentum() -> Self {
        PolyObservable {
            p_coeff: 1.0,
            x_poly: RealPoly::zero(),
            label: "p".into(),
        }
    }

    /// `x̂^k`
    pub fn x_power(k: usize) -> Result<Self> {
        let mut coeffs = vec![0.0; k + 1];
        coeffs[k] = 1.0;
        Ok(PolyObservable {
            p_coeff: 0.0,
            x_poly: RealPoly::new(&coeffs)?,
            label: format!("x^{k}"),
        })
    }

    pub fn p_coeff(&self) -> f64 {
        self.p_coeff
    }

    pub fn x_poly(&self) -> &RealPoly {
        &self.x_poly
    }
}

impl Observable for PolyObservable {
    fn label(&self) -> &str {
        &self.label
    }

    fn differentiates(&self) -> bool {
        self.p_coeff != 0.0
    }

    fn apply_raw(&self, f: &SampledSignal) -> SampledSignal {
        let gx = f.mul_by_coord_fn(|x| self.x_poly.eval(x));
        if self.p_coeff == 0.0 {
            return gx;
        }
        let pf = spectral_derivative_unchecked(f).scaled(Complex64::new(self.p_coeff, 0.0));
        pf.add(&gx).expect("same grid by construction")
    }
}

/// The number operator `n̂ = (x̂² + p̂² − 1)/2`, applied as two first-order
/// momentum passes; not expressible as a [`PolyObservable`].
#[derive(Debug, Clone, Default)]
pub struct NumberOp;

impl Observable for NumberOp {
    fn label(&self) -> &str {
        "n"
    }

    fn differentiates(&self) -> bool {
        true
    }

    fn apply_raw(&self, f: &SampledSignal) -> SampledSignal {
        let ppf = spectral_derivative_unchecked(&spectral_derivative_unchecked(f));
        let x2f = f.mul_by_coord_fn(|x| x * x);
        x2f.add(&ppf)
            .and_then(|s| s.sub(f))
            .expect("same grid by construction")
            .scaled(Complex64::new(0.5, 0.0))
    }
}

fn validate_input(f: &SampledSignal, needs_decay: bool) -> Result<()> {
    let norm_sq = f.norm_sq();
    if (norm_sq - 1.0).abs() > tol::NORMALIZATION {
        return Err(KtError::NotNormalized { norm_sq });
    }
    if needs_decay {
        let ratio = edge_to_peak_ratio(f);
        if ratio > tol::BOUNDARY_DECAY {
            return Err(KtError::AliasingRisk {
                ratio,
                allowed: tol::BOUNDARY_DECAY,
            });
        }
    }
    Ok(())
}

/// Checked single application `o(f)`.
pub fn apply_observable<O: Observable>(o: &O, f: &SampledSignal) -> Result<SampledSignal> {
    if o.differentiates() {
        let ratio = edge_to_peak_ratio(f);
        if ratio > tol::BOUNDARY_DECAY {
            return Err(KtError::AliasingRisk {
                ratio,
                allowed: tol::BOUNDARY_DECAY,
            });
        }
    }
    Ok(o.apply_raw(f))
}

fn real_with_residue(z: Complex64) -> Result<(f64, f64)> {
    let residue = z.im.abs();
    if residue > tol::RESIDUE_HARD {
        return Err(KtError::HermiticityViolation {
            residue,
            allowed: tol::RESIDUE_HARD,
        });
    }
    Ok((z.re, residue))
}

/// `⟨f|o f⟩` with the imaginary residue reported alongside.
///
/// The residue is pure quadrature noise for a Hermitian `o`; above
/// [`tol::RESIDUE_HARD`] the call fails, which indicates a non-decaying or
/// otherwise unusable signal rather than roundoff.
pub fn expectation_with_residue<O: Observable>(o: &O, f: &SampledSignal) -> Result<(f64, f64)> {
    validate_input(f, o.differentiates())?;
    real_with_residue(inner_product(f, &o.apply_raw(f))?)
}

/// Real expectation value `⟨f|o f⟩`.
pub fn expectation<O: Observable>(o: &O, f: &SampledSignal) -> Result<f64> {
    expectation_with_residue(o, f).map(|(v, _)| v)
}

/// Symmetrized covariance
/// `½⟨f|(o₁o₂ + o₂o₁)f⟩ − ⟨o₁⟩⟨o₂⟩`; `covariance(o, o, f)` is the
/// variance `σ²_o`.
pub fn covariance<A: Observable, B: Observable>(
    o1: &A,
    o2: &B,
    f: &SampledSignal,
) -> Result<f64> {
    validate_input(f, o1.differentiates() || o2.differentiates())?;
    let o2f = o2.apply_raw(f);
    let o1f = o1.apply_raw(f);
    let z12 = inner_product(f, &o1.apply_raw(&o2f))?;
    let z21 = inner_product(f, &o2.apply_raw(&o1f))?;
    let (sym, _) = real_with_residue(0.5 * (z12 + z21))?;
    let (m1, _) = real_with_residue(inner_product(f, &o1f)?)?;
    let (m2, _) = real_with_residue(inner_product(f, &o2f)?)?;
    Ok(sym - m1 * m2)
}

/// Variance `σ²_o = covariance(o, o, f)`.
pub fn variance<O: Observable>(o: &O, f: &SampledSignal) -> Result<f64> {
    covariance(o, o, f)
}

/// `⟨f|(1/i)[o₁, o₂]f⟩`, evaluated by double application.
pub fn commutator_expectation<A: Observable, B: Observable>(
    o1: &A,
    o2: &B,
    f: &SampledSignal,
) -> Result<f64> {
    validate_input(f, o1.differentiates() || o2.differentiates())?;
    let z12 = inner_product(f, &o1.apply_raw(&o2.apply_raw(f)))?;
    let z21 = inner_product(f, &o2.apply_raw(&o1.apply_raw(f)))?;
    // (1/i)(z12 − z21): real part is Im(z12 − z21), residue is |Re(z12 − z21)|
    let d = z12 - z21;
    let residue = d.re.abs();
    if residue > tol::RESIDUE_HARD {
        return Err(KtError::HermiticityViolation {
            residue,
            allowed: tol::RESIDUE_HARD,
        });
    }
    Ok(d.im)
}

/// Closed form of `(1/i)[o₁, o₂]` for polynomial observables:
/// with `o_k = a_k p̂ + g_k(x̂)`, the commutator is the multiplication
/// operator `a₂·g₁′(x̂) − a₁·g₂′(x̂)`.
pub fn commutator_closed_form(o1: &PolyObservable, o2: &PolyObservable) -> Result<PolyObservable> {
    let poly = o1
        .x_poly
        .derivative()
        .scale(o2.p_coeff)
        .add(&o2.x_poly.derivative().scale(-o1.p_coeff));
    PolyObservable::new(
        0.0,
        poly,
        format!("(1/i)[{}, {}]", o1.label, o2.label),
    )
}

/// First and second moments of `x̂` and `p̂` plus their correlation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentSet {
    pub mean_x: f64,
    pub mean_p: f64,
    /// Δ^XX = σ²_x
    pub dxx: f64,
    /// Δ^PP = σ²_p
    pub dpp: f64,
    /// Δ^XP = Δ^PX (symmetrized)
    pub dxp: f64,
    /// correlation coefficient `dxp/√(dxx·dpp)`
    pub r_xp: f64,
}

/// Assemble the five second-moment quantities of a normalized signal.
pub fn moment_set(f: &SampledSignal) -> Result<MomentSet> {
    let x = PolyObservable::position();
    let p = PolyObservable::momentum();
    let mean_x = expectation(&x, f)?;
    let mean_p = expectation(&p, f)?;
    let dxx = covariance(&x, &x, f)?;
    let dpp = covariance(&p, &p, f)?;
    let dxp = covariance(&x, &p, f)?;
    let denom = (dxx * dpp).sqrt();
    let r_xp = if denom > 0.0 { dxp / denom } else { 0.0 };
    Ok(MomentSet {
        mean_x,
        mean_p,
        dxx,
        dpp,
        dxp,
        r_xp,
    })
}

/// Moments of `x̂²` and its covariances with `x̂` and `p̂` (the inputs of
/// the time-frequency bound).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HigherMoments {
    pub mean_x2: f64,
    pub mean_x3: f64,
    pub mean_x4: f64,
    /// σ²_{x²} = ⟨x⁴⟩ − ⟨x²⟩²
    pub var_x2: f64,
    pub cov_x2_p: f64,
    pub cov_x_x2: f64,
}

/// Diagonal moments by direct quadrature of `x^k·|f|²`; mixed ones through
/// the covariance engine with `o = x̂²`.
pub fn higher_moments(f: &SampledSignal) -> Result<HigherMoments> {
    validate_input(f, false)?;
    let dx = f.grid().spacing();
    let mut m = [0.0; 3]; // ⟨x²⟩, ⟨x³⟩, ⟨x⁴⟩
    for (x, v) in f.grid().coords().zip(f.values()) {
        let w = v.norm_sqr() * dx;
        let x2 = x * x;
        m[0] += x2 * w;
        m[1] += x2 * x * w;
        m[2] += x2 * x2 * w;
    }
    let x2 = PolyObservable::x_power(2)?;
    let cov_x2_p = covariance(&x2, &PolyObservable::momentum(), f)?;
    let cov_x_x2 = covariance(&PolyObservable::position(), &x2, f)?;
    Ok(HigherMoments {
        mean_x2: m[0],
        mean_x3: m[1],
        mean_x4: m[2],
        var_x2: m[2] - m[0] * m[0],
        cov_x2_p,
        cov_x_x2,
    })
}

/// The transformed observable `p̂_K` of a one-dimensional kernel: the
/// operator whose moments in the original domain equal the coordinate
/// moments of the transformed signal,
///
/// ```text
/// p̂_K = ( p̂ + b_quad·x̂ + d/dx[extra_x_phase](x̂) ) / c_mat .
/// ```
///
/// The sign of the extra-phase gradient is pinned by the named
/// constructors: `frft(α) → p̂ sin α + x̂ cos α`, `lct → b p̂ + a x̂`,
/// `squeeze → p̂ sinh α cos θ + x̂ (cosh α + sinh α sin θ)`,
/// `gtf_standard(φ) → p̂ sin φ + x̂ cos φ − 3x̂² sin φ`.
pub fn transformed_observable(k: &QuadPhaseKernel) -> Result<PolyObservable> {
    let (_, b, c) = k.scalars()?;
    let inv_c = 1.0 / c;
    let mut poly = RealPoly::new(&[0.0, b])?;
    if let Some(ex) = k.extra_x_phase() {
        poly = poly.add(&ex.derivative());
    }
    PolyObservable::new(inv_c, poly.scale(inv_c), format!("p[{}]", k.label()))
}

/// Mean and variance of the output-domain coordinate against
/// `|T_K[f]|²`, by direct quadrature on the output grid — the second,
/// transform-side route that must agree with
/// `covariance(transformed_observable(k), ·, f)`.
///
/// Moments are taken against the normalized output distribution, which
/// removes the (tiny) unitarity defect of the discrete transform.
pub fn transformed_domain_moments(
    k: &QuadPhaseKernel,
    f: &SampledSignal,
    out_grid: Grid,
) -> Result<(f64, f64)> {
    let out = apply_transform(k, f, out_grid)?;
    let dx = out_grid.spacing();
    let mut mass = 0.0;
    let mut mean = 0.0;
    for (p, v) in out_grid.coords().zip(out.values()) {
        let w = v.norm_sqr() * dx;
        mass += w;
        mean += p * w;
    }
    if mass == 0.0 {
        return Err(KtError::Resolution("transform output vanished".into()));
    }
    mean /= mass;
    let mut var = 0.0;
    for (p, v) in out_grid.coords().zip(out.values()) {
        var += (p - mean).powi(2) * v.norm_sqr() * dx;
    }
    Ok((mean, var / mass))
}
