//! Uncertainty bounds on variance products: the numeric
//! Schrödinger–Robertson route for arbitrary observables, the W/F-matrix
//! closed form for the quadratic kernel family, and the specialized closed
//! forms for each named transform, all cross-checkable against each other.
//!
//! Throughout, the bound on `σ²_U σ²_V` is `F² + ¼W²` with
//! `F = ½⟨{U,V}⟩ − ⟨U⟩⟨V⟩` and `W = ⟨(1/i)[U,V]⟩`. For purely quadratic
//! kernels these reduce to matrix algebra on the kernel parameters:
//!
//! ```text
//! W = (C₁ᵀ)⁻¹ (B̃₁ − B̃₂) C₂⁻¹
//! F = (C₁ᵀ)⁻¹ (B̃₁Δ^XP + Δ^PX B̃₂ + B̃₁Δ^XX B̃₂ + Δ^PP) C₂⁻¹
//! ```

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{KtError, Result};
use crate::kernel::QuadPhaseKernel;
use crate::moments::{
    commutator_expectation, covariance, moment_set, transformed_observable, variance,
    HigherMoments, MomentSet, NumberOp, Observable, PolyObservable,
};
use crate::number::{decompose, number_moments};
use crate::signal::SampledSignal;
use crate::tol;

/// One uncertainty-relation evaluation: the variance product, the two
/// bound ingredients, and how tight the inequality sits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UrReport {
    /// σ² of the first observable.
    pub sigma2_1: f64,
    /// σ² of the second observable.
    pub sigma2_2: f64,
    /// F = ½⟨{U,V}⟩ − ⟨U⟩⟨V⟩.
    pub f_term: f64,
    /// W = ⟨(1/i)[U,V]⟩.
    pub w_term: f64,
    /// F² + ¼W².
    pub bound: f64,
    /// F² + W²: the weighting the time-frequency reference prints, carried
    /// alongside the proven ¼-weighted bound instead of silently replacing
    /// it. Only set for that transform.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound_paper_variant: Option<f64>,
    /// σ²₁·σ²₂.
    pub lhs: f64,
    /// lhs − bound; nonnegative up to quadrature tolerance.
    pub margin: f64,
    /// bound/lhs; 1 when the signal saturates the inequality (and by
    /// convention when both sides vanish).
    pub saturation: f64,
    /// [first observable, second observable, signal].
    pub labels: Vec<String>,
}

fn assemble(
    sigma2_1: f64,
    sigma2_2: f64,
    f_term: f64,
    w_term: f64,
    bound_paper_variant: Option<f64>,
    labels: Vec<String>,
) -> UrReport {
    let bound = f_term * f_term + 0.25 * w_term * w_term;
    let lhs = sigma2_1 * sigma2_2;
    let saturation = if lhs == 0.0 && bound == 0.0 {
        1.0
    } else {
        bound / lhs
    };
    UrReport {
        sigma2_1,
        sigma2_2,
        f_term,
        w_term,
        bound,
        bound_paper_variant,
        lhs,
        margin: lhs - bound,
        saturation,
        labels,
    }
}

fn require_quadratic_pair(k1: &QuadPhaseKernel, k2: &QuadPhaseKernel) -> Result<()> {
    if !k1.is_quadratic() || !k2.is_quadratic() {
        return Err(KtError::UnsupportedClosedForm(format!(
            "kernel '{}' or '{}' carries extra phases; use the generic numeric route",
            k1.label(),
            k2.label()
        )));
    }
    if k1.dim() != k2.dim() {
        return Err(KtError::UnsupportedClosedForm(format!(
            "dimensions differ: {} vs {}",
            k1.dim(),
            k2.dim()
        )));
    }
    Ok(())
}

fn inverted(m: &DMatrix<f64>, what: &str) -> Result<DMatrix<f64>> {
    m.clone()
        .try_inverse()
        .ok_or_else(|| KtError::SingularParameter(format!("{what} is not invertible")))
}

/// The commutator coefficient matrix `(C₁ᵀ)⁻¹(B̃₁ − B̃₂)C₂⁻¹` of two
/// purely quadratic kernels. Expectation-free. The scalar case is computed
/// as `(b₁−b₂)/(c₁·c₂)`, which makes the antisymmetry
/// `w(k₁,k₂) = −w(k₂,k₁)` exact in floating point.
pub fn w_matrix(k1: &QuadPhaseKernel, k2: &QuadPhaseKernel) -> Result<DMatrix<f64>> {
    require_quadratic_pair(k1, k2)?;
    if k1.dim() == 1 {
        let b1 = k1.b_quad()[(0, 0)];
        let b2 = k2.b_quad()[(0, 0)];
        let c1 = k1.c_mat()[(0, 0)];
        let c2 = k2.c_mat()[(0, 0)];
        return Ok(DMatrix::from_element(1, 1, (b1 - b2) / (c1 * c2)));
    }
    let c1t_inv = inverted(&k1.c_mat().transpose(), "C₁ᵀ")?;
    let c2_inv = inverted(k2.c_mat(), "C₂")?;
    Ok(c1t_inv * (k1.b_quad() - k2.b_quad()) * c2_inv)
}

/// The symmetrized cross-covariance matrix of two transformed observables,
/// assembled from kernel parameters and covariance blocks. `dim = 1`
/// convenience over [`f_matrix_general`].
pub fn f_matrix(
    k1: &QuadPhaseKernel,
    k2: &QuadPhaseKernel,
    m: &MomentSet,
) -> Result<DMatrix<f64>> {
    let one = |v: f64| DMatrix::from_element(1, 1, v);
    if k1.dim() != 1 || k2.dim() != 1 {
        return Err(KtError::UnsupportedClosedForm(
            "scalar moment set supplied for a multi-dimensional kernel pair".into(),
        ));
    }
    f_matrix_general(k1, k2, &one(m.dxx), &one(m.dxp), &one(m.dxp), &one(m.dpp))
}

/// `F = (C₁ᵀ)⁻¹(B̃₁Δ^XP + Δ^PX B̃₂ + B̃₁Δ^XX B̃₂ + Δ^PP)C₂⁻¹` for
/// explicitly supplied covariance blocks of any dimension.
pub fn f_matrix_general(
    k1: &QuadPhaseKernel,
    k2: &QuadPhaseKernel,
    dxx: &DMatrix<f64>,
    dxp: &DMatrix<f64>,
    dpx: &DMatrix<f64>,
    dpp: &DMatrix<f64>,
) -> Result<DMatrix<f64>> {
    require_quadratic_pair(k1, k2)?;
    let c1t_inv = inverted(&k1.c_mat().transpose(), "C₁ᵀ")?;
    let c2_inv = inverted(k2.c_mat(), "C₂")?;
    let core = k1.b_quad() * dxp + dpx * k2.b_quad() + k1.b_quad() * dxx * k2.b_quad() + dpp;
    Ok(c1t_inv * core * c2_inv)
}

/// W and F for a quadratic pair, bundled.
#[derive(Debug, Clone, PartialEq)]
pub struct WfMatrices {
    pub w: DMatrix<f64>,
    pub f: DMatrix<f64>,
}

pub fn wf_matrices(
    k1: &QuadPhaseKernel,
    k2: &QuadPhaseKernel,
    m: &MomentSet,
) -> Result<WfMatrices> {
    Ok(WfMatrices {
        w: w_matrix(k1, k2)?,
        f: f_matrix(k1, k2, m)?,
    })
}

/// Uncertainty relation for two purely quadratic one-dimensional kernels:
/// variances through the operator route, F and W through the matrix
/// closed form.
pub fn ur_quadratic(
    k1: &QuadPhaseKernel,
    k2: &QuadPhaseKernel,
    f: &SampledSignal,
) -> Result<UrReport> {
    require_quadratic_pair(k1, k2)?;
    let o1 = transformed_observable(k1)?;
    let o2 = transformed_observable(k2)?;
    let sigma2_1 = variance(&o1, f)?;
    let sigma2_2 = variance(&o2, f)?;
    let m = moment_set(f)?;
    let f_term = f_matrix(k1, k2, &m)?[(0, 0)];
    let w_term = w_matrix(k1, k2)?[(0, 0)];
    Ok(assemble(
        sigma2_1,
        sigma2_2,
        f_term,
        w_term,
        None,
        vec![k1.label().into(), k2.label().into(), f.label().into()],
    ))
}

/// Numeric Schrödinger–Robertson relation for arbitrary observables —
/// valid for cubic-phase observables and cross-type pairs alike. All five
/// report fields come from the double-application engine.
pub fn ur_generic<A: Observable, B: Observable>(
    o1: &A,
    o2: &B,
    f: &SampledSignal,
) -> Result<UrReport> {
    let sigma2_1 = variance(o1, f)?;
    let sigma2_2 = variance(o2, f)?;
    let f_term = covariance(o1, o2, f)?;
    let w_term = commutator_expectation(o1, o2, f)?;
    Ok(assemble(
        sigma2_1,
        sigma2_2,
        f_term,
        w_term,
        None,
        vec![o1.label().into(), o2.label().into(), f.label().into()],
    ))
}

/// [`ur_generic`] on the two cubic-phase observables of the standard
/// time-frequency transform, with the printed `F² + W²` variant reported
/// alongside the proven bound.
pub fn ur_gtf_standard(phi1: f64, phi2: f64, f: &SampledSignal) -> Result<UrReport> {
    let o1 = transformed_observable(&crate::kernel::gtf_standard(phi1)?)?;
    let o2 = transformed_observable(&crate::kernel::gtf_standard(phi2)?)?;
    let mut report = ur_generic(&o1, &o2, f)?;
    report.bound_paper_variant =
        Some(report.f_term * report.f_term + report.w_term * report.w_term);
    Ok(report)
}

/// Closed-form fractional-Fourier bound:
/// `(σ²_p sin α sin β + Δ^XP sin(α+β) + σ²_x cos α cos β)² + ¼sin²(α−β)`.
pub fn frft_bound(alpha: f64, beta: f64, m: &MomentSet) -> f64 {
    let f = m.dpp * alpha.sin() * beta.sin()
        + m.dxp * (alpha + beta).sin()
        + m.dxx * alpha.cos() * beta.cos();
    f * f + 0.25 * (alpha - beta).sin().powi(2)
}

/// The β = 0, uncorrelated special case: the bound between σ²_x and
/// σ²_{p_α} for a signal with `Δ^XP = 0`, namely
/// `(σ²_x)²cos²α + ¼sin²α`.
pub fn frft_position_bound(alpha: f64, sigma2_x: f64) -> f64 {
    (sigma2_x * alpha.cos()).powi(2) + 0.25 * alpha.sin().powi(2)
}

/// Closed-form bound for a pair of linear canonical transforms with
/// parameters `(a, b, ·, d)` (the kernel never sees `c`, so neither does
/// the bound):
/// `(a₁a₂σ²_x + b₁b₂σ²_p + (a₁b₂+a₂b₁)Δ^XP)² + ¼(a₁b₂−a₂b₁)²`.
pub fn lct_bound(m1: (f64, f64, f64), m2: (f64, f64, f64), m: &MomentSet) -> f64 {
    let (a1, b1, _) = m1;
    let (a2, b2, _) = m2;
    let f = a1 * a2 * m.dxx + b1 * b2 * m.dpp + (a1 * b2 + a2 * b1) * m.dxp;
    let w = a1 * b2 - a2 * b1;
    f * f + 0.25 * w * w
}

/// Closed-form bound for a pair of fractional squeezing transforms at a
/// common `θ`.
///
/// The cross term carries `cos θ·sinh(α+β)`: expanding the covariance of
/// the transformed observables
/// `p̂_t = p̂ sinh t cos θ + x̂(cosh t + sinh t sin θ)` bilinearly gives
///
/// ```text
/// F = σ²_p sinh α sinh β cos²θ
///   + Δ^XP (cos θ·sinh(α+β) + sinh α sinh β sin 2θ)
///   + σ²_x (cosh α + sinh α sin θ)(cosh β + sinh β sin θ) ,
/// ```
///
/// which is also exactly what the W/F matrix algebra produces from the
/// kernel parameters; `ur_quadratic` pins this form.
pub fn squeeze_bound(alpha: f64, beta: f64, theta: f64, m: &MomentSet) -> Result<f64> {
    let ct = theta.cos();
    if ct.abs() < tol::KERNEL_DEGENERACY {
        return Err(KtError::SingularParameter(format!(
            "cos θ = {ct:.3e} at θ = {theta}"
        )));
    }
    let st = theta.sin();
    let f = m.dpp * alpha.sinh() * beta.sinh() * ct * ct
        + m.dxp * (ct * (alpha + beta).sinh() + alpha.sinh() * beta.sinh() * (2.0 * theta).sin())
        + m.dxx * (alpha.cosh() + alpha.sinh() * st) * (beta.cosh() + beta.sinh() * st);
    let w = ct * (beta - alpha).sinh();
    Ok(f * f + 0.25 * w * w)
}

/// Both weightings of the closed-form time-frequency bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GtfClosedForm {
    /// Cov(p̂_{φ₁}, p̂_{φ₂}), the F term.
    pub f_term: f64,
    /// sin(φ₂ − φ₁), the W term.
    pub w_term: f64,
    /// F² + ¼W²: the Schrödinger–Robertson weighting (normative here).
    pub bound: f64,
    /// F² + W²: the weighting printed in the transform's reference.
    pub bound_paper_variant: f64,
}

/// Closed-form bound for the standard cubic-phase time-frequency pair.
///
/// The covariance expands bilinearly over
/// `p̂_φ = p̂ sin φ + x̂ cos φ − 3x̂² sin φ`:
///
/// ```text
/// Cov = (σ²_p − 6·Cov(x̂²,p̂) + 9·σ²_{x²})·sin φ₁ sin φ₂
///     + σ²_x·cos φ₁ cos φ₂
///     + (Δ^XP − 3·Cov(x̂,x̂²))·sin(φ₁+φ₂) .
/// ```
///
/// The `x̂²`–`p̂` cross term appears twice in the expansion, hence the
/// factor 6; with that factor `gtf_bound(φ, φ, …)` is exactly the variance
/// of `p̂_φ`, which pins the coefficient.
pub fn gtf_bound(phi1: f64, phi2: f64, m: &MomentSet, hm: &HigherMoments) -> GtfClosedForm {
    let f_term = (m.dpp - 6.0 * hm.cov_x2_p + 9.0 * hm.var_x2) * phi1.sin() * phi2.sin()
        + m.dxx * phi1.cos() * phi2.cos()
        + (m.dxp - 3.0 * hm.cov_x_x2) * (phi1 + phi2).sin();
    let w_term = (phi2 - phi1).sin();
    GtfClosedForm {
        f_term,
        w_term,
        bound: f_term * f_term + 0.25 * w_term * w_term,
        bound_paper_variant: f_term * f_term + w_term * w_term,
    }
}

/// Momentum–photon-number uncertainty relation: `σ²_p` through the
/// operator engine, `σ²_n` through the number decomposition, `F` through
/// `½⟨{p̂,n̂}⟩ − p̄n̄` with `n̂` applied as `(x̂²+p̂²−1)/2`, and the
/// commutator term `W = ⟨(1/i)[p̂,n̂]⟩ = −x̄` evaluated numerically.
pub fn pn_bound(f: &SampledSignal, n_max: usize) -> Result<UrReport> {
    let d = decompose(f, n_max)?;
    let (_, n_var) = number_moments(&d)?;
    let p = PolyObservable::momentum();
    let sigma2_p = variance(&p, f)?;
    let f_term = covariance(&p, &NumberOp, f)?;
    let w_term = commutator_expectation(&p, &NumberOp, f)?;
    Ok(assemble(
        sigma2_p,
        n_var,
        f_term,
        w_term,
        None,
        vec!["p".into(), "n".into(), f.label().into()],
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use crate::kernel::{gtf_standard, make_frft, make_lct, make_squeeze};
    use crate::moments::{expectation, higher_moments};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn grid() -> Grid {
        Grid::new(1024, 10.0).unwrap()
    }

    fn ground() -> SampledSignal {
        SampledSignal::hermite(0, grid()).unwrap()
    }

    fn two_level() -> SampledSignal {
        SampledSignal::hermite(0, grid())
            .unwrap()
            .add(&SampledSignal::hermite(1, grid()).unwrap())
            .unwrap()
            .normalized()
            .unwrap()
    }

    fn gaussian_moments() -> MomentSet {
        MomentSet {
            mean_x: 0.0,
            mean_p: 0.0,
            dxx: 0.5,
            dpp: 0.5,
            dxp: 0.0,
            r_xp: 0.0,
        }
    }

    #[test]
    fn w_matrix_closed_forms() {
        // FrFT: W = sin(β − α)
        let (alpha, beta) = (0.9, 0.3);
        let w = w_matrix(&make_frft(alpha).unwrap(), &make_frft(beta).unwrap()).unwrap()[(0, 0)];
        assert_abs_diff_eq!(w, (beta - alpha).sin(), epsilon = 1e-12);

        // LCT: W = a₁b₂ − a₂b₁
        let w = w_matrix(
            &make_lct(0.0, 1.0, 0.0).unwrap(),
            &make_lct(1.0, 1.0, 1.0).unwrap(),
        )
        .unwrap()[(0, 0)];
        assert_abs_diff_eq!(w, -1.0, epsilon = 1e-12);

        // squeezing: W = cos θ·sinh(β − α)
        let w = w_matrix(
            &make_squeeze(0.5, 0.0).unwrap(),
            &make_squeeze(1.5, 0.0).unwrap(),
        )
        .unwrap()[(0, 0)];
        assert_abs_diff_eq!(w, 1.0f64.sinh(), epsilon = 1e-12);
    }

    #[test]
    fn w_antisymmetry_is_exact_for_scalars() {
        let k1 = make_squeeze(0.7, 0.3).unwrap();
        let k2 = make_squeeze(1.9, 0.3).unwrap();
        let w12 = w_matrix(&k1, &k2).unwrap()[(0, 0)];
        let w21 = w_matrix(&k2, &k1).unwrap()[(0, 0)];
        assert_eq!(w12, -w21);
    }

    #[test]
    fn extra_phase_kernels_are_rejected_from_the_closed_form() {
        let k1 = gtf_standard(0.9).unwrap();
        let k2 = make_frft(0.9).unwrap();
        assert!(matches!(
            w_matrix(&k1, &k2),
            Err(KtError::UnsupportedClosedForm(_))
        ));
    }

    #[test]
    fn f_matrix_closed_forms_on_gaussian_moments() {
        let m = gaussian_moments();
        // coincident FrFT angles: F = σ²_x
        let f = f_matrix(&make_frft(0.7).unwrap(), &make_frft(0.7).unwrap(), &m).unwrap()[(0, 0)];
        assert_abs_diff_eq!(f, 0.5, epsilon = 1e-12);
        // distinct angles: F = ½cos(α−β)
        let (alpha, beta) = (1.1, 0.4);
        let f =
            f_matrix(&make_frft(alpha).unwrap(), &make_frft(beta).unwrap(), &m).unwrap()[(0, 0)];
        assert_abs_diff_eq!(f, 0.5 * (alpha - beta).cos(), epsilon = 1e-12);
        // LCT pair (0,1,·,0), (1,1,·,1): F = b₁b₂σ²_p = ½
        let f = f_matrix(
            &make_lct(0.0, 1.0, 0.0).unwrap(),
            &make_lct(1.0, 1.0, 1.0).unwrap(),
            &m,
        )
        .unwrap()[(0, 0)];
        assert_abs_diff_eq!(f, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn matrix_route_reduces_to_scalars_in_dim_two() {
        // block-diagonal 2-D kernels acting as independent scalar FrFTs
        use nalgebra::dmatrix;
        let (a1, a2) = (0.9_f64, 0.4_f64);
        let (b1, b2) = (0.3_f64, 1.3_f64);
        let quad = |u: f64, v: f64| {
            QuadPhaseKernel::quadratic(
                dmatrix![u.cos()/u.sin(), 0.0; 0.0, v.cos()/v.sin()],
                dmatrix![u.cos()/u.sin(), 0.0; 0.0, v.cos()/v.sin()],
                dmatrix![1.0/u.sin(), 0.0; 0.0, 1.0/v.sin()],
                "frft⊗frft",
            )
            .unwrap()
        };
        let w = w_matrix(&quad(a1, a2), &quad(b1, b2)).unwrap();
        assert_abs_diff_eq!(w[(0, 0)], (b1 - a1).sin(), epsilon = 1e-12);
        assert_abs_diff_eq!(w[(1, 1)], (b2 - a2).sin(), epsilon = 1e-12);
        assert!(w[(0, 1)].abs() < 1e-14 && w[(1, 0)].abs() < 1e-14);
        // antisymmetry at matrix level
        let w21 = w_matrix(&quad(b1, b2), &quad(a1, a2)).unwrap();
        assert!((w.clone() + w21.transpose()).abs().max() < 1e-12);
    }

    #[test]
    fn gaussian_saturates_frft_pairs() {
        let r = ur_quadratic(
            &make_frft(0.9).unwrap(),
            &make_frft(0.3).unwrap(),
            &ground(),
        )
        .unwrap();
        assert_abs_diff_eq!(r.lhs, 0.25, epsilon = 1e-7);
        assert_abs_diff_eq!(r.bound, 0.25, epsilon = 1e-7);
        assert!(r.margin.abs() < 1e-7);
        assert_abs_diff_eq!(r.saturation, 1.0, epsilon = 1e-6);
    }

    #[test]
    fn canonical_pair_is_saturated_by_the_gaussian() {
        let r = ur_generic(
            &PolyObservable::position(),
            &PolyObservable::momentum(),
            &ground(),
        )
        .unwrap();
        assert_abs_diff_eq!(r.lhs, 0.25, epsilon = 1e-8);
        assert_abs_diff_eq!(r.bound, 0.25, epsilon = 1e-8);
        assert_abs_diff_eq!(r.w_term, 1.0, epsilon = 1e-8);
    }

    #[test]
    fn generic_route_on_cubic_observables() {
        let (phi1, phi2) = (0.4, 1.2);
        let r = ur_gtf_standard(phi1, phi2, &ground()).unwrap();
        assert_abs_diff_eq!(r.w_term, (phi2 - phi1).sin(), epsilon = 1e-7);
        assert!(r.margin >= -1e-7 * r.lhs.max(1.0));
        let pv = r.bound_paper_variant.unwrap();
        assert_abs_diff_eq!(
            pv - r.bound,
            0.75 * r.w_term * r.w_term,
            epsilon = 1e-12
        );
    }

    #[test]
    fn frft_bound_closed_forms() {
        let m = gaussian_moments();
        for (alpha, beta) in [(0.3, 2.6), (0.9, 0.3), (1.9, 1.1)] {
            assert_abs_diff_eq!(frft_bound(alpha, beta, &m), 0.25, epsilon = 1e-12);
        }
        // β = 0, R = 0 collapse, as algebra
        let mut m2 = gaussian_moments();
        m2.dxx = 0.8;
        for alpha in [0.3, 0.7, 1.1, 1.9, 2.6] {
            let full = frft_bound(alpha, 0.0, &m2);
            let special = frft_position_bound(alpha, m2.dxx);
            assert!(
                (full - special).abs() <= 1e-12 * special.abs(),
                "α = {alpha}"
            );
        }
    }

    #[test]
    fn lct_bound_closed_forms() {
        let m = gaussian_moments();
        assert_abs_diff_eq!(
            lct_bound((0.0, 1.0, 0.0), (1.0, 1.0, 1.0), &m),
            0.5,
            epsilon = 1e-12
        );
        // identical parameters: commutator part vanishes
        let b = lct_bound((1.5, 0.7, 0.2), (1.5, 0.7, 0.2), &m);
        let f = 1.5 * 1.5 * 0.5 + 0.7 * 0.7 * 0.5;
        assert_abs_diff_eq!(b, f * f, epsilon = 1e-12);
        assert_abs_diff_eq!(
            lct_bound((2.0, 1.0, 0.0), (0.0, 1.0, 0.0), &m),
            1.25,
            epsilon = 1e-12
        );
    }

    #[test]
    fn squeeze_bound_closed_forms() {
        let m = gaussian_moments();
        // α = β: commutator term vanishes
        let b = squeeze_bound(0.8, 0.8, 0.3, &m).unwrap();
        let f_only = {
            let st = 0.3_f64.sin();
            let ct = 0.3_f64.cos();
            let f = 0.5 * (0.8_f64.sinh() * ct).powi(2)
                + 0.5 * (0.8_f64.cosh() + 0.8_f64.sinh() * st).powi(2);
            f * f
        };
        assert_abs_diff_eq!(b, f_only, epsilon = 1e-12);

        // θ = 0 hyperbolic identities: F = ½(sinh α sinh β + cosh α cosh β)
        // = ½cosh(α+β), W = sinh(β−α)
        let (alpha, beta) = (0.5, 1.0);
        let b = squeeze_bound(alpha, beta, 0.0, &m).unwrap();
        let expected =
            0.25 * (alpha + beta).cosh().powi(2) + 0.25 * (alpha - beta).sinh().powi(2);
        assert_abs_diff_eq!(b, expected, epsilon = 1e-12);

        assert!(matches!(
            squeeze_bound(0.5, 1.0, std::f64::consts::FRAC_PI_2, &m),
            Err(KtError::SingularParameter(_))
        ));
    }

    #[test]
    fn closed_forms_match_the_quadratic_route() {
        let f = SampledSignal::gaussian(0.0, FRAC_1_SQRT_2, 1.0, 0.0, grid()).unwrap();
        let m = moment_set(&f).unwrap();

        let (alpha, beta) = (0.9, 0.3);
        let r = ur_quadratic(&make_frft(alpha).unwrap(), &make_frft(beta).unwrap(), &f).unwrap();
        let closed = frft_bound(alpha, beta, &m);
        assert!((r.bound - closed).abs() <= 1e-7 * closed.max(1.0));

        let (m1, m2) = ((0.0, 1.0, 0.0), (1.0, 1.0, 1.0));
        let r = ur_quadratic(
            &make_lct(m1.0, m1.1, m1.2).unwrap(),
            &make_lct(m2.0, m2.1, m2.2).unwrap(),
            &f,
        )
        .unwrap();
        let closed = lct_bound(m1, m2, &m);
        assert!((r.bound - closed).abs() <= 1e-7 * closed.max(1.0));
        assert!(r.margin >= -1e-7 * r.lhs.max(1.0));

        let theta = 0.3;
        let r = ur_quadratic(
            &make_squeeze(alpha, theta).unwrap(),
            &make_squeeze(beta, theta).unwrap(),
            &f,
        )
        .unwrap();
        let closed = squeeze_bound(alpha, beta, theta, &m).unwrap();
        assert!((r.bound - closed).abs() <= 1e-7 * closed.max(1.0));
    }

    #[test]
    fn gtf_closed_form_agrees_with_the_generic_engine() {
        // shifted chirped Gaussian: Cov(x̂², p̂) = 1 ≠ 0, which pins the
        // factor-6 cross term
        let f = SampledSignal::gaussian(1.0, FRAC_1_SQRT_2, 1.0, 0.0, grid()).unwrap();
        let m = moment_set(&f).unwrap();
        let hm = higher_moments(&f).unwrap();
        assert_abs_diff_eq!(hm.cov_x2_p, 1.0, epsilon = 1e-7);

        let (phi1, phi2) = (0.7, 1.8);
        let closed = gtf_bound(phi1, phi2, &m, &hm);
        let generic = ur_gtf_standard(phi1, phi2, &f).unwrap();
        assert_abs_diff_eq!(closed.f_term, generic.f_term, epsilon = 1e-6);
        assert_abs_diff_eq!(closed.w_term, generic.w_term, epsilon = 1e-7);

        // φ₁ = φ₂: the bound is the squared variance of p̂_φ
        let closed = gtf_bound(phi1, phi1, &m, &hm);
        let o = transformed_observable(&gtf_standard(phi1).unwrap()).unwrap();
        let var = variance(&o, &f).unwrap();
        assert_abs_diff_eq!(closed.bound, var * var, epsilon = 1e-5);
        assert_eq!(closed.w_term, 0.0);
    }

    #[test]
    fn gtf_bound_on_the_ground_state() {
        // φ₁ = 0, φ₂ = π/2 on ψ₀: Cov = 0, so the two variants are the
        // pure commutator weightings
        let m = gaussian_moments();
        let hm = HigherMoments {
            mean_x2: 0.5,
            mean_x3: 0.0,
            mean_x4: 0.75,
            var_x2: 0.5,
            cov_x2_p: 0.0,
            cov_x_x2: 0.0,
        };
        let b = gtf_bound(0.0, std::f64::consts::FRAC_PI_2, &m, &hm);
        assert_abs_diff_eq!(b.f_term, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(b.bound, 0.25, epsilon = 1e-12);
        assert_abs_diff_eq!(b.bound_paper_variant, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn pn_bound_reference_cases() {
        // number eigenstates: σ²_n = 0 and the bound collapses
        let r = pn_bound(&ground(), 8).unwrap();
        assert!(r.sigma2_2.abs() < 1e-10);
        assert!(r.lhs.abs() < 1e-10);
        assert!(r.bound.abs() < 1e-10);

        let f3 = SampledSignal::hermite(3, grid()).unwrap();
        let r = pn_bound(&f3, 10).unwrap();
        assert!(r.sigma2_2.abs() < 1e-10);
        assert!(r.margin.abs() < 1e-10);

        // two-level state: σ²_n = ¼, commutator term x̄²/4 = ⅛
        let r = pn_bound(&two_level(), 8).unwrap();
        assert_abs_diff_eq!(r.sigma2_2, 0.25, epsilon = 1e-8);
        assert_abs_diff_eq!(r.sigma2_1, 1.0, epsilon = 1e-7);
        assert_abs_diff_eq!(0.25 * r.w_term * r.w_term, 0.125, epsilon = 1e-6);
        assert!(r.lhs >= r.bound - 1e-9);

        // the numeric commutator equals −x̄ computed independently
        let x_mean = expectation(&PolyObservable::position(), &two_level()).unwrap();
        assert_abs_diff_eq!(r.w_term, -x_mean, epsilon = 1e-6);
    }

    #[test]
    fn pn_bound_rejects_insufficient_basis() {
        let f = SampledSignal::hermite(5, grid()).unwrap();
        assert!(matches!(
            pn_bound(&f, 3),
            Err(KtError::InsufficientBasis { .. })
        ));
    }

    #[test]
    fn report_serialization_shape() {
        let r = ur_generic(
            &PolyObservable::position(),
            &PolyObservable::momentum(),
            &ground(),
        )
        .unwrap();
        let text = serde_json::to_string(&r).unwrap();
        assert!(text.contains("\"sigma2_1\":"));
        assert!(!text.contains("bound_paper_variant"));
        let r = ur_gtf_standard(0.4, 1.2, &ground()).unwrap();
        let text = serde_json::to_string(&r).unwrap();
        assert!(text.contains("bound_paper_variant"));
    }
}
