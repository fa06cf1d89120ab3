//! The invariant suite behind the CLI `selftest` command: one quantitative
//! check per library guarantee, sized so the whole run stays well under a
//! minute single-threaded at the default (1024, 10) scale.
//!
//! Each check reports the measured defect and the threshold it must stay
//! under; any library error inside a check marks it failed rather than
//! aborting the run, so a too-coarse grid shows up as readable failures.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::FRAC_1_SQRT_2;

use crate::bounds::{
    frft_bound, lct_bound, pn_bound, squeeze_bound, ur_generic, ur_gtf_standard, ur_quadratic,
};
use crate::error::Result;
use crate::grid::Grid;
use crate::kernel::{
    apply_transform, check_additivity, check_additivity_same_grid, check_parseval, gtf_standard,
    make_frft, make_lct, make_squeeze,
};
use crate::moments::{
    commutator_expectation, covariance, expectation, moment_set, transformed_domain_moments,
    transformed_observable, variance, PolyObservable,
};
use crate::number::{decompose, number_moments};
use crate::signal::{inner_product, spectral_derivative, SampledSignal};

/// Outcome of one invariant check.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    /// Measured defect (whatever the check's metric is).
    pub value: f64,
    /// The defect must stay at or below this.
    pub threshold: f64,
    pub detail: String,
}

struct Suite {
    results: Vec<CheckResult>,
}

impl Suite {
    fn run(&mut self, name: &str, threshold: f64, body: impl FnOnce() -> Result<(f64, String)>) {
        let result = match body() {
            Ok((value, detail)) => CheckResult {
                name: name.into(),
                passed: value <= threshold,
                value,
                threshold,
                detail,
            },
            Err(e) => CheckResult {
                name: name.into(),
                passed: false,
                value: f64::NAN,
                threshold,
                detail: format!("error: {e}"),
            },
        };
        self.results.push(result);
    }
}

/// Run the whole suite on an `(n_points, half_width)` base grid.
pub fn run_selftest(n_points: usize, half_width: f64) -> Vec<CheckResult> {
    let mut suite = Suite {
        results: Vec::new(),
    };
    let s = &mut suite;

    let base = match Grid::new(n_points, half_width) {
        Ok(g) => g,
        Err(e) => {
            s.run("grid_construction", 0.0, || Err(e));
            return suite.results;
        }
    };

    let ground = SampledSignal::hermite(0, base);
    let two_level = ground.as_ref().ok().and_then(|g| {
        let h1 = SampledSignal::hermite(1, base).ok()?;
        g.add(&h1).ok()?.normalized().ok()
    });
    let chirped = SampledSignal::gaussian(0.0, FRAC_1_SQRT_2, 1.0, 0.0, base);

    s.run("hermite_orthonormality", 1e-8, || {
        let mut worst = 0.0_f64;
        for m in 0..=8usize {
            let fm = SampledSignal::hermite(m, base)?;
            for n in m..=8usize {
                let fn_ = SampledSignal::hermite(n, base)?;
                let ip = inner_product(&fm, &fn_)?;
                let target = if m == n { 1.0 } else { 0.0 };
                worst = worst.max((ip - target).norm());
            }
        }
        Ok((worst, "max |⟨ψ_m|ψ_n⟩ − δ_mn| for m,n ≤ 8".into()))
    });

    s.run("quadrature_linearity", 1e-12, || {
        let f = ground.as_ref().map_err(clone_err)?;
        let g = SampledSignal::hermite(1, base)?;
        let h = SampledSignal::hermite(2, base)?;
        let a = Complex64::new(0.3, -1.2);
        let b = Complex64::new(-0.7, 0.4);
        let combo = g.scaled(a).add(&h.scaled(b))?;
        let lhs = inner_product(f, &combo)?;
        let rhs = a * inner_product(f, &g)? + b * inner_product(f, &h)?;
        let scale = lhs.norm().max(1.0);
        Ok(((lhs - rhs).norm() / scale, "relative linearity defect".into()))
    });

    s.run("spectral_derivative_gaussian", 1e-8, || {
        let f = ground.as_ref().map_err(clone_err)?;
        let pf = spectral_derivative(f)?;
        let expected = f.mul_by_coord_fn(|x| x).scaled(Complex64::new(0.0, 1.0));
        let dev = pf
            .values()
            .iter()
            .zip(expected.values())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        Ok((dev, "max |p̂ψ₀ − ixψ₀|".into()))
    });

    s.run("refinement_convergence", 1e-8, || {
        let fine_grid = Grid::new(2 * n_points, half_width)?;
        let p = PolyObservable::momentum();
        let coarse = SampledSignal::hermite(3, base)?;
        let fine = SampledSignal::hermite(3, fine_grid)?;
        let vc = variance(&p, &coarse)? + expectation(&p, &coarse)?.powi(2);
        let vf = variance(&p, &fine)? + expectation(&p, &fine)?.powi(2);
        Ok((
            (vc - vf).abs() / vf.abs().max(1.0),
            "relative change of ⟨ψ₃|p̂²ψ₃⟩ under grid doubling".into(),
        ))
    });

    s.run("frft_fourier_invariance", 1e-8, || {
        let f = ground.as_ref().map_err(clone_err)?;
        let out = apply_transform(&make_frft(std::f64::consts::FRAC_PI_2)?, f, base)?;
        Ok((
            out.sub(f)?.norm() / f.norm(),
            "‖T_{π/2}ψ₀ − ψ₀‖/‖ψ₀‖".into(),
        ))
    });

    s.run("frft_hermite_eigenfunctions", 1e-6, || {
        let alpha = 0.7;
        let k = make_frft(alpha)?;
        let mut worst = 0.0_f64;
        for n in 0..=3usize {
            let f = SampledSignal::hermite(n, base)?;
            let out = apply_transform(&k, &f, base)?;
            let expected = f.scaled(Complex64::from_polar(1.0, -(n as f64) * alpha));
            worst = worst.max(out.sub(&expected)?.norm());
        }
        Ok((worst, "max ‖T_αψ_n − e^{-inα}ψ_n‖, n ≤ 3".into()))
    });

    s.run("frft_additivity", 1e-6, || {
        let f = two_level.as_ref().ok_or_else(na)?;
        let mut worst = 0.0_f64;
        // sums stay clear of π, where the target kernel degenerates
        for alpha in [0.4, 1.1, 2.3] {
            for beta in [0.3, 0.6, 1.2] {
                worst = worst.max(check_additivity_same_grid(make_frft, alpha, beta, f)?);
            }
        }
        Ok((worst, "max composition defect over a 3×3 angle lattice".into()))
    });

    s.run("squeeze_additivity", 1e-5, || {
        let f = two_level.as_ref().ok_or_else(na)?;
        let mid = Grid::new(2 * n_points, 1.6 * half_width)?;
        let out = Grid::new(2 * n_points, 2.0 * half_width)?;
        let d = check_additivity(|a| make_squeeze(a, 0.3), 0.4, 0.3, f, mid, out)?;
        Ok((d, "composition defect at (α, β, θ) = (0.4, 0.3, 0.3)".into()))
    });

    s.run("parseval_quadratic", 1e-7, || {
        let f = SampledSignal::hermite(2, base)?;
        let mut worst = check_parseval(&make_frft(1.1)?, &f, base)?.relative_defect;
        worst = worst.max(check_parseval(&make_lct(1.0, 1.0, 1.0)?, &f, base)?.relative_defect);
        let wide = Grid::new(2 * n_points, 2.0 * half_width)?;
        worst = worst.max(check_parseval(&make_squeeze(0.7, 0.3)?, &f, wide)?.relative_defect);
        Ok((worst, "max relative norm defect over the quadratic kernels".into()))
    });

    s.run("parseval_gtf", 1e-5, || {
        // the cubic phase needs a denser input grid than the base scale,
        // and an output wide enough for the exponential tails of |T f|²
        let g = Grid::new((2 * n_points).max(2048), half_width.max(12.0))?;
        let f = SampledSignal::hermite(0, g)?;
        let out = Grid::new(2 * n_points, 3.0 * half_width.max(12.0))?;
        let r = check_parseval(&gtf_standard(0.9)?, &f, out)?;
        Ok((r.relative_defect, "relative norm defect of gtf(0.9)".into()))
    });

    s.run("dual_route_variance", 1e-6, || {
        let f = chirped.as_ref().map_err(clone_err)?;
        let mut worst = 0.0_f64;
        let wide = Grid::new(2 * n_points, 2.0 * half_width)?;
        let cases: Vec<(crate::kernel::QuadPhaseKernel, Grid)> = vec![
            (make_frft(0.7)?, base),
            (make_lct(1.0, 1.0, 1.0)?, wide),
            (make_squeeze(0.7, 0.3)?, wide),
        ];
        for (k, out_grid) in cases {
            let (_, var_domain) = transformed_domain_moments(&k, f, out_grid)?;
            let var_op = variance(&transformed_observable(&k)?, f)?;
            worst = worst.max((var_domain - var_op).abs() / var_op.max(1.0));
        }
        // cubic-phase kernel at denser resolution
        let g = Grid::new((4 * n_points).max(4096), half_width.max(12.0))?;
        let fg = SampledSignal::gaussian(0.0, FRAC_1_SQRT_2, 1.0, 0.0, g)?;
        let k = gtf_standard(0.9)?;
        let out = Grid::new(2 * n_points, 6.0 * half_width)?;
        let (_, var_domain) = transformed_domain_moments(&k, &fg, out)?;
        let var_op = variance(&transformed_observable(&k)?, &fg)?;
        worst = worst.max((var_domain - var_op).abs() / var_op.max(1.0));
        Ok((worst, "max relative variance disagreement across families".into()))
    });

    s.run("gaussian_saturation", 1e-6, || {
        let f = ground.as_ref().map_err(clone_err)?;
        let r = ur_quadratic(&make_frft(0.9)?, &make_frft(0.3)?, f)?;
        let mut worst = (r.saturation - 1.0).abs();
        let rc = ur_generic(&PolyObservable::position(), &PolyObservable::momentum(), f)?;
        worst = worst.max((rc.saturation - 1.0).abs());
        Ok((worst, "|saturation − 1| for ψ₀ (FrFT pair and x̂,p̂)".into()))
    });

    s.run("margin_nonnegative", 1e-7, || {
        let mut worst = 0.0_f64;
        for f in [
            two_level.as_ref().ok_or_else(na)?,
            chirped.as_ref().map_err(clone_err)?,
        ] {
            for (alpha, beta) in [(0.4, 1.9), (1.1, 2.6)] {
                let r = ur_quadratic(&make_frft(alpha)?, &make_frft(beta)?, f)?;
                worst = worst.max(-r.margin / r.lhs.max(1.0));
            }
            let r = ur_gtf_standard(0.4, 1.2, f)?;
            worst = worst.max(-r.margin / r.lhs.max(1.0));
        }
        Ok((worst.max(0.0), "max normalized margin violation".into()))
    });

    s.run("closed_form_bounds", 1e-7, || {
        let f = chirped.as_ref().map_err(clone_err)?;
        let m = moment_set(f)?;
        let mut worst = 0.0_f64;
        let r = ur_quadratic(&make_frft(0.9)?, &make_frft(0.3)?, f)?;
        worst = worst.max((r.bound - frft_bound(0.9, 0.3, &m)).abs() / r.bound.max(1.0));
        let r = ur_quadratic(&make_lct(0.0, 1.0, 0.0)?, &make_lct(1.0, 1.0, 1.0)?, f)?;
        worst =
            worst.max((r.bound - lct_bound((0.0, 1.0, 0.0), (1.0, 1.0, 1.0), &m)).abs()
                / r.bound.max(1.0));
        let r = ur_quadratic(&make_squeeze(0.5, 0.3)?, &make_squeeze(1.0, 0.3)?, f)?;
        worst = worst
            .max((r.bound - squeeze_bound(0.5, 1.0, 0.3, &m)?).abs() / r.bound.max(1.0));
        Ok((worst, "max relative closed-form/matrix-route disagreement".into()))
    });

    s.run("real_signal_identity", 1e-7, || {
        // ⟨x̂p̂⟩ = i/2 for real signals, assembled from Cov + ½i·⟨(1/i)[x,p]⟩
        let f = SampledSignal::hermite(2, base)?;
        let x = PolyObservable::position();
        let p = PolyObservable::momentum();
        let cov = covariance(&x, &p, &f)?;
        let xbar = expectation(&x, &f)?;
        let pbar = expectation(&p, &f)?;
        let w = commutator_expectation(&x, &p, &f)?;
        let xp = Complex64::new(cov + xbar * pbar, 0.5 * w);
        Ok(((xp - Complex64::new(0.0, 0.5)).norm(), "|⟨x̂p̂⟩ − i/2| on ψ₂".into()))
    });

    s.run("gtf_commutator", 1e-7, || {
        let f = chirped.as_ref().map_err(clone_err)?;
        let (phi1, phi2) = (0.4, 1.2);
        let o1 = transformed_observable(&gtf_standard(phi1)?)?;
        let o2 = transformed_observable(&gtf_standard(phi2)?)?;
        let w = commutator_expectation(&o1, &o2, f)?;
        Ok((
            (w - (phi2 - phi1).sin()).abs(),
            "|⟨(1/i)[p̂_φ₁,p̂_φ₂]⟩ − sin(φ₂−φ₁)|".into(),
        ))
    });

    s.run("photon_number_ur", 1e-6, || {
        let f = two_level.as_ref().ok_or_else(na)?;
        let r = pn_bound(f, 8)?;
        let mut worst = (r.sigma2_2 - 0.25).abs();
        worst = worst.max((0.25 * r.w_term * r.w_term - 0.125).abs());
        worst = worst.max((-r.margin).max(0.0));
        Ok((worst, "two-level state: σ²_n, commutator term, margin".into()))
    });

    s.run("number_domain_parseval", 1e-8, || {
        // the displaced Gaussian fits a basis the base grid can resolve
        let f = SampledSignal::gaussian(1.0, FRAC_1_SQRT_2, 0.0, 0.0, base)?;
        let n_max = 16.min(((half_width - 4.0).powi(2) as usize).saturating_sub(1) / 2);
        let d = decompose(&f, n_max)?;
        let captured: f64 = d.coeffs().iter().map(|c| c.norm_sqr()).sum();
        let defect = (captured + d.truncation_residual() - f.norm_sq()).abs();
        let (_, n_var) = number_moments(&d)?;
        Ok((
            defect.max(if n_var >= 0.0 { 0.0 } else { -n_var }),
            "Σ|Cₙ|² + residual vs ‖f‖², and σ²_n ≥ 0".into(),
        ))
    });

    s.run("lct_frft_phase_match", 1e-6, || {
        let f = two_level.as_ref().ok_or_else(na)?;
        let alpha = 0.8_f64;
        let a = apply_transform(&make_frft(alpha)?, f, base)?;
        let b = apply_transform(&make_lct(alpha.cos(), alpha.sin(), alpha.cos())?, f, base)?;
        // outputs must agree up to one global unimodular constant
        let ratio = inner_product(&b, &a)?;
        let phase = ratio / ratio.norm();
        let dev = a.sub(&b.scaled(phase))?.norm();
        Ok((dev, "‖frft(α)f − e^{iγ}·lct(cos α, sin α, cos α)f‖".into()))
    });

    suite.results
}

fn clone_err(e: &crate::error::KtError) -> crate::error::KtError {
    crate::error::KtError::Resolution(format!("signal construction failed: {e}"))
}

fn na() -> crate::error::KtError {
    crate::error::KtError::Resolution("test signal unavailable on this grid".into())
}
