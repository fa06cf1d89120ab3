//! Deterministic module invariants at the (2048, 12) reference scale.

use ktur::{
    check_parseval, commutator_expectation, covariance, decompose, expectation,
    expectation_with_residue, gtf_standard, inner_product, make_frft, make_lct, make_squeeze,
    number_moments, spectral_derivative, transformed_observable, variance, Grid, Observable,
    PolyObservable, SampledSignal,
};
use num_complex::Complex64;
use std::f64::consts::FRAC_1_SQRT_2;

fn grid() -> Grid {
    Grid::new(2048, 12.0).unwrap()
}

/// A compactly supported smooth real bump, `exp(-1/(1-(x/a)²))` inside
/// `|x| < a`, identically zero outside.
fn bump(g: Grid, a: f64) -> SampledSignal {
    SampledSignal::from_fn(g, "bump", |x| {
        let t = x / a;
        if t.abs() < 1.0 {
            Complex64::new((-1.0 / (1.0 - t * t)).exp(), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
    .normalized()
    .unwrap()
}

#[test]
fn hermite_orthonormality_to_n20() {
    let g = grid();
    let ladder: Vec<SampledSignal> = (0..=20)
        .map(|n| SampledSignal::hermite(n, g).unwrap())
        .collect();
    let mut worst = 0.0_f64;
    for (m, fm) in ladder.iter().enumerate() {
        for fn_ in &ladder[m..] {
            let ip = inner_product(fm, fn_).unwrap();
            let target = if fm == fn_ { 1.0 } else { 0.0 };
            worst = worst.max((ip - target).norm());
        }
    }
    assert!(worst <= 1e-8, "worst orthonormality defect {worst:.3e}");
}

#[test]
fn momentum_variance_converges_under_refinement() {
    let p = PolyObservable::momentum();
    let mut values = Vec::new();
    for n in [1024usize, 2048] {
        let f = SampledSignal::hermite(3, Grid::new(n, 12.0).unwrap()).unwrap();
        values.push(variance(&p, &f).unwrap() + expectation(&p, &f).unwrap().powi(2));
    }
    let rel = (values[0] - values[1]).abs() / values[1];
    assert!(rel <= 1e-8, "refinement change {rel:.3e}");
}

#[test]
fn parseval_across_constructors_and_signals() {
    let g = grid();
    let signals = [
        SampledSignal::hermite(0, g).unwrap(),
        SampledSignal::hermite(2, g).unwrap(),
        SampledSignal::gaussian(1.0, FRAC_1_SQRT_2, 1.0, 0.5, g).unwrap(),
    ];
    // (kernel, output grid wide enough for its image)
    let cases = [
        (make_frft(0.7).unwrap(), g),
        (make_frft(2.3).unwrap(), g),
        (make_lct(1.0, 1.5, 0.25).unwrap(), Grid::new(4096, 24.0).unwrap()),
        (make_squeeze(0.8, 0.3).unwrap(), Grid::new(4096, 24.0).unwrap()),
        (gtf_standard(0.9).unwrap(), Grid::new(4096, 42.0).unwrap()),
    ];
    for (k, out) in &cases {
        for f in &signals {
            let r = check_parseval(k, f, *out).unwrap();
            assert!(
                r.relative_defect <= 1e-5,
                "{} on {}: defect {:.3e}",
                k.label(),
                f.label(),
                r.relative_defect
            );
        }
    }
}

#[test]
fn frft_equals_lct_up_to_global_phase_pointwise() {
    let g = grid();
    let f = SampledSignal::gaussian(0.5, FRAC_1_SQRT_2, 0.5, 0.0, g).unwrap();
    let alpha = 0.8_f64;
    let a = ktur::apply_transform(&make_frft(alpha).unwrap(), &f, g).unwrap();
    let b = ktur::apply_transform(
        &make_lct(alpha.cos(), alpha.sin(), alpha.cos()).unwrap(),
        &f,
        g,
    )
    .unwrap();
    // fix the constant from the global overlap, then compare pointwise
    let ratio = inner_product(&b, &a).unwrap();
    let phase = ratio / ratio.norm();
    let mut worst = 0.0_f64;
    for (va, vb) in a.values().iter().zip(b.values()) {
        if va.norm() > 1e-8 {
            worst = worst.max(((va / (vb * phase)) - Complex64::new(1.0, 0.0)).norm());
        }
    }
    assert!(worst <= 1e-6, "worst pointwise ratio deviation {worst:.3e}");
}

#[test]
fn real_signal_position_momentum_product() {
    // ⟨x̂ p̂⟩ = i/2 for real normalized decaying signals
    let g = grid();
    let x = PolyObservable::position();
    let p = PolyObservable::momentum();
    for f in [SampledSignal::hermite(2, g).unwrap(), bump(g, 5.0)] {
        let cov = covariance(&x, &p, &f).unwrap();
        let mean_x = expectation(&x, &f).unwrap();
        let mean_p = expectation(&p, &f).unwrap();
        let w = commutator_expectation(&x, &p, &f).unwrap();
        let xp = Complex64::new(cov + mean_x * mean_p, 0.5 * w);
        let dev = (xp - Complex64::new(0.0, 0.5)).norm();
        assert!(dev <= 1e-7, "{}: |⟨x̂p̂⟩ − i/2| = {dev:.3e}", f.label());
    }
}

#[test]
fn expectation_residues_stay_at_quadrature_noise() {
    let g = grid();
    let f = SampledSignal::gaussian(1.0, FRAC_1_SQRT_2, 1.0, 0.5, g).unwrap();
    for o in [
        PolyObservable::position(),
        PolyObservable::momentum(),
        transformed_observable(&gtf_standard(0.9).unwrap()).unwrap(),
        transformed_observable(&make_squeeze(1.1, 0.3).unwrap()).unwrap(),
    ] {
        let (_, residue) = expectation_with_residue(&o, &f).unwrap();
        assert!(residue <= 1e-8, "{}: residue {residue:.3e}", o.label());
    }
}

#[test]
fn number_variance_nonnegative_and_zero_on_eigenstates() {
    let g = grid();
    for n in [0usize, 3, 7] {
        let f = SampledSignal::hermite(n, g).unwrap();
        let (n_mean, n_var) = number_moments(&decompose(&f, 12).unwrap()).unwrap();
        assert!((n_mean - n as f64).abs() <= 1e-9);
        assert!((0.0..=1e-10).contains(&n_var), "σ²_n = {n_var:.3e}");
    }
    let mixed = SampledSignal::gaussian(0.8, FRAC_1_SQRT_2, 0.4, 0.0, g).unwrap();
    let (_, n_var) = number_moments(&decompose(&mixed, 24).unwrap()).unwrap();
    assert!(n_var >= 0.0);
}

#[test]
fn transform_then_derivative_pipeline_stays_consistent() {
    // a transform output is a legitimate input for the moment engine
    let g = grid();
    let f = SampledSignal::hermite(1, g).unwrap();
    let k = make_frft(0.6).unwrap();
    let out = ktur::apply_transform(&k, &f, g).unwrap();
    // T_α ψ₁ is ψ₁ up to phase, so every moment matches ψ₁'s
    let var_out = variance(&PolyObservable::momentum(), &out.normalized().unwrap()).unwrap();
    let var_in = variance(&PolyObservable::momentum(), &f).unwrap();
    assert!((var_out - var_in).abs() <= 1e-7);
    let _ = spectral_derivative(&out).unwrap();
}
