//! Kernel-based transforms on sampled signals and the uncertainty
//! relations they obey.
//!
//! The crate implements the quadratic-phase transform family — fractional
//! Fourier, linear canonical, fractional squeezing, and the cubic-phase
//! generalized time-frequency transform — by direct oscillatory quadrature,
//! and verifies variance products two independent ways:
//!
//! * **transform route**: apply the kernel, take coordinate moments of
//!   `|T_K[f]|²` in the output domain;
//! * **operator route**: build the transformed observable `p̂_K` from the
//!   kernel parameters and take its moments in the input domain.
//!
//! Both routes must agree, and their variance products must sit above the
//! Schrödinger–Robertson bound `F² + ¼W²`, for which the crate carries both
//! a generic numeric path and per-family closed forms.
//!
//! ```
//! use ktur::{make_frft, ur_quadratic, Grid, SampledSignal};
//!
//! let grid = Grid::new(512, 8.0)?;
//! let ground = SampledSignal::hermite(0, grid)?;
//! let report = ur_quadratic(&make_frft(0.9)?, &make_frft(0.3)?, &ground)?;
//! // the Gaussian saturates every fractional-Fourier pair
//! assert!((report.saturation - 1.0).abs() < 1e-6);
//! # Ok::<(), ktur::KtError>(())
//! ```
//!
//! The accompanying guide under `book/` walks through the concepts; its
//! code snippets are mirrored below as doc-tests so they cannot rot.

pub mod bounds;
pub mod error;
pub mod grid;
pub mod kernel;
pub mod moments;
pub mod number;
pub mod poly;
pub mod selftest;
pub mod signal;
pub mod tol;

pub use bounds::{
    f_matrix, f_matrix_general, frft_bound, frft_position_bound, gtf_bound, lct_bound, pn_bound,
    squeeze_bound, ur_generic, ur_gtf_standard, ur_quadratic, w_matrix, wf_matrices, GtfClosedForm,
    UrReport, WfMatrices,
};
pub use error::{DegenerateLimit, KtError, Result};
pub use grid::Grid;
pub use kernel::{
    apply_transform, check_additivity, check_additivity_same_grid, check_parseval, gtf_standard,
    make_frft, make_gtf, make_lct, make_squeeze, QuadPhaseKernel, UnitarityReport,
};
pub use moments::{
    apply_observable, commutator_closed_form, commutator_expectation, covariance, expectation,
    expectation_with_residue, higher_moments, moment_set, transformed_domain_moments,
    transformed_observable, variance, HigherMoments, MomentSet, NumberOp, Observable,
    PolyObservable,
};
pub use number::{
    decompose, momentum_number_covariance, number_moments, reconstruct, NumberDecomposition,
};
pub use poly::RealPoly;
pub use selftest::{run_selftest, CheckResult};
pub use signal::{
    boundary_decay_ok, inner_product, sample, spectral_derivative, spectral_derivative_unchecked,
    AnalyticSignalSpec, SampledSignal, SignalKind,
};

// Run every code snippet in the guide as a doc-test.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/grids-and-signals.md")]
    mod grids_and_signals {}
    #[doc = include_str!("../../../book/src/kernel-transforms.md")]
    mod kernel_transforms {}
    #[doc = include_str!("../../../book/src/moments-two-routes.md")]
    mod moments_two_routes {}
    #[doc = include_str!("../../../book/src/uncertainty-bounds.md")]
    mod uncertainty_bounds {}
    #[doc = include_str!("../../../book/src/number-domain.md")]
    mod number_domain {}
}
