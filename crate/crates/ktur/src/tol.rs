//! Numerical thresholds used across the crate.
//!
//! Every cutoff that decides between "proceed" and "reject" lives here, with
//! its rationale, so that no operation carries its own ad-hoc magic number.

/// Relative boundary-decay requirement for signals fed to the spectral
/// derivative or to a transform: the largest edge sample (first/last
/// [`EDGE_SAMPLES`]) must not exceed this fraction of the signal's peak.
///
/// Protects both the discrete-Fourier derivative and Parseval checks from
/// periodic wrap-around.
pub const BOUNDARY_DECAY: f64 = 1e-10;

/// Number of samples inspected at each grid edge by the decay check.
pub const EDGE_SAMPLES: usize = 3;

/// Relative amplitude below which a sample is treated as outside the
/// signal's effective support by the oscillation guard. Contributions from
/// that region are bounded by this factor times the quadrature mass, far
/// beneath every tolerance in the crate.
pub const SUPPORT_EPS: f64 = 1e-13;

/// Degeneracy cutoff for trigonometric/hyperbolic kernel parameters
/// (`|sin α|`, `|sinh α·cos θ|`, `|l(φ)|`). Below it the kernel collapses
/// toward a delta-like map that a sampled grid cannot represent.
pub const KERNEL_DEGENERACY: f64 = 1e-6;

/// Minimum `|b|` for the linear canonical transform; `b = 0` is the
/// scaling/chirp limit with no integral kernel.
pub const LCT_B_MIN: f64 = 1e-12;

/// Constructor self-check: `|prefactor|²·(2π)ⁿ = |det C|` must hold to
/// this accuracy for every kernel (norm preservation).
pub const PREFACTOR_CONSTRAINT: f64 = 1e-9;

/// Symmetry defect allowed in the quadratic coefficient matrices.
pub const MATRIX_SYMMETRY: f64 = 1e-12;

/// Imaginary residue of a Hermitian expectation value that is merely
/// reported (quadrature noise level).
pub const RESIDUE_SOFT: f64 = 1e-8;

/// Imaginary residue that aborts with a hermiticity-violation error
/// (indicates a non-decaying or otherwise unusable signal).
pub const RESIDUE_HARD: f64 = 1e-6;

/// How far a signal's norm may sit from 1 before moment routines refuse it.
pub const NORMALIZATION: f64 = 1e-6;

/// Largest Hermite index supported by the photon-number decomposition;
/// ψ₆₄ needs a half-width of ≈ 15.4 to decay, the largest grid the
/// desk-scale budget resolves at spectral accuracy.
pub const HERMITE_N_MAX: usize = 64;

/// Truncation energy beyond `n_max` that number-domain moments tolerate.
pub const TRUNCATION_RESIDUAL: f64 = 1e-8;

/// Grid-coordinate mismatch allowed when loading a CSV signal table,
/// as a fraction of the grid spacing.
pub const TABLE_COORD_MATCH: f64 = 1e-9;
