//! Error type shared by every module.

use thiserror::Error;

/// Exact analytic map a degenerate kernel collapses to.
///
/// Delta-like kernels cannot be represented on a sampled grid, so the
/// constructors reject them and name the limit instead of evaluating it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegenerateLimit {
    /// `f(x) → f(x)` (e.g. FrFT at α ≡ 0, squeezing at α → 0).
    Identity,
    /// `f(x) → f(−x)` (FrFT at α ≡ π).
    Parity,
    /// Pure scaling/chirp map (LCT at b → 0).
    Scaling,
}

impl std::fmt::Display for DegenerateLimit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DegenerateLimit::Identity => write!(f, "identity"),
            DegenerateLimit::Parity => write!(f, "parity"),
            DegenerateLimit::Scaling => write!(f, "scaling"),
        }
    }
}

/// Everything that can go wrong in this crate.
#[derive(Debug, Error)]
pub enum KtError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("signal not resolvable on this grid: {0}")]
    Resolution(String),

    #[error("signals live on different grids ({0} vs {1})")]
    IncompatibleGrids(String, String),

    #[error("signal does not decay at the grid boundary (edge/peak = {ratio:.3e}, allowed {allowed:.1e}); widen the grid or pass the unchecked variant")]
    AliasingRisk { ratio: f64, allowed: f64 },

    #[error("grid too coarse for this kernel: |dφ/dx| reaches {max_freq:.3e} at output point p = {worst_p:.6} but the grid resolves only {limit:.3e}")]
    GridTooCoarse {
        worst_p: f64,
        max_freq: f64,
        limit: f64,
    },

    #[error("degenerate kernel: the requested parameters collapse to the {limit} map, which has no grid representation")]
    DegenerateKernel { limit: DegenerateLimit },

    #[error("singular kernel parameter: {0}")]
    SingularParameter(String),

    #[error("closed form only defined for purely quadratic kernels of equal dimension: {0}")]
    UnsupportedClosedForm(String),

    #[error("operation requires a one-dimensional kernel (dim = {0})")]
    UnsupportedDimension(usize),

    #[error("hermiticity violated: expectation has imaginary residue {residue:.3e} (allowed {allowed:.1e})")]
    HermiticityViolation { residue: f64, allowed: f64 },

    #[error("signal not normalized: ⟨f|f⟩ = {norm_sq:.12}")]
    NotNormalized { norm_sq: f64 },

    #[error("Hermite basis too small: truncation residual {residual:.3e} exceeds {allowed:.1e}")]
    InsufficientBasis { residual: f64, allowed: f64 },

    #[error("polynomial degree {0} exceeds the supported maximum of {1}")]
    PolynomialDegree(usize, usize),

    #[error("bad signal table: {0}")]
    BadTable(String),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl KtError {
    /// Stable machine-readable kind, one per variant.
    pub fn kind(&self) -> &'static str {
        match self {
            KtError::InvalidGrid(_) => "invalid_grid",
            KtError::Resolution(_) => "resolution",
            KtError::IncompatibleGrids(..) => "incompatible_grids",
            KtError::AliasingRisk { .. } => "aliasing_risk",
            KtError::GridTooCoarse { .. } => "grid_too_coarse",
            KtError::DegenerateKernel { .. } => "degenerate_kernel",
            KtError::SingularParameter(_) => "singular_parameter",
            KtError::UnsupportedClosedForm(_) => "unsupported_closed_form",
            KtError::UnsupportedDimension(_) => "unsupported_dimension",
            KtError::HermiticityViolation { .. } => "hermiticity_violation",
            KtError::NotNormalized { .. } => "not_normalized",
            KtError::InsufficientBasis { .. } => "insufficient_basis",
            KtError::PolynomialDegree(..) => "polynomial_degree",
            KtError::BadTable(_) => "bad_table",
            KtError::Io(_) => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, KtError>;
