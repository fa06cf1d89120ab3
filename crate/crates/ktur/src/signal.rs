//! Complex signals sampled on a [`Grid`]: quadrature inner products, the
//! discrete realization of the momentum operator `p̂ = (1/i) d/dx`, and
//! analytic test-signal generators.
//!
//! All quadrature is the trapezoid rule, which on a uniform grid with
//! decaying integrand equals the plain rectangle sum and converges
//! spectrally for smooth signals. Sums run left to right so results are
//! bit-reproducible regardless of thread count.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{KtError, Result};
use crate::grid::Grid;
use crate::tol;

/// Complex amplitudes on a [`Grid`]; the sampled function `f(x) = ⟨x|f⟩`.
///
/// Signals are immutable after construction: every operation returns a new
/// value, so they are safe to share across threads.
///
/// ```
/// use ktur::{Grid, SampledSignal, inner_product};
/// let grid = Grid::new(512, 8.0).unwrap();
/// let f = SampledSignal::hermite(0, grid).unwrap();
/// let ip = inner_product(&f, &f).unwrap();
/// assert!((ip.re - 1.0).abs() < 1e-10);
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSignal {
    grid: Grid,
    values: Vec<Complex64>,
    label: String,
}

impl SampledSignal {
    pub fn new(grid: Grid, values: Vec<Complex64>, label: impl Into<String>) -> Result<Self> {
        if values.len() != grid.n_points() {
            return Err(KtError::InvalidGrid(format!(
                "{} values on a {}-point grid",
                values.len(),
                grid.n_points()
            )));
        }
        Ok(SampledSignal {
            grid,
            values,
            label: label.into(),
        })
    }

    /// Build from a pointwise function of the coordinate.
    pub fn from_fn(grid: Grid, label: impl Into<String>, f: impl Fn(f64) -> Complex64) -> Self {
        let values = grid.coords().map(f).collect();
        SampledSignal {
            grid,
            values,
            label: label.into(),
        }
    }

    pub fn zero(grid: Grid) -> Self {
        SampledSignal {
            grid,
            values: vec![Complex64::new(0.0, 0.0); grid.n_points()],
            label: "zero".into(),
        }
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// `⟨f|f⟩` under trapezoid quadrature.
    pub fn norm_sq(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.spacing()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Rescale to unit norm.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(KtError::Resolution("cannot normalize the zero signal".into()));
        }
        Ok(self.scaled(Complex64::new(1.0 / n, 0.0)))
    }

    pub fn scaled(&self, z: Complex64) -> Self {
        SampledSignal {
            grid: self.grid,
            values: self.values.iter().map(|v| v * z).collect(),
            label: self.label.clone(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_same_grid(self, other)?;
        Ok(SampledSignal {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
            label: format!("{} + {}", self.label, other.label),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        check_same_grid(self, other)?;
        Ok(SampledSignal {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a - b)
                .collect(),
            label: format!("{} - {}", self.label, other.label),
        })
    }

    /// Pointwise multiplication by a real function of the coordinate.
    pub fn mul_by_coord_fn(&self, g: impl Fn(f64) -> f64) -> Self {
        let values = self
            .grid
            .coords()
            .zip(&self.values)
            .map(|(x, v)| v * g(x))
            .collect();
        SampledSignal {
            grid: self.grid,
            values,
            label: self.label.clone(),
        }
    }

    /// Orthonormal Hermite–Gauss function ψₙ, normalized numerically.
    pub fn hermite(n: usize, grid: Grid) -> Result<Self> {
        sample(
            &AnalyticSignalSpec {
                kind: SignalKind::Hermite { n },
                normalize: true,
            },
            grid,
        )
    }

    /// Normalized Gaussian with position mean `center`, position spread
    /// `width` (standard deviation), quadratic chirp rate `chirp` and
    /// momentum boost `momentum`.
    pub fn gaussian(center: f64, width: f64, chirp: f64, momentum: f64, grid: Grid) -> Result<Self> {
        sample(
            &AnalyticSignalSpec {
                kind: SignalKind::Gaussian {
                    center,
                    width,
                    chirp,
                    momentum,
                },
                normalize: true,
            },
            grid,
        )
    }
}

fn check_same_grid(f: &SampledSignal, g: &SampledSignal) -> Result<()> {
    if f.grid != g.grid {
        return Err(KtError::IncompatibleGrids(
            f.grid.describe(),
            g.grid.describe(),
        ));
    }
    Ok(())
}

/// Trapezoid-rule approximation of `∫ f*(x) g(x) dx`, conjugate-linear in
/// the first argument.
pub fn inner_product(f: &SampledSignal, g: &SampledSignal) -> Result<Complex64> {
    check_same_grid(f, g)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for (a, b) in f.values.iter().zip(&g.values) {
        acc += a.conj() * b;
    }
    Ok(acc * f.grid.spacing())
}

/// True iff the largest of the first/last [`tol::EDGE_SAMPLES`] samples is
/// at most `tolerance` times the signal's peak magnitude. The zero signal
/// passes vacuously.
pub fn boundary_decay_ok(f: &SampledSignal, tolerance: f64) -> bool {
    edge_to_peak_ratio(f) <= tolerance
}

/// Edge magnitude relative to the peak; 0 for the zero signal.
pub(crate) fn edge_to_peak_ratio(f: &SampledSignal) -> f64 {
    let peak = f.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if peak == 0.0 {
        return 0.0;
    }
    let n = f.values.len();
    let k = tol::EDGE_SAMPLES.min(n / 2);
    let edge = f.values[..k]
        .iter()
        .chain(&f.values[n - k..])
        .map(|v| v.norm())
        .fold(0.0, f64::max);
    edge / peak
}

/// Signed wavenumbers `k_m = π m̃ / half_width` in FFT bin order, with the
/// unpaired Nyquist bin zeroed on even grids so the derivative stays
/// exactly antisymmetric (and `p̂` exactly Hermitian) on the grid.
fn wavenumbers(grid: Grid) -> Vec<f64> {
    let n = grid.n_points();
    let dk = PI / grid.half_width();
    (0..n)
        .map(|m| {
            if 2 * m < n {
                m as f64 * dk
            } else if 2 * m == n {
                0.0
            } else {
                (m as f64 - n as f64) * dk
            }
        })
        .collect()
}

/// `p̂ f = (1/i) f′` by discrete-Fourier differentiation; exact for
/// band-limited signals.
///
/// Refuses signals that do not decay at the boundary (relative edge
/// magnitude above [`tol::BOUNDARY_DECAY`]), because the periodic extension
/// would wrap the derivative around. Use
/// [`spectral_derivative_unchecked`] to override.
pub fn spectral_derivative(f: &SampledSignal) -> Result<SampledSignal> {
    let ratio = edge_to_peak_ratio(f);
    if ratio > tol::BOUNDARY_DECAY {
        return Err(KtError::AliasingRisk {
            ratio,
            allowed: tol::BOUNDARY_DECAY,
        });
    }
    Ok(spectral_derivative_unchecked(f))
}

/// [`spectral_derivative`] without the boundary-decay precondition.
pub fn spectral_derivative_unchecked(f: &SampledSignal) -> SampledSignal {
    let n = f.grid.n_points();
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(n);
    let ifft = planner.plan_fft_inverse(n);

    let mut buf = f.values.clone();
    fft.process(&mut buf);
    for (v, k) in buf.iter_mut().zip(wavenumbers(f.grid)) {
        // p̂ multiplies the spectrum by k (the 1/i cancels the i of d/dx)
        *v *= k / n as f64;
    }
    ifft.process(&mut buf);

    SampledSignal {
        grid: f.grid,
        values: buf,
        label: format!("p[{}]", f.label),
    }
}

/// What to sample: an analytic family or a CSV table.
#[derive(Debug, Clone, PartialEq)]
pub enum SignalKind {
    Gaussian {
        center: f64,
        width: f64,
        chirp: f64,
        momentum: f64,
    },
    Hermite {
        n: usize,
    },
    CustomTable {
        path: PathBuf,
    },
}

/// A signal recipe plus its normalization flag.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticSignalSpec {
    pub kind: SignalKind,
    pub normalize: bool,
}

/// Realize a [`AnalyticSignalSpec`] on a grid.
///
/// Gaussians are sampled as
/// `π^{-1/4} σ^{-1/2} · exp[-(1-ic)(x-μ)²/(4σ²) + i p₀ x]`
/// so that `σ` is the position standard deviation and `hermite(0)`
/// coincides with `gaussian(0, √½, 0, 0)`. Hermite functions use the
/// normalized two-term recurrence, stable far beyond the factorial overflow
/// of the raw polynomial form.
pub fn sample(spec: &AnalyticSignalSpec, grid: Grid) -> Result<SampledSignal> {
    let raw = match &spec.kind {
        SignalKind::Gaussian {
            center,
            width,
            chirp,
            momentum,
        } => sample_gaussian(*center, *width, *chirp, *momentum, grid)?,
        SignalKind::Hermite { n } => sample_hermite(*n, grid)?,
        SignalKind::CustomTable { path } => load_table(path, grid)?,
    };
    if spec.normalize {
        raw.normalized()
    } else {
        Ok(raw)
    }
}

fn sample_gaussian(
    center: f64,
    width: f64,
    chirp: f64,
    momentum: f64,
    grid: Grid,
) -> Result<SampledSignal> {
    if !(width > 0.0) {
        return Err(KtError::Resolution(format!("gaussian width {width} must be positive")));
    }
    if width < 3.0 * grid.spacing() {
        return Err(KtError::Resolution(format!(
            "gaussian width {width} under-resolved: grid spacing is {}",
            grid.spacing()
        )));
    }
    if grid.half_width() < center.abs() + 6.0 * width {
        return Err(KtError::Resolution(format!(
            "gaussian (center {center}, width {width}) does not decay within half-width {}",
            grid.half_width()
        )));
    }
    let amp = PI.powf(-0.25) / width.sqrt();
    let signal = SampledSignal::from_fn(
        grid,
        format!("gaussian({center},{width},{chirp},{momentum})"),
        |x| {
            let u = x - center;
            let quarter = u * u / (4.0 * width * width);
            let re = -quarter;
            let im = chirp * quarter + momentum * x;
            Complex64::new(re, im).exp() * amp
        },
    );
    Ok(signal)
}

/// Values of ψ₀…ψ_{n_max} on the grid via
/// `ψ₀ = π^{-1/4} e^{-x²/2}`,
/// `ψ_{k+1} = √(2/(k+1))·x·ψ_k − √(k/(k+1))·ψ_{k-1}`.
pub(crate) fn hermite_ladder(n_max: usize, grid: Grid) -> Vec<Vec<f64>> {
    let xs: Vec<f64> = grid.coords().collect();
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(n_max + 1);
    let psi0: Vec<f64> = xs
        .iter()
        .map(|&x| PI.powf(-0.25) * (-0.5 * x * x).exp())
        .collect();
    rows.push(psi0);
    if n_max == 0 {
        return rows;
    }
    let psi1: Vec<f64> = xs
        .iter()
        .zip(&rows[0])
        .map(|(&x, &p0)| 2.0_f64.sqrt() * x * p0)
        .collect();
    rows.push(psi1);
    for k in 1..n_max {
        let a = (2.0 / (k as f64 + 1.0)).sqrt();
        let b = (k as f64 / (k as f64 + 1.0)).sqrt();
        let next: Vec<f64> = xs
            .iter()
            .enumerate()
            .map(|(i, &x)| a * x * rows[k][i] - b * rows[k - 1][i])
            .collect();
        rows.push(next);
    }
    rows
}

/// Half-width needed for ψₙ to decay to quadrature accuracy: the classical
/// turning point √(2n+1) plus a 4-unit tail.
pub(crate) fn hermite_half_width(n: usize) -> f64 {
    (2.0 * n as f64 + 1.0).sqrt() + 4.0
}

fn sample_hermite(n: usize, grid: Grid) -> Result<SampledSignal> {
    if n > tol::HERMITE_N_MAX {
        return Err(KtError::Resolution(format!(
            "hermite index {n} exceeds the supported maximum {}",
            tol::HERMITE_N_MAX
        )));
    }
    if grid.half_width() < hermite_half_width(n) {
        return Err(KtError::Resolution(format!(
            "ψ_{n} needs half-width ≥ {:.2}, grid has {}",
            hermite_half_width(n),
            grid.half_width()
        )));
    }
    // oscillation up to √(2n+1); keep it at most half the Nyquist rate
    let max_freq = (2.0 * n as f64 + 1.0).sqrt();
    if 2.0 * max_freq > grid.nyquist() {
        return Err(KtError::Resolution(format!(
            "ψ_{n} oscillates at {max_freq:.2} rad/unit, too fast for spacing {}",
            grid.spacing()
        )));
    }
    let row = hermite_ladder(n, grid).pop().expect("ladder is non-empty");
    SampledSignal::new(
        grid,
        row.into_iter().map(|v| Complex64::new(v, 0.0)).collect(),
        format!("hermite({n})"),
    )
}

/// CSV signal table: header `x,re,im`, one row per grid point, monotone `x`
/// matching the supplied grid to [`tol::TABLE_COORD_MATCH`]·spacing.
fn load_table(path: &Path, grid: Grid) -> Result<SampledSignal> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == "x,re,im" => {}
        other => {
            return Err(KtError::BadTable(format!(
                "expected header 'x,re,im', found {:?}",
                other.map(|(_, l)| l).unwrap_or("<empty file>")
            )))
        }
    }
    let mut values = Vec::with_capacity(grid.n_points());
    let mut count = 0usize;
    for (lineno, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split(',');
        let parse = |s: Option<&str>| -> Result<f64> {
            s.ok_or_else(|| KtError::BadTable(format!("line {}: missing field", lineno + 1)))?
                .trim()
                .parse::<f64>()
                .map_err(|e| KtError::BadTable(format!("line {}: {e}", lineno + 1)))
        };
        let x = parse(parts.next())?;
        let re = parse(parts.next())?;
        let im = parse(parts.next())?;
        if count >= grid.n_points() {
            return Err(KtError::BadTable(format!(
                "more rows than the {} grid points",
                grid.n_points()
            )));
        }
        let expected = grid.coord(count);
        if (x - expected).abs() > tol::TABLE_COORD_MATCH * grid.spacing() {
            return Err(KtError::BadTable(format!(
                "line {}: x = {x} does not match grid coordinate {expected}",
                lineno + 1
            )));
        }
        values.push(Complex64::new(re, im));
        count += 1;
    }
    if count != grid.n_points() {
        return Err(KtError::BadTable(format!(
            "{count} rows for {} grid points",
            grid.n_points()
        )));
    }
    SampledSignal::new(grid, values, "table")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn grid() -> Grid {
        Grid::new(1024, 10.0).unwrap()
    }

    #[test]
    fn gaussian_is_normalized() {
        let f = SampledSignal::gaussian(0.0, FRAC_1_SQRT_2, 0.0, 0.0, grid()).unwrap();
        assert!((f.norm_sq() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn hermite_zero_equals_ground_gaussian() {
        let f = SampledSignal::gaussian(0.0, FRAC_1_SQRT_2, 0.0, 0.0, grid()).unwrap();
        let h = SampledSignal::hermite(0, grid()).unwrap();
        let max_dev = f
            .values()
            .iter()
            .zip(h.values())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(max_dev < 1e-12, "max deviation {max_dev}");
    }

    #[test]
    fn hermite_orthonormality() {
        let h3 = SampledSignal::hermite(3, grid()).unwrap();
        let h1 = SampledSignal::hermite(1, grid()).unwrap();
        let n33 = inner_product(&h3, &h3).unwrap();
        let n31 = inner_product(&h3, &h1).unwrap();
        assert_abs_diff_eq!(n33.re, 1.0, epsilon = 1e-9);
        assert!(n33.im.abs() < 1e-12);
        assert!(n31.norm() < 1e-9);
    }

    #[test]
    fn inner_product_rejects_grid_mismatch() {
        let f = SampledSignal::hermite(0, grid()).unwrap();
        let g = SampledSignal::hermite(0, Grid::new(512, 10.0).unwrap()).unwrap();
        assert!(matches!(
            inner_product(&f, &g),
            Err(KtError::IncompatibleGrids(..))
        ));
    }

    #[test]
    fn spectral_derivative_of_ground_state() {
        // p̂ ψ₀ = i x ψ₀
        let f = SampledSignal::hermite(0, grid()).unwrap();
        let pf = spectral_derivative(&f).unwrap();
        let expected = f.mul_by_coord_fn(|x| x).scaled(Complex64::new(0.0, 1.0));
        let max_dev = pf
            .values()
            .iter()
            .zip(expected.values())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(max_dev < 1e-8, "max deviation {max_dev}");
    }

    #[test]
    fn momentum_boost_shifts_mean() {
        let f = SampledSignal::gaussian(0.0, FRAC_1_SQRT_2, 0.0, 2.0, grid()).unwrap();
        let pf = spectral_derivative(&f).unwrap();
        let mean = inner_product(&f, &pf).unwrap();
        assert_abs_diff_eq!(mean.re, 2.0, epsilon = 1e-8);
        assert!(mean.im.abs() < 1e-10);
    }

    #[test]
    fn non_decaying_signal_is_rejected() {
        let f = SampledSignal::from_fn(grid(), "const", |_| Complex64::new(0.1, 0.0));
        assert!(matches!(
            spectral_derivative(&f),
            Err(KtError::AliasingRisk { .. })
        ));
        assert!(!boundary_decay_ok(&f, 1e-10));
    }

    #[test]
    fn boundary_decay_cases() {
        assert!(boundary_decay_ok(
            &SampledSignal::hermite(0, grid()).unwrap(),
            1e-10
        ));
        assert!(boundary_decay_ok(&SampledSignal::zero(grid()), 1e-10));
    }

    #[test]
    fn under_resolved_gaussian_is_rejected() {
        let g = Grid::new(8, 10.0).unwrap(); // spacing 2.5
        assert!(matches!(
            SampledSignal::gaussian(0.0, 1.0, 0.0, 0.0, g),
            Err(KtError::Resolution(_))
        ));
        // decay violation: center + 6σ beyond the edge
        assert!(matches!(
            SampledSignal::gaussian(8.0, 1.0, 0.0, 0.0, grid()),
            Err(KtError::Resolution(_))
        ));
    }

    #[test]
    fn table_round_trip() {
        let g = Grid::new(8, 1.0).unwrap();
        let dir = std::env::temp_dir().join("ktur-signal-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("sig.csv");
        let mut text = String::from("x,re,im\n");
        for (i, x) in g.coords().enumerate() {
            text.push_str(&format!("{x},{},0.5\n", i as f64));
        }
        std::fs::write(&path, text).unwrap();
        let spec = AnalyticSignalSpec {
            kind: SignalKind::CustomTable { path: path.clone() },
            normalize: false,
        };
        let f = sample(&spec, g).unwrap();
        assert_eq!(f.values()[3], Complex64::new(3.0, 0.5));

        // wrong header
        std::fs::write(&path, "a,b,c\n").unwrap();
        assert!(matches!(sample(&spec, g), Err(KtError::BadTable(_))));
    }
}
