//! Minimal complex linear algebra shared by every other module: dense
//! vectors and matrices over `Complex64`, element-wise phase extraction,
//! power iteration for the dominant singular pair, dBm conversion, and
//! reproducible RNG streams.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use std::ops::Index;
use thiserror::Error;

pub type Complex = num_complex::Complex64;

/// Default relative Rayleigh-quotient tolerance for the power iteration.
pub const DEFAULT_POWER_ITER_TOL: f64 = 1e-10;
/// Default iteration cap paired with [`DEFAULT_POWER_ITER_TOL`]. Large
/// near-field channels can carry a nearly degenerate dominant pair, which
/// slows the iteration far below the textbook rate; the cap is sized for
/// spectral gaps down to ~1e-6.
pub const DEFAULT_POWER_ITER_MAX: usize = 200_000;

/// Entries at or below this magnitude do not anchor the global phase of a
/// returned singular vector.
const PHASE_FIX_THRESHOLD: f64 = 1e-12;

/// Seed of the fallback restart used when the deterministic all-ones start
/// is orthogonal to the dominant subspace.
const RESTART_SEED: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Debug, Error, PartialEq)]
pub enum NumericsError {
    #[error("matrix is identically zero")]
    ZeroMatrix,
    #[error(
        "power iteration did not converge in {max_iter} iterations \
         (last relative change {last_change:.3e})"
    )]
    NoConvergence { max_iter: usize, last_change: f64 },
}

// ── vectors and matrices ───────────────────────────────────────────────

/// Dense complex column vector. Non-empty by construction.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexVector {
    data: Vec<Complex>,
}

impl ComplexVector {
    pub fn new(data: Vec<Complex>) -> Self {
        assert!(!data.is_empty(), "ComplexVector must be non-empty");
        Self { data }
    }

    pub fn from_fn(len: usize, f: impl FnMut(usize) -> Complex) -> Self {
        Self::new((0..len).map(f).collect())
    }

    pub fn zeros(len: usize) -> Self {
        Self::from_fn(len, |_| Complex::new(0.0, 0.0))
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &[Complex] {
        &self.data
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Complex> {
        self.data.iter()
    }

    /// Sum of element magnitudes.
    pub fn norm_l1(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).sum()
    }

    pub fn norm_l2(&self) -> f64 {
        self.norm_l2_sq().sqrt()
    }

    pub fn norm_l2_sq(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn scaled(&self, factor: Complex) -> Self {
        Self::new(self.data.iter().map(|z| z * factor).collect())
    }

    pub fn conj(&self) -> Self {
        Self::new(self.data.iter().map(|z| z.conj()).collect())
    }

    /// Hermitian inner product `Σ conj(self_k)·other_k`.
    pub fn hermitian_dot(&self, other: &Self) -> Complex {
        assert_eq!(self.len(), other.len(), "vector length mismatch");
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Unconjugated product `Σ self_k·other_k`.
    pub fn transpose_dot(&self, other: &Self) -> Complex {
        assert_eq!(self.len(), other.len(), "vector length mismatch");
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| a * b)
            .sum()
    }

    /// Element magnitudes `|x_k|`.
    pub fn magnitudes(&self) -> Vec<f64> {
        self.data.iter().map(|z| z.norm()).collect()
    }
}

impl Index<usize> for ComplexVector {
    type Output = Complex;

    fn index(&self, index: usize) -> &Complex {
        &self.data[index]
    }
}

/// Dense row-major complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    nrows: usize,
    ncols: usize,
    data: Vec<Complex>,
}

impl ComplexMatrix {
    pub fn new(nrows: usize, ncols: usize, data: Vec<Complex>) -> Self {
        assert!(nrows > 0 && ncols > 0, "matrix dimensions must be positive");
        assert_eq!(data.len(), nrows * ncols, "matrix data length mismatch");
        Self { nrows, ncols, data }
    }

    pub fn from_fn(nrows: usize, ncols: usize, mut f: impl FnMut(usize, usize) -> Complex) -> Self {
        let mut data = Vec::with_capacity(nrows * ncols);
        for r in 0..nrows {
            for c in 0..ncols {
                data.push(f(r, c));
            }
        }
        Self::new(nrows, ncols, data)
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn get(&self, row: usize, col: usize) -> Complex {
        self.data[row * self.ncols + col]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    /// `A·x`.
    pub fn matvec(&self, x: &ComplexVector) -> ComplexVector {
        assert_eq!(x.len(), self.ncols, "matvec dimension mismatch");
        ComplexVector::from_fn(self.nrows, |r| {
            let row = &self.data[r * self.ncols..(r + 1) * self.ncols];
            row.iter().zip(x.iter()).map(|(a, b)| a * b).sum()
        })
    }

    /// `Aᴴ·x`.
    pub fn adjoint_matvec(&self, x: &ComplexVector) -> ComplexVector {
        assert_eq!(x.len(), self.nrows, "adjoint matvec dimension mismatch");
        let mut out = vec![Complex::new(0.0, 0.0); self.ncols];
        for r in 0..self.nrows {
            let xr = x[r];
            let row = &self.data[r * self.ncols..(r + 1) * self.ncols];
            for (acc, a) in out.iter_mut().zip(row.iter()) {
                *acc += a.conj() * xr;
            }
        }
        ComplexVector::new(out)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex;

    fn index(&self, (row, col): (usize, usize)) -> &Complex {
        &self.data[row * self.ncols + col]
    }
}

// ── element-wise phase extraction ──────────────────────────────────────

/// Maps each element to `x_k/|x_k|`. Zero elements map to `1+0i` so the
/// output always has unit-modulus entries.
pub fn phase_only(x: &ComplexVector) -> ComplexVector {
    ComplexVector::from_fn(x.len(), |k| {
        let z = x[k];
        let m = z.norm();
        if m == 0.0 {
            Complex::new(1.0, 0.0)
        } else {
            z / m
        }
    })
}

// ── unit conversion ────────────────────────────────────────────────────

/// Converts a power level in dBm to linear watts: `10^((p − 30)/10)`.
pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

// ── dominant singular pair ─────────────────────────────────────────────

/// Power iteration on `AᴴA` for the dominant right singular vector and the
/// largest singular value of `A`.
///
/// Starts from the normalized all-ones vector and restarts from a seeded
/// draw if that start is orthogonal to the dominant subspace. Convergence
/// is declared when the relative change of the Rayleigh quotient `‖Av‖₂²`
/// falls at or below `tol`. The returned vector has unit l2 norm and its
/// first entry with magnitude above 1e-12 is rotated real-positive.
pub fn top_right_singular_vector(
    a: &ComplexMatrix,
    tol: f64,
    max_iter: usize,
) -> Result<(ComplexVector, f64), NumericsError> {
    assert!(tol > 0.0, "tol must be positive");
    assert!(max_iter >= 1, "max_iter must be at least 1");
    if a.is_zero() {
        return Err(NumericsError::ZeroMatrix);
    }

    let m = a.ncols();
    let mut v = ComplexVector::from_fn(m, |_| Complex::new(1.0 / (m as f64).sqrt(), 0.0));
    let mut restart = RngStream::new(RESTART_SEED, 0);
    let mut prev = f64::NAN;
    let mut last_change = f64::INFINITY;

    for _ in 0..max_iter {
        let av = a.matvec(&v);
        let rayleigh = av.norm_l2_sq();
        if rayleigh == 0.0 {
            // v landed in the null space; possible for adversarial sign
            // patterns with the all-ones start.
            v = restart.unit_vector(m);
            prev = f64::NAN;
            continue;
        }
        if prev.is_finite() {
            last_change = (rayleigh - prev).abs() / rayleigh;
            if last_change <= tol {
                return Ok((fix_global_phase(v), rayleigh.sqrt()));
            }
        }
        prev = rayleigh;

        let z = a.adjoint_matvec(&av);
        let zn = z.norm_l2();
        if zn == 0.0 {
            v = restart.unit_vector(m);
            prev = f64::NAN;
            continue;
        }
        v = z.scaled(Complex::new(1.0 / zn, 0.0));
    }
    Err(NumericsError::NoConvergence {
        max_iter,
        last_change,
    })
}

/// Rotates `v` so its first entry with magnitude above the fixed threshold
/// is real and positive, making phase-ambiguous outputs comparable.
fn fix_global_phase(v: ComplexVector) -> ComplexVector {
    match v.iter().find(|z| z.norm() > PHASE_FIX_THRESHOLD) {
        Some(&pivot) => v.scaled(pivot.conj() / pivot.norm()),
        None => v,
    }
}

// ── RNG streams ────────────────────────────────────────────────────────

/// Reproducible random stream: identical `(seed, stream)` pairs yield
/// identical draw sequences and distinct stream ids are statistically
/// independent, so each worker can own its own stream.
#[derive(Clone, Debug)]
pub struct RngStream {
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { rng }
    }

    /// Uniform draw from `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..hi)
    }

    pub fn standard_normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    /// Circularly-symmetric complex Gaussian with total variance `variance`
    /// (real and imaginary parts each carry half).
    pub fn complex_gaussian(&mut self, variance: f64) -> Complex {
        let scale = (variance / 2.0).sqrt();
        Complex::new(
            scale * self.standard_normal(),
            scale * self.standard_normal(),
        )
    }

    pub fn complex_gaussian_vector(&mut self, len: usize, variance: f64) -> ComplexVector {
        ComplexVector::from_fn(len, |_| self.complex_gaussian(variance))
    }

    /// Random complex vector of unit l2 norm.
    pub fn unit_vector(&mut self, len: usize) -> ComplexVector {
        loop {
            let g = self.complex_gaussian_vector(len, 1.0);
            let n = g.norm_l2();
            if n > 0.0 {
                return g.scaled(Complex::new(1.0 / n, 0.0));
            }
        }
    }
}
