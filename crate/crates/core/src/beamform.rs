//! BS transmit beamforming designs used during IRS beam training.
//!
//! Three designs are provided:
//!
//! * [`angle_beamformer`] — far-field steering toward the IRS center; the
//!   classical choice when the BS-IRS link is modeled as a single path.
//! * [`svd_beamformer`] — maximizes the total incident power `‖Hw‖₂²` on
//!   the IRS via the dominant right singular vector of H.
//! * [`ao_beamformer`] — maximizes the sum of incident amplitudes `‖Hw‖₁`
//!   (equivalently, the co-phased UE power) by alternating between the
//!   unit-modulus reflection vector and the power-constrained beamformer.
//!
//! Every returned beamformer satisfies `‖w‖₂² = power_budget` exactly up
//! to rounding; the power constraint is active at every optimum.

use crate::channel::PhysicalParams;
use crate::geometry::{dot, normalize, sub, SystemGeometry};
use crate::numerics::{
    phase_only, top_right_singular_vector, Complex, ComplexMatrix, ComplexVector, NumericsError,
    RngStream, DEFAULT_POWER_ITER_MAX, DEFAULT_POWER_ITER_TOL,
};
use std::f64::consts::PI;
use thiserror::Error;

/// Default relative objective-change threshold for the AO loop.
pub const DEFAULT_AO_EPSILON: f64 = 1e-6;
/// Default AO iteration cap.
pub const DEFAULT_AO_MAX_ITER: usize = 500;

#[derive(Debug, Error)]
pub enum BeamformError {
    #[error("channel matrix is identically zero")]
    ZeroMatrix,
    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },
    #[error("iterate collapsed to the zero vector")]
    DegenerateIterate,
    #[error(transparent)]
    Numerics(NumericsError),
}

impl From<NumericsError> for BeamformError {
    fn from(e: NumericsError) -> Self {
        match e {
            NumericsError::ZeroMatrix => Self::ZeroMatrix,
            other => Self::Numerics(other),
        }
    }
}

// ── beamformer container ───────────────────────────────────────────────

/// Transmit beamformer pinned to its power budget: `‖w‖₂² = power_budget`.
#[derive(Clone, Debug)]
pub struct BeamVector {
    weights: ComplexVector,
    power_budget: f64,
}

impl BeamVector {
    /// Scales `direction` onto the power sphere `‖w‖₂² = power_budget`.
    pub fn from_direction(
        direction: &ComplexVector,
        power_budget: f64,
    ) -> Result<Self, BeamformError> {
        assert!(power_budget > 0.0, "power budget must be positive");
        let norm = direction.norm_l2();
        if norm == 0.0 {
            return Err(BeamformError::DegenerateIterate);
        }
        Ok(Self {
            weights: direction.scaled(Complex::new(power_budget.sqrt() / norm, 0.0)),
            power_budget,
        })
    }

    pub fn weights(&self) -> &ComplexVector {
        &self.weights
    }

    pub fn power_budget(&self) -> f64 {
        self.power_budget
    }
}

// ── angle-based steering ───────────────────────────────────────────────

/// Far-field steering beamformer aligned with the departure direction from
/// the BS array toward the IRS geometric center:
/// `w_m = sqrt(P/M)·exp(−j·2π/λ·(m − (M−1)/2)·Δ·u₀)` with `u₀` the sine
/// of the departure angle measured from the BS array boresight.
pub fn angle_beamformer(geo: &SystemGeometry, params: &PhysicalParams) -> BeamVector {
    let m = geo.bs_count();
    let p = params.tx_power;
    if m == 1 {
        return BeamVector {
            weights: ComplexVector::new(vec![Complex::new(p.sqrt(), 0.0)]),
            power_budget: p,
        };
    }
    let axis = normalize(sub(*geo.bs_coords.last().unwrap(), geo.bs_coords[0]));
    let direction = normalize(sub(geo.irs_center(), geo.bs_center()));
    let u0 = dot(direction, axis);
    let scale = (p / m as f64).sqrt();
    let k = 2.0 * PI / params.wavelength;
    let center = (m as f64 - 1.0) / 2.0;
    let weights = ComplexVector::from_fn(m, |i| {
        Complex::from_polar(scale, -k * (i as f64 - center) * geo.bs_spacing * u0)
    });
    BeamVector {
        weights,
        power_budget: p,
    }
}

// ── SVD-based design ───────────────────────────────────────────────────

/// Maximizes the total incident power on the IRS, `‖Hw‖₂²`, subject to
/// `‖w‖₂² = power_budget`: `w = sqrt(P)·v₁` with `v₁` the dominant right
/// singular vector of H.
pub fn svd_beamformer(h: &ComplexMatrix, power_budget: f64) -> Result<BeamVector, BeamformError> {
    let (v, _sigma) = top_right_singular_vector(h, DEFAULT_POWER_ITER_TOL, DEFAULT_POWER_ITER_MAX)?;
    BeamVector::from_direction(&v, power_budget)
}

// ── alternating optimization ───────────────────────────────────────────

/// Start state for the AO loop.
#[derive(Clone, Debug)]
pub enum AoInit {
    /// Complex-Gaussian start drawn from the given stream, scaled onto the
    /// power sphere.
    SeededRandom(RngStream),
    /// Caller-supplied start, scaled onto the power sphere.
    FromVector(ComplexVector),
}

#[derive(Clone, Debug)]
pub struct AoOptions {
    /// Relative objective-change threshold: the loop stops once
    /// `|f_i − f_{i−1}| < epsilon·f_i`.
    pub epsilon: f64,
    pub max_iter: usize,
    pub init: AoInit,
}

impl AoOptions {
    pub fn seeded(seed: u64, stream: u64) -> Self {
        Self {
            epsilon: DEFAULT_AO_EPSILON,
            max_iter: DEFAULT_AO_MAX_ITER,
            init: AoInit::SeededRandom(RngStream::new(seed, stream)),
        }
    }

    pub fn from_vector(start: ComplexVector) -> Self {
        Self {
            epsilon: DEFAULT_AO_EPSILON,
            max_iter: DEFAULT_AO_MAX_ITER,
            init: AoInit::FromVector(start),
        }
    }
}

/// Objective history of one AO run: `objectives[i]` is the coupling power
/// `|ψᵢᵀ·H·wᵢ|²` after iteration i (index 0 holds the start value). The
/// sequence is non-decreasing up to rounding.
#[derive(Clone, Debug)]
pub struct AoTrace {
    pub objectives: Vec<f64>,
    pub converged: bool,
}

impl AoTrace {
    /// Number of update iterations performed.
    pub fn iterations(&self) -> usize {
        self.objectives.len() - 1
    }

    pub fn final_objective(&self) -> f64 {
        *self.objectives.last().expect("trace is never empty")
    }
}

/// Alternating maximization of `|ψᵀHw|²` over the unit-modulus vector ψ
/// and the power-constrained beamformer w.
///
/// Each iteration sets `ψᵢ` to the element-wise phase of `(H·w_{i−1})*`
/// (the optimal ψ for fixed w) and then `wᵢ = sqrt(P)·w̃/‖w̃‖₂` with
/// `w̃ = (ψᵢᵀH)ᴴ` (the optimal w for fixed ψ), so the objective never
/// decreases. The start value `objectives[0]` is evaluated with the phase
/// vector implied by the start beamformer, i.e. `‖H·w₀‖₁²`.
pub fn ao_beamformer(
    h: &ComplexMatrix,
    power_budget: f64,
    opts: AoOptions,
) -> Result<(BeamVector, AoTrace), BeamformError> {
    assert!(opts.epsilon > 0.0, "epsilon must be positive");
    assert!(opts.max_iter >= 1, "max_iter must be at least 1");
    assert!(power_budget > 0.0, "power budget must be positive");
    if h.is_zero() {
        return Err(BeamformError::ZeroMatrix);
    }
    let m = h.ncols();
    let mut w = match opts.init {
        AoInit::SeededRandom(mut rng) => {
            BeamVector::from_direction(&rng.unit_vector(m), power_budget)?.weights
        }
        AoInit::FromVector(v) => {
            if v.len() != m {
                return Err(BeamformError::DimensionMismatch {
                    context: format!("start vector has {} entries, H has {m} columns", v.len()),
                });
            }
            BeamVector::from_direction(&v, power_budget)?.weights
        }
    };
    let sqrt_p = power_budget.sqrt();

    let f0 = {
        let l1 = h.matvec(&w).norm_l1();
        l1 * l1
    };
    let mut objectives = vec![f0];
    let mut f_prev = f0;
    let mut converged = false;

    for _ in 1..=opts.max_iter {
        let g = h.matvec(&w);
        let psi = phase_only(&g.conj());
        // w̃ = (ψᵀH)ᴴ = Hᴴ·conj(ψ)
        let w_tilde = h.adjoint_matvec(&psi.conj());
        let w_tilde_norm = w_tilde.norm_l2();
        if w_tilde_norm == 0.0 {
            return Err(BeamformError::DegenerateIterate);
        }
        w = w_tilde.scaled(Complex::new(sqrt_p / w_tilde_norm, 0.0));
        // |ψᵀHw|² for the updated w collapses to P·‖w̃‖₂².
        let f = power_budget * w_tilde_norm * w_tilde_norm;
        objectives.push(f);
        if (f - f_prev).abs() < opts.epsilon * f.max(f64::MIN_POSITIVE) {
            converged = true;
            break;
        }
        f_prev = f;
    }

    Ok((
        BeamVector {
            weights: w,
            power_budget,
        },
        AoTrace {
            objectives,
            converged,
        },
    ))
}

/// Best of `restarts` independent AO runs seeded from streams
/// `(seed, 0), (seed, 1), …`; ties keep the earliest stream.
pub fn ao_beamformer_multistart(
    h: &ComplexMatrix,
    power_budget: f64,
    epsilon: f64,
    max_iter: usize,
    restarts: usize,
    seed: u64,
) -> Result<(BeamVector, AoTrace), BeamformError> {
    assert!(restarts >= 1, "need at least one start");
    let mut best: Option<(BeamVector, AoTrace)> = None;
    for k in 0..restarts {
        let opts = AoOptions {
            epsilon,
            max_iter,
            init: AoInit::SeededRandom(RngStream::new(seed, k as u64)),
        };
        let candidate = ao_beamformer(h, power_budget, opts)?;
        let better = best
            .as_ref()
            .is_none_or(|(_, t)| candidate.1.final_objective() > t.final_objective());
        if better {
            best = Some(candidate);
        }
    }
    Ok(best.expect("restarts >= 1"))
}

// ── objective ──────────────────────────────────────────────────────────

/// Sum of incident signal amplitudes on the IRS: `‖Hw‖₁`.
pub fn incident_l1_objective(
    h: &ComplexMatrix,
    w: &ComplexVector,
) -> Result<f64, BeamformError> {
    if w.len() != h.ncols() {
        return Err(BeamformError::DimensionMismatch {
            context: format!("beamformer has {} entries, H has {} columns", w.len(), h.ncols()),
        });
    }
    Ok(h.matvec(w).norm_l1())
}
