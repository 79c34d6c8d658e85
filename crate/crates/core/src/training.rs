//! IRS phase-shift codebooks and codebook-based beam training.
//!
//! Training sweeps a codebook of IRS phase configurations, measures the
//! received pilot power for each, and keeps the strongest. The two-phase
//! procedure first sweeps a far-field DFT codebook over spatial angle,
//! then refines the best angles over a set of distance rings with
//! spherical-wavefront (polar) codewords.

use crate::channel::{ChannelError, NoiseModel, PhysicalParams};
use crate::geometry::{distance, SystemGeometry};
use crate::numerics::{Complex, ComplexMatrix, ComplexVector};
use std::f64::consts::PI;
use thiserror::Error;

/// Ring distance treated as far field when building the default ring list.
pub const FAR_FIELD_RING: f64 = 1e6;

#[derive(Debug, Error, PartialEq)]
pub enum TrainingError {
    #[error("codebook is empty")]
    EmptyCodebook,
    #[error("invalid ring distance {0}; rings must be positive")]
    InvalidRing(f64),
    #[error("invalid spatial angle {0}; must lie in [-1, 1]")]
    InvalidSpatialAngle(f64),
    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },
}

impl From<ChannelError> for TrainingError {
    fn from(e: ChannelError) -> Self {
        match e {
            ChannelError::DimensionMismatch { context } => Self::DimensionMismatch { context },
            ChannelError::Geometry(g) => Self::DimensionMismatch {
                context: g.to_string(),
            },
        }
    }
}

// ── codewords and codebooks ────────────────────────────────────────────

/// Where a codeword points.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CodewordMeta {
    /// Far-field beam at spatial angle `u = sinθ`.
    FarField { spatial_angle: f64 },
    /// Spherical-wavefront beam focused at `(u, r)` from the IRS center.
    NearField { spatial_angle: f64, distance: f64 },
}

impl CodewordMeta {
    pub fn spatial_angle(&self) -> f64 {
        match *self {
            CodewordMeta::FarField { spatial_angle } => spatial_angle,
            CodewordMeta::NearField { spatial_angle, .. } => spatial_angle,
        }
    }
}

/// One IRS phase configuration: applying it multiplies the signal at
/// element n by `e^{jφ_n}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Codeword {
    phases: Vec<f64>,
    meta: CodewordMeta,
}

impl Codeword {
    pub fn new(phases: Vec<f64>, meta: CodewordMeta) -> Self {
        assert!(!phases.is_empty(), "codeword must cover at least one element");
        Self { phases, meta }
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn meta(&self) -> &CodewordMeta {
        &self.meta
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CodebookKind {
    Dft,
    Polar,
    TwoPhaseComposite,
}

#[derive(Clone, Debug)]
pub struct Codebook {
    codewords: Vec<Codeword>,
    kind: CodebookKind,
}

impl Codebook {
    pub fn new(codewords: Vec<Codeword>, kind: CodebookKind) -> Self {
        Self { codewords, kind }
    }

    pub fn codewords(&self) -> &[Codeword] {
        &self.codewords
    }

    pub fn kind(&self) -> CodebookKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.codewords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codewords.is_empty()
    }
}

/// Far-field DFT codebook: N codewords on the uniform spatial-angle grid
/// `u_k = −1 + 2k/N`, with `φ_n = 2π/λ·Δ·(n − (N−1)/2)·u_k`, which
/// co-phases a far-field UE at angle `u_k` under the `e^{+j2πd/λ}`
/// channel convention. At half-wavelength spacing the codewords are
/// mutually orthogonal as length-N sequences.
pub fn dft_codebook(n: usize, irs_spacing: f64, wavelength: f64) -> Codebook {
    assert!(n >= 1, "need at least one element");
    let center = (n as f64 - 1.0) / 2.0;
    let k = 2.0 * PI / wavelength;
    let codewords = (0..n)
        .map(|idx| {
            // The single-element grid degenerates to the broadside beam.
            let u = if n == 1 {
                0.0
            } else {
                -1.0 + 2.0 * idx as f64 / n as f64
            };
            let phases = (0..n)
                .map(|e| k * irs_spacing * (e as f64 - center) * u)
                .collect();
            Codeword::new(phases, CodewordMeta::FarField { spatial_angle: u })
        })
        .collect();
    Codebook::new(codewords, CodebookKind::Dft)
}

/// Spherical-wavefront codebook with one codeword per `(angle, ring)`
/// pair: `φ_n = −2π/λ·(dist(c_n, p) − r)` where `p` is the focus point at
/// distance `r` and spatial angle `u` from the IRS center. The phase
/// profile cancels the propagation phase of a UE exactly at the focus; as
/// `r → ∞` it converges to the DFT codeword at the same angle.
pub fn polar_codebook(
    geo: &SystemGeometry,
    wavelength: f64,
    spatial_angles: &[f64],
    rings: &[f64],
) -> Result<Codebook, TrainingError> {
    if spatial_angles.is_empty() || rings.is_empty() {
        return Err(TrainingError::EmptyCodebook);
    }
    for &r in rings {
        if !(r > 0.0) || !r.is_finite() {
            return Err(TrainingError::InvalidRing(r));
        }
    }
    for &u in spatial_angles {
        if !(-1.0..=1.0).contains(&u) {
            return Err(TrainingError::InvalidSpatialAngle(u));
        }
    }
    let k = 2.0 * PI / wavelength;
    let center = geo.irs_center();
    let mut codewords = Vec::with_capacity(spatial_angles.len() * rings.len());
    for &u in spatial_angles {
        let x = (1.0 - u * u).sqrt();
        for &r in rings {
            let focus = [center[0] + r * x, center[1] + r * u, center[2]];
            let phases = geo
                .irs_coords
                .iter()
                .map(|&c| -k * (distance(c, focus) - r))
                .collect();
            codewords.push(Codeword::new(
                phases,
                CodewordMeta::NearField {
                    spatial_angle: u,
                    distance: r,
                },
            ));
        }
    }
    Ok(Codebook::new(codewords, CodebookKind::Polar))
}

// ── codeword evaluation ────────────────────────────────────────────────

/// Noise-free pilot signal for one codeword given the incident vector
/// `g = H·w`: `Σ_n h_n·e^{jφ_n}·g_n`.
fn codeword_signal(irs_ue: &ComplexVector, g: &ComplexVector, codeword: &Codeword) -> Complex {
    irs_ue
        .iter()
        .zip(g.iter())
        .zip(codeword.phases().iter())
        .map(|((hn, gn), &phi)| hn * Complex::from_polar(1.0, phi) * gn)
        .sum()
}

fn check_dims(
    irs_ue: &ComplexVector,
    h: &ComplexMatrix,
    w: &ComplexVector,
) -> Result<(), TrainingError> {
    if irs_ue.len() != h.nrows() {
        return Err(TrainingError::DimensionMismatch {
            context: format!(
                "IRS-UE channel has {} elements but H has {} rows",
                irs_ue.len(),
                h.nrows()
            ),
        });
    }
    if w.len() != h.ncols() {
        return Err(TrainingError::DimensionMismatch {
            context: format!(
                "beamformer has {} entries but H has {} columns",
                w.len(),
                h.ncols()
            ),
        });
    }
    Ok(())
}

/// Index of the codeword maximizing the noise-free received power; ties
/// resolve to the lowest index.
pub fn noise_free_best_codeword(
    irs_ue: &ComplexVector,
    h: &ComplexMatrix,
    w: &ComplexVector,
    codebook: &Codebook,
) -> Result<usize, TrainingError> {
    if codebook.is_empty() {
        return Err(TrainingError::EmptyCodebook);
    }
    check_dims(irs_ue, h, w)?;
    let g = h.matvec(w);
    let mut best = 0usize;
    let mut best_power = f64::NEG_INFINITY;
    for (i, cw) in codebook.codewords().iter().enumerate() {
        if cw.len() != irs_ue.len() {
            return Err(TrainingError::DimensionMismatch {
                context: format!(
                    "codeword {i} covers {} elements, expected {}",
                    cw.len(),
                    irs_ue.len()
                ),
            });
        }
        let power = codeword_signal(irs_ue, &g, cw).norm_sqr();
        if power > best_power {
            best_power = power;
            best = i;
        }
    }
    Ok(best)
}

// ── two-phase training ─────────────────────────────────────────────────

#[derive(Clone, Debug)]
pub struct TwoPhaseOptions {
    /// Number of strongest phase-1 angles refined in phase 2.
    pub top_k: usize,
    /// Distance rings swept per candidate angle in phase 2.
    pub rings: Vec<f64>,
}

impl Default for TwoPhaseOptions {
    /// K = 15 candidate angles: the incident wavefront of a near-field
    /// beamformer defocuses the far-field sweep into a blob many beams
    /// wide, and the refinement stage must probe enough of that blob to
    /// find the angle of the combined (incident + UE) phase profile.
    fn default() -> Self {
        Self {
            top_k: 15,
            rings: default_rings(),
        }
    }
}

/// Twenty-six ring distances spaced uniformly in reciprocal range from
/// 2 m to 300 m, plus one effectively far-field ring.
///
/// The floor sits below the BS-IRS distance: the codeword matching the
/// combined (incident + UE) profile focuses at the lens-combined range
/// `1/r' = 1/r_incident + 1/r_ue`, which drops to ~2 m for
/// curvature-heavy designs. The count keeps the quadratic phase error at
/// the aperture edge below ~1 rad between adjacent rings.
pub fn default_rings() -> Vec<f64> {
    let near = 2.0f64;
    let far = 300.0f64;
    let count = 26usize;
    let mut rings: Vec<f64> = (0..count)
        .map(|i| {
            let t = i as f64 / (count - 1) as f64;
            1.0 / (1.0 / near + (1.0 / far - 1.0 / near) * t)
        })
        .collect();
    rings.push(FAR_FIELD_RING);
    rings
}

/// Outcome of one training run over the composite candidate set (the K
/// strongest DFT codewords plus every polar refinement codeword).
#[derive(Clone, Debug)]
pub struct TrainingOutcome {
    /// Argmax of `measured_powers`; ties resolve to the lowest index.
    pub selected_index: usize,
    /// Measured `|y|²` per composite candidate, in candidate order.
    pub measured_powers: Vec<f64>,
    /// Noise-free UE SNR (dB) when the selected codeword is applied.
    pub achievable_snr_db: f64,
    /// Best composite candidate under noise-free selection.
    pub oracle_index: usize,
    /// Whether the noisy selection matched the oracle.
    pub hit: bool,
}

/// Codebook-based beam training with one pilot per codeword.
///
/// Phase 1 measures all N DFT codewords and keeps the `top_k` strongest
/// angles; phase 2 measures polar codewords at those angles over the ring
/// list. The selected codeword is the global argmax of the measured
/// powers over the composite candidate set; the reported SNR is evaluated
/// noise-free (noise corrupts only the selection) against the nominal
/// noise power of `params`.
pub fn two_phase_training(
    irs_ue: &ComplexVector,
    h: &ComplexMatrix,
    w: &ComplexVector,
    geo: &SystemGeometry,
    params: &PhysicalParams,
    noise: &mut NoiseModel,
    opts: &TwoPhaseOptions,
) -> Result<TrainingOutcome, TrainingError> {
    check_dims(irs_ue, h, w)?;
    let n = irs_ue.len();
    if geo.irs_count() != n {
        return Err(TrainingError::DimensionMismatch {
            context: format!(
                "geometry has {} IRS elements but channel has {n}",
                geo.irs_count()
            ),
        });
    }
    let top_k = opts.top_k.clamp(1, n);
    let g = h.matvec(w);

    // Phase 1: full DFT sweep, one pilot each.
    let dft = dft_codebook(n, geo.irs_spacing, params.wavelength);
    let phase1: Vec<f64> = dft
        .codewords()
        .iter()
        .map(|cw| (codeword_signal(irs_ue, &g, cw) + noise.sample()).norm_sqr())
        .collect();

    // Strongest K angles, ranked by measurement then index; the winners
    // are then re-ordered by codebook index for a deterministic layout.
    let mut ranked: Vec<usize> = (0..n).collect();
    ranked.sort_by(|&a, &b| {
        phase1[b]
            .partial_cmp(&phase1[a])
            .expect("measured powers are finite")
            .then(a.cmp(&b))
    });
    let mut winners: Vec<usize> = ranked[..top_k].to_vec();
    winners.sort_unstable();
    let winner_angles: Vec<f64> = winners
        .iter()
        .map(|&i| dft.codewords()[i].meta().spatial_angle())
        .collect();

    // Phase 2: polar refinement over the winning angles.
    let polar = polar_codebook(geo, params.wavelength, &winner_angles, &opts.rings)?;
    let phase2: Vec<f64> = polar
        .codewords()
        .iter()
        .map(|cw| (codeword_signal(irs_ue, &g, cw) + noise.sample()).norm_sqr())
        .collect();

    // Composite candidate set: winning DFT codewords, then polar codewords.
    let mut candidates: Vec<Codeword> = winners
        .iter()
        .map(|&i| dft.codewords()[i].clone())
        .collect();
    candidates.extend(polar.codewords().iter().cloned());
    let composite = Codebook::new(candidates, CodebookKind::TwoPhaseComposite);

    let mut measured: Vec<f64> = winners.iter().map(|&i| phase1[i]).collect();
    measured.extend(phase2);

    let mut selected = 0usize;
    for (i, &p) in measured.iter().enumerate() {
        if p > measured[selected] {
            selected = i;
        }
    }

    let oracle_index = noise_free_best_codeword(irs_ue, h, w, &composite)?;
    let signal = codeword_signal(irs_ue, &g, &composite.codewords()[selected]);
    let achievable_snr_db = 10.0 * (signal.norm_sqr() / params.noise_power).log10();

    Ok(TrainingOutcome {
        selected_index: selected,
        measured_powers: measured,
        achievable_snr_db,
        oracle_index,
        hit: selected == oracle_index,
    })
}

// ── beam patterns ──────────────────────────────────────────────────────

/// Amplitude-weighted IRS beam pattern over a spatial-angle grid:
/// `g(u) = |Σ_n a_n·e^{jφ_n}·e^{−j·2π/λ·Δ·(n−(N−1)/2)·u}|`, normalized so
/// the grid maximum is 1. The kernel sign matches the `e^{+j2πd/λ}`
/// channel convention, so a DFT codeword at `u₀` peaks at `u = u₀`.
pub fn irs_beam_pattern(
    amplitudes: &[f64],
    codeword: &Codeword,
    u_grid: &[f64],
    geo: &SystemGeometry,
    wavelength: f64,
) -> Vec<f64> {
    assert_eq!(
        amplitudes.len(),
        codeword.len(),
        "one amplitude per codeword element"
    );
    assert_eq!(
        amplitudes.len(),
        geo.irs_count(),
        "one amplitude per IRS element"
    );
    let n = amplitudes.len();
    let center = (n as f64 - 1.0) / 2.0;
    let k = 2.0 * PI / wavelength;
    let mut gains: Vec<f64> = u_grid
        .iter()
        .map(|&u| {
            let sum: Complex = (0..n)
                .map(|e| {
                    let phase =
                        codeword.phases()[e] - k * geo.irs_spacing * (e as f64 - center) * u;
                    Complex::from_polar(amplitudes[e], phase)
                })
                .sum();
            sum.norm()
        })
        .collect();
    let peak = gains.iter().cloned().fold(0.0, f64::max);
    if peak > 0.0 {
        for gain in &mut gains {
            *gain /= peak;
        }
    }
    gains
}
