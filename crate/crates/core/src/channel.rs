//! Free-space spherical-wavefront channel synthesis and received-power /
//! SNR evaluation.
//!
//! Every entry of the BS-IRS matrix and the IRS-UE vector is built from
//! per-element distances, so wavefront curvature across large arrays is
//! captured without any far-field approximation. All powers are linear
//! watts; dB(m) appears only at configuration and reporting boundaries.

use crate::geometry::{
    distance, effective_aperture, irs_ue_distances, GeometryError, SystemGeometry, UePosition,
};
use crate::numerics::{Complex, ComplexMatrix, ComplexVector, RngStream};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ChannelError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },
}

/// Carrier and link-budget constants.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysicalParams {
    /// Carrier wavelength λ in meters.
    pub wavelength: f64,
    /// BS transmit power budget in watts (linear).
    pub tx_power: f64,
    /// Receiver noise power σ² in watts (linear).
    pub noise_power: f64,
    /// BS antenna gain (dimensionless).
    pub bs_gain: f64,
    /// IRS element gain (dimensionless).
    pub irs_gain: f64,
    /// Effective aperture of the UE antenna in m².
    pub ue_aperture: f64,
}

/// Aperture of an isotropic antenna at wavelength λ: `λ²/(4π)`.
pub fn isotropic_aperture(wavelength: f64) -> f64 {
    wavelength * wavelength / (4.0 * PI)
}

impl Default for PhysicalParams {
    /// Baseline link budget: λ = 0.01 m, 40 dBm transmit power, −94 dBm
    /// noise, unit gains, isotropic UE aperture.
    fn default() -> Self {
        let wavelength = 0.01;
        Self {
            wavelength,
            tx_power: crate::numerics::dbm_to_watts(40.0),
            noise_power: crate::numerics::dbm_to_watts(-94.0),
            bs_gain: 1.0,
            irs_gain: 1.0,
            ue_aperture: isotropic_aperture(wavelength),
        }
    }
}

impl PhysicalParams {
    pub fn validate(&self) -> Result<(), ChannelError> {
        for (name, value) in [
            ("wavelength", self.wavelength),
            ("tx_power", self.tx_power),
            ("noise_power", self.noise_power),
            ("bs_gain", self.bs_gain),
            ("irs_gain", self.irs_gain),
            ("ue_aperture", self.ue_aperture),
        ] {
            if !(value > 0.0) || !value.is_finite() {
                return Err(ChannelError::DimensionMismatch {
                    context: format!("{name} must be positive and finite, got {value}"),
                });
            }
        }
        Ok(())
    }
}

// ── channel synthesis ──────────────────────────────────────────────────

/// BS-IRS channel matrix H (N×M). Entry (n, m) has amplitude
/// `sqrt(G_B·A_nm / (4π·l_nm²))` and phase `+2π·l_nm/λ`, where `l_nm` is
/// the element-to-antenna distance and `A_nm` the projected aperture.
pub fn bs_irs_channel(
    geo: &SystemGeometry,
    params: &PhysicalParams,
) -> Result<ComplexMatrix, ChannelError> {
    let n = geo.irs_count();
    let m = geo.bs_count();
    let k = 2.0 * PI / params.wavelength;
    let mut data = Vec::with_capacity(n * m);
    for i in 0..n {
        for j in 0..m {
            let l = distance(geo.irs_coords[i], geo.bs_coords[j]);
            let aperture = effective_aperture(geo, i, j)?;
            let amp = (params.bs_gain * aperture / (4.0 * PI * l * l)).sqrt();
            data.push(Complex::from_polar(amp, k * l));
        }
    }
    Ok(ComplexMatrix::new(n, m, data))
}

/// IRS-UE channel in conjugate-transposed (row) form: element n has
/// amplitude `sqrt(G_I·A_U / (4π·d_n²))` and phase `+2π·d_n/λ`.
pub fn irs_ue_channel(
    geo: &SystemGeometry,
    ue: &UePosition,
    params: &PhysicalParams,
) -> ComplexVector {
    let d = irs_ue_distances(geo, ue);
    let k = 2.0 * PI / params.wavelength;
    ComplexVector::from_fn(geo.irs_count(), |i| {
        let amp = (params.irs_gain * params.ue_aperture / (4.0 * PI * d[i] * d[i])).sqrt();
        Complex::from_polar(amp, k * d[i])
    })
}

// ── received power and SNR ─────────────────────────────────────────────

fn check_dims(
    irs_ue: &ComplexVector,
    h: &ComplexMatrix,
    w: &ComplexVector,
) -> Result<(), ChannelError> {
    if irs_ue.len() != h.nrows() {
        return Err(ChannelError::DimensionMismatch {
            context: format!(
                "IRS-UE channel has {} elements but H has {} rows",
                irs_ue.len(),
                h.nrows()
            ),
        });
    }
    if w.len() != h.ncols() {
        return Err(ChannelError::DimensionMismatch {
            context: format!(
                "beamformer has {} entries but H has {} columns",
                w.len(),
                h.ncols()
            ),
        });
    }
    Ok(())
}

/// UE received power for IRS phase shifts φ: `|Σ_n h_n·e^{jφ_n}·(Hw)_n|² + σ²`,
/// where `h` is the conjugate-transposed IRS-UE channel as returned by
/// [`irs_ue_channel`].
pub fn received_power(
    irs_ue: &ComplexVector,
    phases: &[f64],
    h: &ComplexMatrix,
    w: &ComplexVector,
    noise_power: f64,
) -> Result<f64, ChannelError> {
    check_dims(irs_ue, h, w)?;
    if phases.len() != irs_ue.len() {
        return Err(ChannelError::DimensionMismatch {
            context: format!(
                "{} phase shifts for {} IRS elements",
                phases.len(),
                irs_ue.len()
            ),
        });
    }
    let g = h.matvec(w);
    let signal: Complex = irs_ue
        .iter()
        .zip(phases.iter())
        .zip(g.iter())
        .map(|((hn, &phi), gn)| hn * Complex::from_polar(1.0, phi) * gn)
        .sum();
    Ok(signal.norm_sqr() + noise_power)
}

/// UE SNR in dB when the IRS co-phases every element perfectly — the
/// optimum of [`received_power`] over all phase configurations:
/// `10·log10((Σ_n |h_n|·|(Hw)_n|)² / σ²)`.
pub fn anticipated_snr_db(
    irs_ue: &ComplexVector,
    h: &ComplexMatrix,
    w: &ComplexVector,
    noise_power: f64,
) -> Result<f64, ChannelError> {
    check_dims(irs_ue, h, w)?;
    let g = h.matvec(w);
    let coherent: f64 = irs_ue
        .iter()
        .zip(g.iter())
        .map(|(hn, gn)| hn.norm() * gn.norm())
        .sum();
    Ok(10.0 * (coherent * coherent / noise_power).log10())
}

// ── noise ──────────────────────────────────────────────────────────────

/// Circularly-symmetric complex Gaussian noise source CN(0, σ²).
///
/// Owns its RNG stream; one instance per worker, never shared.
#[derive(Clone, Debug)]
pub struct NoiseModel {
    variance: f64,
    rng: RngStream,
}

impl NoiseModel {
    pub fn new(variance: f64, rng: RngStream) -> Self {
        assert!(
            variance >= 0.0 && variance.is_finite(),
            "noise variance must be non-negative"
        );
        Self { variance, rng }
    }

    pub fn variance(&self) -> f64 {
        self.variance
    }

    pub fn sample(&mut self) -> Complex {
        self.rng.complex_gaussian(self.variance)
    }
}
