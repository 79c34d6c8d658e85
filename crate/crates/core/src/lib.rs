//! Near-field IRS beam-training library.
//!
//! Models a BS-side extremely large intelligent reflecting surface (IRS):
//! spherical-wavefront BS-IRS and IRS-UE channels, three BS beamforming
//! designs (angle steering, SVD, and alternating optimization of an
//! l1-norm objective), IRS phase-shift codebooks, and codebook-based beam
//! training with noisy power measurements.
//!
//! The modules layer bottom-up:
//!
//! * [`numerics`] — complex vectors/matrices, power iteration, RNG streams
//! * [`geometry`] — parallel-ULA array layout, distances, apertures
//! * [`channel`] — free-space channel synthesis and received power/SNR
//! * [`beamform`] — angle / SVD / AO transmit beamformers
//! * [`training`] — codebooks, codeword selection, beam patterns

pub mod beamform;
pub mod channel;
pub mod geometry;
pub mod numerics;
pub mod training;
