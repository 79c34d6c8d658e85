//! Scheme-level comparisons on synthetic and baseline geometries, plus a
//! brute-force grid oracle for the AO design at toy scale.

use std::f64::consts::PI;
use xlirs_core::beamform::{
    angle_beamformer, ao_beamformer, ao_beamformer_multistart, incident_l1_objective,
    svd_beamformer, AoOptions,
};
use xlirs_core::channel::{bs_irs_channel, PhysicalParams};
use xlirs_core::geometry::{build_system_geometry, SystemConfig, SystemGeometry};
use xlirs_core::numerics::{Complex, ComplexMatrix, ComplexVector, RngStream};

fn default_setup() -> (SystemGeometry, PhysicalParams, ComplexMatrix) {
    let geo = build_system_geometry(&SystemConfig::default()).unwrap();
    let params = PhysicalParams::default();
    let h = bs_irs_channel(&geo, &params).unwrap();
    (geo, params, h)
}

fn amplitude_stddev(h: &ComplexMatrix, w: &ComplexVector) -> f64 {
    let mags = h.matvec(w).magnitudes();
    let mean = mags.iter().sum::<f64>() / mags.len() as f64;
    (mags.iter().map(|a| (a - mean) * (a - mean)).sum::<f64>() / mags.len() as f64).sqrt()
}

/// On a rank-one far-field channel built from a steering vector, the
/// angle design and the SVD design are collinear.
#[test]
fn angle_design_is_svd_special_case_in_far_field() {
    let m = 8;
    let n = 5;
    let spacing = 0.005;
    let wavelength = 0.01;
    // BS array offset in y so the departure direction is off-broadside.
    let y_off = 3.0;
    let d = 5.0;
    let bs_center = (m as f64 - 1.0) / 2.0;
    let geo = SystemGeometry {
        bs_coords: (0..m)
            .map(|j| [d, y_off + (j as f64 - bs_center) * spacing, 0.0])
            .collect(),
        irs_coords: (0..n)
            .map(|i| [0.0, (i as f64 - (n as f64 - 1.0) / 2.0) * spacing, 0.0])
            .collect(),
        irs_normal: [1.0, 0.0, 0.0],
        bs_spacing: spacing,
        irs_spacing: spacing,
    };
    let params = PhysicalParams::default();
    let p = params.tx_power;

    // Departure-angle sine toward the IRS center, as the angle design sees it.
    let u0 = -y_off / (d * d + y_off * y_off).sqrt();
    let k = 2.0 * PI / wavelength;
    let steering = ComplexVector::from_fn(m, |j| {
        Complex::from_polar(
            1.0 / (m as f64).sqrt(),
            -k * (j as f64 - bs_center) * spacing * u0,
        )
    });
    let gains = ComplexVector::new(vec![
        Complex::new(1.0, 0.4),
        Complex::new(-0.2, 0.9),
        Complex::new(0.0, -1.0),
        Complex::new(0.7, 0.0),
        Complex::new(0.3, 0.3),
    ]);
    let h = ComplexMatrix::from_fn(n, m, |r, c| gains[r] * steering[c].conj());

    let w_angle = angle_beamformer(&geo, &params);
    let w_svd = svd_beamformer(&h, p).unwrap();
    let overlap = w_angle.weights().hermitian_dot(w_svd.weights()).norm();
    assert!(
        (overlap - p).abs() <= 1e-8 * p,
        "angle and SVD designs are not collinear: |<w_a, w_s>| = {overlap}, expected {p}"
    );
}

#[test]
fn ao_started_from_svd_never_loses_l1_value() {
    let mut rng = RngStream::new(0xBEEF, 0);
    for trial in 0..20 {
        let n = 3 + trial % 9;
        let m = 2 + trial % 5;
        let h = ComplexMatrix::from_fn(n, m, |_, _| rng.complex_gaussian(1.0));
        let p = 10.0;
        let w_svd = svd_beamformer(&h, p).unwrap();
        let l1_svd = incident_l1_objective(&h, w_svd.weights()).unwrap();
        let (w_ao, trace) =
            ao_beamformer(&h, p, AoOptions::from_vector(w_svd.weights().clone())).unwrap();
        let l1_ao = incident_l1_objective(&h, w_ao.weights()).unwrap();
        assert!(
            l1_ao >= l1_svd * (1.0 - 1e-9),
            "trial {trial}: AO lost ground from the SVD start ({l1_ao} < {l1_svd})"
        );
        assert!(trace.objectives[0] <= trace.final_objective() * (1.0 + 1e-12));
    }
}

#[test]
fn svd_design_dominates_in_l2() {
    let (geo, params, h) = default_setup();
    let p = params.tx_power;
    let w_angle = angle_beamformer(&geo, &params);
    let w_svd = svd_beamformer(&h, p).unwrap();
    let (w_ao, _) = ao_beamformer(&h, p, AoOptions::seeded(4, 0)).unwrap();

    let l2 = |w: &ComplexVector| h.matvec(w).norm_l2();
    assert!(l2(w_svd.weights()) >= l2(w_angle.weights()));
    assert!(l2(w_svd.weights()) >= l2(w_ao.weights()));
}

#[test]
fn ao_design_flattens_incident_amplitudes() {
    let (geo, params, h) = default_setup();
    let p = params.tx_power;
    let w_angle = angle_beamformer(&geo, &params);
    let w_svd = svd_beamformer(&h, p).unwrap();
    let (w_ao, _) = ao_beamformer(&h, p, AoOptions::seeded(4, 0)).unwrap();

    let sd_ao = amplitude_stddev(&h, w_ao.weights());
    let sd_svd = amplitude_stddev(&h, w_svd.weights());
    let sd_angle = amplitude_stddev(&h, w_angle.weights());
    assert!(
        sd_ao < sd_svd && sd_ao < sd_angle,
        "AO amplitude spread {sd_ao} should be the smallest (svd {sd_svd}, angle {sd_angle})"
    );
}

// The near-field channel of the baseline scenario has a nearly degenerate
// dominant subspace, so the iteration count is start-dependent; seed 4 is
// the baseline seed and sits in a fast basin.
#[test]
fn ao_converges_quickly_on_baseline_scenario() {
    let (_, params, h) = default_setup();
    let (_, trace) = ao_beamformer(&h, params.tx_power, AoOptions::seeded(4, 0)).unwrap();
    assert!(trace.converged, "AO did not converge on the baseline scenario");
    assert!(
        trace.iterations() <= 50,
        "AO took {} iterations, expected <= 50",
        trace.iterations()
    );
}

/// Exhaustive oracle at toy scale: with M = 2 the feasible set collapses
/// (up to a global phase) to `w = sqrt(P)·(cos t, sin t·e^{jφ})`, so a
/// dense (t, φ) grid brackets the global optimum of `‖Hw‖₁`.
#[test]
fn ao_reaches_grid_search_optimum_on_tiny_instance() {
    let mut rng = RngStream::new(0x7E57, 0);
    let h = ComplexMatrix::from_fn(3, 2, |_, _| rng.complex_gaussian(1.0));
    let p = 4.0f64;
    let sqrt_p = p.sqrt();

    let steps = 720;
    let mut grid_best = 0.0f64;
    for ti in 0..steps {
        let t = (PI / 2.0) * ti as f64 / (steps - 1) as f64;
        let (w0, amp1) = (sqrt_p * t.cos(), sqrt_p * t.sin());
        for pi_ in 0..steps {
            let phi = 2.0 * PI * pi_ as f64 / steps as f64;
            let w1 = Complex::from_polar(amp1, phi);
            let mut l1 = 0.0;
            for r in 0..3 {
                l1 += (h.get(r, 0) * w0 + h.get(r, 1) * w1).norm();
            }
            grid_best = grid_best.max(l1);
        }
    }

    let (w_ao, _) = ao_beamformer_multistart(&h, p, 1e-9, 1000, 5, 0x7E57).unwrap();
    let l1_ao = incident_l1_objective(&h, w_ao.weights()).unwrap();
    assert!(
        l1_ao >= 0.99 * grid_best,
        "AO value {l1_ao} below 99% of grid optimum {grid_best}"
    );
}

#[test]
fn multistart_picks_the_best_run() {
    let mut rng = RngStream::new(0xAB, 0);
    let h = ComplexMatrix::from_fn(6, 3, |_, _| rng.complex_gaussian(1.0));
    let p = 2.0;
    let (_, best_trace) = ao_beamformer_multistart(&h, p, 1e-9, 500, 4, 99).unwrap();
    for k in 0..4 {
        let opts = AoOptions {
            epsilon: 1e-9,
            max_iter: 500,
            init: xlirs_core::beamform::AoInit::SeededRandom(RngStream::new(99, k)),
        };
        let (_, trace) = ao_beamformer(&h, p, opts).unwrap();
        assert!(best_trace.final_objective() >= trace.final_objective() * (1.0 - 1e-12));
    }
}
