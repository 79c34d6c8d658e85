//! Array layout: a BS uniform linear array facing a parallel IRS uniform
//! linear array, a UE placed in polar coordinates relative to the IRS
//! center, and the distances/effective apertures that feed the channel
//! models.

use thiserror::Error;

pub type Point3 = [f64; 3];

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("BS antenna {m} lies behind the reflecting surface at element {n}")]
    BehindSurface { n: usize, m: usize },
}

// ── vector helpers ─────────────────────────────────────────────────────

pub fn distance(a: Point3, b: Point3) -> f64 {
    let d = sub(a, b);
    dot(d, d).sqrt()
}

pub(crate) fn sub(a: Point3, b: Point3) -> Point3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub(crate) fn dot(a: Point3, b: Point3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn normalize(a: Point3) -> Point3 {
    let n = dot(a, a).sqrt();
    [a[0] / n, a[1] / n, a[2] / n]
}

// ── configuration ──────────────────────────────────────────────────────

/// Array sizes and spacings for the parallel-ULA layout.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SystemConfig {
    /// Number of BS antennas (M).
    pub bs_antennas: usize,
    /// Number of IRS elements (N).
    pub irs_elements: usize,
    /// Distance between the array centers in meters.
    pub bs_irs_distance: f64,
    /// BS inter-antenna spacing in meters.
    pub bs_spacing: f64,
    /// IRS inter-element spacing in meters.
    pub irs_spacing: f64,
}

impl Default for SystemConfig {
    /// Baseline scenario: M = 64, N = 200, 5 m separation, half-wavelength
    /// spacing at λ = 0.01 m.
    fn default() -> Self {
        Self {
            bs_antennas: 64,
            irs_elements: 200,
            bs_irs_distance: 5.0,
            bs_spacing: 0.005,
            irs_spacing: 0.005,
        }
    }
}

impl SystemConfig {
    pub fn validate(&self) -> Result<(), GeometryError> {
        if self.bs_antennas < 1 {
            return Err(GeometryError::InvalidConfig(
                "bs_antennas must be at least 1".into(),
            ));
        }
        if self.irs_elements < 1 {
            return Err(GeometryError::InvalidConfig(
                "irs_elements must be at least 1".into(),
            ));
        }
        for (name, value) in [
            ("bs_irs_distance", self.bs_irs_distance),
            ("bs_spacing", self.bs_spacing),
            ("irs_spacing", self.irs_spacing),
        ] {
            if !(value > 0.0) || !value.is_finite() {
                return Err(GeometryError::InvalidConfig(format!(
                    "{name} must be positive and finite, got {value}"
                )));
            }
        }
        Ok(())
    }
}

// ── geometry ───────────────────────────────────────────────────────────

/// Concrete 3-D coordinates of every BS antenna and IRS element.
///
/// The IRS lies in the y-axis through the origin; the BS is a parallel
/// line at `x = bs_irs_distance`. The IRS surface normal points toward
/// the BS-side half-space (+x), which is also where UEs are placed.
#[derive(Clone, Debug, PartialEq)]
pub struct SystemGeometry {
    pub bs_coords: Vec<Point3>,
    pub irs_coords: Vec<Point3>,
    pub irs_normal: Point3,
    pub bs_spacing: f64,
    pub irs_spacing: f64,
}

impl SystemGeometry {
    pub fn bs_count(&self) -> usize {
        self.bs_coords.len()
    }

    pub fn irs_count(&self) -> usize {
        self.irs_coords.len()
    }

    pub fn irs_center(&self) -> Point3 {
        centroid(&self.irs_coords)
    }

    pub fn bs_center(&self) -> Point3 {
        centroid(&self.bs_coords)
    }
}

fn centroid(points: &[Point3]) -> Point3 {
    let mut c = [0.0; 3];
    for p in points {
        c[0] += p[0];
        c[1] += p[1];
        c[2] += p[2];
    }
    let n = points.len() as f64;
    [c[0] / n, c[1] / n, c[2] / n]
}

/// Builds the centered parallel-ULA layout: IRS element n at
/// `(0, (n − (N−1)/2)·irs_spacing, 0)`, BS antenna m at
/// `(bs_irs_distance, (m − (M−1)/2)·bs_spacing, 0)`.
pub fn build_system_geometry(cfg: &SystemConfig) -> Result<SystemGeometry, GeometryError> {
    cfg.validate()?;
    let n = cfg.irs_elements;
    let m = cfg.bs_antennas;
    let irs_center = (n as f64 - 1.0) / 2.0;
    let bs_center = (m as f64 - 1.0) / 2.0;
    let irs_coords = (0..n)
        .map(|i| [0.0, (i as f64 - irs_center) * cfg.irs_spacing, 0.0])
        .collect();
    let bs_coords = (0..m)
        .map(|j| {
            [
                cfg.bs_irs_distance,
                (j as f64 - bs_center) * cfg.bs_spacing,
                0.0,
            ]
        })
        .collect();
    Ok(SystemGeometry {
        bs_coords,
        irs_coords,
        irs_normal: [1.0, 0.0, 0.0],
        bs_spacing: cfg.bs_spacing,
        irs_spacing: cfg.irs_spacing,
    })
}

// ── UE placement ───────────────────────────────────────────────────────

/// Single-antenna UE location.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UePosition {
    pub coord: Point3,
}

impl UePosition {
    pub fn new(coord: Point3) -> Self {
        Self { coord }
    }

    /// Places the UE at distance `r` and spatial angle `u = sinθ` from the
    /// IRS center, in the array plane on the reflecting side:
    /// `center + r·(√(1−u²), u, 0)`.
    pub fn from_polar(irs_center: Point3, r: f64, u: f64) -> Result<Self, GeometryError> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(GeometryError::InvalidConfig(format!(
                "ue distance must be positive and finite, got {r}"
            )));
        }
        if !(-1.0..=1.0).contains(&u) {
            return Err(GeometryError::InvalidConfig(format!(
                "ue spatial angle must lie in [-1, 1], got {u}"
            )));
        }
        let x = (1.0 - u * u).sqrt();
        Ok(Self {
            coord: [
                irs_center[0] + r * x,
                irs_center[1] + r * u,
                irs_center[2],
            ],
        })
    }
}

// ── distances and apertures ────────────────────────────────────────────

/// Pairwise BS-IRS distances; entry `[n][m]` is the distance from IRS
/// element n to BS antenna m.
pub fn bs_irs_distances(geo: &SystemGeometry) -> Vec<Vec<f64>> {
    geo.irs_coords
        .iter()
        .map(|&e| geo.bs_coords.iter().map(|&b| distance(e, b)).collect())
        .collect()
}

/// Distance from each IRS element to the UE.
pub fn irs_ue_distances(geo: &SystemGeometry, ue: &UePosition) -> Vec<f64> {
    geo.irs_coords
        .iter()
        .map(|&e| distance(e, ue.coord))
        .collect()
}

/// Effective aperture of IRS element `n` seen from BS antenna `m`:
/// the square element area `irs_spacing²` projected by the cosine of the
/// angle between the surface normal and the element-to-antenna direction.
pub fn effective_aperture(
    geo: &SystemGeometry,
    n: usize,
    m: usize,
) -> Result<f64, GeometryError> {
    let dir = sub(geo.bs_coords[m], geo.irs_coords[n]);
    let cos = dot(dir, geo.irs_normal) / dot(dir, dir).sqrt();
    if cos <= 0.0 {
        return Err(GeometryError::BehindSurface { n, m });
    }
    Ok(geo.irs_spacing * geo.irs_spacing * cos)
}
