//! The optimal geometric steering quantity `𝕊_G = V_d / I_d`.
//!
//! `V_d` integrates the support function of the centered steering figure over the
//! normals of a `d`-dimensional unit sphere and `I_d` is the matching hemisphere
//! integral of `ξ·n`: `I₁ = 1`, `I₂ = 2`, `I₃ = π`. In closed form this gives the
//! segment length for `d = 1` and half the ellipse perimeter for `d = 2`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::elliptic::elliptic_e;
use crate::error::{Result, SteerError};
use crate::geometry::{ellipsoid_of, NormalVector, SteeringDirection, SteeringEllipsoid};
use crate::quadrature::QuadratureGrid;
use crate::qubit::{basic_state, CorrelationMatrix, Vec3};

pub const I1: f64 = 1.0;
pub const I2: f64 = 2.0;
pub const I3: f64 = PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum QuantityMethod {
    #[serde(rename = "analytic-1d")]
    Analytic1d,
    #[serde(rename = "elliptic-2d")]
    Elliptic2d,
    #[serde(rename = "quadrature-3d")]
    Quadrature3d,
    #[serde(rename = "monte-carlo-3d")]
    MonteCarlo3d,
}

impl QuantityMethod {
    pub fn label(self) -> &'static str {
        match self {
            QuantityMethod::Analytic1d => "analytic-1d",
            QuantityMethod::Elliptic2d => "elliptic-2d",
            QuantityMethod::Quadrature3d => "quadrature-3d",
            QuantityMethod::MonteCarlo3d => "monte-carlo-3d",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SteeringQuantity {
    pub value: f64,
    pub dimension: usize,
    pub method: QuantityMethod,
    pub est_error: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl SteeringQuantity {
    fn new(value: f64, dimension: usize, method: QuantityMethod, est_error: f64) -> Self {
        Self {
            value,
            dimension,
            method,
            est_error,
            warnings: Vec::new(),
        }
    }
}

/// Segment of length `length`: `𝕊_G = V₁ / I₁ = L`.
pub fn sg_1d(length: f64) -> Result<SteeringQuantity> {
    if !(length >= 0.0) || !length.is_finite() {
        return Err(SteerError::Domain(format!("segment length {length} must be ≥ 0")));
    }
    Ok(SteeringQuantity::new(length / I1, if length > 0.0 { 1 } else { 0 }, QuantityMethod::Analytic1d, 0.0))
}

/// Ellipse with semi-axes `a ≥ b`: half the perimeter, `2a·E(1 - b²/a²)`.
pub fn sg_2d(a: f64, b: f64) -> Result<SteeringQuantity> {
    if !(a.is_finite() && b.is_finite()) || b < 0.0 {
        return Err(SteerError::Domain(format!("semi-axes ({a}, {b}) must be finite and ≥ 0")));
    }
    let mut warnings = Vec::new();
    let (a, b) = if a < b {
        warnings.push(format!("semi-axes given as ({a}, {b}); swapped so that a ≥ b"));
        (b, a)
    } else {
        (a, b)
    };
    if a <= 0.0 {
        return Err(SteerError::Domain("major semi-axis must be positive".into()));
    }
    let m = (1.0 - (b / a).powi(2)).clamp(0.0, 1.0);
    let perimeter = 4.0 * a * elliptic_e(m)?;
    let value = perimeter / I2;
    let mut q = SteeringQuantity::new(value, 2, QuantityMethod::Elliptic2d, 8.0 * f64::EPSILON * value);
    q.warnings = warnings;
    Ok(q)
}

fn support_integral(e: &SteeringEllipsoid, grid: &QuadratureGrid) -> f64 {
    // Integrate in the principal frame of the figure, pole along the shortest axis.
    let frame = e.axes();
    grid.integrate_in_frame(&frame, |n| {
        let n = NormalVector::new(*n).expect("grid nodes are unit vectors");
        e.support_value(&n)
    })
}

/// Full-dimensional figure: `(1/π) ∫ r(n) dσ_n` on the grid. The error estimate is the
/// change against the half-resolution grid.
pub fn sg_3d(e: &SteeringEllipsoid, grid: &QuadratureGrid) -> Result<SteeringQuantity> {
    if e.dimension() != 3 {
        return Err(SteerError::UnsupportedDimension {
            dimension: e.dimension(),
            reason: "quadrature route needs a solid ellipsoid; use the 1D or 2D formula".into(),
        });
    }
    let value = support_integral(e, grid) / I3;
    let coarse = support_integral(e, &grid.half_resolution()?) / I3;
    let mut q = SteeringQuantity::new(value, 3, QuantityMethod::Quadrature3d, (value - coarse).abs());
    if e.is_borderline() {
        let s = e.semi_axes();
        let flat = sg_2d(s[0], s[1])?;
        let gap = (value - flat.value).abs();
        q.est_error = q.est_error.max(gap);
        q.warnings.push(format!(
            "near-degenerate figure (σ₃/σ₁ = {:e}); cross-checked against the planar formula",
            s[2] / s[0]
        ));
    }
    Ok(q)
}

/// Monte-Carlo estimate of the same integral with `samples` uniform normals.
/// The error estimate is one standard error.
pub fn sg_3d_monte_carlo(e: &SteeringEllipsoid, samples: usize, seed: u64) -> Result<SteeringQuantity> {
    if e.dimension() != 3 {
        return Err(SteerError::UnsupportedDimension {
            dimension: e.dimension(),
            reason: "Monte-Carlo route needs a solid ellipsoid".into(),
        });
    }
    if samples < 2 {
        return Err(SteerError::Domain("need at least two samples".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for k in 0..samples {
        // Archimedes: z uniform in [-1, 1] and azimuth uniform gives a uniform direction.
        let z: f64 = rng.random_range(-1.0..1.0);
        let phi: f64 = rng.random_range(0.0..2.0 * PI);
        let r = (1.0 - z * z).sqrt();
        let n = NormalVector::new(Vec3::new(r * phi.cos(), r * phi.sin(), z)).expect("unit");
        let v = 4.0 * PI * e.support_value(&n) / I3;
        let delta = v - mean;
        mean += delta / (k + 1) as f64;
        m2 += delta * (v - mean);
    }
    let var = m2 / (samples - 1) as f64;
    Ok(SteeringQuantity::new(mean, 3, QuantityMethod::MonteCarlo3d, (var / samples as f64).sqrt()))
}

/// Dispatches on the dimension of a centered figure.
pub fn sg_of_figure(e: &SteeringEllipsoid, grid: &QuadratureGrid) -> Result<SteeringQuantity> {
    let s = e.semi_axes();
    match e.dimension() {
        0 => sg_1d(0.0),
        1 => sg_1d(2.0 * s[0]),
        2 => sg_2d(s[0], s[1]),
        _ => sg_3d(e, grid),
    }
}

/// `𝕊_G` of the basic (Bell-diagonal) state sharing the shape of `g`'s figure.
/// For Bell-diagonal states this is the optimal quantity; otherwise a lower bound.
pub fn steering_quantity(
    g: &CorrelationMatrix,
    direction: SteeringDirection,
    grid: &QuadratureGrid,
) -> Result<SteeringQuantity> {
    let basic = basic_state(g);
    let figure = ellipsoid_of(&basic.representative, direction).centered();
    sg_of_figure(&figure, grid)
}

/// Exploratory ratio `𝕊_G / (σ₁ + σ₂ + σ₃)`.
pub fn shape_coefficient(e: &SteeringEllipsoid, grid: &QuadratureGrid) -> Result<f64> {
    let sum: f64 = e.semi_axes().iter().sum();
    if e.dimension() == 0 || sum <= 0.0 {
        return Err(SteerError::Domain("shape coefficient is undefined for a dot".into()));
    }
    Ok(sg_of_figure(&e.centered(), grid)?.value / sum)
}
