//! Response functions `p(a|A,ξ)` of a geometric model.

use crate::error::{Result, SteerError};
use crate::geometry::SteeringEllipsoid;
use crate::qubit::{Outcome, Vec3};

/// Maps a measurement direction, an outcome and a node `ξ` to a probability.
/// Every rule satisfies `p(+|A,ξ) + p(−|A,ξ) = 1` exactly, because the minus
/// outcome is defined as the complement. The node `ξ = 0` (the center atom) always
/// gets `½`.
#[derive(Debug, Clone, PartialEq)]
pub enum ResponseRule {
    /// `p = 1` on the closed hemisphere `ξ·n ≥ 0` around the outer normal `n` of the
    /// (solid, centered) figure at the rim point of `A`, else `0`.
    Hemisphere3D(SteeringEllipsoid),
    /// Flat figure. On the great circle of its plane the response is
    /// `½(1 + c·sgn(ξ·n))` where `c` is the length of the in-plane part of `A`;
    /// for `|c| = 1` this is the semicircle indicator. Off the circle it is `½`.
    Planar2D(SteeringEllipsoid),
    /// Segment along `axis`: `p = ½(1 + c·ξ·axis)` with `c = A·input_axis`.
    Segment1D { axis: Vec3, input_axis: Vec3 },
    /// Spherical figure `s = orientation·(radius)·A`: hemisphere around `orientation·A`.
    WernerRadial { orientation: f64 },
}

const CIRCLE_TOL: f64 = 1e-9;

impl ResponseRule {
    /// Outer normal for the `+` outcome of measurement `x`, for hemisphere rules.
    pub fn hemisphere_normal(&self, x: &Vec3) -> Result<Option<Vec3>> {
        match self {
            ResponseRule::Hemisphere3D(e) => Ok(Some(e.normal_at(x)?.as_vec())),
            ResponseRule::WernerRadial { orientation } => Ok(Some(*x * orientation.signum())),
            _ => Ok(None),
        }
    }

    /// In-plane weight `c` and outer normal for the planar rule.
    pub(crate) fn planar_normal(e: &SteeringEllipsoid, x: &Vec3) -> Option<(f64, Vec3)> {
        let v = e.input_axes();
        let c = (v.column(0).dot(x).powi(2) + v.column(1).dot(x).powi(2)).sqrt();
        if c < 1e-12 {
            return None;
        }
        e.normal_at(x).ok().map(|n| (c.min(1.0), n.as_vec()))
    }

    pub fn probability(&self, x: &Vec3, outcome: Outcome, xi: &Vec3) -> Result<f64> {
        let plus = if xi.norm() < 1e-300 {
            0.5
        } else {
            self.probability_plus(x, xi)?
        };
        Ok(match outcome {
            Outcome::Plus => plus,
            Outcome::Minus => 1.0 - plus,
        })
    }

    fn probability_plus(&self, x: &Vec3, xi: &Vec3) -> Result<f64> {
        Ok(match self {
            ResponseRule::Hemisphere3D(_) | ResponseRule::WernerRadial { .. } => {
                let n = self.hemisphere_normal(x)?.expect("hemisphere rule");
                if xi.dot(&n) >= 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            ResponseRule::Planar2D(e) => {
                let w = e.axes().column(0).cross(&e.axes().column(1));
                if w.dot(xi).abs() > CIRCLE_TOL * xi.norm() {
                    return Ok(0.5);
                }
                match Self::planar_normal(e, x) {
                    None => 0.5,
                    Some((c, n)) => 0.5 * (1.0 + if xi.dot(&n) >= 0.0 { c } else { -c }),
                }
            }
            ResponseRule::Segment1D { axis, input_axis } => {
                let c = x.dot(input_axis);
                (0.5 * (1.0 + c * xi.dot(axis) / xi.norm())).clamp(0.0, 1.0)
            }
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            ResponseRule::Hemisphere3D(_) => "hemisphere-3d",
            ResponseRule::Planar2D(_) => "planar-2d",
            ResponseRule::Segment1D { .. } => "segment-1d",
            ResponseRule::WernerRadial { .. } => "werner-radial",
        }
    }

    pub(crate) fn check(&self) -> Result<()> {
        match self {
            ResponseRule::Hemisphere3D(e) if e.dimension() != 3 => Err(SteerError::UnsupportedDimension {
                dimension: e.dimension(),
                reason: "hemisphere response needs a solid figure".into(),
            }),
            ResponseRule::Planar2D(e) if e.dimension() != 2 => Err(SteerError::UnsupportedDimension {
                dimension: e.dimension(),
                reason: "planar response needs a flat figure".into(),
            }),
            ResponseRule::WernerRadial { orientation } if orientation.abs() != 1.0 => {
                Err(SteerError::Domain("radial orientation must be ±1".into()))
            }
            _ => Ok(()),
        }
    }
}
