//! Geometric local-hidden-state models `{q(ξ), p(a|A,ξ)}`.
//!
//! A model places a nonnegative density `q` on unit vectors `ξ` (plus an optional
//! atom at the center) and answers each measurement with a response rule. The
//! unnormalised conditioned Bloch vectors are `s_A^a = ∫ p(a|A,ξ) q(ξ) ξ`, and the
//! model's quantity is `𝕊 = ∫ q`. It is a local hidden state model when `𝕊 ≤ 1`.

mod asymmetry;
mod density;
mod response;

pub use asymmetry::{asymmetry_report, asymmetry_report_with, AsymmetryReport, DirectionFinding, Verdict};
pub use density::{CircleDensity, SphereDensity};
pub use response::ResponseRule;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Result, SteerError};
use crate::geometry::SteeringEllipsoid;
use crate::quadrature::QuadratureGrid;
use crate::qubit::{check_unit, Mat3, Outcome, Vec3};
use crate::sphere::frame_with_pole;

/// Default number of samples of a circle density.
pub const DEFAULT_CIRCLE_RESOLUTION: usize = 4096;

/// Limit on the even anisotropy accepted by [`translation_of`].
pub const EVEN_RESIDUAL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub direction: Vec3,
    pub mass: f64,
}

/// Where the density lives.
#[derive(Debug, Clone, PartialEq)]
pub enum Support {
    /// A density on the whole sphere, integrated with a product grid.
    Sphere { grid: QuadratureGrid, density: SphereDensity },
    /// A density per radian on one great circle.
    Circle(CircleDensity),
    /// Finitely many point masses.
    Atoms(Vec<Atom>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GModel {
    support: Support,
    center_atom: f64,
    response: ResponseRule,
}

/// Outcome of evaluating a model at one measurement. `raw_*` are the unnormalised
/// masses `∫ q p(a|A,ξ) + ½·center`; `prob_*` divide them by `𝕊`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reconstruction {
    pub prob_plus: f64,
    pub prob_minus: f64,
    pub raw_plus: f64,
    pub raw_minus: f64,
    pub s_plus: Vec3,
    pub s_minus: Vec3,
}

impl Reconstruction {
    pub fn prob(&self, outcome: Outcome) -> f64 {
        match outcome {
            Outcome::Plus => self.prob_plus,
            Outcome::Minus => self.prob_minus,
        }
    }

    pub fn shrinked(&self, outcome: Outcome) -> Vec3 {
        match outcome {
            Outcome::Plus => self.s_plus,
            Outcome::Minus => self.s_minus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TranslationVector {
    pub t: Vec3,
}

impl TranslationVector {
    pub fn norm(&self) -> f64 {
        self.t.norm()
    }
}

impl GModel {
    pub fn new(support: Support, center_atom: f64, response: ResponseRule) -> Result<Self> {
        if !(center_atom >= 0.0) || !center_atom.is_finite() {
            return Err(SteerError::Domain(format!("center weight {center_atom} must be ≥ 0")));
        }
        response.check()?;
        match &support {
            Support::Sphere { grid, density } => {
                if let Some(v) = grid.nodes().iter().map(|n| density.eval(n)).find(|v| !(*v >= 0.0)) {
                    return Err(SteerError::Domain(format!("density takes the negative value {v} on the grid")));
                }
            }
            Support::Atoms(atoms) => {
                for a in atoms {
                    check_unit(&a.direction)?;
                    if !(a.mass >= 0.0) {
                        return Err(SteerError::Domain(format!("atom mass {} must be ≥ 0", a.mass)));
                    }
                }
            }
            Support::Circle(_) => {}
        }
        Ok(Self {
            support,
            center_atom,
            response,
        })
    }

    pub fn support(&self) -> &Support {
        &self.support
    }

    pub fn response(&self) -> &ResponseRule {
        &self.response
    }

    pub fn center_atom(&self) -> f64 {
        self.center_atom
    }

    /// `𝕊 = ∫ q + center`.
    pub fn quantity(&self) -> f64 {
        let body = match &self.support {
            Support::Sphere { grid, density } => grid.integrate(|xi| density.eval(xi)),
            Support::Circle(c) => c.total(),
            Support::Atoms(atoms) => atoms.iter().map(|a| a.mass).sum(),
        };
        body + self.center_atom
    }

    pub fn is_lhs(&self) -> bool {
        self.quantity() <= 1.0 + 1e-12
    }

    /// Density values at the nodes of the support (grid nodes, circle samples or atom masses).
    pub fn node_weights(&self) -> Vec<f64> {
        match &self.support {
            Support::Sphere { grid, density } => grid.nodes().iter().map(|n| density.eval(n)).collect(),
            Support::Circle(c) => c.samples().to_vec(),
            Support::Atoms(atoms) => atoms.iter().map(|a| a.mass).collect(),
        }
    }

    /// `[(mass, vector) for −, for +]` without the center atom.
    fn outcome_moments(&self, x: &Vec3) -> Result<[(f64, Vec3); 2]> {
        match (&self.support, &self.response) {
            (Support::Sphere { grid, density }, ResponseRule::Hemisphere3D(_) | ResponseRule::WernerRadial { .. }) => {
                let n = self.response.hemisphere_normal(x)?.expect("hemisphere rule");
                Ok(grid.hemisphere_moments(&frame_with_pole(&n), |xi| density.eval(xi)))
            }
            (Support::Circle(c), ResponseRule::Planar2D(e)) => Ok(planar_moments(c, e, x)),
            _ => self.node_sum_moments(x),
        }
    }

    // Fallback for combinations without a dedicated rule: weighted node sums.
    fn node_sum_moments(&self, x: &Vec3) -> Result<[(f64, Vec3); 2]> {
        let nodes: Vec<(Vec3, f64)> = match &self.support {
            Support::Sphere { grid, density } => grid
                .nodes()
                .iter()
                .zip(grid.weights())
                .map(|(n, w)| (*n, w * density.eval(n)))
                .collect(),
            Support::Circle(c) => {
                let h = 2.0 * PI / c.len() as f64;
                (0..c.len()).map(|j| (c.direction(c.angle(j)), h * c.samples()[j])).collect()
            }
            Support::Atoms(atoms) => atoms.iter().map(|a| (a.direction, a.mass)).collect(),
        };
        let mut plus = (0.0, Vec3::zeros());
        let mut minus = (0.0, Vec3::zeros());
        for (xi, w) in nodes {
            let p = self.response.probability(x, Outcome::Plus, &xi)?;
            plus.0 += w * p;
            plus.1 += xi * (w * p);
            minus.0 += w * (1.0 - p);
            minus.1 += xi * (w * (1.0 - p));
        }
        Ok([minus, plus])
    }
}

fn planar_moments(c: &CircleDensity, e: &SteeringEllipsoid, x: &Vec3) -> [(f64, Vec3); 2] {
    let full = c.arc_moments(0.0, 2.0 * PI);
    match ResponseRule::planar_normal(e, x) {
        None => [(0.5 * full.0, full.1 * 0.5), (0.5 * full.0, full.1 * 0.5)],
        Some((weight, n)) => {
            let [u1, u2] = c.plane();
            let psi = n.dot(&u2).atan2(n.dot(&u1));
            let (inside, inside_v) = c.arc_moments(psi - PI / 2.0, psi + PI / 2.0);
            let (outside, outside_v) = (full.0 - inside, full.1 - inside_v);
            let hi = 0.5 * (1.0 + weight);
            let lo = 0.5 * (1.0 - weight);
            [
                (lo * inside + hi * outside, inside_v * lo + outside_v * hi),
                (hi * inside + lo * outside, inside_v * hi + outside_v * lo),
            ]
        }
    }
}

/// Outcome masses, probabilities and unnormalised Bloch vectors predicted by the model.
pub fn reconstruct(model: &GModel, x: &Vec3) -> Result<Reconstruction> {
    check_unit(x)?;
    let total = model.quantity();
    if !(total > 0.0) {
        return Err(SteerError::EmptyModel);
    }
    let [(raw_minus, s_minus), (raw_plus, s_plus)] = model.outcome_moments(x)?;
    let half_center = 0.5 * model.center_atom;
    let (raw_plus, raw_minus) = (raw_plus + half_center, raw_minus + half_center);
    let prob_plus = raw_plus / total;
    Ok(Reconstruction {
        prob_plus,
        prob_minus: 1.0 - prob_plus,
        raw_plus,
        raw_minus,
        s_plus,
        s_minus,
    })
}

/// Reconstructs many measurements in parallel; output order follows `xs`.
pub fn reconstruct_many(model: &GModel, xs: &[Vec3]) -> Result<Vec<Reconstruction>> {
    xs.par_iter().map(|x| reconstruct(model, x)).collect()
}

/// Uniform model `q = p/(2π)` for the Werner state `W(p)`; its figure is the sphere
/// of radius `p/2` with outer normal `-A`.
pub fn gmodel_werner(p: f64, grid: &QuadratureGrid) -> Result<GModel> {
    if !(0.0..=1.0).contains(&p) {
        return Err(SteerError::Domain(format!("Werner weight p = {p} outside [0, 1]")));
    }
    GModel::new(
        Support::Sphere {
            grid: grid.clone(),
            density: SphereDensity::uniform(p / (2.0 * PI)),
        },
        0.0,
        ResponseRule::WernerRadial { orientation: -1.0 },
    )
}

/// Circle-supported model of the centered ellipse with semi-axes `sigma1 ≥ sigma2 > 0`
/// in the `x`–`y` plane.
pub fn gmodel_2d(sigma1: f64, sigma2: f64, resolution: usize) -> Result<GModel> {
    if !(0.5 >= sigma1 && sigma1 >= sigma2 && sigma2 > 0.0) {
        return Err(SteerError::Domain(format!(
            "semi-axes ({sigma1}, {sigma2}) must satisfy ½ ≥ σ₁ ≥ σ₂ > 0; a segment needs the 1D model"
        )));
    }
    let figure = SteeringEllipsoid::new(Vec3::zeros(), Mat3::from_diagonal(&Vec3::new(sigma1, sigma2, 0.0)));
    gmodel_planar(&figure, resolution)
}

/// Circle-supported model of any centered flat figure.
///
/// With eccentric anomaly `t` the rim point is `(σ₁cos t, σ₂sin t)` in the figure's
/// principal axes. The density per radian of tangent angle `θ'` is
/// `|s|/(2 cos α) · dθ/dθ'`, where `θ` is the polar angle of the rim point and `α`
/// the angle between the rim point and its normal. All three are closed-form in `t`.
pub fn gmodel_planar(figure: &SteeringEllipsoid, resolution: usize) -> Result<GModel> {
    if figure.dimension() != 2 {
        return Err(SteerError::UnsupportedDimension {
            dimension: figure.dimension(),
            reason: "the circle-supported model needs a flat figure".into(),
        });
    }
    let figure = figure.centered();
    let s = figure.semi_axes();
    let (a, b) = (s[0], s[1]);
    let axes = figure.axes();
    let plane = [axes.column(0).into_owned(), axes.column(1).into_owned()];
    let samples = (0..resolution)
        .map(|j| {
            let theta_prime = 2.0 * PI * j as f64 / resolution as f64;
            let psi = theta_prime - PI / 2.0;
            let t = (b * psi.sin()).atan2(a * psi.cos());
            let (st, ct) = t.sin_cos();
            let radius_sq = a * a * ct * ct + b * b * st * st;
            let normal_sq = b * b * ct * ct + a * a * st * st;
            let cos_alpha = a * b / (radius_sq * normal_sq).sqrt();
            let dtheta_dt = a * b / radius_sq;
            let dpsi_dt = a * b / normal_sq;
            radius_sq.sqrt() / (2.0 * cos_alpha) * dtheta_dt / dpsi_dt
        })
        .collect();
    GModel::new(Support::Circle(CircleDensity::new(plane, samples)?), 0.0, ResponseRule::Planar2D(figure))
}

/// Two atoms of mass `L/2` at `±axis`; the figure is the segment `[-L/2, L/2]·axis`.
pub fn gmodel_1d(length: f64, axis: &Vec3) -> Result<GModel> {
    if !(0.0..=1.0).contains(&length) {
        return Err(SteerError::Domain(format!("segment length {length} outside [0, 1]")));
    }
    check_unit(axis)?;
    let atoms = if length == 0.0 {
        Vec::new()
    } else {
        vec![
            Atom {
                direction: *axis,
                mass: 0.5 * length,
            },
            Atom {
                direction: -axis,
                mass: 0.5 * length,
            },
        ]
    };
    GModel::new(
        Support::Atoms(atoms),
        0.0,
        ResponseRule::Segment1D {
            axis: *axis,
            input_axis: *axis,
        },
    )
}

fn phi_range(p: f64) -> Result<()> {
    if !(p > 0.0 && p <= 0.2) {
        return Err(SteerError::Domain(format!("p = {p} outside (0, 1/5]")));
    }
    Ok(())
}

fn quarter_sphere() -> SteeringEllipsoid {
    SteeringEllipsoid::new(Vec3::zeros(), Mat3::identity() * -0.25)
}

/// `q_X(ξ) = (1 + 3p u·ξ)/(4π)` for `φ(p)` steered from Bob to Alice; `u` is Alice's
/// Bloch direction.
pub fn gmodel_phi_b_to_a(p: f64, u: &Vec3, grid: &QuadratureGrid) -> Result<GModel> {
    phi_range(p)?;
    check_unit(u)?;
    GModel::new(
        Support::Sphere {
            grid: grid.clone(),
            density: SphereDensity::with_dipole(1.0 / (4.0 * PI), u * (3.0 * p / (4.0 * PI))),
        },
        0.0,
        ResponseRule::Hemisphere3D(quarter_sphere()),
    )
}

/// `q_Y(ξ) = (1 + 2p u·ξ)/(4π)`: the Alice-to-Bob candidate fixed by Alice's marginals;
/// `u` is Bob's Bloch direction.
pub fn candidate_q_y(p: f64, u: &Vec3, grid: &QuadratureGrid) -> Result<GModel> {
    phi_range(p)?;
    check_unit(u)?;
    GModel::new(
        Support::Sphere {
            grid: grid.clone(),
            density: SphereDensity::with_dipole(1.0 / (4.0 * PI), u * (2.0 * p / (4.0 * PI))),
        },
        0.0,
        ResponseRule::Hemisphere3D(quarter_sphere()),
    )
}

fn sphere_parts(model: &GModel) -> Result<(&QuadratureGrid, &SphereDensity)> {
    match (&model.support, &model.response) {
        (Support::Sphere { grid, density }, ResponseRule::Hemisphere3D(_) | ResponseRule::WernerRadial { .. }) => {
            Ok((grid, density))
        }
        _ => Err(SteerError::UnsupportedForm(
            "translations are defined for sphere densities with a hemisphere response".into(),
        )),
    }
}

/// Largest deviation of the even part of `q` from its mean, over the grid nodes.
pub fn even_anisotropy(model: &GModel) -> Result<f64> {
    let (grid, density) = sphere_parts(model)?;
    let mean = grid.integrate(|xi| density.even_part(xi)) / (4.0 * PI);
    Ok(grid
        .nodes()
        .iter()
        .map(|n| (density.even_part(n) - mean).abs())
        .fold(0.0, f64::max))
}

/// Shift of the model's figure away from the centered Werner figure: the odd part of
/// `q` times `ξ`, integrated over the hemisphere centred on the odd part's axis.
/// Densities with even anisotropy are refused.
pub fn translation_of(model: &GModel) -> Result<TranslationVector> {
    let (grid, density) = sphere_parts(model)?;
    let residual = even_anisotropy(model)?;
    if residual > EVEN_RESIDUAL_TOL {
        return Err(SteerError::UnsupportedForm(format!(
            "even part varies by {residual:.3e} over the sphere; only isotropic + odd densities have a translation"
        )));
    }
    let axis = if density.dipole.norm() > 0.0 {
        density.dipole.normalize()
    } else {
        Vec3::z()
    };
    let [_, (_, t)] = grid.hemisphere_moments(&frame_with_pole(&axis), |xi| density.odd_part(xi));
    Ok(TranslationVector { t })
}

/// `½ ∫ q ξ dσ` over the whole sphere, which equals the hemisphere integral of the
/// odd part for any hemisphere. Defined for every sphere density.
pub fn odd_part_translation(model: &GModel) -> Result<TranslationVector> {
    let (grid, density) = sphere_parts(model)?;
    let [(_, lower), (_, upper)] = grid.hemisphere_moments(&Mat3::identity(), |xi| density.eval(xi));
    Ok(TranslationVector { t: (lower + upper) * 0.5 })
}

/// Mean and spread of `s₊(A) − s₊ᵂ(A)` over `xs`, where `ᵂ` is the model with `q`
/// replaced by its isotropic part.
pub fn translation_by_subtraction(model: &GModel, xs: &[Vec3]) -> Result<(Vec3, f64)> {
    let (grid, density) = sphere_parts(model)?;
    if xs.is_empty() {
        return Err(SteerError::Domain("need at least one measurement".into()));
    }
    let mean_value = grid.integrate(|xi| density.eval(xi)) / (4.0 * PI);
    let werner = GModel::new(
        Support::Sphere {
            grid: grid.clone(),
            density: SphereDensity::uniform(mean_value),
        },
        model.center_atom,
        model.response.clone(),
    )?;
    let shifts: Vec<Vec3> = xs
        .par_iter()
        .map(|x| Ok(reconstruct(model, x)?.s_plus - reconstruct(&werner, x)?.s_plus))
        .collect::<Result<_>>()?;
    let mean = shifts.iter().fold(Vec3::zeros(), |acc, s| acc + s) / shifts.len() as f64;
    let spread = shifts.iter().map(|s| (s - mean).norm()).fold(0.0, f64::max);
    Ok((mean, spread))
}
