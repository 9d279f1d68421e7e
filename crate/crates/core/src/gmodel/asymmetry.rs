//! One-way steering of `φ(p)`.
//!
//! From Bob to Alice the dipole density `q_X` reproduces Alice's whole assemblage with
//! `𝕊 = 1`. From Alice to Bob the marginals pin down the odd part of any `𝕊 = 1`
//! hemisphere model, and the translation that odd part produces is `(p/3)·u_Y`
//! while Bob's figure sits at `(3p/4)·u_Y`.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::{
    candidate_q_y, gmodel_phi_b_to_a, reconstruct_many, translation_by_subtraction, translation_of, GModel,
    SphereDensity, Support,
};
use crate::error::{Result, SteerError};
use crate::fourier::{
    marginal_mismatch, translation_certificate, translation_uniqueness_check, TranslationCertificate,
    UniquenessReport, DEFAULT_SAMPLES, TRANSLATION_TOL,
};
use crate::geometry::{sample_assemblage, SteeringDirection};
use crate::quadrature::QuadratureGrid;
use crate::quantity::steering_quantity;
use crate::qubit::{check_unit, CorrelationMatrix, Mat3, Vec3};
use crate::sphere::{fibonacci_sphere, frame_with_pole};

/// Number of test measurements used to compare a model with the state.
pub const TEST_MEASUREMENTS: usize = 200;
/// Below this mismatch the two directions cannot be told apart numerically.
pub const LIMIT_FLAG: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Steerable,
    Unsteerable,
    Unknown,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Steerable => "steerable",
            Verdict::Unsteerable => "unsteerable",
            Verdict::Unknown => "unknown",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectionFinding {
    pub direction: SteeringDirection,
    pub model: String,
    pub model_quantity: f64,
    pub required_translation: Vec3,
    pub achieved_translation: Vec3,
    pub mismatch: f64,
    /// Translation measured by subtracting the centered reconstruction.
    pub subtraction_translation: Vec3,
    pub max_probability_error: f64,
    pub max_figure_error: f64,
    pub certificate: TranslationCertificate,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymmetryReport {
    pub p: f64,
    pub u_x: Vec3,
    pub u_y: Vec3,
    pub grid: (usize, usize),
    /// `𝕊_G` of the state's basic figure, equal in both directions.
    pub basic_quantity: f64,
    pub bob_to_alice: DirectionFinding,
    pub alice_to_bob: DirectionFinding,
    /// The candidate against itself plus a marginal-preserving even term.
    pub uniqueness: UniquenessReport,
    /// `max |p_X(+|A) − p_Y(+|A)|`: the two models answer different marginal problems.
    pub cross_model_marginal_gap: f64,
    pub near_werner_limit: bool,
}

pub fn asymmetry_report(p: f64, u: &Vec3) -> Result<AsymmetryReport> {
    asymmetry_report_with(p, u, &QuadratureGrid::default_grid())
}

pub fn asymmetry_report_with(p: f64, u: &Vec3, grid: &QuadratureGrid) -> Result<AsymmetryReport> {
    check_unit(u)?;
    let state = CorrelationMatrix::phi_state(p, *u)?;
    let u_x = *u;
    let u_y = -*u;
    let tests = fibonacci_sphere(TEST_MEASUREMENTS);

    let q_x = gmodel_phi_b_to_a(p, &u_x, grid)?;
    let q_y = candidate_q_y(p, &u_y, grid)?;

    let b2a = finding(&state, SteeringDirection::BobToAlice, &q_x, "q_X", &tests)?;
    let mut a2b = finding(&state, SteeringDirection::AliceToBob, &q_y, "q_Y candidate", &tests)?;
    a2b.verdict = if a2b.certificate.mismatch > TRANSLATION_TOL {
        Verdict::Steerable
    } else {
        Verdict::Unknown
    };

    let uniqueness = translation_uniqueness_check(&q_y, &with_even_perturbation(&q_y, &u_y, p)?)?;
    let basic_quantity = steering_quantity(&state, SteeringDirection::AliceToBob, grid)?.value;

    Ok(AsymmetryReport {
        p,
        u_x,
        u_y,
        grid: grid.resolution(),
        basic_quantity,
        near_werner_limit: a2b.certificate.mismatch <= LIMIT_FLAG,
        bob_to_alice: b2a,
        alice_to_bob: a2b,
        uniqueness,
        cross_model_marginal_gap: marginal_mismatch(&q_x, &q_y, &tests)?,
    })
}

fn finding(
    state: &CorrelationMatrix,
    direction: SteeringDirection,
    model: &GModel,
    name: &str,
    tests: &[Vec3],
) -> Result<DirectionFinding> {
    let target = sample_assemblage(state, direction, tests)?;
    let rec = reconstruct_many(model, tests)?;
    let mut prob_err: f64 = 0.0;
    let mut fig_err: f64 = 0.0;
    for (t, r) in target.iter().zip(&rec) {
        prob_err = prob_err.max((t.plus.prob - r.prob_plus).abs()).max((t.minus.prob - r.prob_minus).abs());
        fig_err = fig_err
            .max((t.plus.shrinked - r.s_plus).norm())
            .max((t.minus.shrinked - r.s_minus).norm());
    }
    let certificate = translation_certificate(state, direction, DEFAULT_SAMPLES)?;
    let achieved = translation_of(model)?.t;
    let required = certificate.required_translation;
    let (subtraction, _) = translation_by_subtraction(model, tests)?;
    let quantity = model.quantity();
    let reproduces = quantity <= 1.0 + 1e-9 && prob_err < 1e-6 && fig_err < 1e-6;
    Ok(DirectionFinding {
        direction,
        model: name.to_string(),
        model_quantity: quantity,
        required_translation: required,
        achieved_translation: achieved,
        mismatch: (required - achieved).norm(),
        subtraction_translation: subtraction,
        max_probability_error: prob_err,
        max_figure_error: fig_err,
        certificate,
        verdict: if reproduces { Verdict::Unsteerable } else { Verdict::Unknown },
    })
}

/// Adds `ε·(3(ξ·u)² − 1)` with `ε` at a quarter of what keeps `q ≥ 0`. Traceless, so
/// every hemisphere mass is unchanged.
fn with_even_perturbation(model: &GModel, u: &Vec3, p: f64) -> Result<GModel> {
    let Support::Sphere { grid, density } = model.support() else {
        return Err(SteerError::UnsupportedForm("perturbation needs a sphere density".into()));
    };
    let frame = frame_with_pole(u);
    let q = frame * Mat3::from_diagonal(&Vec3::new(-1.0, -1.0, 2.0)) * frame.transpose();
    let floor = (1.0 - 2.0 * p) / (4.0 * PI);
    let eps = 0.25 * floor / 2.0;
    let density = SphereDensity {
        quadrupole: density.quadrupole + q * eps,
        ..*density
    };
    GModel::new(
        Support::Sphere {
            grid: grid.clone(),
            density,
        },
        model.center_atom(),
        model.response().clone(),
    )
}
