//! Steering ellipsoids, their outer normals and support values.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SteerError};
use crate::qubit::{check_unit, conditioned_state, sorted_svd, ConditionedState, CorrelationMatrix, Mat3, Outcome, Vec3};

/// Relative threshold below which a singular value of the shape map counts as zero.
pub const RANK_TOL: f64 = 1e-9;
/// Upper end of the band in which a nonzero singular value is reported as borderline.
pub const BORDERLINE_RATIO: f64 = 1e-6;

/// Which party measures. `AliceToBob` means Alice measures and Bob's figure is analysed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SteeringDirection {
    #[serde(rename = "a2b")]
    AliceToBob,
    #[serde(rename = "b2a")]
    BobToAlice,
}

impl SteeringDirection {
    pub const BOTH: [SteeringDirection; 2] = [SteeringDirection::AliceToBob, SteeringDirection::BobToAlice];

    pub fn label(self) -> &'static str {
        match self {
            SteeringDirection::AliceToBob => "a2b",
            SteeringDirection::BobToAlice => "b2a",
        }
    }

    /// The state as seen with the measuring party in Alice's slot.
    pub fn oriented(self, g: &CorrelationMatrix) -> CorrelationMatrix {
        match self {
            SteeringDirection::AliceToBob => *g,
            SteeringDirection::BobToAlice => g.swap_parties(),
        }
    }
}

/// The image `{center + M x : |x| = 1}` of the measurement sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteeringEllipsoid {
    center: Vec3,
    shape: Mat3,
    dimension: usize,
    semi_axes: Vec3,
    /// Columns are the principal axes of the figure (left singular vectors of `M`).
    axes: Mat3,
    /// Columns are the measurement directions mapped onto `axes` (right singular vectors).
    input_axes: Mat3,
}

impl SteeringEllipsoid {
    pub fn new(center: Vec3, shape: Mat3) -> Self {
        let (axes, semi_axes, input_axes) = sorted_svd(&shape);
        let cutoff = RANK_TOL * semi_axes[0].max(1.0);
        let dimension = semi_axes.iter().filter(|s| **s >= cutoff).count();
        Self {
            center,
            shape,
            dimension,
            semi_axes,
            axes,
            input_axes,
        }
    }

    pub fn center(&self) -> Vec3 {
        self.center
    }

    pub fn shape(&self) -> Mat3 {
        self.shape
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Semi-axis lengths `σ₁ ≥ σ₂ ≥ σ₃`.
    pub fn semi_axes(&self) -> Vec3 {
        self.semi_axes
    }

    pub fn axes(&self) -> Mat3 {
        self.axes
    }

    pub fn input_axes(&self) -> Mat3 {
        self.input_axes
    }

    /// Smallest ratio `σ_k / σ₁` over the singular values classified as nonzero.
    pub fn conditioning(&self) -> f64 {
        if self.dimension == 0 {
            return 0.0;
        }
        self.semi_axes[self.dimension - 1] / self.semi_axes[0]
    }

    /// True when some singular value sits in the band `[1e-9, 1e-6]·σ₁`.
    pub fn is_borderline(&self) -> bool {
        let s1 = self.semi_axes[0];
        s1 > 0.0
            && self.semi_axes.iter().skip(1).any(|s| {
                let r = s / s1;
                (RANK_TOL..=BORDERLINE_RATIO).contains(&r)
            })
    }

    /// Same shape with the center moved to the origin.
    pub fn centered(&self) -> Self {
        Self {
            center: Vec3::zeros(),
            ..*self
        }
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self::new(self.center, self.shape * c)
    }

    /// Support value `max_{|x|=1} n·(Mx) = |Mᵗ n|` of the centered figure.
    pub fn support_value(&self, n: &NormalVector) -> f64 {
        (self.shape.transpose() * n.0).norm()
    }

    /// Boundary point associated with measurement direction `x`, relative to the center.
    ///
    /// In three dimensions this is `Mx`. For flat figures `x` is first projected onto the
    /// row space of `M` and renormalised, so that the point lies on the rim.
    pub fn rim_point(&self, x: &Vec3) -> Result<Vec3> {
        let xr = self.row_space_direction(x)?;
        Ok(self.shape * xr)
    }

    fn row_space_direction(&self, x: &Vec3) -> Result<Vec3> {
        let mut proj = Vec3::zeros();
        for k in 0..self.dimension {
            let v = self.input_axes.column(k);
            proj += v * v.dot(x);
        }
        let n = proj.norm();
        if n < 1e-12 {
            return Err(SteerError::Precondition(
                "measurement direction is orthogonal to the plane of the figure".into(),
            ));
        }
        Ok(proj / n)
    }

    /// Outer normal at the rim point of `x`: the direction of `(M⁺)ᵗ x`, which for
    /// flat figures stays inside their plane.
    pub fn normal_at(&self, x: &Vec3) -> Result<NormalVector> {
        if self.dimension < 2 {
            return Err(SteerError::UnsupportedDimension {
                dimension: self.dimension,
                reason: "outer normals of a segment or dot are the two segment directions".into(),
            });
        }
        let mut n = Vec3::zeros();
        for k in 0..self.dimension {
            let v = self.input_axes.column(k);
            n += self.axes.column(k) * (v.dot(x) / self.semi_axes[k]);
        }
        NormalVector::new(n).map_err(|_| {
            SteerError::Precondition("measurement direction has no component in the figure's plane".into())
        })
    }
}

/// A unit outer normal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalVector(Vec3);

impl NormalVector {
    /// Normalises `v`; fails on a zero vector.
    pub fn new(v: Vec3) -> Result<Self> {
        let n = v.norm();
        if !n.is_finite() || n < 1e-300 {
            return Err(SteerError::Precondition("normal vector must be nonzero".into()));
        }
        Ok(Self(v / n))
    }

    pub fn as_vec(&self) -> Vec3 {
        self.0
    }
}

/// The steering figure of `g` for the given direction.
pub fn ellipsoid_of(g: &CorrelationMatrix, direction: SteeringDirection) -> SteeringEllipsoid {
    match direction {
        SteeringDirection::AliceToBob => SteeringEllipsoid::new(g.b() * 0.5, g.t().transpose() * 0.5),
        SteeringDirection::BobToAlice => SteeringEllipsoid::new(g.a() * 0.5, g.t() * 0.5),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssemblageSample {
    pub direction: Vec3,
    pub plus: ConditionedState,
    pub minus: ConditionedState,
}

pub fn sample_assemblage(
    g: &CorrelationMatrix,
    direction: SteeringDirection,
    directions: &[Vec3],
) -> Result<Vec<AssemblageSample>> {
    let oriented = direction.oriented(g);
    directions
        .iter()
        .map(|x| {
            check_unit(x)?;
            Ok(AssemblageSample {
                direction: *x,
                plus: conditioned_state(&oriented, x, Outcome::Plus)?,
                minus: conditioned_state(&oriented, x, Outcome::Minus)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere::fibonacci_sphere;

    #[test]
    fn werner_figure_is_a_sphere() {
        let e = ellipsoid_of(&CorrelationMatrix::werner(0.8).unwrap(), SteeringDirection::AliceToBob);
        assert_eq!(e.dimension(), 3);
        assert!(e.center().norm() == 0.0);
        for s in e.semi_axes().iter() {
            assert!((s - 0.4).abs() < 1e-14);
        }
    }

    #[test]
    fn phi_figures_are_translated_quarter_spheres() {
        let u = Vec3::new(1.0, 1.0, 0.0).normalize();
        let p = 0.15;
        let g = CorrelationMatrix::phi_state(p, u).unwrap();
        let ex = ellipsoid_of(&g, SteeringDirection::BobToAlice);
        assert!((ex.center() - u * (p / 2.0)).norm() < 1e-15);
        let ey = ellipsoid_of(&g, SteeringDirection::AliceToBob);
        assert!((ey.center() + u * (0.75 * p)).norm() < 1e-15);
        for e in [ex, ey] {
            assert!(e.semi_axes().iter().all(|s| (s - 0.25).abs() < 1e-14));
        }
    }

    #[test]
    fn support_values() {
        let e = SteeringEllipsoid::new(Vec3::zeros(), Mat3::from_diagonal(&Vec3::new(0.3, 0.2, 0.1)));
        let n = NormalVector::new(Vec3::x()).unwrap();
        assert!((e.support_value(&n) - 0.3).abs() < 1e-15);
        let zero = SteeringEllipsoid::new(Vec3::zeros(), Mat3::zeros());
        assert_eq!(zero.support_value(&n), 0.0);
        assert_eq!(zero.dimension(), 0);
    }

    #[test]
    fn sphere_normals_are_radial() {
        let e = SteeringEllipsoid::new(Vec3::zeros(), Mat3::identity() * -0.25);
        for x in fibonacci_sphere(20) {
            let n = e.normal_at(&x).unwrap().as_vec();
            let s = e.shape() * x;
            assert!((n - s.normalize()).norm() < 1e-14);
        }
    }

    #[test]
    fn planar_normal_on_principal_axis() {
        let e = SteeringEllipsoid::new(Vec3::zeros(), Mat3::from_diagonal(&Vec3::new(0.4, 0.1, 0.0)));
        assert_eq!(e.dimension(), 2);
        let n = e.normal_at(&Vec3::x()).unwrap().as_vec();
        assert!((n - Vec3::x()).norm() < 1e-15);
        assert!(e.normal_at(&Vec3::z()).is_err());
    }

    #[test]
    fn low_dimension_normals_are_refused() {
        let e = SteeringEllipsoid::new(Vec3::zeros(), Mat3::from_diagonal(&Vec3::new(0.4, 0.0, 0.0)));
        assert!(matches!(e.normal_at(&Vec3::x()), Err(SteerError::UnsupportedDimension { dimension: 1, .. })));
    }

    #[test]
    fn borderline_ratio_is_flagged() {
        let e = SteeringEllipsoid::new(Vec3::zeros(), Mat3::from_diagonal(&Vec3::new(0.4, 0.3, 1e-8)));
        assert_eq!(e.dimension(), 3);
        assert!(e.is_borderline());
        let e = SteeringEllipsoid::new(Vec3::zeros(), Mat3::from_diagonal(&Vec3::new(0.4, 0.3, 1e-11)));
        assert_eq!(e.dimension(), 2);
        assert!(!e.is_borderline());
    }

    #[test]
    fn segment_length_is_twice_the_largest_semi_axis() {
        let shape = Vec3::new(0.1, 0.2, -0.3) * Vec3::new(0.6, 0.0, 0.8).transpose();
        let e = SteeringEllipsoid::new(Vec3::zeros(), shape);
        assert_eq!(e.dimension(), 1);
        let s1 = e.semi_axes()[0];
        let ends = [e.shape() * Vec3::new(0.6, 0.0, 0.8), e.shape() * Vec3::new(-0.6, 0.0, -0.8)];
        assert!(((ends[0] - ends[1]).norm() - 2.0 * s1).abs() < 1e-15);
    }

    #[test]
    fn assemblage_of_werner_half() {
        let g = CorrelationMatrix::werner(0.5).unwrap();
        let samples = sample_assemblage(&g, SteeringDirection::AliceToBob, &fibonacci_sphere(100)).unwrap();
        for s in samples {
            assert!((s.plus.shrinked.norm() - 0.25).abs() < 1e-15);
            assert!((s.plus.prob + s.minus.prob - 1.0).abs() == 0.0);
        }
    }

    #[test]
    fn assemblage_of_uncorrelated_state_sits_at_center() {
        let b = Vec3::new(0.1, -0.3, 0.2);
        let g = CorrelationMatrix::new(Vec3::zeros(), b, Mat3::zeros()).unwrap();
        for s in sample_assemblage(&g, SteeringDirection::AliceToBob, &fibonacci_sphere(10)).unwrap() {
            assert!((s.plus.shrinked - b / 2.0).norm() < 1e-16);
        }
    }

    #[test]
    fn assemblage_rejects_non_unit_direction() {
        let g = CorrelationMatrix::werner(0.5).unwrap();
        assert!(sample_assemblage(&g, SteeringDirection::BobToAlice, &[Vec3::new(2.0, 0.0, 0.0)]).is_err());
    }
}
