//! Densities `q(ξ)` over the unit sphere and over a great circle.

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

use crate::error::{Result, SteerError};
use crate::qubit::{Mat3, Vec3};

/// A polynomial density of degree at most two:
/// `q(ξ) = constant + dipole·ξ + ξᵗ Q ξ` with `Q` symmetric and traceless.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereDensity {
    pub constant: f64,
    pub dipole: Vec3,
    pub quadrupole: Mat3,
}

impl SphereDensity {
    pub fn uniform(value: f64) -> Self {
        Self {
            constant: value,
            dipole: Vec3::zeros(),
            quadrupole: Mat3::zeros(),
        }
    }

    pub fn with_dipole(constant: f64, dipole: Vec3) -> Self {
        Self {
            constant,
            dipole,
            quadrupole: Mat3::zeros(),
        }
    }

    /// Adds `ξᵗ Q ξ`; `Q` is symmetrised and its trace removed so that the
    /// isotropic part stays in `constant`.
    pub fn plus_quadrupole(mut self, q: Mat3) -> Self {
        let sym = 0.5 * (q + q.transpose());
        let trace = sym.trace();
        self.quadrupole += sym - Mat3::identity() * (trace / 3.0);
        self.constant += trace / 3.0;
        self
    }

    pub fn eval(&self, xi: &Vec3) -> f64 {
        self.constant + self.dipole.dot(xi) + xi.dot(&(self.quadrupole * xi))
    }

    /// `½(q(ξ) − q(−ξ))`.
    pub fn odd_part(&self, xi: &Vec3) -> f64 {
        self.dipole.dot(xi)
    }

    /// `½(q(ξ) + q(−ξ))`.
    pub fn even_part(&self, xi: &Vec3) -> f64 {
        self.constant + xi.dot(&(self.quadrupole * xi))
    }

    /// Minimum over the sphere: dense sampling, then projected gradient steps.
    pub fn minimum(&self) -> f64 {
        let mut best = f64::INFINITY;
        let step = 0.5 / (self.dipole.norm() + 2.0 * self.quadrupole.norm() + 1e-300);
        for xi in crate::sphere::fibonacci_sphere(500) {
            let mut x = xi;
            for _ in 0..200 {
                let grad = self.dipole + 2.0 * self.quadrupole * x;
                let tangent = grad - x * grad.dot(&x);
                if tangent.norm() < 1e-15 {
                    break;
                }
                x = (x - step * tangent).normalize();
            }
            best = best.min(self.eval(&x)).min(self.eval(&xi));
        }
        best
    }
}

/// A density per radian on the great circle spanned by the orthonormal pair `plane`.
/// The angle `θ'` is measured from `plane[0]` towards `plane[1]`; samples sit at
/// `θ'_j = 2πj/N`.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleDensity {
    plane: [Vec3; 2],
    samples: Vec<f64>,
    coefficients: Vec<Complex64>,
}

impl CircleDensity {
    pub fn new(plane: [Vec3; 2], samples: Vec<f64>) -> Result<Self> {
        let n = samples.len();
        if n < 8 || !n.is_multiple_of(2) {
            return Err(SteerError::Domain(format!("circle density needs an even sample count ≥ 8, got {n}")));
        }
        if (plane[0].norm() - 1.0).abs() > 1e-12
            || (plane[1].norm() - 1.0).abs() > 1e-12
            || plane[0].dot(&plane[1]).abs() > 1e-12
        {
            return Err(SteerError::Precondition("circle plane must be spanned by an orthonormal pair".into()));
        }
        if let Some(v) = samples.iter().find(|v| !(**v >= 0.0) || !v.is_finite()) {
            return Err(SteerError::Domain(format!("density value {v} is negative or not finite")));
        }
        let mut buf: Vec<Complex64> = samples.iter().map(|v| Complex64::new(*v, 0.0)).collect();
        FftPlanner::new().plan_fft_forward(n).process(&mut buf);
        let scale = 1.0 / n as f64;
        buf.iter_mut().for_each(|c| *c *= scale);
        Ok(Self {
            plane,
            samples,
            coefficients: buf,
        })
    }

    pub fn plane(&self) -> [Vec3; 2] {
        self.plane
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn angle(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.samples.len() as f64
    }

    pub fn direction(&self, theta: f64) -> Vec3 {
        self.plane[0] * theta.cos() + self.plane[1] * theta.sin()
    }

    pub fn normal(&self) -> Vec3 {
        self.plane[0].cross(&self.plane[1])
    }

    fn frequency(&self, k: usize) -> i64 {
        let n = self.samples.len();
        if k < n / 2 {
            k as i64
        } else {
            k as i64 - n as i64
        }
    }

    /// Trigonometric interpolant at `θ`. The Nyquist term is dropped.
    pub fn value_at(&self, theta: f64) -> f64 {
        let half = self.samples.len() / 2;
        self.coefficients
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != half)
            .map(|(k, c)| (c * Complex64::cis(self.frequency(k) as f64 * theta)).re)
            .sum()
    }

    /// `∫ q dθ'` over the whole circle.
    pub fn total(&self) -> f64 {
        2.0 * PI * self.coefficients[0].re
    }

    /// `(∫ q dθ', ∫ q ξ dθ')` over the arc `[alpha, beta]`, integrating the
    /// interpolant term by term.
    pub fn arc_moments(&self, alpha: f64, beta: f64) -> (f64, Vec3) {
        let primitive = |n: i64| -> Complex64 {
            if n == 0 {
                Complex64::new(beta - alpha, 0.0)
            } else {
                let nf = n as f64;
                (Complex64::cis(nf * beta) - Complex64::cis(nf * alpha)) / Complex64::new(0.0, nf)
            }
        };
        let half = self.samples.len() / 2;
        let mut scalar = Complex64::new(0.0, 0.0);
        let mut cos_m = Complex64::new(0.0, 0.0);
        let mut sin_m = Complex64::new(0.0, 0.0);
        for (k, c) in self.coefficients.iter().enumerate() {
            if k == half {
                continue;
            }
            let n = self.frequency(k);
            let (up, mid, down) = (primitive(n + 1), primitive(n), primitive(n - 1));
            scalar += c * mid;
            cos_m += c * (up + down) * 0.5;
            sin_m += c * (up - down) / Complex64::new(0.0, 2.0);
        }
        (scalar.re, self.plane[0] * cos_m.re + self.plane[1] * sin_m.re)
    }
}
