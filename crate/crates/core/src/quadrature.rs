//! Product quadrature on the unit sphere.
//!
//! The polar direction uses Gauss–Legendre nodes in `cos θ`, applied separately on
//! the upper and lower halves `[0, 1]` and `[-1, 0]`. The azimuth uses the uniform
//! trapezoid rule. Because the equator is a cell boundary, rotating the grid so that
//! its pole points along `n` turns any hemisphere `{ξ·n ≥ 0}` into a set of whole rows.

use rayon::prelude::*;
use std::f64::consts::PI;

use crate::error::{Result, SteerError};
use crate::qubit::{Mat3, Vec3};

pub const DEFAULT_THETA: usize = 128;
pub const DEFAULT_PHI: usize = 256;

/// Gauss–Legendre nodes and weights on `[-1, 1]`, nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi-style initial guess, refined by Newton on P_n.
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Nodes and weights of a product rule on the unit sphere. Weights sum to `4π`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureGrid {
    n_theta: usize,
    n_phi: usize,
    nodes: Vec<Vec3>,
    weights: Vec<f64>,
}

impl QuadratureGrid {
    /// `n_theta` polar nodes (even, split between hemispheres) times `n_phi` azimuths.
    pub fn product(n_theta: usize, n_phi: usize) -> Result<Self> {
        if n_theta < 2 || !n_theta.is_multiple_of(2) || n_phi < 3 {
            return Err(SteerError::Domain(format!(
                "grid {n_theta}x{n_phi}: need an even polar count ≥ 2 and at least 3 azimuths"
            )));
        }
        let half = n_theta / 2;
        let (x, w) = gauss_legendre(half);
        // Map [-1,1] onto [-1,0] then [0,1]; rows run from south to north.
        let mut cos_theta = Vec::with_capacity(n_theta);
        let mut row_weight = Vec::with_capacity(n_theta);
        for offset in [-0.5, 0.5] {
            for (xi, wi) in x.iter().zip(&w) {
                cos_theta.push(0.5 * xi + offset);
                row_weight.push(0.5 * wi);
            }
        }
        let dphi = 2.0 * PI / n_phi as f64;
        let mut nodes = Vec::with_capacity(n_theta * n_phi);
        let mut weights = Vec::with_capacity(n_theta * n_phi);
        for (ct, rw) in cos_theta.iter().zip(&row_weight) {
            let st = (1.0 - ct * ct).max(0.0).sqrt();
            for j in 0..n_phi {
                let phi = (j as f64 + 0.5) * dphi;
                nodes.push(Vec3::new(st * phi.cos(), st * phi.sin(), *ct));
                weights.push(rw * dphi);
            }
        }
        Ok(Self {
            n_theta,
            n_phi,
            nodes,
            weights,
        })
    }

    /// Default `128 × 256` grid scaled by `2^level` in both directions.
    pub fn at_level(level: i32) -> Result<Self> {
        let scale = |base: usize| -> Result<usize> {
            if level >= 0 {
                base.checked_shl(level as u32)
                    .filter(|v| *v <= 1 << 16)
                    .ok_or_else(|| SteerError::Domain(format!("grid level {level} too large")))
            } else {
                let shift = (-level) as u32;
                if shift > 5 {
                    return Err(SteerError::Domain(format!("grid level {level} too small")));
                }
                Ok(base >> shift)
            }
        };
        Self::product(scale(DEFAULT_THETA)?, scale(DEFAULT_PHI)?)
    }

    pub fn default_grid() -> Self {
        Self::product(DEFAULT_THETA, DEFAULT_PHI).expect("default grid is valid")
    }

    /// The grid with half as many nodes in each direction, used for error estimates.
    pub fn half_resolution(&self) -> Result<Self> {
        let nt = (self.n_theta / 2).max(2);
        Self::product(nt + nt % 2, (self.n_phi / 2).max(3))
    }

    pub fn resolution(&self) -> (usize, usize) {
        (self.n_theta, self.n_phi)
    }

    pub fn nodes(&self) -> &[Vec3] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `∫ f dσ` with nodes mapped through `frame`. Rows are summed in parallel and then
    /// combined in a fixed order, so the result does not depend on the thread count.
    pub fn integrate_in_frame<F>(&self, frame: &Mat3, f: F) -> f64
    where
        F: Fn(&Vec3) -> f64 + Sync,
    {
        self.row_sums(frame, |_, xi| f(xi)).into_iter().sum()
    }

    pub fn integrate<F>(&self, f: F) -> f64
    where
        F: Fn(&Vec3) -> f64 + Sync,
    {
        self.integrate_in_frame(&Mat3::identity(), f)
    }

    /// Zeroth and first moments `(∫ f dσ, ∫ f ξ dσ)` over the two hemispheres of
    /// `frame`, split at its equator. Index 0 is the lower half, index 1 the upper
    /// half `{ξ · frame[:,2] > 0}`.
    pub fn hemisphere_moments<F>(&self, frame: &Mat3, f: F) -> [(f64, Vec3); 2]
    where
        F: Fn(&Vec3) -> f64 + Sync,
    {
        let rows: Vec<(f64, Vec3)> = (0..self.n_theta)
            .into_par_iter()
            .map(|r| {
                let mut scalar = 0.0;
                let mut vector = Vec3::zeros();
                for k in r * self.n_phi..(r + 1) * self.n_phi {
                    let xi = frame * self.nodes[k];
                    let v = self.weights[k] * f(&xi);
                    scalar += v;
                    vector += xi * v;
                }
                (scalar, vector)
            })
            .collect();
        let half = self.n_theta / 2;
        let sum = |rows: &[(f64, Vec3)]| {
            rows.iter()
                .fold((0.0, Vec3::zeros()), |(s, v), (rs, rv)| (s + rs, v + rv))
        };
        [sum(&rows[..half]), sum(&rows[half..])]
    }

    fn row_sums<F>(&self, frame: &Mat3, f: F) -> Vec<f64>
    where
        F: Fn(usize, &Vec3) -> f64 + Sync,
    {
        (0..self.n_theta)
            .into_par_iter()
            .map(|r| {
                let mut acc = 0.0;
                for k in r * self.n_phi..(r + 1) * self.n_phi {
                    acc += self.weights[k] * f(k, &(frame * self.nodes[k]));
                }
                acc
            })
            .collect()
    }
}
