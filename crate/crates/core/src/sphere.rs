//! Direction sets and frames on the unit sphere.

use crate::qubit::{Mat3, Vec3};

/// `n` nearly uniform unit vectors on a golden-angle spiral. Deterministic in `n`.
pub fn fibonacci_sphere(n: usize) -> Vec<Vec3> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden * i as f64;
            Vec3::new(r * phi.cos(), r * phi.sin(), z)
        })
        .collect()
}

/// A proper rotation whose third column is `n` (normalised).
pub fn frame_with_pole(n: &Vec3) -> Mat3 {
    let z = n.normalize();
    let helper = if z.x.abs() < 0.9 { Vec3::x() } else { Vec3::y() };
    let x = (helper - z * helper.dot(&z)).normalize();
    let y = z.cross(&x);
    Mat3::from_columns(&[x, y, z])
}

/// Spherical direction with polar angle measured from `+z`.
pub fn from_angles(theta: f64, phi: f64) -> Vec3 {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    Vec3::new(st * cp, st * sp, ct)
}
