//! Reference computations that share no code with the library.
#![allow(dead_code)]

use nalgebra::{Matrix2, Matrix3, Matrix4, Vector3};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

pub type V3 = Vector3<f64>;
pub type M3 = Matrix3<f64>;

pub fn random_unit(rng: &mut ChaCha20Rng) -> V3 {
    loop {
        let v = V3::new(
            StandardNormal.sample(rng),
            StandardNormal.sample(rng),
            StandardNormal.sample(rng),
        );
        let n = v.norm();
        if n > 1e-8 {
            return v / n;
        }
    }
}

/// Haar-ish random rotation from a normalised random quaternion.
pub fn random_rotation(rng: &mut ChaCha20Rng) -> M3 {
    let q: [f64; 4] = std::array::from_fn(|_| StandardNormal.sample(rng));
    let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    let [w, x, y, z] = q.map(|v| v / n);
    M3::new(
        1.0 - 2.0 * (y * y + z * z),
        2.0 * (x * y - z * w),
        2.0 * (x * z + y * w),
        2.0 * (x * y + z * w),
        1.0 - 2.0 * (x * x + z * z),
        2.0 * (y * z - x * w),
        2.0 * (x * z - y * w),
        2.0 * (y * z + x * w),
        1.0 - 2.0 * (x * x + y * y),
    )
}

/// Monte-Carlo estimate of `(1/π) ∫ |Mᵗ n| dσ` with Gaussian-normalised directions.
/// Returns `(mean, standard error)`.
pub fn mc_support_quantity(m: &M3, samples: usize, rng: &mut ChaCha20Rng) -> (f64, f64) {
    let mt = m.transpose();
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..samples {
        let n = random_unit(rng);
        let v = 4.0 * (mt * n).norm();
        sum += v;
        sum_sq += v * v;
    }
    let k = samples as f64;
    let mean = sum / k;
    let var = (sum_sq / k - mean * mean) * k / (k - 1.0);
    (mean, (var / k).sqrt())
}

/// Adaptive Simpson quadrature to absolute tolerance `tol`.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
        }
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(f, a, b, fa, fm, fb, whole, tol, 50)
}

pub fn elliptic_e_oracle(m: f64) -> f64 {
    adaptive_simpson(&|t: f64| (1.0 - m * t.sin().powi(2)).sqrt(), 0.0, std::f64::consts::FRAC_PI_2, 1e-15)
}

/// Half the perimeter of the ellipse with semi-axes `a`, `b`.
pub fn half_perimeter(a: f64, b: f64) -> f64 {
    adaptive_simpson(
        &|t: f64| (a * a * t.sin().powi(2) + b * b * t.cos().powi(2)).sqrt(),
        0.0,
        std::f64::consts::PI,
        1e-14,
    )
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn pauli2(k: usize) -> Matrix2<Complex64> {
    let i = Complex64::new(0.0, 1.0);
    match k {
        0 => Matrix2::new(c(1.0), c(0.0), c(0.0), c(1.0)),
        1 => Matrix2::new(c(0.0), c(1.0), c(1.0), c(0.0)),
        2 => Matrix2::new(c(0.0), -i, i, c(0.0)),
        _ => Matrix2::new(c(1.0), c(0.0), c(0.0), c(-1.0)),
    }
}

pub fn kron(a: &Matrix2<Complex64>, b: &Matrix2<Complex64>) -> Matrix4<Complex64> {
    Matrix4::from_fn(|r, s| a[(r / 2, s / 2)] * b[(r % 2, s % 2)])
}

/// `ρ = ¼ Σ G_uv σ_u ⊗ σ_v`, built term by term.
pub fn rho_from(a: &V3, b: &V3, t: &M3) -> Matrix4<Complex64> {
    let mut rho = Matrix4::zeros();
    for u in 0..4 {
        for v in 0..4 {
            let g = match (u, v) {
                (0, 0) => 1.0,
                (0, v) => b[v - 1],
                (u, 0) => a[u - 1],
                (u, v) => t[(u - 1, v - 1)],
            };
            rho += kron(&pauli2(u), &pauli2(v)) * c(0.25 * g);
        }
    }
    rho
}

/// Bob's unnormalised state after Alice projects onto `½(I + sign·x·σ)`, by partial trace.
/// Returns `(probability, Tr[ρ_B σ])`.
pub fn conditioned_by_partial_trace(rho: &Matrix4<Complex64>, x: &V3, sign: f64) -> (f64, V3) {
    let mut proj = pauli2(0) * c(0.5);
    for k in 0..3 {
        proj += pauli2(k + 1) * c(0.5 * sign * x[k]);
    }
    let op = kron(&proj, &pauli2(0)) * rho;
    let mut rho_b = Matrix2::<Complex64>::zeros();
    for r in 0..2 {
        for s in 0..2 {
            rho_b[(r, s)] = op[(r, s)] + op[(2 + r, 2 + s)];
        }
    }
    let prob = rho_b.trace().re;
    let s = V3::from_fn(|k, _| (rho_b * pauli2(k + 1)).trace().re);
    (prob, s)
}

pub fn rng(seed: u64) -> ChaCha20Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn uniform(rng: &mut ChaCha20Rng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo..hi)
}
