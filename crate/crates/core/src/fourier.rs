//! Great-circle Fourier analysis of hemisphere marginals.
//!
//! For a density restricted to a great circle, the derivative of the hemisphere
//! marginal as the hemisphere tilts towards angle `φ` is
//! `g(φ) = ∫ y(φ') f(φ − φ') dφ'` with `y(φ') = q(φ') − q(φ' + π)` and the half-cosine
//! kernel `f(ψ) = cos ψ` on `|ψ| ≤ π/2`, zero elsewhere.
//!
//! Coefficients use `c_n = (1/2π) ∫ h(φ) e^{-inφ} dφ`. Then `G_n = 2π F_n Y_n`.

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Result, SteerError};
use crate::geometry::{ellipsoid_of, SteeringDirection};
use crate::gmodel::{odd_part_translation, reconstruct_many, GModel, Support};
use crate::quadrature::gauss_legendre;
use crate::qubit::{CorrelationMatrix, Vec3};
use crate::sphere::{fibonacci_sphere, frame_with_pole};

pub const DEFAULT_SAMPLES: usize = 512;
/// Kernel coefficients below this magnitude count as zero.
pub const KERNEL_ZERO_TOL: f64 = 1e-12;
/// Allowed even content of `g`, relative to its total content.
pub const EVEN_CONTENT_TOL: f64 = 1e-8;
/// Marginals of the two models in a uniqueness check must agree to this level.
pub const MARGINAL_TOL: f64 = 1e-8;
pub const TRANSLATION_TOL: f64 = 1e-7;
pub const MARGINAL_DIRECTIONS: usize = 200;

/// Real samples at `2πj/N`, `N` a power of two `≥ 64`.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleSignal {
    samples: Vec<f64>,
}

impl CircleSignal {
    pub fn new(samples: Vec<f64>) -> Result<Self> {
        let n = samples.len();
        if n < 64 || !n.is_power_of_two() {
            return Err(SteerError::Domain(format!("circle signals need 2^k ≥ 64 samples, got {n}")));
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(SteerError::Numeric("circle signal contains a non-finite sample".into()));
        }
        Ok(Self { samples })
    }

    pub fn from_fn(n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new((0..n).map(|j| f(2.0 * PI * j as f64 / n as f64)).collect())
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
        2.0 * PI * j as f64 / self.len() as f64
    }

    /// Frequency carried by FFT bin `k`.
    pub fn frequency(&self, k: usize) -> i64 {
        let n = self.len();
        if k < n / 2 {
            k as i64
        } else {
            k as i64 - n as i64
        }
    }

    /// `c_n` for every bin, in FFT order.
    pub fn coefficients(&self) -> Vec<Complex64> {
        let n = self.len();
        let mut buf: Vec<Complex64> = self.samples.iter().map(|v| Complex64::new(*v, 0.0)).collect();
        FftPlanner::new().plan_fft_forward(n).process(&mut buf);
        buf.iter().map(|c| c / n as f64).collect()
    }

    /// `c_n` for one frequency `|n| < N/2`.
    pub fn coefficient(&self, n: i64) -> Complex64 {
        let len = self.len() as i64;
        self.coefficients()[n.rem_euclid(len) as usize]
    }

    fn from_coefficients(coeffs: Vec<Complex64>) -> Result<Self> {
        let n = coeffs.len();
        let mut buf = coeffs;
        FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
        Self::new(buf.iter().map(|c| c.re).collect())
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_abs_diff(&self, other: &CircleSignal) -> f64 {
        self.samples
            .iter()
            .zip(&other.samples)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }
}

/// `y(φ') = q(φ') − q(φ' + π)`.
pub fn odd_part(q: &CircleSignal) -> CircleSignal {
    let n = q.len();
    let half = n / 2;
    CircleSignal {
        samples: (0..n).map(|j| q.samples[j] - q.samples[(j + half) % n]).collect(),
    }
}

/// Analytic kernel coefficient `F_n`.
pub fn kernel_coefficient(n: i64) -> f64 {
    match n.unsigned_abs() {
        0 => 1.0 / PI,
        1 => 0.25,
        m if m % 2 == 1 => 0.0,
        m => {
            let k = (m / 2) as f64;
            let sign = if (m / 2) % 2 == 1 { 1.0 } else { -1.0 };
            sign / (PI * (4.0 * k * k - 1.0))
        }
    }
}

/// `(1/2π) ∫_{-π/2}^{π/2} cos ψ cos(nψ) dψ` by Gauss–Legendre; the integrand is entire.
fn kernel_coefficient_quadrature(n: i64) -> f64 {
    let (x, w) = gauss_legendre(96);
    let half = PI / 2.0;
    x.iter()
        .zip(&w)
        .map(|(x, w)| {
            let psi = half * x;
            w * half * psi.cos() * (n as f64 * psi).cos()
        })
        .sum::<f64>()
        / (2.0 * PI)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelCoefficient {
    pub n: i64,
    pub value: f64,
    pub quadrature: f64,
    pub is_zero: bool,
}

/// `F_n` for `-n_max ≤ n ≤ n_max`, with the quadrature value alongside.
pub fn kernel_coefficients(n_max: usize) -> Result<Vec<KernelCoefficient>> {
    if n_max < 1 {
        return Err(SteerError::Domain("n_max must be at least 1".into()));
    }
    let n_max = n_max as i64;
    let out: Vec<KernelCoefficient> = (-n_max..=n_max)
        .map(|n| {
            let value = kernel_coefficient(n);
            KernelCoefficient {
                n,
                value,
                quadrature: kernel_coefficient_quadrature(n),
                is_zero: value.abs() < KERNEL_ZERO_TOL,
            }
        })
        .collect();
    if let Some(bad) = out.iter().find(|c| (c.value - c.quadrature).abs() > 1e-12) {
        return Err(SteerError::Numeric(format!(
            "kernel coefficient F({}) = {} disagrees with quadrature {}",
            bad.n, bad.value, bad.quadrature
        )));
    }
    Ok(out)
}

/// `g` by Fourier multiplication.
pub fn hemisphere_marginal(q: &CircleSignal) -> CircleSignal {
    let y = odd_part(q);
    let coeffs = y
        .coefficients()
        .iter()
        .enumerate()
        .map(|(k, c)| c * (2.0 * PI * kernel_coefficient(y.frequency(k))))
        .collect();
    CircleSignal::from_coefficients(coeffs).expect("length is preserved")
}

/// `g` by direct quadrature of the convolution, `O(N²)`.
pub fn hemisphere_marginal_direct(q: &CircleSignal) -> CircleSignal {
    let y = odd_part(q);
    let n = y.len();
    let h = 2.0 * PI / n as f64;
    let samples = (0..n)
        .map(|k| {
            (0..n)
                .map(|j| {
                    let psi = (k as f64 - j as f64) * h;
                    let psi = (psi + PI).rem_euclid(2.0 * PI) - PI;
                    if psi.abs() <= PI / 2.0 {
                        y.samples[j] * psi.cos()
                    } else {
                        0.0
                    }
                })
                .sum::<f64>()
                * h
        })
        .collect();
    CircleSignal { samples }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Deconvolution {
    /// Odd signal built from the recoverable harmonics `±1`.
    pub recovered: CircleSignal,
    /// `(n, Y_n)` for each recovered harmonic.
    pub recovered_coefficients: Vec<(i64, Complex64)>,
    /// Odd harmonics with `F_n = 0`: any amount of them leaves `g` unchanged.
    pub null_space: Vec<i64>,
    /// `max |hemisphere_marginal(y) − g|` for the recovered `y`.
    pub residual: f64,
}

/// Recovers the odd part `y` from `g` on the harmonics where the kernel is invertible.
pub fn deconvolve_odd(g: &CircleSignal) -> Result<Deconvolution> {
    let coeffs = g.coefficients();
    let total: f64 = coeffs.iter().map(|c| c.norm()).sum();
    let even: f64 = coeffs
        .iter()
        .enumerate()
        .filter(|(k, _)| g.frequency(*k) % 2 == 0)
        .map(|(_, c)| c.norm())
        .sum();
    if even > EVEN_CONTENT_TOL * total.max(1e-300) && even > 1e-14 {
        return Err(SteerError::Inconsistent(format!(
            "g has even harmonic content {even:.3e} of {total:.3e}; it cannot come from an odd density"
        )));
    }
    let mut y = vec![Complex64::new(0.0, 0.0); g.len()];
    let mut recovered_coefficients = Vec::new();
    let mut null_space = Vec::new();
    for (k, c) in coeffs.iter().enumerate() {
        let n = g.frequency(k);
        if n % 2 == 0 {
            continue;
        }
        let f = kernel_coefficient(n);
        if f.abs() < KERNEL_ZERO_TOL {
            null_space.push(n);
            continue;
        }
        let yn = c / (2.0 * PI * f);
        y[k] = yn;
        recovered_coefficients.push((n, yn));
    }
    null_space.sort_by_key(|n| (n.abs(), *n));
    recovered_coefficients.sort_by_key(|(n, _)| *n);
    let recovered = CircleSignal::from_coefficients(y)?;
    // y is odd: restrict it to a half period and feed q = y on [0, π), 0 elsewhere.
    let half_q = half_density(&recovered);
    let residual = hemisphere_marginal(&half_q).max_abs_diff(g);
    let scale = g.max_abs().max(1.0);
    if residual > 1e-8 * scale {
        return Err(SteerError::Inconsistent(format!(
            "g carries harmonics outside the kernel's range; best reconstruction misses by {residual:.3e}"
        )));
    }
    Ok(Deconvolution {
        recovered,
        recovered_coefficients,
        null_space,
        residual,
    })
}

/// A signal `q` whose odd part `q(φ') − q(φ'+π)` equals the odd signal `y`.
fn half_density(y: &CircleSignal) -> CircleSignal {
    CircleSignal {
        samples: y.samples.iter().map(|v| 0.5 * v).collect(),
    }
}

/// Density of a sphere model restricted to the great circle spanned by `e1, e2`,
/// sampled at `n` angles.
pub fn restrict_to_circle(model: &GModel, e1: &Vec3, e2: &Vec3, n: usize) -> Result<CircleSignal> {
    match model.support() {
        Support::Sphere { density, .. } => {
            CircleSignal::from_fn(n, |phi| density.eval(&(e1 * phi.cos() + e2 * phi.sin())))
        }
        _ => Err(SteerError::UnsupportedForm("restriction needs a sphere density".into())),
    }
}

/// Largest difference of `p(+|A)` between two models over `directions`.
pub fn marginal_mismatch(m1: &GModel, m2: &GModel, directions: &[Vec3]) -> Result<f64> {
    let r1 = reconstruct_many(m1, directions)?;
    let r2 = reconstruct_many(m2, directions)?;
    Ok(r1
        .iter()
        .zip(&r2)
        .map(|(a, b)| (a.raw_plus - b.raw_plus).abs())
        .fold(0.0, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UniquenessReport {
    pub marginal_mismatch: f64,
    /// Largest difference of the odd parts at the grid nodes.
    pub odd_part_gap: f64,
    pub t1: Vec3,
    pub t2: Vec3,
    pub translation_gap: f64,
    /// `∫_{R⁺}(q₁ − q₂) ξ dσ` for the first test measurement. Nonzero when the two
    /// densities differ by an even term: the figures then differ in shape, not in position.
    pub hemisphere_difference: Vec3,
    pub passed: bool,
}

/// Two models with equal marginals on 200 test measurements must share their translation.
pub fn translation_uniqueness_check(m1: &GModel, m2: &GModel) -> Result<UniquenessReport> {
    if m1.response() != m2.response() {
        return Err(SteerError::Precondition("models must share one response rule".into()));
    }
    let directions = fibonacci_sphere(MARGINAL_DIRECTIONS);
    let mismatch = marginal_mismatch(m1, m2, &directions)?;
    if mismatch > MARGINAL_TOL {
        return Err(SteerError::Precondition(format!(
            "marginal probabilities differ by {mismatch:.6e}; the uniqueness argument does not apply"
        )));
    }
    let (Support::Sphere { grid, density: d1 }, Support::Sphere { density: d2, .. }) = (m1.support(), m2.support()) else {
        return Err(SteerError::UnsupportedForm("uniqueness check needs sphere densities".into()));
    };
    let odd_part_gap = grid
        .nodes()
        .iter()
        .map(|n| (d1.odd_part(n) - d2.odd_part(n)).abs())
        .fold(0.0, f64::max);
    let t1 = odd_part_translation(m1)?.t;
    let t2 = odd_part_translation(m2)?.t;
    let gap = (t1 - t2).norm();
    let r1 = crate::gmodel::reconstruct(m1, &directions[0])?;
    let r2 = crate::gmodel::reconstruct(m2, &directions[0])?;
    Ok(UniquenessReport {
        marginal_mismatch: mismatch,
        odd_part_gap,
        t1,
        t2,
        translation_gap: gap,
        hemisphere_difference: r1.s_plus - r2.s_plus,
        passed: gap < TRANSLATION_TOL,
    })
}

/// Translation implied by a state's marginals for any model with `𝕊 = 1` and the
/// hemisphere response of the state's (solid) figure.
///
/// The marginal `P(+|A)` is read as a function of the outer normal `n(A)`. Its slope
/// as `n` tilts off the pole of a great circle is `g`, which is deconvolved into the
/// degree-one part of the density's odd part. Two circles sharing the first axis give
/// all three dipole components.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranslationCertificate {
    pub circle_samples: usize,
    pub dipole: Vec3,
    pub implied_translation: Vec3,
    /// The figure's actual center, which any model must reproduce.
    pub required_translation: Vec3,
    pub mismatch: f64,
    /// Disagreement of the shared component between the two circles.
    pub circle_consistency: f64,
    pub deconvolution_residual: f64,
    /// Lowest null-space harmonics, unconstrained by the marginals on a great circle.
    pub null_space_head: Vec<i64>,
    pub null_space_size: usize,
}

pub fn translation_certificate(
    g: &CorrelationMatrix,
    direction: SteeringDirection,
    samples: usize,
) -> Result<TranslationCertificate> {
    let figure = ellipsoid_of(g, direction);
    if figure.dimension() != 3 {
        return Err(SteerError::UnsupportedDimension {
            dimension: figure.dimension(),
            reason: "the certificate uses the hemisphere response of a solid figure".into(),
        });
    }
    let oriented = direction.oriented(g);
    let bloch = oriented.a();
    let shape = figure.shape();
    // Measurement whose rim point has outer normal n: x ∝ Mᵗ n.
    let marginal = |n: &Vec3| {
        let x = (shape.transpose() * n).normalize();
        0.5 * (1.0 + x.dot(&bloch))
    };
    let frame = frame_with_pole(&if bloch.norm() > 1e-12 { bloch } else { Vec3::z() });
    let (f1, f2, f3) = (frame.column(2).into_owned(), frame.column(0).into_owned(), frame.column(1).into_owned());
    let h = 1e-5;
    let slope = |pole: &Vec3, e1: &Vec3, e2: &Vec3| {
        CircleSignal::from_fn(samples, |phi| {
            let e = e1 * phi.cos() + e2 * phi.sin();
            let tilt = |t: f64| marginal(&(pole * t.cos() + e * t.sin()));
            (tilt(h) - tilt(-h)) / (2.0 * h)
        })
    };
    let da = deconvolve_odd(&slope(&f3, &f1, &f2)?)?;
    let db = deconvolve_odd(&slope(&f2, &f1, &f3)?)?;
    let y1 = |d: &Deconvolution| {
        d.recovered_coefficients
            .iter()
            .find(|(n, _)| *n == 1)
            .map(|(_, c)| *c)
            .unwrap_or_default()
    };
    let (ya, yb) = (y1(&da), y1(&db));
    let dipole = f1 * ya.re - f2 * ya.im - f3 * yb.im;
    let implied = dipole * (2.0 * PI / 3.0);
    let required = figure.center();
    Ok(TranslationCertificate {
        circle_samples: samples,
        dipole,
        implied_translation: implied,
        required_translation: required,
        mismatch: (implied - required).norm(),
        circle_consistency: (ya.re - yb.re).abs(),
        deconvolution_residual: da.residual.max(db.residual),
        null_space_head: da.null_space.iter().take(4).copied().collect(),
        null_space_size: da.null_space.len(),
    })
}
