//! Pauli-basis representation of two-qubit states.
//!
//! A two-qubit density matrix is written as `ρ = ¼ Σ G_uv σ_u ⊗ σ_v` with
//! `G = [[1, bᵗ], [a, T]]`, where `a` is Alice's Bloch vector, `b` is Bob's
//! and `T` the correlation block. Alice is always the first tensor factor.

use nalgebra::{Matrix2, Matrix3, Matrix4, SymmetricEigen, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SteerError};

pub type Vec3 = Vector3<f64>;
pub type Mat3 = Matrix3<f64>;
pub type CMat4 = Matrix4<Complex64>;

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const POSITIVITY_SLACK: f64 = 1e-10;
pub const UNIT_TOL: f64 = 1e-12;
const NORM_SLACK: f64 = 1e-12;

/// Pauli matrices `σ_0 = I, σ_1 = X, σ_2 = Y, σ_3 = Z`.
pub fn pauli(index: usize) -> Matrix2<Complex64> {
    let o = Complex64::new(0.0, 0.0);
    let l = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    match index {
        0 => Matrix2::new(l, o, o, l),
        1 => Matrix2::new(o, l, l, o),
        2 => Matrix2::new(o, -i, i, o),
        3 => Matrix2::new(l, o, o, -l),
        _ => panic!("pauli index {index} out of range"),
    }
}

/// `σ_u ⊗ σ_v` with Alice's operator as the first factor.
pub fn pauli_pair(u: usize, v: usize) -> CMat4 {
    pauli(u).kronecker(&pauli(v))
}

/// A 4×4 complex matrix intended to be a two-qubit density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    entries: CMat4,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(entries: CMat4) -> Result<Self> {
        let rho = Self { entries };
        let report = rho.validity();
        if report.hermiticity_residual > HERMITIAN_TOL {
            return Err(SteerError::InvalidState(format!(
                "matrix is not Hermitian (max |M - M†| = {:e})",
                report.hermiticity_residual
            )));
        }
        if report.trace_residual > TRACE_TOL {
            return Err(SteerError::InvalidState(format!(
                "trace differs from 1 by {:e}",
                report.trace_residual
            )));
        }
        if !report.valid {
            return Err(SteerError::InvalidState(format!(
                "matrix is not positive (minimum eigenvalue {:e})",
                report.min_eigenvalue
            )));
        }
        Ok(rho)
    }

    /// Wraps a matrix without any checks. Composed matrices may be unphysical.
    pub fn from_raw(entries: CMat4) -> Self {
        Self { entries }
    }

    pub fn entries(&self) -> &CMat4 {
        &self.entries
    }

    /// Projector onto the singlet `(|01⟩ - |10⟩)/√2`.
    pub fn singlet() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let psi = nalgebra::Vector4::new(
            Complex64::new(0.0, 0.0),
            Complex64::new(h, 0.0),
            Complex64::new(-h, 0.0),
            Complex64::new(0.0, 0.0),
        );
        Self::from_raw(psi * psi.adjoint())
    }

    pub fn maximally_mixed() -> Self {
        Self::from_raw(CMat4::identity() * Complex64::new(0.25, 0.0))
    }

    pub fn validity(&self) -> ValidityReport {
        let m = &self.entries;
        let hermiticity_residual = (m - m.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        let trace_residual = (m.trace() - Complex64::new(1.0, 0.0)).norm();
        // Eigenvalues of the Hermitian part; the anti-Hermitian residual is reported separately.
        let herm = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
        let min_eigenvalue = SymmetricEigen::new(herm)
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        ValidityReport {
            hermiticity_residual,
            trace_residual,
            min_eigenvalue,
            valid: hermiticity_residual <= HERMITIAN_TOL
                && trace_residual <= TRACE_TOL
                && min_eigenvalue >= -POSITIVITY_SLACK,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidityReport {
    pub hermiticity_residual: f64,
    pub trace_residual: f64,
    pub min_eigenvalue: f64,
    pub valid: bool,
}

/// The real matrix `G = [[1, bᵗ], [a, T]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationMatrix {
    a: Vec3,
    b: Vec3,
    t: Mat3,
}

impl CorrelationMatrix {
    /// Checks `|a| ≤ 1`, `|b| ≤ 1` and that every singular value of `T` is at most 1.
    pub fn new(a: Vec3, b: Vec3, t: Mat3) -> Result<Self> {
        if !(a.iter().chain(b.iter()).chain(t.iter()).all(|x| x.is_finite())) {
            return Err(SteerError::InvalidState("non-finite entry".into()));
        }
        if a.norm() > 1.0 + NORM_SLACK {
            return Err(SteerError::InvalidState(format!("|a| = {} exceeds 1", a.norm())));
        }
        if b.norm() > 1.0 + NORM_SLACK {
            return Err(SteerError::InvalidState(format!("|b| = {} exceeds 1", b.norm())));
        }
        let smax = t.singular_values().max();
        if smax > 1.0 + NORM_SLACK {
            return Err(SteerError::InvalidState(format!(
                "largest singular value of T is {smax}, exceeds 1"
            )));
        }
        Ok(Self { a, b, t })
    }

    pub fn a(&self) -> Vec3 {
        self.a
    }

    pub fn b(&self) -> Vec3 {
        self.b
    }

    pub fn t(&self) -> Mat3 {
        self.t
    }

    /// Entry `G_uv` with `u, v ∈ 0..4`.
    pub fn entry(&self, u: usize, v: usize) -> f64 {
        match (u, v) {
            (0, 0) => 1.0,
            (0, v) => self.b[v - 1],
            (u, 0) => self.a[u - 1],
            (u, v) => self.t[(u - 1, v - 1)],
        }
    }

    /// Exchanges the roles of Alice and Bob: `a ↔ b`, `T → Tᵗ`.
    pub fn swap_parties(&self) -> Self {
        Self {
            a: self.b,
            b: self.a,
            t: self.t.transpose(),
        }
    }

    /// Applies local rotations: `a → R_A a`, `b → R_B b`, `T → R_A T R_Bᵗ`.
    pub fn rotated(&self, alice: &Mat3, bob: &Mat3) -> Self {
        Self {
            a: alice * self.a,
            b: bob * self.b,
            t: alice * self.t * bob.transpose(),
        }
    }

    pub fn maximally_mixed() -> Self {
        Self {
            a: Vec3::zeros(),
            b: Vec3::zeros(),
            t: Mat3::zeros(),
        }
    }

    /// `W(p) = p ψ₋ + (1 - p) I/4`, which has `T = -p I`.
    pub fn werner(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(SteerError::Domain(format!("Werner weight p = {p} outside [0, 1]")));
        }
        Self::new(Vec3::zeros(), Vec3::zeros(), Mat3::identity() * -p)
    }

    /// Bell-diagonal state with `T = diag(t)`.
    pub fn bell_diagonal(t: [f64; 3]) -> Result<Self> {
        Self::new(Vec3::zeros(), Vec3::zeros(), Mat3::from_diagonal(&Vec3::from(t)))
    }

    /// `φ(p) = ½ψ₋ + p φ⊗I/2 + (3p/2) I/2⊗φ⊥ + (1 - 5p)/2 · I/4`, where `u` is the
    /// Bloch vector of `φ`. In Pauli form `a = p u`, `b = -(3p/2) u`, `T = -I/2`.
    pub fn phi_state(p: f64, u: Vec3) -> Result<Self> {
        if !(0.0..=0.2).contains(&p) {
            return Err(SteerError::Domain(format!("φ(p) requires 0 ≤ p ≤ 1/5, got {p}")));
        }
        let u = unit(u)?;
        Self::new(p * u, -1.5 * p * u, Mat3::identity() * -0.5)
    }

    /// `½ψ₋ + ⅕|0⟩⟨0|⊗I/2 + (3/10) I/2⊗|1⟩⟨1|`, i.e. `φ(1/5)` with `u = +z`.
    pub fn reference_state() -> Self {
        Self::phi_state(0.2, Vec3::z()).expect("fixed preset is valid")
    }

    pub fn is_bell_diagonal_form(&self, tol: f64) -> bool {
        self.a.norm() <= tol && self.b.norm() <= tol
    }
}

fn unit(v: Vec3) -> Result<Vec3> {
    let n = v.norm();
    if !n.is_finite() || n == 0.0 {
        return Err(SteerError::Precondition("direction vector must be nonzero".into()));
    }
    Ok(v / n)
}

/// `G_uv = Tr[ρ σ_u ⊗ σ_v]`.
pub fn pauli_decompose(rho: &DensityMatrix) -> Result<CorrelationMatrix> {
    let rho = DensityMatrix::new(*rho.entries())?;
    let mut g = [[0.0; 4]; 4];
    for (u, row) in g.iter_mut().enumerate() {
        for (v, cell) in row.iter_mut().enumerate() {
            *cell = (rho.entries() * pauli_pair(u, v)).trace().re;
        }
    }
    let a = Vec3::new(g[1][0], g[2][0], g[3][0]);
    let b = Vec3::new(g[0][1], g[0][2], g[0][3]);
    let t = Mat3::from_fn(|i, j| g[i + 1][j + 1]);
    CorrelationMatrix::new(a, b, t)
}

/// Inverse of [`pauli_decompose`]. The result is not validated.
pub fn pauli_compose(g: &CorrelationMatrix) -> DensityMatrix {
    let mut m = CMat4::zeros();
    for u in 0..4 {
        for v in 0..4 {
            let c = g.entry(u, v);
            if c != 0.0 {
                m += pauli_pair(u, v) * Complex64::new(0.25 * c, 0.0);
            }
        }
    }
    DensityMatrix::from_raw(m)
}

pub fn validate_state(g: &CorrelationMatrix) -> ValidityReport {
    pauli_compose(g).validity()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    pub fn sign(self) -> f64 {
        match self {
            Outcome::Plus => 1.0,
            Outcome::Minus => -1.0,
        }
    }
}

/// Outcome probability and the Bloch vector of the unnormalised conditioned state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionedState {
    pub prob: f64,
    pub shrinked: Vec3,
}

/// Bob's conditioned state after Alice projects onto `½(I ± x·σ)`:
/// `p = ½(1 ± x·a)`, `s = ½(b ± Tᵗx)`.
pub fn conditioned_state(g: &CorrelationMatrix, x: &Vec3, outcome: Outcome) -> Result<ConditionedState> {
    check_unit(x)?;
    let x = outcome.sign() * x;
    Ok(ConditionedState {
        prob: 0.5 * (1.0 + x.dot(&g.a)),
        shrinked: 0.5 * (g.b + g.t.transpose() * x),
    })
}

pub(crate) fn check_unit(x: &Vec3) -> Result<()> {
    let n = x.norm();
    if (n - 1.0).abs() > UNIT_TOL {
        return Err(SteerError::Precondition(format!(
            "measurement direction must be a unit vector, |x| = {n}"
        )));
    }
    Ok(())
}

/// The Bell-diagonal representative of all states sharing the shape of `T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasicState {
    pub representative: CorrelationMatrix,
    /// Proper rotation acting on Alice's side.
    pub r1: Mat3,
    /// Proper rotation acting on Bob's side.
    pub r2: Mat3,
}

impl BasicState {
    pub fn diagonal(&self) -> Vec3 {
        self.representative.t.diagonal()
    }
}

/// Signed SVD `T = R1 T' R2ᵗ` with `R1, R2 ∈ SO(3)` and `T'` diagonal, sorted by
/// decreasing magnitude. Any reflection is folded into the last diagonal entry.
pub fn basic_state(g: &CorrelationMatrix) -> BasicState {
    let (mut u, sigma, mut v) = sorted_svd(&g.t);
    let mut d = sigma;
    if u.determinant() < 0.0 {
        u.column_mut(2).neg_mut();
        d[2] = -d[2];
    }
    if v.determinant() < 0.0 {
        v.column_mut(2).neg_mut();
        d[2] = -d[2];
    }
    BasicState {
        representative: CorrelationMatrix {
            a: Vec3::zeros(),
            b: Vec3::zeros(),
            t: Mat3::from_diagonal(&d),
        },
        r1: u,
        r2: v,
    }
}

/// SVD `m = U diag(σ) Vᵗ` with `σ` sorted in decreasing order. Returns `(U, σ, V)`.
pub(crate) fn sorted_svd(m: &Mat3) -> (Mat3, Vec3, Mat3) {
    let svd = m.svd(true, true);
    let u = svd.u.expect("U requested");
    let v = svd.v_t.expect("Vᵗ requested").transpose();
    let s = svd.singular_values;
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| s[j].total_cmp(&s[i]));
    let mut uo = Mat3::zeros();
    let mut vo = Mat3::zeros();
    let mut so = Vec3::zeros();
    for (k, &i) in order.iter().enumerate() {
        uo.set_column(k, &u.column(i));
        vo.set_column(k, &v.column(i));
        so[k] = s[i];
    }
    (uo, so, vo)
}
