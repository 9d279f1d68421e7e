//! Two-qubit steering through steering ellipsoids.
//!
//! States are held in the Pauli basis. Each direction of steering has a figure, the
//! ellipsoid of Bloch vectors one party can steer the other into, and the steering
//! quantity `𝕊_G` of that figure decides steerability for Bell-diagonal states.

// Negated comparisons below reject NaN on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod elliptic;
pub mod error;
pub mod fourier;
pub mod geometry;
pub mod gmodel;
pub mod input;
pub mod quadrature;
pub mod quantity;
pub mod qubit;
pub mod report;
pub mod sphere;

pub use error::{Result, SteerError};
