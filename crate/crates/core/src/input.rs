//! JSON state descriptions.
//!
//! A document holds exactly one variant, for example `{"werner": {"p": 0.5}}`,
//! `{"bell_diagonal": [0.5, 0.5, 0]}` or `{"g_matrix": {"a": [..], "b": [..], "T": [[..], [..], [..]]}}`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SteerError};
use crate::qubit::{pauli_decompose, validate_state, CMat4, CorrelationMatrix, DensityMatrix, Mat3, ValidityReport, Vec3};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum StateSpec {
    /// Rows of `[re, im]` pairs.
    DensityMatrix(Vec<Vec<[f64; 2]>>),
    GMatrix {
        a: [f64; 3],
        b: [f64; 3],
        #[serde(rename = "T")]
        t: [[f64; 3]; 3],
    },
    BellDiagonal([f64; 3]),
    Werner { p: f64 },
    PhiState { p: f64, u: [f64; 3] },
    /// `φ(1/5)` with `u = +z`.
    #[serde(rename = "ref_state_29")]
    RefState29 {},
}

/// A JSON syntax or schema error with its position.
#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

/// The failure modes of turning a description into a state.
#[derive(Debug, Clone, PartialEq)]
pub enum StateError {
    /// Well-formed but unphysical; the validity report is attached when one exists.
    Invalid { error: SteerError, validity: Option<ValidityReport> },
    Malformed(String),
}

impl std::fmt::Display for StateError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StateError::Invalid { error, .. } => write!(f, "{error}"),
            StateError::Malformed(m) => write!(f, "malformed state: {m}"),
        }
    }
}

impl StateSpec {
    pub fn parse(text: &str) -> std::result::Result<(Self, serde_json::Value), ParseError> {
        let to_parse_error = |e: serde_json::Error| ParseError {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        };
        let value: serde_json::Value = serde_json::from_str(text).map_err(to_parse_error)?;
        let spec: StateSpec = serde_json::from_str(text).map_err(to_parse_error)?;
        Ok((spec, value))
    }

    pub fn variant(&self) -> &'static str {
        match self {
            StateSpec::DensityMatrix(_) => "density_matrix",
            StateSpec::GMatrix { .. } => "g_matrix",
            StateSpec::BellDiagonal(_) => "bell_diagonal",
            StateSpec::Werner { .. } => "werner",
            StateSpec::PhiState { .. } => "phi_state",
            StateSpec::RefState29 {} => "ref_state_29",
        }
    }

    /// `(p, u)` for the φ family.
    pub fn phi_parameters(&self) -> Option<(f64, Vec3)> {
        match self {
            StateSpec::PhiState { p, u } => Some((*p, Vec3::from(*u))),
            StateSpec::RefState29 {} => Some((0.2, Vec3::z())),
            _ => None,
        }
    }

    /// Builds the state and checks that it is physical.
    pub fn to_state(&self) -> std::result::Result<CorrelationMatrix, StateError> {
        let invalid = |error: SteerError| StateError::Invalid { error, validity: None };
        let g = match self {
            StateSpec::DensityMatrix(rows) => {
                if rows.len() != 4 || rows.iter().any(|r| r.len() != 4) {
                    return Err(StateError::Malformed("density_matrix must be 4×4".into()));
                }
                let m = CMat4::from_fn(|i, j| Complex64::new(rows[i][j][0], rows[i][j][1]));
                let validity = DensityMatrix::from_raw(m).validity();
                return pauli_decompose(&DensityMatrix::from_raw(m)).map_err(|error| StateError::Invalid {
                    error,
                    validity: Some(validity),
                });
            }
            StateSpec::GMatrix { a, b, t } => {
                CorrelationMatrix::new(Vec3::from(*a), Vec3::from(*b), Mat3::from_fn(|i, j| t[i][j])).map_err(invalid)?
            }
            StateSpec::BellDiagonal(t) => CorrelationMatrix::bell_diagonal(*t).map_err(invalid)?,
            StateSpec::Werner { p } => CorrelationMatrix::werner(*p).map_err(invalid)?,
            StateSpec::PhiState { p, u } => CorrelationMatrix::phi_state(*p, Vec3::from(*u)).map_err(invalid)?,
            StateSpec::RefState29 {} => CorrelationMatrix::reference_state(),
        };
        let validity = validate_state(&g);
        if !validity.valid {
            return Err(StateError::Invalid {
                error: SteerError::InvalidState(format!(
                    "density matrix is not positive (minimum eigenvalue {:e})",
                    validity.min_eigenvalue
                )),
                validity: Some(validity),
            });
        }
        Ok(g)
    }
}

pub fn state_from_json(text: &str) -> Result<CorrelationMatrix> {
    let (spec, _) = StateSpec::parse(text).map_err(|e| SteerError::Inconsistent(e.to_string()))?;
    spec.to_state().map_err(|e| match e {
        StateError::Invalid { error, .. } => error,
        StateError::Malformed(m) => SteerError::Inconsistent(m),
    })
}
