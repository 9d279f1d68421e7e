//! C interface to `steerage`.
//!
//! States live behind an opaque [`SteerageState`] handle. Every function returns a
//! [`SteerageStatus`]; on failure [`steerage_last_error_message`] describes what went
//! wrong on the calling thread. Strings handed out by the library must be released
//! with [`steerage_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use steerage::geometry::{ellipsoid_of, SteeringDirection};
use steerage::input::state_from_json;
use steerage::quadrature::QuadratureGrid;
use steerage::quantity::steering_quantity;
use steerage::qubit::{conditioned_state, validate_state, CorrelationMatrix, Mat3, Outcome, Vec3};
use steerage::report::{analyze, to_json};
use steerage::SteerError;

/// Opaque two-qubit state.
pub struct SteerageState {
    g: CorrelationMatrix,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SteerageStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidState = 3,
    Domain = 4,
    Unsupported = 5,
    Numeric = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SteerageDirection {
    AliceToBob = 0,
    BobToAlice = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SteerageOutcome {
    Plus = 0,
    Minus = 1,
}

impl From<SteerageDirection> for SteeringDirection {
    fn from(d: SteerageDirection) -> Self {
        match d {
            SteerageDirection::AliceToBob => SteeringDirection::AliceToBob,
            SteerageDirection::BobToAlice => SteeringDirection::BobToAlice,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &SteerError) -> SteerageStatus {
    match e {
        SteerError::InvalidState(_) => SteerageStatus::InvalidState,
        SteerError::Domain(_) => SteerageStatus::Domain,
        SteerError::Precondition(_) | SteerError::Inconsistent(_) => SteerageStatus::InvalidArgument,
        SteerError::UnsupportedDimension { .. } | SteerError::UnsupportedForm(_) | SteerError::EmptyModel => {
            SteerageStatus::Unsupported
        }
        SteerError::Numeric(_) => SteerageStatus::Numeric,
    }
}

struct Failure(SteerageStatus, String);

impl From<SteerError> for Failure {
    fn from(e: SteerError) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

type Attempt = Result<(), Failure>;

fn guard(f: impl FnOnce() -> Attempt) -> SteerageStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SteerageStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            SteerageStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(SteerageStatus::NullPointer, format!("{what} is null"))
}

unsafe fn state_ref<'a>(state: *const SteerageState) -> Result<&'a SteerageState, Failure> {
    state.as_ref().ok_or_else(|| null("state"))
}

unsafe fn read3(p: *const f64, what: &str) -> Result<Vec3, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    Ok(Vec3::from_column_slice(std::slice::from_raw_parts(p, 3)))
}

unsafe fn write3(p: *mut f64, v: &Vec3) {
    std::slice::from_raw_parts_mut(p, 3).copy_from_slice(v.as_slice());
}

fn grid(level: i32) -> Result<QuadratureGrid, Failure> {
    Ok(QuadratureGrid::at_level(level)?)
}

/// Parses a JSON state description such as `{"werner": {"p": 0.5}}`.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn steerage_state_from_json(json: *const c_char, out: *mut *mut SteerageState) -> SteerageStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| Failure(SteerageStatus::InvalidArgument, format!("json is not UTF-8: {e}")))?;
        let g = state_from_json(text)?;
        *out = Box::into_raw(Box::new(SteerageState { g }));
        Ok(())
    })
}

/// Builds a state from `a`, `b` (3 entries each) and `T` (9 entries, row-major).
///
/// # Safety
/// The input arrays must hold at least 3, 3 and 9 doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn steerage_state_from_g(
    a: *const f64,
    b: *const f64,
    t: *const f64,
    out: *mut *mut SteerageState,
) -> SteerageStatus {
    guard(|| {
        let (a, b) = (read3(a, "a")?, read3(b, "b")?);
        if t.is_null() {
            return Err(null("T"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let t = Mat3::from_row_slice(std::slice::from_raw_parts(t, 9));
        let g = CorrelationMatrix::new(a, b, t)?;
        let v = validate_state(&g);
        if !v.valid {
            return Err(Failure(
                SteerageStatus::InvalidState,
                format!("density matrix is not positive (minimum eigenvalue {:e})", v.min_eigenvalue),
            ));
        }
        *out = Box::into_raw(Box::new(SteerageState { g }));
        Ok(())
    })
}

/// Releases a state. Null is ignored.
///
/// # Safety
/// `state` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn steerage_state_free(state: *mut SteerageState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Minimum eigenvalue of the density matrix and whether the state is physical.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn steerage_state_validate(
    state: *const SteerageState,
    min_eigenvalue: *mut f64,
    valid: *mut bool,
) -> SteerageStatus {
    guard(|| {
        let s = state_ref(state)?;
        if min_eigenvalue.is_null() || valid.is_null() {
            return Err(null("output"));
        }
        let v = validate_state(&s.g);
        *min_eigenvalue = v.min_eigenvalue;
        *valid = v.valid;
        Ok(())
    })
}

/// Steering quantity of the state's basic figure. `grid_level` 0 is the default grid.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn steerage_quantity(
    state: *const SteerageState,
    direction: SteerageDirection,
    grid_level: i32,
    value: *mut f64,
    dimension: *mut u32,
    est_error: *mut f64,
) -> SteerageStatus {
    guard(|| {
        let s = state_ref(state)?;
        if value.is_null() || dimension.is_null() || est_error.is_null() {
            return Err(null("output"));
        }
        let q = steering_quantity(&s.g, direction.into(), &grid(grid_level)?)?;
        *value = q.value;
        *dimension = q.dimension as u32;
        *est_error = q.est_error;
        Ok(())
    })
}

/// Center (3), semi-axes (3, descending), axes (9, row-major with axes as columns) and
/// dimension of the steering figure.
///
/// # Safety
/// Output arrays must hold 3, 3 and 9 doubles.
#[no_mangle]
pub unsafe extern "C" fn steerage_ellipsoid(
    state: *const SteerageState,
    direction: SteerageDirection,
    center: *mut f64,
    semi_axes: *mut f64,
    axes: *mut f64,
    dimension: *mut u32,
) -> SteerageStatus {
    guard(|| {
        let s = state_ref(state)?;
        if center.is_null() || semi_axes.is_null() || axes.is_null() || dimension.is_null() {
            return Err(null("output"));
        }
        let e = ellipsoid_of(&s.g, direction.into());
        write3(center, &e.center());
        write3(semi_axes, &e.semi_axes());
        let m = e.axes();
        let out = std::slice::from_raw_parts_mut(axes, 9);
        for r in 0..3 {
            for c in 0..3 {
                out[3 * r + c] = m[(r, c)];
            }
        }
        *dimension = e.dimension() as u32;
        Ok(())
    })
}

/// Outcome probability and unnormalised Bloch vector after Alice measures along unit `x`.
///
/// # Safety
/// `x` must hold 3 doubles, `shrinked` room for 3.
#[no_mangle]
pub unsafe extern "C" fn steerage_conditioned_state(
    state: *const SteerageState,
    x: *const f64,
    outcome: SteerageOutcome,
    prob: *mut f64,
    shrinked: *mut f64,
) -> SteerageStatus {
    guard(|| {
        let s = state_ref(state)?;
        let x = read3(x, "x")?;
        if prob.is_null() || shrinked.is_null() {
            return Err(null("output"));
        }
        let o = match outcome {
            SteerageOutcome::Plus => Outcome::Plus,
            SteerageOutcome::Minus => Outcome::Minus,
        };
        let c = conditioned_state(&s.g, &x, o)?;
        *prob = c.prob;
        write3(shrinked, &c.shrinked);
        Ok(())
    })
}

/// The `analyze` report as JSON. Free the string with [`steerage_string_free`].
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn steerage_analyze_json(
    state: *const SteerageState,
    grid_level: i32,
    out: *mut *mut c_char,
) -> SteerageStatus {
    guard(|| {
        let s = state_ref(state)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let report = analyze(&s.g, &grid(grid_level)?, None)?;
        let text = to_json(&report, &[]);
        *out = CString::new(text).expect("JSON has no nul bytes").into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn steerage_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failure on this thread, or null. Valid until the next call.
#[no_mangle]
pub extern "C" fn steerage_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Complete elliptic integral of the second kind, `m ∈ [0, 1]`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn steerage_elliptic_e(m: f64, out: *mut f64) -> SteerageStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = steerage::elliptic::elliptic_e(m)?;
        Ok(())
    })
}

/// Library version, static storage.
#[no_mangle]
pub extern "C" fn steerage_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
