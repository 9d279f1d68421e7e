//! Analysis reports and their text and JSON renderings.
//!
//! Every number is printed with 12 significant digits so that output is stable
//! across runs and thread counts.

use serde::Serialize;
use serde_json::Value;
use std::fmt::Write as _;

use crate::error::Result;
use crate::geometry::{ellipsoid_of, sample_assemblage, SteeringDirection};
use crate::gmodel::{AsymmetryReport, DirectionFinding, Verdict};
use crate::quadrature::QuadratureGrid;
use crate::quantity::{sg_of_figure, SteeringQuantity};
use crate::qubit::{basic_state, validate_state, CorrelationMatrix, Mat3, ValidityReport, Vec3};
use crate::sphere::fibonacci_sphere;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const SIGNIFICANT_DIGITS: usize = 12;
/// Tolerance on `|a|`, `|b|` for treating a state as Bell diagonal.
pub const BELL_DIAGONAL_TOL: f64 = 1e-12;

/// `x` rounded to 12 significant digits, printed like C's `%.12g`.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..SIGNIFICANT_DIGITS as i32).contains(&exp) {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x))
    } else {
        format!("{}e{}", trim_zeros(mantissa), exp)
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

pub fn round_num(x: f64) -> f64 {
    let r: f64 = fmt_num(x).parse().unwrap_or(x);
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn fmt_vec(v: &Vec3) -> String {
    format!("[{}, {}, {}]", fmt_num(v[0]), fmt_num(v[1]), fmt_num(v[2]))
}

fn rows(m: &Mat3) -> [[f64; 3]; 3] {
    [0, 1, 2].map(|i| [0, 1, 2].map(|j| m[(i, j)]))
}

/// Rounds every number in a JSON tree.
fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) => {
            if let Some(f) = n.as_f64() {
                if n.is_f64() {
                    *v = serde_json::Number::from_f64(round_num(f)).map(Value::Number).unwrap_or(Value::Null);
                }
            }
        }
        Value::Array(a) => a.iter_mut().for_each(round_value),
        Value::Object(o) => o.values_mut().for_each(round_value),
        _ => {}
    }
}

/// Pretty JSON with rounded numbers. `raw` entries are inserted afterwards, unrounded.
pub fn to_json<T: Serialize>(report: &T, raw: &[(&str, &Value)]) -> String {
    let mut v = serde_json::to_value(report).expect("reports serialise");
    round_value(&mut v);
    if let Value::Object(o) = &mut v {
        for (k, r) in raw {
            o.insert((*k).to_string(), (*r).clone());
        }
    }
    serde_json::to_string_pretty(&v).expect("values serialise") + "\n"
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FigureReport {
    pub center: Vec3,
    pub semi_axes: Vec3,
    /// Rows of the matrix whose columns are the principal axes.
    pub axes: [[f64; 3]; 3],
    pub dimension: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirectionReport {
    pub direction: SteeringDirection,
    pub figure: FigureReport,
    pub quantity: SteeringQuantity,
    /// `true` when the quantity is optimal, `false` when it is only a lower bound.
    pub optimal: bool,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub tool: String,
    pub version: String,
    pub grid: (usize, usize),
    pub validity: ValidityReport,
    pub bell_diagonal: bool,
    pub basic_diagonal: Vec3,
    /// Validity of the Bell-diagonal representative sharing the figure's shape.
    pub basic_validity: ValidityReport,
    pub directions: Vec<DirectionReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub asymmetry: Option<AsymmetryReport>,
}

/// Steerable when `𝕊 > 1` beyond its error estimate; unsteerable when `𝕊 ≤ 1` and the
/// bound is optimal; unknown otherwise.
pub fn verdict_of(q: &SteeringQuantity, bell_diagonal: bool) -> Verdict {
    if q.value > 1.0 + q.est_error.max(1e-12) {
        Verdict::Steerable
    } else if bell_diagonal {
        Verdict::Unsteerable
    } else {
        Verdict::Unknown
    }
}

pub fn analyze(g: &CorrelationMatrix, grid: &QuadratureGrid, asymmetry: Option<AsymmetryReport>) -> Result<AnalysisReport> {
    let bell = g.is_bell_diagonal_form(BELL_DIAGONAL_TOL);
    let basic = basic_state(g);
    let directions = SteeringDirection::BOTH
        .iter()
        .map(|&d| {
            let e = ellipsoid_of(g, d);
            let basic_figure = ellipsoid_of(&basic.representative, d).centered();
            let quantity = sg_of_figure(&basic_figure, grid)?;
            Ok(DirectionReport {
                direction: d,
                figure: FigureReport {
                    center: e.center(),
                    semi_axes: e.semi_axes(),
                    axes: rows(&e.axes()),
                    dimension: e.dimension(),
                },
                verdict: verdict_of(&quantity, bell),
                optimal: bell,
                quantity,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AnalysisReport {
        tool: "steerage".into(),
        version: VERSION.into(),
        grid: grid.resolution(),
        validity: validate_state(g),
        bell_diagonal: bell,
        basic_diagonal: basic.diagonal(),
        basic_validity: validate_state(&basic.representative),
        directions,
        asymmetry,
    })
}

fn write_validity(out: &mut String, label: &str, v: &ValidityReport) {
    let _ = writeln!(
        out,
        "{label}: {} (min eigenvalue {}, hermiticity residual {}, trace residual {})",
        if v.valid { "valid" } else { "INVALID" },
        fmt_num(v.min_eigenvalue),
        fmt_num(v.hermiticity_residual),
        fmt_num(v.trace_residual)
    );
}

pub fn analysis_text(r: &AnalysisReport, state: &Value) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", r.tool, r.version);
    let _ = writeln!(out, "grid: {}x{}", r.grid.0, r.grid.1);
    let _ = writeln!(out, "state: {state}");
    write_validity(&mut out, "validity", &r.validity);
    let _ = writeln!(out, "bell diagonal: {}", if r.bell_diagonal { "yes" } else { "no" });
    let _ = writeln!(out, "basic diagonal: {}", fmt_vec(&r.basic_diagonal));
    write_validity(&mut out, "basic representative", &r.basic_validity);
    for d in &r.directions {
        let _ = writeln!(out, "direction {}", d.direction.label());
        let _ = writeln!(out, "  center: {}", fmt_vec(&d.figure.center));
        let _ = writeln!(out, "  semi-axes: {}", fmt_vec(&d.figure.semi_axes));
        for (i, row) in d.figure.axes.iter().enumerate() {
            let _ = writeln!(
                out,
                "  axes[{i}]: [{}, {}, {}]",
                fmt_num(row[0]),
                fmt_num(row[1]),
                fmt_num(row[2])
            );
        }
        let _ = writeln!(out, "  dimension: {}", d.figure.dimension);
        let _ = writeln!(
            out,
            "  quantity: {} ({}, est_error {}, {})",
            fmt_num(d.quantity.value),
            d.quantity.method.label(),
            fmt_num(d.quantity.est_error),
            if d.optimal { "optimal" } else { "lower bound" }
        );
        for w in &d.quantity.warnings {
            let _ = writeln!(out, "  warning: {w}");
        }
        let _ = writeln!(out, "  verdict: {}", d.verdict.label());
    }
    if let Some(a) = &r.asymmetry {
        out.push_str(&asymmetry_text(a));
    }
    out
}

fn finding_text(out: &mut String, title: &str, f: &DirectionFinding) {
    let _ = writeln!(out, "{title} ({})", f.direction.label());
    let _ = writeln!(out, "  model: {} with quantity {}", f.model, fmt_num(f.model_quantity));
    let _ = writeln!(out, "  required translation: {}", fmt_vec(&f.required_translation));
    let _ = writeln!(out, "  model translation: {}", fmt_vec(&f.achieved_translation));
    let _ = writeln!(out, "  translation by subtraction: {}", fmt_vec(&f.subtraction_translation));
    let _ = writeln!(out, "  mismatch: {}", fmt_num(f.mismatch));
    let _ = writeln!(out, "  max probability error: {}", fmt_num(f.max_probability_error));
    let _ = writeln!(out, "  max figure error: {}", fmt_num(f.max_figure_error));
    let c = &f.certificate;
    let _ = writeln!(
        out,
        "  certificate: marginals imply translation {} (mismatch {}, {} samples, residual {})",
        fmt_vec(&c.implied_translation),
        fmt_num(c.mismatch),
        c.circle_samples,
        fmt_num(c.deconvolution_residual)
    );
    let head: Vec<String> = c.null_space_head.iter().map(|n| n.to_string()).collect();
    let _ = writeln!(
        out,
        "  unconstrained harmonics: {} (starting {})",
        c.null_space_size,
        head.join(", ")
    );
    let _ = writeln!(out, "  verdict: {}", f.verdict.label());
}

pub fn asymmetry_text(a: &AsymmetryReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "asymmetry p = {}", fmt_num(a.p));
    let _ = writeln!(out, "  u_X: {}", fmt_vec(&a.u_x));
    let _ = writeln!(out, "  u_Y: {}", fmt_vec(&a.u_y));
    let _ = writeln!(out, "  grid: {}x{}", a.grid.0, a.grid.1);
    let _ = writeln!(out, "  basic quantity: {}", fmt_num(a.basic_quantity));
    finding_text(&mut out, "bob to alice", &a.bob_to_alice);
    finding_text(&mut out, "alice to bob", &a.alice_to_bob);
    let u = &a.uniqueness;
    let _ = writeln!(
        out,
        "uniqueness: {} (translation gap {}, marginal gap {}, odd-part gap {}, shape change {})",
        if u.passed { "passed" } else { "FAILED" },
        fmt_num(u.translation_gap),
        fmt_num(u.marginal_mismatch),
        fmt_num(u.odd_part_gap),
        fmt_num(u.hemisphere_difference.norm())
    );
    let _ = writeln!(out, "q_X versus q_Y marginal gap: {}", fmt_num(a.cross_model_marginal_gap));
    if a.near_werner_limit {
        let _ = writeln!(out, "note: p is near the Werner limit; the two directions are numerically indistinguishable");
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeshRow {
    pub x: Vec3,
    pub prob: f64,
    pub s: Vec3,
}

/// `+`-outcome rows on `n` Fibonacci directions.
pub fn mesh_rows(g: &CorrelationMatrix, direction: SteeringDirection, n: usize) -> Result<Vec<MeshRow>> {
    Ok(sample_assemblage(g, direction, &fibonacci_sphere(n))?
        .into_iter()
        .map(|s| MeshRow {
            x: s.direction,
            prob: s.plus.prob,
            s: s.plus.shrinked,
        })
        .collect())
}

pub const MESH_HEADER: &str = "x1,x2,x3,prob,s1,s2,s3";

pub fn mesh_csv(rows: &[MeshRow]) -> String {
    let mut out = String::from(MESH_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            fmt_num(r.x[0]),
            fmt_num(r.x[1]),
            fmt_num(r.x[2]),
            fmt_num(r.prob),
            fmt_num(r.s[0]),
            fmt_num(r.s[1]),
            fmt_num(r.s[2])
        );
    }
    out
}

pub fn quantity_line(q: &SteeringQuantity) -> String {
    format!("{} {} {}\n", fmt_num(q.value), q.dimension, fmt_num(q.est_error))
}
