mod common;

use common::{M3, V3};
use proptest::prelude::*;
use steerage::fourier::{deconvolve_odd, hemisphere_marginal, CircleSignal};
use steerage::geometry::SteeringEllipsoid;
use steerage::gmodel::{asymmetry_report_with, ResponseRule};
use steerage::quadrature::QuadratureGrid;
use steerage::qubit::{conditioned_state, CorrelationMatrix, Outcome};
use steerage::report::{fmt_num, round_num};

fn unit() -> impl Strategy<Value = V3> {
    (-1.0f64..1.0, 0.0f64..std::f64::consts::TAU).prop_map(|(z, phi)| {
        let r = (1.0 - z * z).sqrt();
        V3::new(r * phi.cos(), r * phi.sin(), z)
    })
}

fn rotation() -> impl Strategy<Value = M3> {
    (unit(), 0.0f64..std::f64::consts::TAU)
        .prop_map(|(axis, angle)| *nalgebra::Rotation3::from_axis_angle(&nalgebra::Unit::new_normalize(axis), angle).matrix())
}

/// Physical states: Bell-diagonal inside the tetrahedron, locally rotated.
fn state() -> impl Strategy<Value = CorrelationMatrix> {
    (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0, rotation(), rotation())
        .prop_filter_map("outside the tetrahedron", |(t1, t2, t3, r1, r2)| {
            let g = CorrelationMatrix::bell_diagonal([t1, t2, t3]).ok()?;
            steerage::qubit::validate_state(&g).valid.then(|| g.rotated(&r1, &r2))
        })
}

fn solid_figure() -> impl Strategy<Value = SteeringEllipsoid> {
    (0.05f64..0.5, 0.05f64..0.5, 0.05f64..0.5, rotation(), rotation()).prop_map(|(a, b, c, r1, r2)| {
        SteeringEllipsoid::new(V3::zeros(), r1 * M3::from_diagonal(&V3::new(a, b, c)) * r2)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn conditioned_states_are_normalised(g in state(), x in unit()) {
        let plus = conditioned_state(&g, &x, Outcome::Plus).unwrap();
        let minus = conditioned_state(&g, &x, Outcome::Minus).unwrap();
        prop_assert!((plus.prob + minus.prob - 1.0).abs() < 1e-12);
        prop_assert!((plus.shrinked + minus.shrinked - g.b()).norm() < 1e-12);
        prop_assert!(plus.prob >= -1e-12 && plus.shrinked.norm() <= plus.prob + 1e-9);
    }

    #[test]
    fn swapping_parties_twice_is_the_identity(g in state()) {
        prop_assert_eq!(g.swap_parties().swap_parties(), g);
    }

    #[test]
    fn responses_sum_to_one(e in solid_figure(), x in unit(), xi in unit()) {
        let rules = [
            ResponseRule::Hemisphere3D(e),
            ResponseRule::WernerRadial { orientation: -1.0 },
            ResponseRule::Segment1D { axis: V3::x(), input_axis: V3::y() },
        ];
        for rule in rules {
            let p = rule.probability(&x, Outcome::Plus, &xi).unwrap();
            let m = rule.probability(&x, Outcome::Minus, &xi).unwrap();
            prop_assert!((0.0..=1.0).contains(&p));
            prop_assert!((p + m - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn degree_one_survives_the_hemisphere_roundtrip(
        c1 in -1.0f64..1.0, s1 in -1.0f64..1.0, c3 in -1.0f64..1.0, s5 in -1.0f64..1.0
    ) {
        let y = CircleSignal::from_fn(128, |phi| {
            c1 * phi.cos() + s1 * phi.sin() + c3 * (3.0 * phi).cos() + s5 * (5.0 * phi).sin()
        }).unwrap();
        let q = CircleSignal::new(y.samples().iter().map(|v| 0.5 * v).collect()).unwrap();
        let d = deconvolve_odd(&hemisphere_marginal(&q)).unwrap();
        let degree_one = CircleSignal::from_fn(128, |phi| c1 * phi.cos() + s1 * phi.sin()).unwrap();
        prop_assert!(d.recovered.max_abs_diff(&degree_one) < 1e-12);
        prop_assert!(d.null_space.contains(&3) && d.null_space.contains(&-5));
    }

    #[test]
    fn printed_numbers_keep_twelve_digits(x in prop::num::f64::NORMAL) {
        let r = round_num(x);
        prop_assert!(((r - x) / x).abs() < 1e-11);
        prop_assert_eq!(fmt_num(r), fmt_num(x));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn asymmetry_mismatch_is_rotation_covariant(p in 0.02f64..0.2, u in unit()) {
        let grid = QuadratureGrid::product(16, 32).unwrap();
        let r = asymmetry_report_with(p, &u, &grid).unwrap();
        prop_assert!((r.alice_to_bob.mismatch - 5.0 * p / 12.0).abs() < 1e-9);
        prop_assert!((r.alice_to_bob.certificate.mismatch - 5.0 * p / 12.0).abs() < 1e-6);
        prop_assert!((r.alice_to_bob.achieved_translation - u * (-p / 3.0)).norm() < 1e-12);
        prop_assert!(r.bob_to_alice.mismatch < 1e-12);
    }
}
