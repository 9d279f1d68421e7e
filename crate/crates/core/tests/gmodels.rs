mod common;

use common::*;
use steerage::fourier::{restrict_to_circle, translation_uniqueness_check};
use steerage::geometry::SteeringDirection;
use steerage::gmodel::{
    candidate_q_y, gmodel_1d, gmodel_2d, gmodel_phi_b_to_a, gmodel_werner, odd_part_translation, reconstruct,
    translation_by_subtraction, translation_of, GModel, SphereDensity, Support, DEFAULT_CIRCLE_RESOLUTION,
};
use steerage::quadrature::QuadratureGrid;
use steerage::quantity::sg_2d;
use steerage::qubit::{conditioned_state, CorrelationMatrix, Outcome};

fn directions(seed: u64, n: usize) -> Vec<V3> {
    let mut r = rng(seed);
    (0..n).map(|_| random_unit(&mut r)).collect()
}

/// Largest deviation of a model from the a→b assemblage of `g`.
fn max_error(model: &GModel, g: &CorrelationMatrix, xs: &[V3]) -> (f64, f64) {
    let mut prob: f64 = 0.0;
    let mut fig: f64 = 0.0;
    for x in xs {
        let rec = reconstruct(model, x).unwrap();
        for o in [Outcome::Plus, Outcome::Minus] {
            let want = conditioned_state(g, x, o).unwrap();
            prob = prob.max((rec.prob(o) - want.prob).abs());
            fig = fig.max((rec.shrinked(o) - want.shrinked).norm());
        }
    }
    (prob, fig)
}

#[test]
fn werner_model_reproduces_its_assemblage() {
    let grid = QuadratureGrid::default_grid();
    for p in [0.1, 0.35, 0.5] {
        let m = gmodel_werner(p, &grid).unwrap();
        assert!((m.quantity() - 2.0 * p).abs() < 1e-12);
        let (prob, fig) = max_error(&m, &CorrelationMatrix::werner(p).unwrap(), &directions(21, 200));
        assert!(prob < 1e-12 && fig < 1e-6, "p {p}: {prob} {fig}");
    }
}

#[test]
fn planar_model_reproduces_a_flat_bell_diagonal_state() {
    let (s1, s2) = (0.4, 0.1);
    let m = gmodel_2d(s1, s2, DEFAULT_CIRCLE_RESOLUTION).unwrap();
    assert!((m.quantity() - sg_2d(s1, s2).unwrap().value).abs() < 1e-6);
    let g = CorrelationMatrix::bell_diagonal([2.0 * s1, 2.0 * s2, 0.0]).unwrap();
    let (prob, fig) = max_error(&m, &g, &directions(22, 200));
    assert!(prob < 1e-12 && fig < 1e-5, "{prob} {fig}");
}

#[test]
fn planar_model_lies_flat_in_the_plane() {
    let m = gmodel_2d(0.3, 0.2, DEFAULT_CIRCLE_RESOLUTION).unwrap();
    let Support::Circle(c) = m.support() else { panic!("planar model should sit on a circle") };
    assert!((c.normal().cross(&V3::z())).norm() < 1e-12);
    // The density is ρ/2 with ρ the radius of curvature of the boundary.
    for k in 0..16 {
        let theta = k as f64 * std::f64::consts::PI / 8.0;
        assert!(c.value_at(theta) >= 0.0);
    }
    assert!((c.total() - m.quantity()).abs() < 1e-9);
}

#[test]
fn segment_model_reproduces_the_segment() {
    let length = 0.7;
    let m = gmodel_1d(length, &V3::x()).unwrap();
    assert!((m.quantity() - length).abs() < 1e-15);
    let g = CorrelationMatrix::bell_diagonal([length, 0.0, 0.0]).unwrap();
    let (prob, fig) = max_error(&m, &g, &directions(23, 200));
    assert!(prob < 1e-15 && fig < 1e-15, "{prob} {fig}");
}

#[test]
fn phi_model_reproduces_alices_assemblage() {
    let grid = QuadratureGrid::default_grid();
    let u = V3::new(1.0, 2.0, -2.0) / 3.0;
    for p in [0.05, 0.2] {
        let g = CorrelationMatrix::phi_state(p, u).unwrap();
        let m = gmodel_phi_b_to_a(p, &u, &grid).unwrap();
        assert!((m.quantity() - 1.0).abs() < 1e-12);
        let (prob, fig) = max_error(&m, &SteeringDirection::BobToAlice.oriented(&g), &directions(24, 200));
        assert!(prob < 1e-12 && fig < 1e-10, "p {p}: {prob} {fig}");
    }
}

#[test]
fn translations_of_the_two_phi_densities() {
    let grid = QuadratureGrid::default_grid();
    let p = 0.2;
    let u = V3::z();
    let tx = translation_of(&gmodel_phi_b_to_a(p, &u, &grid).unwrap()).unwrap().t;
    assert!((tx - u * (p / 2.0)).norm() < 1e-12);
    let q_y = candidate_q_y(p, &-u, &grid).unwrap();
    let ty = translation_of(&q_y).unwrap().t;
    assert!((ty + u * (p / 3.0)).norm() < 1e-12);
    let (sub, spread) = translation_by_subtraction(&q_y, &directions(25, 50)).unwrap();
    assert!((sub - ty).norm() < 1e-12 && spread < 1e-12);
}

#[test]
fn hemisphere_mass_is_blind_to_even_terms() {
    let grid = QuadratureGrid::default_grid();
    let base = candidate_q_y(0.1, &V3::x(), &grid).unwrap();
    let Support::Sphere { density, .. } = base.support() else { unreachable!() };
    let mut r = rng(26);
    let a = M3::from_fn(|_, _| uniform(&mut r, -1.0, 1.0));
    let mut q = a + a.transpose();
    q -= M3::identity() * (q.trace() / 3.0);
    let floor = density.minimum();
    let scale = 0.5 * floor / q.norm();
    let bent = GModel::new(
        Support::Sphere {
            grid: grid.clone(),
            density: SphereDensity { quadrupole: density.quadrupole + q * scale, ..*density },
        },
        base.center_atom(),
        base.response().clone(),
    )
    .unwrap();
    assert!(translation_of(&bent).is_err());
    let report = translation_uniqueness_check(&base, &bent).unwrap();
    assert!(report.passed, "{report:?}");
    let t1 = odd_part_translation(&base).unwrap().t;
    let t2 = odd_part_translation(&bent).unwrap().t;
    assert!((t1 - t2).norm() < 1e-12);
    // The restriction to a great circle changes but keeps zero odd harmonics beyond one.
    let c1 = restrict_to_circle(&base, &V3::x(), &V3::y(), 128).unwrap();
    let c2 = restrict_to_circle(&bent, &V3::x(), &V3::y(), 128).unwrap();
    assert!(c1.max_abs_diff(&c2) > 1e-6);
    for n in [3, 5, 7] {
        assert!(c2.coefficient(n).norm() < 1e-12);
    }
}

#[test]
fn phi_model_marginal_peaks_along_u_y() {
    let grid = QuadratureGrid::at_level(-2).unwrap();
    let u = V3::z();
    let m = gmodel_phi_b_to_a(0.2, &u, &grid).unwrap();
    assert!((reconstruct(&m, &-u).unwrap().prob_plus - 0.65).abs() < 1e-12);
    assert!((reconstruct(&m, &u).unwrap().prob_plus - 0.35).abs() < 1e-12);
}
