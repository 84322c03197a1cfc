mod common;

use std::f64::consts::PI;

use approx::assert_relative_eq;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mahler::random::{random_point_in, random_polygon, random_symmetric_polygon};
use mahler::santalo::{
    check_inclusion_0, normal_position, polar_volume_at, polar_volume_grad, polar_volume_hessian,
    santalo_point, stability_constants, theorem_e_experiment, theorem_e_lhs, unit_ball_volume,
};
use mahler::{Error, Point2, Polygon};

use common::{grid_minimizer, polar_area_oracle};

fn square() -> Polygon {
    Polygon::regular(4, 2f64.sqrt(), PI / 4.0).unwrap()
}

#[test]
fn polar_area_matches_oracle() {
    assert_relative_eq!(polar_volume_at(&square(), Point2::ORIGIN).unwrap(), 2.0, epsilon = 1e-15);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..200 {
        let k = random_polygon(rng.random_range(3..12), &mut rng).unwrap();
        let z = random_point_in(&k, &mut rng);
        assert_relative_eq!(
            polar_volume_at(&k, z).unwrap(),
            polar_area_oracle(&k, z),
            max_relative = 1e-12
        );
    }
    assert_eq!(
        polar_volume_at(&square(), Point2::new(1.0, 0.0)),
        Err(Error::PointNotInterior)
    );
}

#[test]
fn strictly_convex_in_the_point() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..200 {
        let k = random_polygon(rng.random_range(3..12), &mut rng).unwrap();
        let a = random_point_in(&k, &mut rng);
        let b = random_point_in(&k, &mut rng);
        let f = |z| polar_volume_at(&k, z).unwrap();
        assert!(f(a.lerp(b, 0.5)) < (f(a) + f(b)) / 2.0);
    }
}

#[test]
fn blows_up_at_the_boundary() {
    let k = square();
    let target = Point2::new(1.0, 0.3);
    let values: Vec<f64> = (0..10)
        .map(|i| {
            let t = 1.0 - 0.5f64.powi(i + 4);
            polar_volume_at(&k, target * t).unwrap()
        })
        .collect();
    assert!(values.windows(2).all(|w| w[1] > w[0]));
    assert!(values[9] > 100.0);
}

#[test]
fn derivatives_match_finite_differences() {
    assert!(polar_volume_grad(&square(), Point2::ORIGIN).unwrap().norm() < 1e-15);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let k = random_polygon(rng.random_range(3..12), &mut rng).unwrap();
        let c = k.centroid();
        let z = c.lerp(random_point_in(&k, &mut rng), 0.5);
        let h = 1e-5;
        let ex = Point2::new(h, 0.0);
        let ey = Point2::new(0.0, h);
        let f = |p| polar_area_oracle(&k, p);
        let g = polar_volume_grad(&k, z).unwrap();
        let fd = Point2::new(f(z + ex) - f(z - ex), f(z + ey) - f(z - ey)) / (2.0 * h);
        let scale = g.norm().max(f(z));
        assert!((g - fd).norm() <= 1e-6 * scale, "{g:?} vs {fd:?}");

        let hess = polar_volume_hessian(&k, z).unwrap();
        let gx = (polar_volume_grad(&k, z + ex).unwrap() - polar_volume_grad(&k, z - ex).unwrap()) / (2.0 * h);
        let gy = (polar_volume_grad(&k, z + ey).unwrap() - polar_volume_grad(&k, z - ey).unwrap()) / (2.0 * h);
        let hscale = hess.norm();
        assert!((hess[(0, 0)] - gx.x).abs() <= 1e-6 * hscale);
        assert!((hess[(1, 0)] - gx.y).abs() <= 1e-6 * hscale);
        assert!((hess[(0, 1)] - gy.x).abs() <= 1e-6 * hscale);
        assert!((hess[(1, 1)] - gy.y).abs() <= 1e-6 * hscale);
    }
}

#[test]
fn symmetric_bodies_are_centred() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..100 {
        let k = random_symmetric_polygon(2 * rng.random_range(2..7), &mut rng).unwrap();
        let rep = santalo_point(&k).unwrap();
        assert!(rep.point.norm() < 1e-9);
        assert!(rep.converged);
        assert_relative_eq!(check_inclusion_0(&k).unwrap(), 1.0, epsilon = 1e-9);
    }
}

#[test]
fn triangle_point_is_the_centroid() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..5 {
        let t = random_polygon(3, &mut rng).unwrap().translate(Point2::new(0.4, -0.2));
        let s = santalo_point(&t).unwrap().point;
        assert!(s.dist(t.centroid()) < 1e-7);
        assert!(grid_minimizer(&t).dist(t.centroid()) < 1e-7);
        assert_relative_eq!(check_inclusion_0(&t).unwrap(), 2.0, epsilon = 1e-9);
    }
}

#[test]
fn pentagon_point_matches_grid_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..5 {
        let k = random_polygon(5, &mut rng).unwrap();
        let rep = santalo_point(&k).unwrap();
        assert!(rep.point.dist(grid_minimizer(&k)) < 1e-6);
        let g = polar_volume_grad(&k, rep.point).unwrap();
        assert!(g.norm() <= 1e-10 * rep.polar_area);
        assert!(rep.polar_centroid_norm <= 1e-8);
    }
}

#[test]
fn santalo_point_is_affine_covariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let k = random_polygon(rng.random_range(3..9), &mut rng).unwrap();
        let m = mahler::random::random_linear(&mut rng);
        let t = Point2::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let s = santalo_point(&k).unwrap().point;
        let image = k.apply_linear(&m).unwrap().translate(t);
        let s_image = santalo_point(&image).unwrap().point;
        assert!(s_image.dist(s.transform(&m) + t) < 1e-8 * image.scale());
    }
}

#[test]
fn inclusion_factor_never_exceeds_two() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..1000 {
        let k = random_polygon(rng.random_range(3..13), &mut rng).unwrap();
        assert!(check_inclusion_0(&k).unwrap() <= 2.0 + 1e-9);
    }
}

#[test]
fn ball_volumes() {
    assert_eq!(unit_ball_volume(0), 1.0);
    assert_eq!(unit_ball_volume(1), 2.0);
    assert_relative_eq!(unit_ball_volume(2), PI, epsilon = 1e-15);
    assert_relative_eq!(unit_ball_volume(3), 4.0 * PI / 3.0, epsilon = 1e-15);
    assert_relative_eq!(unit_ball_volume(5), 8.0 * PI * PI / 15.0, epsilon = 1e-14);
}

#[test]
fn stability_constants_for_the_disk() {
    let c = stability_constants(2, 2.0, PI).unwrap();
    assert_relative_eq!(c.kappa_d, PI);
    assert_relative_eq!(c.kappa_d_minus_1, 2.0);
    // the first threshold evaluates to 1/(128π)
    assert_relative_eq!(c.eps1_k0, 1.0 / (128.0 * PI), max_relative = 1e-14);
    // plane coefficient 2^38 3^4 π
    assert_relative_eq!(
        c.theorem_e_coefficient,
        2f64.powi(38) * 81.0 * PI,
        max_relative = 1e-12
    );
    assert!(stability_constants(1, 2.0, PI).is_err());
    assert!(stability_constants(2, -1.0, PI).is_err());
}

#[test]
fn coefficient_identity_across_dimensions() {
    // coefficient = c_norm² d κ_d (d+1)^{d+2} / 2 with
    // c_norm = 2^{(d+1)²} d^{d²+3d+4} / κ_{d−1}^{d+2}
    for d in 2..=6i64 {
        let c = stability_constants(d, 2.0, unit_ball_volume(d as u32)).unwrap();
        let df = d as f64;
        let ln_cnorm = (df + 1.0).powi(2) * 2f64.ln() + (df * df + 3.0 * df + 4.0) * df.ln()
            - (df + 2.0) * c.kappa_d_minus_1.ln();
        let ln_coeff = 2.0 * ln_cnorm + df.ln() + c.kappa_d.ln() + (df + 2.0) * (df + 1.0).ln()
            - 2f64.ln();
        assert_relative_eq!(c.ln_theorem_e_coefficient, ln_coeff, max_relative = 1e-12);
    }
}

#[test]
fn sandwich_lhs_vanishes_on_trivial_sandwiches() {
    let k0 = normal_position(&Polygon::regular(5, 1.0, 0.3).unwrap()).unwrap();
    assert_eq!(theorem_e_lhs(&k0, &k0).unwrap(), 0.0);
    let shrunk = k0.scaled(1.0 - 1e-3);
    assert!(theorem_e_lhs(&k0, &shrunk).unwrap().abs() < 1e-12);
    let rows = theorem_e_experiment(&k0, 0.0, 3, 1).unwrap();
    assert!(rows.iter().all(|r| r.lhs == 0.0 && !r.violation));
}

#[test]
fn sandwich_trials_respect_the_quadratic_bound() {
    let k0 = Polygon::regular(5, 1.0, 0.3).unwrap();
    let a = theorem_e_experiment(&k0, 1e-3, 20, 9).unwrap();
    let b = theorem_e_experiment(&k0, 1e-4, 20, 9).unwrap();
    assert!(a.iter().chain(&b).all(|r| r.lhs <= r.rhs && !r.violation));
    let max = |rows: &[mahler::santalo::TheoremETrial]| rows.iter().map(|r| r.lhs).fold(0.0, f64::max);
    assert!(max(&a) / 1e-6 < 10.0 * max(&b) / 1e-8 + 1.0);
    let again = theorem_e_experiment(&k0, 1e-3, 20, 9).unwrap();
    assert_eq!(a, again);
}
