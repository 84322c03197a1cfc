mod common;

use approx::assert_relative_eq;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mahler::optimize::{
    affine_regularity_score, condition_residuals, maximize_product, move_rotate_edge,
    move_slide_vertex, recentering_drift,
};
use mahler::random::{random_linear, random_polygon};
use mahler::{regular_product, Mat2, OptConfig, OptMode, Point2, Polygon};

use common::log_slope;

fn perturbed_hexagon() -> Polygon {
    let mut v = Polygon::regular(6, 1.0, 0.0).unwrap().vertices().to_vec();
    v[1] = Point2::polar(1.25) * 1.05;
    v[4] = v[4] * 0.97;
    Polygon::new(v).unwrap()
}

/// `|sin|` of the angle at `o` between vertex `i` and the midpoint of its neighbours.
fn vertex_residual(k: &Polygon, i: usize) -> f64 {
    let n = k.len();
    let mid = (k.vertex(i + n - 1) + k.vertex(i + 1)) * 0.5;
    let x = k.vertex(i);
    (mid.cross(x) / (mid.norm() * x.norm())).abs()
}

#[test]
fn optimizer_reaches_regular_products() {
    let r = maximize_product(&OptConfig::new(6, OptMode::Symmetric, 1)).unwrap();
    assert!((r.product_trace.last().unwrap() - 9.0).abs() <= 1e-6);
    assert!(r.regularity_score <= 1e-4);
    assert!(r.final_polygon.is_o_symmetric(1e-9));

    let r = maximize_product(&OptConfig::new(4, OptMode::SantaloCentered, 2)).unwrap();
    assert!((r.product_trace.last().unwrap() - 8.0).abs() <= 1e-6);

    let r = maximize_product(&OptConfig::new(5, OptMode::SantaloCentered, 3)).unwrap();
    assert!((r.product_trace.last().unwrap() - regular_product(5)).abs() <= 1e-5);
    assert!((regular_product(5) - 8.63729).abs() < 1e-5);
    assert!(r.residual_i <= 1e-4 && r.residual_ii <= 1e-4);
    assert!(r.product_trace.windows(2).all(|w| w[1] >= w[0]));
}

#[test]
fn optimizer_runs_replay() {
    let cfg = OptConfig::new(7, OptMode::SantaloCentered, 99);
    assert_eq!(maximize_product(&cfg).unwrap(), maximize_product(&cfg).unwrap());
}

#[test]
fn residuals_are_affine_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for n in 3..11 {
        let k = Polygon::regular(n, 1.0, 0.2).unwrap();
        let (a, b) = condition_residuals(&k).unwrap();
        assert!(a <= 1e-12 && b <= 1e-12);
        let img = k.apply_linear(&random_linear(&mut rng)).unwrap();
        let (a, b) = condition_residuals(&img).unwrap();
        assert!(a <= 1e-10 && b <= 1e-10);
    }
    let (a, b) = condition_residuals(&perturbed_hexagon()).unwrap();
    assert!(a > 1e-3 && b > 1e-3);
}

#[test]
fn slides_keep_area() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut checked = 0;
    while checked < 200 {
        let k = random_polygon(rng.random_range(4..10), &mut rng).unwrap();
        let i = rng.random_range(0..k.len());
        let t = rng.random_range(-0.05..0.05);
        if let Ok(m) = move_slide_vertex(&k, i, t, false) {
            assert_relative_eq!(m.area(), k.area(), max_relative = 1e-12);
            checked += 1;
        }
    }
}

#[test]
fn slide_improves_toward_the_midpoint_ray() {
    let k = perturbed_hexagon();
    let h = 1e-6;
    for i in 0..k.len() {
        if vertex_residual(&k, i) < 1e-3 {
            continue;
        }
        let polar = |t: f64| move_slide_vertex(&k, i, t, false).unwrap().polar().unwrap().area();
        let slope = (polar(h) - polar(-h)) / (2.0 * h);
        let step = 1e-3 * slope.signum();
        let moved = move_slide_vertex(&k, i, step, false).unwrap();
        assert!(vertex_residual(&moved, i) < vertex_residual(&k, i), "vertex {i}");
    }
}

#[test]
fn edge_rotation_is_first_order() {
    let k = perturbed_hexagon();
    let base = k.polar().unwrap().area();
    let eps = [4e-3, 2e-3, 1e-3, 5e-4];
    let mut gains = Vec::new();
    for &e in &eps {
        let r = move_rotate_edge(&k, 0, e, false).unwrap();
        assert_relative_eq!(r.area(), k.area(), max_relative = 1e-12);
        gains.push((r.polar().unwrap().area() - base).abs());
    }
    let slope = log_slope(&eps, &gains);
    assert!((slope - 1.0).abs() <= 0.2, "slope {slope}");
}

#[test]
fn recentring_costs_second_order() {
    let k = Polygon::regular(5, 1.0, 0.1).unwrap();
    let ts = [2e-2, 1e-2, 5e-3, 2.5e-3];
    let drift: Vec<f64> = ts.iter().map(|&t| recentering_drift(&k, 1, t).unwrap()).collect();
    assert!(drift.iter().all(|&d| d >= -1e-14));
    assert!(log_slope(&ts, &drift) >= 1.8);
}

#[test]
fn regularity_scores() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    for n in 3..10 {
        let k = Polygon::regular(n, 1.0, 0.4).unwrap();
        assert!(affine_regularity_score(&k).unwrap() <= 1e-10);
        let img = k.apply_linear(&random_linear(&mut rng)).unwrap();
        assert!(affine_regularity_score(&img).unwrap() <= 1e-8, "{n}");
    }
    let mut v = Polygon::regular(6, 1.0, 0.0).unwrap().vertices().to_vec();
    v[2] = v[2] * 1.1;
    let bumped = Polygon::new(v).unwrap();
    assert!(affine_regularity_score(&bumped).unwrap() >= 1e-2);
    let sheared = bumped.apply_linear(&Mat2::new(1.0, 0.3, 0.0, 1.0)).unwrap();
    assert!(affine_regularity_score(&sheared).unwrap() >= 1e-2);
}
