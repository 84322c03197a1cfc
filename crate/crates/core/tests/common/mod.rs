//! Oracles shared by the integration tests, written without the library's
//! polar or solver code.

#![allow(dead_code)]

use mahler::{Point2, Polygon};

fn shoelace(ring: &[Point2]) -> f64 {
    let n = ring.len();
    (0..n)
        .map(|i| {
            let (p, q) = (ring[i], ring[(i + 1) % n]);
            p.x * q.y - p.y * q.x
        })
        .sum::<f64>()
        / 2.0
}

/// Area of `(K − z)*` from the poles of the edge lines of `K − z`.
pub fn polar_area_oracle(k: &Polygon, z: Point2) -> f64 {
    let v = k.vertices();
    let n = v.len();
    let poles: Vec<Point2> = (0..n)
        .map(|i| {
            let (p, q) = (v[i], v[(i + 1) % n]);
            let normal = Point2::new(q.y - p.y, p.x - q.x);
            let h = normal.x * (p.x - z.x) + normal.y * (p.y - z.y);
            Point2::new(normal.x / h, normal.y / h)
        })
        .collect();
    shoelace(&poles)
}

/// Minimizer of [`polar_area_oracle`] over `K` by repeatedly zooming a grid.
pub fn grid_minimizer(k: &Polygon) -> Point2 {
    let (mut lo, mut hi) = k.vertices().iter().fold(
        (Point2::new(f64::MAX, f64::MAX), Point2::new(f64::MIN, f64::MIN)),
        |(lo, hi), p| {
            (
                Point2::new(lo.x.min(p.x), lo.y.min(p.y)),
                Point2::new(hi.x.max(p.x), hi.y.max(p.y)),
            )
        },
    );
    let steps = 24;
    let mut best = Point2::new((lo.x + hi.x) / 2.0, (lo.y + hi.y) / 2.0);
    while hi.x - lo.x > 1e-11 || hi.y - lo.y > 1e-11 {
        let (dx, dy) = ((hi.x - lo.x) / steps as f64, (hi.y - lo.y) / steps as f64);
        let mut best_f = f64::INFINITY;
        for i in 0..=steps {
            for j in 0..=steps {
                let z = Point2::new(lo.x + i as f64 * dx, lo.y + j as f64 * dy);
                if !k.contains_strictly(z) {
                    continue;
                }
                let f = polar_area_oracle(k, z);
                if f < best_f {
                    best_f = f;
                    best = z;
                }
            }
        }
        lo = Point2::new(best.x - 2.0 * dx, best.y - 2.0 * dy);
        hi = Point2::new(best.x + 2.0 * dx, best.y + 2.0 * dy);
    }
    best
}

/// Least-squares slope of `log y` against `log x`.
pub fn log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}
