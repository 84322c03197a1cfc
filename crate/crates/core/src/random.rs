//! Seeded generators of random convex polygons.

use rand::Rng;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geom::{Mat2, Point2, Polygon};

const MAX_TRIES: usize = 10_000;

/// A random convex `n`-gon with `o` in its interior: the hull of `n` points
/// at random angles and radii in `[0.6, 1]`, retried until all are extreme.
/// The radial spread halves every 100 failed tries so large `n` still lands.
pub fn random_polygon<R: Rng>(n: usize, rng: &mut R) -> Result<Polygon> {
    if n < 3 {
        return Err(Error::TooFewVertices(n));
    }
    for attempt in 0..MAX_TRIES {
        let lo = 1.0 - 0.4 * 0.5f64.powi((attempt / 100) as i32);
        let pts: Vec<Point2> = (0..n)
            .map(|_| Point2::polar(rng.random_range(0.0..2.0 * PI)) * rng.random_range(lo..1.0))
            .collect();
        if let Ok(p) = Polygon::hull(&pts) {
            if p.len() == n && p.origin_interior() {
                return Ok(p);
            }
        }
    }
    Err(Error::NoConvergence(MAX_TRIES))
}

/// A random o-symmetric `n`-gon (`n` even), built like [`random_polygon`]
/// from `n/2` points and their antipodes.
pub fn random_symmetric_polygon<R: Rng>(n: usize, rng: &mut R) -> Result<Polygon> {
    if n < 4 || n % 2 == 1 {
        return Err(Error::DomainError(format!("symmetric polygons need even n ≥ 4, got {n}")));
    }
    for _ in 0..MAX_TRIES {
        let half: Vec<Point2> = (0..n / 2)
            .map(|_| Point2::polar(rng.random_range(0.0..PI)) * rng.random_range(0.6..1.0))
            .collect();
        let mut pts = half.clone();
        pts.extend(half.iter().map(|&p| -p));
        if let Ok(p) = Polygon::hull(&pts) {
            if p.len() == n {
                return Ok(p);
            }
        }
    }
    Err(Error::NoConvergence(MAX_TRIES))
}

/// Random matrix with singular values in `[0.3, 3]`.
pub fn random_linear<R: Rng>(rng: &mut R) -> Mat2 {
    let rot = |t: f64| {
        let (s, c) = t.sin_cos();
        Mat2::new(c, -s, s, c)
    };
    let d = Mat2::new(rng.random_range(0.3..3.0), 0.0, 0.0, rng.random_range(0.3..3.0));
    rot(rng.random_range(0.0..2.0 * PI)) * d * rot(rng.random_range(0.0..2.0 * PI))
}

/// Uniform point in a convex polygon by rejection from its bounding box.
pub fn random_point_in<R: Rng>(k: &Polygon, rng: &mut R) -> Point2 {
    let (mut lo, mut hi) = (k.vertex(0), k.vertex(0));
    for v in k.vertices() {
        lo = Point2::new(lo.x.min(v.x), lo.y.min(v.y));
        hi = Point2::new(hi.x.max(v.x), hi.y.max(v.y));
    }
    loop {
        let p = Point2::new(rng.random_range(lo.x..hi.x), rng.random_range(lo.y..hi.y));
        if k.contains_strictly(p) {
            return p;
        }
    }
}
