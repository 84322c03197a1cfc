//! Steiner symmetrization of o-symmetric polygons about lines through `o`.

use serde::{Deserialize, Serialize};

use crate::ellipse::SYMMETRY_TOL;
use crate::error::{Error, Result};
use crate::geom::{Mat2, Point2, Polygon};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SteinerReport {
    pub symmetral: Polygon,
    pub area_drift: f64,
    pub polar_area_before: f64,
    pub polar_area_after: f64,
    /// The input is a shear of the symmetral fixing lines orthogonal to the axis.
    pub equality_case: bool,
    /// Slope of the chord midpoints in the axis frame.
    pub shear: f64,
}

fn rotation(theta: f64) -> Mat2 {
    let (s, c) = theta.sin_cos();
    Mat2::new(c, -s, s, c)
}

/// Vertical chord `[lo, hi]` of a convex polygon at abscissa `x`.
fn chord(k: &Polygon, x: f64, tol: f64) -> Option<(f64, f64)> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (p, q) in k.edges() {
        let (a, b) = if p.x <= q.x { (p, q) } else { (q, p) };
        if x < a.x - tol || x > b.x + tol {
            continue;
        }
        if b.x - a.x <= tol {
            lo = lo.min(a.y.min(b.y));
            hi = hi.max(a.y.max(b.y));
        } else {
            let t = ((x - a.x) / (b.x - a.x)).clamp(0.0, 1.0);
            let y = a.y + t * (b.y - a.y);
            lo = lo.min(y);
            hi = hi.max(y);
        }
    }
    (lo <= hi).then_some((lo, hi))
}

/// Symmetrizes `K` about the line through `o` at angle `axis_angle`.
pub fn steiner(k: &Polygon, axis_angle: f64) -> Result<SteinerReport> {
    if !k.is_o_symmetric(SYMMETRY_TOL) {
        return Err(Error::NotSymmetric);
    }
    let scale = k.scale();
    let tol = 1e-12 * scale;
    let kr = k.apply_linear(&rotation(-axis_angle))?;

    let mut xs: Vec<f64> = kr.vertices().iter().map(|v| v.x).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup_by(|a, b| (*a - *b).abs() <= tol);

    let chords: Vec<(f64, f64, f64)> = xs
        .iter()
        .filter_map(|&x| chord(&kr, x, tol).map(|(lo, hi)| (x, lo, hi)))
        .collect();

    let mut ring: Vec<Point2> = chords
        .iter()
        .map(|&(x, lo, hi)| Point2::new(x, -(hi - lo) / 2.0))
        .collect();
    ring.extend(
        chords
            .iter()
            .rev()
            .map(|&(x, lo, hi)| Point2::new(x, (hi - lo) / 2.0)),
    );
    let symmetral = Polygon::from_samples(ring)?.apply_linear(&rotation(axis_angle))?;

    // the midpoints of an o-symmetric body's chords lie on a line through o
    // exactly when the body is a shear of its symmetral
    let (sxm, sxx) = chords.iter().fold((0.0, 0.0), |(sxm, sxx), &(x, lo, hi)| {
        (sxm + x * (lo + hi) / 2.0, sxx + x * x)
    });
    let shear = sxm / sxx;
    let residual = chords
        .iter()
        .map(|&(x, lo, hi)| ((lo + hi) / 2.0 - shear * x).abs())
        .fold(0.0, f64::max);

    Ok(SteinerReport {
        area_drift: (symmetral.area() - k.area()).abs(),
        polar_area_before: k.polar()?.area(),
        polar_area_after: symmetral.polar()?.area(),
        equality_case: residual <= 1e-8 * scale,
        shear,
        symmetral,
    })
}

/// Applies [`steiner`] about each angle in turn.
pub fn steiner_round(k: &Polygon, angles: &[f64]) -> Result<Polygon> {
    angles
        .iter()
        .try_fold(k.clone(), |body, &a| Ok(steiner(&body, a)?.symmetral))
}

/// Hausdorff distance from `K` to the disk of radius `r` about `o`.
///
/// Support values of a polygon range from its inradius about `o` (at edge
/// normals) to its circumradius about `o` (at vertices).
pub fn hausdorff_to_disk(k: &Polygon, r: f64) -> f64 {
    let outer = k.scale();
    let inner = k.depth(Point2::ORIGIN);
    (outer - r).max(r - inner).max(0.0)
}
