//! Planar points, polar lines and convex polygons.
//!
//! Everything in this crate represents a convex body by a [`Polygon`]: a
//! counterclockwise, strictly convex vertex list. Smooth bodies (disks,
//! elliptic arcs, truncated disks) enter as fine inscribed polygons.

mod clip;
mod point;
mod polygon;

pub use clip::{clip_halfplane, intersect, HalfPlane};
pub use point::{LineStar, Mat2, Point2};
pub use polygon::Polygon;

/// Relative tolerance applied to cross products (scaled by `scale²`).
pub const CONVEXITY_TOL: f64 = 1e-12;

/// `n² sin²(π/n)`: the volume product of a regular `n`-gon centred at `o`.
pub fn regular_product(n: usize) -> f64 {
    let n = n as f64;
    let s = (std::f64::consts::PI / n).sin();
    n * n * s * s
}
