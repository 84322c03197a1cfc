use super::{Point2, Polygon};
use crate::error::Result;

/// The closed half-plane `{x : ⟨normal, x⟩ ≤ offset}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HalfPlane {
    pub normal: Point2,
    pub offset: f64,
}

impl HalfPlane {
    pub fn new(normal: Point2, offset: f64) -> Self {
        Self { normal, offset }
    }

    /// The half-plane to the left of the directed line `p → q`.
    pub fn left_of(p: Point2, q: Point2) -> Self {
        let n = Point2::new(q.y - p.y, p.x - q.x);
        Self::new(n, n.dot(p))
    }

    #[inline]
    pub fn slack(&self, x: Point2) -> f64 {
        self.offset - self.normal.dot(x)
    }
}

/// Sutherland–Hodgman step: the part of a convex ring inside `hp`.
pub fn clip_halfplane(ring: &[Point2], hp: &HalfPlane) -> Vec<Point2> {
    let n = ring.len();
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..n {
        let (p, q) = (ring[i], ring[(i + 1) % n]);
        let (sp, sq) = (hp.slack(p), hp.slack(q));
        if sp >= 0.0 {
            out.push(p);
        }
        if (sp >= 0.0) != (sq >= 0.0) {
            let t = sp / (sp - sq);
            out.push(p.lerp(q, t));
        }
    }
    out
}

/// `K ∩ L` for convex polygons; `None` when the intersection has no interior.
pub fn intersect(k: &Polygon, l: &Polygon) -> Option<Polygon> {
    let mut ring = k.vertices().to_vec();
    for (p, q) in l.edges() {
        ring = clip_halfplane(&ring, &HalfPlane::left_of(p, q));
        if ring.len() < 3 {
            return None;
        }
    }
    clean(ring).ok()
}

pub(crate) fn clean(ring: Vec<Point2>) -> Result<Polygon> {
    Polygon::from_samples(ring)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_cut_in_half() {
        let sq = Polygon::regular(4, 2f64.sqrt(), std::f64::consts::FRAC_PI_4).unwrap();
        let hp = HalfPlane::new(Point2::new(1.0, 0.0), 0.0);
        let half = clip_halfplane(sq.vertices(), &hp);
        let k = Polygon::new(half).unwrap();
        assert!((k.area() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn intersection_of_square_and_diamond_is_octagon() {
        let sq = Polygon::regular(4, 2f64.sqrt(), std::f64::consts::FRAC_PI_4).unwrap();
        let dm = Polygon::regular(4, 1.2, 0.0).unwrap();
        let k = intersect(&sq, &dm).unwrap();
        assert_eq!(k.len(), 8);
        let disjoint = dm.translate(Point2::new(10.0, 0.0));
        assert!(intersect(&sq, &disjoint).is_none());
    }
}
