use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{LineStar, Mat2, Point2, CONVEXITY_TOL};
use crate::error::{Error, Result};

/// A strictly convex polygon with counterclockwise vertices.
///
/// The flag `origin_interior` records whether `o` lies strictly inside,
/// which is what polarity needs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PolygonFile", into = "PolygonFile")]
pub struct Polygon {
    vertices: Vec<Point2>,
    origin_interior: bool,
}

/// Wire form: `{"vertices": [[x, y], ...]}`, any orientation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolygonFile {
    pub vertices: Vec<[f64; 2]>,
}

impl TryFrom<PolygonFile> for Polygon {
    type Error = Error;
    fn try_from(f: PolygonFile) -> Result<Self> {
        Polygon::new(f.vertices.into_iter().map(Point2::from).collect())
    }
}

impl From<Polygon> for PolygonFile {
    fn from(p: Polygon) -> Self {
        PolygonFile {
            vertices: p.vertices.into_iter().map(Into::into).collect(),
        }
    }
}

fn scale_of(points: &[Point2]) -> f64 {
    points.iter().map(|p| p.norm()).fold(0.0, f64::max)
}

fn signed_area(points: &[Point2]) -> f64 {
    let n = points.len();
    let mut s = 0.0;
    for i in 0..n {
        s += points[i].cross(points[(i + 1) % n]);
    }
    0.5 * s
}

#[inline]
fn turn(a: Point2, b: Point2, c: Point2) -> f64 {
    (b - a).cross(c - b)
}

impl Polygon {
    /// Validates a cyclic vertex list, flipping clockwise input.
    ///
    /// Collinear triples, reflex vertices and self-overlapping (doubly
    /// wound) lists are rejected as [`Error::NonConvex`].
    pub fn new(mut points: Vec<Point2>) -> Result<Self> {
        let n = points.len();
        if n < 3 {
            return Err(Error::TooFewVertices(n));
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::NonFinite);
        }
        let scale = scale_of(&points);
        if scale == 0.0 {
            return Err(Error::RepeatedVertex(1));
        }
        let a = signed_area(&points);
        if a == 0.0 {
            return Err(Error::NonConvex(0));
        }
        if a < 0.0 {
            points.reverse();
        }
        for i in 0..n {
            let j = (i + 1) % n;
            if (points[j] - points[i]).norm() <= 1e-15 * scale {
                return Err(Error::RepeatedVertex(j));
            }
        }
        let tol = CONVEXITY_TOL * scale * scale;
        let mut winding = 0.0;
        for i in 0..n {
            let (p, q, r) = (points[(i + n - 1) % n], points[i], points[(i + 1) % n]);
            let c = turn(p, q, r);
            if c <= tol {
                return Err(Error::NonConvex(i));
            }
            winding += c.atan2((q - p).dot(r - q));
        }
        if winding > 3.0 * PI {
            return Err(Error::NonConvex(0));
        }
        let origin_interior = Self::origin_strictly_inside(&points);
        Ok(Self {
            vertices: points,
            origin_interior,
        })
    }

    /// Builds a polygon from dense boundary samples of a convex curve,
    /// dropping repeated and (numerically) collinear samples first.
    pub fn from_samples(points: Vec<Point2>) -> Result<Self> {
        if points.len() < 3 {
            return Err(Error::TooFewVertices(points.len()));
        }
        let scale = scale_of(&points);
        let tol = CONVEXITY_TOL * scale * scale;
        let mut pts = points;
        if signed_area(&pts) < 0.0 {
            pts.reverse();
        }
        let same = |a: Point2, b: Point2| (a - b).norm() <= 1e-14 * scale;
        pts.dedup_by(|a, b| same(*a, *b));
        while pts.len() > 1 && same(pts[0], pts[pts.len() - 1]) {
            pts.pop();
        }
        loop {
            let n = pts.len();
            if n < 3 {
                return Err(Error::TooFewVertices(n));
            }
            let mut keep = Vec::with_capacity(n);
            let mut changed = false;
            for i in 0..n {
                let prev = keep.last().copied().unwrap_or(pts[(i + n - 1) % n]);
                let (q, r) = (pts[i], pts[(i + 1) % n]);
                if turn(prev, q, r).abs() <= tol {
                    changed = true;
                    continue;
                }
                keep.push(q);
            }
            if !changed {
                return Polygon::new(keep);
            }
            pts = keep;
        }
    }

    /// Convex hull of a point cloud (Andrew's monotone chain).
    pub fn hull(points: &[Point2]) -> Result<Self> {
        if points.len() < 3 {
            return Err(Error::TooFewVertices(points.len()));
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::NonFinite);
        }
        let scale = scale_of(points);
        let tol = CONVEXITY_TOL * scale * scale;
        let mut pts = points.to_vec();
        pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
        pts.dedup_by(|a, b| (*a - *b).norm() <= 1e-14 * scale);
        if pts.len() < 3 {
            return Err(Error::TooFewVertices(pts.len()));
        }
        let mut lower: Vec<Point2> = Vec::new();
        for &p in &pts {
            while lower.len() >= 2 && turn(lower[lower.len() - 2], lower[lower.len() - 1], p) <= tol
            {
                lower.pop();
            }
            lower.push(p);
        }
        let mut upper: Vec<Point2> = Vec::new();
        for &p in pts.iter().rev() {
            while upper.len() >= 2 && turn(upper[upper.len() - 2], upper[upper.len() - 1], p) <= tol
            {
                upper.pop();
            }
            upper.push(p);
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        Polygon::new(lower)
    }

    /// Regular `n`-gon inscribed in the circle of radius `radius`, first
    /// vertex at angle `phase`.
    pub fn regular(n: usize, radius: f64, phase: f64) -> Result<Self> {
        let pts = (0..n)
            .map(|k| Point2::polar(phase + 2.0 * PI * k as f64 / n as f64) * radius)
            .collect();
        Polygon::new(pts)
    }

    /// Caller guarantees a strictly convex counterclockwise list.
    pub(crate) fn from_ccw_unchecked(vertices: Vec<Point2>) -> Self {
        let origin_interior = Self::origin_strictly_inside(&vertices);
        Self {
            vertices,
            origin_interior,
        }
    }

    fn origin_strictly_inside(points: &[Point2]) -> bool {
        let n = points.len();
        let scale = scale_of(points);
        (0..n).all(|i| {
            let (p, q) = (points[i], points[(i + 1) % n]);
            let e = q - p;
            // distance from o to the edge line, positive on the inner side
            p.cross(e) / e.norm() > 1e-12 * scale
        })
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn origin_interior(&self) -> bool {
        self.origin_interior
    }

    pub fn vertex(&self, i: usize) -> Point2 {
        self.vertices[i % self.vertices.len()]
    }

    /// Edges as `(start, end)` pairs in counterclockwise order.
    pub fn edges(&self) -> impl Iterator<Item = (Point2, Point2)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Max vertex norm, the scale used by all relative tolerances.
    pub fn scale(&self) -> f64 {
        scale_of(&self.vertices)
    }

    /// Shoelace area.
    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    pub fn perimeter(&self) -> f64 {
        self.edges().map(|(p, q)| p.dist(q)).sum()
    }

    /// Polar body: vertex `i` is the pole of the edge line `v_i v_{i+1}`.
    ///
    /// Applying it twice returns the original vertices shifted by one index.
    pub fn polar(&self) -> Result<Polygon> {
        if !self.origin_interior {
            return Err(Error::OriginNotInterior);
        }
        let vertices = self
            .edges()
            .map(|(p, q)| {
                let e = q - p;
                Point2::new(e.y, -e.x) / p.cross(q)
            })
            .collect();
        Ok(Polygon::from_ccw_unchecked(vertices))
    }

    /// Polar lines of the edges, in order.
    pub fn edge_lines(&self) -> Result<Vec<LineStar>> {
        self.edges().map(|(p, q)| LineStar::through(p, q)).collect()
    }

    /// `V(K) · V(K*)`.
    pub fn volume_product(&self) -> Result<f64> {
        Ok(self.area() * self.polar()?.area())
    }

    /// `h_K(u) = max ⟨u, v⟩` over the vertices.
    pub fn support(&self, u: Point2) -> Result<f64> {
        if u == Point2::ORIGIN {
            return Err(Error::ZeroDirection);
        }
        Ok(self.support_unchecked(u))
    }

    pub(crate) fn support_unchecked(&self, u: Point2) -> f64 {
        self.vertices
            .iter()
            .map(|v| v.dot(u))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Vertexwise image `M·K`, re-validated and re-oriented.
    pub fn apply_linear(&self, m: &Mat2) -> Result<Polygon> {
        let det = m.determinant();
        let norm2 = m.iter().map(|a| a * a).sum::<f64>();
        if !det.is_finite() || det.abs() <= 1e-14 * norm2 {
            return Err(Error::SingularMatrix);
        }
        let pts = self.vertices.iter().map(|v| v.transform(m)).collect();
        Polygon::new(pts)
    }

    /// `K + t`.
    pub fn translate(&self, t: Point2) -> Polygon {
        Polygon::from_ccw_unchecked(self.vertices.iter().map(|&v| v + t).collect())
    }

    /// `s·K` for `s > 0`.
    pub fn scaled(&self, s: f64) -> Polygon {
        assert!(s > 0.0, "scale factor must be positive");
        Polygon::from_ccw_unchecked(self.vertices.iter().map(|&v| v * s).collect())
    }

    /// `-K`.
    pub fn reflect(&self) -> Polygon {
        Polygon::from_ccw_unchecked(self.vertices.iter().map(|&v| -v).collect())
    }

    /// Unnormalized first moment `∫_K y dy`.
    pub fn first_moment(&self) -> Point2 {
        let v0 = self.vertices[0];
        let mut m = Point2::ORIGIN;
        for i in 1..self.vertices.len() - 1 {
            let (a, b) = (self.vertices[i], self.vertices[i + 1]);
            let w = 0.5 * (a - v0).cross(b - v0);
            m += (v0 + a + b) * (w / 3.0);
        }
        m
    }

    pub fn centroid(&self) -> Point2 {
        let v0 = self.vertices[0];
        let mut m = Point2::ORIGIN;
        let mut area = 0.0;
        for i in 1..self.vertices.len() - 1 {
            let (a, b) = (self.vertices[i] - v0, self.vertices[i + 1] - v0);
            let w = 0.5 * a.cross(b);
            area += w;
            m += (a + b) * (w / 3.0);
        }
        v0 + m / area
    }

    /// Second moment `∫_K y yᵀ dy` about the origin.
    pub fn second_moment(&self) -> Mat2 {
        let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
        for (p, q) in self.edges() {
            let c = p.cross(q);
            sxx += c * (p.x * p.x + p.x * q.x + q.x * q.x);
            syy += c * (p.y * p.y + p.y * q.y + q.y * q.y);
            sxy += c * (2.0 * p.x * p.y + p.x * q.y + q.x * p.y + 2.0 * q.x * q.y);
        }
        Mat2::new(sxx / 12.0, sxy / 24.0, sxy / 24.0, syy / 12.0)
    }

    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for (i, &a) in self.vertices.iter().enumerate() {
            for &b in &self.vertices[i + 1..] {
                d = d.max(a.dist(b));
            }
        }
        d
    }

    /// Signed distance from `z` to each edge line (positive inside).
    pub fn edge_distances(&self, z: Point2) -> impl Iterator<Item = f64> + '_ {
        self.edges().map(move |(p, q)| {
            let e = q - p;
            e.cross(z - p) / e.norm()
        })
    }

    /// `min` over edges of the signed distance from `z`.
    pub fn depth(&self, z: Point2) -> f64 {
        self.edge_distances(z).fold(f64::INFINITY, f64::min)
    }

    pub fn contains(&self, z: Point2, tol: f64) -> bool {
        self.depth(z) >= -tol
    }

    pub fn contains_strictly(&self, z: Point2) -> bool {
        self.depth(z) > 1e-12 * self.scale().max(z.norm())
    }

    /// Euclidean distance from `z` to the body (zero inside).
    pub fn distance_to(&self, z: Point2) -> f64 {
        if self.depth(z) >= 0.0 {
            return 0.0;
        }
        self.edges()
            .map(|(p, q)| segment_distance(z, p, q))
            .fold(f64::INFINITY, f64::min)
    }

    /// Distance from `z` to the boundary.
    pub fn boundary_distance(&self, z: Point2) -> f64 {
        self.edges()
            .map(|(p, q)| segment_distance(z, p, q))
            .fold(f64::INFINITY, f64::min)
    }

    /// Whether `other ⊆ self` up to `tol`.
    pub fn contains_polygon(&self, other: &Polygon, tol: f64) -> bool {
        other.vertices.iter().all(|&v| self.contains(v, tol))
    }

    /// Symmetric Hausdorff distance.
    ///
    /// The distance to a convex set is convex, so the one-sided maxima are
    /// attained at vertices; support differences at all edge normals are
    /// folded in as a lower-bound check.
    pub fn hausdorff(&self, other: &Polygon) -> f64 {
        let a = self
            .vertices
            .iter()
            .map(|&v| other.distance_to(v))
            .fold(0.0, f64::max);
        let b = other
            .vertices
            .iter()
            .map(|&v| self.distance_to(v))
            .fold(0.0, f64::max);
        let mut d = a.max(b);
        for (p, q) in self.edges().chain(other.edges()) {
            if let Some(u) = Point2::new(q.y - p.y, p.x - q.x).normalized() {
                d = d.max((self.support_unchecked(u) - other.support_unchecked(u)).abs());
            }
        }
        d
    }

    /// Whether `-K = K` up to `tol · scale`.
    pub fn is_o_symmetric(&self, tol: f64) -> bool {
        let n = self.vertices.len();
        if n % 2 == 1 {
            return false;
        }
        let eps = tol * self.scale();
        let h = n / 2;
        (0..n).all(|i| (self.vertices[i] + self.vertices[(i + h) % n]).norm() <= eps)
    }

    /// Vertexwise comparison allowing a cyclic shift of the indices.
    pub fn approx_eq_cyclic(&self, other: &Polygon, tol: f64) -> bool {
        let n = self.len();
        if n != other.len() {
            return false;
        }
        (0..n).any(|s| (0..n).all(|i| self.vertex(i).dist(other.vertex(i + s)) <= tol))
    }

    /// Turn of the boundary at vertex `i` (cross product of incident edges).
    pub fn turn_at(&self, i: usize) -> f64 {
        let n = self.len();
        turn(self.vertex(i + n - 1), self.vertex(i), self.vertex(i + 1))
    }
}

/// Distance from `z` to the segment `[p, q]`.
pub(crate) fn segment_distance(z: Point2, p: Point2, q: Point2) -> f64 {
    let e = q - p;
    let l2 = e.norm_sq();
    if l2 == 0.0 {
        return z.dist(p);
    }
    let t = ((z - p).dot(e) / l2).clamp(0.0, 1.0);
    z.dist(p + e * t)
}
