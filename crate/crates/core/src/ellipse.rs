//! Origin-centred extremal ellipses of o-symmetric polygons.

use nalgebra::Vector2;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::geom::{Mat2, Point2, Polygon};

/// Symmetry tolerance relative to the polygon scale.
pub const SYMMETRY_TOL: f64 = 1e-9;
/// Distance to the unit circle that counts as a contact after normalization.
pub const CONTACT_TOL: f64 = 1e-6;
const MVEE_TOL: f64 = 1e-13;
const MVEE_MAX_ITER: usize = 100_000;

/// `{x : (x − c)ᵀ A (x − c) ≤ 1}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "EllipseFile", into = "EllipseFile")]
pub struct Ellipse {
    form: Mat2,
    center: Point2,
}

#[derive(Serialize, Deserialize)]
struct EllipseFile {
    #[serde(rename = "A")]
    a: [[f64; 2]; 2],
    center: Point2,
}

impl TryFrom<EllipseFile> for Ellipse {
    type Error = Error;
    fn try_from(f: EllipseFile) -> Result<Self> {
        if (f.a[0][1] - f.a[1][0]).abs() > 1e-12 * (f.a[0][0].abs() + f.a[1][1].abs()) {
            return Err(Error::Parse("ellipse form is not symmetric".into()));
        }
        Ellipse::new(Mat2::new(f.a[0][0], f.a[0][1], f.a[1][0], f.a[1][1]), f.center)
    }
}

impl From<Ellipse> for EllipseFile {
    fn from(e: Ellipse) -> Self {
        let a = e.form;
        EllipseFile {
            a: [[a[(0, 0)], a[(0, 1)]], [a[(1, 0)], a[(1, 1)]]],
            center: e.center,
        }
    }
}

/// Which extremal ellipse a contact search refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EllipseKind {
    /// Largest inscribed (John).
    Inscribed,
    /// Smallest enclosing (Löwner).
    Circumscribed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ContactPattern {
    Square,
    Hexagon,
    None,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContactReport {
    pub contact_points: Vec<Point2>,
    pub pattern: ContactPattern,
    /// Largest angle between consecutive contacts after normalization.
    pub max_gap_angle: f64,
}

impl Ellipse {
    pub fn new(form: Mat2, center: Point2) -> Result<Self> {
        let a = form;
        if a.iter().any(|x| !x.is_finite()) || !center.is_finite() {
            return Err(Error::NonFinite);
        }
        let sym = (a + a.transpose()) * 0.5;
        if sym[(0, 0)] <= 0.0 || sym.determinant() <= 0.0 {
            return Err(Error::SingularMatrix);
        }
        Ok(Ellipse { form: sym, center })
    }

    /// Origin-centred disk of radius `r`.
    pub fn circle(r: f64) -> Result<Self> {
        Ellipse::new(Mat2::identity() / (r * r), Point2::ORIGIN)
    }

    pub fn form(&self) -> &Mat2 {
        &self.form
    }

    pub fn center(&self) -> Point2 {
        self.center
    }

    pub fn area(&self) -> f64 {
        PI / self.form.determinant().sqrt()
    }

    /// `√((x − c)ᵀ A (x − c))`; at most 1 inside.
    pub fn gauge(&self, x: Point2) -> f64 {
        let d = x - self.center;
        let v = Vector2::new(d.x, d.y);
        (v.dot(&(self.form * v))).max(0.0).sqrt()
    }

    pub fn contains(&self, x: Point2, tol: f64) -> bool {
        self.gauge(x) <= 1.0 + tol
    }

    /// `h_E(u) = √(uᵀ A⁻¹ u) + ⟨c, u⟩`.
    pub fn support(&self, u: Point2) -> f64 {
        let inv = self.inverse_form();
        let v = Vector2::new(u.x, u.y);
        v.dot(&(inv * v)).sqrt() + self.center.dot(u)
    }

    fn inverse_form(&self) -> Mat2 {
        self.form.try_inverse().expect("form is positive definite")
    }

    /// Polar ellipse `{x : xᵀ A⁻¹ x ≤ 1}`; requires the centre at `o`.
    pub fn polar(&self) -> Result<Ellipse> {
        if self.center != Point2::ORIGIN {
            return Err(Error::OriginNotInterior);
        }
        Ellipse::new(self.inverse_form(), Point2::ORIGIN)
    }

    /// Image `T·E`: form `T⁻ᵀ A T⁻¹`, centre `T c`.
    pub fn transform(&self, t: &Mat2) -> Result<Ellipse> {
        let inv = t.try_inverse().ok_or(Error::SingularMatrix)?;
        Ellipse::new(inv.transpose() * self.form * inv, self.center.transform(t))
    }

    /// Symmetric square root of `A`, which maps `E − c` onto the unit disk.
    pub fn normalizer(&self) -> Mat2 {
        let eig = self.form.symmetric_eigen();
        let d = Mat2::new(eig.eigenvalues[0].sqrt(), 0.0, 0.0, eig.eigenvalues[1].sqrt());
        eig.eigenvectors * d * eig.eigenvectors.transpose()
    }

    /// Boundary sampled at `n` equally spaced parameters.
    pub fn to_polygon(&self, n: usize) -> Result<Polygon> {
        let w = self.normalizer().try_inverse().ok_or(Error::SingularMatrix)?;
        let pts = (0..n)
            .map(|k| Point2::polar(2.0 * PI * k as f64 / n as f64).transform(&w) + self.center)
            .collect();
        Polygon::new(pts)
    }

    /// Max entry difference of the forms plus centre distance.
    pub fn distance(&self, other: &Ellipse) -> f64 {
        (self.form - other.form).abs().max() + self.center.dist(other.center)
    }
}

fn require_symmetric(k: &Polygon) -> Result<()> {
    if !k.is_o_symmetric(SYMMETRY_TOL) {
        return Err(Error::NotSymmetric);
    }
    Ok(())
}

/// Minimum-area origin-centred ellipse containing `K`.
///
/// Weighted-design iteration with away steps on one vertex per antipodal
/// pair, stopped once every `pᵀ M⁻¹ p ≤ 2(1 + 1e-13)`; the result is then
/// scaled so every vertex lies inside.
pub fn loewner(k: &Polygon) -> Result<Ellipse> {
    require_symmetric(k)?;
    loewner_of_points(&k.vertices()[..k.len() / 2])
}

/// Minimum-area origin-centred ellipse containing `±p` for every given `p`.
pub fn loewner_of_points(points: &[Point2]) -> Result<Ellipse> {
    let s = points.iter().map(|p| p.norm()).fold(0.0, f64::max);
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::DegenerateBody);
    }
    let pts: Vec<Vector2<f64>> = points
        .iter()
        .map(|v| Vector2::new(v.x / s, v.y / s))
        .collect();
    let m = pts.len();
    let d = 2.0;
    let mut u = vec![1.0 / m as f64; m];
    let moment = |u: &[f64]| {
        pts.iter()
            .zip(u)
            .fold(Mat2::zeros(), |acc, (p, &w)| acc + p * p.transpose() * w)
    };
    let mut minv = moment(&u).try_inverse().ok_or(Error::DegenerateBody)?;
    for _ in 0..MVEE_MAX_ITER {
        let g: Vec<f64> = pts.iter().map(|p| p.dot(&(minv * p))).collect();
        let (j, gj) = g
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |b, (i, x)| if x > b.1 { (i, x) } else { b });
        if gj <= d * (1.0 + MVEE_TOL) {
            break;
        }
        let (k_away, gk) = g
            .iter()
            .copied()
            .enumerate()
            .filter(|&(i, _)| u[i] > 0.0)
            .fold((0, f64::INFINITY), |b, (i, x)| if x < b.1 { (i, x) } else { b });
        if gj - d >= d - gk {
            let a = (gj - d) / (d * (gj - 1.0));
            u.iter_mut().for_each(|w| *w *= 1.0 - a);
            u[j] += a;
        } else {
            let floor = -u[k_away] / (1.0 - u[k_away]);
            let a = if gk <= 1.0 {
                floor
            } else {
                ((gk - d) / (d * (gk - 1.0))).max(floor)
            };
            u.iter_mut().for_each(|w| *w *= 1.0 - a);
            u[k_away] += a;
            if a == floor {
                u[k_away] = 0.0;
            }
        }
        minv = moment(&u).try_inverse().ok_or(Error::DegenerateBody)?;
    }
    let mut a = minv / d;
    if let Some(exact) = polish(&pts, &a) {
        a = exact;
    }
    let worst = pts.iter().map(|p| p.dot(&(a * p))).fold(0.0, f64::max);
    if worst > 1.0 {
        a /= worst;
    }
    Ellipse::new(a / (s * s), Point2::ORIGIN)
}

const POLISH_MAX_ACTIVE: usize = 40;

/// Snaps an approximate minimum ellipse to the exact one.
///
/// The planar optimum is the minimum ellipse of at most three of the nearly
/// active points (up to sign): for two points it is the image of the unit
/// circle under `[p q]`, for three it passes through all of them. Among the
/// candidates that contain every point the one of largest `det A` wins.
/// Iterative solvers crawl when more than three points are active, which
/// leaves contacts visibly off the boundary without this step.
fn polish(pts: &[Vector2<f64>], approx: &Mat2) -> Option<Mat2> {
    let mut active: Vec<Vector2<f64>> = Vec::new();
    for p in pts {
        if p.dot(&(approx * p)) < 1.0 - 1e-3 {
            continue;
        }
        if active.iter().all(|q| (q - p).norm() > 1e-12 && (q + p).norm() > 1e-12) {
            active.push(*p);
        }
    }
    if active.len() < 2 || active.len() > POLISH_MAX_ACTIVE {
        return None;
    }
    let feasible = |a: &Mat2| pts.iter().all(|p| p.dot(&(a * p)) <= 1.0 + 1e-12);
    let mut best: Option<(f64, Mat2)> = None;
    let mut offer = |a: Mat2| {
        let det = a.determinant();
        let spd = a[(0, 0)] > 0.0 && det > 0.0;
        if spd && best.is_none_or(|(b, _)| det > b) && feasible(&a) {
            best = Some((det, a));
        }
    };
    let n = active.len();
    for i in 0..n {
        for j in i + 1..n {
            let (p, q) = (active[i], active[j]);
            if let Some(inv) = Mat2::from_columns(&[p, q]).try_inverse() {
                offer(inv.transpose() * inv);
            }
            for r in &active[j + 1..] {
                // a11 x^2 + 2 a12 x y + a22 y^2 = 1 at p, q, r
                let row = |v: &Vector2<f64>| [v.x * v.x, 2.0 * v.x * v.y, v.y * v.y];
                let m = nalgebra::Matrix3::from_rows(&[
                    row(&p).into(),
                    row(&q).into(),
                    row(r).into(),
                ]);
                if let Some(c) = m.lu().solve(&nalgebra::Vector3::new(1.0, 1.0, 1.0)) {
                    offer(Mat2::new(c[0], c[1], c[1], c[2]));
                }
            }
        }
    }
    best.map(|(_, a)| a)
}

/// Maximum-area origin-centred ellipse inside `K`, as the polar of the
/// Löwner ellipse of `K*`.
pub fn john(k: &Polygon) -> Result<Ellipse> {
    require_symmetric(k)?;
    loewner(&k.polar()?)?.polar()
}

/// Contact points of `K` with an extremal ellipse and their Behrend pattern.
pub fn behrend_contacts(k: &Polygon, e: &Ellipse, which: EllipseKind) -> Result<ContactReport> {
    let w = e.normalizer();
    let winv = w.try_inverse().ok_or(Error::SingularMatrix)?;
    let kn = k.translate(-e.center()).apply_linear(&w)?;
    let mut found: Vec<Point2> = match which {
        EllipseKind::Circumscribed => kn
            .vertices()
            .iter()
            .copied()
            .filter(|v| (v.norm() - 1.0).abs() <= CONTACT_TOL)
            .collect(),
        EllipseKind::Inscribed => kn
            .edges()
            .filter_map(|(p, q)| {
                let e = q - p;
                let t = (-p.dot(e) / e.norm_sq()).clamp(0.0, 1.0);
                let f = p + e * t;
                ((f.norm() - 1.0).abs() <= CONTACT_TOL).then_some(f)
            })
            .collect(),
    };
    found.sort_by(|a, b| a.angle().total_cmp(&b.angle()));
    found.dedup_by(|a, b| angle_gap(b.angle(), a.angle()) < 1e-9);
    if found.is_empty() {
        return Err(Error::NoContacts);
    }
    let angles: Vec<f64> = found.iter().map(|p| p.angle()).collect();
    Ok(ContactReport {
        pattern: classify(&angles),
        max_gap_angle: max_gap(&angles, 2.0 * PI),
        contact_points: found
            .iter()
            .map(|p| p.transform(&winv) + e.center())
            .collect(),
    })
}

/// Counterclockwise angle from `a` to `b` in `[0, 2π)`.
fn angle_gap(a: f64, b: f64) -> f64 {
    (b - a).rem_euclid(2.0 * PI)
}

/// Largest cyclic gap of `angles` taken modulo `period`.
fn max_gap(angles: &[f64], period: f64) -> f64 {
    let mut a: Vec<f64> = angles.iter().map(|x| x.rem_euclid(period)).collect();
    a.sort_by(f64::total_cmp);
    if a.len() < 2 {
        return period;
    }
    let wrap = a[0] + period - a[a.len() - 1];
    a.windows(2).map(|w| w[1] - w[0]).fold(wrap, f64::max)
}

fn classify(angles: &[f64]) -> ContactPattern {
    // contacts come in antipodal pairs, so work with directions mod π
    let mut dirs: Vec<f64> = angles.iter().map(|a| a.rem_euclid(PI)).collect();
    dirs.sort_by(f64::total_cmp);
    dirs.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    let tol = 1e-6;
    let perpendicular = dirs.iter().enumerate().any(|(i, &a)| {
        dirs[i + 1..]
            .iter()
            .any(|&b| ((b - a) - FRAC_PI_2).abs() <= tol)
    });
    if perpendicular {
        return ContactPattern::Square;
    }
    if hexagon_triple(&dirs) {
        return ContactPattern::Hexagon;
    }
    ContactPattern::None
}

/// Whether three directions mod π have all cyclic gaps below π/2.
fn hexagon_triple(dirs: &[f64]) -> bool {
    let n = dirs.len();
    if n < 3 {
        return false;
    }
    let reach = |from: usize| -> usize {
        // furthest direction ahead of `from` by less than π/2
        (1..n)
            .map(|s| (from + s) % n)
            .take_while(|&j| (dirs[j] - dirs[from]).rem_euclid(PI) < FRAC_PI_2)
            .last()
            .unwrap_or(from)
    };
    (0..n).any(|i0| {
        let i1 = reach(i0);
        let i2 = reach(i1);
        i1 != i0 && i2 != i1 && i2 != i0 && (dirs[i0] - dirs[i2]).rem_euclid(PI) < FRAC_PI_2
    })
}

/// Upper bound on the Banach–Mazur distance from `K` to the ellipses:
/// `1/μ` where `μ E ⊆ K` is the largest shrunken copy of the Löwner ellipse.
pub fn bm_distance_upper(k: &Polygon) -> Result<f64> {
    let e = loewner(k)?;
    if !k.origin_interior() {
        return Err(Error::OriginNotInterior);
    }
    let mu = k
        .edges()
        .filter_map(|(p, q)| Point2::new(q.y - p.y, p.x - q.x).normalized())
        .map(|n| k.support_unchecked(n) / e.support(n))
        .fold(f64::INFINITY, f64::min);
    Ok(1.0 / mu)
}
