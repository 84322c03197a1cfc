//! Extremal sector bodies inside the deltoid `Q = [o, a, b, c]` and the
//! area-sum bound `V(K) + V(K*) ≤ 2π` in John or Löwner position.
//!
//! A sector of half-angle `α` is the cone over the arc of `S¹` from
//! `a = (cos α, −sin α)` to `c = (cos α, sin α)`. The part `C = K ∩ Q` of a
//! body with `a, c ∈ ∂K` and `K ∩ S ⊆ Q` has area in `(cos α sin α, tan α)`,
//! and for each area there is an extremal `C` maximizing `V(K* ∩ Q)`:
//!
//! - below `α`: an axis-parallel origin-centred ellipse arc through `a, c`;
//! - at `α`: the unit circle;
//! - above `α`: two tangent segments of length `s` from `a` and `c`, joined
//!   by the axis-parallel ellipse tangent to both tangent lines.
//!
//! Polarity exchanges the first and last kinds.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::ellipse::{behrend_contacts, john, loewner, ContactPattern, Ellipse, EllipseKind};
use crate::error::{Error, Result};
use crate::geom::{clip_halfplane, HalfPlane, Mat2, Point2, Polygon};

/// Area tolerance of the bisections.
pub const AREA_TOL: f64 = 1e-12;

/// `Q = [o, a, b, c]` for half-angle `α`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Deltoid {
    pub alpha: f64,
    pub a: Point2,
    pub b: Point2,
    pub c: Point2,
}

impl Deltoid {
    pub fn new(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        let (s, c) = alpha.sin_cos();
        Ok(Deltoid {
            alpha,
            a: Point2::new(c, -s),
            b: Point2::new(1.0 / c, 0.0),
            c: Point2::new(c, s),
        })
    }

    /// `V(Q) = tan α`.
    pub fn area(&self) -> f64 {
        self.alpha.tan()
    }

    /// `V([o, a, c]) = cos α sin α`.
    pub fn triangle_area(&self) -> f64 {
        self.alpha.cos() * self.alpha.sin()
    }

    /// Distances from `o` to the lines `ab` and `bc`.
    pub fn tangency_distances(&self) -> (f64, f64) {
        let dist = |p: Point2, q: Point2| p.cross(q - p).abs() / (q - p).norm();
        (dist(self.a, self.b), dist(self.b, self.c))
    }

    pub fn polygon(&self) -> Polygon {
        Polygon::from_ccw_unchecked(vec![Point2::ORIGIN, self.a, self.b, self.c])
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < PI / 2.0) {
        return Err(Error::DomainError(format!("alpha = {alpha} outside (0, π/2)")));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SectorCase {
    /// Area below `α`: ellipse arc through `a` and `c`.
    I,
    /// Area `α`: the unit circle.
    Ii,
    /// Area above `α`: tangent segments plus an ellipse arc.
    Iii,
}

/// Conic type of a boundary arc, read off its quadratic form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConicType {
    Ellipse,
    Parabola,
    Hyperbola,
}

impl ConicType {
    pub fn of(form: &Mat2) -> Self {
        let d = form.determinant();
        let scale = form.abs().max().powi(2);
        if d.abs() <= 1e-12 * scale {
            ConicType::Parabola
        } else if d > 0.0 {
            ConicType::Ellipse
        } else {
            ConicType::Hyperbola
        }
    }
}

/// The extremal sector boundary of a given area.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SectorSpec {
    pub alpha: f64,
    pub target_area: f64,
    pub case_tag: SectorCase,
    pub arc_ellipse: Ellipse,
    /// Length of each tangent segment (case iii only).
    pub segment_length: Option<f64>,
}

impl SectorSpec {
    /// Horizontal and vertical semi-axes of the arc ellipse.
    pub fn semi_axes(&self) -> (f64, f64) {
        let a = self.arc_ellipse.form();
        (1.0 / a[(0, 0)].sqrt(), 1.0 / a[(1, 1)].sqrt())
    }

    /// Upper end of the arc: `c` in cases i, ii and `c' = c + s (sin α, −cos α)` in case iii.
    pub fn arc_end(&self) -> Point2 {
        let (s, c) = self.alpha.sin_cos();
        let t = self.segment_length.unwrap_or(0.0);
        Point2::new(c + t * s, s - t * c)
    }

    /// Boundary of `C` from `a` to `c`, with `n` samples on the arc.
    pub fn boundary(&self, n: usize) -> Vec<Point2> {
        let (p, q) = self.semi_axes();
        let end = self.arc_end();
        let t0 = (end.x / p).clamp(-1.0, 1.0).acos();
        let n = n.max(2);
        let arc = (0..n).map(|k| {
            let t = -t0 + 2.0 * t0 * k as f64 / (n - 1) as f64;
            Point2::new(p * t.cos(), q * t.sin())
        });
        let d = Deltoid::new(self.alpha).expect("validated");
        let mut pts = Vec::with_capacity(n + 2);
        if self.case_tag == SectorCase::Iii {
            pts.push(d.a);
        }
        pts.extend(arc);
        if self.case_tag == SectorCase::Iii {
            pts.push(d.c);
        }
        // pin the arc ends to the exact corner points
        let len = pts.len();
        if self.case_tag == SectorCase::Iii {
            pts[1] = Point2::new(end.x, -end.y);
            pts[len - 2] = end;
        } else {
            pts[0] = d.a;
            pts[len - 1] = d.c;
        }
        pts
    }

    /// `C = K ∩ Q` as a polygon with `n` arc samples.
    pub fn region(&self, n: usize) -> Result<Polygon> {
        let mut pts = vec![Point2::ORIGIN];
        pts.extend(self.boundary(n));
        Polygon::from_samples(pts)
    }

    /// Exact `V(C)` of the constructed boundary.
    pub fn area(&self) -> f64 {
        let (p, q) = self.semi_axes();
        let end = self.arc_end();
        self.segment_length.unwrap_or(0.0) + p * q * (end.x / p).clamp(-1.0, 1.0).acos()
    }

    /// Exact `V(K* ∩ Q)` for the extremal body.
    pub fn polar_area(&self) -> f64 {
        let (p, q) = self.semi_axes();
        let (s, c) = self.alpha.sin_cos();
        match self.case_tag {
            SectorCase::Ii => self.alpha,
            SectorCase::I => {
                let pole = Point2::new(c / (p * p), s / (q * q));
                pole.dist(Point2::new(c, s)) + (c / p).acos() / (p * q)
            }
            SectorCase::Iii => (p * c).clamp(-1.0, 1.0).acos() / (p * q),
        }
    }

    /// The extremal part of `K*`: polar ellipse arc, with the tangent
    /// segments it produces at the corners.
    pub fn dual(&self) -> Result<SectorSpec> {
        let (p, q) = self.semi_axes();
        let (s, c) = self.alpha.sin_cos();
        let arc = self.arc_ellipse.polar()?;
        let (case_tag, segment_length) = match self.case_tag {
            SectorCase::Ii => (SectorCase::Ii, None),
            SectorCase::I => {
                let pole = Point2::new(c / (p * p), s / (q * q));
                (SectorCase::Iii, Some(pole.dist(Point2::new(c, s))))
            }
            SectorCase::Iii => (SectorCase::I, None),
        };
        Ok(SectorSpec {
            alpha: self.alpha,
            target_area: self.polar_area(),
            case_tag,
            arc_ellipse: arc,
            segment_length,
        })
    }

    /// Conic type of the arc of the dual boundary.
    pub fn dual_conic(&self) -> ConicType {
        ConicType::of(&self.arc_ellipse.form().try_inverse().unwrap_or(Mat2::zeros()))
    }
}

fn axis_ellipse(p: f64, q: f64) -> Result<Ellipse> {
    Ellipse::new(Mat2::new(1.0 / (p * p), 0.0, 0.0, 1.0 / (q * q)), Point2::ORIGIN)
}

/// Increasing-function bisection on `(lo, hi)` to `|f − target| ≤ AREA_TOL`.
fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, target: f64) -> Result<f64> {
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let x = 0.5 * (lo + hi);
    let err = (f(x) - target).abs();
    if !(err <= AREA_TOL * target.max(1.0)) {
        return Err(Error::BisectionFailure(format!(
            "area residual {err:e} at parameter {x}"
        )));
    }
    Ok(x)
}

/// Semi-axis `q` of the ellipse through `(cos α, ±sin α)` with semi-axis `p`.
fn through_corner_q(alpha: f64, p: f64) -> f64 {
    let (s, c) = alpha.sin_cos();
    s / (1.0 - (c / p).powi(2)).sqrt()
}

/// Area of the case-i region with horizontal semi-axis `p ∈ (cos α, 1]`.
fn area_case_i(alpha: f64, p: f64) -> f64 {
    let c = alpha.cos();
    let q = through_corner_q(alpha, p);
    if !q.is_finite() {
        return c * alpha.sin();
    }
    p * q * (c / p).acos()
}

/// Axis-parallel ellipse tangent to `⟨x, c⟩ = 1` at `c'` (and its mirror).
fn tangent_axes(alpha: f64, s: f64) -> (f64, f64) {
    let (sn, cs) = alpha.sin_cos();
    let x0 = cs + s * sn;
    let y0 = sn - s * cs;
    ((x0 / cs).sqrt(), (y0 / sn).sqrt())
}

fn area_case_iii(alpha: f64, s: f64) -> f64 {
    let cs = alpha.cos();
    let x0 = cs + s * alpha.sin();
    let (p, q) = tangent_axes(alpha, s);
    s + p * q * (x0 / p).clamp(-1.0, 1.0).acos()
}

/// The extremal boundary of area `target_area` for half-angle `alpha`.
pub fn resolve_sector(alpha: f64, target_area: f64) -> Result<SectorSpec> {
    let d = Deltoid::new(alpha)?;
    let (lo, hi) = (d.triangle_area(), d.area());
    if !(target_area > lo && target_area < hi) {
        return Err(Error::AreaOutOfRange {
            area: target_area,
            lo,
            hi,
        });
    }
    let spec = |case_tag, arc_ellipse, segment_length| SectorSpec {
        alpha,
        target_area,
        case_tag,
        arc_ellipse,
        segment_length,
    };
    if (target_area - alpha).abs() <= AREA_TOL {
        return Ok(spec(SectorCase::Ii, Ellipse::circle(1.0)?, None));
    }
    if target_area < alpha {
        let p = bisect(|p| area_case_i(alpha, p), alpha.cos(), 1.0, target_area)?;
        let q = through_corner_q(alpha, p);
        Ok(spec(SectorCase::I, axis_ellipse(p, q)?, None))
    } else {
        let s = bisect(|s| area_case_iii(alpha, s), 0.0, alpha.tan(), target_area)?;
        let (p, q) = tangent_axes(alpha, s);
        Ok(spec(SectorCase::Iii, axis_ellipse(p, q)?, Some(s)))
    }
}

/// `V(Q ∩ C°)`: the part of `Q` on the inner side of every polar line of
/// the points of `C`, which equals `V(K* ∩ Q)`.
pub fn polar_part_in_deltoid(alpha: f64, c_points: &[Point2]) -> Result<f64> {
    let d = Deltoid::new(alpha)?;
    let ring = c_points
        .iter()
        .filter(|x| x.norm() > 0.0)
        .fold(d.polygon().vertices().to_vec(), |ring, &x| {
            clip_halfplane(&ring, &HalfPlane::new(x, 1.0))
        });
    Ok(shoelace(&ring))
}

fn shoelace(ring: &[Point2]) -> f64 {
    let n = ring.len();
    (0..n).map(|i| ring[i].cross(ring[(i + 1) % n])).sum::<f64>() / 2.0
}

/// The full o-symmetric body with the extremal sector in `±S` and the unit
/// circle elsewhere, as a polygon with about `n` vertices.
pub fn sector_body(spec: &SectorSpec, n: usize) -> Result<Polygon> {
    let quarter = (n / 4).max(8);
    let alpha = spec.alpha;
    let c_arc = spec.boundary(quarter);
    let circle: Vec<Point2> = (1..quarter)
        .map(|k| Point2::polar(alpha + (PI - 2.0 * alpha) * k as f64 / quarter as f64))
        .collect();
    let mut pts = c_arc.clone();
    pts.extend(circle.iter().copied());
    pts.extend(c_arc.iter().map(|&p| -p));
    pts.extend(circle.iter().map(|&p| -p));
    Polygon::from_samples(pts)
}

/// `V(C*)` recovered from the polar of the discretized full body:
/// `(V(K*) − 2 V([o, I])) / 2` with `V([o, I]) = (π − 2α)/2`.
pub fn sector_polar_area(spec: &SectorSpec, n: usize) -> Result<f64> {
    let k = sector_body(spec, n)?;
    let polar_area = k.polar()?.area();
    Ok((polar_area - (PI - 2.0 * spec.alpha)) / 2.0)
}

/// A random convex sector boundary through `a, c` with `V(C) = target`, as
/// the vertices of `C` (starting at `o`).
pub fn random_competitor<R: Rng>(alpha: f64, target: f64, rng: &mut R) -> Result<Vec<Point2>> {
    let d = Deltoid::new(alpha)?;
    let tri = d.triangle_area();
    if !(target > tri && target < d.area()) {
        return Err(Error::AreaOutOfRange {
            area: target,
            lo: tri,
            hi: d.area(),
        });
    }
    let m = rng.random_range(3..24);
    let mut pts = vec![Point2::ORIGIN, d.a, d.c];
    pts.extend((0..m).map(|_| {
        let (mut u, mut v) = (rng.random::<f64>(), rng.random::<f64>());
        if u + v > 1.0 {
            (u, v) = (1.0 - u, 1.0 - v);
        }
        d.a + (d.b - d.a) * u + (d.c - d.a) * v
    }));
    let hull = Polygon::hull(&pts)?;
    let area0 = hull.area();
    // arc vertices strictly beyond the chord, ordered from a to c
    let start = hull
        .vertices()
        .iter()
        .position(|&p| p == d.a)
        .ok_or(Error::DegenerateBody)?;
    let arc: Vec<Point2> = (1..hull.len())
        .map(|i| hull.vertex(start + i))
        .take_while(|&p| p != d.c)
        .collect();

    let mapped: Vec<Point2> = if target <= area0 {
        // squeeze the cap toward the chord: its area scales linearly
        let t = (target - tri) / (area0 - tri);
        let cx = alpha.cos();
        arc.iter()
            .map(|p| Point2::new(cx + t * (p.x - cx), p.y))
            .collect()
    } else {
        // shrink the gap to b by a homothety about b
        let r = ((d.area() - target) / (d.area() - area0)).sqrt();
        let h = |p: Point2| d.b + (p - d.b) * r;
        let mut v = vec![h(d.a)];
        v.extend(arc.iter().map(|&p| h(p)));
        v.push(h(d.c));
        v
    };
    let mut out = vec![Point2::ORIGIN, d.a];
    out.extend(mapped);
    out.push(d.c);
    Ok(out)
}

/// Competitor polar areas at the area of `spec`, for a maximality check.
pub fn competitor_polar_areas(spec: &SectorSpec, count: usize, seed: u64) -> Result<Vec<f64>> {
    (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
            let c = random_competitor(spec.alpha, spec.target_area, &mut rng)?;
            polar_part_in_deltoid(spec.alpha, &c)
        })
        .collect()
}

/// `f(α) = α (sin 2α + 1/sin 2α) + cos 2α`, the area-sum bound of a sector pair.
pub fn theorem_b_f(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= PI / 4.0) {
        return Err(Error::DomainError(format!("alpha = {alpha} outside (0, π/4]")));
    }
    let s = (2.0 * alpha).sin();
    Ok(alpha * (s + 1.0 / s) + (2.0 * alpha).cos())
}

/// `g′(β)` for `g(β) = f(β/2)`: `(cos²β / (2 sin β)) (1 − β / tan β)`.
pub fn theorem_b_g_prime(beta: f64) -> Result<f64> {
    check_beta(beta)?;
    Ok(beta.cos().powi(2) / (2.0 * beta.sin()) * (1.0 - beta / beta.tan()))
}

/// Sign test for `g′(β) > 0`, equivalent to `β < tan β`.
pub fn theorem_b_g_prime_positive(beta: f64) -> Result<bool> {
    check_beta(beta)?;
    Ok(beta < beta.tan())
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0 && beta < PI / 2.0) {
        return Err(Error::DomainError(format!("beta = {beta} outside (0, π/2)")));
    }
    Ok(())
}

/// `V(K) + V(K*)` without any position check.
pub fn area_sum(k: &Polygon) -> Result<f64> {
    Ok(k.area() + k.polar()?.area())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SectorCheck {
    pub start_angle: f64,
    pub end_angle: f64,
    /// `V(K ∩ S) + V(K* ∩ S)`.
    pub value: f64,
    /// The opening angle `2α` of the sector.
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoremBReport {
    pub which: EllipseKind,
    pub area: f64,
    pub polar_area: f64,
    pub sum: f64,
    pub pattern: ContactPattern,
    pub sectors: Vec<SectorCheck>,
    pub sector_sum: f64,
    /// Largest `value − bound` over the sectors.
    pub max_excess: f64,
    pub violation: bool,
}

fn cone_part(k: &Polygon, from: f64, to: f64) -> f64 {
    let u = Point2::polar(from);
    let v = Point2::polar(to);
    // cone of opening < π: left of direction u, right of direction v
    let ring = clip_halfplane(k.vertices(), &HalfPlane::new(u.perp() * -1.0, 0.0));
    let ring = clip_halfplane(&ring, &HalfPlane::new(v.perp(), 0.0));
    shoelace(&ring)
}

/// Area sum of `K` moved to John or Löwner position, split over the sectors
/// between consecutive contact points.
pub fn theorem_b_check(k: &Polygon, which: EllipseKind, n: usize) -> Result<TheoremBReport> {
    let e = match which {
        EllipseKind::Inscribed => john(k)?,
        EllipseKind::Circumscribed => loewner(k)?,
    };
    let kn = k.apply_linear(&e.normalizer())?;
    let contacts = behrend_contacts(&kn, &Ellipse::circle(1.0)?, which)?;
    if contacts.pattern == ContactPattern::None {
        return Err(Error::BehrendPatternMissing);
    }
    let polar = kn.polar()?;
    let mut angles: Vec<f64> = contacts
        .contact_points
        .iter()
        .map(|p| p.angle().rem_euclid(2.0 * PI))
        .collect();
    angles.sort_by(f64::total_cmp);
    let tol = 1e-6 + 10.0 / (n.max(1) as f64).powi(2);
    let sectors: Vec<SectorCheck> = (0..angles.len())
        .map(|i| {
            let from = angles[i];
            let to = if i + 1 < angles.len() {
                angles[i + 1]
            } else {
                angles[0] + 2.0 * PI
            };
            SectorCheck {
                start_angle: from,
                end_angle: to,
                value: cone_part(&kn, from, to) + cone_part(&polar, from, to),
                bound: to - from,
            }
        })
        .collect();
    let sector_sum = sectors.iter().map(|s| s.value).sum();
    let max_excess = sectors
        .iter()
        .map(|s| s.value - s.bound)
        .fold(f64::NEG_INFINITY, f64::max);
    let (area, polar_area) = (kn.area(), polar.area());
    Ok(TheoremBReport {
        which,
        area,
        polar_area,
        sum: area + polar_area,
        pattern: contacts.pattern,
        sectors,
        sector_sum,
        max_excess,
        violation: max_excess > tol || area + polar_area > 2.0 * PI + tol,
    })
}
