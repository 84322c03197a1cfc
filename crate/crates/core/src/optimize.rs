//! Local search for maximizers of the volume product over `n`-gons.
//!
//! Two area-preserving move families are searched coordinatewise:
//! sliding a vertex parallel to the diagonal of its neighbours, and
//! rotating an edge line about its midpoint followed by the parallel shift
//! that restores the area.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::ellipse::{loewner, loewner_of_points, SYMMETRY_TOL};
use crate::error::{Error, Result};
use crate::geom::{intersect, Point2, Polygon};
use crate::santalo::santalo_point;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OptMode {
    /// o-symmetric polygons; objective `V(K) V(K*)`.
    Symmetric,
    /// Any polygon, kept centred at its Santaló point; objective
    /// `V(K) V((K − s(K))*)`.
    SantaloCentered,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptConfig {
    pub n: usize,
    pub mode: OptMode,
    pub seed: u64,
    /// Cap on full sweeps over the moves.
    pub max_iters: usize,
    pub step_init: f64,
    pub step_min: f64,
}

impl OptConfig {
    pub fn new(n: usize, mode: OptMode, seed: u64) -> Self {
        OptConfig {
            n,
            mode,
            seed,
            max_iters: 20_000,
            step_init: 0.05,
            step_min: 1e-9,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptResult {
    #[serde(rename = "final")]
    pub final_polygon: Polygon,
    /// Objective at the start and after every accepted move.
    pub product_trace: Vec<f64>,
    pub residual_i: f64,
    pub residual_ii: f64,
    pub regularity_score: f64,
    pub iterations: usize,
    /// Stopped because every step fell below `step_min` (not by the sweep cap).
    pub converged: bool,
}

/// `|sin|` of the angle between `p` and `q`; 0 if either is negligible.
fn sin_between(p: Point2, q: Point2, scale: f64) -> f64 {
    let (np, nq) = (p.norm(), q.norm());
    if np <= 1e-7 * scale || nq <= 1e-7 * scale {
        return 0.0;
    }
    (p.cross(q) / (np * nq)).abs()
}

/// Residuals of the two first-order conditions at a maximizer:
/// `o`, `(x₁+x₃)/2`, `x₂` collinear for consecutive vertices, and `o`, the
/// midpoint of an edge, and the meet of its neighbouring edge lines
/// collinear (a point at infinity when those lines are parallel).
pub fn condition_residuals(k: &Polygon) -> Result<(f64, f64)> {
    if !k.origin_interior() {
        return Err(Error::OriginNotInterior);
    }
    let n = k.len();
    let scale = k.scale();
    let res_i = (0..n)
        .map(|i| {
            let mid = (k.vertex(i + n - 1) + k.vertex(i + 1)) * 0.5;
            sin_between(mid, k.vertex(i), scale)
        })
        .fold(0.0, f64::max);
    let homog = |p: Point2, q: Point2| [p.y - q.y, q.x - p.x, p.cross(q)];
    // affine part of the meet: a direction when the lines are parallel
    let meet = |l: [f64; 3], m: [f64; 3]| {
        Point2::new(l[1] * m[2] - l[2] * m[1], l[2] * m[0] - l[0] * m[2])
    };
    let res_ii = (0..n)
        .map(|i| {
            let (y1, y2, y3, y4) = (k.vertex(i + n - 1), k.vertex(i), k.vertex(i + 1), k.vertex(i + 2));
            let m = meet(homog(y1, y2), homog(y3, y4));
            let mid = (y2 + y3) * 0.5;
            let mn = m.norm();
            if mn == 0.0 || mid.norm() <= 1e-12 * scale {
                return 0.0;
            }
            (mid.cross(m) / (mid.norm() * mn)).abs()
        })
        .fold(0.0, f64::max);
    Ok((res_i, res_ii))
}

fn rebuild(vertices: Vec<Point2>) -> Result<Polygon> {
    let p = Polygon::new(vertices).map_err(|_| Error::ConvexityLost)?;
    if !p.origin_interior() {
        return Err(Error::OriginNotInterior);
    }
    Ok(p)
}

/// `xᵢ ← xᵢ + t (xᵢ₊₁ − xᵢ₋₁)`; with `symmetric` the antipode follows as `−xᵢ`.
pub fn move_slide_vertex(k: &Polygon, i: usize, t: f64, symmetric: bool) -> Result<Polygon> {
    if !k.origin_interior() {
        return Err(Error::OriginNotInterior);
    }
    let n = k.len();
    let i = i % n;
    let mut v = k.vertices().to_vec();
    v[i] = k.vertex(i) + (k.vertex(i + 1) - k.vertex(i + n - 1)) * t;
    if symmetric {
        v[(i + n / 2) % n] = -v[i];
    }
    if t == 0.0 {
        return Ok(k.clone());
    }
    rebuild(v)
}

/// Meet of the lines `p + s d` and `q + r e`.
fn line_meet(p: Point2, d: Point2, q: Point2, e: Point2) -> Option<Point2> {
    let den = d.cross(e);
    if den.abs() <= 1e-15 * d.norm() * e.norm() {
        return None;
    }
    Some(p + d * ((q - p).cross(e) / den))
}

/// Rotates the line of edge `i` by `eps` about its midpoint, then shifts it
/// parallel so that the area is restored.
fn rotate_edge_once(v: &mut [Point2], i: usize, eps: f64) -> Result<()> {
    let n = v.len();
    let (p0, p1, p2, p3) = (v[(i + n - 1) % n], v[i], v[(i + 1) % n], v[(i + 2) % n]);
    let (d_prev, d_next) = (p1 - p0, p3 - p2);
    let mid = (p1 + p2) * 0.5;
    let (s, c) = eps.sin_cos();
    let e = p2 - p1;
    let dir = Point2::new(c * e.x - s * e.y, s * e.x + c * e.y).normalized().ok_or(Error::ConvexityLost)?;
    let inward = dir.perp();
    let ends = |u: f64| -> Option<(Point2, Point2)> {
        let base = mid + inward * u;
        Some((line_meet(p0, d_prev, base, dir)?, line_meet(p2, d_next, base, dir)?))
    };
    let (a0, b0) = ends(0.0).ok_or(Error::ConvexityLost)?;
    let (a1, b1) = ends(1.0).ok_or(Error::ConvexityLost)?;
    let l0 = (b0 - a0).dot(dir);
    let slope = (b1 - a1).dot(dir) - l0;
    // area gained by the rotation: the quadrilateral swept between old and new edge
    let gained = {
        let quad = [p1, a0, b0, p2];
        (0..4).map(|j| quad[j].cross(quad[(j + 1) % 4])).sum::<f64>() / 2.0
    };
    // shifting inward by u removes ∫₀ᵘ (l0 + slope·w) dw
    let disc = l0 * l0 + 2.0 * slope * gained;
    if disc < 0.0 || l0 <= 0.0 {
        return Err(Error::ConvexityLost);
    }
    let u = 2.0 * gained / (l0 + disc.sqrt());
    let (a, b) = ends(u).ok_or(Error::ConvexityLost)?;
    v[i] = a;
    v[(i + 1) % n] = b;
    Ok(())
}

/// Area-preserving rotation of the line of edge `i` (vertices `i`, `i+1`);
/// with `symmetric` the antipodal edge is moved the same way.
pub fn move_rotate_edge(k: &Polygon, i: usize, eps: f64, symmetric: bool) -> Result<Polygon> {
    if eps == 0.0 {
        return Ok(k.clone());
    }
    let n = k.len();
    let i = i % n;
    let mut v = k.vertices().to_vec();
    rotate_edge_once(&mut v, i, eps)?;
    if symmetric {
        let j = (i + n / 2) % n;
        v[j] = -v[i];
        v[(j + 1) % n] = -v[(i + 1) % n];
    }
    rebuild(v)
}

fn objective(k: &Polygon, mode: OptMode) -> Option<(f64, Polygon)> {
    match mode {
        OptMode::Symmetric => Some((k.volume_product().ok()?, k.clone())),
        OptMode::SantaloCentered => {
            let s = santalo_point(k).ok()?;
            Some((k.area() * s.polar_area, k.translate(-s.point)))
        }
    }
}

fn initial_body<R: Rng>(n: usize, mode: OptMode, rng: &mut R) -> Result<Polygon> {
    let jitter = 0.2;
    match mode {
        OptMode::Symmetric => {
            let h = n / 2;
            let spacing = PI / h as f64;
            let half: Vec<Point2> = (0..h)
                .map(|k| Point2::polar(spacing * (k as f64 + rng.random_range(-jitter..jitter))))
                .collect();
            let mut v = half.clone();
            v.extend(half.iter().map(|&p| -p));
            Polygon::new(v)
        }
        OptMode::SantaloCentered => {
            let spacing = 2.0 * PI / n as f64;
            let v = (0..n)
                .map(|k| Point2::polar(spacing * (k as f64 + rng.random_range(-jitter..jitter))))
                .collect();
            Polygon::new(v)
        }
    }
}

#[derive(Clone, Copy)]
enum Move {
    Slide(usize),
    Rotate(usize),
}

/// Coordinatewise search over slides and edge rotations with per-move
/// step sizes (doubled on success, halved on failure).
pub fn maximize_product(cfg: &OptConfig) -> Result<OptResult> {
    let n = cfg.n;
    if n < 3 {
        return Err(Error::TooFewVertices(n));
    }
    if cfg.mode == OptMode::Symmetric && (n % 2 == 1 || n < 4) {
        return Err(Error::DomainError(format!("symmetric mode needs even n ≥ 4, got {n}")));
    }
    if !(cfg.step_min > 0.0 && cfg.step_init > cfg.step_min) {
        return Err(Error::DomainError("need 0 < step_min < step_init".into()));
    }
    let symmetric = cfg.mode == OptMode::Symmetric;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let start = initial_body(n, cfg.mode, &mut rng)?;
    let (mut best, mut body) = objective(&start, cfg.mode).ok_or(Error::DegenerateBody)?;

    let m = if symmetric { n / 2 } else { n };
    let mut moves: Vec<Move> = (0..m).map(Move::Slide).collect();
    // every symmetric quadrilateral is a parallelogram: rotations add nothing
    if !(symmetric && n == 4) {
        moves.extend((0..m).map(Move::Rotate));
    }
    let mut steps = vec![cfg.step_init; moves.len()];
    let mut trace = vec![best];
    let mut iterations = 0;
    let mut converged = false;
    while iterations < cfg.max_iters {
        if steps.iter().all(|&s| s < cfg.step_min) {
            converged = true;
            break;
        }
        iterations += 1;
        for (j, mv) in moves.iter().enumerate() {
            if steps[j] < cfg.step_min {
                continue;
            }
            let mut accepted = false;
            for sign in [1.0, -1.0] {
                let t = sign * steps[j];
                let cand = match *mv {
                    Move::Slide(i) => move_slide_vertex(&body, i, t, symmetric),
                    Move::Rotate(i) => move_rotate_edge(&body, i, t, symmetric),
                };
                let Ok(cand) = cand else { continue };
                if let Some((val, centred)) = objective(&cand, cfg.mode) {
                    if val > best {
                        best = val;
                        body = centred;
                        trace.push(val);
                        accepted = true;
                        break;
                    }
                }
            }
            steps[j] = if accepted {
                (steps[j] * 2.0).min(cfg.step_init)
            } else {
                steps[j] * 0.5
            };
        }
    }
    let (residual_i, residual_ii) = condition_residuals(&body)?;
    Ok(OptResult {
        regularity_score: affine_regularity_score(&body)?,
        final_polygon: body,
        product_trace: trace,
        residual_i,
        residual_ii,
        iterations,
        converged,
    })
}

/// Distance of `K` from the linear images of the regular `n`-gon.
///
/// `K` is mapped so that its Löwner ellipse (of `K ∩ −K` when `K` is not
/// o-symmetric) becomes a circle, scaled to unit mean vertex norm, and
/// compared vertexwise with the best-rotated regular `n`-gon.
pub fn affine_regularity_score(k: &Polygon) -> Result<f64> {
    if !k.origin_interior() {
        return Err(Error::OriginNotInterior);
    }
    let e = if k.is_o_symmetric(SYMMETRY_TOL) {
        loewner(k)?
    } else {
        let core = intersect(k, &k.reflect()).ok_or(Error::DegenerateBody)?;
        loewner_of_points(core.vertices())?
    };
    let kn = k.apply_linear(&e.normalizer())?;
    let n = kn.len();
    let mean = kn.vertices().iter().map(|v| v.norm()).sum::<f64>() / n as f64;
    let v: Vec<Point2> = kn.vertices().iter().map(|&p| p / mean).collect();
    let spacing = 2.0 * PI / n as f64;
    // circular mean of the phase offsets; a cyclic relabelling only shifts it
    let (sx, sy) = v.iter().enumerate().fold((0.0, 0.0), |(sx, sy), (i, p)| {
        let d = p.angle() - spacing * i as f64;
        (sx + d.cos(), sy + d.sin())
    });
    let phase = sy.atan2(sx);
    Ok(v.iter()
        .enumerate()
        .map(|(i, &p)| p.dist(Point2::polar(phase + spacing * i as f64)))
        .fold(0.0, f64::max))
}

/// `V((K̃)*) − V((K̃ − s(K̃))*)` after a slide of size `t` on a body with
/// Santaló point `o`: the polar-area change caused by recentring.
pub fn recentering_drift(k: &Polygon, i: usize, t: f64) -> Result<f64> {
    let moved = move_slide_vertex(k, i, t, false)?;
    let s = santalo_point(&moved)?;
    Ok(moved.polar()?.area() - s.polar_area)
}
