//! The polar-area functional `f(z) = V((K − z)*)` and the Santaló point.
//!
//! For a polygon the polar of `K − z` is again a polygon, so `f` is
//! evaluated exactly by polarity instead of quadrature. Writing `ρ(u)` for
//! the radial function of `(K − z)*`, differentiation under the integral
//! gives
//!
//! ```text
//! ∇f(z)  = ∫ u ρ(u)³ du        = 3 ∫_{(K−z)*} y dy
//! ∇²f(z) = 3 ∫ u uᵀ ρ(u)⁴ du   = 12 ∫_{(K−z)*} y yᵀ dy
//! ```
//!
//! so gradient and Hessian are first and second moments of the polar body.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geom::{clip_halfplane, HalfPlane, Mat2, Point2, Polygon};

/// Outcome of [`santalo_point`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SantaloSolveReport {
    pub point: Point2,
    pub iterations: usize,
    pub final_gradient_norm: f64,
    pub polar_centroid_norm: f64,
    /// `f(point) = V((K − point)*)`.
    pub polar_area: f64,
    pub converged: bool,
}

pub const MAX_ITERATIONS: usize = 200;
/// Converged once `|∇f| ≤ GRADIENT_TOL · f` on the unit-scale body.
pub const GRADIENT_TOL: f64 = 1e-10;

fn check_interior(k: &Polygon, z: Point2) -> Result<()> {
    if !z.is_finite() || !k.contains_strictly(z) {
        return Err(Error::PointNotInterior);
    }
    Ok(())
}

fn polar_at(k: &Polygon, z: Point2) -> Result<Polygon> {
    check_interior(k, z)?;
    k.translate(-z).polar()
}

/// `V((K − z)*)`.
pub fn polar_volume_at(k: &Polygon, z: Point2) -> Result<f64> {
    Ok(polar_at(k, z)?.area())
}

/// Gradient of [`polar_volume_at`] in `z`.
pub fn polar_volume_grad(k: &Polygon, z: Point2) -> Result<Point2> {
    Ok(polar_at(k, z)?.first_moment() * 3.0)
}

/// Hessian of [`polar_volume_at`] in `z`.
pub fn polar_volume_hessian(k: &Polygon, z: Point2) -> Result<Mat2> {
    Ok(polar_at(k, z)?.second_moment() * 12.0)
}

struct Eval {
    f: f64,
    g: Point2,
    h: Mat2,
}

fn evaluate(k: &Polygon, z: Point2) -> Option<Eval> {
    let p = k.translate(-z).polar().ok()?;
    Some(Eval {
        f: p.area(),
        g: p.first_moment() * 3.0,
        h: p.second_moment() * 12.0,
    })
}

/// Minimizes `V((K − z)*)` by damped Newton from the centroid.
///
/// The body is first moved to unit scale around its centroid so that the
/// stopping rule `|∇f| ≤ 1e-10 · f` does not depend on units; the report
/// is expressed in the original coordinates.
pub fn santalo_point(k: &Polygon) -> Result<SantaloSolveReport> {
    let c = k.centroid();
    let sigma = k.translate(-c).scale();
    let unit = k.translate(-c).scaled(1.0 / sigma);
    let margin = 1e-9 * unit.depth(Point2::ORIGIN).max(0.0);

    let mut z = Point2::ORIGIN;
    let mut cur = evaluate(&unit, z).ok_or(Error::PointNotInterior)?;
    let mut iterations = 0;
    let mut converged = cur.g.norm() <= GRADIENT_TOL * cur.f;
    while !converged && iterations < MAX_ITERATIONS {
        iterations += 1;
        let g = nalgebra::Vector2::new(cur.g.x, cur.g.y);
        let step = match cur.h.cholesky() {
            Some(ch) => -ch.solve(&g),
            None => -g,
        };
        let d = Point2::new(step.x, step.y);
        let slope = cur.g.dot(d);
        let mut t = 1.0;
        let mut accepted = None;
        while t > 1e-30 {
            let zn = z + d * t;
            if unit.depth(zn) > margin {
                if let Some(next) = evaluate(&unit, zn) {
                    let armijo = next.f <= cur.f + 1e-4 * t * slope;
                    // once the predicted decrease is below the rounding noise of f,
                    // accept on gradient progress instead
                    let flat = -slope <= 1e-13 * cur.f && next.g.norm() < cur.g.norm();
                    if armijo || flat {
                        accepted = Some((zn, next));
                        break;
                    }
                }
            }
            t *= 0.5;
        }
        match accepted {
            Some((zn, next)) => {
                z = zn;
                cur = next;
                converged = cur.g.norm() <= GRADIENT_TOL * cur.f;
            }
            None => break,
        }
    }
    let polar_area = cur.f / (sigma * sigma);
    let grad = cur.g / (sigma * sigma * sigma);
    let report = SantaloSolveReport {
        point: c + z * sigma,
        iterations,
        final_gradient_norm: grad.norm(),
        polar_centroid_norm: grad.norm() / (3.0 * polar_area),
        polar_area,
        converged,
    };
    if !converged {
        return Err(Error::NoConvergence(iterations));
    }
    Ok(report)
}

/// `K − s(K)`.
pub fn santalo_centered(k: &Polygon) -> Result<Polygon> {
    let s = santalo_point(k)?;
    Ok(k.translate(-s.point))
}

/// `V(K) · V((K − s(K))*)`.
pub fn santalo_product(k: &Polygon) -> Result<f64> {
    Ok(k.area() * santalo_point(k)?.polar_area)
}

/// Smallest `λ` with `−(K − s(K)) ⊆ λ (K − s(K))`; at most 2 in the plane.
pub fn check_inclusion_0(k: &Polygon) -> Result<f64> {
    let s = santalo_point(k)?.point;
    let m = k.translate(-s);
    let poles = m.polar()?;
    // gauge of M at −v is max over poles p of ⟨−v, p⟩
    let lambda = m
        .vertices()
        .iter()
        .flat_map(|&v| poles.vertices().iter().map(move |&p| -v.dot(p)))
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(lambda)
}

/// Volume of the unit ball in dimension `d` (`κ_0 = 1`, `κ_1 = 2`).
pub fn unit_ball_volume(d: u32) -> f64 {
    let (mut k, mut v) = if d.is_multiple_of(2) { (0, 1.0) } else { (1, 2.0) };
    while k < d {
        k += 2;
        v *= 2.0 * PI / k as f64;
    }
    v
}

/// Explicit constants of the Santaló-point stability estimates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityConstants {
    pub dimension: u32,
    pub kappa_d: f64,
    pub kappa_d_minus_1: f64,
    /// `c(K₀) = diam^{(d+1)²} |K₀|^{−d−2} · d (d κ_d / κ_{d−1})^{d+2}`.
    pub c_k0: f64,
    /// `ε₁(K₀) = min{1/2, 2^{−2d−1} (κ_{d−1} / (d κ_d²)) |K₀| / diam^d}`.
    pub eps1_k0: f64,
    /// `c(K₀)` after `|K₀| → κ_d`, `diam → 2d`:
    /// `2^{(d+1)²} d^{d²+3d+4} κ_{d−1}^{−d−2}`.
    pub c_normalized: f64,
    /// `2^{2d²+4d+1} d^{2d²+6d+9} κ_{d−1}^{−2d−4} κ_d (d+1)^{d+2}`.
    pub theorem_e_coefficient: f64,
    /// Natural log of `theorem_e_coefficient` (finite even when it overflows).
    pub ln_theorem_e_coefficient: f64,
}

pub fn stability_constants(d: i64, diam: f64, vol: f64) -> Result<StabilityConstants> {
    if !(2..=1000).contains(&d) {
        return Err(Error::InvalidDimension(d));
    }
    if !(diam > 0.0) || !(vol > 0.0) || !diam.is_finite() || !vol.is_finite() {
        return Err(Error::DomainError("diameter and volume must be positive".into()));
    }
    let du = d as u32;
    let df = d as f64;
    let kd = unit_ball_volume(du);
    let kd1 = unit_ball_volume(du - 1);
    let ln2 = 2f64.ln();

    let ln_c = (df + 1.0).powi(2) * diam.ln() - (df + 2.0) * vol.ln()
        + df.ln()
        + (df + 2.0) * (df * kd / kd1).ln();
    let eps1 = 0.5f64.min(2f64.powf(-2.0 * df - 1.0) * (kd1 / (df * kd * kd)) * vol / diam.powf(df));
    let ln_c_norm = (df + 1.0).powi(2) * ln2 + (df * df + 3.0 * df + 4.0) * df.ln()
        - (df + 2.0) * kd1.ln();
    let ln_coeff = (2.0 * df * df + 4.0 * df + 1.0) * ln2
        + (2.0 * df * df + 6.0 * df + 9.0) * df.ln()
        - (2.0 * df + 4.0) * kd1.ln()
        + kd.ln()
        + (df + 2.0) * (df + 1.0).ln();
    Ok(StabilityConstants {
        dimension: du,
        kappa_d: kd,
        kappa_d_minus_1: kd1,
        c_k0: ln_c.exp(),
        eps1_k0: eps1,
        c_normalized: ln_c_norm.exp(),
        theorem_e_coefficient: ln_coeff.exp(),
        ln_theorem_e_coefficient: ln_coeff,
    })
}

/// One row of the sandwich experiment; CSV header `eps,trial,lhs,rhs,violation`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoremETrial {
    pub eps: f64,
    pub trial: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub violation: bool,
}

/// Affine normal position used by the sandwich experiment: centroid at
/// `o`, isotropic second moment, and inradius about `o` equal to 1.
pub fn normal_position(k: &Polygon) -> Result<Polygon> {
    let c = k.centroid();
    let centered = k.translate(-c);
    let m = centered.second_moment();
    let eig = m.symmetric_eigen();
    if eig.eigenvalues.iter().any(|&l| !(l > 0.0)) {
        return Err(Error::DegenerateBody);
    }
    let d = Mat2::new(
        1.0 / eig.eigenvalues[0].sqrt(),
        0.0,
        0.0,
        1.0 / eig.eigenvalues[1].sqrt(),
    );
    let w = eig.eigenvectors * d * eig.eigenvectors.transpose();
    let iso = centered.apply_linear(&w)?;
    let r = iso.depth(Point2::ORIGIN);
    Ok(iso.scaled(1.0 / r))
}

/// `V((K₀ − s(K))*) − V((K₀ − s(K₀))*)`.
pub fn theorem_e_lhs(k0: &Polygon, k: &Polygon) -> Result<f64> {
    let s0 = santalo_point(k0)?;
    let s = santalo_point(k)?.point;
    if !k0.contains_strictly(s) {
        return Err(Error::PointNotInterior);
    }
    Ok(polar_volume_at(k0, s)? - s0.polar_area)
}

/// A random body `K` with `(1−ε)K₀ + a ⊆ K ⊆ (1+ε)K₀ − a`.
///
/// The two sandwich bodies average to `K₀`. `K` is the outer body cut by
/// half-planes whose offsets interpolate randomly between the inner and
/// outer support values, at `K₀`'s edge normals and at random directions.
pub fn sandwich_body<R: Rng>(k0: &Polygon, eps: f64, rng: &mut R) -> Result<Polygon> {
    if eps == 0.0 {
        return Ok(k0.clone());
    }
    // a ∈ εK₀ keeps the inner body inside the outer one
    let w = loop {
        let b = k0.scale();
        let p = Point2::new(rng.random_range(-b..b), rng.random_range(-b..b));
        if k0.contains(p, 0.0) {
            break p;
        }
    };
    let a = w * (eps * rng.random_range(0.0..0.9));
    let inner = k0.scaled(1.0 - eps).translate(a);
    let outer = k0.scaled(1.0 + eps).translate(-a);

    let mut dirs: Vec<Point2> = k0
        .edges()
        .filter_map(|(p, q)| Point2::new(q.y - p.y, p.x - q.x).normalized())
        .collect();
    let extra = rng.random_range(4..16);
    dirs.extend((0..extra).map(|_| Point2::polar(rng.random_range(0.0..2.0 * PI))));

    let mut ring = outer.vertices().to_vec();
    for u in dirs {
        let lo = inner.support_unchecked(u);
        let hi = outer.support_unchecked(u);
        let h = lo + rng.random::<f64>() * (hi - lo);
        ring = clip_halfplane(&ring, &HalfPlane::new(u, h));
    }
    let k = Polygon::from_samples(ring)
        .map_err(|e| Error::SandwichUnsatisfiable(format!("clipped body invalid: {e}")))?;
    let tol = 1e-12 * k0.scale();
    if !k.contains_polygon(&inner, tol) {
        return Err(Error::SandwichUnsatisfiable("inner body not contained".into()));
    }
    if !outer.contains_polygon(&k, tol) {
        return Err(Error::SandwichUnsatisfiable("body leaves outer bound".into()));
    }
    Ok(k)
}

/// Runs `trials` sandwich trials at one `eps` on `K₀` in normal position.
///
/// Trial `i` is seeded with `seed + i`; rows come back in trial order.
pub fn theorem_e_experiment(
    k0: &Polygon,
    eps: f64,
    trials: usize,
    seed: u64,
) -> Result<Vec<TheoremETrial>> {
    if !(0.0..1.0).contains(&eps) {
        return Err(Error::DomainError(format!("eps = {eps} outside [0, 1)")));
    }
    let k0n = normal_position(k0)?;
    let consts = stability_constants(2, k0n.diameter(), k0n.area())?;
    if eps >= consts.eps1_k0 {
        return Err(Error::DomainError(format!(
            "eps = {eps} not below eps1(K0) = {}",
            consts.eps1_k0
        )));
    }
    let s0 = santalo_point(&k0n)?;
    let rhs = consts.theorem_e_coefficient * eps * eps;
    (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(trial as u64));
            let k = sandwich_body(&k0n, eps, &mut rng)?;
            let s = santalo_point(&k)?.point;
            if !k0n.contains_strictly(s) {
                return Err(Error::PointNotInterior);
            }
            let lhs = polar_volume_at(&k0n, s)? - s0.polar_area;
            Ok(TheoremETrial {
                eps,
                trial,
                lhs,
                rhs,
                violation: lhs > rhs,
            })
        })
        .collect()
}
