//! Stability scans near the disk, exponent fits, and closed-form constant checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::str::FromStr;

use crate::ellipse::bm_distance_upper;
use crate::error::{Error, Result};
use crate::geom::{Point2, Polygon};
use crate::santalo::unit_ball_volume;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityRecord {
    pub eps: f64,
    pub vol_k: f64,
    pub vol_kstar: f64,
    pub product: f64,
    pub bm_upper: f64,
    pub n_discretization: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub exponent: f64,
    pub coefficient: f64,
    pub r_squared: f64,
    pub eps_range: (f64, f64),
}

/// `B² ∩ {⟨x, u⟩ ≤ 1 − ε}` over the unit directions at `cut_angles`.
///
/// Arc vertices sit on the grid `2πk/N`; grid angles within half a
/// spacing of a corner are dropped and the corners themselves are exact.
pub fn cut_disk(eps: f64, n: usize, cut_angles: &[f64]) -> Result<Polygon> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::DomainError(format!("eps = {eps} outside (0, 1)")));
    }
    if n < 64 {
        return Err(Error::DomainError(format!("need N ≥ 64, got {n}")));
    }
    let h = 1.0 - eps;
    let half_width = h.acos();
    let spacing = 2.0 * PI / n as f64;
    let dirs: Vec<Point2> = cut_angles.iter().map(|&a| Point2::polar(a)).collect();
    let inside = |p: Point2, tol: f64| dirs.iter().all(|u| u.dot(p) <= h + tol);
    let corners: Vec<f64> = cut_angles
        .iter()
        .flat_map(|&a| [a - half_width, a + half_width])
        .map(|t| t.rem_euclid(2.0 * PI))
        .filter(|&t| inside(Point2::polar(t), 1e-12))
        .collect();
    let near_corner = |t: f64| {
        corners.iter().any(|&c| {
            let d = (t - c).rem_euclid(2.0 * PI);
            d.min(2.0 * PI - d) < 0.5 * spacing
        })
    };
    let mut angles: Vec<f64> = (0..n)
        .map(|k| spacing * k as f64)
        .filter(|&t| inside(Point2::polar(t), -1e-12) && !near_corner(t))
        .chain(corners.iter().copied())
        .collect();
    angles.sort_by(f64::total_cmp);
    Polygon::from_samples(angles.into_iter().map(Point2::polar).collect())
}

/// `{(x, y) ∈ B² : |x| ≤ 1 − ε}` with corners `(±(1−ε), ±√(2ε − ε²))`.
pub fn truncated_disk(eps: f64, n: usize) -> Result<Polygon> {
    cut_disk(eps, n, &[0.0, PI])
}

/// `B²` intersected with the axis-parallel square of apothem `1 − ε`.
pub fn square_intersection(eps: f64, n: usize) -> Result<Polygon> {
    cut_disk(eps, n, &[0.0, PI / 2.0, PI, 1.5 * PI])
}

/// Closed-form area of [`truncated_disk`]: `π − 2(arccos(1−ε) − (1−ε)√(2ε−ε²))`.
pub fn truncated_disk_area(eps: f64) -> f64 {
    let h = 1.0 - eps;
    PI - 2.0 * (h.acos() - h * (2.0 * eps - eps * eps).sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    TruncatedDisk,
    SquareIntersection,
    /// `B²` cut at `k` random antipodal direction pairs (fixed by the seed).
    RandomSymmetricNgon,
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "truncated_disk" | "truncated-disk" => Ok(Family::TruncatedDisk),
            "square_intersection" | "square-intersection" => Ok(Family::SquareIntersection),
            "random_symmetric_ngon" | "random-symmetric-ngon" => Ok(Family::RandomSymmetricNgon),
            _ => Err(Error::Parse(format!("unknown family `{s}`"))),
        }
    }
}

/// Cut directions of the random family: 2 to 4 antipodal pairs at least
/// 0.5 rad apart, so the caps never meet for `ε ≤ 0.1`.
fn random_cut_angles(seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = rng.random_range(2..=4);
    loop {
        let mut a: Vec<f64> = (0..k).map(|_| rng.random_range(0.0..PI)).collect();
        a.sort_by(f64::total_cmp);
        let ok = a.windows(2).all(|w| w[1] - w[0] > 0.5) && a[0] + PI - a[k - 1] > 0.5;
        if ok {
            let mut all = a.clone();
            all.extend(a.iter().map(|t| t + PI));
            return all;
        }
    }
}

pub fn family_body(family: Family, eps: f64, n: usize, seed: u64) -> Result<Polygon> {
    if eps == 0.0 {
        return Polygon::regular(n, 1.0, 0.0);
    }
    match family {
        Family::TruncatedDisk => truncated_disk(eps, n),
        Family::SquareIntersection => square_intersection(eps, n),
        Family::RandomSymmetricNgon => cut_disk(eps, n, &random_cut_angles(seed)),
    }
}

/// Product at the Santaló point, which is `o` for the o-symmetric bodies
/// the distance bound accepts.
pub fn stability_record(k: &Polygon, eps: f64, n: usize) -> Result<StabilityRecord> {
    let bm_upper = bm_distance_upper(k)?;
    let vol_kstar = k.polar()?.area();
    Ok(StabilityRecord {
        eps,
        vol_k: k.area(),
        vol_kstar,
        product: k.area() * vol_kstar,
        bm_upper,
        n_discretization: n,
    })
}

/// Least-squares fit of `log(reference − product)` against `log eps`.
pub fn fit_exponent(records: &[StabilityRecord], reference: f64) -> Result<FitReport> {
    let mut eps: Vec<f64> = records.iter().map(|r| r.eps).collect();
    eps.sort_by(f64::total_cmp);
    eps.dedup();
    if eps.len() < 4 {
        return Err(Error::InsufficientData {
            need: 4,
            got: eps.len(),
        });
    }
    let pts = records
        .iter()
        .map(|r| {
            let d = reference - r.product;
            if !(d > 0.0) || !(r.eps > 0.0) {
                return Err(Error::NonPositiveDeficit(d));
            }
            Ok((r.eps.ln(), d.ln()))
        })
        .collect::<Result<Vec<_>>>()?;
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = pts
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum();
    let r_squared = if syy > 0.0 { (1.0 - ss_res / syy).clamp(0.0, 1.0) } else { 1.0 };
    Ok(FitReport {
        exponent: slope,
        coefficient: intercept.exp(),
        r_squared,
        eps_range: (eps[0], eps[eps.len() - 1]),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanVerdict {
    pub max_product: f64,
    /// Every product at most `π² + 1e-3`.
    pub below_ceiling: bool,
    /// Every body with `eps > 0` has `π² − product > 0`.
    pub deficits_positive: bool,
    /// The deficit grows with the distance bound.
    pub deficit_increasing: bool,
    /// Range of `deficit / (bm_upper − 1)³` over `eps > 0`.
    pub cube_ratio_min: f64,
    pub cube_ratio_max: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub family: Family,
    pub records: Vec<StabilityRecord>,
    pub verdict: ScanVerdict,
}

/// Builds each body of the family on the grid (in parallel), records its
/// product and distance bound, and checks the qualitative ordering.
pub fn theorem_d_scan(family: Family, eps_grid: &[f64], n: usize, seed: u64) -> Result<ScanReport> {
    let mut records = eps_grid
        .par_iter()
        .map(|&eps| stability_record(&family_body(family, eps, n, seed)?, eps, n))
        .collect::<Result<Vec<_>>>()?;
    records.sort_by(|a, b| a.eps.total_cmp(&b.eps));

    let pi2 = PI * PI;
    let max_product = records.iter().map(|r| r.product).fold(f64::NEG_INFINITY, f64::max);
    let below_ceiling = max_product <= pi2 + 1e-3;
    let cut: Vec<&StabilityRecord> = records.iter().filter(|r| r.eps > 0.0).collect();
    let deficits_positive = cut.iter().all(|r| pi2 - r.product > 0.0);
    let mut by_bm = cut.clone();
    by_bm.sort_by(|a, b| a.bm_upper.total_cmp(&b.bm_upper));
    let deficit_increasing = by_bm
        .windows(2)
        .all(|w| pi2 - w[1].product >= pi2 - w[0].product);
    let ratios: Vec<f64> = cut
        .iter()
        .map(|r| (pi2 - r.product) / (r.bm_upper - 1.0).powi(3))
        .collect();
    let cube_ratio_min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let cube_ratio_max = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let verdict = ScanVerdict {
        max_product,
        below_ceiling,
        deficits_positive,
        deficit_increasing,
        cube_ratio_min,
        cube_ratio_max,
        passed: below_ceiling && deficits_positive && deficit_increasing && cube_ratio_min > 0.0,
    };
    Ok(ScanReport {
        family,
        records,
        verdict,
    })
}

/// Volume of the cross-polytope with vertices at distance `√d`: `2^d d^{d/2} / d!`.
pub fn cross_polytope_volume(d: u32) -> f64 {
    let df = d as f64;
    let ln = df * 2f64.ln() + 0.5 * df * df.ln() - (1..=d).map(|k| (k as f64).ln()).sum::<f64>();
    ln.exp()
}

/// Cube inscribed in the unit ball of `ℝ³`: volume `8/(3√3)`.
pub fn inscribed_cube_volume() -> f64 {
    8.0 / (3.0 * 3f64.sqrt())
}

/// `x` truncated (not rounded) to four decimals.
pub fn four_digits(x: f64) -> String {
    format!("{:.4}", (x * 1e4).floor() / 1e4)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantEntry {
    pub label: String,
    pub lhs: f64,
    pub rhs: f64,
    pub lhs_digits: String,
    pub rhs_digits: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantsReport {
    pub entries: Vec<ConstantEntry>,
    /// `V(T) + V(T*)` of the regular triangle inscribed in `S¹`, by polygon areas.
    pub triangle_polygon_sum: f64,
    pub triangle_matches: bool,
    /// `V(D^d) / (2 κ_d)` increases with `d` along even and along odd `d ≥ 4`.
    pub ratio_increasing: bool,
    pub passed: bool,
}

/// Closed-form sums exceeding `2 V(B^d)` for non-symmetric and
/// higher-dimensional bodies.
pub fn remark_constants_check() -> Result<ConstantsReport> {
    let entry = |label: &str, lhs: f64, rhs: f64| ConstantEntry {
        label: label.into(),
        lhs,
        rhs,
        lhs_digits: four_digits(lhs),
        rhs_digits: four_digits(rhs),
        holds: lhs > rhs,
    };
    let s3 = 3f64.sqrt();
    let cube = inscribed_cube_volume();
    let entries = vec![
        entry("regular triangle in S^1: V(T) + V(T*) vs 2V(B^2)", 15.0 * s3 / 4.0, 2.0 * unit_ball_volume(2)),
        // the cube in the unit ball and its polar cross-polytope
        entry("cube in S^2: V(C) + V(C*) vs 2V(B^3)", cube + 4.0 * s3, 2.0 * unit_ball_volume(3)),
        entry("V(D^4) vs 2V(B^4)", cross_polytope_volume(4), 2.0 * unit_ball_volume(4)),
        entry("V(D^5) vs 2V(B^5)", cross_polytope_volume(5), 2.0 * unit_ball_volume(5)),
    ];
    let tri = Polygon::regular(3, 1.0, PI / 2.0)?;
    let triangle_polygon_sum = tri.area() + tri.polar()?.area();
    let triangle_matches = (triangle_polygon_sum - 15.0 * s3 / 4.0).abs() <= 1e-10;
    let ratio = |d: u32| cross_polytope_volume(d) / (2.0 * unit_ball_volume(d));
    let ratio_increasing = (4..40).all(|d| ratio(d + 2) > ratio(d));
    let passed = entries.iter().all(|e| e.holds) && triangle_matches && ratio_increasing;
    Ok(ConstantsReport {
        entries,
        triangle_polygon_sum,
        triangle_matches,
        ratio_increasing,
        passed,
    })
}
