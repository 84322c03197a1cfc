use std::f64::consts::PI;

use approx::assert_relative_eq;

use mahler::experiments::{
    cross_polytope_volume, cut_disk, fit_exponent, four_digits, inscribed_cube_volume,
    remark_constants_check, square_intersection, theorem_d_scan, truncated_disk,
    truncated_disk_area, Family, StabilityRecord,
};
use mahler::io::write_csv;
use mahler::{regular_product, Error};

fn synthetic(eps: &[f64], deficit: impl Fn(f64) -> f64) -> Vec<StabilityRecord> {
    eps.iter()
        .map(|&e| StabilityRecord {
            eps: e,
            vol_k: PI,
            vol_kstar: PI,
            product: PI * PI - deficit(e),
            bm_upper: 1.0 + e,
            n_discretization: 0,
        })
        .collect()
}

#[test]
fn truncated_disk_geometry() {
    let eps = 0.05;
    let k = truncated_disk(eps, 4096).unwrap();
    let corners: Vec<_> = k.vertices().iter().filter(|v| (v.x.abs() - (1.0 - eps)).abs() < 1e-15).collect();
    assert_eq!(corners.len(), 4);
    for c in corners {
        assert!((c.x * c.x + c.y * c.y - 1.0).abs() <= 1e-14);
    }
    assert!(k.is_o_symmetric(1e-12));
    assert!((truncated_disk_area(1e-12) - PI).abs() < 1e-10);
    assert!(cut_disk(0.0, 4096, &[0.0]).is_err());
    assert!(cut_disk(0.1, 16, &[0.0]).is_err());
}

#[test]
fn truncated_area_converges_quadratically() {
    for eps in [0.01, 0.1, 0.3] {
        let err = |n: usize| (truncated_disk(eps, n).unwrap().area() - truncated_disk_area(eps)).abs();
        for n in [256, 1024, 4096] {
            // inscribed arcs lose at most 2π³/(3N²) in total
            assert!(err(n) <= 2.0 * PI.powi(3) / (3.0 * (n * n) as f64), "{eps} {n}");
            assert!(err(n) / err(2 * n) >= 3.5, "{eps} {n}: {} {}", err(n), err(2 * n));
        }
    }
}

#[test]
fn square_cut_is_symmetric_under_quarter_turns() {
    let k = square_intersection(0.02, 2048).unwrap();
    let turned = k.apply_linear(&mahler::Mat2::new(0.0, -1.0, 1.0, 0.0)).unwrap();
    assert!(turned.approx_eq_cyclic(&k, 1e-12));
}

#[test]
fn exponent_fits() {
    let eps = [1e-2, 1e-3, 1e-4, 1e-5];
    let fit = fit_exponent(&synthetic(&eps, |e| 3.0 * e * e), PI * PI).unwrap();
    assert_relative_eq!(fit.exponent, 2.0, epsilon = 1e-6);
    assert_relative_eq!(fit.coefficient, 3.0, max_relative = 1e-6);
    assert!(fit.r_squared > 1.0 - 1e-9);

    assert_eq!(
        fit_exponent(&synthetic(&eps[..3], |e| e), PI * PI),
        Err(Error::InsufficientData { need: 4, got: 3 })
    );
    assert!(matches!(
        fit_exponent(&synthetic(&eps, |e| -e), PI * PI),
        Err(Error::NonPositiveDeficit(_))
    ));
}

#[test]
fn scans() {
    let n = 4096;
    let grid = [0.0, 1e-3, 3e-3, 1e-2, 3e-2];
    for family in [Family::TruncatedDisk, Family::SquareIntersection, Family::RandomSymmetricNgon] {
        let rep = theorem_d_scan(family, &grid, n, 5).unwrap();
        assert!(rep.verdict.passed, "{family:?}: {:?}", rep.verdict);
        assert!(rep.records.windows(2).all(|w| w[0].eps <= w[1].eps));
        let disk = &rep.records[0];
        assert_relative_eq!(disk.product, regular_product(n), max_relative = 1e-13);
        assert!(PI * PI - disk.product < 40.0 / (n * n) as f64);
        assert!(rep.records.iter().all(|r| r.product <= PI * PI + 1e-3));
        assert!(rep.verdict.cube_ratio_max.is_finite());

        let csv = |r: &[StabilityRecord]| {
            let mut buf = Vec::new();
            write_csv(&mut buf, r).unwrap();
            buf
        };
        let again = theorem_d_scan(family, &grid, n, 5).unwrap();
        assert_eq!(csv(&rep.records), csv(&again.records));
    }
}

#[test]
fn family_names() {
    assert_eq!("truncated_disk".parse::<Family>().unwrap(), Family::TruncatedDisk);
    assert_eq!("square-intersection".parse::<Family>().unwrap(), Family::SquareIntersection);
    assert_eq!("random_symmetric_ngon".parse::<Family>().unwrap(), Family::RandomSymmetricNgon);
    assert!("disk".parse::<Family>().is_err());
}

#[test]
fn constants() {
    assert_relative_eq!(cross_polytope_volume(2), 4.0, epsilon = 1e-14);
    // 3D cross-polytope of vertex distance √3: 8 · 3√3 / 6
    assert_relative_eq!(cross_polytope_volume(3), 4.0 * 3f64.sqrt(), epsilon = 1e-13);
    assert_relative_eq!(inscribed_cube_volume(), (2.0 / 3f64.sqrt()).powi(3), epsilon = 1e-15);
    assert_eq!(four_digits(15.0 * 3f64.sqrt() / 4.0), "6.4951");
    assert_eq!(four_digits(44.0 * 3f64.sqrt() / 9.0), "8.4678");
    assert_eq!(four_digits(PI * PI), "9.8696");

    let rep = remark_constants_check().unwrap();
    assert!(rep.passed && rep.triangle_matches && rep.ratio_increasing);
    let digits: Vec<(&str, &str)> = rep
        .entries
        .iter()
        .map(|e| (e.lhs_digits.as_str(), e.rhs_digits.as_str()))
        .collect();
    assert_eq!(
        digits,
        [
            ("6.4951", "6.2831"),
            ("8.4678", "8.3775"),
            ("10.6666", "9.8696"),
            ("14.9071", "10.5275")
        ]
    );
    assert!(rep.entries.iter().all(|e| e.holds));
    assert!((rep.triangle_polygon_sum - 15.0 * 3f64.sqrt() / 4.0).abs() <= 1e-10);
    assert!(regular_product(3) < PI * PI);
}
