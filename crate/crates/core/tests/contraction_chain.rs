use std::f64::consts::E;

use skinning_bounds::bounds::{curve_length_bound, ln_m_floor_tower, r_star, BoundContext};
use skinning_bounds::constants::constants;
use skinning_bounds::contraction::{asymptotic_rhs, contraction_constant, loglog_ell_over_c, optimize_t, BoundReport};
use skinning_bounds::oracles::gap_integral_quadrature;
use skinning_bounds::surface::{make_geometry, make_topology, systole_threshold, SurfaceGeometry};
use skinning_bounds::Error;

fn geo(g: u64, n: u64, l: f64) -> SurfaceGeometry {
    make_geometry(make_topology(g, n).unwrap(), l, None).unwrap()
}

fn report(g: u64, n: u64, l: f64) -> BoundReport {
    contraction_constant(&geo(g, n, l), 1.0).unwrap()
}

const SURFACES: [(u64, u64); 3] = [(1, 1), (0, 4), (2, 0)];

#[test]
fn finite_part_matches_quadrature() {
    let k = constants();
    for (g, n) in SURFACES {
        for l in [0.1, 0.5, systole_threshold()] {
            let r = report(g, n, l);
            let top = make_topology(g, n).unwrap();
            let integral = gap_integral_quadrature(top.kappa, 1.0).unwrap();
            let via_quadrature = (E * k.c4 * l / (16.0 * top.abs_chi as f64)).ln() + integral.ln();
            let rel = (via_quadrature - r.ln_c_prefactor).abs() / r.ln_c_prefactor.abs();
            assert!(rel < 1e-10, "({g},{n},{l}): {via_quadrature} vs {}", r.ln_c_prefactor);
        }
    }
}

#[test]
fn systole_enters_as_a_prefactor() {
    for (g, n) in SURFACES {
        for l in [0.1, 0.5] {
            let base = report(g, n, l);
            for alpha in [0.5, 2.0, 10.0] {
                if alpha * l > systole_threshold() {
                    continue;
                }
                let scaled = report(g, n, alpha * l);
                assert!((scaled.ln_c_prefactor - base.ln_c_prefactor - alpha.ln()).abs() < 1e-12);
                assert_eq!(scaled.ln_a2, base.ln_a2);
                assert_eq!(scaled.c > base.c, alpha > 1.0);
            }
        }
    }
}

#[test]
fn constant_decreases_with_complexity() {
    let l = 0.5;
    let mut by_genus: Vec<BoundReport> = (1..12).map(|g| report(g, 1, l)).collect();
    for w in by_genus.windows(2) {
        assert!(w[1].c < w[0].c);
        assert!(w[1].norm_bound > w[0].norm_bound);
    }
    by_genus = (0..12).map(|n| report(2, n, l)).collect();
    for w in by_genus.windows(2) {
        assert!(w[1].c < w[0].c);
    }
}

#[test]
fn norm_bound_strictly_below_one() {
    for g in 0..30 {
        for n in 0..30 {
            let Ok(top) = make_topology(g, n) else { continue };
            if top.kappa == 0 {
                continue;
            }
            for l in [1e-6, 0.5, systole_threshold()] {
                let r = contraction_constant(&make_geometry(top, l, None).unwrap(), 1.0).unwrap();
                assert!(r.norm_bound.is_below_one(), "({g},{n},{l})");
                assert!(r.gap <= r.c && r.gap.sign() > 0);
            }
        }
    }
}

#[test]
fn loglog_does_not_depend_on_systole() {
    for (g, n) in [(1, 1), (2, 0), (50, 0)] {
        let vals: Vec<f64> = [0.1, 1.0, systole_threshold()]
            .iter()
            .map(|&l| loglog_ell_over_c(&geo(g, n, l), 1.0).unwrap())
            .collect();
        for v in &vals {
            assert!((v - vals[0]).abs() < 1e-12);
        }
    }
}

#[test]
fn gap_decreases_along_t() {
    for (g, n) in [(1, 1), (2, 0)] {
        let geometry = geo(g, n, 0.5);
        let grid: Vec<f64> = (0..=200).map(|i| 1.0 + i as f64 / 100.0).collect();
        let (t, _) = optimize_t(&geometry, &grid).unwrap();
        assert_eq!(t, 1.0);
        let gaps: Vec<_> = grid
            .iter()
            .map(|&t| contraction_constant(&geometry, t).unwrap().gap)
            .collect();
        for w in gaps.windows(2) {
            assert!(w[1] < w[0]);
        }
    }
}

#[test]
fn asymptotic_ratio_approaches_one() {
    let dev: Vec<f64> = [20, 50, 100]
        .iter()
        .map(|&g| (report(g, 0, 0.5).asymptotic_ratio - 1.0).abs())
        .collect();
    assert!(dev[0] > dev[1] && dev[1] > dev[2]);
    assert!(dev.iter().all(|d| *d <= 0.05));
    let r100 = report(100, 0, 0.5).asymptotic_ratio;
    assert!((0.995..=1.005).contains(&r100));
    let top = make_topology(50, 0).unwrap();
    let leading = 4.0 / constants().eps0 * (top.abs_chi * top.abs_chi) as f64;
    let lr = report(50, 0, 0.5).loglog_ell_over_c / leading;
    assert!((1.0..=1.03).contains(&lr), "{lr}");
    assert!((asymptotic_rhs(&top) - 44_027.993_554_086_23).abs() < 1e-8);
}

#[test]
fn curve_length_and_floor_agree_with_exponent() {
    let geometry = geo(1, 1, 0.5);
    let ctx = BoundContext::new(geometry, 1.0).unwrap();
    let floor = ln_m_floor_tower(&ctx, 0.0).unwrap();
    assert!(floor.sign() < 0);
    let r = report(1, 1, 0.5);
    // Both carry the same exp(ln a2) suppression.
    assert!((floor.to_f64() - (r.ln_c.to_f64() - r.ln_c_prefactor)).abs() < 10.0);
    let len = curve_length_bound(&geometry.topology, geometry.epsilon, 1.0).unwrap();
    assert!((len - r.a1).abs() < 1e-15);
}

#[test]
fn rejects_thrice_punctured_sphere() {
    let g = geo(0, 3, 0.5);
    assert_eq!(contraction_constant(&g, 1.0).unwrap_err(), Error::KappaZero);
    assert!(r_star(0, 1.0).is_err());
}

#[test]
fn huge_surfaces_stay_finite() {
    let r = report(100_000, 0, 0.5);
    assert!(r.ln_a2.is_finite());
    assert_eq!(r.c.level(), 2);
    assert!(r.norm_bound.is_below_one());
    assert!(r.norm_bound.render().starts_with("1 - 1/exp^2("));
}
