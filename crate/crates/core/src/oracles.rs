//! Independent numerical checks of the elementary inequalities and identities
//! the bounds rest on: grid scans, a dense-scan maximum, and quadrature.
//!
//! Every oracle is deterministic for a fixed grid size.

use std::f64::consts::PI;

use serde::Serialize;

use crate::bounds::{area_defect_lower, r_star};
use crate::collar::collar_half_width;
use crate::constants::{
    c7_objective, check_constant_identities_with, compute_c7, constants, CheckStatus, IdentityCheck,
};
use crate::error::Error;
use crate::surface::make_topology;
use crate::Result;

/// Smallest grid accepted by the scanning oracles.
pub const MIN_GRID: usize = 1000;

/// Printed four-decimal value of `c₇`.
pub const C7_PRINTED: f64 = 1.5536;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleStatus {
    Pass,
    Fail,
    /// A claim in its literal form is known to fail; the corrected form is
    /// checked separately. Does not fail the suite.
    DocumentedFailure,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleResult {
    pub claim_id: String,
    pub status: OracleStatus,
    /// Where the residual is worst (most negative for inequalities, largest
    /// for identities).
    pub worst_point: f64,
    pub worst_residual: f64,
    pub samples: usize,
    pub tolerance: f64,
    pub note: String,
}

impl OracleResult {
    pub fn passed(&self) -> bool {
        self.status != OracleStatus::Fail
    }
}

fn require_grid(grid: usize) -> Result<usize> {
    if grid >= MIN_GRID {
        Ok(grid)
    } else {
        Err(Error::InvalidArgument {
            name: "grid",
            value: grid as f64,
            reason: "must be at least 1000",
        })
    }
}

/// `n` points from `lo` to `hi` inclusive, evenly spaced in `ln`.
fn log_grid(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(move |i| {
        if i + 1 == n {
            hi
        } else {
            (a + (b - a) * i as f64 / (n - 1) as f64).exp()
        }
    })
}

/// Tracks the minimum of a residual over a scan.
struct MinTracker {
    point: f64,
    residual: f64,
    samples: usize,
}

impl MinTracker {
    fn new() -> Self {
        MinTracker {
            point: f64::NAN,
            residual: f64::INFINITY,
            samples: 0,
        }
    }

    fn push(&mut self, point: f64, residual: f64) {
        self.samples += 1;
        // A NaN residual is sticky so it surfaces as a failure.
        if !self.residual.is_nan() && (residual.is_nan() || residual < self.residual) {
            self.point = point;
            self.residual = residual;
        }
    }
}

fn status(ok: bool) -> OracleStatus {
    if ok {
        OracleStatus::Pass
    } else {
        OracleStatus::Fail
    }
}

/// `tanh²(t/2) / (t²·arctan(csch(t/2)))`.
pub fn min_ratio_function(t: f64) -> f64 {
    let h = t / 2.0;
    h.tanh().powi(2) / (t * t * (1.0 / h.sinh()).atan())
}

/// Scans the ratio function on log-spaced `t ∈ [1e-8, 50]` against its
/// infimum `1/(2π)`, attained in the limit `t → 0`.
pub fn verify_min_ratio_function(grid: usize, tolerance: Option<f64>) -> Result<OracleResult> {
    let grid = require_grid(grid)?;
    let tol = tolerance.unwrap_or(1e-9);
    let limit_tol = tolerance.unwrap_or(1e-6);
    let floor = 1.0 / (2.0 * PI);
    let mut worst = MinTracker::new();
    for t in log_grid(1e-8, 50.0, grid) {
        worst.push(t, (min_ratio_function(t) - floor) / floor);
    }
    // f(t) = (1 + t/π + O(t²))/(2π): the smallest sample is the limit proxy.
    let near_zero = (min_ratio_function(1e-8) - floor).abs();
    let ok = worst.residual >= -tol && near_zero < limit_tol;
    Ok(OracleResult {
        claim_id: "min_ratio_function".into(),
        status: status(ok),
        worst_point: worst.point,
        worst_residual: worst.residual,
        samples: worst.samples,
        tolerance: tol,
        note: format!("relative residual vs 1/(2pi); |f(1e-8) - 1/(2pi)| = {near_zero:.3e}"),
    })
}

/// `π·sinh(r/2) <= c₃·r` on `(0, c₂]`, with equality at `r = c₂`.
pub fn verify_sinh_linear_bound(grid: usize, tolerance: Option<f64>) -> Result<OracleResult> {
    let grid = require_grid(grid)?;
    let tol = tolerance.unwrap_or(1e-9);
    let k = constants();
    let mut worst = MinTracker::new();
    for r in log_grid(k.c2 * 1e-9, k.c2, grid) {
        worst.push(r, k.c3 * r - PI * (r / 2.0).sinh());
    }
    let at_c2 = (k.c3 * k.c2 - PI * (k.c2 / 2.0).sinh()).abs();
    let ok = worst.residual >= -tol && at_c2 < tol;
    Ok(OracleResult {
        claim_id: "sinh_linear_bound".into(),
        status: status(ok),
        worst_point: worst.point,
        worst_residual: worst.residual,
        samples: worst.samples,
        tolerance: tol,
        note: format!("c3 r - pi sinh(r/2) on (0, c2]; residual at c2 = {at_c2:.3e}"),
    })
}

/// The stronger chain `π·sinh(r) <= c₃·r` fails near zero (`π > c₃`); this
/// records the failure. Only the `sinh(r/2)` form is used downstream.
pub fn literal_sinh_bound_finding(grid: usize) -> Result<OracleResult> {
    let grid = require_grid(grid)?;
    let k = constants();
    let mut worst = MinTracker::new();
    for r in log_grid(k.c2 * 1e-9, k.c2, grid) {
        worst.push(r, k.c3 * r - PI * r.sinh());
    }
    let fails = worst.residual < 0.0;
    Ok(OracleResult {
        claim_id: "sinh_linear_bound_literal".into(),
        status: if fails {
            OracleStatus::DocumentedFailure
        } else {
            OracleStatus::Pass
        },
        worst_point: worst.point,
        worst_residual: worst.residual,
        samples: worst.samples,
        tolerance: 0.0,
        note: "pi sinh(r) <= c3 r is false on (0, c2] since pi > c3; the sinh(r/2) form holds".into(),
    })
}

fn area_plus_length_shape(l: f64) -> f64 {
    l / (l / 4.0).tanh()
}

/// `ℓ ↦ ℓ/tanh(ℓ/4)` is strictly increasing on `(0, 2ε₀]`: finite
/// differences on log-spaced `[1e-3, 2ε₀]`, the limit `4` at `0⁺`, and a
/// central difference at `ℓ = 1`.
pub fn verify_collar_monotonicity(grid: usize, tolerance: Option<f64>) -> Result<OracleResult> {
    let grid = require_grid(grid)?;
    let limit_tol = tolerance.unwrap_or(1e-12);
    let top = 2.0 * constants().eps0;
    let mut worst = MinTracker::new();
    let mut prev: Option<f64> = None;
    for l in log_grid(1e-3, top, grid) {
        let v = area_plus_length_shape(l);
        if let Some(p) = prev {
            worst.push(l, v - p);
        }
        prev = Some(v);
    }
    let limit_err = (area_plus_length_shape(1e-7) - 4.0).abs();
    let h = 1e-5;
    let slope = (area_plus_length_shape(1.0 + h) - area_plus_length_shape(1.0 - h)) / (2.0 * h);
    let lower = area_plus_length_shape(1e-3);
    let ok = worst.residual > 0.0 && limit_err < limit_tol && slope > 0.0 && lower > 4.0;
    Ok(OracleResult {
        claim_id: "collar_monotonicity".into(),
        status: status(ok),
        worst_point: worst.point,
        worst_residual: worst.residual,
        samples: worst.samples,
        tolerance: 0.0,
        note: format!(
            "smallest forward difference; limit error at 0+ = {limit_err:.3e}, slope at 1 = {slope:.6}, value at 2 eps0 = {:.6}",
            area_plus_length_shape(top)
        ),
    })
}

/// Adaptive Simpson quadrature on `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        m: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let (lm, flm, left) = simpson(f, a, fa, m, fm);
        let (rm, frm, right) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1)
            + recurse(f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1)
    }
    let (fa, fb) = (f(a), f(b));
    let (m, fm, whole) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, m, fm, whole, tol, 50)
}

/// Closed form of `∫₀^{r*} (π/3 − κ r t (c₅+c₇)) dr`.
pub fn gap_integral_closed_form(kappa: u64, t: f64) -> Result<f64> {
    let k = constants();
    let r = r_star(kappa, t)?;
    let slope = kappa as f64 * t * (k.c5 + k.c7);
    if r < 1.0 / (4.0 * t) {
        // Integrates to the root of the linear form.
        Ok(PI * PI / (18.0 * slope))
    } else {
        Ok(PI / 3.0 * r - slope * r * r / 2.0)
    }
}

/// The same integral by adaptive quadrature of the area-defect floor.
pub fn gap_integral_quadrature(kappa: u64, t: f64) -> Result<f64> {
    let r = r_star(kappa, t)?;
    // Validates the arguments once; the closure cannot fail afterwards.
    area_defect_lower(kappa, 0.0, t)?;
    let f = |x: f64| area_defect_lower(kappa, x, t).map_or(f64::NAN, |v| v.max(0.0));
    Ok(adaptive_simpson(&f, 0.0, r, 1e-13))
}

pub fn verify_gap_integral(kappa: u64, t: f64, tolerance: Option<f64>) -> Result<OracleResult> {
    let tol = tolerance.unwrap_or(1e-10);
    let closed = gap_integral_closed_form(kappa, t)?;
    let quad = gap_integral_quadrature(kappa, t)?;
    let rel = (quad - closed).abs() / closed.abs();
    Ok(OracleResult {
        claim_id: format!("gap_integral(kappa={kappa}, t={t})"),
        status: status(rel <= tol),
        worst_point: r_star(kappa, t)?,
        worst_residual: rel,
        samples: 1,
        tolerance: tol,
        note: format!("quadrature {quad:.15e} vs closed form {closed:.15e}"),
    })
}

/// `arcsinh(1/(c₁t)) >= c₂/t` on log-spaced `t ∈ [1, 10³]`, tight at `t = 1`.
pub fn verify_inj_floor(grid: usize, tolerance: Option<f64>) -> Result<OracleResult> {
    let grid = require_grid(grid)?;
    let tol = tolerance.unwrap_or(1e-12);
    let k = constants();
    let mut worst = MinTracker::new();
    for t in log_grid(1.0, 1e3, grid) {
        let value = (1.0 / (k.c1 * t)).asinh();
        let floor = k.c2 / t;
        // Relative residual; rounding of c₁ allows a few ulps at t = 1.
        worst.push(t, (value - floor) / floor);
    }
    let at_one = ((1.0 / k.c1).asinh() - k.c2).abs();
    let ok = worst.residual >= -4.0 * f64::EPSILON && at_one < tol;
    Ok(OracleResult {
        claim_id: "inj_floor".into(),
        status: status(ok),
        worst_point: worst.point,
        worst_residual: worst.residual,
        samples: worst.samples,
        tolerance: tol,
        note: format!("relative residual; equality residual at t=1 = {at_one:.3e}"),
    })
}

/// `sinh(w−s) + cosh(w−s) = e^{−s}·coth(ℓ/4)` with `w = w(ℓ)` on an
/// `n × n` grid of `ℓ ∈ (0, 2ε₀]`, `s ∈ [0, w]`.
pub fn verify_collar_identity(n: usize, tolerance: Option<f64>) -> Result<OracleResult> {
    if n < 2 {
        return Err(Error::InvalidArgument {
            name: "n",
            value: n as f64,
            reason: "must be at least 2",
        });
    }
    let tol = tolerance.unwrap_or(1e-10);
    let top = 2.0 * constants().eps0;
    let mut worst_point = f64::NAN;
    let mut worst = 0.0f64;
    let mut samples = 0;
    for i in 1..=n {
        let l = top * i as f64 / n as f64;
        let w = collar_half_width(l)?;
        for j in 0..n {
            let s = w * j as f64 / (n - 1) as f64;
            let lhs = (w - s).sinh() + (w - s).cosh();
            let rhs = (-s).exp() / (l / 4.0).tanh();
            let rel = (lhs - rhs).abs() / rhs;
            samples += 1;
            if rel.is_nan() || rel > worst {
                worst = rel;
                worst_point = l;
            }
        }
    }
    Ok(OracleResult {
        claim_id: "collar_identity".into(),
        status: status(worst <= tol),
        worst_point,
        worst_residual: worst,
        samples,
        tolerance: tol,
        note: format!("max relative error over {n}x{n} grid; worst_point is the length"),
    })
}

/// `r*(κ, t) < c₂/(|χ| t)` for every hyperbolic `(g, n)` up to the given
/// bounds and every listed `t`. `(0, 3)` has no curve to pinch and is skipped.
pub fn verify_regime(max_genus: u64, max_punctures: u64, ts: &[f64]) -> Result<OracleResult> {
    let k = constants();
    let mut worst = MinTracker::new();
    let mut skipped = 0;
    for g in 0..=max_genus {
        for n in 0..=max_punctures {
            let Ok(top) = make_topology(g, n) else { continue };
            if top.kappa == 0 {
                skipped += 1;
                continue;
            }
            for &t in ts {
                let r = r_star(top.kappa, t)?;
                let limit = k.c2 / (top.abs_chi as f64 * t);
                worst.push(top.abs_chi as f64 / top.kappa as f64, (limit - r) / limit);
            }
        }
    }
    Ok(OracleResult {
        claim_id: "regime".into(),
        status: status(worst.samples > 0 && worst.residual > 0.0),
        worst_point: worst.point,
        worst_residual: worst.residual,
        samples: worst.samples,
        tolerance: 0.0,
        note: format!(
            "relative margin (limit - r*)/limit, worst_point is |chi|/kappa; g <= {max_genus}, n <= {max_punctures}, {skipped} kappa=0 surface(s) skipped"
        ),
    })
}

/// Dense-scan maximum of `x·arcsinh(csch(x/2))`, independent of the
/// golden-section search, compared with it and with the printed `1.5536`.
pub fn verify_c7_maximum(grid: usize, tolerance: Option<f64>) -> Result<OracleResult> {
    let grid = require_grid(grid)?;
    let tol = tolerance.unwrap_or(1e-3);
    let (mut best_x, mut best) = (f64::NAN, f64::NEG_INFINITY);
    for x in log_grid(1e-4, 20.0, grid) {
        let v = c7_objective(x);
        if v > best {
            best = v;
            best_x = x;
        }
    }
    let refined = compute_c7(1e-12)?;
    let scan_gap = refined - best;
    let printed_err = (refined - C7_PRINTED).abs();
    let ok = printed_err <= tol && scan_gap >= -1e-12 && scan_gap <= tol;
    Ok(OracleResult {
        claim_id: "c7_maximum".into(),
        status: status(ok),
        worst_point: best_x,
        worst_residual: printed_err,
        samples: grid,
        tolerance: tol,
        note: format!("golden section {refined:.12} vs scan {best:.12} vs printed {C7_PRINTED}"),
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleConfig {
    pub grid: usize,
    /// Replaces every stated tolerance; `Some(0.0)` forces the failure path.
    pub tolerance: Option<f64>,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            grid: 10_000,
            tolerance: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub identities: Vec<IdentityCheck>,
    pub oracles: Vec<OracleResult>,
}

impl VerificationReport {
    /// `true` iff nothing failed outside the documented findings.
    pub fn passed(&self) -> bool {
        self.identities.iter().all(|c| c.status != CheckStatus::Fail) && self.oracles.iter().all(OracleResult::passed)
    }

    pub fn failures(&self) -> usize {
        self.identities.iter().filter(|c| c.status == CheckStatus::Fail).count()
            + self.oracles.iter().filter(|o| !o.passed()).count()
    }
}

/// Constant identities plus every oracle.
pub fn verify_all(config: &OracleConfig) -> Result<VerificationReport> {
    let OracleConfig { grid, tolerance } = *config;
    let mut oracles = vec![
        verify_c7_maximum(grid, tolerance)?,
        verify_min_ratio_function(grid, tolerance)?,
        verify_sinh_linear_bound(grid, tolerance)?,
        literal_sinh_bound_finding(grid)?,
        verify_collar_monotonicity(grid, tolerance)?,
        verify_inj_floor(grid, tolerance)?,
        verify_collar_identity(100, tolerance)?,
    ];
    for (kappa, t) in [(1, 1.0), (2, 1.0), (1, 10.0), (3, 2.0)] {
        oracles.push(verify_gap_integral(kappa, t, tolerance)?);
    }
    oracles.push(verify_regime(200, 200, &[1.0, 2.0, 10.0])?);
    Ok(VerificationReport {
        identities: check_constant_identities_with(tolerance),
        oracles,
    })
}
