//! Assembly of the contraction constant.
//!
//! With `K = e·π²·c₄ / (288(c₅+c₇))`, the gap at parameter `t >= 1` is
//!
//! ```text
//! C(t) = K·ℓ·exp(−a₂ t^{2κ}) / (κ·|χ|·t²),   ‖Θ‖ <= 1/(1 + C(t)),
//! ```
//!
//! and `t = 1` maximizes it. `a₂ = ln(e c₄)·e^{a₁+2(1+c₃)}` is already about
//! `2.8·10⁵` for the once-punctured torus, so `C` is only ever handled through
//! its logarithm: `ln C = ln(Kℓ/(κ|χ|t²)) − exp(ln a₂ + 2κ ln t)`.

use std::cmp::Ordering;
use std::f64::consts::PI;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::bounds::r_star;
use crate::constants::constants;
use crate::error::Error;
use crate::surface::{make_geometry, make_topology, SurfaceGeometry, SurfaceTopology};
use crate::tower::TowerReal;
use crate::Result;

/// Below this value `1/(1+C)` is evaluated as `1 − C(1−C)`.
pub const DOMINANCE_CUTOFF: f64 = 1e-8;

/// `a₂` values up to this size are exponentiated directly in `loglog_ell_over_c`.
const DIRECT_A2_LIMIT: f64 = 1e15;

/// `a₁ = 4|χ|²/ε + 2κ ln c₁ + 2 c₂ c₃`.
pub fn a1(topology: &SurfaceTopology, epsilon: f64) -> f64 {
    let k = constants();
    let chi = topology.abs_chi as f64;
    4.0 * chi * chi / epsilon + 2.0 * topology.kappa as f64 * k.c1.ln() + 2.0 * k.c2 * k.c3
}

/// `ln a₂ = ln ln(e c₄) + a₁ + 2(1 + c₃)`.
pub fn ln_a2(topology: &SurfaceTopology, epsilon: f64) -> f64 {
    let k = constants();
    k.ln_e_c4().ln() + a1(topology, epsilon) + 2.0 * (1.0 + k.c3)
}

/// `(4/ε₀)|χ|² + c₁|χ| + π sinh(c₂/2) κ`.
pub fn asymptotic_rhs(topology: &SurfaceTopology) -> f64 {
    let k = constants();
    let chi = topology.abs_chi as f64;
    4.0 / k.eps0 * chi * chi + k.c1 * chi + PI * (k.c2 / 2.0).sinh() * topology.kappa as f64
}

/// Checks `r*(κ, t) < c₂/(|χ| t)`, the radius regime the m(r) floor needs.
pub fn check_regime(topology: &SurfaceTopology, t: f64) -> Result<()> {
    let r = r_star(topology.kappa, t)?;
    let limit = constants().c2 / (topology.abs_chi as f64 * t);
    if r < limit {
        Ok(())
    } else {
        Err(Error::RegimeViolation { r_star: r, limit })
    }
}

/// The norm bound `1 − gap`, kept as its complement so values within
/// `10^(-10^5)` of one stay distinguishable from one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NormBound {
    gap: TowerReal,
}

impl NormBound {
    pub fn from_gap(gap: TowerReal) -> Self {
        NormBound { gap }
    }

    pub fn gap(&self) -> TowerReal {
        self.gap
    }

    /// Nearest double; rounds to `1.0` once the gap is below `2^-53`.
    pub fn to_f64(&self) -> f64 {
        1.0 - self.gap.to_f64()
    }

    /// `true` iff `1 − gap < 1`.
    pub fn is_below_one(&self) -> bool {
        self.gap.sign() > 0
    }

    /// `"1 - <gap>"`, with the gap's approximation carried along.
    pub fn render(&self) -> String {
        let g = self.gap.render();
        match g.split_once(" ≈ ") {
            Some((exact, approx)) => format!("1 - {exact} ≈ 1 - {approx}"),
            None => format!("1 - {g}"),
        }
    }
}

impl PartialOrd for NormBound {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for NormBound {
    fn cmp(&self, other: &Self) -> Ordering {
        other.gap.cmp(&self.gap)
    }
}

impl Serialize for NormBound {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("NormBound", 2)?;
        st.serialize_field("text", &self.render())?;
        st.serialize_field("gap", &self.gap)?;
        st.end()
    }
}

/// Everything computed for one surface at one `t`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub g: u64,
    pub n: u64,
    pub abs_chi: u64,
    pub kappa: u64,
    pub ell: f64,
    pub epsilon: f64,
    pub t_used: f64,
    pub a1: f64,
    pub ln_a2: f64,
    /// `ln(K ℓ / (κ |χ| t²))`, the finite part of `ln C`.
    pub ln_c_prefactor: f64,
    pub c: TowerReal,
    pub norm_bound: NormBound,
    pub gap: TowerReal,
    pub ln_c: TowerReal,
    pub loglog_ell_over_c: f64,
    pub asymptotic_rhs: f64,
    pub asymptotic_ratio: f64,
}

fn require_t(t: f64) -> Result<f64> {
    if t >= 1.0 && t.is_finite() {
        Ok(t)
    } else {
        Err(Error::InvalidT(t))
    }
}

/// `ln(K ℓ / (κ |χ| t²))`, summed term by term so huge `κ|χ|` cannot overflow.
fn ln_prefactor(geometry: &SurfaceGeometry, t: f64) -> f64 {
    let top = &geometry.topology;
    constants().contraction_prefactor().ln() + geometry.systole.ln()
        - (top.kappa as f64).ln()
        - (top.abs_chi as f64).ln()
        - 2.0 * t.ln()
}

/// `ln(a₂ t^{2κ})`.
fn ln_exponent(geometry: &SurfaceGeometry, t: f64) -> f64 {
    let top = &geometry.topology;
    ln_a2(top, geometry.epsilon) + 2.0 * top.kappa as f64 * t.ln()
}

/// `finite − exp(ln_e)`; once `exp(ln_e) >= e^700` the finite part is below
/// one ulp and drops out.
fn finite_minus_exp(finite: f64, ln_e: f64) -> Result<TowerReal> {
    let e = TowerReal::from_real(ln_e)?.exp_of();
    if e.level() == 0 {
        TowerReal::from_real(finite - e.to_f64())
    } else {
        Ok(-e)
    }
}

/// `C/(1+C)`. For `C < 1e-8` this is `C(1−C)`, relative error `C² < 1e-16`.
fn gap_of(c: &TowerReal) -> Result<TowerReal> {
    let cf = c.to_f64();
    if cf < DOMINANCE_CUTOFF {
        Ok(c.mul(&TowerReal::from_real(1.0 - cf)?))
    } else {
        TowerReal::from_real(cf / (1.0 + cf))
    }
}

/// `ln ln(ℓ/C) = ln(a₂ t^{2κ} + ln(κ|χ|t²/K))`; `ℓ` cancels.
fn loglog_from(ln_e: f64, ln_tail: f64) -> f64 {
    if ln_e <= DIRECT_A2_LIMIT.ln() {
        (ln_e.exp() + ln_tail).ln()
    } else {
        ln_e + (ln_tail * (-ln_e).exp()).ln_1p()
    }
}

fn validate(geometry: &SurfaceGeometry, t: f64) -> Result<f64> {
    if geometry.topology.kappa == 0 {
        return Err(Error::KappaZero);
    }
    let t = require_t(t)?;
    check_regime(&geometry.topology, t)?;
    Ok(t)
}

pub fn loglog_ell_over_c(geometry: &SurfaceGeometry, t: f64) -> Result<f64> {
    let t = validate(geometry, t)?;
    Ok(loglog_from(
        ln_exponent(geometry, t),
        -ln_prefactor(geometry, t) + geometry.systole.ln(),
    ))
}

/// Evaluates `C_{g,n,ℓ}` at parameter `t` together with every intermediate.
pub fn contraction_constant(geometry: &SurfaceGeometry, t: f64) -> Result<BoundReport> {
    let t = validate(geometry, t)?;
    let top = geometry.topology;
    let finite = ln_prefactor(geometry, t);
    let ln_e = ln_exponent(geometry, t);
    let ln_c = finite_minus_exp(finite, ln_e)?;
    let c = ln_c.exp_of();
    let gap = gap_of(&c)?;
    let loglog = loglog_from(ln_e, geometry.systole.ln() - finite);
    let rhs = asymptotic_rhs(&top);
    Ok(BoundReport {
        g: top.genus,
        n: top.punctures,
        abs_chi: top.abs_chi,
        kappa: top.kappa,
        ell: geometry.systole,
        epsilon: geometry.epsilon,
        t_used: t,
        a1: a1(&top, geometry.epsilon),
        ln_a2: ln_a2(&top, geometry.epsilon),
        ln_c_prefactor: finite,
        c,
        norm_bound: NormBound::from_gap(gap),
        gap,
        ln_c,
        loglog_ell_over_c: loglog,
        asymptotic_rhs: rhs,
        asymptotic_ratio: loglog / rhs,
    })
}

/// Grid maximizer of the gap over `t`; ties go to the smaller `t`.
pub fn optimize_t(geometry: &SurfaceGeometry, t_grid: &[f64]) -> Result<(f64, BoundReport)> {
    if t_grid.is_empty() || !t_grid.iter().all(|t| *t >= 1.0 && t.is_finite()) || !t_grid.contains(&1.0) {
        return Err(Error::InvalidGrid);
    }
    let mut best: Option<BoundReport> = None;
    for &t in t_grid {
        let report = contraction_constant(geometry, t)?;
        let better = match &best {
            None => true,
            Some(b) => report.gap > b.gap || (report.gap == b.gap && t < b.t_used),
        };
        if better {
            best = Some(report);
        }
    }
    let best = best.expect("nonempty grid");
    Ok((best.t_used, best))
}

/// One boundary component `(g, n, ℓ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryComponent {
    pub genus: u64,
    pub punctures: u64,
    pub systole: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SkinningReport {
    pub max_norm_bound: NormBound,
    /// Zero-based index of the component attaining the maximum.
    pub dominating: usize,
    pub components: Vec<BoundReport>,
}

/// Contraction factor bound over all boundary components: the largest
/// `1/(1+C)`, attained by the component with the smallest `C`.
pub fn skinning_factor(boundary: &[BoundaryComponent], epsilon: Option<f64>, t: f64) -> Result<SkinningReport> {
    if boundary.is_empty() {
        return Err(Error::EmptyBoundary);
    }
    let components = boundary
        .iter()
        .enumerate()
        .map(|(index, b)| {
            make_topology(b.genus, b.punctures)
                .and_then(|top| make_geometry(top, b.systole, epsilon))
                .and_then(|geo| contraction_constant(&geo, t))
                .map_err(|e| Error::Component {
                    index: index + 1,
                    source: Box::new(e),
                })
        })
        .collect::<Result<Vec<_>>>()?;
    let (dominating, max) = components
        .iter()
        .enumerate()
        .fold(None::<(usize, NormBound)>, |acc, (i, r)| match acc {
            Some((_, m)) if r.norm_bound <= m => acc,
            _ => Some((i, r.norm_bound)),
        })
        .expect("nonempty");
    Ok(SkinningReport {
        max_norm_bound: max,
        dominating,
        components,
    })
}
