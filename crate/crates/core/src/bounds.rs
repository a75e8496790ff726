//! Lemma-level estimates: diameters, path lengths, mass floors, the area
//! defect of the pushed-out zero set, and the floor `m(r)` on the boundary
//! of its `r`-neighbourhood.
//!
//! Mass quantities are per unit norm `‖ψ‖ = 1`; the estimates are linear in
//! the norm.

use std::f64::consts::{E, PI};

use serde::Serialize;

use crate::collar::collar_half_width;
use crate::constants::constants;
use crate::contraction::{a1, ln_a2};
use crate::error::Error;
use crate::surface::{SurfaceGeometry, SurfaceTopology};
use crate::tower::TowerReal;
use crate::Result;

fn require_t(t: f64) -> Result<f64> {
    if t >= 1.0 && t.is_finite() {
        Ok(t)
    } else {
        Err(Error::InvalidT(t))
    }
}

fn require_positive(name: &'static str, x: f64) -> Result<f64> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(Error::InvalidArgument {
            name,
            value: x,
            reason: "must be positive and finite",
        })
    }
}

fn require_kappa(kappa: u64) -> Result<f64> {
    if kappa == 0 {
        Err(Error::KappaZero)
    } else {
        Ok(kappa as f64)
    }
}

fn require_chi(abs_chi: u64) -> Result<f64> {
    if abs_chi == 0 {
        Err(Error::InvalidArgument {
            name: "abs_chi",
            value: 0.0,
            reason: "must be at least 1",
        })
    } else {
        Ok(abs_chi as f64)
    }
}

/// Surface data plus the free parameter `t >= 1` and the offset
/// `s = log₊(c₁ t)` derived from it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundContext {
    pub geometry: SurfaceGeometry,
    pub t: f64,
    pub s: f64,
}

impl BoundContext {
    pub fn new(geometry: SurfaceGeometry, t: f64) -> Result<Self> {
        let t = require_t(t)?;
        let s = offset_for(t);
        Ok(BoundContext { geometry, t, s })
    }

    /// Upper end `c₂/(|χ| t)` of the radius regime.
    pub fn radius_limit(&self) -> f64 {
        constants().c2 / (self.geometry.topology.abs_chi as f64 * self.t)
    }

    pub fn r_admissible(&self, r: f64) -> bool {
        r > 0.0 && r < self.radius_limit()
    }
}

/// `s = max(0, ln(c₁ t))`.
pub fn offset_for(t: f64) -> f64 {
    (constants().c1 * t).ln().max(0.0)
}

/// Two points of the thick part are joined by a path of length at most `4|χ|/ε`.
pub fn thick_diameter_bound(abs_chi: u64, epsilon: f64) -> Result<f64> {
    let chi = require_chi(abs_chi)?;
    let epsilon = require_positive("epsilon", epsilon)?;
    Ok(4.0 * chi / epsilon)
}

/// `4|χ|²/ε + 2κ·arcsinh(csch(ℓ/2))`: through the thick part plus across at
/// most `κ` collars.
pub fn core_path_bound(topology: &SurfaceTopology, systole: f64, epsilon: f64) -> Result<f64> {
    let chi = require_chi(topology.abs_chi)?;
    let epsilon = require_positive("epsilon", epsilon)?;
    let w = collar_half_width(systole)?;
    Ok(4.0 * chi * chi / epsilon + 2.0 * topology.kappa as f64 * w)
}

/// `M(0) >= (ℓ ∧ 1)/(16|χ|)`.
pub fn mass_floor_m0(abs_chi: u64, systole: f64) -> Result<f64> {
    let chi = require_chi(abs_chi)?;
    let systole = require_positive("systole", systole)?;
    Ok(systole.min(1.0) / (16.0 * chi))
}

/// `M(s) >= e^{s−t} M(t)` for `0 <= s <= t`; returns the factor.
pub fn mass_decay_factor(s: f64, t: f64) -> Result<f64> {
    if !(s >= 0.0 && s.is_finite() && t.is_finite()) {
        return Err(Error::InvalidArgument {
            name: "s",
            value: s,
            reason: "must be finite and non-negative",
        });
    }
    if s > t {
        return Err(Error::InvalidArgument {
            name: "s",
            value: s,
            reason: "must not exceed t",
        });
    }
    Ok((s - t).exp())
}

/// `π/3 − κ r t (c₅ + c₇)`. Unclipped: negative past the root.
pub fn area_defect_lower(kappa: u64, r: f64, t: f64) -> Result<f64> {
    let kappa = require_kappa(kappa)?;
    let t = require_t(t)?;
    if !(0.0..1.0).contains(&r) {
        return Err(Error::InvalidArgument {
            name: "r",
            value: r,
            reason: "must lie in [0, 1)",
        });
    }
    let k = constants();
    Ok(PI / 3.0 - kappa * r * t * (k.c5 + k.c7))
}

/// Upper integration limit `min(1/(4t), π/(3κt(c₅+c₇)))`.
pub fn r_star(kappa: u64, t: f64) -> Result<f64> {
    let kappa = require_kappa(kappa)?;
    let t = require_t(t)?;
    let k = constants();
    Ok((1.0 / (4.0 * t)).min(PI / (3.0 * kappa * t * (k.c5 + k.c7))))
}

/// `ℓ(γ) <= a₁ + 2κ ln t`.
pub fn curve_length_bound(topology: &SurfaceTopology, epsilon: f64, t: f64) -> Result<f64> {
    let t = require_t(t)?;
    let epsilon = require_positive("epsilon", epsilon)?;
    Ok(a1(topology, epsilon) + 2.0 * topology.kappa as f64 * t.ln())
}

/// `length(γ ∩ B_w(z)) <= 2(1 + c₃) w`.
pub fn ball_intersection_bound(w: f64) -> Result<f64> {
    let w = require_positive("w", w)?;
    Ok(2.0 * (1.0 + constants().c3) * w)
}

/// `ln(e c₄ ℓ / (16|χ|)) − a₂ t^{2κ} e^{−(1+c₃) r}` as a tower.
///
/// The suppression term is built from `ln a₂` and never exponentiated in
/// floating point, so this is defined for every surface.
pub fn ln_m_floor_tower(ctx: &BoundContext, r: f64) -> Result<TowerReal> {
    if !(r >= 0.0 && r < ctx.radius_limit()) {
        return Err(Error::InvalidArgument {
            name: "r",
            value: r,
            reason: "must lie in [0, c2/(|chi| t))",
        });
    }
    let k = constants();
    let top = &ctx.geometry.topology;
    let chi = top.abs_chi as f64;
    let head = (E * k.c4 * ctx.geometry.systole / (16.0 * chi)).ln();
    let ln_suppression = ln_a2(top, ctx.geometry.epsilon) + 2.0 * top.kappa as f64 * ctx.t.ln() - (1.0 + k.c3) * r;
    let suppression = TowerReal::from_real(ln_suppression)?.exp_of();
    Ok(if suppression.level() == 0 {
        TowerReal::from_real(head - suppression.to_f64())?
    } else {
        // The head is below one ulp of a magnitude >= e^700.
        -suppression
    })
}

/// [`ln_m_floor_tower`] as a double, when it fits.
pub fn ln_m_floor(ctx: &BoundContext, r: f64) -> Result<f64> {
    let v = ln_m_floor_tower(ctx, r)?;
    if v.level() == 0 {
        Ok(v.to_f64())
    } else {
        Err(Error::NotRepresentable(v.render()))
    }
}
