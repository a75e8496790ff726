//! Finite-type hyperbolic surfaces, reduced to the scalars the bounds consume.

use serde::Serialize;

use crate::constants::constants;
use crate::error::{require_finite, Error};
use crate::Result;

/// Genus and puncture count with `|χ| = 2g−2+n` and `κ = 3g−3+n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SurfaceTopology {
    pub genus: u64,
    pub punctures: u64,
    pub abs_chi: u64,
    pub kappa: u64,
}

/// Systole `ℓ ∈ (0, 2ε₀]` and the thick-part scale `ε ∈ (0, ε₀]`.
///
/// A surface without a short geodesic is passed with `ℓ = 2ε₀`: every bound
/// is non-decreasing in `ℓ`, so the threshold is the saturated value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SurfaceGeometry {
    pub topology: SurfaceTopology,
    pub systole: f64,
    pub epsilon: f64,
}

pub fn make_topology(genus: u64, punctures: u64) -> Result<SurfaceTopology> {
    let twice_g = genus
        .checked_mul(2)
        .and_then(|x| x.checked_add(punctures))
        .ok_or(Error::NonHyperbolic { genus, punctures })?;
    if twice_g <= 2 {
        return Err(Error::NonHyperbolic { genus, punctures });
    }
    let abs_chi = twice_g - 2;
    // 3g-3+n = |χ| + g - 1, and |χ| >= 1 keeps this non-negative.
    let kappa = (abs_chi + genus)
        .checked_sub(1)
        .ok_or(Error::NonHyperbolic { genus, punctures })?;
    Ok(SurfaceTopology {
        genus,
        punctures,
        abs_chi,
        kappa,
    })
}

/// Short-geodesic threshold `2·arcsinh(1)`.
pub fn systole_threshold() -> f64 {
    2.0 * constants().eps0
}

pub fn make_geometry(topology: SurfaceTopology, systole: f64, epsilon: Option<f64>) -> Result<SurfaceGeometry> {
    let eps0 = constants().eps0;
    if !(systole > 0.0 && systole <= systole_threshold()) {
        return Err(Error::SystoleOutOfRange(systole));
    }
    let epsilon = require_finite(epsilon.unwrap_or(eps0)).map_err(|e| match e {
        Error::NonFinite(x) => Error::EpsilonOutOfRange(x),
        other => other,
    })?;
    if !(epsilon > 0.0 && epsilon <= eps0) {
        return Err(Error::EpsilonOutOfRange(epsilon));
    }
    Ok(SurfaceGeometry {
        topology,
        systole,
        epsilon,
    })
}
