//! Collar-lemma geometry around a short closed geodesic.
//!
//! A geodesic of length `ℓ` has an embedded collar isometric to
//! `[−w, w] × S¹` with half-width `w = arcsinh(csch(ℓ/2))`. Pulling the
//! boundary in by an offset `s` leaves a band of area `ℓ·sinh(w−s)` with
//! boundary length `ℓ·cosh(w−s)`; since `e^w = coth(ℓ/4)` their sum is
//! `e^{−s}·ℓ/tanh(ℓ/4)`.

use serde::Serialize;

use crate::constants::constants;
use crate::error::Error;
use crate::Result;

/// Below this length the half-width is evaluated as `ln(4/ℓ)`.
pub const SMALL_LENGTH: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CollarProfile {
    pub geodesic_length: f64,
    pub offset: f64,
    pub half_width: f64,
    pub band_area: f64,
    pub boundary_length: f64,
    pub area_plus_length: f64,
}

fn require_length(length: f64) -> Result<f64> {
    if length > 0.0 && length.is_finite() {
        Ok(length)
    } else {
        Err(Error::InvalidArgument {
            name: "geodesic length",
            value: length,
            reason: "must be positive and finite",
        })
    }
}

pub fn collar_half_width(length: f64) -> Result<f64> {
    let length = require_length(length)?;
    if length < SMALL_LENGTH {
        // arcsinh(csch(x)) = ln(2/x) + O(x²)
        return Ok((4.0 / length).ln());
    }
    Ok((1.0 / (length / 2.0).sinh()).asinh())
}

pub fn collar_profile(length: f64, offset: f64) -> Result<CollarProfile> {
    let half_width = collar_half_width(length)?;
    if offset.is_nan() || offset < 0.0 {
        return Err(Error::InvalidArgument {
            name: "offset",
            value: offset,
            reason: "must be non-negative",
        });
    }
    if offset > half_width {
        return Err(Error::OffsetExceedsWidth { offset, half_width });
    }
    let d = half_width - offset;
    Ok(CollarProfile {
        geodesic_length: length,
        offset,
        half_width,
        band_area: length * d.sinh(),
        boundary_length: length * d.cosh(),
        area_plus_length: (-offset).exp() * length / (length / 4.0).tanh(),
    })
}

/// `arcsinh(1/(c₁ t))`, the injectivity radius on a thick component pushed
/// out by `s = ln(c₁ t)`; checked against its linear floor `c₂/t`.
pub fn injectivity_floor(t: f64) -> Result<f64> {
    if !(t >= 1.0 && t.is_finite()) {
        return Err(Error::InvalidT(t));
    }
    let k = constants();
    let value = (1.0 / (k.c1 * t)).asinh();
    let floor = k.c2 / t;
    // Equality at t = 1 holds up to rounding of c₁ = 1/tanh(π/12).
    if value < floor * (1.0 - 4.0 * f64::EPSILON) {
        return Err(Error::InequalityViolated {
            claim: "arcsinh(1/(c1 t)) >= c2/t",
            point: t,
            residual: value - floor,
        });
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_width_examples() {
        let k = constants();
        let w = collar_half_width(2.0 * k.eps0).unwrap();
        assert!((w - k.eps0).abs() < 1e-15);
        // arcsinh(1/sinh 1), 30-digit reference
        let w2 = collar_half_width(2.0).unwrap();
        assert!((w2 - 0.771_936_832_905_304_7).abs() < 1e-15);
        for l in [1e-9, 1e-12, 1e-20] {
            let w = collar_half_width(l).unwrap();
            assert!((w - (4.0 / l).ln()).abs() < 1e-12);
        }
        assert!(collar_half_width(0.0).is_err());
        assert!(collar_half_width(-1.0).is_err());
    }

    #[test]
    fn half_width_continuous_across_switch() {
        let below = collar_half_width(SMALL_LENGTH * (1.0 - 1e-15)).unwrap();
        let above = collar_half_width(SMALL_LENGTH).unwrap();
        assert!((below - above).abs() < 1e-12);
    }

    #[test]
    fn half_width_decreasing() {
        let mut prev = f64::INFINITY;
        for i in 1..=2000 {
            let l = 2.0 * constants().eps0 * i as f64 / 2000.0;
            let w = collar_half_width(l).unwrap();
            assert!(w < prev);
            prev = w;
        }
    }

    #[test]
    fn exp_width_is_coth_quarter_length() {
        for i in 1..=100 {
            let l = 0.02 * i as f64;
            let w = collar_half_width(l).unwrap();
            let coth = 1.0 / (l / 4.0).tanh();
            assert!((w.exp() - coth).abs() <= 1e-12 * coth);
        }
    }

    #[test]
    fn profile_examples() {
        let p = collar_profile(2.0, 0.5).unwrap();
        assert!((p.area_plus_length - 2.625_008_183_244_620_6).abs() < 1e-12);
        let p = collar_profile(2.0, 0.0).unwrap();
        let csch1 = 1.0 / 1f64.sinh();
        assert!((p.band_area - 2.0 * csch1).abs() < 1e-12);
        assert!((p.band_area - 1.701_836_256_478_643).abs() < 1e-9);
        let w = p.half_width;
        assert!((p.boundary_length - 2.0 * w.cosh()).abs() < 1e-12);
        let k = constants();
        let p = collar_profile(2.0 * k.eps0, collar_half_width(2.0 * k.eps0).unwrap()).unwrap();
        assert_eq!(p.band_area, 0.0);
        assert!((p.boundary_length - 2.0 * k.eps0).abs() < 1e-15);
    }

    #[test]
    fn profile_rejects_wide_offset() {
        let w = collar_half_width(1.0).unwrap();
        assert!(matches!(
            collar_profile(1.0, w + 0.1),
            Err(Error::OffsetExceedsWidth { .. })
        ));
        assert!(collar_profile(1.0, -0.1).is_err());
        assert!(collar_profile(0.0, 0.0).is_err());
    }

    #[test]
    fn area_plus_length_routes_agree() {
        for i in 1..=50 {
            let l = 2.0 * constants().eps0 * i as f64 / 50.0;
            let w = collar_half_width(l).unwrap();
            for s in [0.0, 0.2, w / 2.0] {
                let p = collar_profile(l, s).unwrap();
                let sum = p.band_area + p.boundary_length;
                assert!((sum - p.area_plus_length).abs() <= 1e-10 * p.area_plus_length);
            }
        }
    }

    #[test]
    fn injectivity_floor_examples() {
        let k = constants();
        assert!((injectivity_floor(1.0).unwrap() - k.c2).abs() < 1e-15);
        let v = injectivity_floor(2.0).unwrap();
        assert!((v - 0.127_642_011_279_768_3).abs() < 1e-14);
        assert!(v >= k.c2 / 2.0);
        assert!(injectivity_floor(10.0).unwrap() >= k.c2 / 10.0);
        assert_eq!(injectivity_floor(0.5), Err(Error::InvalidT(0.5)));
        assert!(injectivity_floor(f64::NAN).is_err());
    }
}
