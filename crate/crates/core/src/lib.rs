//! Effective hyperbolic-geometry bounds and the explicit contraction constant
//! `C_{g,n,ℓ}` for the Poincaré series operator of a finite-type hyperbolic
//! surface.
//!
//! The constant is doubly exponentially small in `|χ|`, so everything from
//! `a₂` onwards is carried in [`TowerReal`], an iterated-exponential
//! representation that keeps magnitudes like `exp(-exp(43992))` comparable
//! and multipliable.
//!
//! Module map:
//!
//! - [`constants`]: the universal constants `ε₀, c₁, …, c₇`.
//! - [`tower`]: the extended-magnitude number type.
//! - [`surface`]: topology `(g, n)` and geometry `(ℓ, ε)` inputs.
//! - [`collar`]: collar-lemma geometry.
//! - [`bounds`]: lemma-level estimates (diameters, mass floors, area defect).
//! - [`contraction`]: assembly of `a₁`, `a₂`, `C_{g,n,ℓ}` and the norm bound.
//! - [`oracles`]: independent numerical checks of the analytic claims.

pub mod bounds;
pub mod collar;
pub mod constants;
pub mod contraction;
mod error;
pub mod oracles;
pub mod surface;
pub mod tower;

pub use error::Error;
pub use tower::TowerReal;

pub type Result<T, E = Error> = std::result::Result<T, E>;
