//! Spectral Boussinesq-type solver with weak-Lebesgue regularity monitoring.
//!
//! The model couples an incompressible velocity `u` to a temperature `θ` and
//! a concentration `φ` on a periodic box:
//!
//! ```text
//! ∂u/∂t + (u·∇)u − μΔu + ∇p = α(θ + φ)g + f,   ∇·u = 0
//! ∂θ/∂t + (u·∇)θ − κ₁Δθ = ℓ
//! ∂φ/∂t + (u·∇)φ − κ₂Δφ = h
//! ```
//!
//! [`monitor`] evaluates the conditional regularity criteria phrased in
//! weak-in-space, strong- or weak-in-time Lebesgue norms of `u` along a
//! recorded [`monitor::Trajectory`].

pub mod dynamics;
pub mod error;
pub mod grid;
pub mod io;
pub mod lebesgue;
pub mod monitor;
pub mod scenario;

pub use error::{Error, Result};
pub use grid::{Grid, ScalarField, VectorField};
pub use monitor::ProdiSerrinPair;
