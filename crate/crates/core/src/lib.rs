//! Simple periodic orbits of the collinear helium model in which the two
//! electrons interact only through their time averages.
//!
//! For a nucleus of charge μ > 1 the outer electron is frozen at q̄₂ and the
//! inner one bounces off the nucleus once per period. The orbit is fixed by
//! a single scalar equation 𝓕(γ(μ), q̄₁) = 2 with a unique root. The
//! modules build up to it:
//!
//! - [`specialfn`]: Gamma, Beta and the lemniscatic constant ϖ
//! - [`model`]: the μ ↔ γ bijection, σ±, κ and the turning points
//! - [`quadrature`]: the singular integrals behind 𝓕 and the period
//! - [`solver`]: the fixed point and the assembled [`OrbitSolution`]
//! - [`orbit`]: the time-parametrized trajectory and its residuals
//! - [`intersect`]: whether the two orbits cross, and the threshold μ*
//! - [`certify`]: numerical certificates for all of the above

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod certify;
pub mod error;
pub mod intersect;
pub mod model;
pub mod orbit;
pub mod quadrature;
pub mod solver;
pub mod specialfn;

pub use error::{Error, Result};
pub use intersect::IntersectionClass;
pub use model::{NucleusCharge, ShapeParam};
pub use orbit::Trajectory;
pub use quadrature::QuadratureConfig;
pub use solver::OrbitSolution;
