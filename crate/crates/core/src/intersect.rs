//! Whether the inner electron's orbit reaches the frozen outer electron.
//!
//! The sign of κ decides it: q₁^max − q̄₂ has the sign of κ. κ vanishes
//! at exactly one charge μ* = (3π/(3π − ϖ²))² and is positive above it.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{self, NucleusCharge, ShapeParam};
use crate::quadrature::QuadratureConfig;
use crate::solver::{self, OrbitSolution};
use crate::specialfn::lemniscate_constant;

pub const DEFAULT_TOUCH_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IntersectionClass {
    Intersects,
    Touches,
    Disjoint,
}

impl fmt::Display for IntersectionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IntersectionClass::Intersects => "Intersects",
            IntersectionClass::Touches => "Touches",
            IntersectionClass::Disjoint => "Disjoint",
        })
    }
}

/// γ* = (3π − ϖ²)/ϖ², the shape at which the orbits touch.
pub fn critical_gamma() -> f64 {
    let v2 = lemniscate_constant().powi(2);
    (3.0 * PI - v2) / v2
}

/// μ* = μ(γ*).
pub fn critical_mu() -> f64 {
    let g = ShapeParam::new(critical_gamma()).expect("critical gamma is positive");
    model::mu_of_gamma(g).value()
}

/// μ* = (3π/(3π − ϖ²))², evaluated directly.
pub fn critical_mu_closed_form() -> f64 {
    let v2 = lemniscate_constant().powi(2);
    (3.0 * PI / (3.0 * PI - v2)).powi(2)
}

pub fn classify_kappa(kappa: f64, touch_tol: f64) -> IntersectionClass {
    if kappa > touch_tol {
        IntersectionClass::Intersects
    } else if kappa < -touch_tol {
        IntersectionClass::Disjoint
    } else {
        IntersectionClass::Touches
    }
}

pub fn classify_solution(sol: &OrbitSolution, touch_tol: f64) -> IntersectionClass {
    classify_kappa(sol.kappa, touch_tol)
}

/// Verdict read off the closed-form threshold alone.
pub fn threshold_class(mu: NucleusCharge) -> IntersectionClass {
    let m = mu.value();
    let star = critical_mu();
    if m > star {
        IntersectionClass::Intersects
    } else if m < star {
        IntersectionClass::Disjoint
    } else {
        IntersectionClass::Touches
    }
}

/// Solves the orbit for `mu` and classifies it by the sign of κ.
pub fn classify(
    mu: NucleusCharge,
    touch_tol: f64,
    cfg: &QuadratureConfig,
) -> Result<IntersectionClass> {
    if !(touch_tol >= 0.0) {
        return Err(Error::Domain {
            what: "touch tolerance must be nonnegative",
            value: touch_tol,
        });
    }
    let sol = solver::solve_orbit(mu, solver::DEFAULT_TOL, cfg)?;
    Ok(classify_solution(&sol, touch_tol))
}
