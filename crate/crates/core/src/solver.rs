//! The fixed-point problem 𝓕(γ(μ), q̄₁) = 2 and the orbit it determines.
//!
//! For γ > 0, 𝓕_γ = 𝓕(γ, ·) is strictly decreasing, exceeds 8/3 at the
//! origin and tends to 0 at infinity, so the root is unique and bisection
//! on a doubling bracket always finds it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{self, NucleusCharge, ShapeParam};
use crate::quadrature::{self, QuadratureConfig};

/// Lower end of the bisection bracket.
pub const X_LO: f64 = 1e-8;
/// Cap on the upper end of the bracket.
pub const X_HI_LIMIT: f64 = 1e12;
/// Bisection stops once the bracket is this narrow relative to its upper end.
pub const WIDTH_FLOOR: f64 = 1e-14;
pub const DEFAULT_TOL: f64 = 1e-12;

/// Solved parameters of the unique simple periodic orbit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbitSolution {
    pub mu: f64,
    pub gamma: f64,
    /// Time average of the inner electron.
    pub qbar1: f64,
    /// Position of the frozen outer electron.
    pub qbar2: f64,
    pub kappa: f64,
    pub q1max: f64,
    pub q1antimax: f64,
    /// Period.
    pub eta: f64,
    /// |𝓕(γ, q̄₁) − 2|
    pub fixpoint_residual: f64,
}

impl OrbitSolution {
    pub fn charge(&self) -> NucleusCharge {
        NucleusCharge::new(self.mu).expect("solution carries a valid charge")
    }

    pub fn shape(&self) -> ShapeParam {
        ShapeParam::new(self.gamma).expect("solution carries a valid shape")
    }

    /// Assembles every derived field from (μ, q̄₁).
    pub fn from_mean(mu: NucleusCharge, qbar1: f64, cfg: &QuadratureConfig) -> Result<Self> {
        let gamma = model::gamma_of_mu(mu);
        let (q1max, q1antimax) = model::q1_extrema(gamma, qbar1)?;
        let residual = quadrature::big_f(gamma.value(), qbar1, cfg)? - 2.0;
        Ok(OrbitSolution {
            mu: mu.value(),
            gamma: gamma.value(),
            qbar1,
            qbar2: model::qbar2_of(gamma, qbar1)?,
            kappa: model::kappa_of(gamma, qbar1)?.value(),
            q1max,
            q1antimax,
            eta: quadrature::period(gamma, qbar1, cfg)?,
            fixpoint_residual: residual.abs(),
        })
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if (1e-14..=1e-6).contains(&tol) {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "solver tolerance must lie in [1e-14, 1e-6]",
            value: tol,
        })
    }
}

/// 𝓕(γ(μ), x) − 2.
pub fn fixpoint_residual(mu: NucleusCharge, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain {
            what: "candidate mean must be positive",
            value: x,
        });
    }
    let gamma = model::gamma_of_mu(mu);
    Ok(quadrature::big_f(gamma.value(), x, cfg)? - 2.0)
}

/// Smallest 2^k ≥ 1 with 𝓕_γ(2^k) < 2.
pub fn bracket_upper(gamma: ShapeParam, cfg: &QuadratureConfig) -> Result<f64> {
    let mut hi = 1.0;
    while quadrature::big_f(gamma.value(), hi, cfg)? >= 2.0 {
        hi *= 2.0;
        if hi > X_HI_LIMIT {
            return Err(Error::BracketFailure { limit: X_HI_LIMIT });
        }
    }
    Ok(hi)
}

pub fn solve_orbit(mu: NucleusCharge, tol: f64, cfg: &QuadratureConfig) -> Result<OrbitSolution> {
    check_tol(tol)?;
    cfg.validate()?;
    let gamma = model::gamma_of_mu(mu).value();
    let f = |x: f64| quadrature::big_f(gamma, x, cfg).map(|v| v - 2.0);

    let mut lo = X_LO;
    let r_lo = f(lo)?;
    if r_lo <= 0.0 {
        // 𝓕_γ(0) ≥ 8/3 for γ > 0; failing this means the quadrature is off.
        return Err(Error::BracketFailure { limit: X_LO });
    }
    let mut hi = bracket_upper(ShapeParam::new(gamma)?, cfg)?;
    let r_hi = f(hi)?;

    let (mut best_x, mut best_r) = if r_lo.abs() < r_hi.abs() {
        (lo, r_lo)
    } else {
        (hi, r_hi)
    };
    while best_r.abs() > tol {
        if hi - lo <= WIDTH_FLOOR * hi {
            return Err(Error::SolverStalled {
                residual: best_r.abs(),
                tol,
            });
        }
        let mid = 0.5 * (lo + hi);
        let r = f(mid)?;
        if r.abs() < best_r.abs() {
            best_x = mid;
            best_r = r;
        }
        if r > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    OrbitSolution::from_mean(mu, best_x, cfg)
}
