//! Time-parametrized trajectory of the inner electron over one period.
//!
//! Time is normalized so the period is 1. The electron starts at q₁^max at
//! rest (t = 0), falls into the nucleus at t = 1/2 and, after the
//! collision, retraces its path back to q₁^max at t = 1. The outer
//! electron stays at q̄₂ throughout.
//!
//! Positions on the falling half are found by inverting the time-of-flight
//! map t(q), computed with the same r = sin²θ substitution as the
//! quadrature module. For q = q₁^max·sin²θ:
//!
//! ```text
//! t(θ) = ½ ∫_θ^{π/2} g / ∫_0^{π/2} g,    g(θ) = 2 sin²θ / √(sin²θ − a)
//! ```
//!
//! with a = q₁^antimax/q₁^max.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{self, QuadratureConfig};
use crate::solver::OrbitSolution;

/// ζ(−2/3), the coefficient of the h^{5/3} trapezoid error produced by a
/// (t₀ − t)^{2/3} endpoint.
#[allow(clippy::excessive_precision)]
pub const ZETA_MINUS_TWO_THIRDS: f64 = -0.155_196_900_037_119_89;

pub const MIN_SAMPLES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub q1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub mu: f64,
    pub gamma: f64,
    pub qbar1: f64,
    pub kappa: f64,
    pub q1max: f64,
    pub eta: f64,
    /// The frozen outer electron.
    pub q2_const: f64,
    /// `n + 1` samples on the uniform grid t_j = j/n, j = 0..=n.
    pub samples: Vec<Sample>,
}

pub fn reconstruct(
    sol: &OrbitSolution,
    n_samples: usize,
    cfg: &QuadratureConfig,
) -> Result<Trajectory> {
    if n_samples < MIN_SAMPLES || !n_samples.is_multiple_of(2) {
        return Err(Error::Domain {
            what: "n_samples must be even and at least 16",
            value: n_samples as f64,
        });
    }
    let n = n_samples;
    let a = sol.q1antimax / sol.q1max;
    let total = quadrature::ratio_integrals(a, cfg)?.i_half;

    let half = n / 2;
    let mut falling = Vec::with_capacity(half + 1);
    falling.push(Sample {
        t: 0.0,
        q1: sol.q1max,
    });
    for j in 1..half {
        let t = j as f64 / n as f64;
        let theta = invert_time(t, a, total, cfg)?;
        let s = theta.sin();
        falling.push(Sample {
            t,
            q1: sol.q1max * s * s,
        });
    }
    // collision
    falling.push(Sample { t: 0.5, q1: 0.0 });

    let mut samples = falling.clone();
    for j in (0..half).rev() {
        samples.push(Sample {
            t: (n - j) as f64 / n as f64,
            q1: falling[j].q1,
        });
    }

    Ok(Trajectory {
        mu: sol.mu,
        gamma: sol.gamma,
        qbar1: sol.qbar1,
        kappa: sol.kappa,
        q1max: sol.q1max,
        eta: sol.eta,
        q2_const: sol.qbar2,
        samples,
    })
}

/// Finds θ ∈ (0, π/2) with t(θ) = `t`, for t ∈ (0, 1/2).
///
/// The shorter tail is integrated: ∫_θ^{π/2} g for t ≤ 1/4 and ∫_0^θ g
/// otherwise, so the target never comes from a difference of nearly equal
/// numbers. Safeguarded Newton on the bracket [0, π/2]; dφ/dθ = g(θ).
fn invert_time(t: f64, a: f64, total: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let from_top = t <= 0.25;
    let target = if from_top {
        2.0 * t * total
    } else {
        (1.0 - 2.0 * t) * total
    };
    // increasing in θ, negative at 0, positive at π/2
    let phi = |theta: f64| -> Result<f64> {
        Ok(if from_top {
            target - quadrature::partial_half_integral(a, theta, FRAC_PI_2, cfg)?
        } else {
            quadrature::partial_half_integral(a, 0.0, theta, cfg)? - target
        })
    };
    let g = |theta: f64| quadrature::theta_integrands(theta, a).0;

    let (mut lo, mut hi) = (0.0, FRAC_PI_2);
    // rough start from the near-collision law q ∝ (1/2 − t)^{2/3}
    let mut theta = if from_top {
        FRAC_PI_2 * (1.0 - 2.0 * t)
    } else {
        FRAC_PI_2 * (1.0 - 2.0 * t).cbrt()
    }
    .clamp(1e-3, FRAC_PI_2 - 1e-3);

    for _ in 0..200 {
        let value = phi(theta)?;
        if value == 0.0 {
            return Ok(theta);
        }
        if value < 0.0 {
            lo = theta;
        } else {
            hi = theta;
        }
        let slope = g(theta);
        let newton = theta - value / slope;
        let next = if slope > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - theta).abs() <= 1e-15 || hi - lo <= 1e-15 {
            return Ok(next);
        }
        theta = next;
    }
    Err(Error::Inversion { t })
}

impl Trajectory {
    /// Grid spacing 1/n.
    pub fn step(&self) -> f64 {
        1.0 / (self.samples.len() - 1) as f64
    }

    /// Leading coefficient c of q₁ ≈ c·|1/2 − t|^{2/3} near the collision,
    /// c = (9μη²/2)^{1/3}.
    pub fn collision_coefficient(&self) -> f64 {
        (4.5 * self.mu * self.eta * self.eta).cbrt()
    }

    /// Plain trapezoid mean of q₁ over [0, 1]. Converges like h^{5/3}
    /// because of the collision cusp.
    pub fn trapezoid_mean(&self) -> f64 {
        let q = &self.samples;
        let sum: f64 = q.iter().map(|s| s.q1).sum();
        self.step() * (sum - 0.5 * (q[0].q1 + q[q.len() - 1].q1))
    }

    /// Trapezoid mean with the generalized Euler–Maclaurin correction for
    /// the (1/2 − t)^{2/3} cusp on both sides of the collision.
    pub fn time_mean(&self) -> f64 {
        self.trapezoid_mean() - self.cusp_correction()
    }

    fn cusp_correction(&self) -> f64 {
        2.0 * ZETA_MINUS_TWO_THIRDS * self.collision_coefficient() * self.step().powf(5.0 / 3.0)
    }

    /// [`Self::time_mean`] computed from the falling half [0, 1/2] only.
    pub fn half_period_mean(&self) -> f64 {
        let half = (self.samples.len() - 1) / 2;
        let q = &self.samples[..=half];
        let sum: f64 = q.iter().map(|s| s.q1).sum();
        let trap = self.step() * (sum - 0.5 * (q[0].q1 + q[half].q1));
        2.0 * trap - self.cusp_correction()
    }

    /// Largest |q₁(t) − q₁(1 − t)| over the grid.
    pub fn symmetry_error(&self) -> f64 {
        let q = &self.samples;
        let n = q.len() - 1;
        (0..=n)
            .map(|j| (q[j].q1 - q[n - j].q1).abs())
            .fold(0.0, f64::max)
    }

    /// Right side of q₁'' = −μη²/q₁² − η²/(γ²q̄₁²).
    pub fn acceleration(&self, q1: f64) -> f64 {
        let e2 = self.eta * self.eta;
        -self.mu * e2 / (q1 * q1) - e2 / (self.gamma * self.gamma * self.qbar1 * self.qbar1)
    }

    /// κ = q₁'²/(2η²) − μ/q₁ + q₁/(γ²q̄₁²) at a state (q₁, q₁').
    pub fn kappa_at(&self, q1: f64, dq1: f64) -> f64 {
        dq1 * dq1 / (2.0 * self.eta * self.eta) - self.mu / q1
            + q1 / (self.gamma * self.gamma * self.qbar1 * self.qbar1)
    }
}

/// Left side of the mean energy constraint
///
/// ```text
/// ∫(q₁'²/(2η²) − μ/q₁) dt − μ/q̄₂ + 1/(q̄₂ − q̄₁) + 1
/// ```
///
/// where the integrand is replaced by κ − q₁/(γ²q̄₁²) using the energy
/// integral, which stays bounded through the collision.
pub fn energy_residual(traj: &Trajectory) -> f64 {
    let g2q2 = traj.gamma * traj.gamma * traj.qbar1 * traj.qbar1;
    let q2 = traj.q2_const;
    traj.kappa - traj.time_mean() / g2q2 - traj.mu / q2 + 1.0 / (q2 - traj.qbar1) + 1.0
}

/// Time mean of q₁ minus the solved q̄₁.
pub fn mean_residual(traj: &Trajectory) -> f64 {
    traj.time_mean() - traj.qbar1
}
