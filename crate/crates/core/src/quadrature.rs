//! Gauss–Legendre quadrature with node doubling, and the singular integrals
//!
//! ```text
//! I_k(a) = ∫₀¹ r^k / √((1 − r)(r − a)) dr,   k ∈ {1/2, 3/2},  a ≤ 0
//! ```
//!
//! that define 𝓕 and the period.
//!
//! The endpoint r = 1 carries a 1/√ singularity, removed by r = 1 − u².
//! The factor r^{1/2} also has a branch point at r = 0 (u = 1), so we
//! compose with u = cos θ. The net map is r = sin²θ:
//!
//! ```text
//! I_k(a) = ∫₀^{π/2} 2 sin^{2k+1}θ / √(sin²θ − a) dθ
//! ```
//!
//! For a < 0 both integrands are analytic on the closed interval, and for
//! a = 0 they reduce to 2 sin^{2k}θ.

use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::{Arc, OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{self, ShapeParam};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    /// Node count of the first estimate.
    pub base_nodes: usize,
    /// How many times the node count may double before giving up.
    pub max_doublings: u32,
    /// Relative agreement required between consecutive estimates.
    pub rel_tol: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            base_nodes: 64,
            max_doublings: 6,
            rel_tol: 1e-12,
        }
    }
}

impl QuadratureConfig {
    pub const MIN_REL_TOL: f64 = 1e-14;
    pub const MAX_REL_TOL: f64 = 1e-6;

    pub fn validate(&self) -> Result<()> {
        if !(Self::MIN_REL_TOL..=Self::MAX_REL_TOL).contains(&self.rel_tol) {
            return Err(Error::Domain {
                what: "quadrature rel_tol must lie in [1e-14, 1e-6]",
                value: self.rel_tol,
            });
        }
        if self.base_nodes == 0 || self.max_doublings == 0 {
            return Err(Error::Domain {
                what: "quadrature needs base_nodes >= 1 and max_doublings >= 1",
                value: self.base_nodes.min(self.max_doublings as usize) as f64,
            });
        }
        if self
            .base_nodes
            .checked_shl(self.max_doublings)
            .is_none_or(|n| n > 1 << 20)
        {
            return Err(Error::Domain {
                what: "quadrature node count would exceed 2^20",
                value: self.base_nodes as f64,
            });
        }
        Ok(())
    }
}

/// Gauss–Legendre nodes and weights on [−1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Computes an `n`-point rule by Newton iteration on Pₙ.
    pub fn new(n: usize) -> Self {
        assert!(n > 0, "a Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            weights[i] = w;
            nodes[n - 1 - i] = x;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, lo: f64, hi: f64, f: F) -> f64 {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        let sum: f64 = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .sum();
        half * sum
    }

    /// Integrates two integrands sharing the evaluation points.
    pub fn integrate_pair<F: Fn(f64) -> (f64, f64)>(&self, lo: f64, hi: f64, f: F) -> (f64, f64) {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        let (mut s0, mut s1) = (0.0, 0.0);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            let (a, b) = f(mid + half * x);
            s0 += w * a;
            s1 += w * b;
        }
        (half * s0, half * s1)
    }
}

/// (Pₙ(x), Pₙ'(x)) by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let dp = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, dp)
}

/// Shared rule for `n` nodes. Each rule is built once and then only read.
pub fn rule(n: usize) -> Arc<GaussLegendre> {
    static CACHE: OnceLock<RwLock<HashMap<usize, Arc<GaussLegendre>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(r) = cache.read().expect("quadrature cache poisoned").get(&n) {
        return Arc::clone(r);
    }
    let mut guard = cache.write().expect("quadrature cache poisoned");
    Arc::clone(
        guard
            .entry(n)
            .or_insert_with(|| Arc::new(GaussLegendre::new(n))),
    )
}

/// Runs `estimate` at base, 2·base, 4·base, ... nodes until two consecutive
/// estimates agree to `cfg.rel_tol` in every component.
fn doubling<const N: usize>(
    cfg: &QuadratureConfig,
    estimate: impl Fn(&GaussLegendre) -> [f64; N],
) -> Result<[f64; N]> {
    cfg.validate()?;
    let mut n = cfg.base_nodes;
    let mut prev = estimate(&rule(n));
    let mut worst = f64::INFINITY;
    for _ in 0..cfg.max_doublings {
        n *= 2;
        let next = estimate(&rule(n));
        worst = 0.0;
        let mut ok = true;
        for (p, q) in prev.iter().zip(&next) {
            let delta = (q - p).abs();
            let scale = q.abs();
            worst = f64::max(worst, if scale > 0.0 { delta / scale } else { delta });
            ok &= delta <= cfg.rel_tol * scale || delta == 0.0;
        }
        if ok {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::QuadratureNotConverged {
        nodes: n,
        delta: worst,
        tol: cfg.rel_tol,
    })
}

/// ∫_lo^hi f with node doubling.
pub fn integrate<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if lo == hi {
        return Ok(0.0);
    }
    doubling(cfg, |r| [r.integrate(lo, hi, &f)]).map(|[v]| v)
}

/// I_{1/2}(a) and I_{3/2}(a).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioIntegrals {
    pub i_half: f64,
    pub i_three_half: f64,
    pub a: f64,
}

impl RatioIntegrals {
    /// I_{3/2}/I_{1/2}, always in (0, 1).
    pub fn ratio(&self) -> f64 {
        self.i_three_half / self.i_half
    }
}

fn check_lower_limit(a: f64) -> Result<f64> {
    if a.is_nan() || a > 0.0 {
        return Err(Error::Domain {
            what: "lower limit a of the ratio integrals must be <= 0",
            value: a,
        });
    }
    // also maps -0.0 to 0.0
    Ok(a.min(0.0) + 0.0)
}

/// Integrands of I_{1/2} and I_{3/2} in the θ variable (r = sin²θ).
#[inline]
pub(crate) fn theta_integrands(theta: f64, a: f64) -> (f64, f64) {
    let s = theta.sin();
    let s2 = s * s;
    if a == 0.0 {
        // √(sin²θ) cancels one power of sin θ
        return (2.0 * s, 2.0 * s * s2);
    }
    let h = 2.0 * s2 / (s2 - a).sqrt();
    (h, h * s2)
}

pub fn ratio_integrals(a: f64, cfg: &QuadratureConfig) -> Result<RatioIntegrals> {
    let a = check_lower_limit(a)?;
    let [i_half, i_three_half] = doubling(cfg, |r| {
        let (x, y) = r.integrate_pair(0.0, FRAC_PI_2, |t| theta_integrands(t, a));
        [x, y]
    })?;
    Ok(RatioIntegrals {
        i_half,
        i_three_half,
        a,
    })
}

/// ∫ r^{1/2}/√((1 − r)(r − a)) dr over r ∈ [sin²θ_lo, sin²θ_hi].
pub fn partial_half_integral(
    a: f64,
    theta_lo: f64,
    theta_hi: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let a = check_lower_limit(a)?;
    integrate(|t| theta_integrands(t, a).0, theta_lo, theta_hi, cfg)
}

/// 𝓕(γ, x) = σ⁺ · I_{3/2}(σ⁻/σ⁺) / I_{1/2}(σ⁻/σ⁺), extended to all real (γ, x).
///
/// Where σ⁺ vanishes (γ = −1, x ≥ 2) the value is the limit 0.
pub fn big_f(gamma: f64, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let sigma = model::sigma_pair(gamma, x);
    match sigma.ratio() {
        Some(a) => Ok(sigma.plus * ratio_integrals(a, cfg)?.ratio()),
        None => Ok(0.0),
    }
}

/// Period η of the simple orbit with shape γ and mean q̄₁.
///
/// After factoring the radicand and substituting q₁ = q₁^max·r:
/// η = √2 · γ · q̄₁ · √(q₁^max) · I_{1/2}(q₁^antimax / q₁^max).
pub fn period(gamma: ShapeParam, qbar1: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let (qmax, qanti) = model::q1_extrema(gamma, qbar1)?;
    let ri = ratio_integrals(qanti / qmax, cfg)?;
    Ok(std::f64::consts::SQRT_2 * gamma.value() * qbar1 * qmax.sqrt() * ri.i_half)
}
