//! Parameter algebra of the mean-interaction model: the charge/shape
//! bijection, the shape coefficients σ±, the energy integral κ and the
//! turning points of the inner electron.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance for double-precision round-trip identities.
pub const REL_TOL: f64 = 1e-12;
/// Absolute floor used by [`close`] near zero.
pub const ABS_FLOOR: f64 = 1e-14;

/// `|a - b| <= REL_TOL * max(|a|, |b|)`, or within `ABS_FLOOR` near zero.
pub fn close(a: f64, b: f64) -> bool {
    let diff = (a - b).abs();
    diff <= ABS_FLOOR || diff <= REL_TOL * a.abs().max(b.abs())
}

/// Charge of the nucleus in units of the electron charge. Always > 1.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct NucleusCharge(f64);

impl NucleusCharge {
    pub fn new(mu: f64) -> Result<Self> {
        if mu > 1.0 && mu.is_finite() {
            Ok(NucleusCharge(mu))
        } else {
            Err(Error::Domain {
                what: "nucleus charge must exceed 1 (otherwise the outer electron escapes and the atom ionizes)",
                value: mu,
            })
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for NucleusCharge {
    type Error = Error;
    fn try_from(mu: f64) -> Result<Self> {
        NucleusCharge::new(mu)
    }
}

impl From<NucleusCharge> for f64 {
    fn from(mu: NucleusCharge) -> f64 {
        mu.0
    }
}

/// γ = (1 + √μ)/(μ − 1), the ratio (q̄₂ − q̄₁)/q̄₁. Always > 0.
///
/// Functions that accept the analytic extension to all real γ take a plain
/// `f64` instead.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct ShapeParam(f64);

impl ShapeParam {
    pub fn new(gamma: f64) -> Result<Self> {
        if gamma > 0.0 && gamma.is_finite() {
            Ok(ShapeParam(gamma))
        } else {
            Err(Error::Domain {
                what: "shape parameter gamma must be positive",
                value: gamma,
            })
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for ShapeParam {
    type Error = Error;
    fn try_from(gamma: f64) -> Result<Self> {
        ShapeParam::new(gamma)
    }
}

impl From<ShapeParam> for f64 {
    fn from(g: ShapeParam) -> f64 {
        g.0
    }
}

/// The conserved quantity κ of the reduced inner-electron equation.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EnergyIntegral(pub f64);

impl EnergyIntegral {
    pub fn value(self) -> f64 {
        self.0
    }
}

/// σ⁺ ≥ 0 ≥ σ⁻ at a point (γ, x).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SigmaPair {
    pub plus: f64,
    pub minus: f64,
    pub gamma: f64,
    pub x: f64,
}

impl SigmaPair {
    /// σ⁻/σ⁺, the lower limit of the normalized integrals. Always ≤ 0.
    ///
    /// Returns `None` when σ⁺ vanishes (γ = −1 and x ≥ 2/γ²).
    pub fn ratio(&self) -> Option<f64> {
        (self.plus > 0.0).then(|| self.minus / self.plus)
    }
}

pub fn gamma_of_mu(mu: NucleusCharge) -> ShapeParam {
    let mu = mu.value();
    ShapeParam((1.0 + mu.sqrt()) / (mu - 1.0))
}

pub fn mu_of_gamma(gamma: ShapeParam) -> NucleusCharge {
    let g = gamma.value();
    let r = (g + 1.0) / g;
    NucleusCharge(r * r)
}

fn check_mean(qbar1: f64) -> Result<()> {
    if qbar1 > 0.0 && qbar1.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "mean position qbar1 must be positive",
            value: qbar1,
        })
    }
}

/// Position of the frozen outer electron, q̄₂ = (γ + 1)·q̄₁.
pub fn qbar2_of(gamma: ShapeParam, qbar1: f64) -> Result<f64> {
    check_mean(qbar1)?;
    Ok((gamma.value() + 1.0) * qbar1)
}

/// σ± = 2 − γ²x ± √((2 − γ²x)² + 4(γ + 1)²), defined for all real (γ, x).
///
/// The root with the larger magnitude is formed directly and the other one
/// from the product σ⁺σ⁻ = −4(γ + 1)², so neither side cancels.
pub fn sigma_pair(gamma: f64, x: f64) -> SigmaPair {
    let b = 2.0 - gamma * gamma * x;
    let c = 4.0 * (gamma + 1.0) * (gamma + 1.0);
    let disc = b.hypot(2.0 * (gamma + 1.0));
    let (plus, minus) = if b >= 0.0 {
        let plus = b + disc;
        let minus = if plus > 0.0 { -c / plus } else { 0.0 };
        (plus, minus)
    } else {
        let minus = b - disc;
        let plus = if c > 0.0 { -c / minus } else { 0.0 };
        (plus, minus)
    };
    SigmaPair {
        plus,
        minus,
        gamma,
        x,
    }
}

/// κ = 2/(γ²q̄₁) − 1.
pub fn kappa_of(gamma: ShapeParam, qbar1: f64) -> Result<EnergyIntegral> {
    check_mean(qbar1)?;
    let g = gamma.value();
    Ok(EnergyIntegral(2.0 / (g * g * qbar1) - 1.0))
}

/// Positive root of q² − γ²κq̄₁²·q − (γ + 1)²q̄₁² = 0.
pub fn q1max_of_kappa(kappa: EnergyIntegral, gamma: ShapeParam, qbar1: f64) -> Result<f64> {
    check_mean(qbar1)?;
    let g = gamma.value();
    let b = g * g * kappa.value() * qbar1 * qbar1;
    let c = (g + 1.0) * (g + 1.0) * qbar1 * qbar1;
    let disc = b.hypot(2.0 * (g + 1.0) * qbar1);
    Ok(if b >= 0.0 {
        0.5 * (b + disc)
    } else {
        // product of roots is −c
        -c / (0.5 * (b - disc))
    })
}

/// (q₁^max, q₁^antimax) = (σ⁺q̄₁/2, σ⁻q̄₁/2).
pub fn q1_extrema(gamma: ShapeParam, qbar1: f64) -> Result<(f64, f64)> {
    check_mean(qbar1)?;
    let s = sigma_pair(gamma.value(), qbar1);
    Ok((0.5 * s.plus * qbar1, 0.5 * s.minus * qbar1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mu(v: f64) -> NucleusCharge {
        NucleusCharge::new(v).unwrap()
    }

    fn g(v: f64) -> ShapeParam {
        ShapeParam::new(v).unwrap()
    }

    #[test]
    fn gamma_of_mu_examples() {
        assert!(close(gamma_of_mu(mu(4.0)).value(), 1.0));
        assert!(close(gamma_of_mu(mu(9.0)).value(), 0.5));
    }

    #[test]
    fn gamma_of_mu_decreasing() {
        let grid: Vec<f64> = (0..100)
            .map(|i| 1.01 + (100.0 - 1.01) * i as f64 / 99.0)
            .collect();
        for w in grid.windows(2) {
            assert!(gamma_of_mu(mu(w[0])).value() > gamma_of_mu(mu(w[1])).value());
        }
    }

    #[test]
    fn charge_domain() {
        assert!(NucleusCharge::new(1.0).is_err());
        assert!(NucleusCharge::new(0.5).is_err());
        assert!(NucleusCharge::new(f64::INFINITY).is_err());
        assert!(NucleusCharge::new(1.0 + 1e-9).is_ok());
        assert!(ShapeParam::new(0.0).is_err());
        assert!(ShapeParam::new(-1.0).is_err());
    }

    #[test]
    fn mu_of_gamma_examples() {
        assert!(close(mu_of_gamma(g(1.0)).value(), 4.0));
        assert!(close(mu_of_gamma(g(0.5)).value(), 9.0));
        assert!(close(mu_of_gamma(gamma_of_mu(mu(2.0))).value(), 2.0));
    }

    #[test]
    fn bijection_on_log_grid() {
        for i in 0..200 {
            let lo: f64 = 1.001f64.ln();
            let hi: f64 = 1000f64.ln();
            let m = (lo + (hi - lo) * i as f64 / 199.0).exp();
            let gam = gamma_of_mu(mu(m));
            let back = mu_of_gamma(gam).value();
            assert!(((back - m) / m).abs() <= 1e-11, "mu = {m}, back = {back}");
            let lhs = m.sqrt() * gam.value();
            assert!(close(lhs, gam.value() + 1.0), "mu = {m}");
        }
    }

    #[test]
    fn qbar2_examples() {
        assert!(close(qbar2_of(g(1.0), 1.0).unwrap(), 2.0));
        let gam = g(0.37);
        assert!(close(qbar2_of(gam, 2.5).unwrap() - 2.5, 0.37 * 2.5));
        // (μ + √μ)/(μ − 1) at μ = 2 is 2 + √2
        let q2 = qbar2_of(gamma_of_mu(mu(2.0)), 1.0).unwrap();
        assert!(close(q2, 2.0 + 2f64.sqrt()));
        assert!(close(q2, 3.414_213_562_373_095));
        assert!(qbar2_of(g(1.0), 0.0).is_err());
    }

    #[test]
    fn sigma_examples() {
        let s = sigma_pair(-1.0, 0.0);
        assert_eq!((s.plus, s.minus), (4.0, 0.0));
        let gam = 1.0;
        let s = sigma_pair(gam, 2.0 / (gam * gam));
        assert!(close(s.plus, 2.0 * (gam + 1.0)));
        assert!(close(s.minus, -2.0 * (gam + 1.0)));
        let s = sigma_pair(0.37, 5.0);
        assert!(close(s.plus * s.minus, -4.0 * 1.37 * 1.37));
    }

    #[test]
    fn sigma_degenerate_at_minus_one() {
        let s = sigma_pair(-1.0, 3.0);
        assert_eq!(s.plus, 0.0);
        assert!(s.minus < 0.0);
        assert!(s.ratio().is_none());
    }

    #[test]
    fn kappa_examples() {
        assert!(close(kappa_of(g(1.0), 2.0).unwrap().value(), 0.0));
        assert!(close(kappa_of(g(1.0), 1.0).unwrap().value(), 1.0));
        assert!(close(kappa_of(g(2.0), 1.0).unwrap().value(), -0.5));
        assert!(kappa_of(g(1.0), -1.0).is_err());
    }

    #[test]
    fn q1max_examples() {
        let (gam, qb) = (g(0.8), 1.7);
        let q2 = qbar2_of(gam, qb).unwrap();
        assert!(close(
            q1max_of_kappa(EnergyIntegral(0.0), gam, qb).unwrap(),
            q2
        ));
        assert!(q1max_of_kappa(EnergyIntegral(0.2), gam, qb).unwrap() > q2);

        let (k, gam, qb) = (0.3, g(0.5), 1.2);
        let m = q1max_of_kappa(EnergyIntegral(k), gam, qb).unwrap();
        let q2 = qbar2_of(gam, qb).unwrap();
        let lhs = m * m - q2 * q2 - 0.25 * k * qb * qb * m;
        assert!(lhs.abs() <= 1e-12 * m * m, "{lhs}");
    }

    #[test]
    fn extrema_examples() {
        let (m, a) = q1_extrema(g(1.0), 2.0).unwrap();
        assert!(close(m, 4.0));
        assert!(close(a, -4.0));
        // root product −μγ²q̄₁² at (1, 1): direct expansion of
        // q² − (2q̄₁ − γ²q̄₁²)q − (γ+1)²q̄₁² gives roots (1 ± √17)/2
        let (m, a) = q1_extrema(g(1.0), 1.0).unwrap();
        assert!(close(m, (1.0 + 17f64.sqrt()) / 2.0));
        assert!(close(a, (1.0 - 17f64.sqrt()) / 2.0));
        assert!(close(m * a, -4.0));
    }

    #[test]
    fn extrema_agree_with_kappa_route() {
        for (gam, qb) in [(0.3, 10.0), (1.0, 3.6), (2.4, 1.6), (20.0, 0.75)] {
            let gam = g(gam);
            let k = kappa_of(gam, qb).unwrap();
            let (m, _) = q1_extrema(gam, qb).unwrap();
            let via_k = q1max_of_kappa(k, gam, qb).unwrap();
            assert!((m - via_k).abs() <= 1e-12 * m, "{m} vs {via_k}");
        }
    }

    proptest! {
        #[test]
        fn sigma_product_invariant(gam in -2.0f64..5.0, x in 0.0f64..10.0) {
            let s = sigma_pair(gam, x);
            let target = -4.0 * (gam + 1.0) * (gam + 1.0);
            prop_assert!(s.plus >= s.minus);
            prop_assert!((s.plus * s.minus - target).abs() <= 1e-12 * target.abs().max(1.0));
            if (gam + 1.0).abs() > 1e-9 {
                prop_assert!(s.plus > 0.0 && s.minus < 0.0);
            }
        }

        #[test]
        fn quadratic_factorization(gam in 0.05f64..5.0, qb in 0.1f64..20.0, t in 0.0f64..1.0) {
            let gam = ShapeParam::new(gam).unwrap();
            let (m, a) = q1_extrema(gam, qb).unwrap();
            let q = t * m;
            let gv = gam.value();
            let lhs = (m - q) * (q - a);
            let rhs = 2.0 * qb * q - gv * gv * qb * qb * q + (gv + 1.0).powi(2) * qb * qb - q * q;
            let scale = m * (m - a);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * scale);
        }

        #[test]
        fn kappa_sign_decides_reach(k in -0.99f64..5.0, gam in 0.05f64..5.0, qb in 0.1f64..20.0) {
            prop_assume!(k.abs() > 1e-6);
            let gam = ShapeParam::new(gam).unwrap();
            let m = q1max_of_kappa(EnergyIntegral(k), gam, qb).unwrap();
            let q2 = qbar2_of(gam, qb).unwrap();
            prop_assert_eq!((m - q2).signum(), k.signum());
        }
    }
}
