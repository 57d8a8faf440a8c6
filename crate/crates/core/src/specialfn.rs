//! Gamma and Beta functions on the positive axis, and the lemniscatic
//! constant by two independent routes.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quadrature::{self, QuadratureConfig};

/// Lanczos approximation parameters, g = 7, nine terms.
const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)] // published digits, kept verbatim
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

fn lanczos_sum(z: f64) -> f64 {
    // z = x - 1
    let mut acc = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    acc
}

/// Γ(x) for x > 0.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            what: "gamma requires a finite positive argument",
            value: x,
        });
    }
    if x < 0.5 {
        // Recurrence keeps the Lanczos sum in its accurate range.
        return Ok(gamma_fn(x + 1.0)? / x);
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    Ok(SQRT_2PI * t.powf(z + 0.5) * (-t).exp() * lanczos_sum(z))
}

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            what: "ln_gamma requires a finite positive argument",
            value: x,
        });
    }
    if x < 0.5 {
        return Ok(ln_gamma(x + 1.0)? - x.ln());
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    Ok(0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + lanczos_sum(z).ln())
}

/// B(a, b) = Γ(a)Γ(b)/Γ(a+b).
pub fn beta_fn(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0) || !(b > 0.0) {
        return Err(Error::Domain {
            what: "beta requires positive arguments",
            value: if a > 0.0 { b } else { a },
        });
    }
    if a + b < 150.0 {
        Ok(gamma_fn(a)? * gamma_fn(b)? / gamma_fn(a + b)?)
    } else {
        Ok((ln_gamma(a)? + ln_gamma(b)? - ln_gamma(a + b)?).exp())
    }
}

/// The lemniscatic constant ϖ = Γ(1/4)²/√(8π).
pub fn lemniscate_constant() -> f64 {
    // Γ(1/4) is in-domain, so this cannot fail.
    let g = gamma_fn(0.25).expect("gamma(1/4)");
    g * g / (8.0 * PI).sqrt()
}

/// ϖ from its defining integral 2∫₀¹ dt/√(1−t⁴).
///
/// With t = 1 − u² the integrand becomes 4/√((2 − u²)(1 + (1 − u²)²)),
/// which is analytic on [0, 1].
pub fn lemniscate_by_integral(cfg: &QuadratureConfig) -> Result<f64> {
    quadrature::integrate(
        |u| {
            let w = 1.0 - u * u;
            4.0 / ((2.0 - u * u) * (1.0 + w * w)).sqrt()
        },
        0.0,
        1.0,
        cfg,
    )
}

/// π and ϖ, with ϖ cross-checked between the Gamma route and the integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    pub pi: f64,
    pub varpi: f64,
    /// Relative agreement required between the two ϖ routes.
    pub check_tol: f64,
    /// Measured relative disagreement between the two routes.
    pub route_gap: f64,
}

impl Constants {
    pub const CHECK_TOL: f64 = 1e-10;

    pub fn compute(cfg: &QuadratureConfig) -> Result<Self> {
        let varpi = lemniscate_constant();
        let by_integral = lemniscate_by_integral(cfg)?;
        let route_gap = ((varpi - by_integral) / varpi).abs();
        Ok(Constants {
            pi: PI,
            varpi,
            check_tol: Self::CHECK_TOL,
            route_gap,
        })
    }

    pub fn routes_agree(&self) -> bool {
        self.route_gap <= self.check_tol
    }
}
