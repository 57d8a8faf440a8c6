//! Numerical certificates for the properties the solver relies on:
//! uniqueness and monotonicity of the fixed point, the closed-form
//! anchors, the intersection threshold and trajectory self-consistency.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::intersect::{self, IntersectionClass};
use crate::model::{self, NucleusCharge, ShapeParam};
use crate::orbit;
use crate::quadrature::{self, QuadratureConfig};
use crate::solver;
use crate::specialfn::{self, Constants};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Level {
    Fast,
    Full,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Certificate {
    fn new(name: &str, passed: bool, detail: String) -> Self {
        Certificate {
            name: name.to_string(),
            passed,
            detail,
        }
    }

    fn failed(name: &str, err: crate::error::Error) -> Self {
        Certificate::new(name, false, format!("error: {err}"))
    }
}

/// Dense-grid scan of 𝓕_γ − 2 on [x_lo, x_hi].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixpointScan {
    pub x_lo: f64,
    pub x_hi: f64,
    pub points: usize,
    /// Sign changes of 𝓕_γ − 2 between consecutive grid points.
    pub crossings: usize,
    /// 𝓕_γ(x_i) > 𝓕_γ(x_{i+1}) at every consecutive pair.
    pub strictly_decreasing: bool,
}

pub fn scan_fixpoint(
    gamma: ShapeParam,
    x_lo: f64,
    x_hi: f64,
    points: usize,
    cfg: &QuadratureConfig,
) -> Result<FixpointScan> {
    let g = gamma.value();
    let mut crossings = 0;
    let mut strictly_decreasing = true;
    let mut prev = quadrature::big_f(g, x_lo, cfg)?;
    for i in 1..points {
        let x = x_lo + (x_hi - x_lo) * i as f64 / (points - 1) as f64;
        let f = quadrature::big_f(g, x, cfg)?;
        if (prev > 2.0) != (f > 2.0) {
            crossings += 1;
        }
        strictly_decreasing &= f < prev;
        prev = f;
    }
    Ok(FixpointScan {
        x_lo,
        x_hi,
        points,
        crossings,
        strictly_decreasing,
    })
}

/// `count` log-spaced charges on (lo, hi], excluding `lo`.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (1..=count)
        .map(|i| (a + (b - a) * i as f64 / count as f64).exp())
        .collect()
}

/// `count` evenly spaced charges on (lo, hi], excluding `lo`.
pub fn linear_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    (1..=count)
        .map(|i| lo + (hi - lo) * i as f64 / count as f64)
        .collect()
}

/// Outcome of classifying a charge grid against the closed-form threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdCoherence {
    pub classes: Vec<(f64, IntersectionClass)>,
    /// Number of verdict changes along the grid (Touches counts as neither side).
    pub flips: usize,
    /// Half-width in μ around μ* inside which either verdict is acceptable.
    pub epsilon: f64,
    /// Grid points whose verdict contradicts μ*.
    pub misordered: usize,
    /// Grid points where sign(κ) and sign(q₁^max − q̄₂) disagree.
    pub reach_mismatches: usize,
}

pub fn threshold_coherence(
    grid: &[f64],
    touch_tol: f64,
    cfg: &QuadratureConfig,
) -> Result<ThresholdCoherence> {
    let star = intersect::critical_mu();
    // μ-width of the κ touch band from dκ/dμ at μ*
    let d = 1e-4 * star;
    let k_up = solver::solve_orbit(NucleusCharge::new(star + d)?, solver::DEFAULT_TOL, cfg)?.kappa;
    let k_dn = solver::solve_orbit(NucleusCharge::new(star - d)?, solver::DEFAULT_TOL, cfg)?.kappa;
    let slope = (k_up - k_dn) / (2.0 * d);
    let epsilon = touch_tol / slope.abs();

    let mut classes = Vec::with_capacity(grid.len());
    let mut misordered = 0;
    let mut reach_mismatches = 0;
    for &m in grid {
        let sol = solver::solve_orbit(NucleusCharge::new(m)?, solver::DEFAULT_TOL, cfg)?;
        let class = intersect::classify_solution(&sol, touch_tol);
        let wrong = match class {
            IntersectionClass::Intersects => m <= star - epsilon,
            IntersectionClass::Disjoint => m >= star + epsilon,
            IntersectionClass::Touches => (m - star).abs() > epsilon,
        };
        misordered += wrong as usize;
        if sol.kappa.abs() > touch_tol && (sol.q1max - sol.qbar2).signum() != sol.kappa.signum() {
            reach_mismatches += 1;
        }
        classes.push((m, class));
    }
    let sides: Vec<IntersectionClass> = classes
        .iter()
        .map(|&(_, c)| c)
        .filter(|c| *c != IntersectionClass::Touches)
        .collect();
    let flips = sides.windows(2).filter(|w| w[0] != w[1]).count();
    Ok(ThresholdCoherence {
        classes,
        flips,
        epsilon,
        misordered,
        reach_mismatches,
    })
}

fn check(name: &str, f: impl FnOnce() -> Result<(bool, String)>) -> Certificate {
    match f() {
        Ok((passed, detail)) => Certificate::new(name, passed, detail),
        Err(e) => Certificate::failed(name, e),
    }
}

fn uniqueness_at(mu: f64, points: usize, cfg: &QuadratureConfig) -> Result<(bool, String)> {
    let charge = NucleusCharge::new(mu)?;
    let gamma = model::gamma_of_mu(charge);
    let sol = solver::solve_orbit(charge, 1e-10, cfg)?;
    let hi = solver::bracket_upper(gamma, cfg)?;
    let scan = scan_fixpoint(gamma, 1e-6, hi, points, cfg)?;
    let ok = sol.fixpoint_residual <= 1e-10 && scan.crossings == 1 && scan.strictly_decreasing;
    Ok((
        ok,
        format!(
            "mu={mu:.6} |F-2|={:.1e} crossings={} decreasing={}",
            sol.fixpoint_residual, scan.crossings, scan.strictly_decreasing
        ),
    ))
}

fn trajectory_at(mu: f64, cfg: &QuadratureConfig) -> Result<(bool, String)> {
    let sol = solver::solve_orbit(NucleusCharge::new(mu)?, 1e-13, cfg)?;
    let tr = orbit::reconstruct(&sol, 1024, cfg)?;
    let mean = (orbit::mean_residual(&tr) / sol.qbar1).abs();
    let energy = orbit::energy_residual(&tr).abs();
    let sym = tr.symmetry_error();
    Ok((
        mean <= 1e-6 && energy <= 1e-6 && sym <= 1e-9,
        format!("mu={mu:.6} mean={mean:.1e} energy={energy:.1e} symmetry={sym:.1e}"),
    ))
}

/// Runs the certificate suite. `Fast` covers the closed-form anchors and a
/// single charge; `Full` adds the charge grids.
pub fn run(level: Level, cfg: &QuadratureConfig) -> Vec<Certificate> {
    let mut out = vec![
        check("F(-1,0) = 8/3", || {
            let f = quadrature::big_f(-1.0, 0.0, cfg)?;
            let err = (f - 8.0 / 3.0).abs();
            Ok((err <= 1e-10, format!("F={f:.15} err={err:.1e}")))
        }),
        check("lemniscate constant, two routes", || {
            let c = Constants::compute(cfg)?;
            Ok((
                c.routes_agree() && (c.varpi - 2.62).abs() <= 0.01,
                format!("varpi={:.15} route gap={:.1e}", c.varpi, c.route_gap),
            ))
        }),
        check("Gamma(3/4)Gamma(5/4) = pi/(2 sqrt 2)", || {
            let p = specialfn::gamma_fn(0.75)? * specialfn::gamma_fn(1.25)?;
            let err = (p - PI / (2.0 * 2f64.sqrt())).abs();
            Ok((err <= 1e-12, format!("err={err:.1e}")))
        }),
        check("I(-1) Beta reductions", || {
            let ri = quadrature::ratio_integrals(-1.0, cfg)?;
            let e1 = (ri.i_half - 0.5 * specialfn::beta_fn(0.75, 0.5)?).abs();
            let e2 = (ri.i_three_half - 0.5 * specialfn::beta_fn(1.25, 0.5)?).abs();
            Ok((
                e1 <= 1e-10 && e2 <= 1e-10,
                format!("I_1/2 err={e1:.1e} I_3/2 err={e2:.1e}"),
            ))
        }),
        check("critical charge", || {
            let a = intersect::critical_mu();
            let b = intersect::critical_mu_closed_form();
            let rel = ((a - b) / b).abs();
            let printed = ((a - 13.69) / 13.69).abs();
            Ok((
                rel <= 1e-12 && printed <= 5e-3,
                format!(
                    "mu*={a:.12} route gap={rel:.1e} vs 13.69: {:.2}%",
                    printed * 100.0
                ),
            ))
        }),
        check("touch point", || {
            let g = intersect::critical_gamma();
            let sol =
                solver::solve_orbit(NucleusCharge::new(intersect::critical_mu())?, 1e-12, cfg)?;
            let target = 2.0 / (g * g);
            let rel = ((sol.qbar1 - target) / target).abs();
            Ok((
                rel <= 1e-8 && sol.kappa.abs() <= 1e-8,
                format!("qbar1 rel err={rel:.1e} kappa={:.1e}", sol.kappa),
            ))
        }),
        check("uniqueness scan at mu=2", || {
            uniqueness_at(2.0, 10_000, cfg)
        }),
        check("helium is disjoint", || {
            let c =
                intersect::classify(NucleusCharge::new(2.0)?, intersect::DEFAULT_TOUCH_TOL, cfg)?;
            Ok((c == IntersectionClass::Disjoint, format!("classify(2)={c}")))
        }),
        check("trajectory at mu=2", || trajectory_at(2.0, cfg)),
    ];

    if level == Level::Full {
        for mu in log_grid(1.01, 100.0, 25) {
            out.push(check("uniqueness scan", || uniqueness_at(mu, 10_000, cfg)));
        }
        out.push(check("F(., 0) increasing on [-1, 5]", || {
            let mut prev = quadrature::big_f(-1.0, 0.0, cfg)?;
            let mut ok = true;
            for i in 1..50 {
                let g = -1.0 + 6.0 * i as f64 / 49.0;
                let f = quadrature::big_f(g, 0.0, cfg)?;
                ok &= f > prev;
                prev = f;
            }
            Ok((ok, format!("F(5,0)={prev:.6}")))
        }));
        out.push(check("threshold coherence", || {
            let grid = linear_grid(1.01, 40.0, 50);
            let tc = threshold_coherence(&grid, intersect::DEFAULT_TOUCH_TOL, cfg)?;
            Ok((
                tc.flips == 1 && tc.misordered == 0 && tc.reach_mismatches == 0,
                format!(
                    "flips={} misordered={} reach mismatches={}",
                    tc.flips, tc.misordered, tc.reach_mismatches
                ),
            ))
        }));
        for mu in [4.0, intersect::critical_mu()] {
            out.push(check("trajectory", || trajectory_at(mu, cfg)));
        }
    }
    out
}
