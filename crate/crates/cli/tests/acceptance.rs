//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each
//! and exits nonzero if any fails. Runs without the libtest harness so the
//! lines are always shown.

use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use frozen_planet::intersect::{self, IntersectionClass};
use frozen_planet::model::{self, NucleusCharge};
use frozen_planet::orbit;
use frozen_planet::quadrature::{self, QuadratureConfig};
use frozen_planet::solver;
use frozen_planet::specialfn;

const BIN: &str = env!("CARGO_BIN_EXE_frozen-planet");

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Duration, Box<dyn Fn() -> Outcome + 'a>);

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

fn mu(v: f64) -> NucleusCharge {
    NucleusCharge::new(v).unwrap()
}

/// ϖ = 2∫₀¹ dt/√(1 − t⁴) = 2∫₀^{π/2} dφ/√(1 + sin²φ) after t = sin φ,
/// by composite Simpson on 200 000 panels.
fn brute_force_varpi() -> f64 {
    let n = 200_000;
    let h = 0.5 * PI / n as f64;
    let f = |p: f64| 1.0 / (1.0 + p.sin().powi(2)).sqrt();
    let mut s = f(0.0) + f(0.5 * PI);
    for i in 1..n {
        s += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    2.0 * s * h / 3.0
}

fn c1_anchor() -> Outcome {
    let f = quadrature::big_f(-1.0, 0.0, &cfg()).map_err(|e| e.to_string())?;
    let err = (f - 8.0 / 3.0).abs();
    ensure(err <= 1e-10, format!("F(-1,0)={f} |err|={err:.1e}"))
}

fn c2_lemniscate() -> Outcome {
    let by_gamma = specialfn::lemniscate_constant();
    let by_integral = specialfn::lemniscate_by_integral(&cfg()).map_err(|e| e.to_string())?;
    let rel = ((by_gamma - by_integral) / by_gamma).abs();
    ensure(
        rel <= 1e-10 && (by_gamma - 2.62).abs() <= 0.01,
        format!("varpi={by_gamma} routes rel gap={rel:.1e}"),
    )
}

fn c3_threshold() -> Outcome {
    let varpi = brute_force_varpi();
    let oracle = (3.0 * PI / (3.0 * PI - varpi * varpi)).powi(2);
    let via_gamma = intersect::critical_mu();
    let direct = intersect::critical_mu_closed_form();
    let r1 = ((via_gamma - oracle) / oracle).abs();
    let r2 = ((direct - oracle) / oracle).abs();
    let printed = ((via_gamma - 13.69) / 13.69).abs();
    ensure(
        r1 <= 1e-12 && r2 <= 1e-12 && printed <= 5e-3,
        format!(
            "mu*={via_gamma} vs brute-force oracle: {r1:.1e} (mu_of_gamma), {r2:.1e} (direct); \
             {:.2}% from 13.69",
            printed * 100.0
        ),
    )
}

fn c4_touch_point() -> Outcome {
    let g = intersect::critical_gamma();
    let sol = solver::solve_orbit(mu(intersect::critical_mu()), solver::DEFAULT_TOL, &cfg())
        .map_err(|e| e.to_string())?;
    let target = 2.0 / (g * g);
    let rel = ((sol.qbar1 - target) / target).abs();
    ensure(
        rel <= 1e-8 && sol.kappa.abs() <= 1e-8,
        format!("qbar1 rel err={rel:.1e} kappa={:.1e}", sol.kappa),
    )
}

fn c5_uniqueness() -> Outcome {
    let (lo, hi, count) = (1.01f64, 100.0f64, 25);
    let mut worst = 0.0f64;
    for i in 1..=count {
        let m = (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / count as f64).exp();
        let charge = mu(m);
        let sol = solver::solve_orbit(charge, 1e-10, &cfg()).map_err(|e| format!("mu={m}: {e}"))?;
        let gamma = model::gamma_of_mu(charge).value();
        let f = |x: f64| quadrature::big_f(gamma, x, &cfg()).unwrap();
        let resid = (f(sol.qbar1) - 2.0).abs();
        worst = worst.max(resid);
        // grid reaches well past the root: 4 q̄₁ or the bracket end
        let x_hi = solver::bracket_upper(sol.shape(), &cfg())
            .unwrap()
            .max(4.0 * sol.qbar1);
        let points = 10_000;
        let (mut crossings, mut decreasing) = (0, true);
        let mut prev = f(1e-6);
        for j in 1..points {
            let x = 1e-6 + (x_hi - 1e-6) * j as f64 / (points - 1) as f64;
            let v = f(x);
            crossings += ((prev > 2.0) != (v > 2.0)) as usize;
            decreasing &= v < prev;
            prev = v;
        }
        if resid > 1e-10 || crossings != 1 || !decreasing {
            return Err(format!(
                "mu={m}: |F-2|={resid:.1e} crossings={crossings} decreasing={decreasing}"
            ));
        }
    }
    Ok(format!(
        "{count} charges, worst |F-2|={worst:.1e}, one crossing each, strictly decreasing"
    ))
}

fn c6_classification() -> Outcome {
    let tol = intersect::DEFAULT_TOUCH_TOL;
    let helium = intersect::classify(mu(2.0), tol, &cfg()).map_err(|e| e.to_string())?;
    if helium != IntersectionClass::Disjoint {
        return Err(format!("classify(2)={helium}"));
    }
    let star = intersect::critical_mu();
    let grid: Vec<f64> = (1..=50)
        .map(|i| 1.01 + (40.0 - 1.01) * i as f64 / 50.0)
        .collect();
    let mut classes = Vec::new();
    for &m in &grid {
        let sol =
            solver::solve_orbit(mu(m), solver::DEFAULT_TOL, &cfg()).map_err(|e| e.to_string())?;
        let reach = sol.q1max - sol.qbar2;
        if reach.signum() != sol.kappa.signum() {
            return Err(format!(
                "mu={m}: kappa={} but q1max-qbar2={reach}",
                sol.kappa
            ));
        }
        classes.push(intersect::classify_solution(&sol, tol));
    }
    let flips: Vec<usize> = (1..grid.len())
        .filter(|&i| classes[i] != classes[i - 1])
        .collect();
    if flips.len() != 1 {
        return Err(format!("{} flips", flips.len()));
    }
    let i = flips[0];
    let ordered = classes[i - 1] == IntersectionClass::Disjoint
        && classes[i] == IntersectionClass::Intersects;
    ensure(
        ordered && grid[i - 1] < star && star <= grid[i],
        format!(
            "classify(2)=Disjoint; one flip in ({:.4}, {:.4}] containing mu*={star:.4}; \
             sign(kappa)=sign(q1max-qbar2) on all 50",
            grid[i - 1],
            grid[i]
        ),
    )
}

/// Max |central second difference − ODE right side| at t = 1/8, 1/4, 3/8.
fn ode_defect(sol: &solver::OrbitSolution, n: usize) -> Result<f64, String> {
    let tr = orbit::reconstruct(sol, n, &cfg()).map_err(|e| e.to_string())?;
    let h = tr.step();
    let q = &tr.samples;
    Ok([n / 8, n / 4, 3 * n / 8]
        .iter()
        .map(|&j| {
            let fd = (q[j + 1].q1 - 2.0 * q[j].q1 + q[j - 1].q1) / (h * h);
            (fd - tr.acceleration(q[j].q1)).abs() / tr.acceleration(q[j].q1).abs()
        })
        .fold(0.0, f64::max))
}

fn c7_trajectory() -> Outcome {
    let mut lines = Vec::new();
    for m in [2.0, 4.0, intersect::critical_mu()] {
        let sol = solver::solve_orbit(mu(m), 1e-13, &cfg()).map_err(|e| e.to_string())?;
        let tr = orbit::reconstruct(&sol, 1024, &cfg()).map_err(|e| e.to_string())?;
        let mean = (orbit::mean_residual(&tr) / sol.qbar1).abs();
        let energy = orbit::energy_residual(&tr).abs();
        let sym = tr.symmetry_error();
        let (d1, d2) = (ode_defect(&sol, 256)?, ode_defect(&sol, 512)?);
        let order = (d1 / d2).log2();
        let line = format!(
            "mu={m:.4}: mean={mean:.1e} energy={energy:.1e} sym={sym:.1e} \
             q''-defect {d1:.1e}->{d2:.1e} (order {order:.2})"
        );
        if mean > 1e-6 || energy > 1e-6 || sym > 1e-9 || !(1.8..=2.2).contains(&order) {
            return Err(line);
        }
        lines.push(line);
    }
    Ok(lines.join("; "))
}

fn c8_identities() -> Outcome {
    let g = |x| specialfn::gamma_fn(x).unwrap();
    let dup = (g(0.75) * g(1.25) - PI / (2.0 * 2f64.sqrt())).abs();
    let ri = quadrature::ratio_integrals(-1.0, &cfg()).map_err(|e| e.to_string())?;
    let b = |p, q| specialfn::beta_fn(p, q).unwrap();
    let e1 = (ri.i_half - 0.5 * b(0.75, 0.5)).abs();
    let e2 = (ri.i_three_half - 0.5 * b(1.25, 0.5)).abs();
    ensure(
        dup <= 1e-12 && e1 <= 1e-10 && e2 <= 1e-10,
        format!(
            "Gamma(3/4)Gamma(5/4) err={dup:.1e}; I_1/2(-1) err={e1:.1e}; I_3/2(-1) err={e2:.1e}"
        ),
    )
}

fn run_bin(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(BIN)
        .args(args)
        .env_remove("FROZEN_PLANET_CONFIG")
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?} exited with {}", out.status));
    }
    Ok(out.stdout)
}

fn without_wall_time(payload: &[u8]) -> Vec<u8> {
    let text = String::from_utf8_lossy(payload);
    text.lines()
        .filter(|l| !l.trim_start().starts_with("\"wall_time\""))
        .flat_map(|l| l.bytes().chain(Some(b'\n')))
        .collect()
}

fn c9_cli(dir: &Path) -> Outcome {
    let a = run_bin(&["solve", "--mu", "2"])?;
    let b = run_bin(&["solve", "--mu", "2"])?;
    let doc: serde_json::Value = serde_json::from_slice(&a).map_err(|e| e.to_string())?;
    let (a, b) = (without_wall_time(&a), without_wall_time(&b));
    if a != b {
        return Err("solve --mu 2 payloads differ".into());
    }
    for key in [
        "mu",
        "gamma",
        "qbar1",
        "qbar2",
        "kappa",
        "q1max",
        "eta",
        "residuals",
        "manifest",
    ] {
        if doc.get(key).is_none() {
            return Err(format!("solve JSON lacks {key}"));
        }
    }

    let out = dir.join("scan.csv");
    let out_s = out.to_str().unwrap();
    run_bin(&[
        "scan", "--mu-min", "1.5", "--mu-max", "20", "--steps", "10", "--out", out_s,
    ])?;
    let csv = std::fs::read_to_string(&out).map_err(|e| e.to_string())?;
    let lines: Vec<&str> = csv.split_terminator('\n').collect();
    if csv.contains('\r') || lines[0] != "mu,gamma,qbar1,qbar2,kappa,q1max,q1antimax,eta,class" {
        return Err(format!("bad scan header {:?}", lines[0]));
    }
    let classes: Vec<&str> = lines[1..]
        .iter()
        .map(|l| l.rsplit(',').next().unwrap())
        .collect();
    let well_formed = lines[1..].iter().all(|l| {
        let cells: Vec<&str> = l.split(',').collect();
        cells.len() == 9 && cells[..8].iter().all(|c| c.parse::<f64>().is_ok())
    });
    let flips = classes.windows(2).filter(|w| w[0] != w[1]).count();
    let sidecar = dir.join("scan.csv.manifest.json").exists();
    ensure(
        classes.len() == 10
            && well_formed
            && flips == 1
            && classes[0] == "Disjoint"
            && classes[9] == "Intersects"
            && sidecar,
        format!(
            "solve JSON identical across runs ({} bytes); scan: {} rows, 9 columns, one flip, manifest sidecar={sidecar}",
            a.len(),
            classes.len()
        ),
    )
}

fn main() -> ExitCode {
    let tmp = tempfile::tempdir().expect("temp dir");
    let secs = Duration::from_secs_f64;
    let criteria: Vec<Criterion> = vec![
        (
            "1 closed-form anchor F(-1,0)=8/3",
            secs(0.1),
            Box::new(c1_anchor),
        ),
        ("2 lemniscatic constant", secs(0.1), Box::new(c2_lemniscate)),
        (
            "3 intersection threshold mu*",
            secs(10.0),
            Box::new(c3_threshold),
        ),
        (
            "4 touch-point consistency",
            secs(1.0),
            Box::new(c4_touch_point),
        ),
        (
            "5 existence and uniqueness grid",
            secs(10.0),
            Box::new(c5_uniqueness),
        ),
        ("6 classification", secs(10.0), Box::new(c6_classification)),
        (
            "7 trajectory self-consistency",
            secs(10.0),
            Box::new(c7_trajectory),
        ),
        (
            "8 special-function identities",
            secs(10.0),
            Box::new(c8_identities),
        ),
        (
            "9 CLI determinism and scan schema",
            secs(10.0),
            Box::new(|| c9_cli(tmp.path())),
        ),
    ];

    let mut failed = 0;
    for (name, budget, check) in &criteria {
        let start = Instant::now();
        let outcome = check();
        let took = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if took <= *budget => (true, d),
            Ok(d) => (false, format!("{d}; over time budget {budget:?}")),
            Err(d) => (false, d),
        };
        failed += !ok as usize;
        println!(
            "{} criterion {name} [{:.3}s] {detail}",
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64()
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
