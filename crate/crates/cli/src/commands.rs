use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use frozen_planet::certify::{self, Level};
use frozen_planet::intersect::{self, IntersectionClass};
use frozen_planet::orbit::{self, Trajectory};
use frozen_planet::specialfn::Constants;
use frozen_planet::{solver, NucleusCharge, OrbitSolution};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::Settings;
use crate::manifest::{sidecar_path, RunManifest};
use crate::{CliError, Format, VerifyLevel};

const THRESHOLD_FORMULA: &str = "varpi = Gamma(1/4)^2/sqrt(8 pi); \
gamma* = (3 pi - varpi^2)/varpi^2; mu* = (gamma*+1)^2/gamma*^2 = (3 pi/(3 pi - varpi^2))^2";

fn charge(mu: f64) -> Result<NucleusCharge, CliError> {
    if mu.is_nan() || mu <= 1.0 {
        return Err(CliError::Usage(format!(
            "nucleus charge must exceed 1 (got {mu}): for mu <= 1 the outer electron \
             is not bound, it escapes to infinity and the atom ionizes"
        )));
    }
    Ok(NucleusCharge::new(mu)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Residuals {
    /// |F(gamma, qbar1) - 2|
    pub fixpoint: f64,
    /// (time mean of q1 - qbar1)/qbar1
    pub mean: f64,
    pub energy: f64,
    /// max |q1(t) - q1(1 - t)|
    pub symmetry: f64,
}

impl Residuals {
    pub fn of(sol: &OrbitSolution, traj: &Trajectory) -> Self {
        Residuals {
            fixpoint: sol.fixpoint_residual,
            mean: orbit::mean_residual(traj) / sol.qbar1,
            energy: orbit::energy_residual(traj),
            symmetry: traj.symmetry_error(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryOut {
    /// Grid intervals; there are `intervals + 1` points at t = j/intervals.
    pub intervals: usize,
    pub q2: f64,
    pub t: Vec<f64>,
    pub q1: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    pub mu: f64,
    pub gamma: f64,
    pub qbar1: f64,
    pub qbar2: f64,
    pub kappa: f64,
    pub q1max: f64,
    pub q1antimax: f64,
    pub eta: f64,
    pub class: IntersectionClass,
    pub residuals: Residuals,
    pub trajectory: TrajectoryOut,
}

pub fn solve_report(mu: f64, settings: &Settings) -> Result<SolveReport, CliError> {
    let sol = solver::solve_orbit(charge(mu)?, settings.tol, &settings.quad)?;
    let traj = orbit::reconstruct(&sol, settings.samples, &settings.quad)?;
    Ok(SolveReport {
        mu: sol.mu,
        gamma: sol.gamma,
        qbar1: sol.qbar1,
        qbar2: sol.qbar2,
        kappa: sol.kappa,
        q1max: sol.q1max,
        q1antimax: sol.q1antimax,
        eta: sol.eta,
        class: intersect::classify_solution(&sol, settings.touch_tol),
        residuals: Residuals::of(&sol, &traj),
        trajectory: TrajectoryOut {
            intervals: traj.samples.len() - 1,
            q2: traj.q2_const,
            t: traj.samples.iter().map(|s| s.t).collect(),
            q1: traj.samples.iter().map(|s| s.q1).collect(),
        },
    })
}

#[derive(Serialize)]
struct Embedded<'a, T: Serialize> {
    #[serde(flatten)]
    body: &'a T,
    manifest: &'a RunManifest,
}

fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w)
}

fn write_json<T: Serialize>(w: &mut dyn Write, value: &T) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *w, value)?;
    writeln!(w)?;
    Ok(())
}

/// Sends a CSV payload to `out` (with a manifest sidecar) or to stdout
/// (with the manifest on stderr).
fn emit_csv(
    out: Option<&Path>,
    manifest: &RunManifest,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
    body: impl FnOnce(&mut dyn Write) -> Result<(), CliError>,
) -> Result<(), CliError> {
    match out {
        Some(path) => {
            let mut f = BufWriter::new(File::create(path)?);
            body(&mut f)?;
            f.flush()?;
            let mut side = BufWriter::new(File::create(sidecar_path(path))?);
            write_json(&mut side, manifest)?;
            side.flush()?;
        }
        None => {
            body(stdout)?;
            serde_json::to_writer(&mut *stderr, manifest)?;
            writeln!(stderr)?;
        }
    }
    Ok(())
}

pub fn solve(
    mu: f64,
    settings: &Settings,
    out: Option<&Path>,
    format: Format,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    let started = Instant::now();
    let report = solve_report(mu, settings)?;
    let mut manifest = RunManifest::new("solve", settings.quad)
        .param("mu", mu)
        .param("tol", settings.tol)
        .param("samples", settings.samples)
        .param("touch_tol", settings.touch_tol)
        .param(
            "format",
            match format {
                Format::Json => "json",
                Format::Csv => "csv",
            },
        );
    manifest.stamp(started);

    match format {
        Format::Json => {
            let doc = Embedded {
                body: &report,
                manifest: &manifest,
            };
            match out {
                Some(path) => {
                    let mut f = BufWriter::new(File::create(path)?);
                    write_json(&mut f, &doc)?;
                    f.flush()?;
                }
                None => write_json(stdout, &doc)?,
            }
        }
        Format::Csv => emit_csv(out, &manifest, stdout, stderr, |w| {
            write_trajectory_csv(w, &report.trajectory)
        })?,
    }
    Ok(())
}

#[derive(Serialize)]
struct TrajectoryRow {
    t: f64,
    q1: f64,
    q2: f64,
}

pub fn write_trajectory_csv(w: &mut dyn Write, traj: &TrajectoryOut) -> Result<(), CliError> {
    let mut wtr = csv_writer(w);
    for (&t, &q1) in traj.t.iter().zip(&traj.q1) {
        wtr.serialize(TrajectoryRow { t, q1, q2: traj.q2 })?;
    }
    wtr.flush()?;
    Ok(())
}

/// One row of `scan` output; field order is the CSV column order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanRow {
    pub mu: f64,
    pub gamma: f64,
    pub qbar1: f64,
    pub qbar2: f64,
    pub kappa: f64,
    pub q1max: f64,
    pub q1antimax: f64,
    pub eta: f64,
    pub class: IntersectionClass,
}

pub const SCAN_HEADER: &str = "mu,gamma,qbar1,qbar2,kappa,q1max,q1antimax,eta,class";

/// `steps` evenly spaced charges from `mu_min` to `mu_max`, both included.
pub fn scan_grid(mu_min: f64, mu_max: f64, steps: usize) -> Result<Vec<f64>, CliError> {
    if !(mu_min.is_finite() && mu_max.is_finite() && 1.0 < mu_min && mu_min < mu_max) {
        return Err(CliError::Usage(format!(
            "scan range must satisfy 1 < mu_min < mu_max (got {mu_min}, {mu_max})"
        )));
    }
    if steps < 2 {
        return Err(CliError::Usage(format!(
            "scan needs at least 2 steps (got {steps})"
        )));
    }
    let last = (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| match i {
            0 => mu_min,
            i if i == steps - 1 => mu_max,
            i => mu_min + (mu_max - mu_min) * i as f64 / last,
        })
        .collect())
}

/// Solves every charge of the grid, concurrently, keeping grid order.
pub fn scan_rows(grid: &[f64], settings: &Settings) -> Result<Vec<ScanRow>, CliError> {
    grid.par_iter()
        .map(|&mu| {
            let sol = solver::solve_orbit(charge(mu)?, settings.tol, &settings.quad)?;
            Ok(ScanRow {
                mu: sol.mu,
                gamma: sol.gamma,
                qbar1: sol.qbar1,
                qbar2: sol.qbar2,
                kappa: sol.kappa,
                q1max: sol.q1max,
                q1antimax: sol.q1antimax,
                eta: sol.eta,
                class: intersect::classify_solution(&sol, settings.touch_tol),
            })
        })
        .collect()
}

pub fn write_scan_csv(w: &mut dyn Write, rows: &[ScanRow]) -> Result<(), CliError> {
    let mut wtr = csv_writer(w);
    for r in rows {
        wtr.serialize(r)?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn scan(
    mu_min: f64,
    mu_max: f64,
    steps: usize,
    settings: &Settings,
    out: Option<&Path>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    let started = Instant::now();
    let grid = scan_grid(mu_min, mu_max, steps)?;
    let rows = scan_rows(&grid, settings)?;
    let mut manifest = RunManifest::new("scan", settings.quad)
        .param("mu_min", mu_min)
        .param("mu_max", mu_max)
        .param("steps", steps)
        .param("tol", settings.tol)
        .param("touch_tol", settings.touch_tol);
    manifest.stamp(started);
    emit_csv(out, &manifest, stdout, stderr, |w| write_scan_csv(w, &rows))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdReport {
    pub varpi: f64,
    /// |ϖ by quadrature − ϖ by Gamma| / ϖ
    pub varpi_route_gap: f64,
    pub gamma_star: f64,
    pub mu_star: f64,
    /// μ* from the direct formula, for comparison with `mu_star`.
    pub mu_star_direct: f64,
    pub formula: &'static str,
}

pub fn threshold_report(settings: &Settings) -> Result<ThresholdReport, CliError> {
    let c = Constants::compute(&settings.quad)?;
    Ok(ThresholdReport {
        varpi: c.varpi,
        varpi_route_gap: c.route_gap,
        gamma_star: intersect::critical_gamma(),
        mu_star: intersect::critical_mu(),
        mu_star_direct: intersect::critical_mu_closed_form(),
        formula: THRESHOLD_FORMULA,
    })
}

pub fn threshold(settings: &Settings, stdout: &mut dyn Write) -> Result<(), CliError> {
    let started = Instant::now();
    let report = threshold_report(settings)?;
    let mut manifest = RunManifest::new("threshold", settings.quad);
    manifest.stamp(started);
    write_json(
        stdout,
        &Embedded {
            body: &report,
            manifest: &manifest,
        },
    )
}

pub fn verify(
    level: VerifyLevel,
    settings: &Settings,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    let level = match level {
        VerifyLevel::Fast => Level::Fast,
        VerifyLevel::Full => Level::Full,
    };
    let certs = certify::run(level, &settings.quad);
    let width = certs.iter().map(|c| c.name.len()).max().unwrap_or(0);
    for c in &certs {
        let mark = if c.passed { "PASS" } else { "FAIL" };
        writeln!(stdout, "{mark}  {:width$}  {}", c.name, c.detail)?;
    }
    let failed = certs.iter().filter(|c| !c.passed).count();
    writeln!(stdout, "{} passed, {failed} failed", certs.len() - failed)?;
    if failed > 0 {
        return Err(CliError::Verification {
            failed,
            total: certs.len(),
        });
    }
    Ok(())
}
