//! Config-driven workflows behind the `anisovisc` binary.
//!
//! Each command reads an [`ExperimentConfig`], writes its artifacts into the
//! output directory and returns an [`Outcome`]. The binary maps a passing
//! outcome to exit code 0, a failing one (or a solver failure) to 1, and
//! configuration or I/O errors to 2; see [`exit_code`].

pub mod config;
pub mod plot;
pub mod snapshot;

use std::fmt::Write as _;
use std::path::PathBuf;

use rayon::prelude::*;

use crate::diagnostics::{cone_l1_error, rate_fit};
use crate::entropy::{build_test_function, entropy_residual};
use crate::error::{Error, Result};
use crate::flux::lipschitz_bound;
use crate::grid::Field;
use crate::reference::{reference_field, InitialData};
use crate::solver::{advance, cfl_dt, step_schedule, SolveResult, RANGE_WIDENING};

pub use config::{ConeSpeed, EntropySource, ExperimentConfig, TestFunctionParams};
pub use snapshot::{format_snapshot, parse_snapshot, read_snapshot, write_snapshot};

pub const MASS_DRIFT_TOL: f64 = 1e-10;
pub const TV_GROWTH_TOL: f64 = 1e-8;
const MAX_PRINCIPLE_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Overrides `output.dir`.
    pub out: Option<PathBuf>,
    pub plot: bool,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub passed: bool,
    /// Human-readable report, one item per line.
    pub report: String,
    pub files: Vec<PathBuf>,
}

/// Process exit code for an error: 2 for configuration and I/O problems, 1 otherwise.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config { .. }
        | Error::Io(_)
        | Error::Snapshot(_)
        | Error::InvalidGrid(_)
        | Error::InvalidParameter(_) => 2,
        _ => 1,
    }
}

struct Output {
    dir: PathBuf,
    files: Vec<PathBuf>,
}

impl Output {
    fn new(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<Self> {
        let dir = opts.out.clone().unwrap_or_else(|| cfg.output_dir.clone());
        std::fs::create_dir_all(&dir)?;
        Ok(Self { dir, files: Vec::new() })
    }

    fn write(&mut self, name: &str, contents: &str) -> Result<()> {
        let path = self.dir.join(name);
        std::fs::write(&path, contents)?;
        self.files.push(path);
        Ok(())
    }
}

pub fn step_log_csv(result: &SolveResult) -> String {
    let mut out = String::from("step,t,dt,mass,boundary_inflow,tv,min,max,dudt_l1\n");
    for r in &result.step_log {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.step, r.t, r.dt, r.mass, r.boundary_inflow, r.tv, r.min, r.max, r.dudt_l1
        )
        .unwrap();
    }
    out
}

fn run(cfg: &ExperimentConfig, epsilon: f64) -> Result<SolveResult> {
    let u0 = cfg.initial.project(&cfg.grid)?;
    let solver = crate::solver::SolverConfig { epsilon, ..cfg.solver };
    advance(&u0, &cfg.flux, &solver, &cfg.time)
}

/// Single viscous run: final snapshot and per-step log.
pub fn cmd_solve(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<Outcome> {
    let mut out = Output::new(cfg, opts)?;
    let result = run(cfg, cfg.solver.epsilon)?;
    out.write("field.txt", &format_snapshot(&result.final_field))?;
    out.write("step_log.csv", &step_log_csv(&result))?;
    if opts.plot {
        out.write("field.svg", &plot::field_heatmap(&result.final_field))?;
    }
    let f = &result.final_field;
    let report = format!(
        "epsilon={} steps={} t={} min={} max={} mass_drift={:e} tv_growth={:e}\n",
        cfg.solver.epsilon,
        result.step_log.len(),
        f.time,
        f.min(),
        f.max(),
        result.max_mass_drift(),
        result.max_tv_growth()
    );
    Ok(Outcome {
        passed: true,
        report,
        files: out.files,
    })
}

/// Vanishing-viscosity sweep: cone-restricted L1 error against the reference
/// for each epsilon, then a log-log rate fit.
pub fn cmd_sweep(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<Outcome> {
    let mut eps = cfg.epsilons.clone();
    eps.sort_by(|a, b| b.total_cmp(a));
    eps.dedup();
    if eps.len() < 3 {
        return Err(Error::config("sweep.epsilons", "need at least 3 distinct values"));
    }
    let cone = cfg.cone()?;
    let reference = cfg.reference()?;
    let mut out = Output::new(cfg, opts)?;

    let t_end = cfg.time.t_end;
    let v = reference_field(&reference, &cfg.grid, t_end)?;
    let pairs: Vec<(f64, f64)> = eps
        .par_iter()
        .map(|&e| {
            let result = run(cfg, e)?;
            Ok((e, cone_l1_error(&result.final_field, &v, &cone, t_end)?))
        })
        .collect::<Result<_>>()?;
    let fit = rate_fit(&pairs)?;

    let mut summary = fit.summary_line(cfg.sweep_threshold);
    write!(summary, " reference={}", reference.kind()).unwrap();
    if reference.kind() != "discrete_eps0" {
        summary.push_str(" note=errors_include_eps0_scheme_error_floor");
    }
    let r2_ok = cfg.sweep_min_r2.is_none_or(|m| fit.r_squared >= m);
    if let Some(m) = cfg.sweep_min_r2 {
        write!(summary, " min_r2={m} r2_result={}", if r2_ok { "pass" } else { "fail" }).unwrap();
    }
    summary.push('\n');

    out.write("rate.csv", &fit.to_csv())?;
    out.write("summary.txt", &summary)?;
    if opts.plot {
        out.write("rate.svg", &plot::rate_plot(&fit))?;
    }
    Ok(Outcome {
        passed: fit.passes(cfg.sweep_threshold) && r2_ok,
        report: fit.to_csv() + &summary,
        files: out.files,
    })
}

/// Frames of a jump between the Riemann states travelling at the
/// Rankine–Hugoniot speed, sampled on the solver's time schedule.
pub fn planted_frames(cfg: &ExperimentConfig) -> Result<Vec<Field>> {
    let InitialData::Riemann { u_l, u_r } = cfg.initial else {
        return Err(Error::config(
            "entropy.source",
            "planted frames need riemann initial data",
        ));
    };
    let speed = if u_l == u_r {
        cfg.flux.deriv(u_l)
    } else {
        (cfg.flux.eval(u_l) - cfg.flux.eval(u_r)) / (u_l - u_r)
    };
    let lo = u_l.min(u_r) - RANGE_WIDENING;
    let hi = u_l.max(u_r) + RANGE_WIDENING;
    let dt = cfl_dt(&cfg.grid, lipschitz_bound(&cfg.flux, lo, hi)?, cfg.time.cfl);
    let schedule = step_schedule(cfg.time.t_end, dt);

    let g = cfg.grid;
    let frame = |t: f64| {
        let values = (0..g.len())
            .map(|k| {
                let y0 = g.y_min + (k / g.nx) as f64 * g.dy;
                let below = ((speed * t - y0) / g.dy).clamp(0.0, 1.0);
                below * u_l + (1.0 - below) * u_r
            })
            .collect();
        Field::new(g, values, t)
    };
    let mut frames = vec![frame(0.0)?];
    let mut t = 0.0;
    for (step, dt) in schedule.iter().enumerate() {
        let last = step + 1 == schedule.len();
        t = if last { cfg.time.t_end } else { t + dt };
        if last || (step + 1) % cfg.solver.record_every == 0 {
            frames.push(frame(t)?);
        }
    }
    Ok(frames)
}

/// Discrete entropy residuals for every (test function, psi) pair. Passes when
/// each is at least `-tol_factor * |u|_inf * support volume`.
pub fn cmd_entropy_check(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<Outcome> {
    if cfg.psi.is_empty() {
        return Err(Error::config("entropy.psi", "need at least one profile"));
    }
    if cfg.tests.is_empty() {
        return Err(Error::config("entropy.tests", "need at least one test function"));
    }
    let cone = cfg.cone()?;
    let phis = cfg
        .tests
        .iter()
        .map(|p| {
            let (cutoff, window, ramp) = p.parts(cfg.time.t_end)?;
            build_test_function(cutoff, window, cone, ramp, &cfg.grid)
                .map_err(|e| Error::config("entropy.tests", format!("{}: {e}", p.label())))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = Output::new(cfg, opts)?;

    let frames = match cfg.entropy_source {
        EntropySource::Solve => run(cfg, cfg.solver.epsilon)?.history,
        EntropySource::Planted => planted_frames(cfg)?,
    };
    let sup = frames.iter().map(Field::max_abs).fold(0.0, f64::max);

    let mut csv = String::from("test,psi,residual,support_volume,tolerance,result\n");
    let mut passed = true;
    for (params, phi) in cfg.tests.iter().zip(&phis) {
        let volume = phi.support_volume();
        let tol = cfg.entropy_tol_factor * sup * volume;
        for psi in &cfg.psi {
            let r = entropy_residual(&frames, &cfg.flux, psi, phi)?;
            let ok = r >= -tol;
            passed &= ok;
            writeln!(
                csv,
                "{},{},{r},{volume},{tol},{}",
                params.label().replace(',', " "),
                psi.label().replace(',', " "),
                if ok { "pass" } else { "fail" }
            )
            .unwrap();
        }
    }
    out.write("entropy.csv", &csv)?;
    Ok(Outcome {
        passed,
        report: csv,
        files: out.files,
    })
}

/// Conservation, TV and maximum-principle checks on a single run.
pub fn cmd_properties(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<Outcome> {
    let mut out = Output::new(cfg, opts)?;
    let result = run(cfg, cfg.solver.epsilon)?;
    let (drift_step, drift) = result.worst_mass_drift();
    let (tv_step, tv) = result.worst_tv_growth();
    let slack = MAX_PRINCIPLE_SLACK * result.initial_min.abs().max(result.initial_max.abs()).max(1.0);
    let (bound_step, excess) = result
        .step_log
        .iter()
        .map(|r| {
            (
                r.step,
                (result.initial_min - r.min).max(r.max - result.initial_max).max(0.0),
            )
        })
        .fold((0, 0.0), |acc, (k, v)| if v > acc.1 { (k, v) } else { acc });

    let checks = [
        ("mass_drift", drift_step, drift, MASS_DRIFT_TOL),
        ("tv_growth", tv_step, tv, TV_GROWTH_TOL),
        ("max_principle_excess", bound_step, excess, slack),
    ];
    let mut report = String::new();
    let mut passed = true;
    for (name, step, value, tol) in checks {
        let ok = value <= tol;
        passed &= ok;
        writeln!(
            report,
            "{name}={value:e} tol={tol:e} worst_step={step} result={}",
            if ok { "pass" } else { "fail" }
        )
        .unwrap();
    }
    writeln!(report, "max_dudt_l1={}", result.max_dudt_l1()).unwrap();

    out.write("properties.txt", &report)?;
    out.write("step_log.csv", &step_log_csv(&result))?;
    Ok(Outcome {
        passed,
        report,
        files: out.files,
    })
}
