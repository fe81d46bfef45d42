//! Operator-splitting solver for `u_t + f(u)_y = u_xx + eps u_yy`.
//!
//! Each step composes an explicit Godunov update in y with backward-Euler
//! diffusion solves along x (unit coefficient) and along y (coefficient eps).
//! `eps = 0` gives the scheme used as the discrete entropy-solution reference.

use rayon::prelude::*;

use crate::diagnostics::{mass, total_variation};
use crate::error::{Error, Result};
use crate::flux::{lipschitz_bound, numerical_flux, FluxModel};
use crate::grid::{Field, GridSpec, TimeSpec};
use crate::tridiag;

/// Default Courant factor for the convection sub-step.
pub const DEFAULT_CFL: f64 = 0.45;
/// Widening of the initial data range before computing the wave-speed bound.
pub const RANGE_WIDENING: f64 = 1e-6;
const MAX_PRINCIPLE_SLACK: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Splitting {
    Lie,
    Strang,
}

/// Boundary treatment on both axes.
///
/// `ZeroFlux` reflects ghost cells for diffusion (homogeneous Neumann) and
/// copies the edge cell for convection, so the edge flux is `f(u_edge)`.
/// Constant states pass through unchanged; the flux through the y-edges is
/// accumulated in [`StepRecord::boundary_inflow`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Periodic,
    ZeroFlux,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub epsilon: f64,
    pub splitting: Splitting,
    pub boundary: Boundary,
    /// Store a history frame every this many steps (the final frame is always kept).
    pub record_every: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            epsilon: 0.0,
            splitting: Splitting::Lie,
            boundary: Boundary::ZeroFlux,
            record_every: 1,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon >= 0.0 && self.epsilon.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "epsilon must be >= 0, got {}",
                self.epsilon
            )));
        }
        if self.record_every == 0 {
            return Err(Error::InvalidParameter("record_every must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord {
    pub step: usize,
    pub t: f64,
    pub dt: f64,
    pub mass: f64,
    /// Net mass that entered through the y-edges since t = 0.
    pub boundary_inflow: f64,
    pub tv: f64,
    pub min: f64,
    pub max: f64,
    /// dx dy sum |u^{n+1} - u^n| / dt
    pub dudt_l1: f64,
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub final_field: Field,
    pub history: Vec<Field>,
    pub step_log: Vec<StepRecord>,
    pub initial_mass: f64,
    pub initial_tv: f64,
    pub initial_min: f64,
    pub initial_max: f64,
    pub boundary: Boundary,
    /// Wave-speed bound used for the time step.
    pub max_speed: f64,
}

impl SolveResult {
    /// Largest |mass(t) - inflow(t) - mass(0)| relative to the initial L1 norm.
    pub fn max_mass_drift(&self) -> f64 {
        self.worst_mass_drift().1
    }

    /// Step index and value of the largest relative mass drift.
    pub fn worst_mass_drift(&self) -> (usize, f64) {
        let l1: f64 = {
            let g = &self.history[0].grid;
            self.history[0].values.iter().map(|v| v.abs()).sum::<f64>() * g.dx * g.dy
        };
        let scale = if l1 > 0.0 { l1 } else { 1.0 };
        worst(
            self.step_log
                .iter()
                .map(|r| (r.step, (r.mass - r.boundary_inflow - self.initial_mass).abs() / scale)),
        )
    }

    /// Largest per-step TV increase relative to the initial TV.
    pub fn max_tv_growth(&self) -> f64 {
        self.worst_tv_growth().1
    }

    /// Step index and value of the largest relative TV increase.
    pub fn worst_tv_growth(&self) -> (usize, f64) {
        let scale = if self.initial_tv > 0.0 { self.initial_tv } else { 1.0 };
        worst(self.step_log.iter().map(|r| (r.step, (r.tv - self.initial_tv) / scale)))
    }

    pub fn max_dudt_l1(&self) -> f64 {
        self.step_log.iter().map(|r| r.dudt_l1).fold(0.0, f64::max)
    }
}

fn worst(it: impl Iterator<Item = (usize, f64)>) -> (usize, f64) {
    it.fold((0, 0.0), |acc, (k, v)| if v > acc.1 { (k, v) } else { acc })
}

pub fn cfl_dt(grid: &GridSpec, max_speed: f64, cfl: f64) -> f64 {
    cfl * grid.dy / max_speed
}

/// Step sizes covering `[0, t_end]`: full steps of `dt`, the last one shortened.
pub fn step_schedule(t_end: f64, dt: f64) -> Vec<f64> {
    let n = ((t_end / dt) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
    let mut steps = vec![dt; n];
    steps[n - 1] = t_end - dt * (n - 1) as f64;
    steps
}

fn column_convection(column: &[f64], model: &FluxModel, ratio: f64, boundary: Boundary, out: &mut [f64]) {
    let ny = column.len();
    let mut lower = match boundary {
        Boundary::Periodic => numerical_flux(model, column[ny - 1], column[0]),
        Boundary::ZeroFlux => model.eval(column[0]),
    };
    for j in 0..ny {
        let upper = if j + 1 < ny {
            numerical_flux(model, column[j], column[j + 1])
        } else {
            match boundary {
                Boundary::Periodic => numerical_flux(model, column[ny - 1], column[0]),
                Boundary::ZeroFlux => model.eval(column[ny - 1]),
            }
        };
        out[j] = column[j] - ratio * (upper - lower);
        lower = upper;
    }
}

/// One conservative Godunov update of the y-convection.
pub fn step_convection_y(field: &Field, model: &FluxModel, dt: f64, boundary: Boundary) -> Result<Field> {
    let g = field.grid;
    let ratio = dt / g.dy;
    let columns: Vec<Result<Vec<f64>>> = (0..g.nx)
        .into_par_iter()
        .map(|i| {
            let col = field.column(i);
            let lo = col.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = col.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let mut out = vec![0.0; g.ny];
            column_convection(&col, model, ratio, boundary, &mut out);
            let slack = MAX_PRINCIPLE_SLACK * lo.abs().max(hi.abs()).max(1.0);
            if let Some(&v) = out
                .iter()
                .find(|&&v| v > hi + slack || v < lo - slack || !v.is_finite())
            {
                return Err(Error::CflViolation {
                    column: i,
                    value: v,
                    lo,
                    hi,
                });
            }
            Ok(out)
        })
        .collect();
    let mut values = vec![0.0; g.len()];
    for (i, col) in columns.into_iter().enumerate() {
        for (j, v) in col?.into_iter().enumerate() {
            values[g.index(i, j)] = v;
        }
    }
    Ok(Field {
        grid: g,
        values,
        time: field.time,
    })
}

/// Net mass entering through the y-edges during one convection update.
pub fn convection_boundary_inflow(field: &Field, model: &FluxModel, dt: f64, boundary: Boundary) -> f64 {
    match boundary {
        Boundary::Periodic => 0.0,
        Boundary::ZeroFlux => {
            let g = field.grid;
            let net: f64 = (0..g.nx)
                .map(|i| model.eval(field.get(i, 0)) - model.eval(field.get(i, g.ny - 1)))
                .sum();
            dt * g.dx * net
        }
    }
}

fn implicit_line_solve(line: &mut [f64], r: f64, boundary: Boundary) {
    let n = line.len();
    let lower = vec![-r; n];
    let upper = vec![-r; n];
    let mut diag = vec![1.0 + 2.0 * r; n];
    match boundary {
        Boundary::Periodic => tridiag::solve_cyclic(&lower, &diag, &upper, line),
        Boundary::ZeroFlux => {
            diag[0] = 1.0 + r;
            diag[n - 1] = 1.0 + r;
            let mut scratch = vec![0.0; n];
            tridiag::solve(&lower, &diag, &upper, line, &mut scratch);
        }
    }
}

fn check_diffusion_args(dt: f64, coeff: f64) -> Result<()> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "diffusion dt must be positive, got {dt}"
        )));
    }
    if !(coeff >= 0.0 && coeff.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "diffusion coefficient must be >= 0, got {coeff}"
        )));
    }
    Ok(())
}

/// Backward-Euler solve of `u_t = coeff u_xx`, one tridiagonal system per row.
pub fn step_diffusion_x(field: &Field, dt: f64, coeff: f64, boundary: Boundary) -> Result<Field> {
    check_diffusion_args(dt, coeff)?;
    if coeff == 0.0 {
        return Ok(field.clone());
    }
    let g = field.grid;
    let r = coeff * dt / (g.dx * g.dx);
    let mut values = field.values.clone();
    values
        .par_chunks_mut(g.nx)
        .for_each(|row| implicit_line_solve(row, r, boundary));
    Ok(Field {
        grid: g,
        values,
        time: field.time,
    })
}

/// Backward-Euler solve of `u_t = coeff u_yy`, one tridiagonal system per column.
pub fn step_diffusion_y(field: &Field, dt: f64, coeff: f64, boundary: Boundary) -> Result<Field> {
    check_diffusion_args(dt, coeff)?;
    if coeff == 0.0 {
        return Ok(field.clone());
    }
    let g = field.grid;
    let r = coeff * dt / (g.dy * g.dy);
    let columns: Vec<Vec<f64>> = (0..g.nx)
        .into_par_iter()
        .map(|i| {
            let mut col = field.column(i);
            implicit_line_solve(&mut col, r, boundary);
            col
        })
        .collect();
    let mut values = vec![0.0; g.len()];
    for (i, col) in columns.into_iter().enumerate() {
        for (j, v) in col.into_iter().enumerate() {
            values[g.index(i, j)] = v;
        }
    }
    Ok(Field {
        grid: g,
        values,
        time: field.time,
    })
}

fn l1_difference(a: &Field, b: &Field) -> f64 {
    let g = a.grid;
    a.values.iter().zip(&b.values).map(|(x, y)| (x - y).abs()).sum::<f64>() * g.dx * g.dy
}

/// Wave-speed bound over the initial range widened by [`RANGE_WIDENING`].
pub fn initial_speed_bound(u0: &Field, model: &FluxModel) -> Result<f64> {
    lipschitz_bound(model, u0.min() - RANGE_WIDENING, u0.max() + RANGE_WIDENING)
}

/// Evolves `u0` to `time.t_end`.
pub fn advance(u0: &Field, model: &FluxModel, config: &SolverConfig, time: &TimeSpec) -> Result<SolveResult> {
    config.validate()?;
    if let Some(k) = u0.values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFiniteSample {
            i: k % u0.grid.nx,
            j: k / u0.grid.nx,
            value: u0.values[k],
        });
    }
    let g = u0.grid;
    let max_speed = initial_speed_bound(u0, model)?;
    let dt0 = cfl_dt(&g, max_speed, time.cfl);
    let schedule = step_schedule(time.t_end, dt0);

    let initial_mass = mass(u0);
    let initial_tv = total_variation(u0, config.boundary);
    let mut current = Field {
        time: 0.0,
        ..u0.clone()
    };
    let mut history = vec![current.clone()];
    let mut step_log = Vec::with_capacity(schedule.len());
    let mut inflow = 0.0;
    let mut t = 0.0;

    for (step, &dt) in schedule.iter().enumerate() {
        let wrap = |e: Error| Error::StepFailed {
            step,
            source: Box::new(e),
        };
        let mut next = match config.splitting {
            Splitting::Lie => {
                inflow += convection_boundary_inflow(&current, model, dt, config.boundary);
                step_convection_y(&current, model, dt, config.boundary).map_err(wrap)?
            }
            Splitting::Strang => {
                inflow += convection_boundary_inflow(&current, model, 0.5 * dt, config.boundary);
                step_convection_y(&current, model, 0.5 * dt, config.boundary).map_err(wrap)?
            }
        };
        next = step_diffusion_x(&next, dt, 1.0, config.boundary).map_err(wrap)?;
        next = step_diffusion_y(&next, dt, config.epsilon, config.boundary).map_err(wrap)?;
        if config.splitting == Splitting::Strang {
            inflow += convection_boundary_inflow(&next, model, 0.5 * dt, config.boundary);
            next = step_convection_y(&next, model, 0.5 * dt, config.boundary).map_err(wrap)?;
        }
        if next.values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { step });
        }

        let last = step + 1 == schedule.len();
        t = if last { time.t_end } else { t + dt };
        next.time = t;

        step_log.push(StepRecord {
            step,
            t,
            dt,
            mass: mass(&next),
            boundary_inflow: inflow,
            tv: total_variation(&next, config.boundary),
            min: next.min(),
            max: next.max(),
            dudt_l1: l1_difference(&next, &current) / dt,
        });
        if last || (step + 1) % config.record_every == 0 {
            history.push(next.clone());
        }
        current = next;
    }

    Ok(SolveResult {
        final_field: current,
        history,
        step_log,
        initial_mass,
        initial_tv,
        initial_min: u0.min(),
        initial_max: u0.max(),
        boundary: config.boundary,
        max_speed,
    })
}
