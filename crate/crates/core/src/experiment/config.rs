//! Plain-text `section.key = value` experiment configuration.
//!
//! Lines starting with `#` are comments. Unknown or duplicate keys are errors.
//!
//! ```text
//! grid.x_min = -1
//! grid.x_max = 1
//! grid.y_min = -4
//! grid.y_max = 4
//! grid.nx = 64
//! grid.ny = 1024
//! flux = burgers
//! initial.kind = riemann
//! initial.u_l = 1
//! initial.u_r = 0
//! time.t_end = 1
//! solver.epsilon = 0.01
//! cone.L = 3
//! cone.M = auto
//! sweep.epsilons = 0.04, 0.02, 0.01, 0.005
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::entropy::{ConeSpec, Cutoff, PsiProfile, Ramp, TimeWindow};
use crate::error::{Error, Result};
use crate::flux::{lipschitz_bound, FluxModel};
use crate::grid::{GridSpec, TimeSpec};
use crate::reference::{InitialData, ReferenceSpec, DEFAULT_REFINE};
use crate::solver::{Boundary, SolverConfig, Splitting, DEFAULT_CFL};

pub const DEFAULT_SWEEP_THRESHOLD: f64 = 0.45;
pub const DEFAULT_ENTROPY_TOL_FACTOR: f64 = 1e-3;

const KNOWN_KEYS: &[&str] = &[
    "grid.x_min",
    "grid.x_max",
    "grid.y_min",
    "grid.y_max",
    "grid.nx",
    "grid.ny",
    "flux",
    "initial.kind",
    "initial.c",
    "initial.u_l",
    "initial.u_r",
    "initial.amplitude",
    "initial.sigma",
    "initial.step_width",
    "initial.sigma_x",
    "initial.sigma_y",
    "time.t_end",
    "time.cfl",
    "time.cfl_override",
    "solver.epsilon",
    "solver.splitting",
    "solver.boundary",
    "solver.record_every",
    "reference.kind",
    "reference.refine",
    "cone.L",
    "cone.M",
    "sweep.epsilons",
    "sweep.threshold",
    "sweep.min_r2",
    "entropy.source",
    "entropy.psi",
    "entropy.tests",
    "entropy.tol_factor",
    "output.dir",
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConeSpeed {
    Auto,
    Fixed(f64),
}

/// Parameters of one entropy test function; the cone comes from the `cone.*` keys.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestFunctionParams {
    pub beta: f64,
    pub nu: f64,
    pub tau: f64,
    pub alpha: f64,
    pub alpha0: f64,
}

impl TestFunctionParams {
    pub fn parse(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for part in text.split(',').filter(|s| !s.trim().is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::config("entropy.tests", format!("expected key=value in `{part}`")))?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| Error::config("entropy.tests", format!("non-numeric value in `{part}`")))?;
            map.insert(k.trim().to_string(), v);
        }
        let get = |k: &str| {
            map.get(k)
                .copied()
                .ok_or_else(|| Error::config("entropy.tests", format!("missing `{k}` in `{text}`")))
        };
        Ok(Self {
            beta: get("beta")?,
            nu: get("nu")?,
            tau: get("tau")?,
            alpha: get("alpha")?,
            alpha0: get("alpha0")?,
        })
    }

    pub fn label(&self) -> String {
        format!(
            "beta={},nu={},tau={},alpha={},alpha0={}",
            self.beta, self.nu, self.tau, self.alpha, self.alpha0
        )
    }

    pub fn parts(&self, t_end: f64) -> Result<(Cutoff, TimeWindow, Ramp)> {
        Ok((
            Cutoff::new(self.beta)?,
            TimeWindow::new(self.nu, self.tau, self.alpha0, t_end)?,
            Ramp::new(self.alpha)?,
        ))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntropySource {
    Solve,
    /// Piecewise-constant jump between the Riemann states moving at the Rankine–Hugoniot speed.
    Planted,
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub grid: GridSpec,
    pub flux: FluxModel,
    pub initial: InitialData,
    pub time: TimeSpec,
    pub solver: SolverConfig,
    pub reference_kind: String,
    pub reference_refine: usize,
    pub cone_half_width: Option<f64>,
    pub cone_speed: ConeSpeed,
    pub epsilons: Vec<f64>,
    pub sweep_threshold: f64,
    pub sweep_min_r2: Option<f64>,
    pub entropy_source: EntropySource,
    pub psi: Vec<PsiProfile>,
    pub tests: Vec<TestFunctionParams>,
    pub entropy_tol_factor: f64,
    pub output_dir: PathBuf,
}

struct Raw {
    entries: BTreeMap<String, String>,
}

impl Raw {
    fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::config(line, format!("line {}: expected `key = value`", lineno + 1)))?;
            let key = key.trim().to_string();
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(Error::config(key, "unknown key"));
            }
            if entries.insert(key.clone(), value.trim().to_string()).is_some() {
                return Err(Error::config(key, "duplicate key"));
            }
        }
        Ok(Self { entries })
    }

    fn str(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    fn opt<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.str(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| Error::config(key, format!("cannot parse `{v}`"))),
        }
    }

    fn req<T: FromStr>(&self, key: &str) -> Result<T> {
        self.opt(key)?.ok_or_else(|| Error::config(key, "missing required key"))
    }

    fn or<T: FromStr>(&self, key: &str, default: T) -> Result<T> {
        Ok(self.opt(key)?.unwrap_or(default))
    }
}

fn at_key<T>(key: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Config { .. } => e,
        other => Error::config(key, other.to_string()),
    })
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let raw = Raw::parse(text)?;

        let grid = at_key(
            "grid",
            GridSpec::new(
                raw.req("grid.x_min")?,
                raw.req("grid.x_max")?,
                raw.req("grid.y_min")?,
                raw.req("grid.y_max")?,
                raw.req("grid.nx")?,
                raw.req("grid.ny")?,
            ),
        )?;
        let flux = at_key("flux", FluxModel::from_label(raw.str("flux").unwrap_or("burgers")))?;

        let kind = raw.str("initial.kind").unwrap_or("riemann");
        let initial = match kind {
            "constant" => InitialData::Constant {
                c: raw.req("initial.c")?,
            },
            "riemann" => InitialData::Riemann {
                u_l: raw.req("initial.u_l")?,
                u_r: raw.req("initial.u_r")?,
            },
            "gaussian_x_times_step_y" => InitialData::GaussianXTimesStepY {
                amplitude: raw.or("initial.amplitude", 1.0)?,
                sigma: raw.req("initial.sigma")?,
                u_l: raw.req("initial.u_l")?,
                u_r: raw.req("initial.u_r")?,
                width: raw.or("initial.step_width", 0.0)?,
            },
            "gaussian_xy" => InitialData::GaussianXY {
                amplitude: raw.or("initial.amplitude", 1.0)?,
                sigma_x: raw.req("initial.sigma_x")?,
                sigma_y: raw.req("initial.sigma_y")?,
            },
            other => return Err(Error::config("initial.kind", format!("unknown initial data `{other}`"))),
        };

        let t_end: f64 = raw.req("time.t_end")?;
        let time = match raw.opt::<f64>("time.cfl_override")? {
            Some(cfl) => at_key("time.cfl_override", TimeSpec::with_cfl_override(t_end, cfl))?,
            None => at_key("time.cfl", TimeSpec::new(t_end, raw.or("time.cfl", DEFAULT_CFL)?))?,
        };

        let splitting = match raw.str("solver.splitting").unwrap_or("lie") {
            "lie" => Splitting::Lie,
            "strang" => Splitting::Strang,
            other => {
                return Err(Error::config(
                    "solver.splitting",
                    format!("expected lie|strang, got `{other}`"),
                ))
            }
        };
        let boundary = match raw.str("solver.boundary").unwrap_or("zero_flux") {
            "zero_flux" => Boundary::ZeroFlux,
            "periodic" => Boundary::Periodic,
            other => {
                return Err(Error::config(
                    "solver.boundary",
                    format!("expected periodic|zero_flux, got `{other}`"),
                ))
            }
        };
        let solver = SolverConfig {
            epsilon: raw.or("solver.epsilon", 0.0)?,
            splitting,
            boundary,
            record_every: raw.or("solver.record_every", 1)?,
        };
        at_key("solver", solver.validate())?;

        let reference_kind = raw.str("reference.kind").unwrap_or("discrete_eps0").to_string();
        if !["discrete_eps0", "linear_gaussian", "riemann_1d"].contains(&reference_kind.as_str()) {
            return Err(Error::config(
                "reference.kind",
                format!("unknown reference `{reference_kind}`"),
            ));
        }
        let reference_refine: usize = raw.or("reference.refine", DEFAULT_REFINE)?;
        if reference_refine == 0 {
            return Err(Error::config("reference.refine", "must be >= 1"));
        }

        let cone_speed = match raw.str("cone.M") {
            None | Some("auto") => ConeSpeed::Auto,
            Some(v) => ConeSpeed::Fixed(
                v.parse()
                    .map_err(|_| Error::config("cone.M", format!("expected auto or a number, got `{v}`")))?,
            ),
        };

        let epsilons = match raw.str("sweep.epsilons") {
            None => Vec::new(),
            Some(list) => list
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::config("sweep.epsilons", format!("cannot parse `{s}`")))
                })
                .collect::<Result<_>>()?,
        };
        if epsilons.iter().any(|&e| !(e > 0.0)) {
            return Err(Error::config("sweep.epsilons", "values must be positive"));
        }

        let entropy_source = match raw.str("entropy.source").unwrap_or("solve") {
            "solve" => EntropySource::Solve,
            "planted" => EntropySource::Planted,
            other => {
                return Err(Error::config(
                    "entropy.source",
                    format!("expected solve|planted, got `{other}`"),
                ))
            }
        };
        let psi = match raw.str("entropy.psi") {
            None => Vec::new(),
            Some(list) => list
                .split(';')
                .filter(|s| !s.trim().is_empty())
                .map(|s| at_key("entropy.psi", PsiProfile::from_label(s)))
                .collect::<Result<_>>()?,
        };
        let tests = match raw.str("entropy.tests") {
            None => Vec::new(),
            Some(list) => list
                .split(';')
                .filter(|s| !s.trim().is_empty())
                .map(TestFunctionParams::parse)
                .collect::<Result<_>>()?,
        };

        Ok(Self {
            grid,
            flux,
            initial,
            time,
            solver,
            reference_kind,
            reference_refine,
            cone_half_width: raw.opt("cone.L")?,
            cone_speed,
            epsilons,
            sweep_threshold: raw.or("sweep.threshold", DEFAULT_SWEEP_THRESHOLD)?,
            sweep_min_r2: raw.opt("sweep.min_r2")?,
            entropy_source,
            psi,
            tests,
            entropy_tol_factor: raw.or("entropy.tol_factor", DEFAULT_ENTROPY_TOL_FACTOR)?,
            output_dir: PathBuf::from(raw.str("output.dir").unwrap_or("out")),
        })
    }

    /// Sup norm of the projected initial data.
    pub fn initial_sup(&self) -> Result<f64> {
        Ok(self.initial.project(&self.grid)?.max_abs())
    }

    /// Cone from `cone.L` and `cone.M`; `auto` takes a bound strictly above max |f'| on
    /// `[-|u0|_inf, |u0|_inf]` and then requires `L > M T`.
    pub fn cone(&self) -> Result<ConeSpec> {
        let l = self
            .cone_half_width
            .ok_or_else(|| Error::config("cone.L", "missing required key"))?;
        let m = match self.cone_speed {
            ConeSpeed::Fixed(m) => m,
            ConeSpeed::Auto => {
                let sup = self.initial_sup()?;
                lipschitz_bound(&self.flux, -sup, sup)?
            }
        };
        if !(l > m * self.time.t_end) {
            return Err(Error::config(
                "cone.L",
                format!("need L > M T, got L={l}, M={m}, T={}", self.time.t_end),
            ));
        }
        at_key("cone", ConeSpec::new(l, m))
    }

    pub fn reference(&self) -> Result<ReferenceSpec> {
        match self.reference_kind.as_str() {
            "discrete_eps0" => Ok(ReferenceSpec::DiscreteEps0 {
                initial: self.initial,
                model: self.flux.clone(),
                config: self.solver,
                cfl: self.time.cfl,
                refine: self.reference_refine,
            }),
            "linear_gaussian" => {
                let FluxModel::Linear { a } = self.flux else {
                    return Err(Error::config("reference.kind", "linear_gaussian needs a linear flux"));
                };
                self.initial
                    .linear_reference(a)
                    .ok_or_else(|| Error::config("reference.kind", "linear_gaussian needs Gaussian initial data"))
            }
            "riemann_1d" => match (&self.flux, self.initial) {
                (FluxModel::Burgers, InitialData::Riemann { u_l, u_r }) => Ok(ReferenceSpec::Riemann1d { u_l, u_r }),
                _ => Err(Error::config(
                    "reference.kind",
                    "riemann_1d needs burgers flux and riemann data",
                )),
            },
            other => Err(Error::config("reference.kind", format!("unknown reference `{other}`"))),
        }
    }
}
