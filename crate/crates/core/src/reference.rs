//! Exact and discrete reference solutions of the degenerate problem.

use crate::error::{Error, Result};
use crate::flux::FluxModel;
use crate::grid::{project_initial, Field, GridSpec, TimeSpec};
use crate::solver::{advance, SolverConfig};

/// Default refinement of the discrete eps = 0 reference relative to the target grid.
pub const DEFAULT_REFINE: usize = 2;

/// Profile of the initial data along y.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum YProfile {
    Constant {
        c: f64,
    },
    /// `u_l` below y = 0, `u_r` above; `width > 0` smooths the jump with a tanh.
    Step {
        u_l: f64,
        u_r: f64,
        width: f64,
    },
    Gaussian {
        sigma: f64,
    },
}

impl YProfile {
    pub fn eval(&self, y: f64) -> f64 {
        match *self {
            YProfile::Constant { c } => c,
            YProfile::Step { u_l, u_r, width } => {
                if width > 0.0 {
                    u_l + (u_r - u_l) * 0.5 * (1.0 + (y / width).tanh())
                } else if y < 0.0 {
                    u_l
                } else {
                    u_r
                }
            }
            YProfile::Gaussian { sigma } => (-(y * y) / (2.0 * sigma * sigma)).exp(),
        }
    }
}

/// Built-in initial data families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialData {
    Constant {
        c: f64,
    },
    /// x-independent jump: `u_l` for y < 0, `u_r` otherwise.
    Riemann {
        u_l: f64,
        u_r: f64,
    },
    GaussianXTimesStepY {
        amplitude: f64,
        sigma: f64,
        u_l: f64,
        u_r: f64,
        width: f64,
    },
    GaussianXY {
        amplitude: f64,
        sigma_x: f64,
        sigma_y: f64,
    },
}

impl InitialData {
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        match *self {
            InitialData::Constant { c } => c,
            InitialData::Riemann { u_l, u_r } => YProfile::Step { u_l, u_r, width: 0.0 }.eval(y),
            InitialData::GaussianXTimesStepY {
                amplitude,
                sigma,
                u_l,
                u_r,
                width,
            } => exact_linear_gaussian(0.0, sigma, amplitude, &YProfile::Step { u_l, u_r, width }, x, y, 0.0),
            InitialData::GaussianXY {
                amplitude,
                sigma_x,
                sigma_y,
            } => exact_linear_gaussian(
                0.0,
                sigma_x,
                amplitude,
                &YProfile::Gaussian { sigma: sigma_y },
                x,
                y,
                0.0,
            ),
        }
    }

    pub fn project(&self, grid: &GridSpec) -> Result<Field> {
        project_initial(|x, y| self.eval(x, y), grid)
    }

    /// The separable Gaussian reference for linear flux speed `a`, when the data admits one.
    pub fn linear_reference(&self, a: f64) -> Option<ReferenceSpec> {
        match *self {
            InitialData::GaussianXTimesStepY {
                amplitude,
                sigma,
                u_l,
                u_r,
                width,
            } => Some(ReferenceSpec::LinearGaussian {
                a,
                sigma,
                amplitude,
                profile: YProfile::Step { u_l, u_r, width },
            }),
            InitialData::GaussianXY {
                amplitude,
                sigma_x,
                sigma_y,
            } => Some(ReferenceSpec::LinearGaussian {
                a,
                sigma: sigma_x,
                amplitude,
                profile: YProfile::Gaussian { sigma: sigma_y },
            }),
            _ => None,
        }
    }
}

/// Exact solution for f(u) = a u and data `A exp(-x^2 / 2 sigma^2) g(y)`:
/// heat evolution of the Gaussian in x composed with translation in y.
pub fn exact_linear_gaussian(a: f64, sigma: f64, amplitude: f64, profile: &YProfile, x: f64, y: f64, t: f64) -> f64 {
    let var = sigma * sigma + 2.0 * t;
    amplitude * sigma / var.sqrt() * (-(x * x) / (2.0 * var)).exp() * profile.eval(y - a * t)
}

/// Entropy solution of the Burgers Riemann problem with the jump at y = 0.
pub fn exact_1d_riemann_burgers(u_l: f64, u_r: f64, y: f64, t: f64) -> f64 {
    if u_l == u_r {
        return u_l;
    }
    if t <= 0.0 {
        return if y < 0.0 { u_l } else { u_r };
    }
    if u_l > u_r {
        let s = 0.5 * (u_l + u_r);
        if y < s * t {
            u_l
        } else {
            u_r
        }
    } else if y <= u_l * t {
        u_l
    } else if y < u_r * t {
        y / t
    } else {
        u_r
    }
}

#[derive(Debug, Clone)]
pub enum ReferenceSpec {
    LinearGaussian {
        a: f64,
        sigma: f64,
        amplitude: f64,
        profile: YProfile,
    },
    Riemann1d {
        u_l: f64,
        u_r: f64,
    },
    /// Same scheme with eps = 0 on a grid refined by `refine`, block-averaged back.
    DiscreteEps0 {
        initial: InitialData,
        model: FluxModel,
        config: SolverConfig,
        cfl: f64,
        refine: usize,
    },
}

impl ReferenceSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            ReferenceSpec::LinearGaussian { sigma, .. } if !(*sigma > 0.0) => Err(Error::InvalidParameter(format!(
                "reference sigma must be positive, got {sigma}"
            ))),
            ReferenceSpec::DiscreteEps0 { refine, .. } if *refine == 0 => {
                Err(Error::InvalidParameter("reference refinement must be >= 1".into()))
            }
            _ => Ok(()),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ReferenceSpec::LinearGaussian { .. } => "linear_gaussian",
            ReferenceSpec::Riemann1d { .. } => "riemann_1d",
            ReferenceSpec::DiscreteEps0 { .. } => "discrete_eps0",
        }
    }
}

/// Samples the reference solution on `grid` at time `t`.
pub fn reference_field(spec: &ReferenceSpec, grid: &GridSpec, t: f64) -> Result<Field> {
    spec.validate()?;
    if !(t >= 0.0) {
        return Err(Error::InvalidParameter(format!("reference time must be >= 0, got {t}")));
    }
    let mut field = match spec {
        ReferenceSpec::LinearGaussian {
            a,
            sigma,
            amplitude,
            profile,
        } => project_initial(
            |x, y| exact_linear_gaussian(*a, *sigma, *amplitude, profile, x, y, t),
            grid,
        )?,
        ReferenceSpec::Riemann1d { u_l, u_r } => {
            project_initial(|_, y| exact_1d_riemann_burgers(*u_l, *u_r, y, t), grid)?
        }
        ReferenceSpec::DiscreteEps0 {
            initial,
            model,
            config,
            cfl,
            refine,
        } => {
            let fine = grid.refined(*refine)?;
            let u0 = initial.project(&fine)?;
            let solved = if t == 0.0 {
                u0
            } else {
                let cfg = SolverConfig {
                    epsilon: 0.0,
                    record_every: usize::MAX,
                    ..*config
                };
                advance(&u0, model, &cfg, &TimeSpec::with_cfl_override(t, *cfl)?)?.final_field
            };
            solved.restrict(grid, *refine)?
        }
    };
    field.time = t;
    Ok(field)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::Boundary;

    #[test]
    fn linear_gaussian_initial_and_decay() {
        let p = YProfile::Step {
            u_l: 0.0,
            u_r: 1.0,
            width: 0.3,
        };
        for &(x, y) in &[(0.0f64, 0.0f64), (0.4, -0.2), (-1.1, 0.9)] {
            let direct = 2.0 * (-(x * x) / (2.0 * 0.25)).exp() * p.eval(y);
            assert!((exact_linear_gaussian(1.5, 0.5, 2.0, &p, x, y, 0.0) - direct).abs() < 1e-15);
        }
        let one = YProfile::Constant { c: 1.0 };
        let t = 0.7;
        let peak = exact_linear_gaussian(0.0, 0.5, 2.0, &one, 0.0, 0.3, t);
        assert!((peak - 2.0 * 0.5 / (0.25f64 + 2.0 * t).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn linear_gaussian_peak_matches_fine_heat_solve() {
        // Independent check: explicit FTCS heat solve of the 1-D Gaussian on a fine grid.
        let (sigma, t_end) = (0.5f64, 0.2f64);
        let (l, n) = (6.0f64, 1200usize);
        let h = 2.0 * l / n as f64;
        let dt = 0.25 * h * h;
        let mut u: Vec<f64> = (0..=n)
            .map(|k| {
                let x = -l + k as f64 * h;
                (-(x * x) / (2.0 * sigma * sigma)).exp()
            })
            .collect();
        let steps = (t_end / dt).round() as usize;
        let dt = t_end / steps as f64;
        for _ in 0..steps {
            let prev = u.clone();
            for k in 1..n {
                u[k] = prev[k] + dt / (h * h) * (prev[k - 1] - 2.0 * prev[k] + prev[k + 1]);
            }
        }
        let exact = exact_linear_gaussian(0.0, sigma, 1.0, &YProfile::Constant { c: 1.0 }, 0.0, 0.0, t_end);
        assert!((u[n / 2] - exact).abs() < 1e-4, "{} vs {}", u[n / 2], exact);
    }

    #[test]
    fn linear_gaussian_is_translation_invariant() {
        let p = YProfile::Gaussian { sigma: 0.4 };
        let t = 0.6;
        let base = exact_linear_gaussian(0.0, 0.7, 1.0, &p, 0.3, 0.1, t);
        for a in [-2.0, 0.5, 3.0] {
            let v = exact_linear_gaussian(a, 0.7, 1.0, &p, 0.3, 0.1 + a * t, t);
            assert!((v - base).abs() < 1e-15);
        }
    }

    #[test]
    fn linear_gaussian_conserves_x_mass() {
        // Trapezoid over a wide x-range of the analytic profile.
        let p = YProfile::Constant { c: 1.0 };
        let mass_at = |t: f64| {
            let n = 4000;
            let h = 40.0 / n as f64;
            (0..=n)
                .map(|k| {
                    let x = -20.0 + k as f64 * h;
                    let w = if k == 0 || k == n { 0.5 } else { 1.0 };
                    w * exact_linear_gaussian(1.0, 0.8, 1.0, &p, x, 0.0, t)
                })
                .sum::<f64>()
                * h
        };
        let m0 = mass_at(0.0);
        assert!((m0 - 0.8 * (2.0 * std::f64::consts::PI).sqrt()).abs() < 1e-10);
        for t in [0.1, 1.0, 3.0] {
            assert!((mass_at(t) - m0).abs() < 1e-10);
        }
    }

    #[test]
    fn riemann_examples() {
        assert_eq!(exact_1d_riemann_burgers(1.0, 0.0, 0.49, 1.0), 1.0);
        assert_eq!(exact_1d_riemann_burgers(1.0, 0.0, 0.51, 1.0), 0.0);
        assert_eq!(exact_1d_riemann_burgers(0.0, 0.0, 0.3, 2.0), 0.0);
        assert_eq!(exact_1d_riemann_burgers(-1.0, 1.0, 0.0, 1.0), 0.0);
        assert_eq!(exact_1d_riemann_burgers(-1.0, 1.0, 0.25, 1.0), 0.25);
        assert_eq!(exact_1d_riemann_burgers(-1.0, 1.0, -3.0, 1.0), -1.0);
    }

    #[test]
    fn riemann_shock_satisfies_rankine_hugoniot() {
        let f = |u: f64| 0.5 * u * u;
        for &(ul, ur) in &[(1.0, 0.0), (2.0, -1.0), (0.5, 0.2)] {
            let t = 1.3;
            let s = (f(ul) - f(ur)) / (ul - ur);
            // jump sits between s t - tiny and s t + tiny
            assert_eq!(exact_1d_riemann_burgers(ul, ur, s * t - 1e-9, t), ul);
            assert_eq!(exact_1d_riemann_burgers(ul, ur, s * t + 1e-9, t), ur);
        }
        // increasing data: no jump anywhere for t > 0 (continuous fan)
        let t = 1.0;
        let mut prev = exact_1d_riemann_burgers(0.0, 1.0, -1.0, t);
        for k in 1..=400 {
            let y = -1.0 + 3.0 * k as f64 / 400.0;
            let v = exact_1d_riemann_burgers(0.0, 1.0, y, t);
            assert!((v - prev).abs() < 0.01);
            prev = v;
        }
    }

    #[test]
    fn reference_fields() {
        let g = GridSpec::new(-1.0, 1.0, -2.0, 2.0, 8, 32).unwrap();
        let data = InitialData::GaussianXTimesStepY {
            amplitude: 1.0,
            sigma: 0.5,
            u_l: 0.0,
            u_r: 1.0,
            width: 0.2,
        };
        let spec = data.linear_reference(1.0).unwrap();
        let at0 = reference_field(&spec, &g, 0.0).unwrap();
        assert_eq!(at0.values, data.project(&g).unwrap().values);

        let r = reference_field(&ReferenceSpec::Riemann1d { u_l: 1.0, u_r: 0.0 }, &g, 0.8).unwrap();
        for j in 0..g.ny {
            let row = r.row(j);
            assert!(row.iter().all(|&v| v == row[0]));
        }
    }

    #[test]
    fn discrete_reference_equals_solver_on_same_grid() {
        let g = GridSpec::new(-1.0, 1.0, -2.0, 2.0, 4, 64).unwrap();
        let initial = InitialData::Riemann { u_l: 1.0, u_r: 0.0 };
        let config = SolverConfig {
            boundary: Boundary::ZeroFlux,
            ..Default::default()
        };
        let spec = ReferenceSpec::DiscreteEps0 {
            initial,
            model: FluxModel::burgers(),
            config,
            cfl: 0.45,
            refine: 1,
        };
        let r = reference_field(&spec, &g, 0.5).unwrap();
        let direct = advance(
            &initial.project(&g).unwrap(),
            &FluxModel::burgers(),
            &config,
            &TimeSpec::new(0.5, 0.45).unwrap(),
        )
        .unwrap();
        assert_eq!(r.values, direct.final_field.values);

        let refined = ReferenceSpec::DiscreteEps0 {
            initial,
            model: FluxModel::burgers(),
            config,
            cfl: 0.45,
            refine: DEFAULT_REFINE,
        };
        let r2 = reference_field(&refined, &g, 0.5).unwrap();
        assert_eq!(r2.grid, g);
    }
}
