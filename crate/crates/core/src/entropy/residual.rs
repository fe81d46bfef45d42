//! Space-time residuals of the weak formulation and of the entropy inequality.
//!
//! Fields are read as cell-wise constants. Cell integrals of the test-function
//! factors are computed exactly in y (Gauss–Legendre on each piece between the
//! ramp kinks) and with four-point Gauss–Legendre in x. Time integration is
//! the trapezoid rule over the stored frames.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::flux::FluxModel;
use crate::grid::{Field, GridSpec};
use crate::quadrature::{gauss_legendre4, gauss_legendre4_pieces};

use super::pair::sign;
use super::psi::PsiProfile;
use super::test_function::TestFunction;

/// Per-column cell integrals of `K_beta` and `K_beta''`.
struct XFactors {
    k: Vec<f64>,
    kxx: Vec<f64>,
}

fn x_factors(phi: &TestFunction, grid: &GridSpec) -> XFactors {
    let radius = phi.cutoff.support_radius();
    let mut k = vec![0.0; grid.nx];
    let mut kxx = vec![0.0; grid.nx];
    for i in 0..grid.nx {
        let a = grid.x_min + i as f64 * grid.dx;
        let b = a + grid.dx;
        if b <= -radius || a >= radius {
            continue;
        }
        k[i] = gauss_legendre4(&|x| phi.cutoff.eval(x), a, b);
        kxx[i] = phi.cutoff.deriv(b) - phi.cutoff.deriv(a);
    }
    XFactors { k, kxx }
}

/// Per-row cell integrals of `Psi`, `Psi_t` and `Psi_y` at one time.
struct YFactors {
    psi: Vec<f64>,
    psi_t: Vec<f64>,
    psi_y: Vec<f64>,
}

fn y_factors(phi: &TestFunction, grid: &GridSpec, t: f64) -> Option<YFactors> {
    let chi = phi.window.eval(t);
    let chi_t = phi.window.deriv(t);
    if chi == 0.0 && chi_t == 0.0 {
        return None;
    }
    let breaks = phi.y_breakpoints(t);
    let speed = phi.cone.speed;
    let w = phi.ramp.width();
    let (l, r) = (phi.cone.left(t), phi.cone.right(t));
    let ramp_sum = |y: f64| phi.ramp.deriv(y - l) + phi.ramp.deriv(y - r - w);

    let mut out = YFactors {
        psi: vec![0.0; grid.ny],
        psi_t: vec![0.0; grid.ny],
        psi_y: vec![0.0; grid.ny],
    };
    for j in 0..grid.ny {
        let a = grid.y_min + j as f64 * grid.dy;
        let b = a + grid.dy;
        if b <= breaks[0] || a >= breaks[3] {
            continue;
        }
        let cone = gauss_legendre4_pieces(&|y| phi.cone_factor(y, t), a, b, &breaks);
        let ramps = gauss_legendre4_pieces(&ramp_sum, a, b, &breaks);
        out.psi[j] = chi * cone;
        out.psi_t[j] = -chi * speed * ramps + chi_t * cone;
        out.psi_y[j] = chi * (phi.cone_factor(b, t) - phi.cone_factor(a, t));
    }
    Some(out)
}

fn check_support(frames: &[Field], phi: &TestFunction) -> Result<()> {
    let first = frames
        .first()
        .ok_or_else(|| Error::SupportViolation("empty history".into()))?;
    if frames.len() < 2 {
        return Err(Error::SupportViolation("need at least two frames".into()));
    }
    if frames.iter().any(|f| f.grid != first.grid) {
        return Err(Error::MismatchedGrids);
    }
    phi.check_spatial_support(&first.grid)?;
    let (t0, t1) = phi.window.support();
    let (start, end) = (first.time, frames[frames.len() - 1].time);
    if t0 < start || t1 > end {
        return Err(Error::SupportViolation(format!(
            "time support [{t0}, {t1}] exceeds history span [{start}, {end}]"
        )));
    }
    Ok(())
}

fn trapezoid(frames: &[Field], values: &[f64]) -> f64 {
    frames
        .windows(2)
        .zip(values.windows(2))
        .map(|(f, v)| 0.5 * (f[1].time - f[0].time) * (v[0] + v[1]))
        .sum()
}

/// `iiint (u phi_t + f(u) phi_y + u phi_xx) + iint u0 phi(., ., 0)`.
pub fn weak_residual(frames: &[Field], u0: &Field, model: &FluxModel, phi: &TestFunction) -> Result<f64> {
    check_support(frames, phi)?;
    let grid = frames[0].grid;
    if u0.grid != grid {
        return Err(Error::MismatchedGrids);
    }
    let xf = x_factors(phi, &grid);

    let per_frame: Vec<f64> = frames
        .par_iter()
        .map(|frame| {
            let Some(yf) = y_factors(phi, &grid, frame.time) else {
                return 0.0;
            };
            let mut sum = 0.0;
            for j in 0..grid.ny {
                if yf.psi[j] == 0.0 && yf.psi_t[j] == 0.0 && yf.psi_y[j] == 0.0 {
                    continue;
                }
                for (i, &u) in frame.row(j).iter().enumerate() {
                    if xf.k[i] == 0.0 && xf.kxx[i] == 0.0 {
                        continue;
                    }
                    sum +=
                        u * xf.k[i] * yf.psi_t[j] + model.eval(u) * xf.k[i] * yf.psi_y[j] + u * xf.kxx[i] * yf.psi[j];
                }
            }
            sum
        })
        .collect();

    let mut initial = 0.0;
    if let Some(yf) = y_factors(phi, &grid, 0.0) {
        for j in 0..grid.ny {
            for (i, &u) in u0.row(j).iter().enumerate() {
                initial += u * xf.k[i] * yf.psi[j];
            }
        }
    }
    Ok(trapezoid(frames, &per_frame) + initial)
}

/// The four integrals that make up the entropy residual.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EntropyTerms {
    /// `iiint |u - psi| phi_t`
    pub time: f64,
    /// `iiint sign(u - psi) (f(u) - f(psi)) phi_y`
    pub flux: f64,
    /// `iiint |u - psi| phi_xx`
    pub diffusion: f64,
    /// `iiint sign(u - psi) psi_xx phi`
    pub source: f64,
}

impl EntropyTerms {
    pub fn total(&self) -> f64 {
        self.time + self.flux + self.diffusion + self.source
    }
}

/// Entropy residual split into its terms; entropy solutions give a nonnegative total.
pub fn entropy_residual_terms(
    frames: &[Field],
    model: &FluxModel,
    psi: &PsiProfile,
    phi: &TestFunction,
) -> Result<EntropyTerms> {
    check_support(frames, phi)?;
    let grid = frames[0].grid;
    let xf = x_factors(phi, &grid);
    let psi_x: Vec<f64> = (0..grid.nx).map(|i| psi.eval(grid.x_center(i))).collect();
    let psi_xx: Vec<f64> = (0..grid.nx).map(|i| psi.second_deriv(grid.x_center(i))).collect();
    let f_psi: Vec<f64> = psi_x.iter().map(|&p| model.eval(p)).collect();

    let per_frame: Vec<EntropyTerms> = frames
        .par_iter()
        .map(|frame| {
            let mut terms = EntropyTerms::default();
            let Some(yf) = y_factors(phi, &grid, frame.time) else {
                return terms;
            };
            for j in 0..grid.ny {
                if yf.psi[j] == 0.0 && yf.psi_t[j] == 0.0 && yf.psi_y[j] == 0.0 {
                    continue;
                }
                for (i, &u) in frame.row(j).iter().enumerate() {
                    if xf.k[i] == 0.0 && xf.kxx[i] == 0.0 {
                        continue;
                    }
                    let d = u - psi_x[i];
                    let s = sign(d);
                    terms.time += d.abs() * xf.k[i] * yf.psi_t[j];
                    terms.flux += s * (model.eval(u) - f_psi[i]) * xf.k[i] * yf.psi_y[j];
                    terms.diffusion += d.abs() * xf.kxx[i] * yf.psi[j];
                    terms.source += s * psi_xx[i] * xf.k[i] * yf.psi[j];
                }
            }
            terms
        })
        .collect();

    let pick = |g: fn(&EntropyTerms) -> f64| -> f64 {
        let v: Vec<f64> = per_frame.iter().map(g).collect();
        trapezoid(frames, &v)
    };
    Ok(EntropyTerms {
        time: pick(|t| t.time),
        flux: pick(|t| t.flux),
        diffusion: pick(|t| t.diffusion),
        source: pick(|t| t.source),
    })
}

pub fn entropy_residual(frames: &[Field], model: &FluxModel, psi: &PsiProfile, phi: &TestFunction) -> Result<f64> {
    entropy_residual_terms(frames, model, psi, phi).map(|t| t.total())
}
