//! Scalar functionals of fields and trajectories, and the log-log rate fit.

use std::fmt::Write as _;

use crate::entropy::ConeSpec;
use crate::error::{Error, Result};
use crate::grid::Field;
use crate::solver::{Boundary, SolveResult};

pub fn mass(field: &Field) -> f64 {
    let g = field.grid;
    field.values.iter().sum::<f64>() * g.dx * g.dy
}

/// Anisotropic discrete BV seminorm. Periodic grids include the wrap-around pairs.
pub fn total_variation(field: &Field, boundary: Boundary) -> f64 {
    let g = field.grid;
    let wrap = boundary == Boundary::Periodic;
    let mut tv_x = 0.0;
    let mut tv_y = 0.0;
    for j in 0..g.ny {
        let row = field.row(j);
        tv_x += row.windows(2).map(|w| (w[1] - w[0]).abs()).sum::<f64>();
        if wrap {
            tv_x += (row[0] - row[g.nx - 1]).abs();
        }
    }
    for j in 0..g.ny {
        let next = if j + 1 < g.ny {
            j + 1
        } else if wrap {
            0
        } else {
            continue;
        };
        tv_y += field
            .row(j)
            .iter()
            .zip(field.row(next))
            .map(|(a, b)| (b - a).abs())
            .sum::<f64>();
    }
    tv_x * g.dy + tv_y * g.dx
}

/// L1 norm of the discrete time derivative between consecutive history frames.
pub fn time_derivative_l1(result: &SolveResult) -> Vec<f64> {
    result
        .history
        .windows(2)
        .map(|w| {
            let g = w[0].grid;
            let diff: f64 = w[0].values.iter().zip(&w[1].values).map(|(a, b)| (b - a).abs()).sum();
            diff * g.dx * g.dy / (w[1].time - w[0].time)
        })
        .collect()
}

/// L1 distance restricted to the strip `L_l(t) <= y <= L_r(t)`.
/// Rows cut by the strip edges are weighted by their covered fraction.
pub fn cone_l1_error(u: &Field, v: &Field, cone: &ConeSpec, t: f64) -> Result<f64> {
    if u.grid != v.grid {
        return Err(Error::MismatchedGrids);
    }
    let half_width = cone.half_width_at(t);
    if half_width <= 0.0 {
        return Err(Error::EmptyCone { t, half_width });
    }
    let g = u.grid;
    let (lo, hi) = (cone.left(t), cone.right(t));
    let mut total = 0.0;
    for j in 0..g.ny {
        let y0 = g.y_min + j as f64 * g.dy;
        let covered = (y0 + g.dy).min(hi) - y0.max(lo);
        if covered <= 0.0 {
            continue;
        }
        let weight = (covered / g.dy).min(1.0);
        let row: f64 = u.row(j).iter().zip(v.row(j)).map(|(a, b)| (a - b).abs()).sum();
        total += weight * row;
    }
    Ok(total * g.dx * g.dy)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateReport {
    /// Usable (eps, error) pairs sorted by decreasing eps.
    pub pairs: Vec<(f64, f64)>,
    /// Pairs with zero error, left out of the fit.
    pub excluded: Vec<(f64, f64)>,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// `log(e_k / e_{k+1}) / log(eps_k / eps_{k+1})` for consecutive usable pairs.
    pub pairwise_rates: Vec<f64>,
}

impl RateReport {
    pub fn passes(&self, threshold: f64) -> bool {
        self.slope >= threshold
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("epsilon,error,pairwise_rate\n");
        for (k, (eps, err)) in self.pairs.iter().enumerate() {
            match self.pairwise_rates.get(k) {
                Some(rate) => writeln!(out, "{eps},{err},{rate}").unwrap(),
                None => writeln!(out, "{eps},{err},").unwrap(),
            }
        }
        out
    }

    pub fn summary_line(&self, threshold: f64) -> String {
        let mut line = format!(
            "slope={} intercept={} r2={} threshold={} result={}",
            self.slope,
            self.intercept,
            self.r_squared,
            threshold,
            if self.passes(threshold) { "pass" } else { "fail" }
        );
        if !self.excluded.is_empty() {
            let eps: Vec<String> = self.excluded.iter().map(|(e, _)| e.to_string()).collect();
            write!(line, " excluded_zero_error_eps={}", eps.join(";")).unwrap();
        }
        line
    }
}

/// Least-squares fit of log(error) against log(eps).
pub fn rate_fit(pairs: &[(f64, f64)]) -> Result<RateReport> {
    if let Some(&(eps, err)) = pairs
        .iter()
        .find(|(e, r)| !(*e > 0.0 && e.is_finite()) || !(*r >= 0.0 && r.is_finite()))
    {
        return Err(Error::DegenerateFit(format!("invalid pair ({eps}, {err})")));
    }
    let mut sorted = pairs.to_vec();
    sorted.sort_by(|a, b| b.0.total_cmp(&a.0));
    let (usable, excluded): (Vec<_>, Vec<_>) = sorted.into_iter().partition(|&(_, err)| err > 0.0);
    if usable.len() < 3 {
        return Err(Error::InsufficientPairs(usable.len()));
    }

    let n = usable.len() as f64;
    let xs: Vec<f64> = usable.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = usable.iter().map(|p| p.1.ln()).collect();
    let x_mean = xs.iter().sum::<f64>() / n;
    let y_mean = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - x_mean).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - x_mean) * (y - y_mean)).sum();
    let syy: f64 = ys.iter().map(|y| (y - y_mean).powi(2)).sum();
    if sxx <= 0.0 {
        return Err(Error::DegenerateFit("all epsilon values are equal".into()));
    }
    let slope = sxy / sxx;
    let intercept = y_mean - slope * x_mean;
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let r_squared = if syy > 0.0 { 1.0 - ss_res / syy } else { 1.0 };

    let pairwise_rates = usable
        .windows(2)
        .map(|w| (w[0].1 / w[1].1).ln() / (w[0].0 / w[1].0).ln())
        .collect();

    Ok(RateReport {
        pairs: usable,
        excluded,
        slope,
        intercept,
        r_squared,
        pairwise_rates,
    })
}
