//! Truncated rectangular space domain and cell-centered scalar fields.
//!
//! Values are stored row-major with the y index outermost: cell `(i, j)`
//! (column `i` in x, row `j` in y) lives at `j * nx + i`.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub nx: usize,
    pub ny: usize,
    pub dx: f64,
    pub dy: f64,
}

impl GridSpec {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64, nx: usize, ny: usize) -> Result<Self> {
        let finite = [x_min, x_max, y_min, y_max].iter().all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidGrid("bounds must be finite".into()));
        }
        if x_max <= x_min {
            return Err(Error::InvalidGrid(format!("degenerate x-extent [{x_min}, {x_max}]")));
        }
        if y_max <= y_min {
            return Err(Error::InvalidGrid(format!("degenerate y-extent [{y_min}, {y_max}]")));
        }
        if nx < 4 || ny < 4 {
            return Err(Error::InvalidGrid(format!("cell counts must be >= 4, got {nx}x{ny}")));
        }
        Ok(Self {
            x_min,
            x_max,
            y_min,
            y_max,
            nx,
            ny,
            dx: (x_max - x_min) / nx as f64,
            dy: (y_max - y_min) / ny as f64,
        })
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    #[inline]
    pub fn x_center(&self, i: usize) -> f64 {
        self.x_min + (i as f64 + 0.5) * self.dx
    }

    #[inline]
    pub fn y_center(&self, j: usize) -> f64 {
        self.y_min + (j as f64 + 0.5) * self.dy
    }

    pub fn center(&self, i: usize, j: usize) -> (f64, f64) {
        (self.x_center(i), self.y_center(j))
    }

    /// Inverse of [`GridSpec::center`] for points that are cell centers.
    pub fn cell_of(&self, x: f64, y: f64) -> (usize, usize) {
        let i = ((x - self.x_min) / self.dx - 0.5).round();
        let j = ((y - self.y_min) / self.dy - 0.5).round();
        (
            i.clamp(0.0, (self.nx - 1) as f64) as usize,
            j.clamp(0.0, (self.ny - 1) as f64) as usize,
        )
    }

    pub fn area(&self) -> f64 {
        (self.x_max - self.x_min) * (self.y_max - self.y_min)
    }

    /// Same rectangle with each cell split `factor` times per direction.
    pub fn refined(&self, factor: usize) -> Result<Self> {
        if factor == 0 {
            return Err(Error::InvalidParameter("refinement factor must be >= 1".into()));
        }
        Self::new(
            self.x_min,
            self.x_max,
            self.y_min,
            self.y_max,
            self.nx * factor,
            self.ny * factor,
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    pub grid: GridSpec,
    pub values: Vec<f64>,
    pub time: f64,
}

impl Field {
    pub fn new(grid: GridSpec, values: Vec<f64>, time: f64) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidParameter(format!(
                "field has {} values, grid needs {}",
                values.len(),
                grid.len()
            )));
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteSample {
                i: k % grid.nx,
                j: k / grid.nx,
                value: values[k],
            });
        }
        Ok(Self { grid, values, time })
    }

    pub fn constant(grid: GridSpec, c: f64, time: f64) -> Self {
        Self {
            grid,
            values: vec![c; grid.len()],
            time,
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.index(i, j)]
    }

    pub fn row(&self, j: usize) -> &[f64] {
        let nx = self.grid.nx;
        &self.values[j * nx..(j + 1) * nx]
    }

    pub fn column(&self, i: usize) -> Vec<f64> {
        (0..self.grid.ny).map(|j| self.get(i, j)).collect()
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Block-average onto a grid coarser by `factor` in each direction.
    pub fn restrict(&self, coarse: &GridSpec, factor: usize) -> Result<Field> {
        if coarse.nx * factor != self.grid.nx || coarse.ny * factor != self.grid.ny {
            return Err(Error::MismatchedGrids);
        }
        let weight = 1.0 / (factor * factor) as f64;
        let mut out = vec![0.0; coarse.len()];
        for jc in 0..coarse.ny {
            for ic in 0..coarse.nx {
                let mut sum = 0.0;
                for jf in jc * factor..(jc + 1) * factor {
                    for i_f in ic * factor..(ic + 1) * factor {
                        sum += self.get(i_f, jf);
                    }
                }
                out[coarse.index(ic, jc)] = sum * weight;
            }
        }
        Field::new(*coarse, out, self.time)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeSpec {
    pub t_end: f64,
    pub cfl: f64,
}

impl TimeSpec {
    pub fn new(t_end: f64, cfl: f64) -> Result<Self> {
        if !(t_end > 0.0 && t_end.is_finite()) {
            return Err(Error::InvalidParameter(format!("t_end must be positive, got {t_end}")));
        }
        if !(cfl > 0.0 && cfl <= 1.0) {
            return Err(Error::InvalidParameter(format!("cfl must lie in (0, 1], got {cfl}")));
        }
        Ok(Self { t_end, cfl })
    }

    /// Accepts any positive Courant factor. Used for deliberate CFL-guard tests.
    pub fn with_cfl_override(t_end: f64, cfl: f64) -> Result<Self> {
        if !(t_end > 0.0 && t_end.is_finite()) {
            return Err(Error::InvalidParameter(format!("t_end must be positive, got {t_end}")));
        }
        if !(cfl > 0.0 && cfl.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "cfl override must be positive, got {cfl}"
            )));
        }
        Ok(Self { t_end, cfl })
    }
}

/// Samples `u0` at every cell center.
pub fn project_initial<F>(u0: F, grid: &GridSpec) -> Result<Field>
where
    F: Fn(f64, f64) -> f64,
{
    let mut values = Vec::with_capacity(grid.len());
    for j in 0..grid.ny {
        let y = grid.y_center(j);
        for i in 0..grid.nx {
            let v = u0(grid.x_center(i), y);
            if !v.is_finite() {
                return Err(Error::NonFiniteSample { i, j, value: v });
            }
            values.push(v);
        }
    }
    Ok(Field {
        grid: *grid,
        values,
        time: 0.0,
    })
}
