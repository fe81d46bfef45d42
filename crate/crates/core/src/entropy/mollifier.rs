//! Compactly supported bump, its scalings, and the smooth cutoff built from it.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::quadrature::adaptive_simpson;

const CDF_TOL: f64 = 1e-14;

#[inline]
fn raw_bump(s: f64) -> f64 {
    if s.abs() < 1.0 {
        (-1.0 / (1.0 - s * s)).exp()
    } else {
        0.0
    }
}

fn raw_cdf(s: f64) -> f64 {
    // Integral of the raw bump over [-1, s] for s in [-1, 0].
    adaptive_simpson(&raw_bump, -1.0, s, CDF_TOL).expect("bump integrand is smooth")
}

fn normalization() -> f64 {
    static NORM: OnceLock<f64> = OnceLock::new();
    *NORM.get_or_init(|| 1.0 / (2.0 * raw_cdf(0.0)))
}

/// Unit-mass bump supported in [-1, 1].
#[inline]
pub fn bump(s: f64) -> f64 {
    normalization() * raw_bump(s)
}

pub fn bump_deriv(s: f64) -> f64 {
    if s.abs() < 1.0 {
        let q = 1.0 - s * s;
        bump(s) * (-2.0 * s / (q * q))
    } else {
        0.0
    }
}

/// Cumulative integral of [`bump`] from -1 to `s`.
pub fn bump_cdf(s: f64) -> f64 {
    if s <= -1.0 {
        0.0
    } else if s >= 1.0 {
        1.0
    } else if s <= 0.0 {
        normalization() * raw_cdf(s)
    } else {
        1.0 - normalization() * raw_cdf(-s)
    }
}

/// Scaled mollifier `omega_r(x) = omega(x / r) / r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mollifier {
    pub r: f64,
}

impl Mollifier {
    pub fn new(r: f64) -> Result<Self> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "mollifier width must be positive, got {r}"
            )));
        }
        Ok(Self { r })
    }

    pub fn eval(&self, x: f64) -> f64 {
        bump(x / self.r) / self.r
    }

    pub fn deriv(&self, x: f64) -> f64 {
        bump_deriv(x / self.r) / (self.r * self.r)
    }

    /// `H_r(t)`: integral of the mollifier from -infinity to `t`.
    pub fn cdf(&self, t: f64) -> f64 {
        bump_cdf(t / self.r)
    }
}

/// Smooth cutoff `K_beta(x) = phi(x / beta)` with `phi = 1` on |x| < 1 and `phi = 0` on |x| >= 2.
///
/// On 1 <= |x| <= 2, `phi(x) = 1 - Phi(2|x| - 3)` with `Phi` the bump's cumulative integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cutoff {
    pub beta: f64,
}

impl Cutoff {
    pub fn new(beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "cutoff scale must be positive, got {beta}"
            )));
        }
        Ok(Self { beta })
    }

    pub fn profile(x: f64) -> f64 {
        let a = x.abs();
        if a < 1.0 {
            1.0
        } else if a >= 2.0 {
            0.0
        } else {
            1.0 - bump_cdf(2.0 * a - 3.0)
        }
    }

    pub fn profile_deriv(x: f64) -> f64 {
        let a = x.abs();
        if a <= 1.0 || a >= 2.0 {
            0.0
        } else {
            -2.0 * x.signum() * bump(2.0 * a - 3.0)
        }
    }

    pub fn profile_deriv2(x: f64) -> f64 {
        let a = x.abs();
        if a <= 1.0 || a >= 2.0 {
            0.0
        } else {
            -4.0 * bump_deriv(2.0 * a - 3.0)
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        Self::profile(x / self.beta)
    }

    pub fn deriv(&self, x: f64) -> f64 {
        Self::profile_deriv(x / self.beta) / self.beta
    }

    pub fn deriv2(&self, x: f64) -> f64 {
        Self::profile_deriv2(x / self.beta) / (self.beta * self.beta)
    }

    pub fn support_radius(&self) -> f64 {
        2.0 * self.beta
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::adaptive_simpson;

    #[test]
    fn normalization_matches_high_precision_value() {
        // 1 / int_{-1}^{1} exp(-1/(1-s^2)) ds, computed at 30 digits.
        assert!((normalization() - 2.252_283_621_043_581).abs() < 1e-12);
        assert!((bump_cdf(-0.5) - 0.122_967_283_277_329_08).abs() < 1e-12);
        assert!((bump_cdf(0.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn scaled_mollifier_unit_mass_and_support() {
        for r in [0.01, 0.3, 2.0] {
            let m = Mollifier::new(r).unwrap();
            let mass = adaptive_simpson(&|x| m.eval(x), -r, r, 1e-12).unwrap();
            assert!((mass - 1.0).abs() < 1e-8);
            assert_eq!(m.eval(1.0001 * r), 0.0);
            assert_eq!(m.eval(-1.0001 * r), 0.0);
            for k in 0..=200 {
                assert!(m.eval(-1.5 * r + 3.0 * r * k as f64 / 200.0) >= 0.0);
            }
            assert!((m.cdf(r) - 1.0).abs() < 1e-15 && m.cdf(-r) == 0.0);
        }
        assert!(Mollifier::new(0.0).is_err());
    }

    #[test]
    fn mollifier_derivatives_match_finite_differences() {
        let m = Mollifier::new(0.4).unwrap();
        let h = 1e-6;
        for k in 1..40 {
            let x = -0.4 + 0.8 * k as f64 / 40.0;
            let fd = (m.eval(x + h) - m.eval(x - h)) / (2.0 * h);
            assert!((fd - m.deriv(x)).abs() < 1e-5 * (1.0 + m.deriv(x).abs()));
            let fd = (m.cdf(x + h) - m.cdf(x - h)) / (2.0 * h);
            assert!((fd - m.eval(x)).abs() < 1e-6 * (1.0 + m.eval(x)));
        }
    }

    #[test]
    fn cutoff_plateau_and_support() {
        let k = Cutoff::new(0.5).unwrap();
        assert_eq!(k.eval(0.0), 1.0);
        for k_i in 0..100 {
            let x = -1.5 + 3.0 * k_i as f64 / 99.0;
            let v = k.eval(x);
            assert!((0.0..=1.0).contains(&v));
            if x.abs() < 0.5 {
                assert_eq!(v, 1.0);
            }
            if x.abs() >= 1.0 {
                assert_eq!(v, 0.0);
            }
        }
        // monotone on the transition
        let mut prev = 1.0;
        for i in 0..=100 {
            let v = k.eval(0.5 + 0.5 * i as f64 / 100.0);
            assert!(v <= prev + 1e-15);
            prev = v;
        }
    }

    #[test]
    fn cutoff_derivatives_match_finite_differences() {
        let k = Cutoff::new(0.7).unwrap();
        let h = 1e-5;
        for i in 0..60 {
            let x = -1.45 + 2.9 * i as f64 / 59.0;
            let fd1 = (k.eval(x + h) - k.eval(x - h)) / (2.0 * h);
            assert!((fd1 - k.deriv(x)).abs() < 1e-6, "K' at {x}");
            let fd2 = (k.deriv(x + h) - k.deriv(x - h)) / (2.0 * h);
            assert!((fd2 - k.deriv2(x)).abs() < 1e-5, "K'' at {x}");
        }
        // K'' integrates to zero across the whole line
        let total = adaptive_simpson(&|x| k.deriv2(x), -1.4, 1.4, 1e-12).unwrap();
        assert!(total.abs() < 1e-9);
    }
}
