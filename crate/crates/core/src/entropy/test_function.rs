//! Nonnegative test functions `phi(x, y, t) = K_beta(x) Psi(y, t)` localized in
//! the shrinking cone `L_l(t) <= y <= L_r(t)` and the time window `(nu, tau)`,
//! with their analytic partial derivatives.

use crate::error::{Error, Result};
use crate::grid::GridSpec;

use super::mollifier::{Cutoff, Mollifier};

/// Piecewise-linear ramp `h_alpha(z) = h(alpha z)`, rising from 0 at `z = -1/alpha` to 1 at `z = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ramp {
    pub alpha: f64,
}

impl Ramp {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "ramp steepness must be positive, got {alpha}"
            )));
        }
        Ok(Self { alpha })
    }

    pub fn base(z: f64) -> f64 {
        if z < -1.0 {
            0.0
        } else if z <= 0.0 {
            z + 1.0
        } else {
            1.0
        }
    }

    pub fn eval(&self, z: f64) -> f64 {
        Self::base(self.alpha * z)
    }

    /// Derivative away from the two kinks; zero at the kinks themselves.
    pub fn deriv(&self, z: f64) -> f64 {
        let s = self.alpha * z;
        if s > -1.0 && s < 0.0 {
            self.alpha
        } else {
            0.0
        }
    }

    pub fn width(&self) -> f64 {
        1.0 / self.alpha
    }
}

/// Smoothed indicator `H_{alpha0}(t - nu) - H_{alpha0}(t - tau)` of the interval `(nu, tau)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeWindow {
    pub nu: f64,
    pub tau: f64,
    pub alpha0: f64,
    pub t_end: f64,
    mollifier: Mollifier,
}

impl TimeWindow {
    pub fn new(nu: f64, tau: f64, alpha0: f64, t_end: f64) -> Result<Self> {
        if !(0.0 < nu && nu < tau && tau < t_end) {
            return Err(Error::InvalidParameter(format!(
                "time window needs 0 < nu < tau < T, got nu={nu} tau={tau} T={t_end}"
            )));
        }
        if !(alpha0 > 0.0 && alpha0 < nu.min(t_end - tau)) {
            return Err(Error::InvalidParameter(format!(
                "alpha0 must lie in (0, min(nu, T - tau)), got {alpha0}"
            )));
        }
        Ok(Self {
            nu,
            tau,
            alpha0,
            t_end,
            mollifier: Mollifier::new(alpha0)?,
        })
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.mollifier.cdf(t - self.nu) - self.mollifier.cdf(t - self.tau)
    }

    pub fn deriv(&self, t: f64) -> f64 {
        self.mollifier.eval(t - self.nu) - self.mollifier.eval(t - self.tau)
    }

    pub fn support(&self) -> (f64, f64) {
        (self.nu - self.alpha0, self.tau + self.alpha0)
    }
}

/// Lines `L_l(t) = -L + M t` and `L_r(t) = L - M t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeSpec {
    pub half_width: f64,
    pub speed: f64,
}

impl ConeSpec {
    pub fn new(half_width: f64, speed: f64) -> Result<Self> {
        if !(half_width > 0.0 && speed > 0.0 && half_width.is_finite() && speed.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "cone needs positive L and M, got L={half_width} M={speed}"
            )));
        }
        Ok(Self { half_width, speed })
    }

    pub fn left(&self, t: f64) -> f64 {
        -self.half_width + self.speed * t
    }

    pub fn right(&self, t: f64) -> f64 {
        self.half_width - self.speed * t
    }

    pub fn half_width_at(&self, t: f64) -> f64 {
        self.half_width - self.speed * t
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestFunction {
    pub cutoff: Cutoff,
    pub window: TimeWindow,
    pub cone: ConeSpec,
    pub ramp: Ramp,
}

/// Axis-aligned box containing the support of a test function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportBox {
    pub x: (f64, f64),
    pub y: (f64, f64),
    pub t: (f64, f64),
}

impl SupportBox {
    pub fn volume(&self) -> f64 {
        (self.x.1 - self.x.0) * (self.y.1 - self.y.0) * (self.t.1 - self.t.0)
    }
}

pub fn build_test_function(
    cutoff: Cutoff,
    window: TimeWindow,
    cone: ConeSpec,
    ramp: Ramp,
    grid: &GridSpec,
) -> Result<TestFunction> {
    let (_, t_hi) = window.support();
    if cone.half_width_at(t_hi) <= 0.0 {
        return Err(Error::SupportViolation(format!(
            "cone closes before the window ends: L - M t = {} at t = {t_hi}",
            cone.half_width_at(t_hi)
        )));
    }
    let phi = TestFunction {
        cutoff,
        window,
        cone,
        ramp,
    };
    phi.check_spatial_support(grid)?;
    Ok(phi)
}

impl TestFunction {
    /// `chi^alpha_{(L_l, L_r)}(y, t)`
    pub fn cone_factor(&self, y: f64, t: f64) -> f64 {
        self.ramp.eval(y - self.cone.left(t)) - self.ramp.eval(y - self.cone.right(t) - self.ramp.width())
    }

    fn ramp_derivs(&self, y: f64, t: f64) -> (f64, f64) {
        (
            self.ramp.deriv(y - self.cone.left(t)),
            self.ramp.deriv(y - self.cone.right(t) - self.ramp.width()),
        )
    }

    pub fn psi(&self, y: f64, t: f64) -> f64 {
        self.window.eval(t) * self.cone_factor(y, t)
    }

    pub fn psi_t(&self, y: f64, t: f64) -> f64 {
        let (hl, hr) = self.ramp_derivs(y, t);
        -self.window.eval(t) * self.cone.speed * (hl + hr) + self.window.deriv(t) * self.cone_factor(y, t)
    }

    pub fn psi_y(&self, y: f64, t: f64) -> f64 {
        let (hl, hr) = self.ramp_derivs(y, t);
        self.window.eval(t) * (hl - hr)
    }

    pub fn eval(&self, x: f64, y: f64, t: f64) -> f64 {
        self.cutoff.eval(x) * self.psi(y, t)
    }

    pub fn dt(&self, x: f64, y: f64, t: f64) -> f64 {
        self.cutoff.eval(x) * self.psi_t(y, t)
    }

    pub fn dy(&self, x: f64, y: f64, t: f64) -> f64 {
        self.cutoff.eval(x) * self.psi_y(y, t)
    }

    pub fn dxx(&self, x: f64, y: f64, t: f64) -> f64 {
        self.cutoff.deriv2(x) * self.psi(y, t)
    }

    /// y-locations where `Psi(., t)` has kinks.
    pub fn y_breakpoints(&self, t: f64) -> [f64; 4] {
        let w = self.ramp.width();
        let (l, r) = (self.cone.left(t), self.cone.right(t));
        [l - w, l, r, r + w]
    }

    pub fn support(&self) -> SupportBox {
        let radius = self.cutoff.support_radius();
        let (t0, t1) = self.window.support();
        let w = self.ramp.width();
        SupportBox {
            x: (-radius, radius),
            y: (self.cone.left(t0) - w, self.cone.right(t0) + w),
            t: (t0, t1),
        }
    }

    pub fn support_volume(&self) -> f64 {
        self.support().volume()
    }

    pub fn check_spatial_support(&self, grid: &GridSpec) -> Result<()> {
        let s = self.support();
        if s.x.0 < grid.x_min || s.x.1 > grid.x_max {
            return Err(Error::SupportViolation(format!(
                "x-support [{}, {}] exceeds grid [{}, {}]",
                s.x.0, s.x.1, grid.x_min, grid.x_max
            )));
        }
        if s.y.0 < grid.y_min || s.y.1 > grid.y_max {
            return Err(Error::SupportViolation(format!(
                "y-support [{}, {}] exceeds grid [{}, {}]",
                s.y.0, s.y.1, grid.y_min, grid.y_max
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> GridSpec {
        GridSpec::new(-2.0, 2.0, -5.0, 5.0, 8, 8).unwrap()
    }

    fn phi() -> TestFunction {
        build_test_function(
            Cutoff::new(0.5).unwrap(),
            TimeWindow::new(0.2, 0.8, 0.1, 1.0).unwrap(),
            ConeSpec::new(3.0, 1.0).unwrap(),
            Ramp::new(2.0).unwrap(),
            &grid(),
        )
        .unwrap()
    }

    #[test]
    fn ramp_shape() {
        let h = Ramp::new(4.0).unwrap();
        assert_eq!(h.eval(0.0), 1.0);
        assert_eq!(h.eval(3.0), 1.0);
        assert_eq!(h.eval(-0.25), 0.0);
        assert_eq!(h.eval(-1.0), 0.0);
        assert!((h.eval(-0.125) - 0.5).abs() < 1e-15);
        let mut prev = 0.0;
        for k in 0..=100 {
            let v = h.eval(-0.5 + k as f64 / 100.0);
            assert!(v >= prev);
            prev = v;
        }
        assert_eq!(h.deriv(-0.1), 4.0);
        assert_eq!(h.deriv(0.1), 0.0);
    }

    #[test]
    fn window_validation_and_plateau() {
        assert!(TimeWindow::new(0.2, 0.8, 0.25, 1.0).is_err());
        assert!(TimeWindow::new(0.8, 0.2, 0.05, 1.0).is_err());
        assert!(TimeWindow::new(0.2, 1.2, 0.05, 1.0).is_err());
        let w = TimeWindow::new(0.2, 0.8, 0.1, 1.0).unwrap();
        assert!((w.eval(0.5) - 1.0).abs() < 1e-15);
        assert_eq!(w.eval(0.05), 0.0);
        assert_eq!(w.eval(0.95), 0.0);
        assert!((w.eval(0.2) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn plateau_value_and_derivatives() {
        let p = phi();
        let t = 0.5;
        assert!((p.eval(0.0, 0.0, t) - 1.0).abs() < 1e-14);
        assert_eq!(p.dxx(0.3, 0.0, t), 0.0);
        assert_eq!(p.psi_y(0.0, t), 0.0);
        // on the left ramp: Psi_y = alpha * chi
        let y = p.cone.left(t) - 0.1;
        assert!((p.psi_y(y, t) - 2.0 * p.window.eval(t)).abs() < 1e-14);
        // on the right ramp: Psi_y = -alpha * chi
        let y = p.cone.right(t) + 0.1;
        assert!((p.psi_y(y, t) + 2.0 * p.window.eval(t)).abs() < 1e-14);
    }

    #[test]
    fn support_checks() {
        let small = GridSpec::new(-0.5, 0.5, -5.0, 5.0, 8, 8).unwrap();
        let err = build_test_function(
            Cutoff::new(0.5).unwrap(),
            TimeWindow::new(0.2, 0.8, 0.1, 1.0).unwrap(),
            ConeSpec::new(3.0, 1.0).unwrap(),
            Ramp::new(2.0).unwrap(),
            &small,
        );
        assert!(matches!(err, Err(Error::SupportViolation(_))));
        let closing = build_test_function(
            Cutoff::new(0.5).unwrap(),
            TimeWindow::new(0.2, 0.8, 0.1, 1.0).unwrap(),
            ConeSpec::new(0.8, 1.0).unwrap(),
            Ramp::new(2.0).unwrap(),
            &grid(),
        );
        assert!(matches!(closing, Err(Error::SupportViolation(_))));
        let s = phi().support();
        assert_eq!(s.x, (-1.0, 1.0));
        assert!((s.y.0 - (-3.0 + 0.1 - 0.5)).abs() < 1e-15);
        assert!((s.t.1 - 0.9).abs() < 1e-15);
    }

    #[test]
    fn nonnegative_and_zero_outside_support() {
        let p = phi();
        let s = p.support();
        for i in 0..30 {
            for j in 0..30 {
                for k in 0..10 {
                    let x = -1.5 + 3.0 * i as f64 / 29.0;
                    let y = -4.5 + 9.0 * j as f64 / 29.0;
                    let t = k as f64 / 9.0;
                    let v = p.eval(x, y, t);
                    assert!(v >= 0.0);
                    let inside = x > s.x.0 && x < s.x.1 && y > s.y.0 && y < s.y.1 && t > s.t.0 && t < s.t.1;
                    if !inside {
                        assert_eq!(v, 0.0);
                    }
                }
            }
        }
    }

    #[test]
    fn derivatives_match_central_differences() {
        // Deterministic pseudo-random interior points, kept away from the ramp kinks.
        let p = phi();
        let mut state = 0x2545_f491_4f6c_dd1du64;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        let h = 1e-6;
        let mut checked = 0;
        while checked < 100 {
            let x = -1.2 + 2.4 * next();
            let y = -3.4 + 6.8 * next();
            let t = 0.12 + 0.76 * next();
            let near_kink = p
                .y_breakpoints(t)
                .iter()
                .any(|&b| (y - b).abs() < 1e-3 + 2.0 * h * p.cone.speed);
            if near_kink {
                continue;
            }
            checked += 1;
            let ft = (p.eval(x, y, t + h) - p.eval(x, y, t - h)) / (2.0 * h);
            let fy = (p.eval(x, y + h, t) - p.eval(x, y - h, t)) / (2.0 * h);
            let at = p.dt(x, y, t);
            let ay = p.dy(x, y, t);
            assert!(
                (ft - at).abs() <= 1e-6 * at.abs().max(1.0),
                "phi_t at ({x},{y},{t}): {ft} vs {at}"
            );
            assert!(
                (fy - ay).abs() <= 1e-6 * ay.abs().max(1.0),
                "phi_y at ({x},{y},{t}): {fy} vs {ay}"
            );
            let hx = 1e-4;
            let fxx = (p.eval(x + hx, y, t) - 2.0 * p.eval(x, y, t) + p.eval(x - hx, y, t)) / (hx * hx);
            let axx = p.dxx(x, y, t);
            assert!(
                (fxx - axx).abs() <= 1e-4 * axx.abs().max(1.0),
                "phi_xx at ({x},{y},{t}): {fxx} vs {axx}"
            );
        }
    }
}
