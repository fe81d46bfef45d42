//! Kruzkov-type entropy pairs and their smoothed versions.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::Result;
use crate::flux::FluxModel;
use crate::quadrature::adaptive_simpson_pieces;

/// Tolerance of the adaptive quadrature behind [`eta_entropy_flux`].
pub const ENTROPY_FLUX_TOL: f64 = 1e-10;

/// Signum with `sign(0) = 0`.
#[inline]
pub fn sign(s: f64) -> f64 {
    if s > 0.0 {
        1.0
    } else if s < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Regularized signum: `sign(s)` for |s| > eta, `sin(pi s / (2 eta))` otherwise.
#[inline]
pub fn sign_eta(s: f64, eta: f64) -> f64 {
    debug_assert!(eta > 0.0);
    if s.abs() > eta {
        sign(s)
    } else {
        (FRAC_PI_2 * s / eta).sin()
    }
}

/// `psi_eta(u, psi) = integral from psi to u of sign_eta(z - psi) dz`, in closed form.
pub fn eta_entropy(u: f64, psi: f64, eta: f64) -> f64 {
    let d = (u - psi).abs();
    let plateau = 2.0 * eta / PI;
    if d >= eta {
        d - eta + plateau
    } else {
        plateau * (1.0 - (FRAC_PI_2 * d / eta).cos())
    }
}

/// `Q_eta(u, psi) = integral from psi to u of sign_eta(z - psi) f'(z) dz`.
pub fn eta_entropy_flux(u: f64, psi: f64, eta: f64, model: &FluxModel) -> Result<f64> {
    let integrand = |z: f64| sign_eta(z - psi, eta) * model.deriv(z);
    adaptive_simpson_pieces(&integrand, psi, u, &[psi - eta, psi + eta], ENTROPY_FLUX_TOL)
}

/// Kruzkov flux `sign(u - k) (f(u) - f(k))`.
#[inline]
pub fn kruzkov_flux(u: f64, k: f64, model: &FluxModel) -> f64 {
    sign(u - k) * (model.eval(u) - model.eval(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sign_eta_examples() {
        let eta = 0.3;
        assert_eq!(sign_eta(0.0, eta), 0.0);
        assert_eq!(sign_eta(2.0 * eta, eta), 1.0);
        assert_eq!(sign_eta(-2.0 * eta, eta), -1.0);
        // both branches agree at |s| = eta
        assert!((sign_eta(eta, eta) - 1.0).abs() < 1e-15);
        assert!((sign_eta(eta * (1.0 + 1e-12), eta) - 1.0).abs() < 1e-15);
        assert_eq!(sign(0.0), 0.0);
    }

    #[test]
    fn sign_eta_converges_to_sign() {
        for s in [-0.5, -1e-3, 0.0, 2e-4, 0.7] {
            assert_eq!(sign_eta(s, 1e-5), sign(s));
        }
    }

    #[test]
    fn eta_entropy_examples() {
        let eta = 0.2;
        assert_eq!(eta_entropy(0.4, 0.4, eta), 0.0);
        let v = eta_entropy(0.1 + 3.0 * eta, 0.1, eta);
        assert!((v - (2.0 * eta + 2.0 * eta / PI)).abs() < 1e-14);
    }

    #[test]
    fn eta_entropy_matches_direct_quadrature() {
        let eta = 0.15;
        for &(u, psi) in &[(0.9, 0.2), (-0.3, 0.4), (0.25, 0.2), (0.1, 0.18)] {
            let direct =
                adaptive_simpson_pieces(&|z| sign_eta(z - psi, eta), psi, u, &[psi - eta, psi + eta], 1e-13).unwrap();
            assert!((direct - eta_entropy(u, psi, eta)).abs() < 1e-12);
        }
    }

    #[test]
    fn eta_entropy_gap_bound() {
        // The gap |psi_eta - |u - psi|| peaks at eta (1 - 2/pi) for |u - psi| >= eta.
        for eta in [1e-1, 1e-2, 1e-3] {
            let mut worst = 0.0f64;
            for k in 0..=4000 {
                let u = -1.0 + 2.0 * k as f64 / 4000.0;
                worst = worst.max((eta_entropy(u, 0.05, eta) - (u - 0.05).abs()).abs());
            }
            assert!(worst <= eta);
            assert!((worst - eta * (1.0 - 2.0 / PI)).abs() < 1e-12);
        }
    }

    #[test]
    fn entropy_flux_examples() {
        let b = FluxModel::burgers();
        assert_eq!(eta_entropy_flux(0.3, 0.3, 0.1, &b).unwrap(), 0.0);
        // small eta: sign(z) z integrated over [0, 1]
        let q = eta_entropy_flux(1.0, 0.0, 1e-6, &b).unwrap();
        assert!((q - 0.5).abs() < 1e-9);
        assert!((q - kruzkov_flux(1.0, 0.0, &b)).abs() < 1e-9);
        let lin = FluxModel::linear(2.5);
        for &(u, psi, eta) in &[(0.8, 0.1, 0.05), (-0.4, 0.3, 0.2), (0.31, 0.3, 0.1)] {
            let q = eta_entropy_flux(u, psi, eta, &lin).unwrap();
            assert!((q - 2.5 * eta_entropy(u, psi, eta)).abs() < 1e-9);
        }
    }

    #[test]
    fn entropy_flux_derivative_relation() {
        // d/du Q_eta = psi_eta'(u) f'(u)
        let b = FluxModel::burgers();
        let (psi, eta, h) = (0.2, 0.1, 1e-5);
        for u in [-0.5, 0.15, 0.25, 0.9] {
            let fd = (eta_entropy_flux(u + h, psi, eta, &b).unwrap() - eta_entropy_flux(u - h, psi, eta, &b).unwrap())
                / (2.0 * h);
            assert!((fd - sign_eta(u - psi, eta) * u).abs() < 1e-6);
        }
    }

    proptest! {
        #[test]
        fn eta_entropy_convex(psi in -1.0f64..1.0, eta in 1e-3f64..0.5, u in -2.0f64..2.0) {
            let h = 1e-3;
            let second = eta_entropy(u + h, psi, eta) - 2.0 * eta_entropy(u, psi, eta) + eta_entropy(u - h, psi, eta);
            prop_assert!(second >= -1e-12);
        }

        #[test]
        fn eta_entropy_within_eta(psi in -1.0f64..1.0, eta in 1e-4f64..0.5, u in -2.0f64..2.0) {
            prop_assert!((eta_entropy(u, psi, eta) - (u - psi).abs()).abs() <= eta);
        }

        #[test]
        fn sign_eta_odd(s in -1.0f64..1.0, eta in 1e-3f64..1.0) {
            prop_assert_eq!(sign_eta(-s, eta), -sign_eta(s, eta));
        }
    }
}
