//! Convective flux functions and the Godunov numerical flux.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Number of derivative samples used by [`lipschitz_bound`].
pub const LIPSCHITZ_SAMPLES: usize = 2048;
/// Multiplicative margin applied to the sampled max of |f'|.
pub const LIPSCHITZ_SAFETY: f64 = 1.01;

const FLUX_SAMPLES: usize = 2048;

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum FluxModel {
    /// f(u) = a u
    Linear { a: f64 },
    /// f(u) = u^2 / 2
    Burgers,
    /// User-supplied flux with its derivative. Godunov flux falls back to sampling.
    Custom {
        label: String,
        eval: ScalarFn,
        deriv: ScalarFn,
    },
}

impl fmt::Debug for FluxModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FluxModel({})", self.label())
    }
}

impl FluxModel {
    pub fn linear(a: f64) -> Self {
        FluxModel::Linear { a }
    }

    pub fn burgers() -> Self {
        FluxModel::Burgers
    }

    pub fn custom<F, D>(label: impl Into<String>, eval: F, deriv: D) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        FluxModel::Custom {
            label: label.into(),
            eval: Arc::new(eval),
            deriv: Arc::new(deriv),
        }
    }

    /// Parses `"burgers"` or `"linear:a=<v>"`.
    pub fn from_label(label: &str) -> Result<Self> {
        let label = label.trim();
        if label == "burgers" {
            return Ok(FluxModel::Burgers);
        }
        if let Some(rest) = label.strip_prefix("linear:") {
            let value = rest
                .trim()
                .strip_prefix("a=")
                .ok_or_else(|| Error::InvalidParameter(format!("expected linear:a=<v>, got `{label}`")))?;
            let a: f64 = value
                .trim()
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad linear speed `{value}`")))?;
            if !a.is_finite() {
                return Err(Error::InvalidParameter(format!("linear speed must be finite, got {a}")));
            }
            return Ok(FluxModel::Linear { a });
        }
        Err(Error::InvalidParameter(format!("unknown flux model `{label}`")))
    }

    pub fn label(&self) -> String {
        match self {
            FluxModel::Linear { a } => format!("linear:a={a}"),
            FluxModel::Burgers => "burgers".to_string(),
            FluxModel::Custom { label, .. } => label.clone(),
        }
    }

    #[inline]
    pub fn eval(&self, u: f64) -> f64 {
        match self {
            FluxModel::Linear { a } => a * u,
            FluxModel::Burgers => 0.5 * u * u,
            FluxModel::Custom { eval, .. } => eval(u),
        }
    }

    #[inline]
    pub fn deriv(&self, u: f64) -> f64 {
        match self {
            FluxModel::Linear { a } => *a,
            FluxModel::Burgers => u,
            FluxModel::Custom { deriv, .. } => deriv(u),
        }
    }
}

/// A value strictly above max |f'| on `[lo, hi]`.
pub fn lipschitz_bound(model: &FluxModel, lo: f64, hi: f64) -> Result<f64> {
    if !(lo <= hi) {
        return Err(Error::InvalidParameter(format!("interval [{lo}, {hi}] is not ordered")));
    }
    let mut max = 0.0f64;
    for k in 0..LIPSCHITZ_SAMPLES {
        let u = lo + (hi - lo) * k as f64 / (LIPSCHITZ_SAMPLES - 1) as f64;
        let d = model.deriv(u);
        if !d.is_finite() {
            return Err(Error::NonFiniteDerivative(u));
        }
        max = max.max(d.abs());
    }
    Ok(max * LIPSCHITZ_SAFETY + 1e-12)
}

/// Godunov flux between left state `a` and right state `b`.
///
/// min of f over [a, b] when a <= b, max of f over [b, a] otherwise.
#[inline]
pub fn numerical_flux(model: &FluxModel, a: f64, b: f64) -> f64 {
    if a == b {
        return model.eval(a);
    }
    match model {
        FluxModel::Linear { a: speed } => {
            if a < b {
                (speed * a).min(speed * b)
            } else {
                (speed * a).max(speed * b)
            }
        }
        FluxModel::Burgers => {
            if a < b {
                if a <= 0.0 && 0.0 <= b {
                    0.0
                } else {
                    (0.5 * a * a).min(0.5 * b * b)
                }
            } else {
                (0.5 * a * a).max(0.5 * b * b)
            }
        }
        FluxModel::Custom { eval, .. } => {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            let mut best = if a < b { f64::INFINITY } else { f64::NEG_INFINITY };
            for k in 0..FLUX_SAMPLES {
                let u = lo + (hi - lo) * k as f64 / (FLUX_SAMPLES - 1) as f64;
                let v = eval(u);
                best = if a < b { best.min(v) } else { best.max(v) };
            }
            best
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cubic() -> FluxModel {
        FluxModel::custom("cubic", |u| u * u * u / 3.0, |u| u * u)
    }

    #[test]
    fn lipschitz_examples() {
        let m = lipschitz_bound(&FluxModel::linear(2.0), -1.0, 1.0).unwrap();
        assert!(m > 2.0 && (m - 2.02).abs() < 1e-9);
        let m = lipschitz_bound(&FluxModel::burgers(), -1.0, 1.0).unwrap();
        assert!(m > 1.0 && (m - 1.01).abs() < 1e-9);
        let m = lipschitz_bound(&FluxModel::burgers(), 0.0, 0.0).unwrap();
        assert!(m > 0.0 && m < 1e-11);
        assert!(lipschitz_bound(&FluxModel::burgers(), 1.0, 0.0).is_err());
        let bad = FluxModel::custom("bad", |u| u, |_| f64::NAN);
        assert!(matches!(
            lipschitz_bound(&bad, 0.0, 1.0),
            Err(Error::NonFiniteDerivative(_))
        ));
    }

    #[test]
    fn godunov_examples() {
        let b = FluxModel::burgers();
        assert_eq!(numerical_flux(&b, 1.0, -1.0), 0.5);
        assert_eq!(numerical_flux(&b, -1.0, 1.0), 0.0);
        let l = FluxModel::linear(3.0);
        assert!((numerical_flux(&l, 0.2, 0.7) - 0.6).abs() < 1e-15);
        // negative speed takes the right state
        let l = FluxModel::linear(-2.0);
        assert!((numerical_flux(&l, 0.2, 0.7) + 1.4).abs() < 1e-15);
    }

    #[test]
    fn sampled_flux_matches_exact_for_burgers() {
        let sampled = FluxModel::custom("burgers-sampled", |u| 0.5 * u * u, |u| u);
        for &(a, b) in &[(1.0, -1.0), (0.3, 0.9), (-0.7, 0.2), (0.8, 0.1), (-0.5, -0.9)] {
            let exact = numerical_flux(&FluxModel::burgers(), a, b);
            let approx = numerical_flux(&sampled, a, b);
            assert!((exact - approx).abs() < 1e-6, "{a} {b}: {exact} vs {approx}");
        }
    }

    #[test]
    fn labels_round_trip() {
        assert!(matches!(FluxModel::from_label("burgers").unwrap(), FluxModel::Burgers));
        match FluxModel::from_label("linear:a=2.5").unwrap() {
            FluxModel::Linear { a } => assert_eq!(a, 2.5),
            _ => panic!(),
        }
        assert_eq!(FluxModel::linear(-1.5).label(), "linear:a=-1.5");
        assert!(FluxModel::from_label("linear:b=1").is_err());
        assert!(FluxModel::from_label("euler").is_err());
    }

    #[test]
    fn builtin_derivatives_match_finite_differences() {
        let h = 1e-6;
        for model in [FluxModel::linear(1.7), FluxModel::burgers()] {
            for k in 0..50 {
                let u = -2.0 + 4.0 * k as f64 / 49.0;
                let fd = (model.eval(u + h) - model.eval(u - h)) / (2.0 * h);
                assert!((fd - model.deriv(u)).abs() < 1e-8);
            }
        }
    }

    fn models() -> Vec<FluxModel> {
        vec![
            FluxModel::linear(1.3),
            FluxModel::linear(-0.7),
            FluxModel::burgers(),
            cubic(),
        ]
    }

    #[test]
    fn godunov_monotone_on_pair_grid() {
        let delta = 1e-3;
        for model in models() {
            for p in 0..21 {
                for q in 0..21 {
                    let a = -1.0 + 0.1 * p as f64;
                    let b = -1.0 + 0.1 * q as f64;
                    let f = numerical_flux(&model, a, b);
                    assert!(numerical_flux(&model, a + delta, b) >= f - 1e-12);
                    assert!(numerical_flux(&model, a, b + delta) <= f + 1e-12);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn consistency(u in -5.0f64..5.0) {
            for model in models() {
                prop_assert!((numerical_flux(&model, u, u) - model.eval(u)).abs() <= 1e-12);
            }
        }

        #[test]
        fn bound_dominates_samples(lo in -3.0f64..3.0, w in 0.0f64..3.0) {
            for model in models() {
                let m = lipschitz_bound(&model, lo, lo + w).unwrap();
                for k in 0..=100 {
                    let u = lo + w * k as f64 / 100.0;
                    prop_assert!(m > model.deriv(u).abs());
                }
            }
        }
    }
}
