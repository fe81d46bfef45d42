//! Smooth spatial comparison profiles psi(x) for the entropy inequality.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PsiProfile {
    Constant {
        c: f64,
    },
    /// p + q x
    Affine {
        p: f64,
        q: f64,
    },
    /// A exp(-x^2 / (2 sigma^2))
    Gaussian {
        amplitude: f64,
        sigma: f64,
    },
    /// A sin(k x)
    Sinusoid {
        amplitude: f64,
        k: f64,
    },
}

impl PsiProfile {
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            PsiProfile::Constant { c } => c,
            PsiProfile::Affine { p, q } => p + q * x,
            PsiProfile::Gaussian { amplitude, sigma } => amplitude * (-(x * x) / (2.0 * sigma * sigma)).exp(),
            PsiProfile::Sinusoid { amplitude, k } => amplitude * (k * x).sin(),
        }
    }

    pub fn second_deriv(&self, x: f64) -> f64 {
        match *self {
            PsiProfile::Constant { .. } | PsiProfile::Affine { .. } => 0.0,
            PsiProfile::Gaussian { amplitude, sigma } => {
                let s2 = sigma * sigma;
                amplitude * (-(x * x) / (2.0 * s2)).exp() * (x * x / (s2 * s2) - 1.0 / s2)
            }
            PsiProfile::Sinusoid { amplitude, k } => -amplitude * k * k * (k * x).sin(),
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, PsiProfile::Constant { .. })
    }

    /// Parses `const:<c>`, `affine:p=<p>,q=<q>`, `gaussian:A=<a>,sigma=<s>` or `sinusoid:A=<a>,k=<k>`.
    pub fn from_label(label: &str) -> Result<Self> {
        let label = label.trim();
        let (kind, args) = label.split_once(':').unwrap_or((label, ""));
        let bad = |msg: &str| Error::InvalidParameter(format!("psi `{label}`: {msg}"));
        if kind == "const" {
            let c = args.trim().parse().map_err(|_| bad("expected const:<value>"))?;
            return Ok(PsiProfile::Constant { c });
        }
        let mut params = std::collections::BTreeMap::new();
        for part in args.split(',').filter(|s| !s.trim().is_empty()) {
            let (k, v) = part.split_once('=').ok_or_else(|| bad("expected key=value"))?;
            let v: f64 = v.trim().parse().map_err(|_| bad("non-numeric parameter"))?;
            params.insert(k.trim().to_string(), v);
        }
        let get = |k: &str| params.get(k).copied().ok_or_else(|| bad(&format!("missing `{k}`")));
        let profile = match kind {
            "affine" => PsiProfile::Affine {
                p: get("p")?,
                q: get("q")?,
            },
            "gaussian" => PsiProfile::Gaussian {
                amplitude: get("A")?,
                sigma: get("sigma")?,
            },
            "sinusoid" => PsiProfile::Sinusoid {
                amplitude: get("A")?,
                k: get("k")?,
            },
            _ => return Err(bad("unknown profile kind")),
        };
        if let PsiProfile::Gaussian { sigma, .. } = profile {
            if !(sigma > 0.0) {
                return Err(bad("sigma must be positive"));
            }
        }
        Ok(profile)
    }

    pub fn label(&self) -> String {
        match *self {
            PsiProfile::Constant { c } => format!("const:{c}"),
            PsiProfile::Affine { p, q } => format!("affine:p={p},q={q}"),
            PsiProfile::Gaussian { amplitude, sigma } => format!("gaussian:A={amplitude},sigma={sigma}"),
            PsiProfile::Sinusoid { amplitude, k } => format!("sinusoid:A={amplitude},k={k}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn second_derivatives_match_finite_differences() {
        let h = 1e-4;
        let profiles = [
            PsiProfile::Constant { c: 0.3 },
            PsiProfile::Affine { p: 0.5, q: -0.2 },
            PsiProfile::Gaussian {
                amplitude: 0.7,
                sigma: 0.4,
            },
            PsiProfile::Sinusoid { amplitude: 0.2, k: 3.0 },
        ];
        for p in profiles {
            for k in 0..21 {
                let x = -1.0 + 0.1 * k as f64;
                let fd = (p.eval(x + h) - 2.0 * p.eval(x) + p.eval(x - h)) / (h * h);
                assert!((fd - p.second_deriv(x)).abs() < 1e-5, "{p:?} at {x}");
            }
        }
    }

    #[test]
    fn labels_parse() {
        for label in [
            "const:0.25",
            "affine:p=0.5,q=0.1",
            "gaussian:A=0.5,sigma=0.3",
            "sinusoid:A=0.2,k=3",
        ] {
            let p = PsiProfile::from_label(label).unwrap();
            assert_eq!(PsiProfile::from_label(&p.label()).unwrap(), p);
        }
        assert!(PsiProfile::from_label("affine:p=0.5").is_err());
        assert!(PsiProfile::from_label("cubic:a=1").is_err());
        assert!(PsiProfile::from_label("gaussian:A=1,sigma=0").is_err());
    }
}
