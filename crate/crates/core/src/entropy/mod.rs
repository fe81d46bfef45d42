//! Entropy-pair and test-function machinery, and the weak/entropy residual checks.

mod mollifier;
mod pair;
mod psi;
mod residual;
mod test_function;

pub use mollifier::{bump, bump_cdf, bump_deriv, Cutoff, Mollifier};
pub use pair::{eta_entropy, eta_entropy_flux, kruzkov_flux, sign, sign_eta, ENTROPY_FLUX_TOL};
pub use psi::PsiProfile;
pub use residual::{entropy_residual, entropy_residual_terms, weak_residual, EntropyTerms};
pub use test_function::{build_test_function, ConeSpec, Ramp, SupportBox, TestFunction, TimeWindow};
