//! Viscous approximation of `u_t + f(u)_y = u_xx` and tools to check how it
//! approaches the entropy solution as the added viscosity `eps u_yy` vanishes.
//!
//! - [`grid`]: rectangle discretization and cell-centered fields
//! - [`flux`]: flux models and the Godunov flux
//! - [`solver`]: operator-splitting time stepping
//! - [`reference`]: exact and discrete reference solutions
//! - [`entropy`]: test functions, entropy pairs, weak and entropy residuals
//! - [`diagnostics`]: mass, total variation, cone-restricted errors, rate fits
//! - [`experiment`]: config-driven workflows behind the command-line tool

// Negated float comparisons are deliberate so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod diagnostics;
pub mod entropy;
pub mod error;
pub mod experiment;
pub mod flux;
pub mod grid;
pub mod quadrature;
pub mod reference;
pub mod solver;
pub mod tridiag;

pub use diagnostics::{cone_l1_error, mass, rate_fit, time_derivative_l1, total_variation, RateReport};
pub use entropy::ConeSpec;
pub use error::{Error, Result};
pub use flux::{lipschitz_bound, numerical_flux, FluxModel};
pub use grid::{project_initial, Field, GridSpec, TimeSpec};
pub use reference::{
    exact_1d_riemann_burgers, exact_linear_gaussian, reference_field, InitialData, ReferenceSpec, YProfile,
};
pub use solver::{advance, Boundary, SolveResult, SolverConfig, Splitting};
