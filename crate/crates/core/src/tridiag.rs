//! Direct tridiagonal solvers (Thomas algorithm and its cyclic variant).
//!
//! Row `k` of the system reads `lower[k] x[k-1] + diag[k] x[k] + upper[k] x[k+1] = rhs[k]`.
//! `lower[0]` and `upper[n-1]` are ignored by [`solve`] and act as the corner
//! couplings in [`solve_cyclic`].

/// Solves in place. `scratch` must hold at least `n` values.
pub fn solve(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &mut [f64], scratch: &mut [f64]) {
    let n = rhs.len();
    debug_assert!(lower.len() == n && diag.len() == n && upper.len() == n);
    debug_assert!(scratch.len() >= n);
    if n == 0 {
        return;
    }
    let mut beta = diag[0];
    assert!(beta != 0.0, "zero pivot in tridiagonal solve");
    rhs[0] /= beta;
    for k in 1..n {
        scratch[k] = upper[k - 1] / beta;
        beta = diag[k] - lower[k] * scratch[k];
        assert!(beta != 0.0, "zero pivot in tridiagonal solve");
        rhs[k] = (rhs[k] - lower[k] * rhs[k - 1]) / beta;
    }
    for k in (0..n - 1).rev() {
        rhs[k] -= scratch[k + 1] * rhs[k + 1];
    }
}

/// Periodic tridiagonal solve via a Sherman–Morrison rank-one correction.
/// Requires `n >= 3`.
pub fn solve_cyclic(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &mut [f64]) {
    let n = rhs.len();
    assert!(n >= 3, "cyclic solve needs at least 3 unknowns");
    let alpha = upper[n - 1];
    let beta = lower[0];
    let gamma = -diag[0];

    let mut bb = diag.to_vec();
    bb[0] = diag[0] - gamma;
    bb[n - 1] = diag[n - 1] - alpha * beta / gamma;

    let mut scratch = vec![0.0; n];
    solve(lower, &bb, upper, rhs, &mut scratch);

    let mut z = vec![0.0; n];
    z[0] = gamma;
    z[n - 1] = alpha;
    solve(lower, &bb, upper, &mut z, &mut scratch);

    let fact = (rhs[0] + beta * rhs[n - 1] / gamma) / (1.0 + z[0] + beta * z[n - 1] / gamma);
    for (x, zk) in rhs.iter_mut().zip(&z) {
        *x -= fact * zk;
    }
}
