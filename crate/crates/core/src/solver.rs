//! Dense direct and conjugate-gradient solvers for [`SparseSystem`]s.

use std::time::{Duration, Instant};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::sparse::SparseSystem;

/// Largest system accepted by [`solve_dense`].
pub const DENSE_LIMIT: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMethod {
    DenseDirect,
    Cg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Precond {
    #[default]
    None,
    Jacobi,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveStats {
    /// Always 0 for the dense solver.
    pub iterations: usize,
    pub relative_residual: f64,
    pub method: SolveMethod,
    pub wall_time: Duration,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub method: SolveMethod,
    pub tol: f64,
    /// Defaults to `10 · n_unknown` when unset.
    pub max_iter: Option<usize>,
    pub precond: Precond,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { method: SolveMethod::Cg, tol: 1e-12, max_iter: None, precond: Precond::None }
    }
}

impl SolverOptions {
    pub fn dense() -> Self {
        Self { method: SolveMethod::DenseDirect, ..Self::default() }
    }
}

/// Solves with the method selected in `opts`.
pub fn solve(sys: &SparseSystem, opts: &SolverOptions) -> Result<(Vec<f64>, SolveStats)> {
    match opts.method {
        SolveMethod::DenseDirect => solve_dense(sys),
        SolveMethod::Cg => {
            let max_iter = opts.max_iter.unwrap_or(10 * sys.n_unknown());
            solve_cg(sys, opts.tol, max_iter, opts.precond)
        }
    }
}

/// `‖A·x − b‖₂ / max(‖b‖₂, 1)`.
pub fn residual_norm(sys: &SparseSystem, x: &[f64]) -> Result<f64> {
    let ax = sys.matvec(x)?;
    let r: f64 = ax.iter().zip(sys.rhs()).map(|(a, b)| (a - b) * (a - b)).sum();
    Ok(r.sqrt() / norm(sys.rhs()).max(1.0))
}

/// LU factorization with partial pivoting.
pub fn solve_dense(sys: &SparseSystem) -> Result<(Vec<f64>, SolveStats)> {
    let start = Instant::now();
    let n = sys.n_unknown();
    if n > DENSE_LIMIT {
        return Err(Error::TooLarge(n));
    }
    let a = DMatrix::from_row_slice(n, n, &sys.to_dense());
    let b = DVector::from_column_slice(sys.rhs());
    let x = a.lu().solve(&b).ok_or(Error::Singular)?;
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::Singular);
    }
    let x: Vec<f64> = x.iter().copied().collect();
    let relative_residual = residual_norm(sys, &x)?;
    let stats = SolveStats {
        iterations: 0,
        relative_residual,
        method: SolveMethod::DenseDirect,
        wall_time: start.elapsed(),
    };
    Ok((x, stats))
}

/// Conjugate gradients from a zero initial guess.
///
/// `A` must be symmetric with a definite diagonal; a negative diagonal
/// means the whole system is negated first. Convergence is declared on
/// the true residual `‖b − A·x‖ / max(‖b‖, 1) ≤ tol`.
pub fn solve_cg(sys: &SparseSystem, tol: f64, max_iter: usize, precond: Precond) -> Result<(Vec<f64>, SolveStats)> {
    let start = Instant::now();
    let n = sys.n_unknown();
    if !sys.is_symmetric(1e-12) {
        return Err(Error::NotSymmetric);
    }
    let diag = sys.diagonal();
    let negated;
    let spd = if diag.iter().all(|&d| d > 0.0) {
        sys
    } else if diag.iter().all(|&d| d < 0.0) {
        negated = sys.negated();
        &negated
    } else {
        return Err(Error::IndefiniteDiagonal);
    };
    let inv_diag: Option<Vec<f64>> = match precond {
        Precond::None => None,
        Precond::Jacobi => Some(spd.diagonal().iter().map(|d| 1.0 / d).collect()),
    };
    let apply_precond = |r: &[f64], z: &mut Vec<f64>| match &inv_diag {
        Some(inv) => z.iter_mut().zip(r.iter().zip(inv)).for_each(|(z, (r, d))| *z = r * d),
        None => z.copy_from_slice(r),
    };

    let b = spd.rhs();
    let b_norm = norm(b).max(1.0);
    let mut x = vec![0.0; n];
    let mut r = b.to_vec();
    let mut z = vec![0.0; n];
    let mut ap = vec![0.0; n];
    let mut iterations = 0;
    let mut rel = norm(&r) / b_norm;

    'outer: while rel > tol {
        apply_precond(&r, &mut z);
        let mut p = z.clone();
        let mut rz = dot(&r, &z);
        loop {
            if iterations >= max_iter {
                break 'outer;
            }
            spd.matvec_into(&p, &mut ap);
            let pap = dot(&p, &ap);
            if pap <= 0.0 || !pap.is_finite() {
                return Err(Error::Singular);
            }
            let alpha = rz / pap;
            axpy(alpha, &p, &mut x);
            axpy(-alpha, &ap, &mut r);
            iterations += 1;
            if norm(&r) / b_norm <= tol {
                // confirm on the true residual; restart from it if the
                // recurrence has drifted
                spd.matvec_into(&x, &mut ap);
                r.iter_mut().zip(b.iter().zip(&ap)).for_each(|(r, (b, ax))| *r = b - ax);
                rel = norm(&r) / b_norm;
                continue 'outer;
            }
            apply_precond(&r, &mut z);
            let rz_next = dot(&r, &z);
            let beta = rz_next / rz;
            rz = rz_next;
            p.iter_mut().zip(&z).for_each(|(p, z)| *p = z + beta * *p);
        }
    }

    let relative_residual = residual_norm(sys, &x)?;
    if relative_residual > tol {
        return Err(Error::MaxIterations { iterations, relative_residual, iterate: x });
    }
    let stats = SolveStats { iterations, relative_residual, method: SolveMethod::Cg, wall_time: start.elapsed() };
    Ok((x, stats))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    y.iter_mut().zip(x).for_each(|(y, x)| *y += alpha * x);
}
