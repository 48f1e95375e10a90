//! Preconditioned conjugate gradients.

use alloc::vec;
use alloc::vec::Vec;

use crate::math::sqrt;
use crate::sparse::CsrMatrix;

pub const DEFAULT_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preconditioner {
    None,
    Jacobi,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveReport {
    pub iterations: usize,
    /// `‖A u - rhs‖₂ / ‖rhs‖₂` of the returned iterate.
    pub final_relative_residual: f64,
    pub converged: bool,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solves `A u = rhs` for symmetric positive definite `A`, starting from
/// zero. Stops once the relative residual drops to `tol`; after `max_iter`
/// iterations the last iterate is returned with `converged = false`.
pub fn cg_solve(
    a: &CsrMatrix,
    rhs: &[f64],
    tol: f64,
    max_iter: usize,
    preconditioner: Preconditioner,
) -> (Vec<f64>, SolveReport) {
    let n = a.n_rows();
    assert_eq!(rhs.len(), n);
    let mut u = vec![0.0; n];
    let rhs_norm = sqrt(dot(rhs, rhs));
    if rhs_norm == 0.0 {
        return (
            u,
            SolveReport {
                iterations: 0,
                final_relative_residual: 0.0,
                converged: true,
            },
        );
    }
    let inv_diag: Vec<f64> = match preconditioner {
        Preconditioner::None => vec![1.0; n],
        Preconditioner::Jacobi => a
            .diagonal()
            .iter()
            .map(|&d| if d != 0.0 { 1.0 / d } else { 1.0 })
            .collect(),
    };

    let mut r = rhs.to_vec();
    let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(r, d)| r * d).collect();
    let mut p = z.clone();
    let mut ap = vec![0.0; n];
    let mut rz = dot(&r, &z);
    let mut rel = 1.0;
    let mut iterations = 0;
    while iterations < max_iter {
        a.mul_vec_into(&p, &mut ap);
        let pap = dot(&p, &ap);
        if pap <= 0.0 {
            break;
        }
        let step = rz / pap;
        for i in 0..n {
            u[i] += step * p[i];
            r[i] -= step * ap[i];
        }
        iterations += 1;
        rel = sqrt(dot(&r, &r)) / rhs_norm;
        if rel <= tol {
            // the recurrence residual drifts from the true one; confirm and
            // restart from the true residual if needed
            a.mul_vec_into(&u, &mut ap);
            for i in 0..n {
                r[i] = rhs[i] - ap[i];
            }
            rel = sqrt(dot(&r, &r)) / rhs_norm;
            if rel <= tol {
                break;
            }
            for i in 0..n {
                z[i] = r[i] * inv_diag[i];
                p[i] = z[i];
            }
            rz = dot(&r, &z);
            continue;
        }
        for i in 0..n {
            z[i] = r[i] * inv_diag[i];
        }
        let rz_next = dot(&r, &z);
        let beta = rz_next / rz;
        rz = rz_next;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    let final_relative_residual = if rel <= tol {
        rel
    } else {
        a.mul_vec_into(&u, &mut ap);
        let r2: f64 = ap.iter().zip(rhs).map(|(x, b)| (x - b) * (x - b)).sum();
        sqrt(r2) / rhs_norm
    };
    (
        u,
        SolveReport {
            iterations,
            final_relative_residual,
            converged: final_relative_residual <= tol,
        },
    )
}
