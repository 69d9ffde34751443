//! Jacobi-preconditioned conjugate gradients.

use super::sparse::{dot, norm};
use super::{SolverError, SparseMatrix};

/// Solves `a x = b` to relative residual `tol`, starting from zero, with at
/// most `10 n` iterations. Returns the solution and the iteration count.
pub fn pcg(a: &SparseMatrix, b: &[f64], tol: f64) -> Result<(Vec<f64>, usize), SolverError> {
    let n = a.nrows();
    let nb = norm(b);
    let mut x = vec![0.0; n];
    if nb == 0.0 {
        return Ok((x, 0));
    }
    let inv_diag: Vec<f64> = a
        .diagonal()
        .iter()
        .map(|&d| if d > 0.0 { 1.0 / d } else { 1.0 })
        .collect();
    let mut r = b.to_vec();
    let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(r, d)| r * d).collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let cap = 10 * n.max(1);
    for it in 1..=cap {
        let ap = a.mul_vec(&p);
        let pap = dot(&p, &ap);
        if !(pap > 0.0) {
            return Err(SolverError::NotPositiveDefinite { curvature: pap, iteration: it });
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        if norm(&r) <= tol * nb {
            // Guard against drift of the recursive residual.
            let true_res = super::relative_residual(a, &x, b);
            if true_res <= tol {
                return Ok((x, it));
            }
            r = b.iter().zip(a.mul_vec(&x)).map(|(b, ax)| b - ax).collect();
        }
        for i in 0..n {
            z[i] = r[i] * inv_diag[i];
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    Err(SolverError::NotConverged { iterations: cap, residual: super::relative_residual(a, &x, b) })
}
