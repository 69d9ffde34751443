//! Linear solvers: static condensation, sparse Cholesky, preconditioned
//! conjugate gradients and a dense cross-check path for the saddle system.

pub mod cg;
pub mod cholesky;
mod condense;
mod sparse;

use nalgebra::DVector;
use thiserror::Error;

pub use condense::{condense, CondensedSystem};
pub use sparse::{relative_residual, rounding_floor, SparseMatrix};

use crate::assembly::{AssemblyError, BlockSystem};
use crate::postprocess::SolutionFields;
use cholesky::Cholesky;

/// Default relative residual tolerance.
pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum SolverError {
    #[error("matrix is {0}x{1}, expected square")]
    NotSquare(usize, usize),
    #[error("matrix is not flagged symmetric (asymmetry {0:e})")]
    NotSymmetric(f64),
    #[error("ordering failed: {0}")]
    Ordering(String),
    #[error("non-positive pivot {pivot:e} at unknown {index}")]
    NonPositivePivot { index: usize, pivot: f64 },
    #[error("conjugate gradients met curvature {curvature:e} at iteration {iteration}")]
    NotPositiveDefinite { curvature: f64, iteration: usize },
    #[error("no convergence in {iterations} iterations (relative residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },
    #[error("singular local block on element {element}")]
    SingularElement { element: usize },
    #[error("factorization of the saddle system broke down")]
    Breakdown,
    #[error("condensation needs a hybrid system")]
    NotHybrid,
    #[error("the dense path needs a monolithic system")]
    NotMonolithic,
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error("{0}")]
    Assembly(String),
}

impl From<AssemblyError> for SolverError {
    fn from(e: AssemblyError) -> Self {
        SolverError::Assembly(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    #[default]
    Direct,
    Cg,
}

impl std::str::FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "direct" => Ok(Method::Direct),
            "cg" => Ok(Method::Cg),
            other => Err(format!("unknown solver '{other}' (direct or cg)")),
        }
    }
}

/// Statistics of one SPD solve.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SolveStats {
    pub dim: usize,
    /// CG iterations, or refinement steps of the direct solve.
    pub iterations: usize,
    /// Pivot range of the Cholesky factorization (direct only).
    pub min_pivot: Option<f64>,
    pub max_pivot: Option<f64>,
    pub factor_nnz: Option<usize>,
    pub residual: f64,
}

/// Solves the SPD system `a x = b`. Conjugate gradients fail unless the
/// relative residual reaches `tol`; the direct path refines toward `tol` and
/// reports what it reached, which cannot go below [`rounding_floor`].
pub fn solve_spd(a: &SparseMatrix, b: &[f64], method: Method, tol: f64) -> Result<Vec<f64>, SolverError> {
    solve_spd_with_stats(a, b, method, tol).map(|(x, _)| x)
}

pub fn solve_spd_with_stats(a: &SparseMatrix, b: &[f64], method: Method, tol: f64) -> Result<(Vec<f64>, SolveStats), SolverError> {
    if !(tol > 0.0) {
        return Err(SolverError::InvalidTolerance(tol));
    }
    if a.nrows() != a.ncols() {
        return Err(SolverError::NotSquare(a.nrows(), a.ncols()));
    }
    if !a.is_symmetric() {
        return Err(SolverError::NotSymmetric(a.symmetry_error()));
    }
    let mut stats = SolveStats { dim: a.nrows(), ..Default::default() };
    let x = match method {
        Method::Direct => {
            let chol = Cholesky::factor(a)?;
            stats.min_pivot = Some(chol.min_pivot());
            stats.max_pivot = Some(chol.max_pivot());
            stats.factor_nnz = Some(chol.factor_nnz());
            let mut x = chol.solve(b);
            let mut res = relative_residual(a, &x, b);
            // A few steps of iterative refinement; stop once they stop helping.
            for _ in 0..3 {
                if res <= tol.min(DEFAULT_TOL) * 1e-3 {
                    break;
                }
                let r: Vec<f64> = b.iter().zip(a.mul_vec(&x)).map(|(b, ax)| b - ax).collect();
                let dx = chol.solve(&r);
                let cand: Vec<f64> = x.iter().zip(&dx).map(|(x, d)| x + d).collect();
                let cres = relative_residual(a, &cand, b);
                if cres >= res {
                    break;
                }
                x = cand;
                res = cres;
                stats.iterations += 1;
            }
            x
        }
        Method::Cg => {
            let (x, it) = cg::pcg(a, b, tol)?;
            stats.iterations = it;
            x
        }
    };
    stats.residual = relative_residual(a, &x, b);
    Ok((x, stats))
}

/// Outcome of solving an assembled system.
#[derive(Debug, Clone)]
pub struct SolveReport {
    pub fields: SolutionFields,
    /// Full system vector.
    pub solution: Vec<f64>,
    /// Dimension of the system actually factored (condensed in hybrid mode).
    pub solved_dim: usize,
    /// Relative residual of the full system.
    pub residual: f64,
    /// Relative residual attainable in double precision, see [`rounding_floor`].
    pub residual_floor: f64,
    pub stats: SolveStats,
}

/// Hybrid system: condense, solve the SPD Schur complement, back-substitute.
pub fn solve_hybrid(system: &BlockSystem, method: Method, tol: f64) -> Result<SolveReport, SolverError> {
    let cs = condense(system)?;
    let (xe, stats) = solve_spd_with_stats(&cs.matrix, &cs.rhs, method, tol)?;
    let x = cs.expand(&xe);
    let residual = relative_residual(&system.matrix, &x, &system.rhs);
    let residual_floor = rounding_floor(&system.matrix, &x, &system.rhs);
    let fields = SolutionFields::from_system(system, &x)?;
    Ok(SolveReport { fields, solution: x, solved_dim: cs.dim(), residual, residual_floor, stats })
}

/// Dense LU solve of a symmetric indefinite system, used as a cross-check.
pub fn solve_dense(system: &BlockSystem, tol: f64) -> Result<SolveReport, SolverError> {
    let n = system.dim();
    let lu = system.matrix.to_dense().lu();
    let solve = |b: &[f64]| -> Result<Vec<f64>, SolverError> {
        let x = lu.solve(&DVector::from_column_slice(b)).ok_or(SolverError::Breakdown)?;
        if x.iter().all(|v| v.is_finite()) {
            Ok(x.iter().copied().collect())
        } else {
            Err(SolverError::Breakdown)
        }
    };
    let mut x = solve(&system.rhs)?;
    let mut residual = relative_residual(&system.matrix, &x, &system.rhs);
    let mut steps = 0;
    while steps < 3 && residual > tol.min(DEFAULT_TOL) * 1e-3 {
        let r: Vec<f64> = system.rhs.iter().zip(system.matrix.mul_vec(&x)).map(|(b, ax)| b - ax).collect();
        let cand: Vec<f64> = x.iter().zip(solve(&r)?).map(|(x, d)| x + d).collect();
        let cres = relative_residual(&system.matrix, &cand, &system.rhs);
        if cres >= residual {
            break;
        }
        x = cand;
        residual = cres;
        steps += 1;
    }
    let residual_floor = rounding_floor(&system.matrix, &x, &system.rhs);
    let fields = SolutionFields::from_system(system, &x)?;
    let stats = SolveStats { dim: n, iterations: steps, residual, ..Default::default() };
    Ok(SolveReport { fields, solution: x, solved_dim: n, residual, residual_floor, stats })
}

/// Monolithic saddle system through the dense path.
pub fn solve_monolithic(system: &BlockSystem, tol: f64) -> Result<SolutionFields, SolverError> {
    if system.is_hybrid() {
        return Err(SolverError::NotMonolithic);
    }
    solve_dense(system, tol).map(|r| r.fields)
}

/// Solves either kind of system: hybrid through condensation, monolithic
/// through the dense path.
pub fn solve_system(system: &BlockSystem, method: Method, tol: f64) -> Result<SolveReport, SolverError> {
    if system.is_hybrid() {
        solve_hybrid(system, method, tol)
    } else {
        solve_dense(system, tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    fn spd(n: usize, seed: u64) -> SparseMatrix {
        let mut s = seed;
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let b = DMatrix::from_fn(n, n, |_, _| next());
        let a = b.transpose() * &b + DMatrix::identity(n, n);
        SparseMatrix::from_dense(&a).with_symmetric_flag()
    }

    #[test]
    fn identity_returns_rhs() {
        let b = vec![1.0, -2.0, 3.5];
        for m in [Method::Direct, Method::Cg] {
            assert_eq!(solve_spd(&SparseMatrix::identity(3).with_symmetric_flag(), &b, m, 1e-12).unwrap(), b);
        }
    }

    #[test]
    fn two_by_two_by_hand() {
        let a = SparseMatrix::from_dense(&DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0])).with_symmetric_flag();
        for m in [Method::Direct, Method::Cg] {
            let x = solve_spd(&a, &[1.0, 1.0], m, 1e-14).unwrap();
            assert!((x[0] - 1.0 / 3.0).abs() < 1e-15 && (x[1] - 1.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn direct_and_cg_agree_on_random_spd() {
        let a = spd(50, 7);
        let b: Vec<f64> = (0..50).map(|i| (i as f64).sin()).collect();
        let tol = 1e-12;
        let xd = solve_spd(&a, &b, Method::Direct, tol).unwrap();
        let (xc, stats) = solve_spd_with_stats(&a, &b, Method::Cg, tol).unwrap();
        assert!(stats.iterations <= 500);
        let diff = xd.iter().zip(&xc).map(|(p, q)| (p - q).powi(2)).sum::<f64>().sqrt();
        assert!(diff <= 1e-9 * sparse::norm(&xd), "{diff}");
    }

    #[test]
    fn rejects_bad_input() {
        let a = SparseMatrix::from_dense(&DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0])).with_symmetric_flag();
        assert!(matches!(solve_spd(&a, &[1.0, 1.0], Method::Direct, 1e-10), Err(SolverError::NonPositivePivot { .. })));
        assert!(matches!(solve_spd(&a, &[0.0, 1.0], Method::Cg, 1e-10), Err(SolverError::NotPositiveDefinite { .. })));
        assert!(matches!(solve_spd(&a, &[1.0, 1.0], Method::Cg, 0.0), Err(SolverError::InvalidTolerance(_))));
    }

    #[test]
    fn cg_is_deterministic() {
        let a = spd(30, 3);
        let b = vec![1.0; 30];
        let x1 = solve_spd(&a, &b, Method::Cg, 1e-12).unwrap();
        let x2 = solve_spd(&a, &b, Method::Cg, 1e-12).unwrap();
        assert!(x1.iter().zip(&x2).all(|(p, q)| p.to_bits() == q.to_bits()));
    }
}
