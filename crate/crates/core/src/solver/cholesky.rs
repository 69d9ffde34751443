//! Up-looking sparse Cholesky factorization with an approximate minimum
//! degree ordering.

use super::{SolverError, SparseMatrix};

/// `P A P^T = L L^T` with `L` stored by columns, diagonal entry first.
#[derive(Debug, Clone)]
pub struct Cholesky {
    n: usize,
    /// `perm[k]` is the original index of pivot `k`.
    perm: Vec<usize>,
    lp: Vec<usize>,
    li: Vec<usize>,
    lx: Vec<f64>,
    min_pivot: f64,
    max_pivot: f64,
}

/// Nonzero pattern of row `k` of `L` in topological order, written to
/// `stack[top..]`; returns `top`.
fn ereach(cp: &[usize], ci: &[usize], k: usize, parent: &[usize], stack: &mut [usize], mark: &mut [usize]) -> usize {
    let n = parent.len();
    let mut top = n;
    mark[k] = k;
    for &start in &ci[cp[k]..cp[k + 1]] {
        if start > k {
            continue;
        }
        let mut i = start;
        let mut len = 0;
        while mark[i] != k {
            stack[len] = i;
            len += 1;
            mark[i] = k;
            i = parent[i];
        }
        while len > 0 {
            top -= 1;
            len -= 1;
            stack[top] = stack[len];
        }
    }
    top
}

impl Cholesky {
    pub fn factor(a: &SparseMatrix) -> Result<Self, SolverError> {
        if a.nrows() != a.ncols() {
            return Err(SolverError::NotSquare(a.nrows(), a.ncols()));
        }
        if !a.is_symmetric() {
            return Err(SolverError::NotSymmetric(a.symmetry_error()));
        }
        let n = a.nrows();
        if n == 0 {
            return Ok(Self { n, perm: Vec::new(), lp: vec![0], li: Vec::new(), lx: Vec::new(), min_pivot: f64::INFINITY, max_pivot: 0.0 });
        }
        let (perm, pinv, _) = amd::order(n, a.row_ptr(), a.col_idx(), &amd::Control::default())
            .map_err(|s| SolverError::Ordering(format!("{s:?}")))?;

        // Upper triangle of P A P^T by columns, rows sorted.
        let mut cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for r in 0..n {
            for (c, v) in a.row(r) {
                let (i, j) = (pinv[r], pinv[c]);
                if i <= j {
                    cols[j].push((i, v));
                }
            }
        }
        let mut cp = vec![0; n + 1];
        let mut ci = Vec::new();
        let mut cx = Vec::new();
        for (j, col) in cols.iter_mut().enumerate() {
            col.sort_by_key(|e| e.0);
            ci.extend(col.iter().map(|e| e.0));
            cx.extend(col.iter().map(|e| e.1));
            cp[j + 1] = ci.len();
        }
        drop(cols);

        // Elimination tree.
        const NONE: usize = usize::MAX;
        let mut parent = vec![NONE; n];
        let mut ancestor = vec![NONE; n];
        for k in 0..n {
            for &i0 in &ci[cp[k]..cp[k + 1]] {
                let mut i = i0;
                while i != NONE && i < k {
                    let next = ancestor[i];
                    ancestor[i] = k;
                    if next == NONE {
                        parent[i] = k;
                    }
                    i = next;
                }
            }
        }

        // Column counts from the row patterns.
        let mut stack = vec![0; n];
        let mut mark = vec![NONE; n];
        let mut counts = vec![1usize; n];
        for k in 0..n {
            let top = ereach(&cp, &ci, k, &parent, &mut stack, &mut mark);
            for &i in &stack[top..] {
                counts[i] += 1;
            }
        }
        let mut lp = vec![0; n + 1];
        for j in 0..n {
            lp[j + 1] = lp[j] + counts[j];
        }
        let nnz = lp[n];
        let mut li = vec![0; nnz];
        let mut lx = vec![0.0; nnz];
        let mut next: Vec<usize> = lp[..n].to_vec();
        let mut x = vec![0.0; n];
        mark.iter_mut().for_each(|m| *m = NONE);
        let (mut min_pivot, mut max_pivot) = (f64::INFINITY, 0.0f64);

        for k in 0..n {
            let top = ereach(&cp, &ci, k, &parent, &mut stack, &mut mark);
            for p in cp[k]..cp[k + 1] {
                x[ci[p]] = cx[p];
            }
            let mut d = x[k];
            x[k] = 0.0;
            for &i in &stack[top..] {
                let lki = x[i] / lx[lp[i]];
                x[i] = 0.0;
                for p in lp[i] + 1..next[i] {
                    x[li[p]] -= lx[p] * lki;
                }
                d -= lki * lki;
                let p = next[i];
                next[i] += 1;
                li[p] = k;
                lx[p] = lki;
            }
            if !(d > 0.0) {
                return Err(SolverError::NonPositivePivot { index: perm[k], pivot: d });
            }
            min_pivot = min_pivot.min(d);
            max_pivot = max_pivot.max(d);
            let p = next[k];
            next[k] += 1;
            li[p] = k;
            lx[p] = d.sqrt();
        }
        Ok(Self { n, perm, lp, li, lx, min_pivot, max_pivot })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Smallest pivot `d_k` (the square of the diagonal of `L`).
    pub fn min_pivot(&self) -> f64 {
        self.min_pivot
    }

    pub fn max_pivot(&self) -> f64 {
        self.max_pivot
    }

    pub fn factor_nnz(&self) -> usize {
        self.lx.len()
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        assert_eq!(b.len(), self.n);
        let mut x: Vec<f64> = self.perm.iter().map(|&i| b[i]).collect();
        for j in 0..self.n {
            x[j] /= self.lx[self.lp[j]];
            let xj = x[j];
            for p in self.lp[j] + 1..self.lp[j + 1] {
                x[self.li[p]] -= self.lx[p] * xj;
            }
        }
        for j in (0..self.n).rev() {
            let mut s = x[j];
            for p in self.lp[j] + 1..self.lp[j + 1] {
                s -= self.lx[p] * x[self.li[p]];
            }
            x[j] = s / self.lx[self.lp[j]];
        }
        let mut out = vec![0.0; self.n];
        for (k, &i) in self.perm.iter().enumerate() {
            out[i] = x[k];
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    fn laplacian(n: usize) -> SparseMatrix {
        let idx = |i: usize, j: usize| i * n + j;
        let mut t = Vec::new();
        for i in 0..n {
            for j in 0..n {
                t.push((idx(i, j), idx(i, j), 4.0));
                if i + 1 < n {
                    t.push((idx(i, j), idx(i + 1, j), -1.0));
                    t.push((idx(i + 1, j), idx(i, j), -1.0));
                }
                if j + 1 < n {
                    t.push((idx(i, j), idx(i, j + 1), -1.0));
                    t.push((idx(i, j + 1), idx(i, j), -1.0));
                }
            }
        }
        SparseMatrix::from_triplets(n * n, n * n, t).with_symmetric_flag()
    }

    #[test]
    fn solves_laplacian_against_dense() {
        let a = laplacian(12);
        let b: Vec<f64> = (0..a.nrows()).map(|i| ((i * 7) % 11) as f64 - 5.0).collect();
        let x = Cholesky::factor(&a).unwrap().solve(&b);
        let xd = a.to_dense().lu().solve(&nalgebra::DVector::from_vec(b.clone())).unwrap();
        for (u, v) in x.iter().zip(xd.iter()) {
            assert!((u - v).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_indefinite() {
        let a = SparseMatrix::from_dense(&DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0])).with_symmetric_flag();
        assert!(matches!(Cholesky::factor(&a), Err(SolverError::NonPositivePivot { .. })));
        let u = SparseMatrix::from_dense(&DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0])).with_symmetric_flag();
        assert!(matches!(Cholesky::factor(&u), Err(SolverError::NotSymmetric(_))));
    }
}
