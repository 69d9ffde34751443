//! Static condensation of dofs supported on a single element.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use super::{SolverError, SparseMatrix};
use crate::assembly::BlockSystem;

#[derive(Debug, Clone)]
struct LocalElimination {
    internal: Vec<usize>,
    external: Vec<usize>,
    /// `K_II^-1 K_IE`.
    x: DMatrix<f64>,
    /// `K_II^-1 r_I`.
    y: DVector<f64>,
}

/// Schur complement on the dofs shared between elements, with the data
/// needed to recover the eliminated ones.
#[derive(Debug, Clone)]
pub struct CondensedSystem {
    pub matrix: SparseMatrix,
    pub rhs: Vec<f64>,
    /// System index of each condensed unknown, ascending.
    pub kept: Vec<usize>,
    full_dim: usize,
    elements: Vec<LocalElimination>,
}

impl CondensedSystem {
    pub fn dim(&self) -> usize {
        self.kept.len()
    }

    /// Full system vector from a solution of the condensed system.
    pub fn expand(&self, xe: &[f64]) -> Vec<f64> {
        let mut x = vec![0.0; self.full_dim];
        for (k, &i) in self.kept.iter().enumerate() {
            x[i] = xe[k];
        }
        for el in &self.elements {
            let ext = DVector::from_iterator(el.external.len(), el.external.iter().map(|&i| x[i]));
            let xi = &el.y - &el.x * ext;
            for (k, &i) in el.internal.iter().enumerate() {
                x[i] = xi[k];
            }
        }
        x
    }
}

/// Eliminates, element by element, every free moment dof and every free
/// rotation or deflection dof whose support is a single element.
pub fn condense(sys: &BlockSystem) -> Result<CondensedSystem, SolverError> {
    if !sys.is_hybrid() {
        return Err(SolverError::NotHybrid);
    }
    let sp = &sys.spaces;
    let l = &sys.layout;
    let n = sys.dim();
    let mesh = sp.mesh();
    let k = &sys.matrix;

    let mut internal_of = vec![false; n];
    let groups: Vec<Vec<usize>> = (0..mesh.num_triangles())
        .map(|t| {
            let mut g: Vec<usize> = sp.moment.element_dofs(t).iter().filter_map(|&d| l.moment.index[d]).collect();
            g.extend(sp.rotation.element_dofs(t).iter().filter(|&&d| sp.rotation.is_local(d)).filter_map(|&d| l.rotation.index[d]));
            g.extend(
                sp.deflection.element_dofs(t).iter().filter(|&&d| sp.deflection.is_local(d)).filter_map(|&d| l.deflection.index[d]),
            );
            g
        })
        .collect();
    for g in &groups {
        for &i in g {
            internal_of[i] = true;
        }
    }
    let kept: Vec<usize> = (0..n).filter(|&i| !internal_of[i]).collect();
    let mut pos = vec![usize::MAX; n];
    for (c, &i) in kept.iter().enumerate() {
        pos[i] = c;
    }

    let elements: Vec<LocalElimination> = groups
        .into_par_iter()
        .enumerate()
        .map(|(t, internal)| {
            let mut external: Vec<usize> =
                internal.iter().flat_map(|&i| k.row(i).map(|(j, _)| j)).filter(|&j| !internal_of[j]).collect();
            external.sort_unstable();
            external.dedup();
            let ni = internal.len();
            let kii = DMatrix::from_fn(ni, ni, |a, b| k.get(internal[a], internal[b]));
            let kie = DMatrix::from_fn(ni, external.len(), |a, b| k.get(internal[a], external[b]));
            let ri = DVector::from_iterator(ni, internal.iter().map(|&i| sys.rhs[i]));
            let lu = kii.lu();
            let singular = SolverError::SingularElement { element: t };
            let x = lu.solve(&kie).ok_or(singular.clone())?;
            let y = lu.solve(&ri).ok_or(singular.clone())?;
            if !x.iter().chain(y.iter()).all(|v| v.is_finite()) {
                return Err(singular);
            }
            Ok(LocalElimination { internal, external, x, y })
        })
        .collect::<Result<_, _>>()?;

    let mut trip = Vec::new();
    let mut rhs: Vec<f64> = kept.iter().map(|&i| sys.rhs[i]).collect();
    for &i in &kept {
        for (j, v) in k.row(i) {
            if !internal_of[j] {
                trip.push((pos[i], pos[j], v));
            }
        }
    }
    for el in &elements {
        let kei = DMatrix::from_fn(el.external.len(), el.internal.len(), |a, b| k.get(el.external[a], el.internal[b]));
        let s = &kei * &el.x;
        let r = &kei * &el.y;
        for (a, &ea) in el.external.iter().enumerate() {
            rhs[pos[ea]] -= r[a];
            for (b, &eb) in el.external.iter().enumerate() {
                trip.push((pos[ea], pos[eb], -s[(a, b)]));
            }
        }
    }
    let m = kept.len();
    let matrix = symmetrized(SparseMatrix::from_triplets(m, m, trip));
    Ok(CondensedSystem { matrix, rhs, kept, full_dim: n, elements })
}

/// `(S + S^T) / 2`, removing the rounding asymmetry of the local products.
fn symmetrized(s: SparseMatrix) -> SparseMatrix {
    let st = s.transpose();
    let mut t = Vec::with_capacity(2 * s.nnz());
    for i in 0..s.nrows() {
        t.extend(s.row(i).map(|(j, v)| (i, j, 0.5 * v)));
        t.extend(st.row(i).map(|(j, v)| (i, j, 0.5 * v)));
    }
    SparseMatrix::from_triplets(s.nrows(), s.ncols(), t).with_symmetric_flag()
}
