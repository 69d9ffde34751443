//! Element duality product, shear recovery and the discrete moment norm.

use nalgebra::DMatrix;

use super::{form_degrees, AssemblyError, Spaces};
use crate::fespace::{element_shapes, interpolate_gradient, FESpace, ShapeTable, SpaceKind};
use crate::material::MaterialParams;
use crate::solver::{cholesky::Cholesky, SparseMatrix};

/// `-int_T tau : eps(eta) + int_dT tau_nn eta_n` for every pair of moment
/// shape `tau` (rows) and rotation shape `eta` (columns). Both tables must
/// use the same quadrature points.
pub fn duality_product_element(tau: &ShapeTable, eta: &ShapeTable) -> DMatrix<f64> {
    let nm = tau.volume.values.first().map_or(0, Vec::len);
    let nth = eta.volume.values.first().map_or(0, Vec::len);
    let mut b = DMatrix::zeros(nm, nth);
    for q in 0..tau.volume.points.len() {
        let w = tau.volume.weights[q];
        for (i, t) in tau.volume.values[q].iter().enumerate() {
            for (j, s) in eta.volume.strains[q].iter().enumerate() {
                b[(i, j)] -= w * (t[0] * s[0] + t[1] * s[1] + t[2] * s[2]);
            }
        }
    }
    for (et, ee) in tau.edges.iter().zip(&eta.edges) {
        for q in 0..et.points.len() {
            for i in 0..nm {
                let a = et.weights[q] * et.normal_trace[q][i];
                for j in 0..nth {
                    b[(i, j)] += a * ee.normal_trace[q][j];
                }
            }
        }
    }
    b
}

/// Shear `gamma_h = mu t^-2 (grad w_h - theta_h)` as rotation coefficients.
pub fn recover_shear(spaces: &Spaces, material: &MaterialParams, theta: &[f64], w: &[f64]) -> Result<Vec<f64>, AssemblyError> {
    let penalty = material.shear_penalty()?;
    let grad = interpolate_gradient(&spaces.deflection, &spaces.rotation, w)?;
    if theta.len() != grad.len() {
        return Err(AssemblyError::Incompatible("rotation coefficient length".into()));
    }
    Ok(grad.iter().zip(theta).map(|(g, t)| penalty * (g - t)).collect())
}

/// Residual of `int (grad w - theta) . delta - mu^-1 t^2 int gamma . delta`
/// over all rotation basis functions `delta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShearResidual {
    pub max_abs: f64,
    /// Largest summed magnitude `int |grad w||delta| + int |theta||delta|
    /// + mu^-1 t^2 int |gamma||delta|` of the individual terms.
    pub scale: f64,
}

impl ShearResidual {
    pub fn relative(&self) -> f64 {
        if self.scale > 0.0 {
            self.max_abs / self.scale
        } else {
            self.max_abs
        }
    }
}

pub fn shear_residual(
    spaces: &Spaces,
    material: &MaterialParams,
    theta: &[f64],
    w: &[f64],
    gamma: &[f64],
) -> Result<ShearResidual, AssemblyError> {
    let inv = 1.0 / material.shear_penalty()?;
    let th = &spaces.rotation;
    let n = th.ndof();
    let mut res = vec![0.0; n];
    let mut mag = vec![0.0; n];
    let (vd, _) = form_degrees(spaces.order());
    for t in 0..spaces.mesh().num_triangles() {
        let tt = element_shapes(th, t, vd, 1);
        let tw = element_shapes(&spaces.deflection, t, vd, 1);
        let dth = th.element_dofs(t);
        let dw = spaces.deflection.element_dofs(t);
        for q in 0..tt.volume.points.len() {
            let wq = tt.volume.weights[q];
            let mut gw = [0.0; 2];
            for (j, &d) in dw.iter().enumerate() {
                gw[0] += w[d] * tw.volume.gradients[q][j][0];
                gw[1] += w[d] * tw.volume.gradients[q][j][1];
            }
            let (mut thv, mut gav) = ([0.0; 2], [0.0; 2]);
            for (j, &d) in dth.iter().enumerate() {
                let v = tt.volume.values[q][j];
                for c in 0..2 {
                    thv[c] += theta[d] * v[c];
                    gav[c] += gamma[d] * v[c];
                }
            }
            let norm = |a: [f64; 2]| a[0].hypot(a[1]);
            for (i, &d) in dth.iter().enumerate() {
                let dv = tt.volume.values[q][i];
                let dot = |a: [f64; 2]| a[0] * dv[0] + a[1] * dv[1];
                res[d] += wq * (dot(gw) - dot(thv) - inv * dot(gav));
                let dn = dv[0].hypot(dv[1]);
                mag[d] += wq * dn * (norm(gw) + norm(thv) + inv * norm(gav));
            }
        }
    }
    Ok(ShearResidual {
        max_abs: res.iter().fold(0.0, |m, v| m.max(v.abs())),
        scale: mag.iter().fold(0.0, |m: f64, v| m.max(*v)),
    })
}

/// Parts of the discrete moment norm; `total()` is the norm itself.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentNorm {
    /// `||M||^2_{L2}`.
    pub l2_sq: f64,
    /// `sum_F h_F ||m_nn||^2_{L2(F)}`, averaging the two sides of interior edges.
    pub edge_sq: f64,
    /// `sup_{w_h} <div M, grad w_h>^2 / ||grad w_h||^2`.
    pub sup_sq: f64,
}

impl MomentNorm {
    pub fn total(&self) -> f64 {
        (self.l2_sq + self.edge_sq + self.sup_sq).sqrt()
    }
}

/// Discrete moment norm of `coeffs`. The supremum runs over the free dofs
/// of `deflection`; when none are constrained one dof is pinned, which
/// leaves the supremum unchanged since constants have zero gradient.
pub fn discrete_moment_norm(moment: &FESpace, coeffs: &[f64], deflection: &FESpace) -> Result<MomentNorm, AssemblyError> {
    if !matches!(moment.kind(), SpaceKind::Moment { .. }) || !matches!(deflection.kind(), SpaceKind::Deflection { .. }) {
        return Err(AssemblyError::Incompatible("expected a moment and a deflection space".into()));
    }
    if coeffs.len() != moment.ndof() {
        return Err(AssemblyError::Incompatible(format!("{} coefficients for {} dofs", coeffs.len(), moment.ndof())));
    }
    let mesh = moment.mesh();
    let k = moment.kind().order().max(deflection.kind().order());
    let (vd, ed) = (2 * k + 2, 2 * k + 2);
    let nw = deflection.ndof();
    let mut b = vec![0.0; nw];
    let mut trip = Vec::new();
    let (mut l2_sq, mut edge_sq) = (0.0, 0.0);
    for t in 0..mesh.num_triangles() {
        let tm = element_shapes(moment, t, vd, ed);
        let tw = element_shapes(deflection, t, vd, ed);
        let dm = moment.element_dofs(t);
        let dw = deflection.element_dofs(t);
        for q in 0..tm.volume.points.len() {
            let wq = tm.volume.weights[q];
            let mut m = [0.0; 3];
            for (j, &d) in dm.iter().enumerate() {
                for c in 0..3 {
                    m[c] += coeffs[d] * tm.volume.values[q][j][c];
                }
            }
            l2_sq += wq * (m[0] * m[0] + m[1] * m[1] + 2.0 * m[2] * m[2]);
            for (i, &di) in dw.iter().enumerate() {
                let h = tw.volume.hessians[q][i];
                b[di] -= wq * (m[0] * h[0] + m[1] * h[1] + 2.0 * m[2] * h[2]);
                let gi = tw.volume.gradients[q][i];
                for (j, &dj) in dw.iter().enumerate() {
                    let gj = tw.volume.gradients[q][j];
                    trip.push((di, dj, wq * (gi[0] * gj[0] + gi[1] * gj[1])));
                }
            }
        }
        for (i, e) in mesh.triangle_edges(t).into_iter().enumerate() {
            let (em, ew) = (&tm.edges[i], &tw.edges[i]);
            let side = if mesh.is_boundary_edge(e) { 1.0 } else { 0.5 };
            for q in 0..em.points.len() {
                let mnn: f64 = dm.iter().enumerate().map(|(j, &d)| coeffs[d] * em.normal_trace[q][j]).sum();
                edge_sq += side * mesh.edge_length(e) * em.weights[q] * mnn * mnn;
                for (j, &d) in dw.iter().enumerate() {
                    b[d] += em.weights[q] * mnn * ew.normal_derivative[q][j];
                }
            }
        }
    }
    let mut free: Vec<usize> = (0..nw).filter(|&d| !deflection.is_essential(d)).collect();
    if free.len() == nw && !free.is_empty() {
        free.remove(0);
    }
    let stiffness = SparseMatrix::from_triplets(nw, nw, trip).submatrix(&free, &free).with_symmetric_flag();
    let bf: Vec<f64> = free.iter().map(|&d| b[d]).collect();
    let sup_sq = if free.is_empty() {
        0.0
    } else {
        let chol = Cholesky::factor(&stiffness).map_err(|e| AssemblyError::Solver(e.to_string()))?;
        let y = chol.solve(&bf);
        bf.iter().zip(&y).map(|(a, b)| a * b).sum::<f64>().max(0.0)
    };
    Ok(MomentNorm { l2_sq, edge_sq, sup_sq })
}
