//! Assembly of the mixed plate system.
//!
//! The unknowns are ordered `[M | theta | w | lambda]` with essential dofs
//! removed. Both equations are assembled with a negative sign relative to
//! the textbook form, which gives the symmetric matrix
//!
//! ```text
//! [ -A   -B   0   -C ]
//! [ -B^T  S_tt S_tw 0 ]
//! [  0    S_wt S_ww 0 ]
//! [ -C^T  0    0    0 ]
//! ```
//!
//! where `A` is the compliance block, `B` the duality product, `S` the shear
//! term and `C` the multiplier coupling (hybrid mode only). The Schur
//! complement with respect to the moment block is positive definite.

mod bc;
mod diagnostics;

use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

pub use bc::{field, BCSpec, Condition, LoadSpec, MarkerBc, ScalarField};
pub use diagnostics::{
    discrete_moment_norm, duality_product_element, recover_shear, shear_residual, MomentNorm, ShearResidual,
};

use crate::fespace::{build_space, element_shapes, FESpace, FeError, ShapeTable, SpaceKind};
use crate::material::{BendingTensors, MaterialError, MaterialParams};
use crate::mesh::TriMesh;
use crate::solver::SparseMatrix;

#[derive(Debug, Error)]
pub enum AssemblyError {
    #[error(transparent)]
    Space(#[from] FeError),
    #[error(transparent)]
    Material(#[from] MaterialError),
    #[error("incompatible input: {0}")]
    Incompatible(String),
    #[error("auxiliary solve failed: {0}")]
    Solver(String),
}

/// The discrete spaces of one problem.
#[derive(Debug, Clone)]
pub struct Spaces {
    pub moment: FESpace,
    pub rotation: FESpace,
    pub deflection: FESpace,
    pub multiplier: Option<FESpace>,
}

impl Spaces {
    /// Spaces of moment order `k` on `mesh` with the essential conditions of
    /// `bc`. Hybrid mode breaks the moment space and adds multipliers.
    pub fn new(mesh: Arc<TriMesh>, k: usize, bc: &BCSpec, hybrid: bool) -> Result<Self, AssemblyError> {
        let mut markers: Vec<i32> = mesh.boundary_edges().map(|(_, m)| m).collect();
        markers.sort_unstable();
        markers.dedup();
        let [ew, et, em] = bc.essential(markers);
        Ok(Self {
            moment: build_space(mesh.clone(), SpaceKind::Moment { order: k, broken: hybrid }, &em)?,
            rotation: build_space(mesh.clone(), SpaceKind::Rotation { order: k }, &et)?,
            deflection: build_space(mesh.clone(), SpaceKind::Deflection { order: k + 1 }, &ew)?,
            multiplier: if hybrid { Some(build_space(mesh, SpaceKind::Multiplier { order: k }, &[])?) } else { None },
        })
    }

    pub fn order(&self) -> usize {
        self.moment.kind().order()
    }

    pub fn mesh(&self) -> &Arc<TriMesh> {
        self.moment.mesh()
    }

    pub fn is_hybrid(&self) -> bool {
        self.multiplier.is_some()
    }

    fn check(&self) -> Result<(), AssemblyError> {
        let k = self.order();
        let ok = matches!(self.moment.kind(), SpaceKind::Moment { broken, .. } if broken == self.is_hybrid())
            && self.rotation.kind() == SpaceKind::Rotation { order: k }
            && self.deflection.kind() == SpaceKind::Deflection { order: k + 1 }
            && self.multiplier.as_ref().is_none_or(|l| l.kind() == SpaceKind::Multiplier { order: k });
        let same_mesh = [&self.rotation, &self.deflection]
            .into_iter()
            .chain(self.multiplier.as_ref())
            .all(|s| Arc::ptr_eq(s.mesh(), self.moment.mesh()));
        if !ok || !same_mesh {
            return Err(AssemblyError::Incompatible(format!(
                "spaces {:?}, {:?}, {:?}, {:?} do not form one problem",
                self.moment.kind(),
                self.rotation.kind(),
                self.deflection.kind(),
                self.multiplier.as_ref().map(|l| l.kind())
            )));
        }
        Ok(())
    }
}

/// Placement of one field's free dofs in the system.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldMap {
    pub offset: usize,
    /// System index per space dof; `None` for essential dofs.
    pub index: Vec<Option<usize>>,
    pub free: Vec<usize>,
}

impl FieldMap {
    fn new(space: Option<&FESpace>, offset: usize) -> Self {
        let Some(space) = space else {
            return Self { offset, index: Vec::new(), free: Vec::new() };
        };
        let mut index = vec![None; space.ndof()];
        let mut free = Vec::new();
        for (d, slot) in index.iter_mut().enumerate() {
            if !space.is_essential(d) {
                *slot = Some(offset + free.len());
                free.push(d);
            }
        }
        Self { offset, index, free }
    }

    pub fn len(&self) -> usize {
        self.free.len()
    }

    pub fn is_empty(&self) -> bool {
        self.free.is_empty()
    }

    pub fn range(&self) -> std::ops::Range<usize> {
        self.offset..self.offset + self.free.len()
    }

    /// Expands the field's part of a system vector to space coefficients,
    /// inserting `essential` values.
    pub fn expand(&self, x: &[f64], essential: &[f64]) -> Vec<f64> {
        let mut out = essential.to_vec();
        for (k, &d) in self.free.iter().enumerate() {
            out[d] = x[self.offset + k];
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Layout {
    pub moment: FieldMap,
    pub rotation: FieldMap,
    pub deflection: FieldMap,
    pub multiplier: FieldMap,
}

impl Layout {
    pub fn size(&self) -> usize {
        self.multiplier.offset + self.multiplier.len()
    }
}

/// Assembled system on the free dofs.
#[derive(Debug, Clone)]
pub struct BlockSystem {
    pub spaces: Spaces,
    pub layout: Layout,
    /// Symmetric system matrix in the sign convention of the module docs.
    pub matrix: SparseMatrix,
    pub rhs: Vec<f64>,
    /// Essential values per space (zero at free dofs).
    pub essential_moment: Vec<f64>,
    pub essential_rotation: Vec<f64>,
    pub essential_deflection: Vec<f64>,
    /// Both equations carry the negative sign described in the module docs.
    pub sign_normalized: bool,
    pub tensors: BendingTensors,
    pub material: MaterialParams,
}

impl BlockSystem {
    pub fn is_hybrid(&self) -> bool {
        self.spaces.is_hybrid()
    }

    pub fn dim(&self) -> usize {
        self.layout.size()
    }

    fn block(&self, r: &FieldMap, c: &FieldMap, sign: f64) -> SparseMatrix {
        let rows: Vec<usize> = r.range().collect();
        let cols: Vec<usize> = c.range().collect();
        let s = self.matrix.submatrix(&rows, &cols);
        if sign == 1.0 {
            s
        } else {
            let mut t = Vec::with_capacity(s.nnz());
            for i in 0..s.nrows() {
                t.extend(s.row(i).map(|(j, v)| (i, j, sign * v)));
            }
            SparseMatrix::from_triplets(s.nrows(), s.ncols(), t)
        }
    }

    /// Compliance block `int A M : tau`.
    pub fn a_mm(&self) -> SparseMatrix {
        self.block(&self.layout.moment, &self.layout.moment, -1.0).with_symmetric_flag()
    }

    /// Duality product `<div tau, eta>`, moment rows and rotation columns.
    pub fn b_mtheta(&self) -> SparseMatrix {
        self.block(&self.layout.moment, &self.layout.rotation, -1.0)
    }

    /// Multiplier coupling (hybrid mode), moment rows.
    pub fn b_mlambda(&self) -> Option<SparseMatrix> {
        self.is_hybrid().then(|| self.block(&self.layout.moment, &self.layout.multiplier, -1.0))
    }

    /// Shear block on `(theta, w)`.
    pub fn s_block(&self) -> SparseMatrix {
        let l = &self.layout;
        let tw = FieldMap {
            offset: l.rotation.offset,
            index: Vec::new(),
            free: (0..l.rotation.len() + l.deflection.len()).collect(),
        };
        self.block(&tw, &tw, 1.0).with_symmetric_flag()
    }

    /// Splits a system vector into `(M, theta, w, lambda)` space coefficients.
    pub fn split(&self, x: &[f64]) -> (Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>) {
        let l = &self.layout;
        (
            l.moment.expand(x, &self.essential_moment),
            l.rotation.expand(x, &self.essential_rotation),
            l.deflection.expand(x, &self.essential_deflection),
            x[l.multiplier.range()].to_vec(),
        )
    }
}

/// Quadrature exactness used for the bilinear forms: volume, edge.
pub fn form_degrees(k: usize) -> (usize, usize) {
    (2 * (k + 1), 2 * k + 2)
}

fn load_degree(k: usize) -> usize {
    2 * k + 6
}

/// Shape tables of all spaces on one element.
pub(crate) struct ElementTables {
    pub m: ShapeTable,
    pub th: ShapeTable,
    pub w: ShapeTable,
    pub l: Option<ShapeTable>,
    /// `n_e . n_T` per local edge.
    pub edge_signs: [f64; 3],
}

pub(crate) fn element_tables(spaces: &Spaces, t: usize) -> ElementTables {
    let (vd, ed) = form_degrees(spaces.order());
    ElementTables {
        m: element_shapes(&spaces.moment, t, vd, ed),
        th: element_shapes(&spaces.rotation, t, vd, ed),
        w: element_shapes(&spaces.deflection, t, vd, ed),
        l: spaces.multiplier.as_ref().map(|l| element_shapes(l, t, 1, ed)),
        edge_signs: [0, 1, 2].map(|i| spaces.mesh().local_edge_sign(t, i)),
    }
}

fn voigt_dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Dense element matrix in the normalized sign convention, local ordering
/// `[M | theta | w | lambda]`.
pub(crate) fn element_matrix(tabs: &ElementTables, tensors: &BendingTensors, penalty: f64) -> nalgebra::DMatrix<f64> {
    let nm = tabs.m.volume.values[0].len();
    let nth = tabs.th.volume.values[0].len();
    let nw = tabs.w.volume.values[0].len();
    let nl = tabs.l.as_ref().map_or(0, |l| l.edges.iter().map(|e| e.normal_trace.first().map_or(0, Vec::len)).max().unwrap_or(0));
    let (o_th, o_w, o_l) = (nm, nm + nth, nm + nth + nw);
    let n = o_l + nl;
    let mut k = nalgebra::DMatrix::zeros(n, n);
    let a = &tensors.compliance;

    let vol = &tabs.m.volume;
    for q in 0..vol.points.len() {
        let w = vol.weights[q];
        let tau = &vol.values[q];
        let eta = &tabs.th.volume.values[q];
        let strain = &tabs.th.volume.strains[q];
        let grad = &tabs.w.volume.gradients[q];
        let am: Vec<[f64; 3]> = tau
            .iter()
            .map(|m| {
                let v = a * nalgebra::Vector3::new(m[0], m[1], m[2]);
                [v[0], v[1], v[2]]
            })
            .collect();
        for i in 0..nm {
            for j in 0..nm {
                k[(i, j)] -= w * voigt_dot(&am[j], &tau[i]);
            }
            for j in 0..nth {
                let v = w * voigt_dot(&tau[i], &strain[j]);
                k[(i, o_th + j)] += v;
                k[(o_th + j, i)] += v;
            }
        }
        let pw = penalty * w;
        for i in 0..nth {
            for j in 0..nth {
                k[(o_th + i, o_th + j)] += pw * (eta[i][0] * eta[j][0] + eta[i][1] * eta[j][1]);
            }
            for j in 0..nw {
                let v = -pw * (eta[i][0] * grad[j][0] + eta[i][1] * grad[j][1]);
                k[(o_th + i, o_w + j)] += v;
                k[(o_w + j, o_th + i)] += v;
            }
        }
        for i in 0..nw {
            for j in 0..nw {
                k[(o_w + i, o_w + j)] += pw * (grad[i][0] * grad[j][0] + grad[i][1] * grad[j][1]);
            }
        }
    }

    for e in 0..3 {
        let em = &tabs.m.edges[e];
        let eth = &tabs.th.edges[e];
        for q in 0..em.points.len() {
            let w = em.weights[q];
            let mnn = &em.normal_trace[q];
            let etan = &eth.normal_trace[q];
            for i in 0..nm {
                for j in 0..nth {
                    let v = w * mnn[i] * etan[j];
                    k[(i, o_th + j)] -= v;
                    k[(o_th + j, i)] -= v;
                }
            }
            if let Some(l) = &tabs.l {
                let el = &l.edges[e];
                // Multipliers approximate theta . n_e for the global edge normal n_e.
                let sign = tabs.edge_signs[e];
                for i in 0..nm {
                    for j in 0..nl {
                        let v = w * sign * mnn[i] * el.normal_trace[q][j];
                        k[(i, o_l + j)] += v;
                        k[(o_l + j, i)] += v;
                    }
                }
            }
        }
    }
    k
}

/// Assembles the system. `tensors` must derive from `material`.
pub fn assemble(spaces: &Spaces, material: &MaterialParams, load: &LoadSpec, bc: &BCSpec) -> Result<BlockSystem, AssemblyError> {
    spaces.check()?;
    let tensors = crate::material::derive_tensors(material)?;
    let penalty = material.shear_penalty()?;
    let mesh = spaces.mesh().clone();

    let moment = FieldMap::new(Some(&spaces.moment), 0);
    let rotation = FieldMap::new(Some(&spaces.rotation), moment.len());
    let deflection = FieldMap::new(Some(&spaces.deflection), rotation.offset + rotation.len());
    let multiplier = FieldMap::new(spaces.multiplier.as_ref(), deflection.offset + deflection.len());
    let layout = Layout { moment, rotation, deflection, multiplier };
    let n = layout.size();

    let (em, et, ew) = essential_values(spaces, bc);

    let contributions: Vec<(Vec<(usize, usize, f64)>, Vec<(usize, f64)>)> = (0..mesh.num_triangles())
        .into_par_iter()
        .map(|t| {
            let tabs = element_tables(spaces, t);
            let ke = element_matrix(&tabs, &tensors, penalty);
            let re = element_rhs(spaces, t, &tabs, load, bc);
            // Local to system index, with the essential value for constrained dofs.
            let mut glob: Vec<Result<usize, f64>> = Vec::with_capacity(ke.nrows());
            for &d in spaces.moment.element_dofs(t) {
                glob.push(layout.moment.index[d].ok_or(em[d]));
            }
            for &d in spaces.rotation.element_dofs(t) {
                glob.push(layout.rotation.index[d].ok_or(et[d]));
            }
            for &d in spaces.deflection.element_dofs(t) {
                glob.push(layout.deflection.index[d].ok_or(ew[d]));
            }
            if let Some(l) = &spaces.multiplier {
                for &d in l.element_dofs(t) {
                    glob.push(Ok(layout.multiplier.offset + d));
                }
            }
            let mut trip = Vec::with_capacity(glob.len() * glob.len());
            let mut rhs = Vec::new();
            for (i, gi) in glob.iter().enumerate() {
                let Ok(gi) = *gi else { continue };
                let mut r = re[i];
                for (j, gj) in glob.iter().enumerate() {
                    match *gj {
                        Ok(gj) => trip.push((gi, gj, ke[(i, j)])),
                        Err(value) => r -= ke[(i, j)] * value,
                    }
                }
                rhs.push((gi, r));
            }
            (trip, rhs)
        })
        .collect();

    let mut triplets = Vec::with_capacity(contributions.iter().map(|c| c.0.len()).sum());
    let mut rhs = vec![0.0; n];
    for (trip, r) in contributions {
        triplets.extend(trip);
        for (i, v) in r {
            rhs[i] += v;
        }
    }
    let matrix = SparseMatrix::from_triplets(n, n, triplets).with_symmetric_flag();
    Ok(BlockSystem {
        spaces: spaces.clone(),
        layout,
        matrix,
        rhs,
        essential_moment: em,
        essential_rotation: et,
        essential_deflection: ew,
        sign_normalized: true,
        tensors,
        material: *material,
    })
}

/// Values of the essential dofs: nodal deflection values and L2 projections
/// of the tangential rotation and normal-normal moment traces.
fn essential_values(spaces: &Spaces, bc: &BCSpec) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let mesh = spaces.mesh();
    let mut em = vec![0.0; spaces.moment.ndof()];
    let mut et = vec![0.0; spaces.rotation.ndof()];
    let mut ew = vec![0.0; spaces.deflection.ndof()];
    for (e, marker) in mesh.boundary_edges() {
        let b = bc.get(marker);
        if let Condition::Essential(Some(g)) = &b.deflection {
            for (d, v) in spaces.deflection.edge_trace_values(e, |p| g(p)) {
                ew[d] = v;
            }
        }
        if let Condition::Essential(Some(g)) = &b.rotation {
            let (t, _) = mesh.edge_triangles(e);
            let n = mesh.outward_normal(t, mesh.local_index_of_edge(t, e));
            let te = mesh.edge_tangent(e);
            let sign = -n[1] * te[0] + n[0] * te[1];
            for (d, v) in spaces.rotation.edge_trace_values(e, |p| sign * g(p)) {
                et[d] = v;
            }
        }
        if let Condition::Essential(Some(g)) = &b.moment {
            for (d, v) in spaces.moment.edge_trace_values(e, |p| g(p)) {
                em[d] = v;
            }
        }
    }
    (em, et, ew)
}

/// Element right-hand side in the normalized convention.
fn element_rhs(spaces: &Spaces, t: usize, tabs: &ElementTables, load: &LoadSpec, bc: &BCSpec) -> Vec<f64> {
    let mesh = spaces.mesh();
    let nm = tabs.m.volume.values[0].len();
    let nth = tabs.th.volume.values[0].len();
    let nw = tabs.w.volume.values[0].len();
    let nl = spaces.multiplier.as_ref().map_or(0, |l| l.element_dofs(t).len());
    let (o_th, o_w) = (nm, nm + nth);
    let mut r = vec![0.0; o_w + nw + nl];
    let k = spaces.order();

    if let Some(g) = &load.g {
        let tab = element_shapes(&spaces.deflection, t, load_degree(k), 1);
        for (q, p) in tab.volume.points.iter().enumerate() {
            let gw = tab.volume.weights[q] * g(*p);
            for (j, v) in tab.volume.values[q].iter().enumerate() {
                r[o_w + j] += gw * v[0];
            }
        }
    }

    for (i, &e) in mesh.triangle_edges(t).iter().enumerate() {
        let Some(marker) = mesh.edge_marker(e) else { continue };
        let b = bc.get(marker);
        let needs = [&b.deflection, &b.rotation, &b.moment].iter().any(|c| !c.is_essential() && c.data().is_some());
        if !needs {
            continue;
        }
        // Data are generally not polynomial: integrate with a richer rule.
        let ed = load_degree(k);
        if let Condition::Natural(Some(g0)) = &b.deflection {
            let es = &element_shapes(&spaces.deflection, t, 1, ed).edges[i];
            for (q, p) in es.points.iter().enumerate() {
                let gw = es.weights[q] * g0(*p);
                for (j, v) in es.values[q].iter().enumerate() {
                    r[o_w + j] += gw * v[0];
                }
            }
        }
        if let Condition::Natural(Some(g1)) = &b.rotation {
            let es = &element_shapes(&spaces.rotation, t, 1, ed).edges[i];
            for (q, p) in es.points.iter().enumerate() {
                let gw = es.weights[q] * g1(*p);
                for (j, v) in es.tangential_trace[q].iter().enumerate() {
                    r[o_th + j] += gw * v;
                }
            }
        }
        if let Condition::Natural(Some(g2)) = &b.moment {
            let es = &element_shapes(&spaces.moment, t, 1, ed).edges[i];
            for (q, p) in es.points.iter().enumerate() {
                let gw = es.weights[q] * g2(*p);
                for (j, v) in es.normal_trace[q].iter().enumerate() {
                    r[j] -= gw * v;
                }
            }
        }
    }
    r
}

#[cfg(test)]
mod tests;
