//! Discrete spaces for deflection, rotation, bending moment and edge
//! multipliers, with global dof maps.
//!
//! Every dof is a functional defined with respect to the global edge
//! orientation (lower to higher vertex index), so elements sharing an edge
//! see the same functional and no orientation signs are needed.

mod local;
mod poly;
mod shapes;

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::mesh::{Point, TriMesh};
pub(crate) use local::edge_points;
use local::{LocalBasis, LocalEval};
pub use shapes::{element_shapes, EdgeShapes, ShapeTable, VolumeShapes};

pub const MIN_ORDER: usize = 1;
pub const MAX_ORDER: usize = 4;

/// `order` is the moment order `k` for every kind except `Deflection`, which
/// carries its own polynomial degree `k + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpaceKind {
    Deflection { order: usize },
    Rotation { order: usize },
    Moment { order: usize, broken: bool },
    Multiplier { order: usize },
}

impl SpaceKind {
    pub fn order(&self) -> usize {
        match *self {
            SpaceKind::Deflection { order }
            | SpaceKind::Rotation { order }
            | SpaceKind::Moment { order, .. }
            | SpaceKind::Multiplier { order } => order,
        }
    }

    /// Number of field components: 1, 2, 3 (Voigt) and 1 (edge scalar).
    pub fn components(&self) -> usize {
        match self {
            SpaceKind::Deflection { .. } | SpaceKind::Multiplier { .. } => 1,
            SpaceKind::Rotation { .. } => 2,
            SpaceKind::Moment { .. } => 3,
        }
    }

    /// Moment order `k` this space belongs to.
    pub fn moment_order(&self) -> usize {
        match *self {
            SpaceKind::Deflection { order } => order - 1,
            other => other.order(),
        }
    }

    fn check(&self) -> Result<(), FeError> {
        let k = self.moment_order_checked();
        match k {
            Some(k) if (MIN_ORDER..=MAX_ORDER).contains(&k) => Ok(()),
            _ => Err(FeError::InvalidOrder(*self)),
        }
    }

    fn moment_order_checked(&self) -> Option<usize> {
        match *self {
            SpaceKind::Deflection { order } => order.checked_sub(1),
            other => Some(other.order()),
        }
    }
}

/// Boundary trace that can be prescribed as an essential condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Trace {
    Deflection,
    TangentialRotation,
    NormalMoment,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FeError {
    #[error("unsupported order in {0:?}: moment order must lie in {MIN_ORDER}..={MAX_ORDER}")]
    InvalidOrder(SpaceKind),
    #[error("trace {trace:?} cannot be constrained in a {kind:?} space")]
    IllegalTrace { kind: SpaceKind, trace: Trace },
    #[error("incompatible spaces: {0}")]
    Incompatible(String),
    #[error("coefficient vector has length {found}, space has {expected} dofs")]
    CoefficientLength { expected: usize, found: usize },
    #[error("dof functionals are not unisolvent on triangle {0}")]
    Degenerate(usize),
}

#[derive(Debug, Clone)]
pub struct FESpace {
    kind: SpaceKind,
    mesh: Arc<TriMesh>,
    ndof: usize,
    element_dofs: Vec<Vec<usize>>,
    essential: Vec<bool>,
    /// Dofs whose support is a single triangle.
    local: Vec<bool>,
    marker_dofs: BTreeMap<i32, Vec<usize>>,
    /// Per edge: dofs carried by functionals on that edge, in functional
    /// order. Empty for broken moment spaces and boundary multiplier edges.
    edge_dofs: Vec<Vec<usize>>,
    bases: Vec<LocalBasis>,
}

/// Number of local dofs attached to one edge (excluding vertices).
fn edge_count(kind: SpaceKind) -> usize {
    match kind {
        SpaceKind::Deflection { order } => order - 1,
        other => other.order() + 1,
    }
}

fn interior_count(kind: SpaceKind) -> usize {
    match kind {
        SpaceKind::Deflection { order } => local::interior_lattice(order).len(),
        SpaceKind::Rotation { order } => order * order - 1,
        SpaceKind::Moment { order, .. } => 3 * poly::dim(order - 1),
        SpaceKind::Multiplier { .. } => 0,
    }
}

/// Local dimension of the element space (multiplier: dofs on three edges).
pub fn local_dim(kind: SpaceKind) -> usize {
    match kind {
        SpaceKind::Deflection { order } => poly::dim(order),
        SpaceKind::Rotation { order } => 2 * poly::dim(order),
        SpaceKind::Moment { order, .. } => 3 * poly::dim(order),
        SpaceKind::Multiplier { order } => 3 * (order + 1),
    }
}

/// Exactness of the rules that define dof functionals for interpolation.
fn functional_degree(kind: SpaceKind) -> usize {
    2 * kind.moment_order() + 8
}

fn legal(kind: SpaceKind, trace: Trace) -> bool {
    matches!(
        (kind, trace),
        (SpaceKind::Deflection { .. }, Trace::Deflection)
            | (SpaceKind::Rotation { .. }, Trace::TangentialRotation)
            | (SpaceKind::Moment { .. }, Trace::NormalMoment)
            | (SpaceKind::Multiplier { .. }, Trace::NormalMoment)
    )
}

/// Builds a space on `mesh`. `essential` lists the boundary markers whose
/// trace is constrained. A normal-moment constraint on a multiplier space is
/// accepted and has no effect, since multipliers live on interior edges only.
pub fn build_space(mesh: Arc<TriMesh>, kind: SpaceKind, essential: &[(i32, Trace)]) -> Result<FESpace, FeError> {
    kind.check()?;
    if let Some(&(_, trace)) = essential.iter().find(|(_, tr)| !legal(kind, *tr)) {
        return Err(FeError::IllegalTrace { kind, trace });
    }
    let constrained: Vec<i32> = essential.iter().map(|&(m, _)| m).collect();
    let (nv, ne, nt) = (mesh.num_vertices(), mesh.num_edges(), mesh.num_triangles());
    let ec = edge_count(kind);
    let ic = interior_count(kind);

    let mut element_dofs = Vec::with_capacity(nt);
    let mut edge_dofs = vec![Vec::new(); ne];
    let ndof;
    match kind {
        SpaceKind::Deflection { .. } => {
            let ebase = nv;
            let ibase = nv + ne * ec;
            ndof = ibase + nt * ic;
            for t in 0..nt {
                let mut d: Vec<usize> = mesh.triangle(t).to_vec();
                for e in mesh.triangle_edges(t) {
                    d.extend((0..ec).map(|m| ebase + e * ec + m));
                }
                d.extend((0..ic).map(|j| ibase + t * ic + j));
                element_dofs.push(d);
            }
            for (e, dofs) in edge_dofs.iter_mut().enumerate() {
                let [a, b] = mesh.edge(e);
                dofs.push(a);
                dofs.extend((0..ec).map(|m| ebase + e * ec + m));
                dofs.push(b);
            }
        }
        SpaceKind::Rotation { .. } | SpaceKind::Moment { broken: false, .. } => {
            let ibase = ne * ec;
            ndof = ibase + nt * ic;
            for t in 0..nt {
                let mut d = Vec::with_capacity(3 * ec + ic);
                for e in mesh.triangle_edges(t) {
                    d.extend((0..ec).map(|j| e * ec + j));
                }
                d.extend((0..ic).map(|j| ibase + t * ic + j));
                element_dofs.push(d);
            }
            for (e, dofs) in edge_dofs.iter_mut().enumerate() {
                dofs.extend((0..ec).map(|j| e * ec + j));
            }
        }
        SpaceKind::Moment { broken: true, .. } => {
            let nloc = 3 * ec + ic;
            ndof = nt * nloc;
            element_dofs.extend((0..nt).map(|t| (t * nloc..(t + 1) * nloc).collect()));
        }
        SpaceKind::Multiplier { .. } => {
            let mut next = 0;
            for (e, dofs) in edge_dofs.iter_mut().enumerate() {
                if !mesh.is_boundary_edge(e) {
                    dofs.extend(next..next + ec);
                    next += ec;
                }
            }
            ndof = next;
            for t in 0..nt {
                element_dofs.push(mesh.triangle_edges(t).iter().flat_map(|&e| edge_dofs[e].clone()).collect());
            }
        }
    }

    // Dofs in one element only.
    let mut owners = vec![0usize; ndof];
    for d in &element_dofs {
        for &i in d {
            owners[i] += 1;
        }
    }
    let local = owners.iter().map(|&c| c == 1).collect();

    // Boundary classification: dofs whose edge functional lives on a marked
    // boundary edge, and for deflection the end vertices too.
    let mut marker_dofs: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
    for (e, marker) in mesh.boundary_edges() {
        let dofs = boundary_edge_dofs(&mesh, kind, &element_dofs, &edge_dofs, e, ec);
        marker_dofs.entry(marker).or_default().extend(dofs);
    }
    for v in marker_dofs.values_mut() {
        v.sort_unstable();
        v.dedup();
    }
    let mut essential_flags = vec![false; ndof];
    if !matches!(kind, SpaceKind::Multiplier { .. }) {
        for m in &constrained {
            for &d in marker_dofs.get(m).map(Vec::as_slice).unwrap_or(&[]) {
                essential_flags[d] = true;
            }
        }
    }

    let bases = match kind {
        SpaceKind::Multiplier { .. } => Vec::new(),
        _ => {
            let degree = kind.order();
            let ncomp = kind.components();
            let quad = 2 * degree + 2;
            (0..nt)
                .into_par_iter()
                .map(|t| {
                    let f = local::element_functionals(&mesh, t, kind, quad);
                    LocalBasis::new(&mesh, t, degree, ncomp, &f)
                        .ok_or(FeError::Degenerate(t))
                })
                .collect::<Result<Vec<_>, _>>()?
        }
    };

    Ok(FESpace { kind, mesh, ndof, element_dofs, essential: essential_flags, local, marker_dofs, edge_dofs, bases })
}

fn boundary_edge_dofs(
    mesh: &TriMesh,
    kind: SpaceKind,
    element_dofs: &[Vec<usize>],
    edge_dofs: &[Vec<usize>],
    e: usize,
    ec: usize,
) -> Vec<usize> {
    match kind {
        SpaceKind::Moment { broken: true, .. } => {
            let (t, _) = mesh.edge_triangles(e);
            let i = mesh.local_index_of_edge(t, e);
            element_dofs[t][i * ec..(i + 1) * ec].to_vec()
        }
        _ => edge_dofs[e].clone(),
    }
}

impl FESpace {
    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn mesh(&self) -> &Arc<TriMesh> {
        &self.mesh
    }

    pub fn ndof(&self) -> usize {
        self.ndof
    }

    pub fn element_dofs(&self, t: usize) -> &[usize] {
        &self.element_dofs[t]
    }

    pub fn is_essential(&self, dof: usize) -> bool {
        self.essential[dof]
    }

    pub fn essential_mask(&self) -> &[bool] {
        &self.essential
    }

    pub fn num_free(&self) -> usize {
        self.essential.iter().filter(|&&e| !e).count()
    }

    /// True when the dof's support is a single triangle.
    pub fn is_local(&self, dof: usize) -> bool {
        self.local[dof]
    }

    /// Dofs attached to boundary edges carrying `marker` (sorted).
    pub fn marker_dofs(&self, marker: i32) -> &[usize] {
        self.marker_dofs.get(&marker).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Dofs defined by functionals on edge `e`. For deflection the list is
    /// the low vertex, the edge nodes and the high vertex.
    pub fn edge_dofs(&self, e: usize) -> &[usize] {
        &self.edge_dofs[e]
    }

    /// Number of dofs on each element edge, in the element ordering.
    pub fn dofs_per_edge(&self) -> usize {
        edge_count(self.kind)
    }

    pub fn local_dim(&self) -> usize {
        local_dim(self.kind)
    }

    fn check_len(&self, coeffs: &[f64]) -> Result<(), FeError> {
        if coeffs.len() != self.ndof {
            return Err(FeError::CoefficientLength { expected: self.ndof, found: coeffs.len() });
        }
        Ok(())
    }

    pub(crate) fn local_eval(&self, t: usize, p: Point) -> LocalEval {
        self.bases[t].eval(p)
    }

    /// Value of the field at `p` on triangle `t` (components beyond the
    /// kind's count are zero). Multiplier spaces have no volume values.
    pub fn evaluate(&self, coeffs: &[f64], t: usize, p: Point) -> [f64; 3] {
        if matches!(self.kind, SpaceKind::Multiplier { .. }) {
            return [0.0; 3];
        }
        let ev = self.local_eval(t, p);
        let mut out = [0.0; 3];
        for (j, &d) in self.element_dofs[t].iter().enumerate() {
            for c in 0..3 {
                out[c] += coeffs[d] * ev.val[j][c];
            }
        }
        out
    }

    /// Gradient of the first component at `p` on triangle `t`.
    pub fn evaluate_gradient(&self, coeffs: &[f64], t: usize, p: Point) -> [f64; 2] {
        let ev = self.local_eval(t, p);
        let mut out = [0.0; 2];
        for (j, &d) in self.element_dofs[t].iter().enumerate() {
            out[0] += coeffs[d] * ev.dx[j][0];
            out[1] += coeffs[d] * ev.dy[j][0];
        }
        out
    }

    /// Canonical interpolant of a global field.
    pub fn interpolate(&self, f: impl Fn(Point) -> [f64; 3] + Sync) -> Vec<f64> {
        self.interpolate_piecewise(|_, p| f(p))
    }

    /// Canonical interpolant of a field given per triangle. For shared dofs
    /// the value from the last triangle wins, so the field's traces must
    /// agree across edges for the result to be meaningful.
    pub fn interpolate_piecewise(&self, f: impl Fn(usize, Point) -> [f64; 3] + Sync) -> Vec<f64> {
        let mut out = vec![0.0; self.ndof];
        if let SpaceKind::Multiplier { order } = self.kind {
            for e in 0..self.mesh.num_edges() {
                if self.edge_dofs[e].is_empty() {
                    continue;
                }
                let (t, _) = self.mesh.edge_triangles(e);
                let pts = edge_points(&self.mesh, e, 2 * order + 8);
                for (j, &d) in self.edge_dofs[e].iter().enumerate() {
                    out[d] = pts.iter().map(|&(x, s, w)| w * f(t, x)[0] * poly::legendre(j, s)).sum();
                }
            }
            return out;
        }
        let quad = functional_degree(self.kind);
        let locals: Vec<Vec<f64>> = (0..self.mesh.num_triangles())
            .into_par_iter()
            .map(|t| {
                local::element_functionals(&self.mesh, t, self.kind, quad)
                    .iter()
                    .map(|func| local::apply(func, &mut |p| f(t, p)))
                    .collect()
            })
            .collect();
        for (t, vals) in locals.iter().enumerate() {
            for (&d, &v) in self.element_dofs[t].iter().zip(vals) {
                out[d] = v;
            }
        }
        out
    }

    /// Values of the edge-carried dofs of boundary edge `e` for the trace
    /// data `f`: nodal values for deflection, tangential moments for
    /// rotation and normal-normal moments for moment spaces, i.e. the L2
    /// projection onto the trace space. `f` returns the trace itself
    /// (w, theta . t_e or m_nn) at a point.
    pub fn edge_trace_values(&self, e: usize, f: impl Fn(Point) -> f64) -> Vec<(usize, f64)> {
        let dofs: Vec<usize> = match self.kind {
            SpaceKind::Moment { broken: true, .. } => {
                let (t, _) = self.mesh.edge_triangles(e);
                let i = self.mesh.local_index_of_edge(t, e);
                let ec = edge_count(self.kind);
                self.element_dofs[t][i * ec..(i + 1) * ec].to_vec()
            }
            _ => self.edge_dofs[e].clone(),
        };
        match self.kind {
            SpaceKind::Deflection { order } => {
                let [a, b] = self.mesh.edge(e).map(|v| self.mesh.vertex(v));
                dofs.iter()
                    .enumerate()
                    .map(|(m, &d)| {
                        let s = m as f64 / order as f64;
                        (d, f([a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])]))
                    })
                    .collect()
            }
            _ => {
                let pts = edge_points(&self.mesh, e, functional_degree(self.kind));
                dofs.iter()
                    .enumerate()
                    .map(|(j, &d)| (d, pts.iter().map(|&(x, s, w)| w * f(x) * poly::legendre(j, s)).sum()))
                    .collect()
            }
        }
    }
}

/// Rotation coefficients of `grad w_h`, exact because the gradients of the
/// deflection space lie in the rotation space.
pub fn interpolate_gradient(w_space: &FESpace, theta_space: &FESpace, w: &[f64]) -> Result<Vec<f64>, FeError> {
    match (w_space.kind, theta_space.kind) {
        (SpaceKind::Deflection { order: p }, SpaceKind::Rotation { order: k }) if p == k + 1 => {}
        (a, b) => return Err(FeError::Incompatible(format!("{a:?} gradient is not represented by {b:?}"))),
    }
    if !Arc::ptr_eq(&w_space.mesh, &theta_space.mesh) && *w_space.mesh != *theta_space.mesh {
        return Err(FeError::Incompatible("spaces live on different meshes".into()));
    }
    w_space.check_len(w)?;
    Ok(theta_space.interpolate_piecewise(|t, p| {
        let g = w_space.evaluate_gradient(w, t, p);
        [g[0], g[1], 0.0]
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::unit_square_mesh;

    fn square(n: usize) -> Arc<TriMesh> {
        Arc::new(unit_square_mesh(n).unwrap())
    }

    #[test]
    fn dof_counts_on_two_by_two_mesh() {
        let m = square(2);
        let w = build_space(m.clone(), SpaceKind::Deflection { order: 2 }, &[(1, Trace::Deflection)]).unwrap();
        assert_eq!((w.ndof(), w.num_free()), (25, 9));
        let th = build_space(m.clone(), SpaceKind::Rotation { order: 1 }, &[(1, Trace::TangentialRotation)]).unwrap();
        assert_eq!((th.ndof(), th.num_free()), (32, 16));
        let mo = build_space(m.clone(), SpaceKind::Moment { order: 1, broken: false }, &[]).unwrap();
        assert_eq!(mo.ndof(), 56);
        let mb = build_space(m.clone(), SpaceKind::Moment { order: 1, broken: true }, &[]).unwrap();
        assert_eq!(mb.ndof(), 8 * 9);
        let l = build_space(m, SpaceKind::Multiplier { order: 1 }, &[(1, Trace::NormalMoment)]).unwrap();
        assert_eq!(l.ndof(), 16);
    }

    #[test]
    fn illegal_traces_and_orders() {
        let m = square(1);
        assert!(matches!(
            build_space(m.clone(), SpaceKind::Rotation { order: 1 }, &[(1, Trace::Deflection)]),
            Err(FeError::IllegalTrace { .. })
        ));
        assert!(matches!(
            build_space(m.clone(), SpaceKind::Deflection { order: 2 }, &[(1, Trace::NormalMoment)]),
            Err(FeError::IllegalTrace { .. })
        ));
        for kind in [SpaceKind::Moment { order: 0, broken: false }, SpaceKind::Rotation { order: 5 }, SpaceKind::Deflection { order: 1 }] {
            assert!(matches!(build_space(m.clone(), kind, &[]), Err(FeError::InvalidOrder(_))));
        }
    }

    #[test]
    fn interior_dofs_are_local() {
        let m = square(2);
        for k in 1..=4 {
            let th = build_space(m.clone(), SpaceKind::Rotation { order: k }, &[]).unwrap();
            let nlocal = (0..th.ndof()).filter(|&d| th.is_local(d)).count();
            // Boundary edge dofs have one owner too.
            assert_eq!(nlocal, 8 * (k * k - 1) + 8 * (k + 1));
            let mb = build_space(m.clone(), SpaceKind::Moment { order: k, broken: true }, &[]).unwrap();
            assert!((0..mb.ndof()).all(|d| mb.is_local(d)));
        }
    }

    #[test]
    fn interpolation_reproduces_polynomials() {
        let m = square(2);
        for k in 1..=4 {
            let kf = k as f64;
            let w = build_space(m.clone(), SpaceKind::Deflection { order: k + 1 }, &[]).unwrap();
            let f = move |p: Point| [p[0].powf(kf + 1.0) - 2.0 * p[1] * p[0] + 0.5, 0.0, 0.0];
            let c = w.interpolate(f);
            let th = build_space(m.clone(), SpaceKind::Rotation { order: k }, &[]).unwrap();
            let g = move |p: Point| [p[1].powf(kf) + p[0], p[0].powf(kf) * p[1].powf(0.0) - 1.0, 0.0];
            let ct = th.interpolate(g);
            let mo = build_space(m.clone(), SpaceKind::Moment { order: k, broken: false }, &[]).unwrap();
            let h = move |p: Point| [p[0].powf(kf), p[0] * p[1].powf(kf - 1.0), 2.0 - p[1]];
            let cm = mo.interpolate(h);
            for t in 0..m.num_triangles() {
                let p = {
                    let c = m.centroid(t);
                    [c[0] + 0.01, c[1] - 0.02]
                };
                assert!((w.evaluate(&c, t, p)[0] - f(p)[0]).abs() < 1e-11);
                let v = th.evaluate(&ct, t, p);
                assert!((v[0] - g(p)[0]).abs() < 1e-11 && (v[1] - g(p)[1]).abs() < 1e-11);
                let v = mo.evaluate(&cm, t, p);
                for c in 0..3 {
                    assert!((v[c] - h(p)[c]).abs() < 1e-11);
                }
            }
        }
    }

    #[test]
    fn gradient_of_linear_deflection() {
        let m = square(3);
        let w = build_space(m.clone(), SpaceKind::Deflection { order: 2 }, &[]).unwrap();
        let th = build_space(m.clone(), SpaceKind::Rotation { order: 1 }, &[]).unwrap();
        let c = w.interpolate(|p| [p[0], 0.0, 0.0]);
        let g = interpolate_gradient(&w, &th, &c).unwrap();
        for t in 0..m.num_triangles() {
            let v = th.evaluate(&g, t, m.centroid(t));
            assert!((v[0] - 1.0).abs() < 1e-12 && v[1].abs() < 1e-12);
        }
        let z = interpolate_gradient(&w, &th, &vec![0.0; w.ndof()]).unwrap();
        assert!(z.iter().all(|&v| v == 0.0));
        let th2 = build_space(m, SpaceKind::Rotation { order: 2 }, &[]).unwrap();
        assert!(matches!(interpolate_gradient(&w, &th2, &c), Err(FeError::Incompatible(_))));
    }

    #[test]
    fn edge_trace_values_project_the_trace() {
        let m = square(1);
        let th = build_space(m.clone(), SpaceKind::Rotation { order: 2 }, &[]).unwrap();
        // Polynomial field: the moments of its trace equal its interpolant's dofs.
        let f = |p: Point| [p[0] * p[1], 1.0 - p[0] * p[0], 0.0];
        let c = th.interpolate(f);
        for (e, _) in m.boundary_edges() {
            let tau = m.edge_tangent(e);
            for (d, v) in th.edge_trace_values(e, |p| f(p)[0] * tau[0] + f(p)[1] * tau[1]) {
                assert!((c[d] - v).abs() < 1e-13);
            }
        }
    }
}
