//! Shape function tables at volume and edge quadrature points.

use super::local::{edge_points, volume_points};
use super::{poly, FESpace, SpaceKind};
use crate::mesh::Point;

/// Volume data indexed `[point][shape]`. Only the derivative fields that
/// make sense for the space kind are filled; the others are empty.
#[derive(Debug, Clone, Default)]
pub struct VolumeShapes {
    pub points: Vec<Point>,
    /// Physical quadrature weights.
    pub weights: Vec<f64>,
    /// Scalar in component 0, vectors in 0..2, tensors in Voigt order.
    pub values: Vec<Vec<[f64; 3]>>,
    /// Scalar spaces: gradient.
    pub gradients: Vec<Vec<[f64; 2]>>,
    /// Scalar spaces: Hessian `(xx, yy, xy)`.
    pub hessians: Vec<Vec<[f64; 3]>>,
    /// Vector spaces: symmetric gradient as Voigt strain `(e_xx, e_yy, 2 e_xy)`.
    pub strains: Vec<Vec<[f64; 3]>>,
    /// Tensor spaces: row-wise divergence.
    pub divergences: Vec<Vec<[f64; 2]>>,
}

/// Data on one local edge, traced from the element polynomials. The normal
/// is the element's outward normal and the tangent is counter-clockwise.
#[derive(Debug, Clone, Default)]
pub struct EdgeShapes {
    pub edge: usize,
    pub normal: Point,
    pub tangent: Point,
    pub points: Vec<Point>,
    /// Global edge parameter in [0, 1], running from the lower vertex.
    pub params: Vec<f64>,
    /// Physical weights (parameter weight times edge length).
    pub weights: Vec<f64>,
    pub values: Vec<Vec<[f64; 3]>>,
    /// `v . n` (vectors), `tau_nn` (tensors) or the multiplier value.
    pub normal_trace: Vec<Vec<f64>>,
    /// `v . t` (vectors), `tau_nt` (tensors).
    pub tangential_trace: Vec<Vec<f64>>,
    /// Scalar spaces: `d phi / d n`.
    pub normal_derivative: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Default)]
pub struct ShapeTable {
    pub volume: VolumeShapes,
    pub edges: [EdgeShapes; 3],
}

/// Tabulates the shape functions of triangle `t` with a volume rule of
/// exactness `volume_degree` and edge rules of exactness `edge_degree`.
/// Shapes are ordered as in `space.element_dofs(t)`.
pub fn element_shapes(space: &FESpace, t: usize, volume_degree: usize, edge_degree: usize) -> ShapeTable {
    let mesh = space.mesh();
    let kind = space.kind();
    let mut table = ShapeTable::default();
    let edges = mesh.triangle_edges(t);

    if let SpaceKind::Multiplier { order } = kind {
        let ns = space.element_dofs(t).len();
        let mut offset = 0;
        for (i, &e) in edges.iter().enumerate() {
            let es = edge_frame(space, t, i, e, edge_degree);
            let own = if mesh.is_boundary_edge(e) { 0 } else { order + 1 };
            let mut es = es;
            for &s in &es.params {
                let mut row = vec![0.0; ns];
                for j in 0..own {
                    row[offset + j] = (2 * j + 1) as f64 * poly::legendre(j, s);
                }
                es.values.push(row.iter().map(|&v| [v, 0.0, 0.0]).collect());
                es.normal_trace.push(row);
            }
            offset += own;
            table.edges[i] = es;
        }
        return table;
    }

    let vol = &mut table.volume;
    for (p, w) in volume_points(mesh, t, volume_degree) {
        let ev = space.local_eval(t, p);
        vol.points.push(p);
        vol.weights.push(w);
        vol.values.push(ev.val.clone());
        match kind {
            SpaceKind::Deflection { .. } => {
                vol.gradients.push(ev.dx.iter().zip(&ev.dy).map(|(a, b)| [a[0], b[0]]).collect());
                vol.hessians.push((0..ev.val.len()).map(|j| [ev.dxx[j][0], ev.dyy[j][0], ev.dxy[j][0]]).collect());
            }
            SpaceKind::Rotation { .. } => {
                vol.strains.push(
                    (0..ev.val.len()).map(|j| [ev.dx[j][0], ev.dy[j][1], ev.dy[j][0] + ev.dx[j][1]]).collect(),
                );
            }
            SpaceKind::Moment { .. } => {
                vol.divergences.push(
                    (0..ev.val.len())
                        .map(|j| [ev.dx[j][0] + ev.dy[j][2], ev.dx[j][2] + ev.dy[j][1]])
                        .collect(),
                );
            }
            SpaceKind::Multiplier { .. } => unreachable!(),
        }
    }

    for (i, &e) in edges.iter().enumerate() {
        let mut es = edge_frame(space, t, i, e, edge_degree);
        let (n, tau) = (es.normal, es.tangent);
        for &p in &es.points {
            let ev = space.local_eval(t, p);
            let nt: Vec<f64>;
            let tt: Vec<f64>;
            match kind {
                SpaceKind::Deflection { .. } => {
                    nt = ev.val.iter().map(|v| v[0]).collect();
                    tt = nt.clone();
                    es.normal_derivative.push(ev.dx.iter().zip(&ev.dy).map(|(a, b)| a[0] * n[0] + b[0] * n[1]).collect());
                }
                SpaceKind::Rotation { .. } => {
                    nt = ev.val.iter().map(|v| v[0] * n[0] + v[1] * n[1]).collect();
                    tt = ev.val.iter().map(|v| v[0] * tau[0] + v[1] * tau[1]).collect();
                }
                SpaceKind::Moment { .. } => {
                    nt = ev.val.iter().map(|v| contract(v, n, n)).collect();
                    tt = ev.val.iter().map(|v| contract(v, n, tau)).collect();
                }
                SpaceKind::Multiplier { .. } => unreachable!(),
            }
            es.values.push(ev.val);
            es.normal_trace.push(nt);
            es.tangential_trace.push(tt);
        }
        table.edges[i] = es;
    }
    table
}

/// `a . tau . b` for a Voigt tensor.
fn contract(v: &[f64; 3], a: Point, b: Point) -> f64 {
    v[0] * a[0] * b[0] + v[1] * a[1] * b[1] + v[2] * (a[0] * b[1] + a[1] * b[0])
}

fn edge_frame(space: &FESpace, t: usize, i: usize, e: usize, degree: usize) -> EdgeShapes {
    let mesh = space.mesh();
    let n = mesh.outward_normal(t, i);
    let len = mesh.edge_length(e);
    let mut es = EdgeShapes { edge: e, normal: n, tangent: [-n[1], n[0]], ..Default::default() };
    for (p, s, w) in edge_points(mesh, e, degree) {
        es.points.push(p);
        es.params.push(s);
        es.weights.push(w * len);
    }
    es
}
