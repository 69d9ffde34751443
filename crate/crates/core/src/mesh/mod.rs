//! Conforming triangular meshes with globally oriented edges.
//!
//! Every edge is stored once, oriented from its lower to its higher vertex
//! index. Local edge `i` of a triangle is the edge opposite local vertex `i`,
//! i.e. it joins local vertices `i + 1` and `i + 2` (mod 3).

mod generate;
mod io;

use std::collections::HashMap;

use thiserror::Error;

pub use generate::{plate_with_hole_mesh, refine_uniform, refine_uniform_with_parents, unit_square_mesh, HoleMarkers};
pub use io::{read_mesh, write_mesh, MeshWarning};

pub type Point = [f64; 2];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeshError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: vertex index {index} out of range (mesh has {count} vertices)")]
    IndexOutOfRange { line: usize, index: usize, count: usize },
    #[error("triangle {triangle} has non-positive area {area:e}")]
    NonPositiveArea { triangle: usize, area: f64 },
    #[error("edge ({0}, {1}) is shared by more than two triangles")]
    NonManifoldEdge(usize, usize),
    #[error("boundary entry ({0}, {1}) is not a boundary edge of the mesh")]
    NotABoundaryEdge(usize, usize),
    #[error("mesh invariant violated: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TriMesh {
    vertices: Vec<Point>,
    triangles: Vec<[usize; 3]>,
    edges: Vec<[usize; 2]>,
    triangle_edges: Vec<[usize; 3]>,
    edge_triangles: Vec<(usize, Option<usize>)>,
    edge_markers: Vec<Option<i32>>,
}

/// Marker given to boundary edges that are not listed explicitly.
pub const DEFAULT_MARKER: i32 = 0;

fn signed_area(a: Point, b: Point, c: Point) -> f64 {
    0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]))
}

impl TriMesh {
    /// Builds the edge structure of a counter-clockwise triangulation.
    ///
    /// `boundary` assigns markers to boundary edges given by their vertex
    /// pair (either order); unlisted boundary edges get [`DEFAULT_MARKER`].
    pub fn new(
        vertices: Vec<Point>,
        triangles: Vec<[usize; 3]>,
        boundary: &[([usize; 2], i32)],
    ) -> Result<Self, MeshError> {
        let nv = vertices.len();
        for (t, tri) in triangles.iter().enumerate() {
            for &v in tri {
                if v >= nv {
                    return Err(MeshError::IndexOutOfRange { line: 0, index: v, count: nv });
                }
            }
            let area = signed_area(vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]);
            if !(area > 0.0) {
                return Err(MeshError::NonPositiveArea { triangle: t, area });
            }
        }

        let mut lookup: HashMap<[usize; 2], usize> = HashMap::new();
        let mut edges = Vec::new();
        let mut edge_triangles: Vec<(usize, Option<usize>)> = Vec::new();
        let mut triangle_edges = Vec::with_capacity(triangles.len());
        for (t, tri) in triangles.iter().enumerate() {
            let mut local = [0; 3];
            for (i, slot) in local.iter_mut().enumerate() {
                let a = tri[(i + 1) % 3];
                let b = tri[(i + 2) % 3];
                let key = [a.min(b), a.max(b)];
                let e = match lookup.get(&key) {
                    Some(&e) => {
                        let entry = &mut edge_triangles[e];
                        if entry.1.is_some() {
                            return Err(MeshError::NonManifoldEdge(key[0], key[1]));
                        }
                        entry.1 = Some(t);
                        e
                    }
                    None => {
                        let e = edges.len();
                        edges.push(key);
                        edge_triangles.push((t, None));
                        lookup.insert(key, e);
                        e
                    }
                };
                *slot = e;
            }
            triangle_edges.push(local);
        }

        let mut edge_markers: Vec<Option<i32>> = edge_triangles
            .iter()
            .map(|(_, other)| if other.is_none() { Some(DEFAULT_MARKER) } else { None })
            .collect();
        for &([a, b], marker) in boundary {
            let key = [a.min(b), a.max(b)];
            match lookup.get(&key) {
                Some(&e) if edge_markers[e].is_some() => edge_markers[e] = Some(marker),
                _ => return Err(MeshError::NotABoundaryEdge(a, b)),
            }
        }

        Ok(Self {
            vertices,
            triangles,
            edges,
            triangle_edges,
            edge_triangles,
            edge_markers,
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn vertex(&self, v: usize) -> Point {
        self.vertices[v]
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn triangle(&self, t: usize) -> [usize; 3] {
        self.triangles[t]
    }

    /// Edges as `[low, high]` vertex pairs.
    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> [usize; 2] {
        self.edges[e]
    }

    /// Global edge indices of the three local edges of triangle `t`.
    pub fn triangle_edges(&self, t: usize) -> [usize; 3] {
        self.triangle_edges[t]
    }

    /// Triangles adjacent to edge `e`; the second is `None` on the boundary.
    pub fn edge_triangles(&self, e: usize) -> (usize, Option<usize>) {
        self.edge_triangles[e]
    }

    pub fn is_boundary_edge(&self, e: usize) -> bool {
        self.edge_markers[e].is_some()
    }

    pub fn edge_marker(&self, e: usize) -> Option<i32> {
        self.edge_markers[e]
    }

    /// `(edge, marker)` for every boundary edge, in edge order.
    pub fn boundary_edges(&self) -> impl Iterator<Item = (usize, i32)> + '_ {
        self.edge_markers
            .iter()
            .enumerate()
            .filter_map(|(e, m)| m.map(|m| (e, m)))
    }

    /// +1 if the counter-clockwise traversal of local edge `i` of triangle `t`
    /// runs along the global edge direction, -1 otherwise.
    pub fn local_edge_sign(&self, t: usize, i: usize) -> f64 {
        let tri = self.triangles[t];
        if tri[(i + 1) % 3] < tri[(i + 2) % 3] {
            1.0
        } else {
            -1.0
        }
    }

    pub fn area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangles[t];
        signed_area(self.vertices[a], self.vertices[b], self.vertices[c])
    }

    pub fn total_area(&self) -> f64 {
        (0..self.num_triangles()).map(|t| self.area(t)).sum()
    }

    pub fn centroid(&self, t: usize) -> Point {
        let [a, b, c] = self.triangles[t].map(|v| self.vertices[v]);
        [(a[0] + b[0] + c[0]) / 3.0, (a[1] + b[1] + c[1]) / 3.0]
    }

    pub fn edge_length(&self, e: usize) -> f64 {
        let [a, b] = self.edges[e].map(|v| self.vertices[v]);
        (b[0] - a[0]).hypot(b[1] - a[1])
    }

    /// Unit tangent of edge `e` in its global direction.
    pub fn edge_tangent(&self, e: usize) -> Point {
        let [a, b] = self.edges[e].map(|v| self.vertices[v]);
        let l = self.edge_length(e);
        [(b[0] - a[0]) / l, (b[1] - a[1]) / l]
    }

    /// Unit normal of edge `e`: its global tangent turned clockwise.
    pub fn edge_normal(&self, e: usize) -> Point {
        let t = self.edge_tangent(e);
        [t[1], -t[0]]
    }

    /// Outward unit normal of triangle `t` on its local edge `i`.
    pub fn outward_normal(&self, t: usize, i: usize) -> Point {
        let n = self.edge_normal(self.triangle_edges[t][i]);
        let s = self.local_edge_sign(t, i);
        [s * n[0], s * n[1]]
    }

    /// Maximum edge length.
    pub fn h_max(&self) -> f64 {
        (0..self.num_edges()).map(|e| self.edge_length(e)).fold(0.0, f64::max)
    }

    pub fn h_min(&self) -> f64 {
        (0..self.num_edges())
            .map(|e| self.edge_length(e))
            .fold(f64::INFINITY, f64::min)
    }

    /// Longest edge of triangle `t`.
    pub fn diameter(&self, t: usize) -> f64 {
        self.triangle_edges[t]
            .iter()
            .map(|&e| self.edge_length(e))
            .fold(0.0, f64::max)
    }

    /// V - E + T.
    pub fn euler_characteristic(&self) -> i64 {
        self.num_vertices() as i64 - self.num_edges() as i64 + self.num_triangles() as i64
    }

    /// Re-checks every structural invariant.
    pub fn validate(&self) -> Result<(), MeshError> {
        let mut counts = vec![0usize; self.num_edges()];
        for t in 0..self.num_triangles() {
            let area = self.area(t);
            if !(area > 0.0) {
                return Err(MeshError::NonPositiveArea { triangle: t, area });
            }
            let tri = self.triangles[t];
            for (i, &e) in self.triangle_edges[t].iter().enumerate() {
                counts[e] += 1;
                let (a, b) = (tri[(i + 1) % 3], tri[(i + 2) % 3]);
                if self.edges[e] != [a.min(b), a.max(b)] {
                    return Err(MeshError::Invalid(format!("triangle {t} local edge {i} mismatch")));
                }
            }
        }
        for (e, &c) in counts.iter().enumerate() {
            let [lo, hi] = self.edges[e];
            if lo >= hi {
                return Err(MeshError::Invalid(format!("edge {e} is not oriented low to high")));
            }
            let boundary = self.edge_markers[e].is_some();
            let expected = if boundary { 1 } else { 2 };
            if c != expected {
                return Err(MeshError::Invalid(format!(
                    "edge {e} shared by {c} triangles (boundary: {boundary})"
                )));
            }
            let (t0, t1) = self.edge_triangles[e];
            if t1.is_none() != boundary {
                return Err(MeshError::Invalid(format!("edge {e} adjacency disagrees with marker")));
            }
            if let Some(t1) = t1 {
                // Opposite traversal directions from the two sides.
                let i0 = self.local_index_of_edge(t0, e);
                let i1 = self.local_index_of_edge(t1, e);
                if self.local_edge_sign(t0, i0) == self.local_edge_sign(t1, i1) {
                    return Err(MeshError::Invalid(format!("edge {e} traversed twice in the same direction")));
                }
            }
        }
        Ok(())
    }

    /// Local index of global edge `e` within triangle `t`.
    ///
    /// Panics if `e` is not an edge of `t`.
    pub fn local_index_of_edge(&self, t: usize, e: usize) -> usize {
        self.triangle_edges[t]
            .iter()
            .position(|&x| x == e)
            .expect("edge does not belong to triangle")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_triangle_square_structure() {
        let m = unit_square_mesh(1).unwrap();
        assert_eq!((m.num_vertices(), m.num_triangles(), m.num_edges()), (4, 2, 5));
        m.validate().unwrap();
        assert_eq!(m.boundary_edges().count(), 4);
        assert!(m.boundary_edges().all(|(_, mk)| mk == 1));
        let interior: Vec<_> = (0..5).filter(|&e| !m.is_boundary_edge(e)).collect();
        assert_eq!(interior.len(), 1);
        let e = interior[0];
        let (t0, t1) = m.edge_triangles(e);
        let t1 = t1.unwrap();
        let n0 = m.outward_normal(t0, m.local_index_of_edge(t0, e));
        let n1 = m.outward_normal(t1, m.local_index_of_edge(t1, e));
        assert!((n0[0] + n1[0]).abs() < 1e-15 && (n0[1] + n1[1]).abs() < 1e-15);
    }

    #[test]
    fn outward_normals_point_away_from_centroid() {
        let m = plate_with_hole_mesh(100.0, 30.0, 16, 1).unwrap();
        for t in 0..m.num_triangles() {
            let c = m.centroid(t);
            for i in 0..3 {
                let e = m.triangle_edges(t)[i];
                let [a, b] = m.edge(e).map(|v| m.vertex(v));
                let mid = [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0];
                let n = m.outward_normal(t, i);
                assert!((mid[0] - c[0]) * n[0] + (mid[1] - c[1]) * n[1] > 0.0);
            }
        }
    }

    #[test]
    fn rejects_clockwise_and_nonmanifold() {
        let v = vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]];
        assert!(matches!(
            TriMesh::new(v.clone(), vec![[0, 2, 1]], &[]),
            Err(MeshError::NonPositiveArea { .. })
        ));
        let mut v2 = v.clone();
        v2.push([2.0, 2.0]);
        assert!(matches!(
            TriMesh::new(v2, vec![[0, 1, 2], [1, 3, 2], [2, 1, 4]], &[]),
            Err(MeshError::NonManifoldEdge(1, 2))
        ));
        assert!(matches!(
            TriMesh::new(v, vec![[0, 1, 2], [1, 3, 2]], &[([1, 2], 5)]),
            Err(MeshError::NotABoundaryEdge(1, 2))
        ));
    }
}
