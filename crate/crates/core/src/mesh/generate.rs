use std::f64::consts::PI;

use super::{MeshError, Point, TriMesh};

/// Boundary markers used by [`plate_with_hole_mesh`].
pub struct HoleMarkers;

impl HoleMarkers {
    /// Left edge, x = 0.
    pub const CLAMPED: i32 = 1;
    /// Right edge, x = side.
    pub const TRACTION: i32 = 2;
    /// Top and bottom edges.
    pub const FREE: i32 = 3;
    /// Polygonal hole boundary.
    pub const HOLE: i32 = 4;
}

/// Structured mesh of the unit square with `n` cells per side, every cell
/// split along its lower-left to upper-right diagonal. All boundary edges
/// carry marker 1.
pub fn unit_square_mesh(n: usize) -> Result<TriMesh, MeshError> {
    if n == 0 {
        return Err(MeshError::InvalidArgument("square mesh needs n >= 1".into()));
    }
    let idx = |i: usize, j: usize| j * (n + 1) + i;
    let h = 1.0 / n as f64;
    let mut vertices = Vec::with_capacity((n + 1) * (n + 1));
    for j in 0..=n {
        for i in 0..=n {
            // Exact end points rather than n * (1/n).
            let x = if i == n { 1.0 } else { i as f64 * h };
            let y = if j == n { 1.0 } else { j as f64 * h };
            vertices.push([x, y]);
        }
    }
    let mut triangles = Vec::with_capacity(2 * n * n);
    for j in 0..n {
        for i in 0..n {
            let (v00, v10, v11, v01) = (idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1));
            triangles.push([v00, v10, v11]);
            triangles.push([v00, v11, v01]);
        }
    }
    let mut boundary = Vec::with_capacity(4 * n);
    for i in 0..n {
        boundary.push(([idx(i, 0), idx(i + 1, 0)], 1));
        boundary.push(([idx(i, n), idx(i + 1, n)], 1));
        boundary.push(([idx(0, i), idx(0, i + 1)], 1));
        boundary.push(([idx(n, i), idx(n, i + 1)], 1));
    }
    TriMesh::new(vertices, triangles, &boundary)
}

/// Splits every triangle into four through its edge midpoints.
pub fn refine_uniform(mesh: &TriMesh) -> TriMesh {
    refine_uniform_with_parents(mesh).0
}

/// Like [`refine_uniform`], also returning the parent triangle of every child.
///
/// Vertices of the coarse mesh keep their indices; the midpoint of coarse
/// edge `e` becomes vertex `num_vertices + e`.
pub fn refine_uniform_with_parents(mesh: &TriMesh) -> (TriMesh, Vec<usize>) {
    let nv = mesh.num_vertices();
    let mut vertices = mesh.vertices().to_vec();
    for &[a, b] in mesh.edges() {
        let (pa, pb) = (mesh.vertex(a), mesh.vertex(b));
        vertices.push([0.5 * (pa[0] + pb[0]), 0.5 * (pa[1] + pb[1])]);
    }
    let mut triangles = Vec::with_capacity(4 * mesh.num_triangles());
    let mut parents = Vec::with_capacity(4 * mesh.num_triangles());
    for t in 0..mesh.num_triangles() {
        let [v0, v1, v2] = mesh.triangle(t);
        let [m0, m1, m2] = mesh.triangle_edges(t).map(|e| nv + e);
        triangles.extend_from_slice(&[[v0, m2, m1], [m2, v1, m0], [m1, m0, v2], [m0, m1, m2]]);
        parents.extend_from_slice(&[t; 4]);
    }
    let mut boundary = Vec::new();
    for (e, marker) in mesh.boundary_edges() {
        let [a, b] = mesh.edge(e);
        boundary.push(([a, nv + e], marker));
        boundary.push(([nv + e, b], marker));
    }
    let refined = TriMesh::new(vertices, triangles, &boundary)
        .expect("midpoint refinement of a valid mesh is valid");
    (refined, parents)
}

/// Square plate `[0, side]^2` with a centred polygonal hole.
///
/// The mesh is an O-grid: rays from the hole centre at the angles of a
/// regular `segments`-gon, cut into radial layers between the polygon and the
/// square. `graded_levels` adds rays around the four corner directions and
/// rings next to the hole and the outer boundary, each level halving the
/// previous spacing. The triangulation is mirror symmetric about y = side/2.
///
/// `segments` must be a multiple of 8 so that the corner rays exist.
pub fn plate_with_hole_mesh(
    side: f64,
    hole_diameter: f64,
    segments: usize,
    graded_levels: usize,
) -> Result<TriMesh, MeshError> {
    if !(side > 0.0) {
        return Err(MeshError::InvalidArgument("plate side must be positive".into()));
    }
    if !(hole_diameter > 0.0 && hole_diameter < side) {
        return Err(MeshError::InvalidArgument(format!(
            "hole diameter {hole_diameter} must lie strictly between 0 and the side {side}"
        )));
    }
    if segments < 8 || segments % 8 != 0 {
        return Err(MeshError::InvalidArgument(format!(
            "hole segments must be a positive multiple of 8, got {segments}"
        )));
    }

    let half = 0.5 * side;
    let radius = 0.5 * hole_diameter;
    let center = [half, half];
    let step = 2.0 * PI / segments as f64;

    // Signed angles in (-pi, pi] so that mirrored rays are exact negations.
    let mut angles: Vec<f64> = (0..segments)
        .map(|j| j as i64 - (segments / 2) as i64 + 1)
        .map(|j| j as f64 * step)
        .collect();
    for corner in [PI / 4.0, 3.0 * PI / 4.0] {
        for l in 1..=graded_levels {
            let d = step * 0.5f64.powi(l as i32);
            for a in [corner - d, corner + d] {
                angles.push(a);
                angles.push(-a);
            }
        }
    }
    angles.sort_by(f64::total_cmp);
    angles.dedup();

    let layers = (segments / 8).max(1);
    let base = 1.0 / layers as f64;
    let mut rho: Vec<f64> = (0..=layers).map(|i| i as f64 * base).collect();
    *rho.last_mut().unwrap() = 1.0;
    for l in 1..=graded_levels {
        let d = base * 0.5f64.powi(l as i32);
        rho.push(d);
        rho.push(1.0 - d);
    }
    rho.sort_by(f64::total_cmp);
    rho.dedup();

    let nrays = angles.len();
    let rings = rho.len();
    let mut vertices = Vec::with_capacity(nrays * rings);
    for &r in &rho {
        for &phi in &angles {
            let dir = [phi.cos(), phi.sin()];
            let inner = [center[0] + radius * dir[0], center[1] + radius * dir[1]];
            let outer = square_hit(center, half, dir);
            vertices.push(if r == 0.0 {
                inner
            } else if r == 1.0 {
                outer
            } else {
                [inner[0] + r * (outer[0] - inner[0]), inner[1] + r * (outer[1] - inner[1])]
            });
        }
    }

    let idx = |i: usize, j: usize| i * nrays + j % nrays;
    let mut triangles = Vec::with_capacity(2 * nrays * (rings - 1));
    for j in 0..nrays {
        let wraps = j + 1 == nrays;
        let upper = !wraps && angles[j] >= 0.0;
        for i in 0..rings - 1 {
            let (ia, ib, oa, ob) = (idx(i, j), idx(i, j + 1), idx(i + 1, j), idx(i + 1, j + 1));
            if upper {
                triangles.push([ia, oa, ob]);
                triangles.push([ia, ob, ib]);
            } else {
                triangles.push([ia, oa, ib]);
                triangles.push([oa, ob, ib]);
            }
        }
    }

    let tol = 1e-9 * side;
    let mut boundary = Vec::with_capacity(2 * nrays);
    for j in 0..nrays {
        boundary.push(([idx(0, j), idx(0, j + 1)], HoleMarkers::HOLE));
        let (a, b) = (idx(rings - 1, j), idx(rings - 1, j + 1));
        let mid_x = 0.5 * (vertices[a][0] + vertices[b][0]);
        let marker = if mid_x < tol {
            HoleMarkers::CLAMPED
        } else if mid_x > side - tol {
            HoleMarkers::TRACTION
        } else {
            HoleMarkers::FREE
        };
        boundary.push(([a, b], marker));
    }
    TriMesh::new(vertices, triangles, &boundary)
}

// Intersection of the ray from the centre in direction `dir` with the square.
fn square_hit(center: Point, half: f64, dir: Point) -> Point {
    let snap = |v: f64| {
        if (v - half).abs() < 1e-12 * half {
            half
        } else if (v + half).abs() < 1e-12 * half {
            -half
        } else {
            v
        }
    };
    let (c, s) = (dir[0], dir[1]);
    let (dx, dy) = if c.abs() >= s.abs() {
        (half * c.signum(), snap(half * s / c.abs()))
    } else {
        (snap(half * c / s.abs()), half * s.signum())
    };
    [center[0] + dx, center[1] + dy]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted_coords(m: &TriMesh) -> Vec<[u64; 2]> {
        // Coordinates here are dyadic, so bit patterns compare exactly.
        let mut v: Vec<[u64; 2]> = m.vertices().iter().map(|p| [p[0].to_bits(), p[1].to_bits()]).collect();
        v.sort();
        v
    }

    #[test]
    fn square_counts() {
        let m1 = unit_square_mesh(1).unwrap();
        assert_eq!((m1.num_triangles(), m1.num_vertices(), m1.num_edges()), (2, 4, 5));
        let m2 = unit_square_mesh(2).unwrap();
        assert_eq!((m2.num_triangles(), m2.num_vertices(), m2.num_edges()), (8, 9, 16));
        assert_eq!(m2.euler_characteristic(), 1);
        let m4 = unit_square_mesh(4).unwrap();
        assert_eq!(m4.num_triangles(), 32);
        assert!((m4.h_max() - 0.25 * 2f64.sqrt()).abs() < 1e-15);
        assert!(matches!(unit_square_mesh(0), Err(MeshError::InvalidArgument(_))));
    }

    #[test]
    fn refinement_matches_structured_mesh() {
        let r = refine_uniform(&unit_square_mesh(1).unwrap());
        assert_eq!(r.num_triangles(), 8);
        let r2 = refine_uniform(&unit_square_mesh(2).unwrap());
        r2.validate().unwrap();
        assert_eq!(sorted_coords(&r2), sorted_coords(&unit_square_mesh(4).unwrap()));
        assert_eq!(r2.num_edges(), unit_square_mesh(4).unwrap().num_edges());
        assert_eq!(r2.boundary_edges().count(), 16);
    }

    #[test]
    fn refinement_halves_edges_and_quarters_areas() {
        let m = unit_square_mesh(3).unwrap();
        let r = refine_uniform(&m);
        assert!((r.h_max() - 0.5 * m.h_max()).abs() < 1e-15);
        let max_area = |m: &TriMesh| (0..m.num_triangles()).map(|t| m.area(t)).fold(0.0, f64::max);
        assert!((max_area(&r) - 0.25 * max_area(&m)).abs() < 1e-16);
    }

    #[test]
    fn hole_geometry() {
        let m = plate_with_hole_mesh(100.0, 30.0, 32, 0).unwrap();
        m.validate().unwrap();
        let mut hole_vertices = 0;
        for (e, marker) in m.boundary_edges() {
            if marker == HoleMarkers::HOLE {
                for v in m.edge(e) {
                    let p = m.vertex(v);
                    assert!(((p[0] - 50.0).hypot(p[1] - 50.0) - 15.0).abs() < 1e-12);
                    hole_vertices += 1;
                }
            }
        }
        assert_eq!(hole_vertices, 64);
        let polygon = 0.5 * 32.0 * 15.0f64.powi(2) * (2.0 * PI / 32.0).sin();
        let expected = 100.0f64.powi(2) - polygon;
        assert!(((m.total_area() - expected) / expected).abs() < 1e-12);
        // Annulus: V - E + T = 0.
        assert_eq!(m.euler_characteristic(), 0);
    }

    #[test]
    fn hole_markers_layout() {
        let m = plate_with_hole_mesh(100.0, 30.0, 16, 0).unwrap();
        let mut length = [0.0; 5];
        for (e, marker) in m.boundary_edges() {
            length[marker as usize] += m.edge_length(e);
            let [a, b] = m.edge(e).map(|v| m.vertex(v));
            match marker {
                HoleMarkers::CLAMPED => assert!(a[0] == 0.0 && b[0] == 0.0),
                HoleMarkers::TRACTION => assert!(a[0] == 100.0 && b[0] == 100.0),
                HoleMarkers::FREE => assert!(a[1] == b[1] && (a[1] == 0.0 || a[1] == 100.0)),
                HoleMarkers::HOLE => {}
                other => panic!("unexpected marker {other}"),
            }
        }
        assert!((length[1] - 100.0).abs() < 1e-12);
        assert!((length[2] - 100.0).abs() < 1e-12);
        assert!((length[3] - 200.0).abs() < 1e-12);
    }

    #[test]
    fn grading_refines() {
        let coarse = plate_with_hole_mesh(100.0, 30.0, 32, 0).unwrap();
        let graded = plate_with_hole_mesh(100.0, 30.0, 32, 2).unwrap();
        graded.validate().unwrap();
        assert!(graded.num_triangles() > coarse.num_triangles());
        assert!(graded.h_min() < coarse.h_min());
        let polygon_area: f64 = {
            // Hole polygon area from its own boundary edges (shoelace).
            let mut a = 0.0;
            for (e, marker) in graded.boundary_edges() {
                if marker == HoleMarkers::HOLE {
                    let [p, q] = graded.edge(e).map(|v| graded.vertex(v));
                    a += 0.5 * ((p[0] - 50.0) * (q[1] - 50.0) - (q[0] - 50.0) * (p[1] - 50.0)).abs();
                }
            }
            a
        };
        assert!(((graded.total_area() + polygon_area - 1e4) / 1e4).abs() < 1e-12);
    }

    #[test]
    fn hole_mesh_is_mirror_symmetric() {
        let m = plate_with_hole_mesh(100.0, 30.0, 16, 2).unwrap();
        let mut cents: Vec<Point> = (0..m.num_triangles()).map(|t| m.centroid(t)).collect();
        cents.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
        for c in &cents {
            let mirrored = [c[0], 100.0 - c[1]];
            assert!(cents
                .iter()
                .any(|d| (d[0] - mirrored[0]).abs() < 1e-9 && (d[1] - mirrored[1]).abs() < 1e-9));
        }
    }

    #[test]
    fn degenerate_hole_rejected() {
        assert!(plate_with_hole_mesh(100.0, 100.0, 32, 0).is_err());
        assert!(plate_with_hole_mesh(100.0, 0.0, 32, 0).is_err());
        assert!(plate_with_hole_mesh(100.0, 30.0, 12, 0).is_err());
    }
}
