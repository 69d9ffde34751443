//! Line-oriented ASCII mesh format.
//!
//! ```text
//! tdnnsmesh 1
//! vertices N
//! x y            (N lines)
//! triangles M
//! v0 v1 v2       (M lines)
//! boundary K
//! v0 v1 marker   (K lines)
//! ```
//!
//! Tokens are whitespace separated and `#` starts a comment.

use std::fmt::Write as _;

use super::{signed_area, MeshError, Point, TriMesh};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MeshWarning {
    /// A clockwise triangle was reordered to counter-clockwise.
    Reoriented { line: usize, triangle: usize },
}

impl std::fmt::Display for MeshWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MeshWarning::Reoriented { line, triangle } => {
                write!(f, "line {line}: triangle {triangle} was clockwise and has been reoriented")
            }
        }
    }
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Self { inner: text.lines().enumerate(), last: 0 }
    }

    /// Next non-empty line with comments stripped, as (line number, tokens).
    fn next_tokens(&mut self) -> Option<(usize, Vec<&'a str>)> {
        for (i, raw) in self.inner.by_ref() {
            let content = raw.split('#').next().unwrap_or("");
            let tokens: Vec<&str> = content.split_whitespace().collect();
            if !tokens.is_empty() {
                self.last = i + 1;
                return Some((i + 1, tokens));
            }
        }
        None
    }

    fn expect(&mut self, what: &str) -> Result<(usize, Vec<&'a str>), MeshError> {
        self.next_tokens().ok_or_else(|| MeshError::Parse {
            line: self.last + 1,
            message: format!("unexpected end of document, expected {what}"),
        })
    }

    fn section(&mut self, keyword: &str) -> Result<usize, MeshError> {
        let (line, tokens) = self.expect(keyword)?;
        match tokens.as_slice() {
            [k, n] if *k == keyword => n.parse().map_err(|_| MeshError::Parse {
                line,
                message: format!("invalid count `{n}` for section `{keyword}`"),
            }),
            _ => Err(MeshError::Parse { line, message: format!("expected `{keyword} <count>`") }),
        }
    }
}

fn parse_fields<T: std::str::FromStr, const N: usize>(line: usize, tokens: &[&str]) -> Result<[T; N], MeshError> {
    if tokens.len() != N {
        return Err(MeshError::Parse {
            line,
            message: format!("expected {N} fields, found {}", tokens.len()),
        });
    }
    let mut out = Vec::with_capacity(N);
    for tok in tokens {
        out.push(tok.parse::<T>().map_err(|_| MeshError::Parse {
            line,
            message: format!("cannot parse `{tok}`"),
        })?);
    }
    Ok(out.try_into().ok().expect("length checked"))
}

/// Parses a mesh document. Clockwise triangles are reoriented and reported
/// as warnings; every other defect is an error naming its line.
pub fn read_mesh(text: &str) -> Result<(TriMesh, Vec<MeshWarning>), MeshError> {
    let mut lines = Lines::new(text);
    let (line, header) = lines.expect("header")?;
    if header != ["tdnnsmesh", "1"] {
        return Err(MeshError::Parse { line, message: "expected header `tdnnsmesh 1`".into() });
    }

    let nv = lines.section("vertices")?;
    let mut vertices: Vec<Point> = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (line, tokens) = lines.expect("vertex")?;
        let [x, y] = parse_fields::<f64, 2>(line, &tokens)?;
        if !(x.is_finite() && y.is_finite()) {
            return Err(MeshError::Parse { line, message: "non-finite coordinate".into() });
        }
        vertices.push([x, y]);
    }

    let check_index = |line: usize, v: usize| {
        if v >= nv {
            Err(MeshError::IndexOutOfRange { line, index: v, count: nv })
        } else {
            Ok(v)
        }
    };

    let nt = lines.section("triangles")?;
    let mut triangles = Vec::with_capacity(nt);
    let mut warnings = Vec::new();
    for t in 0..nt {
        let (line, tokens) = lines.expect("triangle")?;
        let mut tri = parse_fields::<usize, 3>(line, &tokens)?;
        for &v in &tri {
            check_index(line, v)?;
        }
        let area = signed_area(vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]);
        if area == 0.0 || !area.is_finite() {
            return Err(MeshError::Parse { line, message: format!("triangle {t} has zero area") });
        }
        if area < 0.0 {
            tri.swap(1, 2);
            warnings.push(MeshWarning::Reoriented { line, triangle: t });
        }
        triangles.push(tri);
    }

    let nb = lines.section("boundary")?;
    let mut boundary = Vec::with_capacity(nb);
    for _ in 0..nb {
        let (line, tokens) = lines.expect("boundary edge")?;
        if tokens.len() != 3 {
            return Err(MeshError::Parse { line, message: "expected `v0 v1 marker`".into() });
        }
        let [a, b] = parse_fields::<usize, 2>(line, &tokens[..2])?;
        let [marker] = parse_fields::<i32, 1>(line, &tokens[2..])?;
        boundary.push(([check_index(line, a)?, check_index(line, b)?], marker));
    }
    if let Some((line, _)) = lines.next_tokens() {
        return Err(MeshError::Parse { line, message: "trailing content after boundary section".into() });
    }

    let mesh = TriMesh::new(vertices, triangles, &boundary)?;
    Ok((mesh, warnings))
}

/// Serialises a mesh. Coordinates use the shortest representation that
/// parses back to the identical `f64`.
pub fn write_mesh(mesh: &TriMesh) -> String {
    let mut out = String::new();
    out.push_str("tdnnsmesh 1\n");
    let _ = writeln!(out, "vertices {}", mesh.num_vertices());
    for p in mesh.vertices() {
        let _ = writeln!(out, "{:e} {:e}", p[0], p[1]);
    }
    let _ = writeln!(out, "triangles {}", mesh.num_triangles());
    for [a, b, c] in mesh.triangles() {
        let _ = writeln!(out, "{a} {b} {c}");
    }
    let _ = writeln!(out, "boundary {}", mesh.boundary_edges().count());
    for (e, marker) in mesh.boundary_edges() {
        let [a, b] = mesh.edge(e);
        let _ = writeln!(out, "{a} {b} {marker}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{plate_with_hole_mesh, unit_square_mesh};

    #[test]
    fn round_trip_is_exact() {
        for mesh in [unit_square_mesh(1).unwrap(), plate_with_hole_mesh(100.0, 30.0, 16, 1).unwrap()] {
            let text = write_mesh(&mesh);
            let (back, warnings) = read_mesh(&text).unwrap();
            assert!(warnings.is_empty());
            assert_eq!(back, mesh);
            assert_eq!(write_mesh(&back), text);
        }
    }

    #[test]
    fn comments_and_blank_lines() {
        let doc = "# a square\ntdnnsmesh 1\n\nvertices 4\n0 0\n1 0 # corner\n1 1\n0 1\ntriangles 2\n0 1 2\n0 2 3\nboundary 1\n0 1 7\n";
        let (m, _) = read_mesh(doc).unwrap();
        assert_eq!(m.num_triangles(), 2);
        assert_eq!(m.boundary_edges().filter(|&(_, mk)| mk == 7).count(), 1);
        assert_eq!(m.boundary_edges().count(), 4);
    }

    #[test]
    fn index_out_of_range_names_line() {
        let doc = "tdnnsmesh 1\nvertices 4\n0 0\n1 0\n1 1\n0 1\ntriangles 2\n0 1 2\n0 2 99\nboundary 0\n";
        assert_eq!(
            read_mesh(doc).unwrap_err(),
            MeshError::IndexOutOfRange { line: 9, index: 99, count: 4 }
        );
    }

    #[test]
    fn clockwise_triangle_is_reoriented() {
        let doc = "tdnnsmesh 1\nvertices 4\n0 0\n1 0\n1 1\n0 1\ntriangles 2\n0 1 2\n0 3 2\nboundary 0\n";
        let (m, warnings) = read_mesh(doc).unwrap();
        assert_eq!(warnings, vec![MeshWarning::Reoriented { line: 9, triangle: 1 }]);
        assert!(m.area(1) > 0.0);
        m.validate().unwrap();
    }

    #[test]
    fn malformed_documents() {
        assert!(matches!(read_mesh("tdnnsmesh 2\n"), Err(MeshError::Parse { line: 1, .. })));
        assert!(matches!(
            read_mesh("tdnnsmesh 1\nvertices 2\n0 0\n"),
            Err(MeshError::Parse { line: 4, .. })
        ));
        let degenerate = "tdnnsmesh 1\nvertices 3\n0 0\n1 0\n2 0\ntriangles 1\n0 1 2\nboundary 0\n";
        assert!(matches!(read_mesh(degenerate), Err(MeshError::Parse { line: 7, .. })));
        let bad_number = "tdnnsmesh 1\nvertices 1\n0 zero\n";
        assert!(matches!(read_mesh(bad_number), Err(MeshError::Parse { line: 3, .. })));
    }
}
