//! Legacy ASCII unstructured-grid export.

use std::collections::BTreeMap;
use std::fmt::Write;

use super::SolutionFields;
use crate::mesh::TriMesh;

/// Writes the mesh with the deflection at vertices and rotation, moment and
/// shear at triangle centroids.
pub fn export_vtk(mesh: &TriMesh, fields: &SolutionFields) -> String {
    let mut s = String::new();
    let nv = mesh.num_vertices();
    let nt = mesh.num_triangles();
    s.push_str("# vtk DataFile Version 3.0\nplate solution\nASCII\nDATASET UNSTRUCTURED_GRID\n");
    let _ = writeln!(s, "POINTS {nv} double");
    for p in mesh.vertices() {
        let _ = writeln!(s, "{:.16e} {:.16e} 0", p[0], p[1]);
    }
    let _ = writeln!(s, "CELLS {nt} {}", 4 * nt);
    for t in mesh.triangles() {
        let _ = writeln!(s, "3 {} {} {}", t[0], t[1], t[2]);
    }
    let _ = writeln!(s, "CELL_TYPES {nt}");
    for _ in 0..nt {
        s.push_str("5\n");
    }

    let w = fields.vertex_deflection();
    let _ = writeln!(s, "POINT_DATA {nv}\nSCALARS w double 1\nLOOKUP_TABLE default");
    for v in &w {
        let _ = writeln!(s, "{v:.16e}");
    }

    let centroids: Vec<_> = (0..nt).map(|t| mesh.centroid(t)).collect();
    let _ = writeln!(s, "CELL_DATA {nt}");
    let vectors = |s: &mut String, name: &str, f: &dyn Fn(usize) -> [f64; 2]| {
        let _ = writeln!(s, "VECTORS {name} double");
        for t in 0..nt {
            let v = f(t);
            let _ = writeln!(s, "{:.16e} {:.16e} 0", v[0], v[1]);
        }
    };
    vectors(&mut s, "theta", &|t| fields.rotation_at(t, centroids[t]));
    vectors(&mut s, "gamma", &|t| fields.shear_at(t, centroids[t]));
    let moments: Vec<[f64; 3]> = (0..nt).map(|t| fields.moment_at(t, centroids[t])).collect();
    for (c, name) in ["M_xx", "M_yy", "M_xy"].iter().enumerate() {
        let _ = writeln!(s, "SCALARS {name} double 1\nLOOKUP_TABLE default");
        for m in &moments {
            let _ = writeln!(s, "{:.16e}", m[c]);
        }
    }
    s
}

/// The parts of a legacy document written by [`export_vtk`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct VtkDocument {
    pub points: Vec<[f64; 3]>,
    pub cells: Vec<Vec<usize>>,
    pub cell_types: Vec<u32>,
    /// Arrays by name, flattened by component.
    pub point_data: BTreeMap<String, Vec<f64>>,
    pub cell_data: BTreeMap<String, Vec<f64>>,
}

/// Reads back a legacy ASCII unstructured grid with `SCALARS` and `VECTORS`
/// arrays.
pub fn parse_vtk(text: &str) -> Result<VtkDocument, String> {
    let mut doc = VtkDocument::default();
    let mut tok = text.lines().skip(3).flat_map(str::split_whitespace);
    let mut next = |what: &str| tok.next().ok_or_else(|| format!("unexpected end of document reading {what}"));
    fn num<T: std::str::FromStr>(s: &str) -> Result<T, String> {
        s.parse().map_err(|_| format!("bad number '{s}'"))
    }
    let mut on_points = true;
    let mut count = 0usize;
    while let Ok(key) = next("keyword") {
        match key {
            "DATASET" => {
                next("dataset type")?;
            }
            "POINTS" => {
                let n: usize = num(next("point count")?)?;
                next("point type")?;
                for _ in 0..n {
                    let p = [num(next("x")?)?, num(next("y")?)?, num(next("z")?)?];
                    doc.points.push(p);
                }
            }
            "CELLS" => {
                let n: usize = num(next("cell count")?)?;
                next("cell size")?;
                for _ in 0..n {
                    let k: usize = num(next("cell length")?)?;
                    let c = (0..k).map(|_| num(next("cell index")?)).collect::<Result<_, _>>()?;
                    doc.cells.push(c);
                }
            }
            "CELL_TYPES" => {
                let n: usize = num(next("type count")?)?;
                for _ in 0..n {
                    doc.cell_types.push(num(next("cell type")?)?);
                }
            }
            "POINT_DATA" | "CELL_DATA" => {
                on_points = key == "POINT_DATA";
                count = num(next("data count")?)?;
            }
            "SCALARS" | "VECTORS" => {
                let name = next("array name")?.to_string();
                next("array type")?;
                let ncomp = if key == "VECTORS" {
                    3
                } else {
                    let c: usize = num(next("components")?)?;
                    if next("lookup")? != "LOOKUP_TABLE" {
                        return Err("expected LOOKUP_TABLE".into());
                    }
                    next("table name")?;
                    c
                };
                let vals = (0..count * ncomp).map(|_| num(next("value")?)).collect::<Result<Vec<f64>, _>>()?;
                if on_points { &mut doc.point_data } else { &mut doc.cell_data }.insert(name, vals);
            }
            other => return Err(format!("unknown keyword '{other}'")),
        }
    }
    Ok(doc)
}
