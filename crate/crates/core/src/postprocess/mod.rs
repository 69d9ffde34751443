//! Solution fields, error norms, convergence rates and export.

mod exact;
mod vtk;

use rayon::prelude::*;
use thiserror::Error;

pub use exact::ExactSolution;
pub use vtk::{export_vtk, parse_vtk, VtkDocument};

use crate::assembly::{recover_shear, AssemblyError, BlockSystem, Spaces};
use crate::fespace::{element_shapes, FESpace, SpaceKind};
use crate::material::MaterialParams;
use crate::mesh::Point;

/// Coefficients of a solved problem together with its spaces.
#[derive(Debug, Clone)]
pub struct SolutionFields {
    pub spaces: Spaces,
    pub material: MaterialParams,
    pub moment: Vec<f64>,
    pub rotation: Vec<f64>,
    pub deflection: Vec<f64>,
    /// Multiplier coefficients; empty for monolithic solves.
    pub multiplier: Vec<f64>,
    /// Shear `gamma_h = mu t^-2 (grad w_h - theta_h)` in the rotation space.
    pub shear: Vec<f64>,
}

impl SolutionFields {
    /// Fields from a full system vector of `system`.
    pub fn from_system(system: &BlockSystem, x: &[f64]) -> Result<Self, AssemblyError> {
        if x.len() != system.dim() {
            return Err(AssemblyError::Incompatible(format!("{} values for a system of size {}", x.len(), system.dim())));
        }
        let (moment, rotation, deflection, multiplier) = system.split(x);
        let shear = recover_shear(&system.spaces, &system.material, &rotation, &deflection)?;
        Ok(Self { spaces: system.spaces.clone(), material: system.material, moment, rotation, deflection, multiplier, shear })
    }

    pub fn moment_at(&self, t: usize, p: Point) -> [f64; 3] {
        self.spaces.moment.evaluate(&self.moment, t, p)
    }

    pub fn rotation_at(&self, t: usize, p: Point) -> [f64; 2] {
        let v = self.spaces.rotation.evaluate(&self.rotation, t, p);
        [v[0], v[1]]
    }

    pub fn shear_at(&self, t: usize, p: Point) -> [f64; 2] {
        let v = self.spaces.rotation.evaluate(&self.shear, t, p);
        [v[0], v[1]]
    }

    pub fn deflection_at(&self, t: usize, p: Point) -> f64 {
        self.spaces.deflection.evaluate(&self.deflection, t, p)[0]
    }

    /// Deflection at the mesh vertices, read from the nodal coefficients.
    pub fn vertex_deflection(&self) -> Vec<f64> {
        let mesh = self.spaces.mesh();
        let w = &self.spaces.deflection;
        let mut out = vec![0.0; mesh.num_vertices()];
        for e in 0..mesh.num_edges() {
            let [a, b] = mesh.edge(e);
            let dofs = w.edge_dofs(e);
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            out[lo] = self.deflection[dofs[0]];
            out[hi] = self.deflection[dofs[dofs.len() - 1]];
        }
        out
    }

    /// Smallest and largest nodal deflection.
    pub fn deflection_range(&self) -> (f64, f64) {
        self.vertex_deflection().iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &w| (lo.min(w), hi.max(w)))
    }
}

/// Exactness of the error quadrature: at least `2 (order + 2)`, raised to
/// the richest triangle rule since exact fields are rarely polynomial.
fn error_degree(kind: SpaceKind) -> usize {
    (2 * (kind.order() + 2)).max(crate::quadrature::MAX_DEGREE)
}

/// `sqrt(sum_T int_T |u_h - u|^2)` over the components of the space, with
/// the Frobenius norm for moments. Multiplier spaces have no volume values
/// and give zero.
pub fn l2_error(space: &FESpace, coeffs: &[f64], exact: impl Fn(Point) -> [f64; 3] + Sync) -> f64 {
    assert_eq!(coeffs.len(), space.ndof(), "coefficient length");
    let nc = space.kind().components();
    let deg = error_degree(space.kind());
    let parts: Vec<f64> = (0..space.mesh().num_triangles())
        .into_par_iter()
        .map(|t| {
            let tab = element_shapes(space, t, deg, 1);
            let dofs = space.element_dofs(t);
            let mut s = 0.0;
            for (q, p) in tab.volume.points.iter().enumerate() {
                let u = exact(*p);
                let mut uh = [0.0; 3];
                for (j, &d) in dofs.iter().enumerate() {
                    for c in 0..nc {
                        uh[c] += coeffs[d] * tab.volume.values[q][j][c];
                    }
                }
                // Off-diagonal moment entries appear twice in the Frobenius norm.
                let e: f64 = (0..nc)
                    .map(|c| {
                        let w = if nc == 3 && c == 2 { 2.0 } else { 1.0 };
                        w * (uh[c] - u[c]).powi(2)
                    })
                    .sum();
                s += tab.volume.weights[q] * e;
            }
            s
        })
        .collect();
    parts.iter().sum::<f64>().sqrt()
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum RateError {
    #[error("need at least two levels, got {0}")]
    TooFewLevels(usize),
    #[error("mesh sizes must strictly decrease (level {0})")]
    NotDecreasing(usize),
    #[error("error at level {0} is not positive; the rate is undefined")]
    ZeroError(usize),
}

/// Observed orders `log(e_i / e_{i+1}) / log(h_i / h_{i+1})` between
/// consecutive levels `(h, e)`.
pub fn convergence_rate(errors: &[(f64, f64)]) -> Result<Vec<f64>, RateError> {
    if errors.len() < 2 {
        return Err(RateError::TooFewLevels(errors.len()));
    }
    for (i, &(h, e)) in errors.iter().enumerate() {
        if !(e > 0.0) {
            return Err(RateError::ZeroError(i));
        }
        if i > 0 && !(h < errors[i - 1].0) {
            return Err(RateError::NotDecreasing(i));
        }
    }
    Ok(errors.windows(2).map(|w| (w[0].1 / w[1].1).ln() / (w[0].0 / w[1].0).ln()).collect())
}
