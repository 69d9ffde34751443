//! Benchmark problems, single solves and convergence studies.

use std::fmt::Write;
use std::sync::Arc;

use thiserror::Error;

use crate::assembly::{assemble, field, shear_residual, AssemblyError, BCSpec, BlockSystem, LoadSpec, MarkerBc, Spaces};
use crate::fespace::{element_shapes, FESpace, MAX_ORDER, MIN_ORDER};
use crate::material::MaterialParams;
use crate::mesh::{plate_with_hole_mesh, refine_uniform_with_parents, unit_square_mesh, HoleMarkers, MeshError, TriMesh};
use crate::postprocess::{convergence_rate, l2_error, ExactSolution, SolutionFields};
use crate::solver::{solve_system, Method, SolveReport, SolverError, DEFAULT_TOL};

#[derive(Debug, Error)]
pub enum StudyError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Assembly(#[from] AssemblyError),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

/// Geometry, data and boundary conditions of a run.
#[derive(Debug, Clone)]
pub enum Case {
    /// Clamped unit square with the closed-form solution, `n` cells per side
    /// on the first level.
    ClampedSquare { n: usize },
    /// 100 x 100 plate with a central hole of diameter 30, clamped on the
    /// left, loaded by the edge shear `traction * (y - 50)` on the right and
    /// free elsewhere.
    PlateWithHole { segments: usize, graded_levels: usize, traction: f64 },
    /// A mesh read from file, clamped on every boundary marker under the unit
    /// load `g = 1`.
    Custom { mesh: Arc<TriMesh> },
}

impl Case {
    /// Default material of the case for thickness `t`.
    pub fn material(&self, t: f64) -> MaterialParams {
        match self {
            Case::ClampedSquare { .. } | Case::Custom { .. } => ExactSolution::clamped_square(t).material,
            Case::PlateWithHole { .. } => MaterialParams::new(2.1e5, 0.3, 5.0 / 6.0, t),
        }
    }

    fn base_mesh(&self) -> Result<TriMesh, StudyError> {
        Ok(match self {
            Case::ClampedSquare { n } => unit_square_mesh(*n)?,
            Case::PlateWithHole { segments, graded_levels, .. } => plate_with_hole_mesh(100.0, 30.0, *segments, *graded_levels)?,
            Case::Custom { mesh } => (**mesh).clone(),
        })
    }

    pub fn bc(&self) -> BCSpec {
        match self {
            Case::ClampedSquare { .. } | Case::Custom { .. } => BCSpec::uniform(MarkerBc::clamped()),
            Case::PlateWithHole { traction, .. } => {
                let s = *traction;
                BCSpec::uniform(MarkerBc::free())
                    .with(HoleMarkers::CLAMPED, MarkerBc::clamped())
                    .with(HoleMarkers::TRACTION, MarkerBc::shear_load(field(move |p| s * (p[1] - 50.0))))
            }
        }
    }

    pub fn load(&self, material: &MaterialParams) -> LoadSpec {
        match self {
            Case::ClampedSquare { .. } => ExactSolution { material: *material }.load(),
            Case::PlateWithHole { .. } => LoadSpec::none(),
            Case::Custom { .. } => LoadSpec::new(|_| 1.0),
        }
    }

    pub fn exact(&self, material: &MaterialParams) -> Option<ExactSolution> {
        matches!(self, Case::ClampedSquare { .. }).then_some(ExactSolution { material: *material })
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub case: Case,
    pub order: usize,
    pub thickness: f64,
    /// Number of meshes; level `i` is the base mesh refined `i - 1` times.
    pub levels: usize,
    pub method: Method,
    pub hybrid: bool,
    pub tol: f64,
}

impl RunConfig {
    pub fn new(case: Case, order: usize, thickness: f64, levels: usize) -> Self {
        Self { case, order, thickness, levels, method: Method::Direct, hybrid: true, tol: DEFAULT_TOL }
    }

    pub fn validate(&self) -> Result<(), StudyError> {
        if !(MIN_ORDER..=MAX_ORDER).contains(&self.order) {
            return Err(StudyError::Config(format!("order must lie in {MIN_ORDER}..={MAX_ORDER}, got {}", self.order)));
        }
        if !(self.thickness > 0.0) {
            return Err(StudyError::Config(format!("thickness must be positive, got {}", self.thickness)));
        }
        if self.levels == 0 {
            return Err(StudyError::Config("levels must be at least 1".into()));
        }
        if !(self.tol > 0.0) {
            return Err(StudyError::Config(format!("tolerance must be positive, got {}", self.tol)));
        }
        if let Case::ClampedSquare { n } = self.case {
            if n == 0 {
                return Err(StudyError::Config("the square needs at least one cell per side".into()));
            }
        }
        self.case.material(self.thickness).validate().map_err(|e| StudyError::Config(e.to_string()))
    }

    /// Meshes of all levels with, for every level, the ancestor on each
    /// coarser level of every triangle.
    fn meshes(&self) -> Result<Vec<(Arc<TriMesh>, Vec<usize>)>, StudyError> {
        let base = self.case.base_mesh()?;
        let mut out = vec![(Arc::new(base), Vec::new())];
        for _ in 1..self.levels {
            let (fine, parents) = refine_uniform_with_parents(&out.last().unwrap().0);
            out.push((Arc::new(fine), parents));
        }
        Ok(out)
    }
}

/// One assembled and solved level.
#[derive(Debug, Clone)]
pub struct Solved {
    pub system: BlockSystem,
    pub report: SolveReport,
}

impl Solved {
    pub fn fields(&self) -> &SolutionFields {
        &self.report.fields
    }
}

/// Assembles and solves `case` on `mesh`.
pub fn solve_on(mesh: Arc<TriMesh>, cfg: &RunConfig) -> Result<Solved, StudyError> {
    cfg.validate()?;
    let material = cfg.case.material(cfg.thickness);
    let bc = cfg.case.bc();
    let spaces = Spaces::new(mesh, cfg.order, &bc, cfg.hybrid)?;
    let system = assemble(&spaces, &material, &cfg.case.load(&material), &bc)?;
    let report = solve_system(&system, cfg.method, cfg.tol)?;
    Ok(Solved { system, report })
}

/// Solves on the finest level of `cfg`.
pub fn solve_finest(cfg: &RunConfig) -> Result<Solved, StudyError> {
    cfg.validate()?;
    let mesh = cfg.meshes()?.pop().unwrap().0;
    solve_on(mesh, cfg)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelResult {
    pub level: usize,
    pub h: f64,
    /// Unknowns of the assembled system.
    pub ndof_total: usize,
    /// Unknowns of the system actually factored.
    pub ndof_condensed: usize,
    pub err_w: f64,
    pub rate_w: Option<f64>,
    pub err_theta: f64,
    pub rate_theta: Option<f64>,
    pub min_pivot: Option<f64>,
    pub shear_residual: f64,
    pub residual: f64,
    pub residual_floor: f64,
}

/// `||u_c - u_f||_{L2}` for a coarse field given on the ancestors `anc` of
/// the fine triangles.
fn l2_difference(fine: &FESpace, uf: &[f64], coarse: &FESpace, uc: &[f64], anc: &[usize]) -> f64 {
    let nc = fine.kind().components();
    let deg = 2 * (fine.kind().order() + 2);
    let mut s = 0.0;
    for t in 0..fine.mesh().num_triangles() {
        let tab = element_shapes(fine, t, deg, 1);
        let dofs = fine.element_dofs(t);
        for (q, p) in tab.volume.points.iter().enumerate() {
            let c = coarse.evaluate(uc, anc[t], *p);
            let mut e = 0.0;
            for k in 0..nc {
                let f: f64 = dofs.iter().enumerate().map(|(j, &d)| uf[d] * tab.volume.values[q][j][k]).sum();
                e += (f - c[k]).powi(2);
            }
            s += tab.volume.weights[q] * e;
        }
    }
    s.sqrt()
}

/// Errors in `w` and `theta` on every level, against the closed form when
/// the case has one and against the finest level otherwise (which is then
/// left out of the table).
pub fn convergence_study(cfg: &RunConfig) -> Result<Vec<LevelResult>, StudyError> {
    cfg.validate()?;
    let material = cfg.case.material(cfg.thickness);
    let exact = cfg.case.exact(&material);
    if exact.is_none() && cfg.levels < 2 {
        return Err(StudyError::Config("a study against the finest level needs at least 2 levels".into()));
    }
    let meshes = cfg.meshes()?;
    let mut solved = Vec::with_capacity(meshes.len());
    for (mesh, _) in &meshes {
        solved.push(solve_on(mesh.clone(), cfg)?);
    }

    let mut rows = Vec::new();
    let n_rows = if exact.is_some() { solved.len() } else { solved.len() - 1 };
    for (i, s) in solved.iter().enumerate().take(n_rows) {
        let f = s.fields();
        let sp = &f.spaces;
        let (err_w, err_theta) = match &exact {
            Some(ex) => (
                l2_error(&sp.deflection, &f.deflection, |p| [ex.w(p), 0.0, 0.0]),
                l2_error(&sp.rotation, &f.rotation, |p| {
                    let v = ex.theta(p);
                    [v[0], v[1], 0.0]
                }),
            ),
            None => {
                let fine = solved.last().unwrap().fields();
                // Ancestor on level i of every finest triangle.
                let mut anc: Vec<usize> = (0..fine.spaces.mesh().num_triangles()).collect();
                for (_, parents) in meshes[i + 1..].iter().rev() {
                    anc.iter_mut().for_each(|a| *a = parents[*a]);
                }
                (
                    l2_difference(&fine.spaces.deflection, &fine.deflection, &sp.deflection, &f.deflection, &anc),
                    l2_difference(&fine.spaces.rotation, &fine.rotation, &sp.rotation, &f.rotation, &anc),
                )
            }
        };
        let sr = shear_residual(sp, &material, &f.rotation, &f.deflection, &f.shear)?;
        rows.push(LevelResult {
            level: i + 1,
            h: sp.mesh().h_max(),
            ndof_total: s.system.dim(),
            ndof_condensed: s.report.solved_dim,
            err_w,
            rate_w: None,
            err_theta,
            rate_theta: None,
            min_pivot: s.report.stats.min_pivot,
            shear_residual: sr.relative(),
            residual: s.report.residual,
            residual_floor: s.report.residual_floor,
        });
    }
    for i in 1..rows.len() {
        let (h0, h1) = (rows[i - 1].h, rows[i].h);
        let pair = |a: f64, b: f64| convergence_rate(&[(h0, a), (h1, b)]).ok().map(|r| r[0]);
        let (rw, rt) = (pair(rows[i - 1].err_w, rows[i].err_w), pair(rows[i - 1].err_theta, rows[i].err_theta));
        rows[i].rate_w = rw;
        rows[i].rate_theta = rt;
    }
    Ok(rows)
}

/// Comma-separated table with a header row and 17 significant digits.
pub fn write_csv(rows: &[LevelResult]) -> String {
    let mut s = String::from("level,h,ndof_total,ndof_condensed,err_w_l2,rate_w,err_theta_l2,rate_theta\n");
    let opt = |r: Option<f64>| r.map(|v| format!("{v:.16e}")).unwrap_or_default();
    for r in rows {
        let _ = writeln!(
            s,
            "{},{:.16e},{},{},{:.16e},{},{:.16e},{}",
            r.level,
            r.h,
            r.ndof_total,
            r.ndof_condensed,
            r.err_w,
            opt(r.rate_w),
            r.err_theta,
            opt(r.rate_theta)
        );
    }
    s
}
