//! `tdnns`: mesh generation, single solves and convergence studies.

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tdnns::mesh::{plate_with_hole_mesh, read_mesh, unit_square_mesh, write_mesh};
use tdnns::postprocess::export_vtk;
use tdnns::solver::Method;
use tdnns::study::{convergence_study, solve_finest, write_csv, Case, RunConfig, StudyError};

#[derive(Parser)]
#[command(name = "tdnns", version, about = "Mixed finite elements for Reissner-Mindlin plates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated mesh.
    Mesh {
        #[command(subcommand)]
        kind: MeshKind,
    },
    /// Errors and observed rates over a sequence of uniformly refined meshes.
    Convergence(RunArgs),
    /// One solve on the finest level, with export.
    Solve(RunArgs),
}

#[derive(Subcommand)]
enum MeshKind {
    /// Structured unit square.
    Square {
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, short)]
        output: PathBuf,
    },
    /// 100 x 100 plate with a hole of diameter 30.
    Hole {
        #[arg(long, default_value_t = 16)]
        segments: usize,
        #[arg(long, default_value_t = 2)]
        graded_levels: usize,
        #[arg(long, short)]
        output: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CaseName {
    ClampedSquare,
    PlateWithHole,
    Custom,
}

#[derive(Clone, Copy, ValueEnum)]
enum SolverName {
    Direct,
    Cg,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, value_enum, default_value = "clamped-square")]
    case: CaseName,
    /// Moment order k; defaults to 1, or 4 for the plate with hole.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
    order: Option<u8>,
    /// Plate thickness; defaults to 1e-3, or 1 for the plate with hole.
    #[arg(long)]
    thickness: Option<f64>,
    /// Number of meshes, each a uniform refinement of the previous one.
    #[arg(long, default_value_t = 1)]
    levels: usize,
    /// Cells per side of the first clamped-square mesh.
    #[arg(long, default_value_t = 4)]
    n: usize,
    /// Mesh file for the custom case.
    #[arg(long)]
    mesh: Option<PathBuf>,
    /// Hole segments and grading of the plate with hole.
    #[arg(long, default_value_t = 16)]
    segments: usize,
    #[arg(long, default_value_t = 2)]
    graded_levels: usize,
    /// Edge shear on the right side of the plate with hole is `traction (y - 50)`.
    #[arg(long, default_value_t = 0.1)]
    traction: f64,
    #[arg(long, value_enum, default_value = "direct")]
    solver: SolverName,
    /// Hybridize and condense (the default).
    #[arg(long, overrides_with = "monolithic")]
    hybrid: bool,
    /// Solve the continuous-moment saddle system directly.
    #[arg(long)]
    monolithic: bool,
    /// Relative residual tolerance.
    #[arg(long, default_value_t = tdnns::solver::DEFAULT_TOL)]
    tol: f64,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    export: Option<PathBuf>,
    /// Worker threads; 1 gives bit-reproducible output.
    #[arg(long)]
    threads: Option<usize>,
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<StudyError> for Failure {
    fn from(e: StudyError) -> Self {
        match e {
            StudyError::Config(m) => Failure::Usage(m),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

fn write(path: &PathBuf, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Runtime(format!("cannot write {}: {e}", path.display())))
}

impl RunArgs {
    fn config(&self) -> Result<RunConfig, Failure> {
        if let Some(n) = self.threads {
            if n == 0 {
                return Err(Failure::Usage("--threads must be at least 1".into()));
            }
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| Failure::Runtime(e.to_string()))?;
        }
        let hole = matches!(self.case, CaseName::PlateWithHole);
        let case = match self.case {
            CaseName::ClampedSquare => Case::ClampedSquare { n: self.n },
            CaseName::PlateWithHole => {
                Case::PlateWithHole { segments: self.segments, graded_levels: self.graded_levels, traction: self.traction }
            }
            CaseName::Custom => {
                let path = self.mesh.as_ref().ok_or_else(|| Failure::Usage("the custom case needs --mesh".into()))?;
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Failure::Runtime(format!("cannot read {}: {e}", path.display())))?;
                let (mesh, warnings) = read_mesh(&text).map_err(|e| Failure::Runtime(e.to_string()))?;
                for w in warnings {
                    eprintln!("warning: {w}");
                }
                Case::Custom { mesh: Arc::new(mesh) }
            }
        };
        if self.mesh.is_some() && !matches!(self.case, CaseName::Custom) {
            return Err(Failure::Usage("--mesh is only used with --case custom".into()));
        }
        let order = self.order.map_or(if hole { 4 } else { 1 }, usize::from);
        let thickness = self.thickness.unwrap_or(if hole { 1.0 } else { 1e-3 });
        let mut cfg = RunConfig::new(case, order, thickness, self.levels);
        cfg.method = match self.solver {
            SolverName::Direct => Method::Direct,
            SolverName::Cg => Method::Cg,
        };
        cfg.hybrid = !self.monolithic;
        cfg.tol = self.tol;
        cfg.validate()?;
        Ok(cfg)
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Mesh { kind } => {
            let (mesh, output) = match kind {
                MeshKind::Square { n, output } => (unit_square_mesh(n), output),
                MeshKind::Hole { segments, graded_levels, output } => {
                    (plate_with_hole_mesh(100.0, 30.0, segments, graded_levels), output)
                }
            };
            let mesh = mesh.map_err(|e| Failure::Usage(e.to_string()))?;
            write(&output, &write_mesh(&mesh))?;
            println!("{} vertices, {} triangles -> {}", mesh.num_vertices(), mesh.num_triangles(), output.display());
        }
        Command::Convergence(args) => {
            let cfg = args.config()?;
            let rows = convergence_study(&cfg)?;
            let csv = write_csv(&rows);
            match &args.csv {
                Some(path) => write(path, &csv)?,
                None => print!("{csv}"),
            }
            if let Some(path) = &args.export {
                // The study does not keep its fields; redo the finest solve.
                let solved = solve_finest(&cfg)?;
                write(path, &export_vtk(solved.fields().spaces.mesh(), solved.fields()))?;
            }
        }
        Command::Solve(args) => {
            let cfg = args.config()?;
            let solved = solve_finest(&cfg)?;
            let f = solved.fields();
            let mesh = f.spaces.mesh();
            if let Some(path) = &args.export {
                write(path, &export_vtk(mesh, f))?;
            }
            let r = &solved.report;
            let (lo, hi) = f.deflection_range();
            let pivots = match (r.stats.min_pivot, r.stats.max_pivot) {
                (Some(a), Some(b)) => format!(" pivots=[{a:.3e},{b:.3e}] factor_nnz={}", r.stats.factor_nnz.unwrap_or(0)),
                _ => String::new(),
            };
            println!(
                "triangles={} ndof={} solved={} iterations={}{} residual={:.3e} w_min={:.16e} w_max={:.16e}",
                mesh.num_triangles(),
                solved.system.dim(),
                r.solved_dim,
                r.stats.iterations,
                pivots,
                r.residual,
                lo,
                hi
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
