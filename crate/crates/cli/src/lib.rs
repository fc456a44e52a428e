//! Command line front end: surface completion, image inpainting, the
//! convergence study and system dumps.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use surfill::assembly::{assemble_biharmonic_13pt, assemble_poisson, StencilMode};
use surfill::harness::{run_convergence_study, AnalyticProblem, TestFunction};
use surfill::inpaint::{inpaint, psnr, sup_error, synthetic, InpaintJob, InpaintMethod};
use surfill::pnm::{mask_from_pgm, mask_to_pgm, read_pnm, write_pnm};
use surfill::schemes::Scheme;
use surfill::solver::{Precond, SolveMethod, SolverOptions};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Input { path: PathBuf, source: surfill::Error },
    #[error("{0}")]
    Invalid(String),
    #[error("solver failed: {0}")]
    Solver(surfill::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Io { .. } | CliError::Input { .. } => 3,
            CliError::Solver(_) => 4,
        }
    }
}

impl From<surfill::Error> for CliError {
    fn from(e: surfill::Error) -> Self {
        if e.is_solver_failure() {
            CliError::Solver(e)
        } else {
            CliError::Invalid(e.to_string())
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "surfill", version, about = "Harmonic and biharmonic surface completion and inpainting")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Complete an analytic test surface over a square hole.
    Complete(CompleteArgs),
    /// Fill the masked pixels of a PGM/PPM image.
    Inpaint(InpaintArgs),
    /// Run the domain-shrinking convergence study.
    Convergence(ConvergenceArgs),
    /// Write an assembled system in MatrixMarket format.
    DumpSystem(DumpArgs),
    /// Write the synthetic stand-in images and a centered square mask.
    Synthetic(SyntheticArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SolverKind {
    Dense,
    Cg,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PrecondKind {
    None,
    Jacobi,
}

#[derive(Debug, Args)]
struct SolverArgs {
    /// Relative residual tolerance.
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// Iteration cap for CG (default 10 × unknowns).
    #[arg(long)]
    max_iter: Option<usize>,
    #[arg(long, value_enum, default_value_t = SolverKind::Cg)]
    solver: SolverKind,
    #[arg(long, value_enum, default_value_t = PrecondKind::None)]
    precond: PrecondKind,
    /// Always use the ghost value for far taps beyond the boundary.
    #[arg(long)]
    strict_paper_stencil: bool,
}

impl SolverArgs {
    fn options(&self) -> Result<SolverOptions, CliError> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(CliError::Invalid(format!("--tol must be positive, got {}", self.tol)));
        }
        Ok(SolverOptions {
            method: match self.solver {
                SolverKind::Dense => SolveMethod::DenseDirect,
                SolverKind::Cg => SolveMethod::Cg,
            },
            tol: self.tol,
            max_iter: self.max_iter,
            precond: match self.precond {
                PrecondKind::None => Precond::None,
                PrecondKind::Jacobi => Precond::Jacobi,
            },
        })
    }

    fn stencil(&self) -> StencilMode {
        if self.strict_paper_stencil {
            StencilMode::StrictPaper
        } else {
            StencilMode::PreferKnown
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CompleteMethod {
    Harmonic,
    BiharmonicL,
    BiharmonicN,
    PolyharmonicL,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ImageMethod {
    Harmonic,
    BiharmonicL,
    BiharmonicN,
}

impl From<ImageMethod> for InpaintMethod {
    fn from(m: ImageMethod) -> Self {
        match m {
            ImageMethod::Harmonic => InpaintMethod::Harmonic,
            ImageMethod::BiharmonicL => InpaintMethod::BiharmonicL,
            ImageMethod::BiharmonicN => InpaintMethod::BiharmonicN,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FunctionKind {
    Cubic,
    Cosine,
}

impl From<FunctionKind> for TestFunction {
    fn from(f: FunctionKind) -> Self {
        match f {
            FunctionKind::Cubic => TestFunction::Cubic,
            FunctionKind::Cosine => TestFunction::Cosine,
        }
    }
}

#[derive(Debug, Args)]
struct CompleteArgs {
    #[arg(long, value_enum)]
    method: CompleteMethod,
    /// Order of the polyharmonic cascade.
    #[arg(long, default_value_t = 3)]
    order: usize,
    #[arg(long, value_enum)]
    function: FunctionKind,
    #[arg(long, default_value_t = 1.0)]
    domain_halfwidth: f64,
    #[arg(long, default_value_t = 50)]
    grid_n: usize,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Debug, Args)]
struct InpaintArgs {
    #[arg(long)]
    image: PathBuf,
    /// PGM mask; samples >= 128 mark missing pixels.
    #[arg(long)]
    mask: PathBuf,
    #[arg(long, value_enum)]
    method: ImageMethod,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    metrics: Option<PathBuf>,
    /// Ground truth for sup error and PSNR.
    #[arg(long)]
    truth: Option<PathBuf>,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Debug, Args)]
struct ConvergenceArgs {
    #[arg(long, value_enum, default_value_t = FunctionKind::Cosine)]
    function: FunctionKind,
    #[arg(long, default_value_t = 6)]
    imax: usize,
    #[arg(long, default_value_t = 50)]
    grid_n: usize,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Debug, Args)]
struct DumpArgs {
    /// harmonic and biharmonic-l dump the 5-point system, biharmonic-n the 13-point one.
    #[arg(long, value_enum)]
    method: ImageMethod,
    #[arg(long)]
    grid_n: usize,
    #[arg(long, value_enum, default_value_t = FunctionKind::Cosine)]
    function: FunctionKind,
    #[arg(long, default_value_t = 1.0)]
    domain_halfwidth: f64,
    #[arg(long)]
    out: PathBuf,
    /// Also write the right-hand side as a MatrixMarket array.
    #[arg(long)]
    rhs_out: Option<PathBuf>,
    #[arg(long)]
    strict_paper_stencil: bool,
}

#[derive(Debug, Args)]
struct SyntheticArgs {
    #[arg(long, value_enum, default_value_t = SyntheticKind::Smooth)]
    kind: SyntheticKind,
    #[arg(long, default_value_t = 64)]
    size: usize,
    /// Side of the centered square hole.
    #[arg(long, default_value_t = 16)]
    hole: usize,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    mask_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SyntheticKind {
    Smooth,
    Gradient,
    Edge,
    Rgb,
}

/// Writes through a temporary file in the target directory.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let io = |source| CliError::Io { path: path.to_path_buf(), source };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

fn read_file(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn read_image(path: &Path) -> Result<surfill::pnm::RasterImage, CliError> {
    read_pnm(&read_file(path)?).map_err(|source| CliError::Input { path: path.to_path_buf(), source })
}

fn complete(args: &CompleteArgs) -> Result<(), CliError> {
    let opts = args.solver.options()?;
    let problem = AnalyticProblem::new(args.function.into(), args.domain_halfwidth, args.grid_n)?;
    let scheme = match args.method {
        CompleteMethod::Harmonic => Scheme::Harmonic,
        CompleteMethod::BiharmonicL => Scheme::BiharmonicL,
        CompleteMethod::BiharmonicN => Scheme::BiharmonicN,
        CompleteMethod::PolyharmonicL if args.order == 0 => {
            return Err(CliError::Invalid("--order must be at least 1".into()))
        }
        CompleteMethod::PolyharmonicL => Scheme::PolyharmonicL(args.order),
    };
    let field = problem.solve(scheme, &opts, args.solver.stencil())?;
    let values = problem.lattice_values(&field);
    let mut csv = String::from("x,y,value,known\n");
    for (k, p) in problem.grid.points().enumerate() {
        let known = u8::from(!problem.cls.is_unknown(p));
        writeln!(csv, "{},{},{:e},{}", problem.grid.x(p.i), problem.grid.y(p.j), values[k], known).unwrap();
    }
    write_atomic(&args.out, csv.as_bytes())?;
    println!("sup_error={:e} iterations={}", problem.sup_error(&field), field.total_iterations());
    Ok(())
}

fn run_inpaint(args: &InpaintArgs) -> Result<(), CliError> {
    let image = read_image(&args.image)?;
    let mask_img = read_image(&args.mask)?;
    let mask = mask_from_pgm(&mask_img).map_err(|source| CliError::Input { path: args.mask.clone(), source })?;
    let truth = args.truth.as_deref().map(read_image).transpose()?;
    let method: InpaintMethod = args.method.into();
    let job = InpaintJob { solver: args.solver.options()?, stencil: args.solver.stencil(), ..InpaintJob::new(image, mask, method) };
    let out = inpaint(&job).map_err(|e| {
        if e.is_solver_failure() {
            CliError::Solver(e)
        } else {
            CliError::Input { path: args.mask.clone(), source: e }
        }
    })?;
    write_atomic(&args.out, &write_pnm(&out.image))?;

    let (sup, peak) = match &truth {
        Some(t) => (
            format!("{}", sup_error(&out.image, t, &job.mask).map_err(|e| truth_err(args, e))?),
            format!("{:.6}", psnr(&out.image, t).map_err(|e| truth_err(args, e))?),
        ),
        None => (String::new(), String::new()),
    };
    if let Some(path) = &args.metrics {
        let csv = format!("method,sup_error,psnr,iterations\n{},{sup},{peak},{}\n", method.name(), out.iterations());
        write_atomic(path, csv.as_bytes())?;
    }
    println!("method={} iterations={} sup_error={sup} psnr={peak}", method.name(), out.iterations());
    Ok(())
}

fn truth_err(args: &InpaintArgs, source: surfill::Error) -> CliError {
    CliError::Input { path: args.truth.clone().unwrap_or_default(), source }
}

fn convergence(args: &ConvergenceArgs) -> Result<(), CliError> {
    let opts = args.solver.options()?;
    let report = run_convergence_study(args.function.into(), args.imax, args.grid_n, &opts, args.solver.stencil())?;
    let csv = report.to_csv();
    write_atomic(&args.out, csv.as_bytes())?;
    print!("{csv}");
    Ok(())
}

fn dump_system(args: &DumpArgs) -> Result<(), CliError> {
    let p = AnalyticProblem::new(args.function.into(), args.domain_halfwidth, args.grid_n)?;
    let zero = vec![0.0; p.cls.n_unknown()];
    let sys = match args.method {
        ImageMethod::Harmonic => assemble_poisson(&p.cls, &zero, &p.data.g)?,
        // first stage of the cascade: Δv = 0 with v = Δu₀ on the boundary
        ImageMethod::BiharmonicL => assemble_poisson(&p.cls, &zero, p.data.f.as_ref().expect("analytic f"))?,
        ImageMethod::BiharmonicN => {
            let mode = if args.strict_paper_stencil { StencilMode::StrictPaper } else { StencilMode::PreferKnown };
            assemble_biharmonic_13pt(&p.cls, &p.data.g, p.data.q.as_ref(), mode)?
        }
    };
    write_atomic(&args.out, sys.to_matrix_market().as_bytes())?;
    if let Some(path) = &args.rhs_out {
        write_atomic(path, sys.rhs_to_matrix_market().as_bytes())?;
    }
    println!("unknowns={} nnz={}", sys.n_unknown(), sys.nnz());
    Ok(())
}

fn write_synthetic(args: &SyntheticArgs) -> Result<(), CliError> {
    if args.size < 8 || args.hole + 4 > args.size {
        return Err(CliError::Invalid(format!("hole {} does not fit a {} image with a 2-pixel collar", args.hole, args.size)));
    }
    let image = match args.kind {
        SyntheticKind::Smooth => synthetic::smooth_bump(args.size),
        SyntheticKind::Gradient => synthetic::gradient(args.size),
        SyntheticKind::Edge => synthetic::edge(args.size),
        SyntheticKind::Rgb => synthetic::rgb(args.size),
    };
    write_atomic(&args.out, &write_pnm(&image))?;
    if let Some(path) = &args.mask_out {
        let mask = synthetic::centered_square_mask(args.size, args.size, args.hole);
        write_atomic(path, &mask_to_pgm(args.size, args.size, &mask))?;
    }
    Ok(())
}

/// Parses `argv` (program name first), runs the subcommand and returns the
/// process exit code: 0 success, 2 usage, 3 I/O or bad input file, 4 solver failure.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let result = match &cli.command {
        Command::Complete(a) => complete(a),
        Command::Inpaint(a) => run_inpaint(a),
        Command::Convergence(a) => convergence(a),
        Command::DumpSystem(a) => dump_system(a),
        Command::Synthetic(a) => write_synthetic(a),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
