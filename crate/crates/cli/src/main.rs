//! Command-line front end: run registered cases, emit contraction-factor
//! surfaces and root tables, search the optimized parameter, run waveform
//! relaxation solves, and compare closures. Every run writes a
//! `manifest.json` with the resolved configuration next to its data files.

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::fs;
use std::path::{Path, PathBuf};
use swr_cli::emit;
use swr_cli::registry::load_case;
use swr_core::{
    characteristic_roots, optimize_alpha, sample_surface, swr_solve_recording, AlphaStarResult,
    CoupledProblem, LaplacePoint, OptimizationSetup, SolverConfig, SpaceTimeField,
    TransmissionKind, TransmissionSpec,
};

#[derive(Parser)]
#[command(
    name = "swr",
    about = "Schwarz waveform relaxation for coupled 1-D advection-diffusion-reaction equations",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate the characteristic roots r-(i omega), r+(i omega) of both
    /// subdomains.
    Roots(RootsArgs),
    /// Sample the |rho| contraction surface of one transmission condition.
    Surface(SurfaceArgs),
    /// Search the optimized parameter alpha* by endpoint equioscillation.
    Optimize(CommonArgs),
    /// Run the waveform relaxation solver and write traces and snapshots.
    Solve(SolveArgs),
    /// Run Dirichlet vs optimized Dirichlet and write side-by-side traces.
    Compare(CompareArgs),
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Registered case id (1..=7, or an id from --registry).
    #[arg(long)]
    case: u32,
    /// Output directory; created if missing.
    #[arg(long)]
    out: PathBuf,
    /// Case-registry JSON file overriding the built-in registry.
    #[arg(long)]
    registry: Option<PathBuf>,
    /// Override the time horizon T.
    #[arg(long = "T", value_name = "T")]
    horizon: Option<f64>,
    /// Override the time step.
    #[arg(long)]
    dt: Option<f64>,
    /// Override the grid spacing (interfaces must stay on grid nodes).
    #[arg(long)]
    dx: Option<f64>,
}

#[derive(Args)]
struct RootsArgs {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct SurfaceArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Transmission condition.
    #[arg(long)]
    kind: KindArg,
    /// Relaxation parameter for the optimized kinds; computed by the
    /// equioscillation search when omitted.
    #[arg(long)]
    alpha: Option<f64>,
    /// Defaults to -alpha for the optimized kinds.
    #[arg(long)]
    beta: Option<f64>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long)]
    kind: KindArg,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    /// Residual tolerance of the Schwarz iteration.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum KindArg {
    Dirichlet,
    Robin2,
    Robin3,
    Combined2,
    Combined3,
    OptDirichlet,
    OptRobin,
}

impl KindArg {
    fn kind(self) -> TransmissionKind {
        match self {
            KindArg::Dirichlet => TransmissionKind::Dirichlet,
            KindArg::Robin2 => TransmissionKind::Robin2,
            KindArg::Robin3 => TransmissionKind::Robin3,
            KindArg::Combined2 => TransmissionKind::Combined2,
            KindArg::Combined3 => TransmissionKind::Combined3,
            KindArg::OptDirichlet => TransmissionKind::OptimizedDirichlet,
            KindArg::OptRobin => TransmissionKind::OptimizedRobin,
        }
    }

    fn name(self) -> &'static str {
        match self {
            KindArg::Dirichlet => "dirichlet",
            KindArg::Robin2 => "robin2",
            KindArg::Robin3 => "robin3",
            KindArg::Combined2 => "combined2",
            KindArg::Combined3 => "combined3",
            KindArg::OptDirichlet => "opt-dirichlet",
            KindArg::OptRobin => "opt-robin",
        }
    }
}

#[derive(Serialize)]
struct Overrides {
    #[serde(rename = "T")]
    horizon: Option<f64>,
    dt: Option<f64>,
    dx: Option<f64>,
    tol: Option<f64>,
    alpha: Option<f64>,
    beta: Option<f64>,
}

#[derive(Serialize)]
struct Resolved {
    #[serde(rename = "T")]
    horizon: f64,
    dt: f64,
    dx: f64,
    x1: f64,
    x2: f64,
    overlap_nodes: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    omega_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    omega_max: Option<f64>,
}

#[derive(Serialize)]
struct Manifest {
    command: &'static str,
    case: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    kind: Option<&'static str>,
    out: String,
    overrides: Overrides,
    resolved: Resolved,
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Roots(args) => roots(args),
        Command::Surface(args) => surface(args),
        Command::Optimize(args) => optimize(args),
        Command::Solve(args) => solve(args),
        Command::Compare(args) => compare(args),
    }
}

/// Resolve the case and apply the common overrides.
fn resolve_problem(common: &CommonArgs) -> Result<CoupledProblem> {
    let mut problem = load_case(common.registry.as_deref(), common.case)?;
    if let Some(dx) = common.dx {
        problem = problem.with_dx(dx).context("cases: invalid dx override")?;
    }
    if let Some(dt) = common.dt {
        problem = problem.with_dt(dt).context("cases: invalid dt override")?;
    }
    if let Some(horizon) = common.horizon {
        problem = problem.with_horizon(horizon).context("cases: invalid T override")?;
    }
    Ok(problem)
}

fn prepare_out(out: &Path) -> Result<()> {
    fs::create_dir_all(out).with_context(|| format!("cannot create {}", out.display()))
}

fn resolved_for(problem: &CoupledProblem) -> Resolved {
    Resolved {
        horizon: problem.horizon,
        dt: problem.dt,
        dx: problem.dx,
        x1: problem.x1,
        x2: problem.x2,
        overlap_nodes: problem.overlap_nodes,
        tolerance: None,
        alpha: None,
        beta: None,
        omega_min: None,
        omega_max: None,
    }
}

fn overrides_for(common: &CommonArgs) -> Overrides {
    Overrides {
        horizon: common.horizon,
        dt: common.dt,
        dx: common.dx,
        tol: None,
        alpha: None,
        beta: None,
    }
}

fn write_manifest(out: &Path, manifest: &Manifest) -> Result<()> {
    emit::write_json(&out.join("manifest.json"), manifest)
}

/// Best equioscillation root: the one whose band maximum of |rho| is
/// smallest (first root on ties).
fn best_alpha(problem: &CoupledProblem) -> Result<f64> {
    let result = run_optimizer(problem)?;
    let best = result
        .roots
        .iter()
        .min_by(|a, b| a.band_max_abs_rho.partial_cmp(&b.band_max_abs_rho).unwrap())
        .expect("optimizer returns at least one root");
    Ok(best.alpha)
}

fn run_optimizer(problem: &CoupledProblem) -> Result<AlphaStarResult> {
    let (left, right) = problem
        .interface_coefficients()
        .context("stencil: interface coefficients")?;
    let setup = OptimizationSetup::for_horizon(problem.horizon, problem.dt);
    optimize_alpha(&left, &right, &setup).context("optimize: equioscillation search failed")
}

/// Build the transmission spec, computing alpha* when the optimized kinds
/// are used without explicit parameters.
fn build_spec(
    kind: KindArg,
    alpha: Option<f64>,
    beta: Option<f64>,
    problem: &CoupledProblem,
) -> Result<TransmissionSpec> {
    let kind = kind.kind();
    if !kind.is_optimized() {
        if alpha.is_some() || beta.is_some() {
            bail!("invalid override: --alpha/--beta apply to the optimized kinds only");
        }
        return Ok(TransmissionSpec::plain(kind).expect("plain kind"));
    }
    let alpha = match alpha {
        Some(alpha) => alpha,
        None => best_alpha(problem)?,
    };
    let beta = beta.unwrap_or(-alpha);
    TransmissionSpec::optimized(kind, alpha, beta)
        .context("symbol: invalid optimized parameters")
}

/// Match the problem's overlap to what the transmission kind addresses,
/// moving x2 while keeping x1 fixed.
fn match_overlap(problem: CoupledProblem, kind: TransmissionKind) -> Result<CoupledProblem> {
    if problem.overlap_nodes == kind.required_overlap() {
        Ok(problem)
    } else {
        problem
            .with_overlap_nodes(kind.required_overlap())
            .context("cases: cannot widen the overlap for this kind (check dx and x1)")
    }
}

fn roots(args: RootsArgs) -> Result<()> {
    let common = &args.common;
    let problem = resolve_problem(common)?;
    prepare_out(&common.out)?;
    let (left, right) = problem
        .interface_coefficients()
        .context("stencil: interface coefficients")?;
    let omega_max = std::f64::consts::PI / problem.dt;
    let omegas: Vec<f64> = (0..201)
        .map(|i| -omega_max + 2.0 * omega_max * i as f64 / 200.0)
        .collect();
    let mut left_rows = Vec::new();
    let mut right_rows = Vec::new();
    for &omega in &omegas {
        let s = LaplacePoint::imaginary(omega);
        left_rows.push((omega, characteristic_roots(&left, s).context("symbol: roots")?));
        right_rows.push((omega, characteristic_roots(&right, s).context("symbol: roots")?));
    }
    emit::write_roots_csv(&common.out.join("roots_left.csv"), &left_rows)?;
    emit::write_roots_csv(&common.out.join("roots_right.csv"), &right_rows)?;
    let manifest = Manifest {
        command: "roots",
        case: common.case,
        kind: None,
        out: common.out.display().to_string(),
        overrides: overrides_for(common),
        resolved: resolved_for(&problem),
    };
    write_manifest(&common.out, &manifest)
}

fn surface(args: SurfaceArgs) -> Result<()> {
    let common = &args.common;
    let problem = resolve_problem(common)?;
    prepare_out(&common.out)?;
    let spec = build_spec(args.kind, args.alpha, args.beta, &problem)?;
    let (left, right) = problem
        .interface_coefficients()
        .context("stencil: interface coefficients")?;
    let omega_max = std::f64::consts::PI / problem.dt;
    let surface = sample_surface(&left, &right, &spec, (-omega_max, omega_max), 10.0, 201, 51)
        .context("symbol: sampling the |rho| surface failed")?;
    emit::write_surface_csv(&common.out.join("surface.csv"), &surface)?;
    let mut resolved = resolved_for(&problem);
    if spec.kind.is_optimized() {
        resolved.alpha = Some(spec.alpha);
        resolved.beta = Some(spec.beta);
    }
    let mut overrides = overrides_for(common);
    overrides.alpha = args.alpha;
    overrides.beta = args.beta;
    let manifest = Manifest {
        command: "surface",
        case: common.case,
        kind: Some(args.kind.name()),
        out: common.out.display().to_string(),
        overrides,
        resolved,
    };
    write_manifest(&common.out, &manifest)
}

#[derive(Serialize)]
struct OptimizeOutput {
    case: u32,
    omega_min: f64,
    omega_max: f64,
    roots: Vec<OptimizeRoot>,
}

#[derive(Serialize)]
struct OptimizeRoot {
    alpha: f64,
    h_residual: f64,
    band_max_abs_rho: f64,
}

fn optimize(common: CommonArgs) -> Result<()> {
    let problem = resolve_problem(&common)?;
    prepare_out(&common.out)?;
    let result = run_optimizer(&problem)?;
    let setup = OptimizationSetup::for_horizon(problem.horizon, problem.dt);
    let output = OptimizeOutput {
        case: common.case,
        omega_min: setup.omega_min,
        omega_max: setup.omega_max,
        roots: result
            .roots
            .iter()
            .map(|root| OptimizeRoot {
                alpha: root.alpha,
                h_residual: root.h_residual,
                band_max_abs_rho: root.band_max_abs_rho,
            })
            .collect(),
    };
    emit::write_json(&common.out.join("optimize.json"), &output)?;
    let mut resolved = resolved_for(&problem);
    resolved.omega_min = Some(setup.omega_min);
    resolved.omega_max = Some(setup.omega_max);
    let manifest = Manifest {
        command: "optimize",
        case: common.case,
        kind: None,
        out: common.out.display().to_string(),
        overrides: overrides_for(&common),
        resolved,
    };
    write_manifest(&common.out, &manifest)
}

/// Snapshot schedule: early iterations where the convergence is visible,
/// plus the final iterate and the converged reference.
const SNAPSHOT_ITERATIONS: [usize; 6] = [1, 2, 5, 10, 20, 50];

fn solve(args: SolveArgs) -> Result<()> {
    let common = &args.common;
    let problem = resolve_problem(common)?;
    prepare_out(&common.out)?;
    let spec = build_spec(args.kind, args.alpha, args.beta, &problem)?;
    let problem = match_overlap(problem, spec.kind)?;
    let mut config = SolverConfig::default();
    if let Some(tol) = args.tol {
        config.tolerance = tol;
    }
    let ((v, w), trace, recorded) =
        swr_solve_recording(&problem, &spec, &config, &SNAPSHOT_ITERATIONS)
            .context("solve: waveform relaxation failed")?;
    emit::write_trace_csv(&common.out.join("trace.csv"), &trace)?;

    let mut tagged: Vec<(String, &SpaceTimeField, &SpaceTimeField)> = recorded
        .iter()
        .map(|record| {
            (format!("iter{}", record.iteration), &record.fields.0, &record.fields.1)
        })
        .collect();
    tagged.push(("final".to_owned(), &v, &w));
    if let Some((v_ref, w_ref)) = trace.converged_reference.as_ref() {
        tagged.push(("converged".to_owned(), v_ref, w_ref));
    }
    emit::write_snapshots_csv(&common.out.join("snapshots.csv"), problem.dt, &tagged)?;

    let mut resolved = resolved_for(&problem);
    resolved.tolerance = Some(config.tolerance);
    if spec.kind.is_optimized() {
        resolved.alpha = Some(spec.alpha);
        resolved.beta = Some(spec.beta);
    }
    let mut overrides = overrides_for(common);
    overrides.tol = args.tol;
    overrides.alpha = args.alpha;
    overrides.beta = args.beta;
    let manifest = Manifest {
        command: "solve",
        case: common.case,
        kind: Some(args.kind.name()),
        out: common.out.display().to_string(),
        overrides,
        resolved,
    };
    write_manifest(&common.out, &manifest)
}

#[derive(Serialize)]
struct CompareOutput {
    case: u32,
    alpha_star: f64,
    dirichlet_iterations: Option<usize>,
    optimized_iterations: Option<usize>,
}

fn compare(args: CompareArgs) -> Result<()> {
    let common = &args.common;
    let problem = resolve_problem(common)?;
    prepare_out(&common.out)?;
    let alpha = best_alpha(&problem)?;
    let mut config = SolverConfig::default();
    if let Some(tol) = args.tol {
        config.tolerance = tol;
    }
    let dirichlet = TransmissionSpec::plain(TransmissionKind::Dirichlet).expect("plain kind");
    let optimized =
        TransmissionSpec::optimized(TransmissionKind::OptimizedDirichlet, alpha, -alpha)
            .context("symbol: invalid optimized parameters")?;
    let (_, trace_d, _) = swr_solve_recording(&problem, &dirichlet, &config, &[])
        .context("solve: Dirichlet run failed")?;
    let (_, trace_o, _) = swr_solve_recording(&problem, &optimized, &config, &[])
        .context("solve: optimized run failed")?;
    emit::write_trace_csv(&common.out.join("trace_dirichlet.csv"), &trace_d)?;
    emit::write_trace_csv(&common.out.join("trace_optimized.csv"), &trace_o)?;
    emit::write_compare_csv(&common.out.join("compare.csv"), &trace_d, &trace_o)?;
    emit::write_json(
        &common.out.join("compare.json"),
        &CompareOutput {
            case: common.case,
            alpha_star: alpha,
            dirichlet_iterations: trace_d.iterations_to_tolerance,
            optimized_iterations: trace_o.iterations_to_tolerance,
        },
    )?;
    let mut resolved = resolved_for(&problem);
    resolved.tolerance = Some(config.tolerance);
    resolved.alpha = Some(alpha);
    resolved.beta = Some(-alpha);
    let mut overrides = overrides_for(common);
    overrides.tol = args.tol;
    let manifest = Manifest {
        command: "compare",
        case: common.case,
        kind: None,
        out: common.out.display().to_string(),
        overrides,
        resolved,
    };
    write_manifest(&common.out, &manifest)
}
