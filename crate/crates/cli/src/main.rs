//! `ptzeno` command-line front end: parameter sweeps, phase diagrams,
//! trajectory export and the built-in verification suite.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error,
//! 3 I/O failure.

mod config;
mod output;

use clap::{CommandFactory, Parser, Subcommand};
use config::ConfigFile;
use output::{Cell, Format, Table};
use ptzeno::{
    classify_zeno, fit_lifetime, locate_features, omega_sweep, propagate, static_spectrum,
    sweep::omega_ceiling, DriveProtocol, Error as CoreError, StateVec, StaticParams,
    SystemParams,
};
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;

pub struct CliError {
    message: String,
    code: u8,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            message: message.into(),
            code: 2,
        }
    }
    fn io(message: impl Into<String>) -> Self {
        CliError {
            message: message.into(),
            code: 3,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::usage(e.to_string())
    }
}

#[derive(Parser)]
#[command(
    name = "ptzeno",
    version,
    about = "Floquet spectra, PT-symmetry phase diagrams and Zeno/anti-Zeno analysis \
             of a two-level system with square-wave dissipation",
    after_help = "All emitted quantities are dimensionless, normalized to the coupling J0; \
                  flags take raw values in the same units as J0 (with the default J0 = 1 \
                  they coincide). Defaults reproduce the strong-dissipation figures: \
                  J0 = 1, tau1 = 0.01, gamma0 = 200."
)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(clap::Args)]
struct CommonArgs {
    /// Coupling rate J0 (> 0); outputs are normalized to it
    #[arg(long)]
    j0: Option<f64>,
    /// Plain `key = value` config file; flags override its entries
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output data file (a `<file>.meta.json` sidecar is written next to it)
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Output format: csv or json
    #[arg(long)]
    format: Option<String>,
}

#[derive(clap::Args)]
struct PhaseDiagramArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Dissipation pulse width
    #[arg(long)]
    tau1: Option<f64>,
    #[arg(long)]
    gamma_min: Option<f64>,
    #[arg(long)]
    gamma_max: Option<f64>,
    #[arg(long)]
    omega_min: Option<f64>,
    #[arg(long)]
    omega_max: Option<f64>,
    /// Grid cells per axis (>= 16)
    #[arg(long)]
    resolution: Option<usize>,
}

#[derive(clap::Args)]
struct OmegaSweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Dissipation amplitude while the pulse is on
    #[arg(long)]
    gamma0: Option<f64>,
    /// Dissipation pulse width
    #[arg(long)]
    tau1: Option<f64>,
    #[arg(long)]
    omega_min: Option<f64>,
    #[arg(long)]
    omega_max: Option<f64>,
    /// Number of grid points (>= 2)
    #[arg(long)]
    points: Option<usize>,
}

#[derive(clap::Args)]
struct StaticSweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long)]
    gamma_min: Option<f64>,
    #[arg(long)]
    gamma_max: Option<f64>,
    /// Number of grid points (>= 2)
    #[arg(long)]
    points: Option<usize>,
}

#[derive(clap::Args)]
struct EvolveArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long)]
    gamma0: Option<f64>,
    #[arg(long)]
    tau1: Option<f64>,
    /// Modulation frequency 2*pi/T
    #[arg(long)]
    omega: Option<f64>,
    /// Number of drive periods to propagate
    #[arg(long)]
    periods: Option<usize>,
    /// Samples per period (>= 2)
    #[arg(long)]
    samples_per_period: Option<usize>,
    /// Initial state: up or down
    #[arg(long)]
    psi0: Option<String>,
    /// Also fit the late-time lifetime and report it on stderr,
    /// discarding this leading fraction of the stroboscopic samples
    #[arg(long)]
    fit_discard: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Symmetry-breaking degree and phase label on a (gamma0, omega) grid
    PhaseDiagram(PhaseDiagramArgs),
    /// Decay rates, mu, phase and Zeno labels along a frequency sweep
    OmegaSweep(OmegaSweepArgs),
    /// Static (constant-dissipation) decay rates against gamma0
    StaticSweep(StaticSweepArgs),
    /// Piecewise-exact trajectory export
    Evolve(EvolveArgs),
    /// Exceptional points, resonances and QZE/QAZE segments of a sweep
    Classify(OmegaSweepArgs),
    /// Run the built-in acceptance checks and print a pass/fail table
    Verify,
}

fn load_config(path: &Option<PathBuf>, allowed: &[&str]) -> Result<ConfigFile, CliError> {
    match path {
        Some(p) => ConfigFile::load(p, allowed),
        None => Ok(ConfigFile::empty()),
    }
}

fn resolve_common(
    common: &CommonArgs,
    cfg: &ConfigFile,
) -> Result<(SystemParams, PathBuf, Format), CliError> {
    let j0 = cfg.resolve(common.j0, "j0", 1.0)?;
    let sys = SystemParams::new(j0)?;
    let out = cfg.resolve_required_path(common.output.clone(), "output")?;
    let format = Format::parse(&cfg.resolve_string(common.format.clone(), "format", "csv"))?;
    Ok((sys, out, format))
}

fn emit(
    path: &PathBuf,
    format: Format,
    table: &Table,
    command: &str,
    params: serde_json::Value,
) -> Result<(), CliError> {
    output::write_atomic(path, &table.render(format))?;
    output::write_sidecar(path, command, params)?;
    Ok(())
}

const PHASE_DIAGRAM_KEYS: &[&str] = &[
    "j0", "output", "format", "tau1", "gamma-min", "gamma-max", "omega-min", "omega-max",
    "resolution",
];

fn run_phase_diagram(args: PhaseDiagramArgs) -> Result<ExitCode, CliError> {
    let cfg = load_config(&args.common.config, PHASE_DIAGRAM_KEYS)?;
    let (sys, out, format) = resolve_common(&args.common, &cfg)?;
    let tau1 = cfg.resolve(args.tau1, "tau1", 0.01)?;
    let gamma_min = cfg.resolve(args.gamma_min, "gamma-min", 0.0)?;
    let gamma_max = cfg.resolve(args.gamma_max, "gamma-max", 250.0)?;
    let omega_min = cfg.resolve(args.omega_min, "omega-min", 0.45)?;
    let omega_max = cfg.resolve(args.omega_max, "omega-max", 4.0)?;
    let resolution = cfg.resolve(args.resolution, "resolution", 256)?;

    let pd = ptzeno::phase_diagram(
        &sys,
        tau1,
        (gamma_min, gamma_max),
        (omega_min, omega_max),
        (resolution, resolution),
    )?;

    let mut table = Table {
        columns: vec!["gamma0_over_j0", "omega_over_j0", "mu", "phase"],
        rows: Vec::with_capacity(resolution * resolution),
    };
    for (gi, g) in pd.gamma0_axis.iter().enumerate() {
        for (wi, w) in pd.omega_axis.iter().enumerate() {
            table.rows.push(vec![
                Cell::F(*g),
                Cell::F(*w),
                Cell::F(pd.mu_grid[gi][wi]),
                Cell::S(pd.phase_grid[gi][wi].as_str().to_string()),
            ]);
        }
    }
    emit(
        &out,
        format,
        &table,
        "phase-diagram",
        json!({
            "j0": sys.j0(), "tau1": tau1,
            "gamma_min": gamma_min, "gamma_max": gamma_max,
            "omega_min": omega_min, "omega_max": omega_max,
            "resolution": resolution,
        }),
    )?;
    Ok(ExitCode::SUCCESS)
}

const SWEEP_KEYS: &[&str] = &[
    "j0", "output", "format", "gamma0", "tau1", "omega-min", "omega-max", "points",
];

struct SweepSetup {
    sys: SystemParams,
    out: PathBuf,
    format: Format,
    gamma0: f64,
    tau1: f64,
    omega_min: f64,
    omega_max: f64,
    points: usize,
}

fn resolve_sweep(args: &OmegaSweepArgs) -> Result<SweepSetup, CliError> {
    let cfg = load_config(&args.common.config, SWEEP_KEYS)?;
    let (sys, out, format) = resolve_common(&args.common, &cfg)?;
    let setup = SweepSetup {
        gamma0: cfg.resolve(args.gamma0, "gamma0", 200.0)?,
        tau1: cfg.resolve(args.tau1, "tau1", 0.01)?,
        omega_min: cfg.resolve(args.omega_min, "omega-min", 0.2)?,
        omega_max: cfg.resolve(args.omega_max, "omega-max", 4.0)?,
        points: cfg.resolve(args.points, "points", 2000)?,
        sys,
        out,
        format,
    };
    if setup.tau1 > 0.0 {
        eprintln!(
            "admissible omega ceiling for tau1 = {}: omega < 2*pi/tau1 = {:.6}",
            setup.tau1,
            omega_ceiling(setup.tau1)
        );
    }
    Ok(setup)
}

fn run_omega_sweep(args: OmegaSweepArgs) -> Result<ExitCode, CliError> {
    let s = resolve_sweep(&args)?;
    let sweep = omega_sweep(
        &s.sys,
        s.gamma0,
        s.tau1,
        (s.omega_min, s.omega_max),
        s.points,
    )?;
    let segmentation = classify_zeno(&sweep, &locate_features(&sweep));
    let j0 = s.sys.j0();

    let mut table = Table {
        columns: vec![
            "omega_over_j0",
            "gamma_slow",
            "gamma_fast",
            "mu",
            "phase",
            "zeno_label",
        ],
        rows: Vec::with_capacity(s.points),
    };
    for (om, f) in sweep.omegas.iter().zip(&sweep.spectra) {
        let label = segmentation
            .segments
            .iter()
            .find(|seg| *om >= seg.omega_lo && *om <= seg.omega_hi)
            .map(|seg| seg.label.as_str())
            .unwrap_or("QAZE");
        table.rows.push(vec![
            Cell::F(om / j0),
            Cell::F(f.gamma_slow / j0),
            Cell::F(f.gamma_fast / j0),
            Cell::F(f.mu),
            Cell::S(f.phase.as_str().to_string()),
            Cell::S(label.to_string()),
        ]);
    }
    emit(
        &s.out,
        s.format,
        &table,
        "omega-sweep",
        json!({
            "j0": j0, "gamma0": s.gamma0, "tau1": s.tau1,
            "omega_min": s.omega_min, "omega_max": s.omega_max, "points": s.points,
        }),
    )?;
    Ok(ExitCode::SUCCESS)
}

fn run_classify(args: OmegaSweepArgs) -> Result<ExitCode, CliError> {
    let s = resolve_sweep(&args)?;
    let sweep = omega_sweep(
        &s.sys,
        s.gamma0,
        s.tau1,
        (s.omega_min, s.omega_max),
        s.points,
    )?;
    let seg = classify_zeno(&sweep, &locate_features(&sweep));
    let j0 = s.sys.j0();

    // segment boundaries annotated with the feature sitting on them
    let feature_at = |omega: f64| -> &'static str {
        seg.features
            .iter()
            .find(|f| (f.omega - omega).abs() <= 1e-12 * (1.0 + omega.abs()))
            .map(|f| f.kind.as_str())
            .unwrap_or("edge")
    };

    let mut table = Table {
        columns: vec![
            "omega_lo_over_j0",
            "omega_hi_over_j0",
            "label",
            "lo_feature",
            "hi_feature",
            "warning",
        ],
        rows: Vec::with_capacity(seg.segments.len()),
    };
    for sgm in &seg.segments {
        table.rows.push(vec![
            Cell::F(sgm.omega_lo / j0),
            Cell::F(sgm.omega_hi / j0),
            Cell::S(sgm.label.as_str().to_string()),
            Cell::S(feature_at(sgm.omega_lo).to_string()),
            Cell::S(feature_at(sgm.omega_hi).to_string()),
            Cell::S(sgm.warning.clone().unwrap_or_default()),
        ]);
    }
    emit(
        &s.out,
        s.format,
        &table,
        "classify",
        json!({
            "j0": j0, "gamma0": s.gamma0, "tau1": s.tau1,
            "omega_min": s.omega_min, "omega_max": s.omega_max, "points": s.points,
        }),
    )?;
    Ok(ExitCode::SUCCESS)
}

const STATIC_KEYS: &[&str] = &["j0", "output", "format", "gamma-min", "gamma-max", "points"];

fn run_static_sweep(args: StaticSweepArgs) -> Result<ExitCode, CliError> {
    let cfg = load_config(&args.common.config, STATIC_KEYS)?;
    let (sys, out, format) = resolve_common(&args.common, &cfg)?;
    let gamma_min = cfg.resolve(args.gamma_min, "gamma-min", 0.0)?;
    let gamma_max = cfg.resolve(args.gamma_max, "gamma-max", 10.0)?;
    let points = cfg.resolve(args.points, "points", 500)?;
    if !(gamma_min >= 0.0 && gamma_max > gamma_min) {
        return Err(CliError::usage(format!(
            "gamma range ({gamma_min}, {gamma_max}) must satisfy 0 <= gamma-min < gamma-max"
        )));
    }
    if points < 2 {
        return Err(CliError::usage(format!("points = {points} must be >= 2")));
    }

    let j0 = sys.j0();
    let mut table = Table {
        columns: vec!["gamma0_over_j0", "gamma_slow", "gamma_fast", "phase"],
        rows: Vec::with_capacity(points),
    };
    for i in 0..points {
        let g0 = gamma_min + (gamma_max - gamma_min) * i as f64 / (points - 1) as f64;
        let spec = static_spectrum(&StaticParams::new(g0, j0)?);
        table.rows.push(vec![
            Cell::F(g0 / j0),
            Cell::F(spec.gamma0_slow / j0),
            Cell::F(spec.gamma0_fast / j0),
            Cell::S(spec.phase.as_str().to_string()),
        ]);
    }
    emit(
        &out,
        format,
        &table,
        "static-sweep",
        json!({
            "j0": j0, "gamma_min": gamma_min, "gamma_max": gamma_max, "points": points,
        }),
    )?;
    Ok(ExitCode::SUCCESS)
}

const EVOLVE_KEYS: &[&str] = &[
    "j0",
    "output",
    "format",
    "gamma0",
    "tau1",
    "omega",
    "periods",
    "samples-per-period",
    "psi0",
    "fit-discard",
];

fn run_evolve(args: EvolveArgs) -> Result<ExitCode, CliError> {
    let cfg = load_config(&args.common.config, EVOLVE_KEYS)?;
    let (sys, out, format) = resolve_common(&args.common, &cfg)?;
    let gamma0 = cfg.resolve(args.gamma0, "gamma0", 200.0)?;
    let tau1 = cfg.resolve(args.tau1, "tau1", 0.01)?;
    let omega = cfg.resolve(args.omega, "omega", 2.0)?;
    let periods = cfg.resolve(args.periods, "periods", 100)?;
    let spp = cfg.resolve(args.samples_per_period, "samples-per-period", 16)?;
    let psi0_name = cfg.resolve_string(args.psi0.clone(), "psi0", "up");
    let psi0 = match psi0_name.as_str() {
        "up" => StateVec::UP,
        "down" => StateVec::DOWN,
        other => {
            return Err(CliError::usage(format!(
                "psi0 must be `up` or `down`, got `{other}`"
            )))
        }
    };

    let drive = DriveProtocol::from_omega(gamma0, tau1, omega)?;
    let traj = propagate(&sys, &drive, psi0, periods, spp)?;
    let j0 = sys.j0();

    let mut table = Table {
        columns: vec!["t", "re_up", "im_up", "re_down", "im_down", "norm"],
        rows: Vec::with_capacity(traj.times.len()),
    };
    for ((t, state), norm) in traj.times.iter().zip(&traj.states).zip(&traj.norms) {
        table.rows.push(vec![
            Cell::F(t * j0),
            Cell::F(state.up.re),
            Cell::F(state.up.im),
            Cell::F(state.down.re),
            Cell::F(state.down.im),
            Cell::F(*norm),
        ]);
    }

    if let Some(discard) = cfg.resolve_optional(args.fit_discard, "fit-discard")? {
        let fit = fit_lifetime(&traj, discard).map_err(CliError::from)?;
        eprintln!(
            "lifetime fit (discard {discard}): gamma = {} (1/J0 units: {}), rms residual {}",
            fit.gamma,
            fit.gamma / j0,
            fit.residual
        );
    }

    emit(
        &out,
        format,
        &table,
        "evolve",
        json!({
            "j0": j0, "gamma0": gamma0, "tau1": tau1, "omega": omega,
            "periods": periods, "samples_per_period": spp, "psi0": psi0_name,
        }),
    )?;
    Ok(ExitCode::SUCCESS)
}

fn run_verify() -> ExitCode {
    let results = ptzeno::verify::run_all();
    let mut failed = 0;
    for r in &results {
        println!("{}", r.line());
        if !r.passed {
            failed += 1;
        }
    }
    if failed == 0 {
        println!("all {} checks passed", results.len());
        ExitCode::SUCCESS
    } else {
        println!("{failed} of {} checks FAILED", results.len());
        ExitCode::from(1)
    }
}

fn run(command: Command) -> Result<ExitCode, CliError> {
    match command {
        Command::PhaseDiagram(args) => run_phase_diagram(args),
        Command::OmegaSweep(args) => run_omega_sweep(args),
        Command::StaticSweep(args) => run_static_sweep(args),
        Command::Evolve(args) => run_evolve(args),
        Command::Classify(args) => run_classify(args),
        Command::Verify => Ok(run_verify()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Some(command) = cli.command else {
        // bare invocation: help text, success
        let mut cmd = Cli::command();
        let _ = cmd.print_help();
        println!();
        return ExitCode::SUCCESS;
    };
    match run(command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
