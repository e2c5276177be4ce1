use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use adiabat::asymptotics::{WindowAverage, WindowMode};
use adiabat::experiments::{
    detect_hyperadiabatic, emit_csv, emit_plot_data, run_sweep, Diagnostic, Scenario, ScheduleRef,
    Spacing, SweepConfig, DEFAULT_DETECT_TOL, DEFAULT_DETECT_WINDOW,
};
use adiabat::Error;

#[derive(Parser)]
#[command(
    name = "adiabat",
    version,
    about = "Diabatic error of finite-time adiabatic evolution"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the timescale T and write every error diagnostic as CSV.
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ScenarioArg {
    Fig1,
    Fig2,
    Custom,
}

#[derive(Clone, Copy, ValueEnum)]
enum SpacingArg {
    Log,
    Linear,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    TrueError,
    Asymptotic,
}

#[derive(Clone, Copy, ValueEnum)]
enum AverageArg {
    Mean,
    Rms,
}

#[derive(clap::Args)]
struct SweepArgs {
    #[arg(long, value_enum)]
    scenario: ScenarioArg,
    /// Schedule file (JSON); required for `custom`, overrides the built-in otherwise.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
    /// Also write log10 columns for plotting.
    #[arg(long)]
    plot_data: Option<PathBuf>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    tmin: Option<f64>,
    #[arg(long)]
    tmax: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
    #[arg(long, value_enum)]
    spacing: Option<SpacingArg>,
    /// Window scale τ₀ of the typical-error average.
    #[arg(long)]
    tau0: Option<f64>,
    /// Simpson samples per window (odd); automatic when omitted.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, value_enum)]
    typical_mode: Option<ModeArg>,
    #[arg(long, value_enum)]
    average: Option<AverageArg>,
    #[arg(long)]
    rel_tol: Option<f64>,
    #[arg(long)]
    abs_tol: Option<f64>,
    #[arg(long)]
    max_step: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_DETECT_WINDOW)]
    detect_window: usize,
    #[arg(long, default_value_t = DEFAULT_DETECT_TOL)]
    detect_tol: f64,
}

fn build_config(args: &SweepArgs) -> Result<SweepConfig, Error> {
    let mut cfg = match args.scenario {
        ScenarioArg::Fig1 => SweepConfig::scenario(Scenario::Fig1),
        ScenarioArg::Fig2 => SweepConfig::scenario(Scenario::Fig2),
        ScenarioArg::Custom => {
            let path = args
                .config
                .clone()
                .ok_or_else(|| Error::Config("scenario 'custom' needs --config".into()))?;
            let mut cfg = SweepConfig::new(ScheduleRef::Path(path));
            cfg.outputs = Diagnostic::ALL.to_vec();
            cfg
        }
    };
    if let Some(path) = &args.config {
        cfg.schedule = ScheduleRef::Path(path.clone());
    }
    if let Some(v) = args.workers {
        cfg.workers = v;
    }
    if let Some(v) = args.tmin {
        cfg.t_min = v;
    }
    if let Some(v) = args.tmax {
        cfg.t_max = v;
    }
    if let Some(v) = args.points {
        cfg.points = v;
    }
    if let Some(v) = args.spacing {
        cfg.spacing = match v {
            SpacingArg::Log => Spacing::Log,
            SpacingArg::Linear => Spacing::Linear,
        };
    }
    if let Some(v) = args.tau0 {
        cfg.typical.tau0 = v;
    }
    if args.samples.is_some() {
        cfg.typical.samples = args.samples;
    }
    if let Some(v) = args.typical_mode {
        cfg.typical.mode = match v {
            ModeArg::TrueError => WindowMode::TrueError,
            ModeArg::Asymptotic => WindowMode::Asymptotic,
        };
    }
    if let Some(v) = args.average {
        cfg.typical.average = match v {
            AverageArg::Mean => WindowAverage::Mean,
            AverageArg::Rms => WindowAverage::Rms,
        };
    }
    if let Some(v) = args.rel_tol {
        cfg.integrator.rel_tol = v;
    }
    if let Some(v) = args.abs_tol {
        cfg.integrator.abs_tol = v;
    }
    if let Some(v) = args.max_step {
        cfg.integrator.max_step = v;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn sweep(args: SweepArgs) -> ExitCode {
    let cfg = match build_config(&args) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let records = match run_sweep(&cfg) {
        Ok(r) => r,
        Err(e @ (Error::Config(_) | Error::InvalidSchedule(_) | Error::Json(_))) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };

    let failed = records.iter().filter(|r| !r.failures.is_empty()).count();
    for rec in records.iter().filter(|r| !r.failures.is_empty()).take(5) {
        for (d, msg) in &rec.failures {
            eprintln!("[sweep] T = {:.6e}: {} failed: {msg}", rec.t, d.column());
        }
    }
    if let Err(e) = emit_csv(&records, &args.out) {
        eprintln!("error: writing {}: {e}", args.out.display());
        return ExitCode::from(1);
    }
    if let Some(path) = &args.plot_data {
        if let Err(e) = emit_plot_data(&records, path) {
            eprintln!("error: writing {}: {e}", path.display());
            return ExitCode::from(1);
        }
    }
    println!(
        "[sweep] {} points in [{}, {}], {} with failures -> {}",
        records.len(),
        cfg.t_min,
        cfg.t_max,
        failed,
        args.out.display()
    );
    if records.len() >= args.detect_window {
        match detect_hyperadiabatic(&records, args.detect_window, args.detect_tol) {
            Ok(Some(t)) => println!("[sweep] hyperadiabatic regime from T* = {t:.6e}"),
            Ok(None) => println!("[sweep] hyperadiabatic regime not reached"),
            Err(e) => eprintln!("[sweep] detection skipped: {e}"),
        }
    }
    if records.iter().all(|r| r.all_failed()) {
        eprintln!("error: every sweep point failed");
        return ExitCode::from(1);
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Sweep(args) => sweep(args),
    }
}
