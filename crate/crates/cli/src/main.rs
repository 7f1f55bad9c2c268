use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use nff_core::boundaries::{BoundaryKind, BoundarySpec};
use nff_core::harness::{
    evaluate_boundaries, import_trace, load_scenario, reproduce_reference, run_sweep, write_boundaries_file,
    write_curve_file, Figure, ScenarioConfig, SourceKind,
};
use nff_core::sources::ArrayGeometry;
use nff_core::{Error, WaveContext};

#[derive(Parser)]
#[command(name = "nff", version, about = "Near-field / far-field boundary analysis for antenna arrays")]
struct Cli {
    /// Override the curve grid density (points per decade).
    #[arg(long, global = true)]
    grid_ppd: Option<u32>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the approximation-error curve of a scenario.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write the boundary table of a scenario (all kinds if none configured).
    Boundaries {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write the data tables of a figure into a directory.
    Reproduce {
        #[arg(long)]
        figure: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        traces: Option<PathBuf>,
    },
    /// Check a field trace and its far-field record.
    ValidateTrace { file: PathBuf },
}

fn load(path: &PathBuf, ppd: Option<u32>) -> Result<ScenarioConfig, Error> {
    let cfg = load_scenario(path)?;
    match ppd {
        Some(p) => cfg.with_grid_ppd(p),
        None => Ok(cfg),
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Sweep { config, out } => {
            let cfg = load(&config, cli.grid_ppd)?;
            let res = run_sweep(&ScenarioConfig {
                boundaries: Vec::new(),
                ..cfg
            })?;
            write_curve_file(&res.curve, &out)?;
            eprintln!("{} -> {}", res.curve, out.display());
        }
        Command::Boundaries { config, out } => {
            let cfg = load(&config, cli.grid_ppd)?;
            if cfg.source != SourceKind::DipoleUla {
                return Err(Error::InvalidInput("boundaries need a dipole-ula source".into()));
            }
            let specs = if cfg.boundaries.is_empty() {
                BoundaryKind::ALL.map(BoundarySpec::with_default).to_vec()
            } else {
                cfg.boundaries.clone()
            };
            let geometry = ArrayGeometry::ula_y(cfg.n, cfg.spacing)?;
            let rows = evaluate_boundaries(&geometry, &cfg, &specs)?;
            write_boundaries_file(&rows, &out)?;
            eprintln!("{} boundaries -> {}", rows.len(), out.display());
        }
        Command::Reproduce { figure, out, traces } => {
            let figure: Figure = figure.parse()?;
            let files = reproduce_reference(figure, &out, traces.as_deref(), cli.grid_ppd)?;
            eprintln!("{figure}: wrote {} files to {}", files.len(), out.display());
        }
        Command::ValidateTrace { file } => {
            let ctx = WaveContext::default();
            let trace = import_trace(&file, &ctx)?;
            let curve = trace.error_curve(&ctx, &file.display().to_string())?;
            println!(
                "{}: ok, {} rows, r = {} .. {}",
                file.display(),
                curve.len(),
                trace.rows[0].r,
                trace.rows[trace.rows.len() - 1].r
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("nff: {e}");
            ExitCode::from(if e.is_io() { 2 } else { 1 })
        }
    }
}
