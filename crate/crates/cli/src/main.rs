use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use polariton::gates::GateLevel;
use polariton_cli::config::{default_raw, resolve};
use polariton_cli::{
    compare_golden, exit, run_scenario, validate_config, CliError, CliResult, RunOptions, ScenarioConfig,
    ScenarioKind, GOLDEN_TOLERANCE,
};

#[derive(Parser)]
#[command(name = "polariton", version, about = "Polariton qubit scenario runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON scenario config; defaults to the reference parameter set
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory
    #[arg(long, global = true, env = "POLARITON_OUT_DIR", default_value = "out")]
    out: PathBuf,

    /// Fixed integrator step in seconds
    #[arg(long, global = true)]
    dt: Option<f64>,

    /// Simulation level for `simulate`: lab, interaction or effective
    #[arg(long, global = true)]
    level: Option<GateLevel>,
}

#[derive(Subcommand)]
enum Command {
    /// Dressed-state ladder
    Spectrum,
    /// Noise-induced level shifts over a sweep of amplitudes
    NoiseScan,
    /// Pulse program for a holonomic gate
    Synth,
    /// Simulate a gate pulse
    Simulate,
    /// Hadamard fidelity with and without decoherence
    Fig2,
    /// Compare a produced CSV with a golden file
    Check {
        produced: PathBuf,
        golden: PathBuf,
        #[arg(long, default_value_t = GOLDEN_TOLERANCE)]
        tolerance: f64,
    },
}

fn load(kind: ScenarioKind, path: Option<&PathBuf>) -> CliResult<ScenarioConfig> {
    let config = match path {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| CliError::io(p.display(), e))?;
            validate_config(&text)?
        }
        None => resolve(&default_raw(kind))?,
    };
    let found = config.scenario.kind();
    if found != kind {
        return Err(CliError::Config(format!(
            "config describes a `{}` scenario but the `{}` subcommand was invoked",
            found.name(),
            kind.name()
        )));
    }
    Ok(config)
}

fn run(cli: Cli) -> CliResult<()> {
    let kind = match cli.command {
        Command::Check {
            produced,
            golden,
            tolerance,
        } => {
            let report = compare_golden(&produced, &golden, tolerance)?;
            println!("{}", report.render());
            return if report.passed() {
                Ok(())
            } else {
                Err(CliError::GoldenMismatch(format!(
                    "{} differs from {}",
                    produced.display(),
                    golden.display()
                )))
            };
        }
        Command::Spectrum => ScenarioKind::Spectrum,
        Command::NoiseScan => ScenarioKind::NoiseScan,
        Command::Synth => ScenarioKind::Synthesize,
        Command::Simulate => ScenarioKind::SimulateGate,
        Command::Fig2 => ScenarioKind::ReproduceFig2,
    };
    let config = load(kind, cli.config.as_ref())?;
    let options = RunOptions {
        out_dir: cli.out,
        dt: cli.dt,
        level: cli.level,
    };
    let report = run_scenario(&config, &options)?;
    for artifact in &report.outputs {
        println!("wrote {} sha256={}", artifact.path.display(), artifact.sha256);
    }
    println!("{}", report.summary);
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::from(exit::SUCCESS as u8),
        Err(e) => {
            eprintln!("polariton: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
