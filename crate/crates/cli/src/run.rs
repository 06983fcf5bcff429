//! Scenario dispatch.

use std::path::PathBuf;
use std::time::Instant;

use polariton::drive::{level_vector, MINUS, PLUS};
use polariton::gates::{
    cyclic_check, gate_matrix, parallel_transport_check, simulate_gate, synthesize_pulse, GateLevel,
    GateSpec, PulseProgram, SimulationOptions,
};
use polariton::lindblad::{hadamard_experiment, HadamardSetup};
use polariton::noise::noise_scan;
use polariton::numerics::linalg::CMatrix;
use polariton::numerics::ode::StepPolicy;
use polariton::spectrum::{spectrum_table, SystemParams};
use polariton::units::angular_to_hz;
use serde::Serialize;
use serde_json::json;

use crate::config::{InitialState, Scenario, ScenarioConfig, Units};
use crate::error::{CliError, CliResult};
use crate::output::{num, to_json_bytes, write_artifact, RunReport, Table, OUTPUT_SCHEMA_VERSION};

pub const SPECTRUM_CSV: &str = "spectrum.csv";
pub const NOISE_CSV: &str = "noise_scan.csv";
pub const FIG2_CSV: &str = "fig2.csv";
pub const FIG2_REPORT: &str = "fig2_report.json";
pub const GATE_REPORT: &str = "gate_report.json";
pub const RUN_REPORT: &str = "run_report.json";

/// Pulse-samples used for the parallel-transport residual.
const TRANSPORT_SAMPLES: usize = 257;

#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub out_dir: PathBuf,
    /// Fixed integrator step in seconds.
    pub dt: Option<f64>,
    /// Overrides the configured simulation level.
    pub level: Option<GateLevel>,
}

impl RunOptions {
    pub fn new(out_dir: impl Into<PathBuf>) -> Self {
        RunOptions {
            out_dir: out_dir.into(),
            dt: None,
            level: None,
        }
    }

    fn policy(&self) -> StepPolicy {
        self.dt.map_or_else(StepPolicy::default, StepPolicy::Fixed)
    }
}

/// Runs one validated scenario and writes its outputs plus `run_report.json`.
pub fn run_scenario(config: &ScenarioConfig, options: &RunOptions) -> CliResult<RunReport> {
    let kind = config.scenario.kind();
    let integrates = matches!(
        config.scenario,
        Scenario::SimulateGate { .. } | Scenario::ReproduceFig2 { .. }
    );
    if let Some(dt) = options.dt {
        if !integrates {
            return Err(CliError::Config(format!("--dt does not apply to {}", kind.name())));
        }
        if !(dt.is_finite() && dt > 0.0) {
            return Err(CliError::Config(format!("--dt must be positive, got {dt}")));
        }
    }
    if options.level.is_some() && !matches!(config.scenario, Scenario::SimulateGate { .. }) {
        return Err(CliError::Config(format!("--level does not apply to {}", kind.name())));
    }

    let mut config = config.clone();
    if let (Some(l), Scenario::SimulateGate { level, .. }) = (options.level, &mut config.scenario) {
        *level = l;
    }
    let config = &config;

    let start = Instant::now();
    let p = &config.system;
    let dir = &options.out_dir;
    let (outputs, summary) = match &config.scenario {
        Scenario::Spectrum => {
            let table = spectrum_csv(p)?;
            let rows = table.rows.len();
            (vec![write_artifact(dir, SPECTRUM_CSV, &table.to_csv()?)?], json!({ "levels": rows }))
        }
        Scenario::NoiseScan {
            amplitudes,
            coupling,
        } => {
            let reports = noise_scan(p, amplitudes, *coupling)?;
            let mut table = Table::new(
                "noise_scan",
                &[
                    "coupling",
                    "amplitude_Hz_over_2pi",
                    "method",
                    "shift_minus_Hz_over_2pi",
                    "shift_plus_Hz_over_2pi",
                    "splitting_correction_Hz_over_2pi",
                ],
            );
            for r in &reports {
                table.push(vec![
                    coupling_name(*coupling).into(),
                    num(angular_to_hz(r.noise.amplitude)),
                    r.method.to_string(),
                    num(angular_to_hz(r.shift_minus)),
                    num(angular_to_hz(r.shift_plus)),
                    num(angular_to_hz(r.splitting_correction)),
                ]);
            }
            (
                vec![write_artifact(dir, NOISE_CSV, &table.to_csv()?)?],
                json!({ "rows": reports.len() }),
            )
        }
        Scenario::Synthesize { gate, xi } => {
            let report = gate_report(p, gate, *xi, None)?;
            let summary = json!({
                "tau_s": report.program.tau,
                "cyclic": report.cyclic,
                "parallel_transport_residual": report.parallel_transport_residual,
            });
            (vec![write_artifact(dir, GATE_REPORT, &to_json_bytes(&report)?)?], summary)
        }
        Scenario::SimulateGate {
            gate,
            xi,
            initial,
            level,
            lab_space,
        } => {
            let mut opts = SimulationOptions::new(*level);
            opts.lab_space = *lab_space;
            opts.policy = options.policy();
            let report = gate_report(p, gate, *xi, Some((*initial, opts)))?;
            let sim = report.simulation.as_ref().expect("simulation requested");
            let summary = json!({
                "level": sim.level,
                "fidelity": sim.fidelity,
                "leakage": sim.leakage,
            });
            (vec![write_artifact(dir, GATE_REPORT, &to_json_bytes(&report)?)?], summary)
        }
        Scenario::ReproduceFig2 {
            xi,
            rates,
            resolution,
            frame,
        } => {
            let setup = HadamardSetup {
                xi: *xi,
                resolution: *resolution,
                frame: *frame,
                policy: options.policy(),
            };
            let run = hadamard_experiment(p, rates, &setup)?;
            let mut table = Table::new(
                "fig2",
                &["xi_t_over_2pi", "fidelity_with_decoherence", "fidelity_without"],
            );
            let curve = &run.with_decoherence;
            for (k, &x) in curve.abscissa.iter().enumerate() {
                table.push(vec![
                    num(x),
                    num(curve.fidelity[k]),
                    num(run.without_decoherence.fidelity[k]),
                ]);
            }
            let summary = json!({
                "endpoint_with_decoherence": run.with_decoherence.endpoint(),
                "endpoint_without": run.without_decoherence.endpoint(),
            });
            let details = json!({
                "schema_version": OUTPUT_SCHEMA_VERSION,
                "frame": frame,
                "endpoint_with_decoherence": run.with_decoherence.endpoint(),
                "endpoint_without": run.without_decoherence.endpoint(),
                "diagnostics_with_decoherence": run.diagnostics_with,
                "diagnostics_without": run.diagnostics_without,
            });
            (
                vec![
                    write_artifact(dir, FIG2_CSV, &table.to_csv()?)?,
                    write_artifact(dir, FIG2_REPORT, &to_json_bytes(&details)?)?,
                ],
                summary,
            )
        }
    };

    let report = RunReport {
        schema_version: OUTPUT_SCHEMA_VERSION,
        tool: "polariton",
        tool_version: env!("CARGO_PKG_VERSION"),
        scenario: kind.name(),
        config: config.echo(Units::ANGULAR),
        dt_override: options.dt,
        wall_time_s: start.elapsed().as_secs_f64(),
        outputs,
        summary,
    };
    write_artifact(dir, RUN_REPORT, &to_json_bytes(&report)?)?;
    Ok(report)
}

fn coupling_name(c: polariton::noise::NoiseCoupling) -> &'static str {
    match c {
        polariton::noise::NoiseCoupling::Transverse => "transverse",
        polariton::noise::NoiseCoupling::Longitudinal => "longitudinal",
    }
}

/// Dressed ladder as a table with columns `n, branch, energy_Hz_over_2pi, alpha_rad`.
pub fn spectrum_csv(p: &SystemParams) -> CliResult<Table> {
    let mut table = Table::new("spectrum", &["n", "branch", "energy_Hz_over_2pi", "alpha_rad"]);
    for level in spectrum_table(p)? {
        table.push(vec![
            level.n.to_string(),
            level.branch.to_string(),
            num(angular_to_hz(level.energy)),
            num(level.mixing_angle),
        ]);
    }
    Ok(table)
}

/// Complex matrix as rows of `[re, im]` pairs.
fn complex_rows(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct SimulationSummary {
    pub level: GateLevel,
    pub initial: InitialState,
    pub fidelity: f64,
    pub leakage: f64,
    pub ground_population: f64,
    /// Final `{|G⟩, |−⟩, |+⟩}` amplitudes in the interaction picture.
    pub final_state: Vec<[f64; 2]>,
}

/// Pulse program and checks; rad/s and seconds throughout.
#[derive(Debug, Clone, Serialize)]
pub struct GateReport {
    pub schema_version: u32,
    pub gate: GateSpec,
    pub program: PulseProgram,
    /// ξτ in radians
    pub pulse_area: f64,
    pub cyclic: bool,
    /// `max |⟨ψ_a|H₁v|ψ_b⟩| / ξ` over the pulse
    pub parallel_transport_residual: f64,
    /// Target `U(θ,φ)` over `{|+⟩, |−⟩}`.
    pub target_unitary: Vec<Vec<[f64; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub simulation: Option<SimulationSummary>,
}

fn gate_report(
    p: &SystemParams,
    gate: &GateSpec,
    xi: f64,
    simulate: Option<(InitialState, SimulationOptions)>,
) -> CliResult<GateReport> {
    let program = synthesize_pulse(p, gate, xi)?;
    let cyclic = cyclic_check(&program);
    let simulation = match simulate {
        Some((initial, opts)) => {
            let psi0 = level_vector(match initial {
                InitialState::Plus => PLUS,
                InitialState::Minus => MINUS,
            });
            let run = simulate_gate(p, &program, &psi0, &opts)?;
            Some(SimulationSummary {
                level: opts.level,
                initial,
                fidelity: run.fidelity,
                leakage: run.leakage,
                ground_population: run.ground_population,
                final_state: run.state.iter().map(|z| [z.re, z.im]).collect(),
            })
        }
        None => None,
    };
    Ok(GateReport {
        schema_version: OUTPUT_SCHEMA_VERSION,
        gate: *gate,
        program,
        pulse_area: cyclic.area,
        cyclic: cyclic.cyclic,
        parallel_transport_residual: parallel_transport_check(gate, xi, TRANSPORT_SAMPLES)?,
        target_unitary: complex_rows(&gate_matrix(gate)),
        simulation,
    })
}
