//! JSON scenario configuration.
//!
//! Every config carries a `units` header that states, per field group,
//! whether frequencies are given as ordinary frequencies ν in Hz (`"hz"`,
//! the value is ω/2π) or as angular frequencies in rad/s (`"rad_per_s"`).
//! After validation everything is in rad/s.

use std::f64::consts::FRAC_PI_4;

use polariton::gates::{synthesize_pulse, GateLevel, GateSpec, LabSpace};
use polariton::lindblad::{DecoherenceRates, FidelityFrame, DEFAULT_RESOLUTION};
use polariton::noise::{default_sweep, NoiseCoupling, NoiseSpec};
use polariton::spectrum::{SystemParams, DEFAULT_N_MAX};
use polariton::units::{angular_to_hz, hz_to_angular};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const CONFIG_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    /// Value is ν = ω/2π in Hz.
    Hz,
    /// Value is ω in rad/s.
    RadPerS,
}

impl Convention {
    fn to_angular(self, v: f64) -> f64 {
        match self {
            Convention::Hz => hz_to_angular(v),
            Convention::RadPerS => v,
        }
    }

    fn express(self, w: f64) -> f64 {
        match self {
            Convention::Hz => angular_to_hz(w),
            Convention::RadPerS => w,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Units {
    /// ω_r, ω_a, g
    pub system: Convention,
    /// ξ
    pub drive: Convention,
    /// κ, Γ₁, Γ₂
    pub rates: Convention,
    /// noise amplitudes A
    pub noise: Convention,
}

impl Units {
    pub const ANGULAR: Units = Units {
        system: Convention::RadPerS,
        drive: Convention::RadPerS,
        rates: Convention::RadPerS,
        noise: Convention::RadPerS,
    };
    pub const HZ: Units = Units {
        system: Convention::Hz,
        drive: Convention::Hz,
        rates: Convention::Hz,
        noise: Convention::Hz,
    };
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSystem {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_r: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawRates {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma2: Option<f64>,
}

/// Gate angles in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawGate {
    pub theta: f64,
    pub phi: f64,
}

/// Initial qubit state for `simulate_gate`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialState {
    #[default]
    Plus,
    Minus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RawScenario {
    Spectrum {},
    NoiseScan {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        amplitudes: Option<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        coupling: Option<NoiseCoupling>,
    },
    Synthesize {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        gate: Option<RawGate>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        xi: Option<f64>,
    },
    SimulateGate {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        gate: Option<RawGate>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        xi: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        initial: Option<InitialState>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        level: Option<GateLevel>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        lab_space: Option<LabSpace>,
    },
    ReproduceFig2 {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        xi: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        rates: Option<RawRates>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        resolution: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        frame: Option<FidelityFrame>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema_version: Option<u32>,
    pub units: Units,
    #[serde(default)]
    pub system: RawSystem,
    pub scenario: RawScenario,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    Spectrum,
    NoiseScan,
    Synthesize,
    SimulateGate,
    ReproduceFig2,
}

impl ScenarioKind {
    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::Spectrum => "spectrum",
            ScenarioKind::NoiseScan => "noise_scan",
            ScenarioKind::Synthesize => "synthesize",
            ScenarioKind::SimulateGate => "simulate_gate",
            ScenarioKind::ReproduceFig2 => "reproduce_fig2",
        }
    }
}

/// Validated scenario; all frequencies in rad/s.
#[derive(Debug, Clone, PartialEq)]
pub enum Scenario {
    Spectrum,
    NoiseScan {
        amplitudes: Vec<f64>,
        coupling: NoiseCoupling,
    },
    Synthesize {
        gate: GateSpec,
        xi: f64,
    },
    SimulateGate {
        gate: GateSpec,
        xi: f64,
        initial: InitialState,
        level: GateLevel,
        lab_space: LabSpace,
    },
    ReproduceFig2 {
        xi: f64,
        rates: DecoherenceRates,
        resolution: usize,
        frame: FidelityFrame,
    },
}

impl Scenario {
    pub fn kind(&self) -> ScenarioKind {
        match self {
            Scenario::Spectrum => ScenarioKind::Spectrum,
            Scenario::NoiseScan { .. } => ScenarioKind::NoiseScan,
            Scenario::Synthesize { .. } => ScenarioKind::Synthesize,
            Scenario::SimulateGate { .. } => ScenarioKind::SimulateGate,
            Scenario::ReproduceFig2 { .. } => ScenarioKind::ReproduceFig2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub system: SystemParams,
    pub scenario: Scenario,
}

impl ScenarioConfig {
    /// Fully resolved config in the given units; parses back to `self`.
    pub fn echo(&self, units: Units) -> RawConfig {
        let s = &self.system;
        let sys = units.system;
        let gate = |g: &GateSpec| {
            Some(RawGate {
                theta: g.theta,
                phi: g.phi,
            })
        };
        let scenario = match &self.scenario {
            Scenario::Spectrum => RawScenario::Spectrum {},
            Scenario::NoiseScan {
                amplitudes,
                coupling,
            } => RawScenario::NoiseScan {
                amplitudes: Some(amplitudes.iter().map(|&a| units.noise.express(a)).collect()),
                coupling: Some(*coupling),
            },
            Scenario::Synthesize { gate: g, xi } => RawScenario::Synthesize {
                gate: gate(g),
                xi: Some(units.drive.express(*xi)),
            },
            Scenario::SimulateGate {
                gate: g,
                xi,
                initial,
                level,
                lab_space,
            } => RawScenario::SimulateGate {
                gate: gate(g),
                xi: Some(units.drive.express(*xi)),
                initial: Some(*initial),
                level: Some(*level),
                lab_space: Some(*lab_space),
            },
            Scenario::ReproduceFig2 {
                xi,
                rates,
                resolution,
                frame,
            } => RawScenario::ReproduceFig2 {
                xi: Some(units.drive.express(*xi)),
                rates: Some(RawRates {
                    kappa: Some(units.rates.express(rates.kappa)),
                    gamma1: Some(units.rates.express(rates.gamma1)),
                    gamma2: Some(units.rates.express(rates.gamma2)),
                }),
                resolution: Some(*resolution),
                frame: Some(*frame),
            },
        };
        RawConfig {
            schema_version: Some(CONFIG_SCHEMA_VERSION),
            units,
            system: RawSystem {
                omega_r: Some(sys.express(s.omega_r)),
                omega_a: Some(sys.express(s.omega_a)),
                g: Some(sys.express(s.g)),
                n_max: Some(s.n_max),
            },
            scenario,
        }
    }
}

/// Minimal config for `kind`; every value defaulted.
pub fn default_raw(kind: ScenarioKind) -> RawConfig {
    let scenario = match kind {
        ScenarioKind::Spectrum => RawScenario::Spectrum {},
        ScenarioKind::NoiseScan => RawScenario::NoiseScan {
            amplitudes: None,
            coupling: None,
        },
        ScenarioKind::Synthesize => RawScenario::Synthesize { gate: None, xi: None },
        ScenarioKind::SimulateGate => RawScenario::SimulateGate {
            gate: None,
            xi: None,
            initial: None,
            level: None,
            lab_space: None,
        },
        ScenarioKind::ReproduceFig2 => RawScenario::ReproduceFig2 {
            xi: None,
            rates: None,
            resolution: None,
            frame: None,
        },
    };
    RawConfig {
        schema_version: None,
        units: Units::HZ,
        system: RawSystem::default(),
        scenario,
    }
}

/// Parses and validates config text.
pub fn validate_config(text: &str) -> CliResult<ScenarioConfig> {
    let raw: RawConfig =
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("schema violation: {e}")))?;
    resolve(&raw)
}

fn positive(field: &str, v: f64) -> CliResult<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(CliError::Config(format!("{field}: must be positive and finite, got {v}")))
    }
}

fn context(field: &str) -> impl Fn(polariton::Error) -> CliError + '_ {
    move |e| match CliError::from(e) {
        CliError::Config(m) => CliError::Config(format!("{field}: {m}")),
        other => other,
    }
}

fn resolve_gate(raw: Option<RawGate>) -> CliResult<GateSpec> {
    let g = raw.unwrap_or(RawGate {
        theta: FRAC_PI_4,
        phi: 0.0,
    });
    GateSpec::new(g.theta, g.phi).map_err(context("scenario.gate"))
}

/// ξ with its physics guard. The gate only enters through the resonance
/// and RWA checks inside pulse synthesis.
fn resolve_xi(system: &SystemParams, raw: Option<f64>, units: Units, gate: &GateSpec) -> CliResult<f64> {
    let xi = match raw {
        Some(v) => positive("scenario.xi", units.drive.to_angular(v))?,
        None => system.g / 20.0,
    };
    synthesize_pulse(system, gate, xi).map_err(context("scenario.xi"))?;
    Ok(xi)
}

/// Validates a parsed config and fills defaults.
pub fn resolve(raw: &RawConfig) -> CliResult<ScenarioConfig> {
    if let Some(v) = raw.schema_version {
        if v != CONFIG_SCHEMA_VERSION {
            return Err(CliError::Config(format!(
                "schema_version: expected {CONFIG_SCHEMA_VERSION}, got {v}"
            )));
        }
    }
    let units = raw.units;
    let sys = units.system;
    let omega_r = match raw.system.omega_r {
        Some(v) => positive("system.omega_r", sys.to_angular(v))?,
        None => SystemParams::reference().omega_r,
    };
    let omega_a = match raw.system.omega_a {
        Some(v) => positive("system.omega_a", sys.to_angular(v))?,
        None => omega_r,
    };
    let g = match raw.system.g {
        Some(v) => positive("system.g", sys.to_angular(v))?,
        None => omega_r / 20.0,
    };
    let n_max = raw.system.n_max.unwrap_or(DEFAULT_N_MAX);
    let system = SystemParams::new(omega_a, omega_r, g, n_max).map_err(context("system"))?;

    let scenario = match &raw.scenario {
        RawScenario::Spectrum {} => Scenario::Spectrum,
        RawScenario::NoiseScan {
            amplitudes,
            coupling,
        } => {
            let coupling = coupling.unwrap_or(NoiseCoupling::Transverse);
            let amplitudes = match amplitudes {
                Some(list) => {
                    if list.is_empty() {
                        return Err(CliError::Config("scenario.amplitudes: must not be empty".into()));
                    }
                    list.iter()
                        .map(|&a| positive("scenario.amplitudes", units.noise.to_angular(a)))
                        .collect::<CliResult<Vec<_>>>()?
                }
                None => default_sweep(),
            };
            for &a in &amplitudes {
                NoiseSpec::new(a, coupling).map_err(context("scenario.amplitudes"))?;
            }
            Scenario::NoiseScan {
                amplitudes,
                coupling,
            }
        }
        RawScenario::Synthesize { gate, xi } => {
            let gate = resolve_gate(*gate)?;
            let xi = resolve_xi(&system, *xi, units, &gate)?;
            Scenario::Synthesize { gate, xi }
        }
        RawScenario::SimulateGate {
            gate,
            xi,
            initial,
            level,
            lab_space,
        } => {
            let gate = resolve_gate(*gate)?;
            let xi = resolve_xi(&system, *xi, units, &gate)?;
            Scenario::SimulateGate {
                gate,
                xi,
                initial: initial.unwrap_or_default(),
                level: level.unwrap_or(GateLevel::Interaction),
                lab_space: lab_space.unwrap_or_default(),
            }
        }
        RawScenario::ReproduceFig2 {
            xi,
            rates,
            resolution,
            frame,
        } => {
            let xi = resolve_xi(&system, *xi, units, &GateSpec::hadamard())?;
            let reference = DecoherenceRates::reference();
            let r = rates.clone().unwrap_or_default();
            let rate = |v: Option<f64>, default: f64| v.map_or(default, |x| units.rates.to_angular(x));
            let rates = DecoherenceRates::new(
                rate(r.kappa, reference.kappa),
                rate(r.gamma1, reference.gamma1),
                rate(r.gamma2, reference.gamma2),
            )
            .map_err(context("scenario.rates"))?;
            let resolution = resolution.unwrap_or(DEFAULT_RESOLUTION);
            if resolution < 2 {
                return Err(CliError::Config(format!(
                    "scenario.resolution: need at least 2 samples, got {resolution}"
                )));
            }
            Scenario::ReproduceFig2 {
                xi,
                rates,
                resolution,
                frame: frame.unwrap_or_default(),
            }
        }
    };
    Ok(ScenarioConfig { system, scenario })
}
