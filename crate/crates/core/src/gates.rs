//! Non-adiabatic holonomic single-qubit gates on the polariton doublet.
//!
//! A resonant 2π pulse of the V-system returns `|G⟩ → −|G⟩`, leaves the dark
//! state alone and flips the sign of the bright state, so the qubit block of
//! the propagator is `|d⟩⟨d| − |b⟩⟨b|`:
//!
//! ```text
//! U(θ,φ) = [ cosθ          sinθ e^{−iφ} ]
//!          [ sinθ e^{iφ}   −cosθ        ]    over {|+⟩, |−⟩}
//! ```

use std::f64::consts::{FRAC_PI_4, PI, TAU};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::drive::{
    bright_dark_basis, effective_v_hamiltonian, frame_rotation, level_energies, level_vector,
    polariton_basis, v_hamiltonian, wrap_phase, DriveConfig, InteractionFrame, LabFrame,
    ProductSpaceLab, VSystemParams, G, MINUS, PLUS, RWA_RATIO,
};
use crate::error::{Error, Result};
use crate::numerics::linalg::{
    matrix_element, outer, re, spectral_function, unitarity_error, CMatrix, CVector, I,
};
use crate::numerics::ode::{integrate_schrodinger, sample_grid, Hamiltonian, StepPolicy};
use crate::spectrum::SystemParams;

/// Pulse areas further than this from 2π are not cyclic.
pub const CYCLIC_TOLERANCE: f64 = 1e-9;

/// Inputs to [`gate_fidelity`] must be unitary to this tolerance.
pub const UNITARITY_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GateSpec {
    /// [0, π]
    pub theta: f64,
    /// [0, 2π)
    pub phi: f64,
}

impl GateSpec {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::invalid("theta", format!("must lie in [0, pi], got {theta}")));
        }
        if !phi.is_finite() {
            return Err(Error::invalid("phi", "must be finite"));
        }
        Ok(GateSpec {
            theta,
            phi: wrap_phase(phi),
        })
    }

    pub fn hadamard() -> Self {
        GateSpec {
            theta: FRAC_PI_4,
            phi: 0.0,
        }
    }

    /// Bloch axis `n̂` with `U = n̂·σ`, σ acting on `{|+⟩, |−⟩}`.
    pub fn axis(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }
}

/// `U(θ,φ)` over `{|+⟩, |−⟩}`.
pub fn gate_matrix(spec: &GateSpec) -> CMatrix {
    let (s, c) = spec.theta.sin_cos();
    CMatrix::from_row_slice(
        2,
        2,
        &[
            re(c),
            Complex64::from_polar(s, -spec.phi),
            Complex64::from_polar(s, spec.phi),
            re(-c),
        ],
    )
}

/// Product `U(specs[0]) · U(specs[1]) · …`.
pub fn compose(specs: &[GateSpec]) -> CMatrix {
    specs
        .iter()
        .fold(CMatrix::identity(2, 2), |acc, s| acc * gate_matrix(s))
}

/// Rows/columns `{|+⟩, |−⟩}` of a 3-level operator.
pub fn qubit_block(u: &CMatrix) -> CMatrix {
    let idx = [PLUS, MINUS];
    CMatrix::from_fn(2, 2, |r, c| u[(idx[r], idx[c])])
}

/// Constant-amplitude resonant pulse.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PulseProgram {
    pub drive: DriveConfig,
    /// seconds
    pub tau: f64,
    /// rad/s
    pub xi: f64,
}

impl PulseProgram {
    pub fn v_params(&self) -> Result<VSystemParams> {
        VSystemParams::from_amplitudes(self.drive.rabi1, self.drive.rabi2, self.drive.phi)
    }
}

/// Drive realizing `U(θ,φ)` with `Ω₁ = ξcos(θ/2)`, `Ω₂ = ξsin(θ/2)`,
/// resonant carriers and `τ = 2π/ξ`.
pub fn synthesize_pulse(params: &SystemParams, spec: &GateSpec, xi: f64) -> Result<PulseProgram> {
    if !(xi.is_finite() && xi > 0.0) {
        return Err(Error::invalid("xi", format!("must be positive and finite, got {xi}")));
    }
    if xi > params.g / RWA_RATIO {
        return Err(Error::PhysicsGuard(format!(
            "xi = {xi:e} rad/s exceeds g/{RWA_RATIO} = {:e} rad/s; the rotating-wave reduction to the \
             V-system requires g >> (Omega1, Omega2)",
            params.g / RWA_RATIO
        )));
    }
    let v = VSystemParams::new(xi, spec.theta, spec.phi)?;
    let (rabi1, rabi2) = v.amplitudes();
    let drive = DriveConfig::resonant(params, rabi1, rabi2, spec.phi)?;
    Ok(PulseProgram {
        drive,
        tau: TAU / xi,
        xi,
    })
}

/// `exp(−i H₁v t)`.
pub fn v_propagator(v: &VSystemParams, t: f64) -> CMatrix {
    v_hamiltonian(v).propagator(t)
}

/// Closed-form cyclic propagator `|d⟩⟨d| − |b⟩⟨b| − |G⟩⟨G|` for a 2π pulse.
pub fn ideal_holonomic_propagator(spec: &GateSpec, xi: f64, tau: f64) -> Result<CMatrix> {
    let report = cyclic_area(xi, tau);
    if !report.cyclic {
        return Err(Error::NotCyclic { area: report.area });
    }
    let v = VSystemParams::new(xi, spec.theta, spec.phi)?;
    let bd = bright_dark_basis(&v);
    let (b, d) = (bd.bright_vector(), bd.dark_vector());
    let g = level_vector(G);
    Ok(outer(&d, &d) - outer(&b, &b) - outer(&g, &g))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CyclicReport {
    /// ξτ in radians
    pub area: f64,
    pub cyclic: bool,
}

fn cyclic_area(xi: f64, tau: f64) -> CyclicReport {
    let area = xi * tau;
    CyclicReport {
        area,
        cyclic: (area - TAU).abs() <= CYCLIC_TOLERANCE,
    }
}

/// Pulse area `∫₀^τ ξ dt = ξτ` and whether it is 2π.
pub fn cyclic_check(program: &PulseProgram) -> CyclicReport {
    cyclic_area(program.xi, program.tau)
}

/// `max |⟨ψ_a(t)|H₁v|ψ_b(t)⟩| / ξ` over `n_samples` times in `[0, τ]` and
/// `a, b ∈ {+, −}`, with `ψ_a(t) = e^{−iH₁v t}|a⟩`.
///
/// The result is normalized by ξ: in rad/s the round-off floor alone is
/// `~ε·ξ`.
pub fn parallel_transport_check(spec: &GateSpec, xi: f64, n_samples: usize) -> Result<f64> {
    let v = VSystemParams::new(xi, spec.theta, spec.phi)?;
    let h = v_hamiltonian(&v);
    let eig = h.eig();
    let tau = TAU / xi;
    let mut worst: f64 = 0.0;
    for t in sample_grid(0.0, tau, n_samples.max(2)) {
        let u = spectral_function(&eig, |l| (-I * l * t).exp());
        let states = [&u * level_vector(PLUS), &u * level_vector(MINUS)];
        for a in &states {
            for b in &states {
                worst = worst.max(matrix_element(a, h.matrix(), b).norm() / xi);
            }
        }
    }
    Ok(worst)
}

/// Same quantity as [`parallel_transport_check`] but with the states evolved
/// and the overlap taken under the interaction-picture Hamiltonian (no RWA).
/// Nonzero: it measures the counter-rotating micromotion.
pub fn interaction_transport_residual(
    params: &SystemParams,
    program: &PulseProgram,
    n_samples: usize,
    policy: StepPolicy,
) -> Result<f64> {
    let h = InteractionFrame::new(params, &program.drive)?;
    let times = sample_grid(0.0, program.tau, n_samples.max(2));
    let plus = integrate_schrodinger(&h, &level_vector(PLUS), &times, policy)?;
    let minus = integrate_schrodinger(&h, &level_vector(MINUS), &times, policy)?;
    let mut worst: f64 = 0.0;
    for (k, &t) in times.iter().enumerate() {
        let hm = h.at(t);
        let states = [&plus.states()[k], &minus.states()[k]];
        for a in states {
            for b in states {
                worst = worst.max(matrix_element(a, &hm, b).norm() / program.xi);
            }
        }
    }
    Ok(worst)
}

/// Level of description used by [`simulate_gate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GateLevel {
    Lab,
    Interaction,
    Effective,
}

impl fmt::Display for GateLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GateLevel::Lab => "lab",
            GateLevel::Interaction => "interaction",
            GateLevel::Effective => "effective",
        })
    }
}

impl FromStr for GateLevel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lab" => Ok(GateLevel::Lab),
            "interaction" => Ok(GateLevel::Interaction),
            "effective" => Ok(GateLevel::Effective),
            other => Err(Error::invalid(
                "level",
                format!("expected lab, interaction or effective, got {other:?}"),
            )),
        }
    }
}

/// Hilbert space for lab-level runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LabSpace {
    ThreeLevel,
    #[default]
    Product,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationOptions {
    pub level: GateLevel,
    pub lab_space: LabSpace,
    pub policy: StepPolicy,
}

impl SimulationOptions {
    pub fn new(level: GateLevel) -> Self {
        SimulationOptions {
            level,
            lab_space: LabSpace::default(),
            policy: StepPolicy::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GateRun {
    /// Final 3-level state in the interaction picture, `{|G⟩, |−⟩, |+⟩}`.
    pub state: CVector,
    /// Population outside span{|G⟩, |−⟩, |+⟩}; zero unless run in the
    /// product space.
    pub leakage: f64,
    /// `|⟨G|ψ⟩|²` at the end of the pulse.
    pub ground_population: f64,
    /// `|⟨U_ideal ψ₀|ψ⟩|²`.
    pub fidelity: f64,
}

/// Runs `program` from the 3-level state `psi0` and compares with the ideal
/// holonomic gate. Lab-level states are rotated by `e^{iH_JC τ}` before the
/// comparison.
pub fn simulate_gate(
    params: &SystemParams,
    program: &PulseProgram,
    psi0: &CVector,
    options: &SimulationOptions,
) -> Result<GateRun> {
    if psi0.len() != 3 {
        return Err(Error::DimensionMismatch(format!(
            "initial state must be a 3-level vector, got length {}",
            psi0.len()
        )));
    }
    let v = program.v_params()?;
    let spec = GateSpec::new(v.theta, v.phi)?;
    let ideal = ideal_holonomic_propagator(&spec, program.xi, program.tau)?;
    let times = [0.0, program.tau];

    let (state, leakage) = match options.level {
        GateLevel::Effective => {
            let (h, _) = effective_v_hamiltonian(params, &program.drive)?;
            (h.propagator(program.tau) * psi0, 0.0)
        }
        GateLevel::Interaction => {
            let h = InteractionFrame::new(params, &program.drive)?;
            let traj = integrate_schrodinger(&h, psi0, &times, options.policy)?;
            (traj.states()[1].clone(), 0.0)
        }
        GateLevel::Lab => {
            let energies = level_energies(params)?;
            let rotation = frame_rotation(&energies, program.tau);
            match options.lab_space {
                LabSpace::ThreeLevel => {
                    let h = LabFrame::new(params, &program.drive)?;
                    let traj = integrate_schrodinger(&h, psi0, &times, options.policy)?;
                    (rotation * &traj.states()[1], 0.0)
                }
                LabSpace::Product => {
                    let h = ProductSpaceLab::new(params, &program.drive)?;
                    let basis = polariton_basis(params)?;
                    let start = &basis * psi0;
                    let traj = integrate_schrodinger(&h, &start, &times, options.policy)?;
                    let end = &traj.states()[1];
                    let inside = basis.adjoint() * end;
                    let leakage = (end.norm_squared() - inside.norm_squared()).max(0.0);
                    (rotation * inside, leakage)
                }
            }
        }
    };

    let target = &ideal * psi0;
    Ok(GateRun {
        fidelity: target.dotc(&state).norm_sqr(),
        ground_population: state[G].norm_sqr(),
        leakage,
        state,
    })
}

/// `|Tr(U_target† U_actual)| / d`, insensitive to global phase.
pub fn gate_fidelity(actual: &CMatrix, target: &CMatrix) -> Result<f64> {
    if actual.shape() != target.shape() || !actual.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "gate shapes {:?} and {:?} differ or are not square",
            actual.shape(),
            target.shape()
        )));
    }
    for m in [actual, target] {
        let deviation = unitarity_error(m);
        if deviation > UNITARITY_TOLERANCE {
            return Err(Error::NotUnitary { deviation });
        }
    }
    Ok((target.adjoint() * actual).trace().norm() / actual.nrows() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::linalg::{c, max_abs_diff};
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn named_gates() {
        let z = gate_matrix(&GateSpec::new(0.0, 0.0).unwrap());
        assert_eq!(z, CMatrix::from_row_slice(2, 2, &[re(1.0), re(0.0), re(0.0), re(-1.0)]));

        let h = gate_matrix(&GateSpec::hadamard());
        let expected = CMatrix::from_row_slice(2, 2, &[re(1.0), re(1.0), re(1.0), re(-1.0)])
            * re(FRAC_1_SQRT_2);
        assert!(max_abs_diff(&h, &expected) < 1e-15);

        let y = gate_matrix(&GateSpec::new(PI / 2.0, PI / 2.0).unwrap());
        let pauli_y = CMatrix::from_row_slice(2, 2, &[re(0.0), c(0.0, -1.0), c(0.0, 1.0), re(0.0)]);
        assert!(max_abs_diff(&y, &pauli_y) < 1e-15);
    }

    #[test]
    fn spec_validation_and_wrapping() {
        assert!(GateSpec::new(-0.1, 0.0).is_err());
        assert!(GateSpec::new(3.2, 0.0).is_err());
        let s = GateSpec::new(1.0, -PI / 2.0).unwrap();
        assert!((s.phi - 1.5 * PI).abs() < 1e-15);
    }

    #[test]
    fn hadamard_synthesis_matches_reference_numbers() {
        let p = SystemParams::reference();
        let xi = p.g / 20.0;
        let prog = synthesize_pulse(&p, &GateSpec::hadamard(), xi).unwrap();
        assert!((prog.drive.rabi1 / xi - 0.924).abs() < 5e-4);
        assert!((prog.drive.rabi2 / xi - 0.383).abs() < 5e-4);
        assert!((prog.drive.rabi1 / prog.drive.rabi2 - 2.414).abs() < 5e-4);
        assert!((prog.tau - 50e-9).abs() < 1e-21);
        assert!(cyclic_check(&prog).cyclic);
    }

    #[test]
    fn synthesis_round_trips_through_effective_model() {
        let p = SystemParams::reference();
        for (t, ph) in [(0.0, 0.0), (0.4, 1.0), (PI, 5.0), (2.0, 6.2)] {
            let spec = GateSpec::new(t, ph).unwrap();
            let prog = synthesize_pulse(&p, &spec, p.g / 20.0).unwrap();
            let (_, v) = effective_v_hamiltonian(&p, &prog.drive).unwrap();
            assert!((v.theta - spec.theta).abs() < 1e-12);
            assert!((v.phi - spec.phi).abs() < 1e-12);
            assert!((v.xi - prog.xi).abs() < 1e-12 * prog.xi);
        }
        let single = synthesize_pulse(&p, &GateSpec::new(0.0, 0.0).unwrap(), p.g / 20.0).unwrap();
        assert_eq!(single.drive.rabi2, 0.0);
    }

    #[test]
    fn synthesis_rejects_strong_drive() {
        let p = SystemParams::reference();
        match synthesize_pulse(&p, &GateSpec::hadamard(), p.g / 5.0) {
            Err(Error::PhysicsGuard(msg)) => assert!(msg.contains("g >> (Omega1, Omega2)")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn cyclic_flags_half_pulse() {
        let p = SystemParams::reference();
        let mut prog = synthesize_pulse(&p, &GateSpec::hadamard(), p.g / 20.0).unwrap();
        assert!((cyclic_check(&prog).area - TAU).abs() < 1e-12);
        prog.tau /= 2.0;
        let r = cyclic_check(&prog);
        assert!(!r.cyclic && (r.area - PI).abs() < 1e-12);
        assert!(matches!(
            ideal_holonomic_propagator(&GateSpec::hadamard(), prog.xi, prog.tau),
            Err(Error::NotCyclic { .. })
        ));
    }

    #[test]
    fn ideal_propagator_structure() {
        let xi = 2.0;
        let u = ideal_holonomic_propagator(&GateSpec::hadamard(), xi, PI).unwrap();
        assert!(max_abs_diff(&qubit_block(&u), &gate_matrix(&GateSpec::hadamard())) < 1e-15);
        assert_eq!(u[(G, G)], re(-1.0));
        let block = qubit_block(&u);
        assert!(max_abs_diff(&(&block * &block), &CMatrix::identity(2, 2)) < 1e-15);
        // matches the matrix exponential of H₁v
        let v = VSystemParams::new(xi, FRAC_PI_4, 0.0).unwrap();
        assert!(max_abs_diff(&v_propagator(&v, PI), &u) < 1e-13);
    }

    #[test]
    fn parallel_transport_at_origin_is_exact() {
        let v = VSystemParams::new(1.0, 0.8, 0.3).unwrap();
        let h = v_hamiltonian(&v);
        assert_eq!(h.matrix()[(PLUS, MINUS)], re(0.0));
        assert_eq!(h.matrix()[(MINUS, PLUS)], re(0.0));
        let worst = parallel_transport_check(&GateSpec::hadamard(), 1.0, 100).unwrap();
        assert!(worst < 1e-10);
    }

    #[test]
    fn fidelity_examples() {
        let h = gate_matrix(&GateSpec::hadamard());
        let z = gate_matrix(&GateSpec::new(0.0, 0.0).unwrap());
        assert!((gate_fidelity(&h, &h).unwrap() - 1.0).abs() < 1e-15);
        let phased = &h * Complex64::from_polar(1.0, 0.7);
        assert!((gate_fidelity(&phased, &h).unwrap() - 1.0).abs() < 1e-15);
        assert!((gate_fidelity(&h, &z).unwrap() - FRAC_1_SQRT_2).abs() < 1e-15);
        let bad = CMatrix::from_row_slice(2, 2, &[re(1.0), re(0.1), re(0.0), re(1.0)]);
        assert!(matches!(gate_fidelity(&bad, &h), Err(Error::NotUnitary { .. })));
    }

    #[test]
    fn effective_hadamard_acts_exactly() {
        let p = SystemParams::reference();
        let prog = synthesize_pulse(&p, &GateSpec::hadamard(), p.g / 20.0).unwrap();
        let run = simulate_gate(&p, &prog, &level_vector(PLUS), &SimulationOptions::new(GateLevel::Effective))
            .unwrap();
        let target = crate::drive::hadamard_target();
        assert!((&run.state - target).norm() < 1e-12);
        assert!((run.fidelity - 1.0).abs() < 1e-12);
    }

    #[test]
    fn level_parsing() {
        for l in [GateLevel::Lab, GateLevel::Interaction, GateLevel::Effective] {
            assert_eq!(l.to_string().parse::<GateLevel>().unwrap(), l);
        }
        assert!("rwa".parse::<GateLevel>().is_err());
    }
}
