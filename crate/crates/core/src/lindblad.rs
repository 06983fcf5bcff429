//! Open-system dynamics of the driven polariton qubit.
//!
//! The master equation is
//!
//! ```text
//! ρ̇ = i[ρ, H] + Σ_k (γ_k/2)(2 A_k ρ A_k† − A_k†A_k ρ − ρ A_k†A_k)
//! ```
//!
//! with channels `(κ, a)`, `(Γ₁, σ⁻)` and `(Γ₂, σᶻ)`. Note the prefactor:
//! a channel with rate γ empties `A†A`-eigenstates at rate γ, and σᶻ
//! dephasing destroys coherences at rate 2Γ₂.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::drive::{frame_rotation, hadamard_target, level_energies, level_vector, polariton_basis, LabFrame, PLUS};
use crate::error::{Error, Result};
use crate::gates::{synthesize_pulse, GateSpec};
use crate::numerics::linalg::{
    hermiticity_error, min_eigenvalue, outer, project, re, row_sum_norm, CMatrix, CVector, I,
};
use crate::numerics::ode::{integrate_with, sample_grid, Hamiltonian, StepPolicy, Trajectory};
use crate::spectrum::SystemParams;
use crate::units::{hz_to_angular, KHZ};

pub const HERMITICITY_TOLERANCE: f64 = 1e-10;
pub const TRACE_TOLERANCE: f64 = 1e-8;
pub const POSITIVITY_TOLERANCE: f64 = 1e-8;

/// Runs abort once an eigenvalue of ρ drops below this.
pub const POSITIVITY_ABORT: f64 = -1e-6;

/// Default number of samples of `ξt/2π ∈ [0, 1]`.
pub const DEFAULT_RESOLUTION: usize = 201;

/// Decay rates in rad/s.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecoherenceRates {
    /// cavity decay κ
    pub kappa: f64,
    /// qubit decay Γ₁
    pub gamma1: f64,
    /// qubit dephasing Γ₂
    pub gamma2: f64,
}

impl DecoherenceRates {
    pub fn new(kappa: f64, gamma1: f64, gamma2: f64) -> Result<Self> {
        for (name, v) in [("kappa", kappa), ("gamma1", gamma1), ("gamma2", gamma2)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::invalid(name, format!("rate must be non-negative and finite, got {v}")));
            }
        }
        Ok(DecoherenceRates {
            kappa,
            gamma1,
            gamma2,
        })
    }

    pub fn uniform(rate: f64) -> Result<Self> {
        Self::new(rate, rate, rate)
    }

    pub fn zero() -> Self {
        DecoherenceRates {
            kappa: 0.0,
            gamma1: 0.0,
            gamma2: 0.0,
        }
    }

    /// All three rates at 2π×8 kHz.
    pub fn reference() -> Self {
        let r = hz_to_angular(8.0 * KHZ);
        DecoherenceRates {
            kappa: r,
            gamma1: r,
            gamma2: r,
        }
    }

    /// Individually measured values: κ = 2π×7 kHz, Γ₁ = 2π×8 kHz,
    /// Γ₂ = 2π×3.5 kHz.
    pub fn measured() -> Self {
        DecoherenceRates {
            kappa: hz_to_angular(7.0 * KHZ),
            gamma1: hz_to_angular(8.0 * KHZ),
            gamma2: hz_to_angular(3.5 * KHZ),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.kappa == 0.0 && self.gamma1 == 0.0 && self.gamma2 == 0.0
    }
}

/// `a`, `σ⁻` and `σᶻ` in some basis.
#[derive(Debug, Clone, PartialEq)]
pub struct CollapseOperators {
    pub a: CMatrix,
    pub sigma_minus: CMatrix,
    pub sigma_z: CMatrix,
}

impl CollapseOperators {
    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    /// `(rate, operator)` pairs, skipping channels with zero rate.
    pub fn channels(&self, rates: &DecoherenceRates) -> Vec<(f64, CMatrix)> {
        [
            (rates.kappa, &self.a),
            (rates.gamma1, &self.sigma_minus),
            (rates.gamma2, &self.sigma_z),
        ]
        .into_iter()
        .filter(|(r, _)| *r > 0.0)
        .map(|(r, m)| (r, m.clone()))
        .collect()
    }
}

/// Full product-space operators.
pub fn product_collapse_operators(params: &SystemParams) -> CollapseOperators {
    let space = params.space();
    CollapseOperators {
        a: space.annihilation(),
        sigma_minus: space.sigma_minus(),
        sigma_z: space.sigma_z(),
    }
}

/// `P A P` onto `{|G⟩, |−,1⟩, |+,1⟩}` by explicit projection.
pub fn numeric_projected_collapse_operators(params: &SystemParams) -> Result<CollapseOperators> {
    let basis = polariton_basis(params)?;
    let full = product_collapse_operators(params);
    Ok(CollapseOperators {
        a: project(&full.a, &basis),
        sigma_minus: project(&full.sigma_minus, &basis),
        sigma_z: project(&full.sigma_z, &basis),
    })
}

/// Collapse operators in the 3-level basis `{|G⟩, |−⟩, |+⟩}`. At resonance
/// the closed forms
///
/// ```text
/// PaP  = (|G⟩⟨−| + |G⟩⟨+|)/√2
/// Pσ⁻P = (−|G⟩⟨−| + |G⟩⟨+|)/√2
/// PσᶻP = −|G⟩⟨G| − |+⟩⟨−| − |−⟩⟨+|
/// ```
///
/// are used; otherwise the projection is computed numerically.
pub fn projected_collapse_operators(params: &SystemParams) -> Result<CollapseOperators> {
    params.validate()?;
    if !params.is_resonant() {
        return numeric_projected_collapse_operators(params);
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let (g, m, p) = (level_vector(0), level_vector(1), level_vector(2));
    let a = (outer(&g, &m) + outer(&g, &p)) * re(h);
    let sigma_minus = (outer(&g, &p) - outer(&g, &m)) * re(h);
    let sigma_z = -(outer(&g, &g) + outer(&p, &m) + outer(&m, &p));
    Ok(CollapseOperators {
        a,
        sigma_minus,
        sigma_z,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    ThreeLevel,
    Product,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Frame {
    Lab,
    Interaction,
}

/// A validated density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    entries: CMatrix,
    basis: Basis,
    frame: Frame,
}

impl DensityMatrix {
    /// Checks Hermiticity (1e-10), unit trace (1e-8) and positivity (1e-8).
    pub fn new(entries: CMatrix, basis: Basis, frame: Frame) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::InvalidDensityMatrix(format!(
                "not square: {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        let herm = hermiticity_error(&entries);
        if herm > HERMITICITY_TOLERANCE {
            return Err(Error::InvalidDensityMatrix(format!("not Hermitian: deviation {herm:e}")));
        }
        let trace = entries.trace();
        if (trace - re(1.0)).norm() > TRACE_TOLERANCE {
            return Err(Error::InvalidDensityMatrix(format!("trace {trace} differs from 1")));
        }
        let min = min_eigenvalue(&entries);
        if min < -POSITIVITY_TOLERANCE {
            return Err(Error::InvalidDensityMatrix(format!("negative eigenvalue {min:e}")));
        }
        Ok(DensityMatrix {
            entries,
            basis,
            frame,
        })
    }

    pub fn pure(psi: &CVector, basis: Basis, frame: Frame) -> Result<Self> {
        Self::new(outer(psi, psi), basis, frame)
    }

    /// `I/d`.
    pub fn maximally_mixed(dim: usize, basis: Basis, frame: Frame) -> Self {
        DensityMatrix {
            entries: CMatrix::identity(dim, dim) * re(1.0 / dim as f64),
            basis,
            frame,
        }
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_entries(self) -> CMatrix {
        self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }
}

fn check_dims(dim: usize, ops: &[(f64, CMatrix)]) -> Result<()> {
    for (_, op) in ops {
        if op.shape() != (dim, dim) {
            return Err(Error::DimensionMismatch(format!(
                "collapse operator is {}x{}, state is {dim}x{dim}",
                op.nrows(),
                op.ncols()
            )));
        }
    }
    Ok(())
}

/// Right-hand side of the master equation, term by term as written.
pub fn lindblad_rhs(
    h: &CMatrix,
    rho: &DensityMatrix,
    rates: &DecoherenceRates,
    ops: &CollapseOperators,
) -> Result<CMatrix> {
    let r = rho.entries();
    let dim = rho.dim();
    if h.shape() != (dim, dim) || ops.dim() != dim {
        return Err(Error::DimensionMismatch(format!(
            "H is {}x{}, collapse operators are {d}x{d}, rho is {dim}x{dim}",
            h.nrows(),
            h.ncols(),
            d = ops.dim()
        )));
    }
    let mut out = (r * h - h * r) * I;
    for (rate, a) in ops.channels(rates) {
        let ad = a.adjoint();
        let ada = &ad * &a;
        let l = (&a * r * &ad) * re(2.0) - &ada * r - r * &ada;
        out += l * re(rate / 2.0);
    }
    Ok(out)
}

/// Preassembled generator `ρ̇ = Kρ + (Kρ)† + Σ γ AρA†`, with
/// `K = −iH − ½Σ γ A†A`.
struct Generator<'a, H: ?Sized> {
    hamiltonian: &'a H,
    channels: Vec<(f64, CMatrix, CMatrix)>,
    damping: CMatrix,
    h: CMatrix,
    k: CMatrix,
    kr: CMatrix,
    tmp: CMatrix,
}

impl<'a, H: Hamiltonian + ?Sized> Generator<'a, H> {
    fn new(hamiltonian: &'a H, channels: &[(f64, CMatrix)]) -> Self {
        let dim = hamiltonian.dim();
        let mut damping = CMatrix::zeros(dim, dim);
        for (rate, a) in channels {
            damping += (a.adjoint() * a) * re(0.5 * rate);
        }
        Generator {
            hamiltonian,
            channels: channels
                .iter()
                .map(|(r, a)| (*r, a.clone(), a.adjoint()))
                .collect(),
            damping,
            h: CMatrix::zeros(dim, dim),
            k: CMatrix::zeros(dim, dim),
            kr: CMatrix::zeros(dim, dim),
            tmp: CMatrix::zeros(dim, dim),
        }
    }

    fn rate_bound(&self) -> f64 {
        self.channels
            .iter()
            .map(|(r, a, ad)| r * row_sum_norm(&(ad * a)))
            .sum()
    }

    fn eval(&mut self, t: f64, rho: &CMatrix, out: &mut CMatrix) {
        let zero = Complex64::new(0.0, 0.0);
        self.hamiltonian.write_at(t, &mut self.h);
        for ((k, h), d) in self.k.iter_mut().zip(self.h.iter()).zip(self.damping.iter()) {
            *k = -I * h - d;
        }
        self.kr.gemm(re(1.0), &self.k, rho, zero);
        let n = rho.nrows();
        for j in 0..n {
            for i in 0..n {
                out[(i, j)] = self.kr[(i, j)] + self.kr[(j, i)].conj();
            }
        }
        for (rate, a, ad) in &self.channels {
            self.tmp.gemm(re(1.0), a, rho, zero);
            out.gemm(re(*rate), &self.tmp, ad, re(1.0));
        }
    }
}

/// Invariant diagnostics collected along a master-equation run.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct MasterDiagnostics {
    pub max_trace_error: f64,
    pub min_eigenvalue: f64,
    pub max_hermiticity_error: f64,
    pub dt: f64,
    pub steps: usize,
}

#[derive(Debug, Clone)]
pub struct MasterTrajectory {
    pub trajectory: Trajectory<CMatrix>,
    pub diagnostics: MasterDiagnostics,
}

/// Integrates the master equation and records ρ at `sample_times`. Aborts if
/// an eigenvalue of ρ falls below [`POSITIVITY_ABORT`].
pub fn evolve_master<H: Hamiltonian + ?Sized>(
    hamiltonian: &H,
    rho0: &DensityMatrix,
    rates: &DecoherenceRates,
    ops: &CollapseOperators,
    sample_times: &[f64],
    policy: StepPolicy,
) -> Result<MasterTrajectory> {
    let dim = rho0.dim();
    if hamiltonian.dim() != dim {
        return Err(Error::DimensionMismatch(format!(
            "Hamiltonian is {d}x{d}, rho is {dim}x{dim}",
            d = hamiltonian.dim()
        )));
    }
    let channels = ops.channels(rates);
    check_dims(dim, &channels)?;
    let mut generator = Generator::new(hamiltonian, &channels);
    let dt = policy.resolve(hamiltonian.max_frequency() + generator.rate_bound())?;

    let mut diag = MasterDiagnostics {
        min_eigenvalue: f64::INFINITY,
        dt,
        ..Default::default()
    };
    let trajectory = integrate_with(
        |t, rho: &CMatrix, out: &mut CMatrix| generator.eval(t, rho, out),
        rho0.entries().clone(),
        sample_times,
        dt,
        |t, rho, _| {
            let min = min_eigenvalue(rho);
            diag.min_eigenvalue = diag.min_eigenvalue.min(min);
            diag.max_trace_error = diag.max_trace_error.max((rho.trace() - re(1.0)).norm());
            diag.max_hermiticity_error = diag.max_hermiticity_error.max(hermiticity_error(rho));
            if min < POSITIVITY_ABORT {
                return Err(Error::PositivityViolation {
                    time: t,
                    min_eigenvalue: min,
                    dt,
                });
            }
            Ok(())
        },
    )?;
    diag.steps = trajectory.steps;
    Ok(MasterTrajectory {
        trajectory,
        diagnostics: diag,
    })
}

/// `⟨ψ|ρ|ψ⟩`.
pub fn state_fidelity(rho: &DensityMatrix, psi: &CVector) -> Result<f64> {
    if psi.len() != rho.dim() {
        return Err(Error::DimensionMismatch(format!(
            "state has {} components, rho is {d}x{d}",
            psi.len(),
            d = rho.dim()
        )));
    }
    Ok(psi.dotc(&(rho.entries() * psi)).re)
}

/// Frame in which the Hadamard fidelity is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FidelityFrame {
    /// ρ rotated by `e^{iH_JC t}` before projecting.
    #[default]
    Interaction,
    Lab,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FidelityCurve {
    /// ξt/2π
    pub abscissa: Vec<f64>,
    pub fidelity: Vec<f64>,
    pub decoherence_on: bool,
}

impl FidelityCurve {
    pub fn endpoint(&self) -> f64 {
        *self.fidelity.last().expect("non-empty curve")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HadamardSetup {
    pub xi: f64,
    pub resolution: usize,
    pub frame: FidelityFrame,
    pub policy: StepPolicy,
}

impl HadamardSetup {
    /// `ξ = g/20`, 201 samples, interaction-picture fidelity.
    pub fn reference(params: &SystemParams) -> Self {
        HadamardSetup {
            xi: params.g / 20.0,
            resolution: DEFAULT_RESOLUTION,
            frame: FidelityFrame::default(),
            policy: StepPolicy::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct HadamardExperiment {
    pub with_decoherence: FidelityCurve,
    pub without_decoherence: FidelityCurve,
    pub diagnostics_with: MasterDiagnostics,
    pub diagnostics_without: MasterDiagnostics,
}

/// Hadamard pulse from `|+⟩` under the lab-frame 3×3 Hamiltonian with
/// projected collapse operators, once with `rates` and once without.
/// The two runs execute concurrently.
pub fn hadamard_experiment(
    params: &SystemParams,
    rates: &DecoherenceRates,
    setup: &HadamardSetup,
) -> Result<HadamardExperiment> {
    if setup.resolution < 2 {
        return Err(Error::invalid("resolution", "need at least two samples"));
    }
    let program = synthesize_pulse(params, &GateSpec::hadamard(), setup.xi)?;
    let h = LabFrame::new(params, &program.drive)?;
    let ops = projected_collapse_operators(params)?;
    let energies = level_energies(params)?;
    let rho0 = DensityMatrix::pure(&level_vector(PLUS), Basis::ThreeLevel, Frame::Lab)?;
    let times = sample_grid(0.0, program.tau, setup.resolution);
    let abscissa: Vec<f64> = (0..setup.resolution)
        .map(|k| k as f64 / (setup.resolution - 1) as f64)
        .collect();
    let target = hadamard_target();

    let run = |r: &DecoherenceRates| -> Result<(FidelityCurve, MasterDiagnostics)> {
        let out = evolve_master(&h, &rho0, r, &ops, &times, setup.policy)?;
        let fidelity = out
            .trajectory
            .iter()
            .map(|(t, rho)| {
                let rho = match setup.frame {
                    FidelityFrame::Interaction => {
                        let u = frame_rotation(&energies, t);
                        &u * rho * u.adjoint()
                    }
                    FidelityFrame::Lab => rho.clone(),
                };
                target.dotc(&(rho * &target)).re
            })
            .collect();
        Ok((
            FidelityCurve {
                abscissa: abscissa.clone(),
                fidelity,
                decoherence_on: !r.is_zero(),
            },
            out.diagnostics,
        ))
    };
    let zero = DecoherenceRates::zero();
    let (with, without) = rayon::join(|| run(rates), || run(&zero));
    let (with_decoherence, diagnostics_with) = with?;
    let (without_decoherence, diagnostics_without) = without?;
    Ok(HadamardExperiment {
        with_decoherence,
        without_decoherence,
        diagnostics_with,
        diagnostics_without,
    })
}
