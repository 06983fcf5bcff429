//! Two-tone microwave drive on the polariton qubit and the chain of reduced
//! Hamiltonians used to describe it.
//!
//! The working subspace is `{|G⟩, |−⟩, |+⟩}` with `|±⟩ = |±,1⟩`, indexed by
//! [`G`], [`MINUS`] and [`PLUS`]. A classical field `f(t)` couples to the
//! qubit through `√2 f(t) σˣ`; at resonance `⟨G|σˣ|±⟩ = ±1/√2`, so the drive
//! elements are `∓f(t)`.
//!
//! Three levels of description are available:
//!
//! * lab frame, [`LabFrame`] (3×3) or [`ProductSpaceLab`] (full ladder),
//! * interaction picture w.r.t. `H_JC` without any RWA, [`InteractionFrame`],
//! * the constant V-system `H₁v` after both rotating-wave approximations,
//!   [`effective_v_hamiltonian`].

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::linalg::{re, row_sum_norm, CMatrix, CVector, Hermitian, I};
use crate::numerics::ode::Hamiltonian;
use crate::spectrum::{build_jc_hamiltonian, dressed_vector, eigen_energy, Branch, SystemParams};

pub const G: usize = 0;
pub const MINUS: usize = 1;
pub const PLUS: usize = 2;

/// Amplitudes must stay below `g / RWA_RATIO` for the two-stage RWA.
pub const RWA_RATIO: f64 = 10.0;

/// Carriers must sit within `ξ / RESONANCE_RATIO` of the doublet lines.
pub const RESONANCE_RATIO: f64 = 10.0;

/// `f(t) = Ω₁cos(ω₁t) + Ω₂cos(ω₂t + φ)`, all in rad/s.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriveConfig {
    /// ω₁
    pub omega1: f64,
    /// ω₂
    pub omega2: f64,
    /// Ω₁
    pub rabi1: f64,
    /// Ω₂
    pub rabi2: f64,
    /// φ
    pub phi: f64,
}

impl DriveConfig {
    pub fn new(omega1: f64, omega2: f64, rabi1: f64, rabi2: f64, phi: f64) -> Result<Self> {
        let cfg = DriveConfig {
            omega1,
            omega2,
            rabi1,
            rabi2,
            phi,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Resonant carriers `ω₁ = E_{1,−}`, `ω₂ = E_{1,+}`.
    pub fn resonant(params: &SystemParams, rabi1: f64, rabi2: f64, phi: f64) -> Result<Self> {
        let (omega1, omega2) = resonance_frequencies(params)?;
        Self::new(omega1, omega2, rabi1, rabi2, phi)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("omega1", self.omega1), ("omega2", self.omega2)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(name, format!("carrier must be positive and finite, got {v}")));
            }
        }
        for (name, v) in [("Omega1", self.rabi1), ("Omega2", self.rabi2)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::invalid(name, format!("amplitude must be non-negative and finite, got {v}")));
            }
        }
        if !self.phi.is_finite() {
            return Err(Error::invalid("phi", "phase must be finite"));
        }
        Ok(())
    }

    /// `max(Ω₁, Ω₂) ≤ g/10`.
    pub fn rwa_valid(&self, g: f64) -> bool {
        self.rabi1.max(self.rabi2) <= g / RWA_RATIO
    }

    pub fn waveform(&self, t: f64) -> f64 {
        drive_waveform(self, t)
    }

    pub fn max_carrier(&self) -> f64 {
        self.omega1.max(self.omega2)
    }

    /// `ξ = √(Ω₁² + Ω₂²)`.
    pub fn xi(&self) -> f64 {
        self.rabi1.hypot(self.rabi2)
    }
}

/// `f(t) = Ω₁cos(ω₁t) + Ω₂cos(ω₂t + φ)`.
pub fn drive_waveform(config: &DriveConfig, t: f64) -> f64 {
    config.rabi1 * (config.omega1 * t).cos() + config.rabi2 * (config.omega2 * t + config.phi).cos()
}

fn require_resonant(params: &SystemParams) -> Result<()> {
    params.require_resonant("the two-tone drive model")
}

/// Carrier frequencies resonant with `|G⟩ → |∓⟩`: `(ω_r − g, ω_r + g)`.
pub fn resonance_frequencies(params: &SystemParams) -> Result<(f64, f64)> {
    require_resonant(params)?;
    Ok((
        eigen_energy(params, 1, Branch::Minus)?,
        eigen_energy(params, 1, Branch::Plus)?,
    ))
}

/// `(E_G, E_{1,−}, E_{1,+})`.
pub fn level_energies(params: &SystemParams) -> Result<[f64; 3]> {
    let (minus, plus) = resonance_frequencies(params)?;
    Ok([0.0, minus, plus])
}

/// Isometry from the 3-level space into the product space; columns are
/// `|G⟩, |−,1⟩, |+,1⟩`.
pub fn polariton_basis(params: &SystemParams) -> Result<CMatrix> {
    let space = params.space();
    let columns = [
        space.ground(),
        dressed_vector(params, 1, Branch::Minus)?,
        dressed_vector(params, 1, Branch::Plus)?,
    ];
    Ok(CMatrix::from_columns(&columns))
}

/// Lab-frame 3×3 Hamiltonian `diag(0, E₋, E₊) + f(t)(−|G⟩⟨−| + |G⟩⟨+| + h.c.)`.
#[derive(Debug, Clone)]
pub struct LabFrame {
    energies: [f64; 3],
    drive: DriveConfig,
}

impl LabFrame {
    pub fn new(params: &SystemParams, drive: &DriveConfig) -> Result<Self> {
        drive.validate()?;
        Ok(LabFrame {
            energies: level_energies(params)?,
            drive: *drive,
        })
    }

    pub fn energies(&self) -> [f64; 3] {
        self.energies
    }
}

impl Hamiltonian for LabFrame {
    fn dim(&self) -> usize {
        3
    }

    fn write_at(&self, t: f64, out: &mut CMatrix) {
        let f = drive_waveform(&self.drive, t);
        out.fill(Complex64::new(0.0, 0.0));
        for k in 0..3 {
            out[(k, k)] = re(self.energies[k]);
        }
        out[(G, MINUS)] = re(-f);
        out[(MINUS, G)] = re(-f);
        out[(G, PLUS)] = re(f);
        out[(PLUS, G)] = re(f);
    }

    fn max_frequency(&self) -> f64 {
        let amp = self.drive.rabi1 + self.drive.rabi2;
        self.energies[PLUS].max(self.energies[MINUS]) + 2.0 * amp
    }
}

pub fn lab_frame_hamiltonian(params: &SystemParams, config: &DriveConfig, t: f64) -> Result<CMatrix> {
    Ok(LabFrame::new(params, config)?.at(t))
}

/// `H_JC + √2 f(t) σˣ` on the whole truncated ladder.
#[derive(Debug, Clone)]
pub struct ProductSpaceLab {
    h0: CMatrix,
    coupling: CMatrix,
    drive: DriveConfig,
    bound: f64,
}

impl ProductSpaceLab {
    pub fn new(params: &SystemParams, drive: &DriveConfig) -> Result<Self> {
        require_resonant(params)?;
        drive.validate()?;
        let h0 = build_jc_hamiltonian(params)?.into_inner();
        let coupling = params.space().sigma_x() * re(SQRT_2);
        let bound = row_sum_norm(&h0) + row_sum_norm(&coupling) * (drive.rabi1 + drive.rabi2);
        Ok(ProductSpaceLab {
            h0,
            coupling,
            drive: *drive,
            bound,
        })
    }

    pub fn static_part(&self) -> &CMatrix {
        &self.h0
    }
}

impl Hamiltonian for ProductSpaceLab {
    fn dim(&self) -> usize {
        self.h0.nrows()
    }

    fn write_at(&self, t: f64, out: &mut CMatrix) {
        let f = drive_waveform(&self.drive, t);
        out.copy_from(&self.h0);
        for (o, k) in out.iter_mut().zip(self.coupling.iter()) {
            *o += k * f;
        }
    }

    fn max_frequency(&self) -> f64 {
        self.bound
    }
}

/// `e^{iH_JC t}` restricted to the 3-level space: `diag(e^{iE_k t})`.
pub fn frame_rotation(energies: &[f64; 3], t: f64) -> CMatrix {
    CMatrix::from_diagonal(&CVector::from_iterator(
        3,
        energies.iter().map(|&e| (I * e * t).exp()),
    ))
}

/// Interaction picture with respect to `H_JC`, no RWA:
/// `⟨G|H|−⟩ = −f(t)e^{−iE₋t}`, `⟨G|H|+⟩ = f(t)e^{−iE₊t}`.
#[derive(Debug, Clone)]
pub struct InteractionFrame {
    energies: [f64; 3],
    drive: DriveConfig,
}

impl InteractionFrame {
    pub fn new(params: &SystemParams, drive: &DriveConfig) -> Result<Self> {
        drive.validate()?;
        Ok(InteractionFrame {
            energies: level_energies(params)?,
            drive: *drive,
        })
    }
}

impl Hamiltonian for InteractionFrame {
    fn dim(&self) -> usize {
        3
    }

    fn write_at(&self, t: f64, out: &mut CMatrix) {
        let f = drive_waveform(&self.drive, t);
        out.fill(Complex64::new(0.0, 0.0));
        let minus = -f * (-I * self.energies[MINUS] * t).exp();
        let plus = f * (-I * self.energies[PLUS] * t).exp();
        out[(G, MINUS)] = minus;
        out[(MINUS, G)] = minus.conj();
        out[(G, PLUS)] = plus;
        out[(PLUS, G)] = plus.conj();
    }

    fn max_frequency(&self) -> f64 {
        let amp = self.drive.rabi1 + self.drive.rabi2;
        2.0 * amp + self.drive.max_carrier() + self.energies[PLUS].max(self.energies[MINUS])
    }
}

pub fn interaction_picture_hamiltonian(
    params: &SystemParams,
    config: &DriveConfig,
    t: f64,
) -> Result<CMatrix> {
    Ok(InteractionFrame::new(params, config)?.at(t))
}

/// Parameters of the V-system: `ξ = √(Ω₁²+Ω₂²)`, `tan(θ/2) = Ω₂/Ω₁`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VSystemParams {
    pub xi: f64,
    pub theta: f64,
    pub phi: f64,
}

impl VSystemParams {
    pub fn new(xi: f64, theta: f64, phi: f64) -> Result<Self> {
        if !(xi.is_finite() && xi > 0.0) {
            return Err(Error::invalid("xi", format!("must be positive and finite, got {xi}")));
        }
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::invalid("theta", format!("must lie in [0, pi], got {theta}")));
        }
        if !phi.is_finite() {
            return Err(Error::invalid("phi", "must be finite"));
        }
        Ok(VSystemParams { xi, theta, phi })
    }

    pub fn from_amplitudes(rabi1: f64, rabi2: f64, phi: f64) -> Result<Self> {
        Self::new(rabi1.hypot(rabi2), 2.0 * rabi2.atan2(rabi1), phi)
    }

    /// `(Ω₁, Ω₂) = (ξcos(θ/2), ξsin(θ/2))`.
    pub fn amplitudes(&self) -> (f64, f64) {
        let (s, c) = (self.theta / 2.0).sin_cos();
        (self.xi * c, self.xi * s)
    }
}

/// `H₁v = (ξ/2)(sin(θ/2)e^{iφ}|G⟩⟨+| − cos(θ/2)|G⟩⟨−| + h.c.)`.
pub fn v_hamiltonian(v: &VSystemParams) -> Hermitian {
    let (s, c_) = (v.theta / 2.0).sin_cos();
    let half = v.xi / 2.0;
    let mut m = CMatrix::zeros(3, 3);
    let to_plus = Complex64::from_polar(half * s, v.phi);
    m[(G, PLUS)] = to_plus;
    m[(PLUS, G)] = to_plus.conj();
    m[(G, MINUS)] = re(-half * c_);
    m[(MINUS, G)] = re(-half * c_);
    Hermitian::new(m).expect("constructed Hermitian")
}

/// Maps the convention above to the sign-free V-system
/// `(ξ/2)(cos(θ/2)|G⟩⟨−| + sin(θ/2)e^{iφ}|G⟩⟨+| + h.c.)` by `|−⟩ → −|−⟩`.
/// The map is its own inverse.
pub fn sign_free_conversion() -> CMatrix {
    CMatrix::from_diagonal(&CVector::from_vec(vec![re(1.0), re(-1.0), re(1.0)]))
}

/// Constant V-system Hamiltonian reached after both rotating-wave
/// approximations. Requires resonant carriers and `max(Ω₁,Ω₂) ≤ g/10`.
pub fn effective_v_hamiltonian(
    params: &SystemParams,
    config: &DriveConfig,
) -> Result<(Hermitian, VSystemParams)> {
    config.validate()?;
    let (w1, w2) = resonance_frequencies(params)?;
    let v = VSystemParams::from_amplitudes(config.rabi1, config.rabi2, config.phi)?;
    let window = v.xi / RESONANCE_RATIO;
    let (d1, d2) = ((config.omega1 - w1).abs(), (config.omega2 - w2).abs());
    if d1 > window || d2 > window {
        return Err(Error::PhysicsGuard(format!(
            "carriers are off resonance by ({d1:e}, {d2:e}) rad/s, beyond xi/{RESONANCE_RATIO} = {window:e}; \
             the effective V-system assumes omega1 = E(1,-) and omega2 = E(1,+)"
        )));
    }
    if !config.rwa_valid(params.g) {
        return Err(Error::PhysicsGuard(format!(
            "drive amplitudes ({:e}, {:e}) rad/s exceed g/{RWA_RATIO}; the rotating-wave reduction requires g >> (Omega1, Omega2)",
            config.rabi1, config.rabi2
        )));
    }
    Ok((v_hamiltonian(&v), v))
}

/// Bright and dark states of `H₁v` as amplitudes over `{|+⟩, |−⟩}`:
/// `|b⟩ = sin(θ/2)e^{−iφ}|+⟩ − cos(θ/2)|−⟩`, `|d⟩ = cos(θ/2)|+⟩ + sin(θ/2)e^{iφ}|−⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BrightDarkBasis {
    pub bright: [Complex64; 2],
    pub dark: [Complex64; 2],
}

impl BrightDarkBasis {
    fn embed(pair: [Complex64; 2]) -> CVector {
        let mut v = CVector::zeros(3);
        v[PLUS] = pair[0];
        v[MINUS] = pair[1];
        v
    }

    pub fn bright_vector(&self) -> CVector {
        Self::embed(self.bright)
    }

    pub fn dark_vector(&self) -> CVector {
        Self::embed(self.dark)
    }
}

pub fn bright_dark_basis(v: &VSystemParams) -> BrightDarkBasis {
    let (s, c_) = (v.theta / 2.0).sin_cos();
    BrightDarkBasis {
        bright: [Complex64::from_polar(s, -v.phi), re(-c_)],
        dark: [re(c_), Complex64::from_polar(s, v.phi)],
    }
}

/// `|G⟩`, `|−⟩`, `|+⟩` as 3-vectors.
pub fn level_vector(k: usize) -> CVector {
    let mut v = CVector::zeros(3);
    v[k] = re(1.0);
    v
}

/// `(|+⟩ + |−⟩)/√2`, the Hadamard image of `|+⟩`.
pub fn hadamard_target() -> CVector {
    let mut v = CVector::zeros(3);
    v[PLUS] = re(FRAC_1_SQRT_2);
    v[MINUS] = re(FRAC_1_SQRT_2);
    v
}

/// Phase `φ` reduced to `[0, 2π)`.
pub fn wrap_phase(phi: f64) -> f64 {
    let w = phi.rem_euclid(TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}
