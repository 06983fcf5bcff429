//! Jaynes-Cummings Hamiltonian, dressed states and transition frequencies.
//!
//! Product basis ordering is `|q⟩ ⊗ |n⟩_r` with the qubit index major:
//! index `q·(n_max+1) + n`. The dressed doublet of the `n`-excitation manifold
//! is
//!
//! ```text
//! |−,n⟩ = cos α_n |0,n⟩ − sin α_n |1,n−1⟩
//! |+,n⟩ = sin α_n |0,n⟩ + cos α_n |1,n−1⟩
//! E_{n,±} = n ω_r + (δ ± √(δ² + 4 n g²)) / 2
//! ```
//!
//! with `α_n = atan2(2g√n, δ)/2`. For these expressions to diagonalize
//! `ω_a|1⟩⟨1| + ω_r a†a + g(aσ⁺ + a†σ⁻)` the detuning must be taken as
//! `δ = ω_a − ω_r`; see [`SystemParams::detuning`].

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::linalg::{re, CMatrix, CVector, Hermitian};
use crate::units::{hz_to_angular, GHZ};

/// Qubit-cavity constants in rad/s.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    pub omega_a: f64,
    pub omega_r: f64,
    pub g: f64,
    pub n_max: usize,
}

pub const DEFAULT_N_MAX: usize = 5;

impl SystemParams {
    pub fn new(omega_a: f64, omega_r: f64, g: f64, n_max: usize) -> Result<Self> {
        let p = SystemParams {
            omega_a,
            omega_r,
            g,
            n_max,
        };
        p.validate()?;
        Ok(p)
    }

    /// Resonant system: `ω_a = ω_r`.
    pub fn resonant(omega_r: f64, g: f64) -> Result<Self> {
        Self::new(omega_r, omega_r, g, DEFAULT_N_MAX)
    }

    /// ω_r = 2π × 8 GHz, g = ω_r/20, δ = 0, five photon rungs.
    pub fn reference() -> Self {
        let omega_r = hz_to_angular(8.0 * GHZ);
        SystemParams {
            omega_a: omega_r,
            omega_r,
            g: omega_r / 20.0,
            n_max: DEFAULT_N_MAX,
        }
    }

    pub fn with_n_max(self, n_max: usize) -> Result<Self> {
        Self::new(self.omega_a, self.omega_r, self.g, n_max)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.omega_a, self.omega_r, self.g]
            .iter()
            .all(|x| x.is_finite());
        if !finite {
            return Err(Error::invalid("system", "frequencies must be finite"));
        }
        if self.omega_a <= 0.0 {
            return Err(Error::invalid("omega_a", "must be positive"));
        }
        if self.omega_r <= 0.0 {
            return Err(Error::invalid("omega_r", "must be positive"));
        }
        if self.g < 0.0 {
            return Err(Error::invalid("g", "must be non-negative"));
        }
        if self.g >= self.omega_r {
            return Err(Error::invalid("g", "coupling must be below the cavity frequency"));
        }
        if self.n_max < 2 {
            return Err(Error::invalid(
                "n_max",
                format!(
                    "photon truncation must be at least 2 (second-order noise terms reach n = 2), got {}",
                    self.n_max
                ),
            ));
        }
        Ok(())
    }

    /// Qubit-cavity detuning δ = ω_a − ω_r.
    ///
    /// This is the sign for which the dressed-state formulas in the module
    /// docs are eigenpairs of the Jaynes-Cummings Hamiltonian.
    pub fn detuning(&self) -> f64 {
        self.omega_a - self.omega_r
    }

    /// True when `|δ|` is zero up to rounding relative to `ω_r`.
    pub fn is_resonant(&self) -> bool {
        self.detuning().abs() <= 1e-12 * self.omega_r
    }

    pub fn space(&self) -> ProductSpace {
        ProductSpace { n_max: self.n_max }
    }

    pub(crate) fn require_resonant(&self, what: &str) -> Result<()> {
        if self.is_resonant() {
            Ok(())
        } else {
            Err(Error::PhysicsGuard(format!(
                "{what} assumes a resonant qubit and cavity (delta = 0), got delta = {:e} rad/s",
                self.detuning()
            )))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Minus,
    Plus,
}

impl Branch {
    pub const BOTH: [Branch; 2] = [Branch::Minus, Branch::Plus];

    pub fn sign(self) -> f64 {
        match self {
            Branch::Minus => -1.0,
            Branch::Plus => 1.0,
        }
    }

    pub fn other(self) -> Branch {
        match self {
            Branch::Minus => Branch::Plus,
            Branch::Plus => Branch::Minus,
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Minus => "minus",
            Branch::Plus => "plus",
        })
    }
}

/// One rung of the dressed ladder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DressedLevel {
    pub n: usize,
    pub branch: Branch,
    /// rad/s, relative to `E_G = 0`.
    pub energy: f64,
    /// α_n in (0, π/2) for g > 0.
    pub mixing_angle: f64,
}

/// Amplitudes of `|±,n⟩` on `|0,n⟩` and `|1,n−1⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DressedState {
    pub n: usize,
    pub branch: Branch,
    pub qubit_ground: f64,
    pub qubit_excited: f64,
}

impl DressedState {
    /// Embeds the state in the product space of `params`.
    pub fn to_vector(&self, space: ProductSpace) -> CVector {
        let mut v = CVector::zeros(space.dim());
        v[space.index(0, self.n)] = re(self.qubit_ground);
        v[space.index(1, self.n - 1)] = re(self.qubit_excited);
        v
    }
}

/// The four transition families between rungs `n` and `n+1`, in rad/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionSet {
    pub n: usize,
    /// E_{n+1,−} − E_{n,−}
    pub minus: f64,
    /// E_{n+1,+} − E_{n,+}
    pub plus: f64,
    /// E_{n+1,+} − E_{n,−}
    pub up: f64,
    /// E_{n+1,−} − E_{n,+}
    pub down: f64,
}

/// Truncated qubit ⊗ cavity Hilbert space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProductSpace {
    pub n_max: usize,
}

impl ProductSpace {
    pub fn dim(&self) -> usize {
        2 * (self.n_max + 1)
    }

    pub fn index(&self, qubit: usize, photons: usize) -> usize {
        debug_assert!(qubit < 2 && photons <= self.n_max);
        qubit * (self.n_max + 1) + photons
    }

    pub fn basis_vector(&self, qubit: usize, photons: usize) -> CVector {
        let mut v = CVector::zeros(self.dim());
        v[self.index(qubit, photons)] = re(1.0);
        v
    }

    /// `|G⟩ = |0,0⟩`.
    pub fn ground(&self) -> CVector {
        self.basis_vector(0, 0)
    }

    /// Cavity annihilation operator `a`.
    pub fn annihilation(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.dim(), self.dim());
        for q in 0..2 {
            for n in 1..=self.n_max {
                m[(self.index(q, n - 1), self.index(q, n))] = re((n as f64).sqrt());
            }
        }
        m
    }

    /// `σ⁻ = |0⟩⟨1|` on the qubit.
    pub fn sigma_minus(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.dim(), self.dim());
        for n in 0..=self.n_max {
            m[(self.index(0, n), self.index(1, n))] = re(1.0);
        }
        m
    }

    pub fn sigma_x(&self) -> CMatrix {
        let sm = self.sigma_minus();
        &sm + sm.adjoint()
    }

    /// `σᶻ = |1⟩⟨1| − |0⟩⟨0|`.
    pub fn sigma_z(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.dim(), self.dim());
        for n in 0..=self.n_max {
            m[(self.index(0, n), self.index(0, n))] = re(-1.0);
            m[(self.index(1, n), self.index(1, n))] = re(1.0);
        }
        m
    }
}

/// `H_JC = ω_a|1⟩⟨1| + ω_r a†a + g(aσ⁺ + a†σ⁻)` on the truncated product space.
pub fn build_jc_hamiltonian(params: &SystemParams) -> Result<Hermitian> {
    params.validate()?;
    let space = params.space();
    let mut h = CMatrix::zeros(space.dim(), space.dim());
    for q in 0..2 {
        for n in 0..=params.n_max {
            let i = space.index(q, n);
            h[(i, i)] = re(params.omega_a * q as f64 + params.omega_r * n as f64);
        }
    }
    // aσ⁺ |0,n⟩ = √n |1,n−1⟩
    for n in 1..=params.n_max {
        let coupling = re(params.g * (n as f64).sqrt());
        let (i, j) = (space.index(1, n - 1), space.index(0, n));
        h[(i, j)] = coupling;
        h[(j, i)] = coupling;
    }
    Hermitian::new(h)
}

fn require_rung(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::invalid(
            "n",
            "n = 0 is the ground state |G> = |0,0>, not a dressed doublet",
        ));
    }
    Ok(())
}

fn root(params: &SystemParams, n: usize) -> f64 {
    let d = params.detuning();
    (d * d + 4.0 * n as f64 * params.g * params.g).sqrt()
}

/// α_n = atan2(2g√n, δ)/2.
pub fn mixing_angle(params: &SystemParams, n: usize) -> f64 {
    0.5 * (2.0 * params.g * (n as f64).sqrt()).atan2(params.detuning())
}

/// `E_{n,±} = nω_r + (δ ± √(δ² + 4ng²))/2`.
pub fn eigen_energy(params: &SystemParams, n: usize, branch: Branch) -> Result<f64> {
    require_rung(n)?;
    Ok(n as f64 * params.omega_r + 0.5 * (params.detuning() + branch.sign() * root(params, n)))
}

pub fn dressed_level(params: &SystemParams, n: usize, branch: Branch) -> Result<DressedLevel> {
    Ok(DressedLevel {
        n,
        branch,
        energy: eigen_energy(params, n, branch)?,
        mixing_angle: mixing_angle(params, n),
    })
}

pub fn dressed_state(params: &SystemParams, n: usize, branch: Branch) -> Result<DressedState> {
    require_rung(n)?;
    if n > params.n_max {
        return Err(Error::invalid(
            "n",
            format!("rung {n} exceeds the truncation n_max = {}", params.n_max),
        ));
    }
    let (s, c) = mixing_angle(params, n).sin_cos();
    let (qubit_ground, qubit_excited) = match branch {
        Branch::Minus => (c, -s),
        Branch::Plus => (s, c),
    };
    Ok(DressedState {
        n,
        branch,
        qubit_ground,
        qubit_excited,
    })
}

/// `|±,n⟩` as a product-space vector.
pub fn dressed_vector(params: &SystemParams, n: usize, branch: Branch) -> Result<CVector> {
    Ok(dressed_state(params, n, branch)?.to_vector(params.space()))
}

/// Transition frequencies between rungs `n` and `n+1`:
///
/// ```text
/// ω_{n,±} = ω_r ± (R_{n+1} − R_n)/2
/// ω_{n,↗} = ω_r + (R_{n+1} + R_n)/2
/// ω_{n,↘} = ω_r − (R_{n+1} + R_n)/2,   R_n = √(δ² + 4ng²)
/// ```
///
/// For `n ≥ 1` each equals the corresponding difference of [`eigen_energy`]
/// values. At `n = 0` the lower rung is `|G⟩` with `E_G = 0`, and the
/// identities with `E_{1,±} − E_G` hold for `δ ≥ 0`.
pub fn transition_frequencies(params: &SystemParams, n: usize) -> Result<TransitionSet> {
    if n + 1 > params.n_max {
        return Err(Error::invalid(
            "n",
            format!("rung n+1 = {} exceeds n_max = {}", n + 1, params.n_max),
        ));
    }
    let (lower, upper) = (root(params, n), root(params, n + 1));
    let wr = params.omega_r;
    Ok(TransitionSet {
        n,
        minus: wr - 0.5 * (upper - lower),
        plus: wr + 0.5 * (upper - lower),
        up: wr + 0.5 * (upper + lower),
        down: wr - 0.5 * (upper + lower),
    })
}

/// Dressed levels for `n = 1..=n_max`, minus branch first within each rung.
pub fn spectrum_table(params: &SystemParams) -> Result<Vec<DressedLevel>> {
    params.validate()?;
    let mut rows = Vec::with_capacity(2 * params.n_max);
    for n in 1..=params.n_max {
        for branch in Branch::BOTH {
            rows.push(dressed_level(params, n, branch)?);
        }
    }
    Ok(rows)
}

/// Every eigenvalue of the truncated [`build_jc_hamiltonian`] matrix in closed
/// form, ascending: `E_G`, the dressed doublets, and the uncoupled top state
/// `|1,n_max⟩` whose photon partner lies outside the truncation.
pub fn closed_form_spectrum(params: &SystemParams) -> Result<Vec<f64>> {
    let mut values = vec![0.0];
    for level in spectrum_table(params)? {
        values.push(level.energy);
    }
    values.push(params.omega_a + params.omega_r * params.n_max as f64);
    values.sort_by(|a, b| a.partial_cmp(b).expect("finite energies"));
    Ok(values)
}
