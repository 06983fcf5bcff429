//! Fixed-step classical Runge-Kutta integration of linear quantum equations
//! of motion.
//!
//! The default step is derived from the fastest frequency present in the
//! generator (spectral bound plus explicit carrier frequencies), so the same
//! policy works for a 3-level drive model and the full product space.

use std::cmp::Ordering;

use num_complex::Complex64;

use super::linalg::{CMatrix, CVector, Hermitian, I};
use crate::error::{Error, Result};

/// A time-dependent Hamiltonian `t ↦ H(t)` in rad/s.
pub trait Hamiltonian: Sync {
    fn dim(&self) -> usize;

    /// Writes `H(t)` into `out`, which is `dim × dim`.
    fn write_at(&self, t: f64, out: &mut CMatrix);

    /// Upper bound on the angular frequencies in the dynamics: a bound on the
    /// spectral radius of `H(t)` plus the fastest explicit time dependence.
    fn max_frequency(&self) -> f64;

    fn at(&self, t: f64) -> CMatrix {
        let mut out = CMatrix::zeros(self.dim(), self.dim());
        self.write_at(t, &mut out);
        out
    }
}

impl Hamiltonian for Hermitian {
    fn dim(&self) -> usize {
        Hermitian::dim(self)
    }

    fn write_at(&self, _t: f64, out: &mut CMatrix) {
        out.copy_from(self.matrix());
    }

    fn max_frequency(&self) -> f64 {
        self.norm_bound()
    }
}

/// Step-size policy for the fixed-step integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepPolicy {
    /// Explicit step in seconds.
    Fixed(f64),
    /// Step such that `ω_max·dt` equals the given phase (radians).
    PhasePerStep(f64),
}

/// Default phase advance per step. RK4 accumulates a phase error of about
/// `ω_max·T·z⁴/120` for `z = ω_max·dt`; for a 50 ns lab-frame pulse at
/// 2π×8 GHz that is ~1e-8.
pub const DEFAULT_PHASE_PER_STEP: f64 = 0.005;

/// Steps resolving fewer than ~12 points per fastest period are refused.
pub const MAX_PHASE_PER_STEP: f64 = 0.5;

impl Default for StepPolicy {
    fn default() -> Self {
        StepPolicy::PhasePerStep(DEFAULT_PHASE_PER_STEP)
    }
}

impl StepPolicy {
    /// Resolves the policy to a step size for a generator with the given
    /// maximum frequency. A zero frequency yields an unbounded step.
    pub fn resolve(&self, omega_max: f64) -> Result<f64> {
        let dt = match *self {
            StepPolicy::Fixed(dt) => {
                if !(dt > 0.0 && dt.is_finite()) {
                    return Err(Error::invalid("dt", format!("must be positive, got {dt}")));
                }
                dt
            }
            StepPolicy::PhasePerStep(phase) => {
                if !(phase > 0.0 && phase.is_finite()) {
                    return Err(Error::invalid(
                        "phase_per_step",
                        format!("must be positive, got {phase}"),
                    ));
                }
                if omega_max == 0.0 {
                    return Ok(f64::INFINITY);
                }
                phase / omega_max
            }
        };
        let phase = omega_max * dt;
        if phase > MAX_PHASE_PER_STEP {
            return Err(Error::UnderResolved {
                phase,
                limit: MAX_PHASE_PER_STEP,
                omega_max,
                dt,
            });
        }
        Ok(dt)
    }

    /// The same policy with the step halved.
    pub fn halved(&self) -> Self {
        match *self {
            StepPolicy::Fixed(dt) => StepPolicy::Fixed(dt / 2.0),
            StepPolicy::PhasePerStep(p) => StepPolicy::PhasePerStep(p / 2.0),
        }
    }
}

/// Sampled solution of an equation of motion.
#[derive(Debug, Clone)]
pub struct Trajectory<S> {
    times: Vec<f64>,
    states: Vec<S>,
    /// Total number of integrator steps taken.
    pub steps: usize,
}

impl<S: OdeState> Trajectory<S> {
    pub fn new(times: Vec<f64>, states: Vec<S>) -> Result<Self> {
        if times.len() != states.len() {
            return Err(Error::InvalidTrajectory(format!(
                "{} times for {} states",
                times.len(),
                states.len()
            )));
        }
        if let Some(w) = times.windows(2).find(|w| w[1].partial_cmp(&w[0]) != Some(Ordering::Greater)) {
            return Err(Error::InvalidTrajectory(format!(
                "times must be strictly increasing ({} followed by {})",
                w[0], w[1]
            )));
        }
        if let Some(first) = states.first() {
            let shape = first.shape();
            if states.iter().any(|s| s.shape() != shape) {
                return Err(Error::InvalidTrajectory(
                    "states do not share one dimension".into(),
                ));
            }
        }
        Ok(Trajectory {
            times,
            states,
            steps: 0,
        })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[S] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<(f64, &S)> {
        self.times.last().copied().zip(self.states.last())
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &S)> {
        self.times.iter().copied().zip(self.states.iter())
    }

    pub fn map<T: OdeState>(self, f: impl FnMut(&S) -> T) -> Trajectory<T> {
        Trajectory {
            states: self.states.iter().map(f).collect(),
            times: self.times,
            steps: self.steps,
        }
    }
}

/// Vector-space operations the integrator needs from a state.
pub trait OdeState: Clone {
    fn shape(&self) -> (usize, usize);
    fn zeros_like(&self) -> Self;
    /// `self ← x + h·k`
    fn assign_step(&mut self, x: &Self, h: f64, k: &Self);
    /// `self ← self + h·k`
    fn add_scaled(&mut self, h: f64, k: &Self);
}

macro_rules! impl_ode_state {
    ($ty:ty) => {
        impl OdeState for $ty {
            fn shape(&self) -> (usize, usize) {
                (self.nrows(), self.ncols())
            }

            fn zeros_like(&self) -> Self {
                let (r, c) = self.shape_generic();
                Self::zeros_generic(r, c)
            }

            fn assign_step(&mut self, x: &Self, h: f64, k: &Self) {
                for ((out, a), b) in self.iter_mut().zip(x.iter()).zip(k.iter()) {
                    *out = a + b * h;
                }
            }

            fn add_scaled(&mut self, h: f64, k: &Self) {
                for (out, b) in self.iter_mut().zip(k.iter()) {
                    *out += b * h;
                }
            }
        }
    };
}

impl_ode_state!(CMatrix);
impl_ode_state!(CVector);

/// Classical fourth-order Runge-Kutta stepper with preallocated stages.
pub struct Rk4<S> {
    k1: S,
    k2: S,
    k3: S,
    k4: S,
    tmp: S,
}

impl<S: OdeState> Rk4<S> {
    pub fn new(template: &S) -> Self {
        Rk4 {
            k1: template.zeros_like(),
            k2: template.zeros_like(),
            k3: template.zeros_like(),
            k4: template.zeros_like(),
            tmp: template.zeros_like(),
        }
    }

    pub fn step<F>(&mut self, rhs: &mut F, t: f64, h: f64, y: &mut S)
    where
        F: FnMut(f64, &S, &mut S),
    {
        let half = 0.5 * h;
        rhs(t, y, &mut self.k1);
        self.tmp.assign_step(y, half, &self.k1);
        rhs(t + half, &self.tmp, &mut self.k2);
        self.tmp.assign_step(y, half, &self.k2);
        rhs(t + half, &self.tmp, &mut self.k3);
        self.tmp.assign_step(y, h, &self.k3);
        rhs(t + h, &self.tmp, &mut self.k4);

        y.add_scaled(h / 6.0, &self.k1);
        y.add_scaled(h / 3.0, &self.k2);
        y.add_scaled(h / 3.0, &self.k3);
        y.add_scaled(h / 6.0, &self.k4);
    }
}

/// `n` equally spaced samples covering `[t0, t1]`, endpoints exact.
pub fn sample_grid(t0: f64, t1: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2, "a sample grid needs both endpoints");
    (0..n)
        .map(|k| {
            if k == n - 1 {
                t1
            } else {
                t0 + (t1 - t0) * (k as f64) / ((n - 1) as f64)
            }
        })
        .collect()
}

fn validate_samples(sample_times: &[f64]) -> Result<()> {
    if sample_times.is_empty() {
        return Err(Error::InvalidTrajectory("no sample times".into()));
    }
    if sample_times.windows(2).any(|w| w[1].partial_cmp(&w[0]) != Some(Ordering::Greater)) {
        return Err(Error::InvalidTrajectory(
            "sample times must be strictly increasing".into(),
        ));
    }
    Ok(())
}

/// Integrates `dy/dt = rhs(t, y)` from `sample_times[0]`, recording the state
/// at every sample time. Each sample interval is split into the smallest
/// number of equal steps not exceeding `dt_max`.
///
/// `on_sample` sees every recorded state and may abort the run.
pub fn integrate_with<S, F, O>(
    mut rhs: F,
    y0: S,
    sample_times: &[f64],
    dt_max: f64,
    mut on_sample: O,
) -> Result<Trajectory<S>>
where
    S: OdeState,
    F: FnMut(f64, &S, &mut S),
    O: FnMut(f64, &S, f64) -> Result<()>,
{
    validate_samples(sample_times)?;
    let mut stepper = Rk4::new(&y0);
    let mut y = y0;
    let mut states = Vec::with_capacity(sample_times.len());
    let mut steps = 0usize;

    on_sample(sample_times[0], &y, 0.0)?;
    states.push(y.clone());
    for w in sample_times.windows(2) {
        let span = w[1] - w[0];
        let n = if dt_max.is_finite() {
            ((span / dt_max) * (1.0 - 1e-12)).ceil().max(1.0) as usize
        } else {
            1
        };
        let h = span / n as f64;
        for k in 0..n {
            let t = w[0] + span * (k as f64) / (n as f64);
            stepper.step(&mut rhs, t, h, &mut y);
        }
        steps += n;
        on_sample(w[1], &y, h)?;
        states.push(y.clone());
    }
    let mut trajectory = Trajectory::new(sample_times.to_vec(), states)?;
    trajectory.steps = steps;
    Ok(trajectory)
}

/// [`integrate_with`] without a sample observer.
pub fn integrate<S, F>(rhs: F, y0: S, sample_times: &[f64], dt_max: f64) -> Result<Trajectory<S>>
where
    S: OdeState,
    F: FnMut(f64, &S, &mut S),
{
    integrate_with(rhs, y0, sample_times, dt_max, |_, _, _| Ok(()))
}

/// Tolerance on `| |ψ₀| - 1 |` accepted as normalized input.
pub const NORM_TOLERANCE: f64 = 1e-10;

/// Integrates `i dψ/dt = H(t) ψ`.
pub fn integrate_schrodinger<H: Hamiltonian + ?Sized>(
    hamiltonian: &H,
    psi0: &CVector,
    sample_times: &[f64],
    policy: StepPolicy,
) -> Result<Trajectory<CVector>> {
    let dim = hamiltonian.dim();
    if psi0.len() != dim {
        return Err(Error::DimensionMismatch(format!(
            "state has {} components, Hamiltonian is {dim}x{dim}",
            psi0.len()
        )));
    }
    let norm = psi0.norm();
    if (norm - 1.0).abs() > NORM_TOLERANCE {
        return Err(Error::NotNormalized { norm });
    }
    let dt = policy.resolve(hamiltonian.max_frequency())?;
    let mut h = CMatrix::zeros(dim, dim);
    let minus_i = -I;
    let zero = Complex64::new(0.0, 0.0);
    let rhs = move |t: f64, y: &CVector, dy: &mut CVector| {
        hamiltonian.write_at(t, &mut h);
        dy.gemv(minus_i, &h, y, zero);
    };
    integrate(rhs, psi0.clone(), sample_times, dt)
}
