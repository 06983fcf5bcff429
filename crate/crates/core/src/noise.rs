//! Energy shifts of the polariton doublet under static low-frequency noise.
//!
//! A static perturbation `V = A σ` on the bare qubit (σ = σˣ for transverse
//! noise, σᶻ for longitudinal) shifts `|±,1⟩`. Four independent routes are
//! provided:
//!
//! * [`shift_series`]: second-order Rayleigh-Schrödinger sum over the dressed
//!   ladder,
//! * [`shift_closed_form`]: the resonant closed form in ω_r and g,
//! * [`shift_approx`]: the leading small-coupling term `∓A²g/ω_a²`,
//! * [`shift_oracle`]: exact diagonalization of `H_JC + V`.
//!
//! For transverse noise the first-order term vanishes and the two shifts are
//! nearly opposite, so the qubit splitting moves by only `2A²g/ω_a²`.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::linalg::{hermitian_eig, inner, matrix_element, re, CMatrix, CVector, Hermitian};
use crate::spectrum::{
    build_jc_hamiltonian, dressed_vector, eigen_energy, Branch, SystemParams,
};
use crate::units::{hz_to_angular, MHZ};

/// Minimum squared overlap accepted when matching perturbed eigenvectors to
/// the unperturbed doublet.
pub const OVERLAP_THRESHOLD: f64 = 0.9;

/// Truncation needed for the oracle: fourth-order paths reach `n = 4`.
pub const ORACLE_MIN_N_MAX: usize = 4;

/// Default amplitude sweep, `A/2π` in Hz.
pub const DEFAULT_SWEEP_HZ: [f64; 5] = [1.0 * MHZ, 2.0 * MHZ, 5.0 * MHZ, 10.0 * MHZ, 20.0 * MHZ];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseCoupling {
    /// `A σˣ`
    Transverse,
    /// `A σᶻ`
    Longitudinal,
}

/// A static perturbation on the bare qubit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    /// rad/s
    pub amplitude: f64,
    pub coupling: NoiseCoupling,
}

impl NoiseSpec {
    pub fn new(amplitude: f64, coupling: NoiseCoupling) -> Result<Self> {
        if !(amplitude >= 0.0 && amplitude.is_finite()) {
            return Err(Error::invalid(
                "a_x",
                format!("noise amplitude must be finite and non-negative, got {amplitude}"),
            ));
        }
        Ok(NoiseSpec {
            amplitude,
            coupling,
        })
    }

    pub fn transverse(amplitude: f64) -> Result<Self> {
        Self::new(amplitude, NoiseCoupling::Transverse)
    }

    pub fn longitudinal(amplitude: f64) -> Result<Self> {
        Self::new(amplitude, NoiseCoupling::Longitudinal)
    }

    /// `A < g/10`.
    pub fn is_perturbative(&self, params: &SystemParams) -> bool {
        self.amplitude < params.g / 10.0
    }

    /// `A σ` on the product space of `params`.
    pub fn operator(&self, params: &SystemParams) -> CMatrix {
        let space = params.space();
        let sigma = match self.coupling {
            NoiseCoupling::Transverse => space.sigma_x(),
            NoiseCoupling::Longitudinal => space.sigma_z(),
        };
        sigma * re(self.amplitude)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShiftMethod {
    Series,
    ClosedForm,
    Approx,
    Oracle,
}

impl fmt::Display for ShiftMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ShiftMethod::Series => "series",
            ShiftMethod::ClosedForm => "closed_form",
            ShiftMethod::Approx => "approx",
            ShiftMethod::Oracle => "oracle",
        })
    }
}

/// Doublet shifts for one noise amplitude and one method, in rad/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftReport {
    pub noise: NoiseSpec,
    pub method: ShiftMethod,
    pub shift_minus: f64,
    pub shift_plus: f64,
    /// `|δE₊ − δE₋|`
    pub splitting_correction: f64,
}

impl ShiftReport {
    fn new(noise: NoiseSpec, method: ShiftMethod, shift_minus: f64, shift_plus: f64) -> Self {
        ShiftReport {
            noise,
            method,
            shift_minus,
            shift_plus,
            splitting_correction: (shift_plus - shift_minus).abs(),
        }
    }
}

/// Second-order perturbative shift of `|branch,1⟩`.
///
/// The first-order term `⟨±,1|V|±,1⟩` is included; it vanishes for σˣ but not
/// for σᶻ off resonance. Intermediate states are `|G⟩` and the doublets of
/// rungs 1 and 2, the only states `σˣ` or `σᶻ` connect to rung 1.
pub fn shift_series(params: &SystemParams, noise: &NoiseSpec, branch: Branch) -> Result<f64> {
    params.validate()?;
    let v = noise.operator(params);
    let target = dressed_vector(params, 1, branch)?;
    let e_target = eigen_energy(params, 1, branch)?;

    let first_order = matrix_element(&target, &v, &target).re;

    let mut intermediates: Vec<(CVector, f64)> = vec![(params.space().ground(), 0.0)];
    for n in 1..=2 {
        for b in Branch::BOTH {
            if n == 1 && b == branch {
                continue;
            }
            intermediates.push((dressed_vector(params, n, b)?, eigen_energy(params, n, b)?));
        }
    }

    let mut second_order = 0.0;
    for (state, energy) in &intermediates {
        let element = matrix_element(state, &v, &target).norm_sqr();
        if element == 0.0 {
            continue;
        }
        let gap = e_target - energy;
        if gap.abs() <= 1e-12 * params.omega_r {
            return Err(Error::PhysicsGuard(
                "degenerate intermediate level: non-degenerate perturbation theory does not apply"
                    .into(),
            ));
        }
        second_order += element / gap;
    }
    Ok(first_order + second_order)
}

/// Resonant closed form of the transverse-noise shift:
///
/// ```text
/// δE₋ = (A²/2)[1/(ω_r − g) − 1/(ω_r + g − 2g²/(ω_r + g))]
/// δE₊ = (A²/2)[1/(ω_r + g) − 1/(ω_r − g − 2g²/(ω_r − g))]
/// ```
pub fn shift_closed_form(params: &SystemParams, noise: &NoiseSpec, branch: Branch) -> Result<f64> {
    if !params.is_resonant() {
        return Err(Error::PhysicsGuard(format!(
            "the closed-form shift holds only at delta = 0 (got delta = {:e} rad/s); use shift_series",
            params.detuning()
        )));
    }
    if noise.coupling != NoiseCoupling::Transverse {
        return Err(Error::invalid(
            "coupling",
            "no closed form exists for longitudinal noise; use shift_series or shift_oracle",
        ));
    }
    let wr = params.omega_r;
    let g = branch.sign() * -params.g;
    let a2 = noise.amplitude * noise.amplitude;
    Ok(0.5 * a2 * (1.0 / (wr - g) - 1.0 / (wr + g - 2.0 * g * g / (wr + g))))
}

/// Leading-order small-coupling shift `δE_± ≈ ∓A²g/ω_a²`.
pub fn shift_approx(params: &SystemParams, noise: &NoiseSpec, branch: Branch) -> f64 {
    -branch.sign() * noise.amplitude * noise.amplitude * params.g / (params.omega_a * params.omega_a)
}

/// Exact shifts `(δE₋, δE₊)` from diagonalizing `H_JC + V`.
///
/// Perturbed eigenstates are matched to `|±,1⟩` by maximal overlap, and each
/// shift is evaluated as the Rayleigh quotient of `H_JC + V − E_{1,±}` so it
/// does not suffer cancellation against the much larger absolute energy.
pub fn shift_oracle(params: &SystemParams, noise: &NoiseSpec) -> Result<(f64, f64)> {
    params.validate()?;
    if params.n_max < ORACLE_MIN_N_MAX {
        return Err(Error::invalid(
            "n_max",
            format!(
                "the diagonalization oracle needs n_max >= {ORACLE_MIN_N_MAX} to bound truncation error, got {}",
                params.n_max
            ),
        ));
    }
    let h0 = build_jc_hamiltonian(params)?;
    let full = Hermitian::new(h0.matrix() + noise.operator(params))?;
    let eig = hermitian_eig(&full);

    let mut taken = Vec::with_capacity(2);
    let mut shifts = [0.0; 2];
    for (slot, branch) in Branch::BOTH.into_iter().enumerate() {
        let target = dressed_vector(params, 1, branch)?;
        let (index, overlap) = (0..eig.values.len())
            .map(|k| (k, inner(&eig.vector(k), &target).norm_sqr()))
            .max_by(|a, b| a.1.partial_cmp(&b.1).expect("finite overlaps"))
            .expect("non-empty spectrum");
        if overlap < OVERLAP_THRESHOLD || taken.contains(&index) {
            return Err(Error::AmbiguousOverlap {
                overlap,
                threshold: OVERLAP_THRESHOLD,
            });
        }
        taken.push(index);

        let e_ref = eigen_energy(params, 1, branch)?;
        let shifted = full.matrix() - CMatrix::identity(full.dim(), full.dim()) * re(e_ref);
        let v = eig.vector(index);
        shifts[slot] = matrix_element(&v, &shifted, &v).re / v.norm_squared();
    }
    Ok((shifts[0], shifts[1]))
}

/// Shifts for both branches by one method.
pub fn shift_report(params: &SystemParams, noise: &NoiseSpec, method: ShiftMethod) -> Result<ShiftReport> {
    let (minus, plus) = match method {
        ShiftMethod::Series => (
            shift_series(params, noise, Branch::Minus)?,
            shift_series(params, noise, Branch::Plus)?,
        ),
        ShiftMethod::ClosedForm => (
            shift_closed_form(params, noise, Branch::Minus)?,
            shift_closed_form(params, noise, Branch::Plus)?,
        ),
        ShiftMethod::Approx => {
            if noise.coupling != NoiseCoupling::Transverse {
                return Err(Error::invalid(
                    "coupling",
                    "the small-coupling approximation covers transverse noise only",
                ));
            }
            (
                shift_approx(params, noise, Branch::Minus),
                shift_approx(params, noise, Branch::Plus),
            )
        }
        ShiftMethod::Oracle => shift_oracle(params, noise)?,
    };
    Ok(ShiftReport::new(*noise, method, minus, plus))
}

/// Methods that apply to a given system and coupling.
pub fn applicable_methods(params: &SystemParams, coupling: NoiseCoupling) -> Vec<ShiftMethod> {
    let mut methods = vec![ShiftMethod::Series];
    if coupling == NoiseCoupling::Transverse {
        if params.is_resonant() {
            methods.push(ShiftMethod::ClosedForm);
        }
        methods.push(ShiftMethod::Approx);
    }
    if params.n_max >= ORACLE_MIN_N_MAX {
        methods.push(ShiftMethod::Oracle);
    }
    methods
}

/// Evaluates every applicable method over an amplitude sweep (rad/s).
/// Amplitudes are processed in parallel; rows come back ordered by amplitude,
/// then method.
pub fn noise_scan(
    params: &SystemParams,
    amplitudes: &[f64],
    coupling: NoiseCoupling,
) -> Result<Vec<ShiftReport>> {
    let methods = applicable_methods(params, coupling);
    let per_amplitude: Vec<Result<Vec<ShiftReport>>> = amplitudes
        .par_iter()
        .map(|&a| {
            let noise = NoiseSpec::new(a, coupling)?;
            methods
                .iter()
                .map(|&m| shift_report(params, &noise, m))
                .collect()
        })
        .collect();
    let mut rows = Vec::with_capacity(amplitudes.len() * methods.len());
    for r in per_amplitude {
        rows.extend(r?);
    }
    Ok(rows)
}

/// Default sweep amplitudes in rad/s.
pub fn default_sweep() -> Vec<f64> {
    DEFAULT_SWEEP_HZ.iter().map(|&hz| hz_to_angular(hz)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::transition_frequencies;
    use crate::units::{angular_to_hz, GHZ, KHZ};

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    fn reference_noise() -> NoiseSpec {
        NoiseSpec::transverse(hz_to_angular(10.0 * MHZ)).unwrap()
    }

    /// The resonant shift written with transition frequencies as denominators:
    /// δE₋ = A²(1/(2ω_{0,−}) − 1/(4ω_{1,−}) − 1/(4ω_{1,↗})),
    /// δE₊ = A²(1/(2ω_{0,↗}) − 1/(4ω_{1,+}) − 1/(4ω_{1,↘})).
    fn transition_form(params: &SystemParams, a: f64, branch: Branch) -> f64 {
        let t0 = transition_frequencies(params, 0).unwrap();
        let t1 = transition_frequencies(params, 1).unwrap();
        let a2 = a * a;
        match branch {
            Branch::Minus => a2 * (0.5 / t0.minus - 0.25 / t1.minus - 0.25 / t1.up),
            Branch::Plus => a2 * (0.5 / t0.up - 0.25 / t1.plus - 0.25 / t1.down),
        }
    }

    #[test]
    fn zero_amplitude_gives_zero_shift() {
        let p = SystemParams::reference();
        let quiet = NoiseSpec::transverse(0.0).unwrap();
        for b in Branch::BOTH {
            assert_eq!(shift_series(&p, &quiet, b).unwrap(), 0.0);
            assert_eq!(shift_approx(&p, &quiet, b), 0.0);
        }
        let (m, pl) = shift_oracle(&p, &quiet).unwrap();
        let floor = 1e-15 * p.omega_r;
        assert!(m.abs() < floor && pl.abs() < floor, "{m} {pl}");
    }

    #[test]
    fn series_reduces_to_transition_denominators() {
        let p = SystemParams::reference();
        let noise = reference_noise();
        for b in Branch::BOTH {
            let series = shift_series(&p, &noise, b).unwrap();
            let expected = transition_form(&p, noise.amplitude, b);
            assert!(rel(series, expected) < 1e-12, "{b}: {series} vs {expected}");
        }
    }

    #[test]
    fn series_matches_closed_form_on_reference() {
        let p = SystemParams::reference();
        let noise = reference_noise();
        for b in Branch::BOTH {
            let s = shift_series(&p, &noise, b).unwrap();
            let c = shift_closed_form(&p, &noise, b).unwrap();
            assert!(rel(s, c) < 1e-12);
        }
    }

    #[test]
    fn closed_form_signs_and_magnitude() {
        let p = SystemParams::reference();
        let noise = reference_noise();
        let minus = shift_closed_form(&p, &noise, Branch::Minus).unwrap();
        let plus = shift_closed_form(&p, &noise, Branch::Plus).unwrap();
        assert!(minus > 0.0 && plus < 0.0);
        // Independent evaluation in GHz units: ω_r = 8, g = 0.4, A = 0.01 (all ×2π).
        let (wr, g, a) = (8.0, 0.4, 0.01);
        let m = 0.5 * a * a * (1.0 / (wr - g) - 1.0 / (wr + g - 2.0 * g * g / (wr + g)));
        let pl = 0.5 * a * a * (1.0 / (wr + g) - 1.0 / (wr - g - 2.0 * g * g / (wr - g)));
        assert!(rel(angular_to_hz(minus), m * GHZ) < 1e-12);
        assert!(rel(angular_to_hz(plus), pl * GHZ) < 1e-12);
    }

    #[test]
    fn closed_form_mirror_symmetry() {
        // δE₊(g) = δE₋(−g): evaluate the minus expression with g → −g by hand.
        let p = SystemParams::reference();
        let noise = reference_noise();
        let (wr, g, a) = (p.omega_r, -p.g, noise.amplitude);
        let minus_at_neg_g = 0.5 * a * a * (1.0 / (wr - g) - 1.0 / (wr + g - 2.0 * g * g / (wr + g)));
        let plus = shift_closed_form(&p, &noise, Branch::Plus).unwrap();
        assert!(rel(plus, minus_at_neg_g) < 1e-15);
    }

    #[test]
    fn closed_form_vanishes_as_coupling_vanishes() {
        let noise = reference_noise();
        let mut last = f64::INFINITY;
        let mut p = SystemParams::reference();
        for g_ratio in [1e-2, 1e-4, 1e-6] {
            p = SystemParams::resonant(1.0e10, 1.0e10 * g_ratio).unwrap();
            let s = shift_closed_form(&p, &noise, Branch::Minus).unwrap().abs();
            assert!(s < last);
            last = s;
        }
        // linear in g at the bottom of the sweep
        let leading = noise.amplitude.powi(2) * p.g / p.omega_r.powi(2);
        assert!(rel(last, leading) < 1e-4);
    }

    #[test]
    fn closed_form_rejects_detuning_and_longitudinal() {
        let detuned = SystemParams::new(7.9e9, 8.0e9, 4e8, 5).unwrap();
        assert!(matches!(
            shift_closed_form(&detuned, &reference_noise(), Branch::Minus),
            Err(Error::PhysicsGuard(_))
        ));
        let z = NoiseSpec::longitudinal(1e6).unwrap();
        assert!(shift_closed_form(&SystemParams::reference(), &z, Branch::Plus).is_err());
    }

    #[test]
    fn approx_reference_magnitude() {
        // A = 2π×10 MHz, g = 2π×0.4 GHz, ω_a = 2π×8 GHz → |δE| = 2π × 0.625 kHz
        let p = SystemParams::reference();
        let noise = reference_noise();
        let minus = shift_approx(&p, &noise, Branch::Minus);
        let plus = shift_approx(&p, &noise, Branch::Plus);
        assert!(rel(angular_to_hz(minus), 0.625 * KHZ) < 1e-12);
        assert!(rel(angular_to_hz(plus), -0.625 * KHZ) < 1e-12);
        let report = shift_report(&p, &noise, ShiftMethod::Approx).unwrap();
        let expected = 2.0 * noise.amplitude.powi(2) * p.g / p.omega_a.powi(2);
        assert!(rel(report.splitting_correction, expected) < 1e-12);
        // Agreement with the closed form to O(g/ω_r).
        let c = shift_closed_form(&p, &noise, Branch::Minus).unwrap();
        assert!(rel(minus, c) < 3.0 * p.g / p.omega_r);
    }

    #[test]
    fn approx_converges_as_coupling_shrinks() {
        let noise = NoiseSpec::transverse(hz_to_angular(1.0 * MHZ)).unwrap();
        let wr = hz_to_angular(8.0 * GHZ);
        let mut errors = vec![];
        for ratio in [0.05, 0.02, 0.01] {
            let p = SystemParams::resonant(wr, ratio * wr).unwrap();
            for b in Branch::BOTH {
                let e = rel(shift_approx(&p, &noise, b), shift_closed_form(&p, &noise, b).unwrap());
                assert!(e < 2.0 * ratio);
                if b == Branch::Minus {
                    errors.push(e);
                }
            }
        }
        assert!(errors.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn first_order_and_intra_doublet_elements_vanish() {
        for p in [SystemParams::reference(), SystemParams::new(8.3, 8.0, 0.4, 3).unwrap()] {
            let sx = p.space().sigma_x();
            let m = dressed_vector(&p, 1, Branch::Minus).unwrap();
            let pl = dressed_vector(&p, 1, Branch::Plus).unwrap();
            assert_eq!(matrix_element(&m, &sx, &m).norm(), 0.0);
            assert_eq!(matrix_element(&pl, &sx, &pl).norm(), 0.0);
            assert_eq!(matrix_element(&pl, &sx, &m).norm(), 0.0);
        }
    }

    #[test]
    fn transverse_elements_vanish_beyond_second_rung() {
        let p = SystemParams::reference();
        let sx = p.space().sigma_x();
        for b in Branch::BOTH {
            let t = dressed_vector(&p, 1, b).unwrap();
            for n in 3..=p.n_max {
                for a in Branch::BOTH {
                    let k = dressed_vector(&p, n, a).unwrap();
                    assert_eq!(matrix_element(&k, &sx, &t).norm(), 0.0);
                }
            }
        }
    }

    #[test]
    fn oracle_rejects_short_truncation_and_large_noise() {
        let p = SystemParams::reference().with_n_max(3).unwrap();
        assert!(matches!(shift_oracle(&p, &reference_noise()), Err(Error::InvalidParameter { .. })));
        let p = SystemParams::reference();
        let huge = NoiseSpec::transverse(50.0 * p.g).unwrap();
        assert!(matches!(shift_oracle(&p, &huge), Err(Error::AmbiguousOverlap { .. })));
    }

    #[test]
    fn oracle_agrees_with_series_at_second_order() {
        let p = SystemParams::reference();
        let noise = reference_noise();
        let (m, pl) = shift_oracle(&p, &noise).unwrap();
        let sm = shift_series(&p, &noise, Branch::Minus).unwrap();
        let sp = shift_series(&p, &noise, Branch::Plus).unwrap();
        // residual is O(A⁴/g³), far below the O(A²/ω) shift
        let bound = 10.0 * noise.amplitude.powi(4) / p.g.powi(3);
        assert!((m - sm).abs() < bound, "{} vs {bound}", (m - sm).abs());
        assert!((pl - sp).abs() < bound);
    }

    #[test]
    fn splitting_scales_quadratically_and_linearly_in_g() {
        let p = SystemParams::reference();
        let s = |a: f64, p: &SystemParams| {
            shift_report(p, &NoiseSpec::transverse(a).unwrap(), ShiftMethod::Series)
                .unwrap()
                .splitting_correction
        };
        let (a1, a2) = (hz_to_angular(1.0 * MHZ), hz_to_angular(10.0 * MHZ));
        let slope = (s(a2, &p) / s(a1, &p)).ln() / (a2 / a1).ln();
        assert!((slope - 2.0).abs() < 0.01, "slope {slope}");

        // ∝ g at fixed ω_a, in the small-coupling regime
        let wr = p.omega_r;
        let small = SystemParams::resonant(wr, wr / 1000.0).unwrap();
        let double = SystemParams::resonant(wr, wr / 500.0).unwrap();
        let ratio = s(a2, &double) / s(a2, &small);
        assert!((ratio - 2.0).abs() < 0.01, "ratio {ratio}");
    }

    #[test]
    fn longitudinal_noise_is_reported_by_oracle_and_series() {
        let p = SystemParams::reference();
        let noise = NoiseSpec::longitudinal(hz_to_angular(5.0 * MHZ)).unwrap();
        let methods = applicable_methods(&p, NoiseCoupling::Longitudinal);
        assert_eq!(methods, vec![ShiftMethod::Series, ShiftMethod::Oracle]);
        let series = shift_report(&p, &noise, ShiftMethod::Series).unwrap();
        let oracle = shift_report(&p, &noise, ShiftMethod::Oracle).unwrap();
        // At resonance σᶻ couples |+,1⟩ and |−,1⟩ across the 2g gap: δE± = ±A²/(2g)
        let expected = noise.amplitude.powi(2) / (2.0 * p.g);
        assert!(rel(series.shift_plus, expected) < 1e-12);
        assert!(rel(series.shift_minus, -expected) < 1e-12);
        assert!(rel(oracle.shift_plus, series.shift_plus) < 1e-3);
    }

    #[test]
    fn scan_is_ordered_and_complete() {
        let p = SystemParams::reference();
        let amps = default_sweep();
        let rows = noise_scan(&p, &amps, NoiseCoupling::Transverse).unwrap();
        assert_eq!(rows.len(), amps.len() * 4);
        for (chunk, a) in rows.chunks(4).zip(&amps) {
            assert!(chunk.iter().all(|r| r.noise.amplitude == *a));
            let methods: Vec<_> = chunk.iter().map(|r| r.method).collect();
            assert_eq!(
                methods,
                vec![ShiftMethod::Series, ShiftMethod::ClosedForm, ShiftMethod::Approx, ShiftMethod::Oracle]
            );
        }
    }

    #[test]
    fn series_handles_detuning() {
        // Off resonance the series still matches the oracle at second order.
        let wr = hz_to_angular(8.0 * GHZ);
        let p = SystemParams::new(wr + hz_to_angular(0.2 * GHZ), wr, hz_to_angular(0.4 * GHZ), 5).unwrap();
        let noise = NoiseSpec::transverse(hz_to_angular(5.0 * MHZ)).unwrap();
        let (m, pl) = shift_oracle(&p, &noise).unwrap();
        assert!(rel(m, shift_series(&p, &noise, Branch::Minus).unwrap()) < 1e-3);
        assert!(rel(pl, shift_series(&p, &noise, Branch::Plus).unwrap()) < 1e-3);
    }
}
