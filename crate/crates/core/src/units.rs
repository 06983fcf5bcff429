//! Frequency unit conversion.
//!
//! Everything inside the crate is an angular frequency in rad/s. Values quoted
//! as "2π × 8 GHz" are ordinary frequencies in Hz and become angular
//! frequencies by multiplying by 2π, which only happens at I/O boundaries.

use std::f64::consts::TAU;

pub const KHZ: f64 = 1e3;
pub const MHZ: f64 = 1e6;
pub const GHZ: f64 = 1e9;

/// ν (Hz) → ω = 2πν (rad/s).
#[inline]
pub fn hz_to_angular(hz: f64) -> f64 {
    TAU * hz
}

/// ω (rad/s) → ν = ω/2π (Hz).
#[inline]
pub fn angular_to_hz(omega: f64) -> f64 {
    omega / TAU
}
