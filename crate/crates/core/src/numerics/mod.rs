//! Numerical substrate: dense complex matrices, Hermitian spectra, unitary
//! exponentials and fixed-step time integration.

pub mod linalg;
pub mod ode;

pub use linalg::{
    hermitian_eig, matrix_exp_unitary, CMatrix, CVector, EigenDecomposition, Hermitian,
};
pub use ode::{
    integrate, integrate_schrodinger, integrate_with, sample_grid, Hamiltonian, StepPolicy,
    Trajectory,
};
