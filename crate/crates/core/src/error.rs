use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Broad failure class, used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Malformed input: bad parameter values, mismatched dimensions.
    Input,
    /// A physical assumption of the model is violated (RWA, resonance, cyclicity).
    PhysicsGuard,
    /// The numerics failed or were asked to run outside their resolution.
    Numerical,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: max |M - M^dagger| = {deviation:e}")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not unitary: max |U^dagger U - I| = {deviation:e}")]
    NotUnitary { deviation: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("physics guard: {0}")]
    PhysicsGuard(String),

    #[error("pulse area {area} rad differs from 2*pi; the evolution is not cyclic")]
    NotCyclic { area: f64 },

    #[error("state is not normalized: |psi| = {norm}")]
    NotNormalized { norm: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("invalid trajectory: {0}")]
    InvalidTrajectory(String),

    #[error(
        "carrier under-resolved: omega_max*dt = {phase:.3} exceeds {limit} \
         (omega_max = {omega_max:e} rad/s, dt = {dt:e} s)"
    )]
    UnderResolved {
        phase: f64,
        limit: f64,
        omega_max: f64,
        dt: f64,
    },

    #[error(
        "positivity violated at t = {time:e} s: minimum eigenvalue {min_eigenvalue:e} \
         (dt = {dt:e} s); reduce the step size"
    )]
    PositivityViolation {
        time: f64,
        min_eigenvalue: f64,
        dt: f64,
    },

    #[error(
        "dressed-branch identification is ambiguous: best overlap {overlap:.4} < {threshold}; \
         the noise amplitude is outside the perturbative regime"
    )]
    AmbiguousOverlap { overlap: f64, threshold: f64 },
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::PhysicsGuard(_) | Error::NotCyclic { .. } => ErrorClass::PhysicsGuard,
            Error::InvalidParameter { .. }
            | Error::DimensionMismatch(_)
            | Error::NotNormalized { .. }
            | Error::InvalidDensityMatrix(_)
            | Error::InvalidTrajectory(_)
            | Error::NotHermitian { .. }
            | Error::NotUnitary { .. } => ErrorClass::Input,
            Error::UnderResolved { .. }
            | Error::PositivityViolation { .. }
            | Error::AmbiguousOverlap { .. } => ErrorClass::Numerical,
        }
    }

    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
