use std::fmt;

use polariton::{Error as CoreError, ErrorClass};

/// Process exit codes. Stable across scenarios.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const GOLDEN_MISMATCH: i32 = 1;
    pub const CONFIG: i32 = 2;
    pub const PHYSICS_GUARD: i32 = 3;
    pub const NUMERICAL: i32 = 4;
    pub const IO: i32 = 5;
}

#[derive(Debug)]
pub enum CliError {
    Config(String),
    PhysicsGuard(String),
    Numerical(String),
    Io(String),
    GoldenMismatch(String),
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::GoldenMismatch(_) => exit::GOLDEN_MISMATCH,
            CliError::Config(_) => exit::CONFIG,
            CliError::PhysicsGuard(_) => exit::PHYSICS_GUARD,
            CliError::Numerical(_) => exit::NUMERICAL,
            CliError::Io(_) => exit::IO,
        }
    }

    pub fn io(context: impl fmt::Display, err: impl fmt::Display) -> Self {
        CliError::Io(format!("{context}: {err}"))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::PhysicsGuard(m) => write!(f, "{m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::GoldenMismatch(m) => write!(f, "golden mismatch: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let msg = e.to_string();
        match e.class() {
            ErrorClass::Input => CliError::Config(msg),
            ErrorClass::PhysicsGuard => CliError::PhysicsGuard(msg),
            ErrorClass::Numerical => CliError::Numerical(msg),
        }
    }
}
