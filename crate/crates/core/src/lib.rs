pub mod drive;
pub mod error;
pub mod gates;
pub mod lindblad;
pub mod noise;
pub mod numerics;
pub mod spectrum;
pub mod units;

pub use error::{Error, ErrorClass, Result};
