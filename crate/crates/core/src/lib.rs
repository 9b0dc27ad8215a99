pub mod adversary;
pub mod approx;
pub mod cli;
pub mod config;
pub mod constants;
pub mod diffsets;
pub mod discrepancy;
pub mod digitsets;
pub mod error;
pub mod exact;
pub mod expsum;

pub use config::Limits;
pub use error::{Error, Result};
pub use exact::{Ball, Rational, RealValue};
pub mod verify;
