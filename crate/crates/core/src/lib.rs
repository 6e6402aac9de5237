#![allow(clippy::excessive_precision)]

pub mod approx;
pub mod eccentric;
pub mod error;
pub mod exact;
pub mod quadrature;
pub mod specfun;
pub mod units;

pub use error::{Error, Result};
