pub mod cli;
pub mod dd;
pub mod dyadic;
pub mod error;
pub mod exponent;
pub mod fair;
pub mod params;
pub mod tent;

pub use error::{Error, Result};
