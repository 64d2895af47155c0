pub mod charduals;
pub mod crossed;
pub mod error;
pub mod fp;
pub mod io;
pub mod linalg;
pub mod padic;
pub mod reduction;
pub mod sample;
pub mod spectral;
pub mod suite;

pub use error::{Error, Result};
