pub mod acceptance;
pub mod eigen;
pub mod error;
pub mod gram;
pub mod measure;
pub mod points;
pub mod quad;
pub mod report;
pub mod schoenberg;
pub mod specfun;
pub mod symbols;
pub mod toeplitz;

pub use error::{Error, Result};
