//! Residue currents of meromorphic differential forms: exact symbolic data
//! and numeric limit-integral evaluation.

pub mod algebra;
pub mod dim1;
pub mod error;
pub mod forms;
pub mod leray;
pub mod numeric;
pub mod weierstrass;

pub use error::{Error, Result};
