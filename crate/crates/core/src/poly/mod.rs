//! Exact univariate polynomials over the integers and over prime fields.
//!
//! Coefficients are stored in ascending degree order (constant term first)
//! everywhere, including the comma-separated text format used on the command
//! line and in ledgers: `"-3,-1,1"` is `x^2 - x - 3`.

mod int;
mod modp;
mod resultant;

use thiserror::Error;

pub use int::IntPoly;
pub use modp::ModPoly;
pub use resultant::{discriminant_resultant, resultant, sylvester_resultant};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial degree {found} is below the required {required}")]
    DegreeTooSmall { found: usize, required: usize },
    #[error("division is not exact over the integers")]
    InexactDivision,
    #[error("moduli differ: {0} vs {1}")]
    ModulusMismatch(u64, u64),
    #[error("cannot parse polynomial `{0}`")]
    Parse(String),
}
