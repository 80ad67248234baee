//! Coefficient fields, univariate polynomials over them, and root finding.

mod coeff;
pub mod rat;
mod roots;
mod unipoly;

pub use coeff::{format_complex, format_real, Backend, Coeff};
pub use rat::Rat;
pub use roots::{default_tolerance, find_roots, find_roots_with, Root};
pub use unipoly::UniPoly;
