//! Newton-Puiseux expansion of the branches of `f(x, y) = 0` through the
//! origin, with exact rational and big-float complex coefficients.

pub mod cli;
pub mod engine;
pub mod error;
pub mod field;
pub mod mpoly;
pub mod polygon;
pub mod verify;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/input.md")]
    mod input {}
    #[doc = include_str!("../../../book/src/polygon.md")]
    mod polygon {}
    #[doc = include_str!("../../../book/src/expansion.md")]
    mod expansion {}
    #[doc = include_str!("../../../book/src/numeric.md")]
    mod numeric {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
