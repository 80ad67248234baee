use thiserror::Error;

use crate::field::UniPoly;

/// Everything that can go wrong while parsing, expanding or verifying.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("negative exponent at position {position}")]
    NegativeExponent { position: usize },

    #[error("imaginary unit at position {position} is not allowed with the exact backend")]
    ImaginaryInExactBackend { position: usize },

    #[error("the zero polynomial has no roots or support")]
    ZeroPolynomial,

    #[error("factor {factor} has no rational root{}", branch_suffix(.branch))]
    NonRationalRoot {
        factor: UniPoly,
        branch: Option<String>,
    },

    #[error("root iteration did not converge at {precision} bits")]
    NoConvergence { precision: u32 },

    #[error("substitution produced the negative x-exponent {exponent}")]
    NegativeResultExponent { exponent: String },

    #[error("constant term {value} survives substitution; the coefficient is not a characteristic root")]
    ConstantTermNonzero { value: String },

    #[error("translation needs integer x-exponents, found {exponent}")]
    FractionalExponent { exponent: String },

    #[error("no support point lies on the segment")]
    EmptySegment,

    #[error("iterate has pure-x terms but no negative-slope segment (branch {branch})")]
    InconsistentState { branch: String },

    #[error("state is not in the regular-tail regime: {reason}")]
    NotRegular { reason: String },

    #[error("{count} distinct branches extend the given jet; supply a longer jet")]
    AmbiguousBranch { count: usize },

    #[error("no branch extends the given jet")]
    NoSolution,

    #[error("residual vanishes at t = {sample}; the series is an exact solution")]
    ResidualUnderflow { sample: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

fn branch_suffix(branch: &Option<String>) -> String {
    match branch {
        Some(id) => format!(" (branch {id})"),
        None => String::new(),
    }
}

pub type Result<T> = std::result::Result<T, Error>;
