//! Symbolic scalar fields over a coordinate chart.
//!
//! Expressions are kept in an exact canonical form (rational coefficients,
//! merged exponentials), which makes zero-testing exact for polynomial and
//! polynomial-exponential fields. Identities that involve genuine quotients
//! fall back to seeded point sampling via [`equal_probabilistic`].

mod expr;
mod parse;
mod rational;
pub mod random;
mod sample;

pub use expr::{EvalError, Expr, ExprError};
pub use num_rational::BigRational;
pub use parse::{parse, ParseError, ParseErrorKind};
pub use sample::{check_pairs, check_zero, equal_probabilistic, SampleBox, SampleError, Verdict, MAX_REDRAWS};

/// Coordinate names `x1, …, xn`.
pub fn default_coords(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}
