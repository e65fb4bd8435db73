//! Exact arithmetic: big rationals and the real quadratic fields ℚ(√d).

pub mod bigint_str;
mod quadratic;
mod rational;

pub use quadratic::{is_square_free, quad_arith, QuadraticFieldElement};
pub use rational::{exact_sqrt, gcd_list, rat_arith, ArithOp, Rational};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot combine elements of different quadratic fields (√{left} vs √{right})")]
    MismatchedField { left: u64, right: u64 },
    #[error("{0} is not a square-free integer greater than 1")]
    NotSquareFree(u64),
    #[error("gcd of an empty list")]
    EmptyList,
    #[error("cannot parse '{0}' as a rational number")]
    Parse(String),
}
