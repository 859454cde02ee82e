//! Exact coefficient arithmetic, multivariate polynomials, Gröbner rewrite
//! systems and fractions modulo relation ideals.

pub mod gauss;
pub mod groebner;
pub mod linalg;
pub mod parse;
pub mod poly;
pub mod ratfunc;
pub mod unipoly;

pub use gauss::{rat, GaussRat, Rat};
pub use groebner::{budget, buchberger, set_budget, RewriteSystem, Rule, DEFAULT_BUDGET};
pub use linalg::Matrix;
pub use parse::{parse_fraction, parse_gauss, parse_matrix, parse_poly};
pub use poly::{Monomial, Poly, Ring};
pub use ratfunc::RatFunc;
pub use unipoly::{rat_sqrt, UniPoly};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("operands live in different variable contexts")]
    ContextMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("Buchberger step budget of {budget} exhausted")]
    BudgetExceeded { budget: usize },
    #[error("empty input")]
    EmptyInput,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}
