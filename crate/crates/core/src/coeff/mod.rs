//! Exact scalar arithmetic.
//!
//! Constants live in the Gaussian rationals; scalars are reduced rational
//! functions in degree-0 symbols, including exponential atoms `exp(s)`.

mod gauss;
mod gcd;
mod laurent;
mod poly;
mod scalar;
mod symbol;

pub use gauss::GaussRat;
pub use laurent::LaurentInEta;
pub use poly::{Monomial, Poly};
pub use scalar::Scalar;
pub use symbol::{Symbol, SymbolKind};


use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoeffError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("substitution produced a zero denominator")]
    ZeroDenominator,
    #[error("cyclic substitution through `{0}`")]
    CyclicSubstitution(String),
    #[error("unsupported exponential argument `{0}`")]
    UnsupportedExponential(String),
    #[error("`{0}` is not a Laurent polynomial in the spectral parameter")]
    NotLaurent(String),
}
