//! Prime fields, monomials, monomial orders and sparse polynomials over F_p.

mod field;
mod monomial;
mod order;
mod poly;

pub use field::{is_prime, FieldElem, PrimeField, MAX_PRIME};
pub use monomial::{Exponents, Monomial};
pub use order::{MonomialOrder, OrderKind};
pub use poly::{is_power_of, log_base, Poly, PolyDisplay, PolyRing, Term};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("{0} is not a prime at most 2^31")]
    NotPrime(u64),
    #[error("inverse of zero")]
    ZeroInverse,
    #[error("field elements from F_{0} and F_{1} combined")]
    ModulusMismatch(u64, u64),
    #[error("polynomials belong to different rings")]
    AmbientMismatch,
    #[error("{q} is not a power of the characteristic {p}")]
    NotPowerOfP { q: u64, p: u64 },
    #[error("exponent overflow")]
    ExponentOverflow,
    #[error("unknown monomial order `{0}`")]
    UnknownOrder(String),
    #[error("variable priority {0:?} is not a permutation")]
    BadPriority(Vec<usize>),
}
