//! Exact finite fields for the residue field `F_q` and quaternions for the
//! `K = H` case of the parabolic algebra.

mod field;
mod quaternion;

pub use field::{is_irreducible, is_prime, prime_power, FieldElement, FiniteField, DEFAULT_ORDER_CAP};
pub use quaternion::Quaternion;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("{0} is not a prime power")]
    NotPrimePower(u32),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{k} exceeds the cap {cap}")]
    OrderTooLarge { p: u32, k: u32, cap: u32 },
    #[error("no irreducible polynomial of degree {k} over F_{p} was found")]
    NoIrreducibleFound { p: u32, k: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("element does not belong to the field of order {expected} (found {found})")]
    FieldMismatch { expected: u32, found: u32 },
}
