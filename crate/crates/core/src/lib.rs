//! Exact Hilbert-Kunz functions, Hilbert-Kunz multiplicities and
//! F-signatures for quotients of polynomial rings over prime fields.
//!
//! Lengths are computed as F_p-dimensions of zero-dimensional quotients by
//! counting standard monomials of a Groebner basis. Everything up to the
//! final extrapolation step is exact integer arithmetic.

pub mod bounds;
pub mod estimate;
pub mod frobenius;
pub mod groebner;
pub mod polyfield;
pub mod presentation;

/// Version tag stored with cached results; a new engine version never
/// reads results cached by an older one.
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");
