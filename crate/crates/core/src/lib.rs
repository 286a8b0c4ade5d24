//! Exact arithmetic for the orbicyclic function `E(m_1, …, m_r)` and the
//! enumerative problems built on it: order-preserving epimorphisms from
//! orbifold groups onto cyclic groups, admissible cyclic orbifolds of a
//! surface, unrooted maps on orientable surfaces, and conjugacy classes of
//! finite-index subgroups of free groups.

pub mod arith;
pub mod cli;
pub mod congruence;
pub mod epi;
pub mod error;
pub mod mapcount;
pub mod orbicyclic;
pub mod orbifold;
pub mod subgroups;

pub use error::{Error, Result};
pub use num_bigint::BigUint;

/// Exact nonnegative count.
pub type Count = BigUint;
