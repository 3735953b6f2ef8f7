//! Exact rational cycles of generalized Collatz compositions.
//!
//! A composition `P = B_0 ∘ … ∘ B_{n-1}` of affine steps
//! `B_i(x) = (p_i·x + k_i)/q` has a unique rational cycle whenever
//! `D = qⁿ − ∏p_i ≠ 0`. This crate computes that cycle exactly, certifies
//! integer linear combinations of its terms, expands the terms as base-`p`
//! digit streams, and enumerates `S`/`T` words looking for integer cycles.
//!
//! `B_{n-1}` is applied first; see [`composition`] for the convention.

pub mod composition;
pub mod cycles;
pub mod enumerate;
pub mod error;
pub mod exact;
pub mod integrality;
pub mod padic;

pub use composition::{parse_spec, AffineStep, Composition};
pub use cycles::{affine_fold_fixed_point, discriminant, solve_cycle, verify_closure, AffineMap, CycleSolution};
pub use error::{Error, ErrorKind, Result};
pub use exact::{euler_totient, mod_inverse, Rational};
pub use num_bigint::BigInt;
