//! Exact-arithmetic toolkit for Hecke operators on q-series indexed by
//! commuting pairs in finite groups.
//!
//! The library implements and cross-verifies three constructions of the
//! Hecke operators `T_n` acting on such series — geometric (averaging over
//! index-`n` sublattice triples), combinatorial (power operations attached
//! to transitive commuting pairs of permutations), and classical (replicate
//! coefficient formulas) — together with Faber polynomials, replicability
//! checking, symmetric/exterior power operations at level 1 and 2, and the
//! cyclic-group 3-cocycle data that produces the roots of unity and
//! fractional q-exponents of twisted sectors.
//!
//! All series arithmetic is exact: coefficients live in cyclotomic fields
//! over arbitrary-precision rationals, and truncation bounds are tracked
//! pessimistically through every operation.

pub mod cocycles;
pub mod error;
pub mod exact_arith;
pub mod finite_groups;
pub mod formats;
pub mod hecke;
pub mod norton;
pub mod power_ops;
pub mod qseries;

pub use error::{Error, Result};
