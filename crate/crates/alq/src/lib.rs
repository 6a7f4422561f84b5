//! Exact computation of Atkin-Lehner traces and refined dimensions of
//! newform spaces of squarefree level: the total new-space dimension, its
//! split by global root number, the subspaces with prescribed Atkin-Lehner
//! sign patterns, and the distribution analytics built on them (root-number
//! bias, perfect equidistribution, Galois-orbit lower bounds).
//!
//! All arithmetic is exact: intermediate values are rationals with
//! denominator dividing 6 and every final trace or dimension is asserted
//! integral. Keyed formulas come in independent pairs (literal sum vs
//! explicated form, inclusion-exclusion vs closed form) so each can serve
//! as the other's oracle.

pub mod analysis;
pub mod arith;
pub mod dimensions;
pub mod error;
pub mod quadratic;
pub mod report;
pub mod traces;
pub mod verify;

pub use error::{Error, Result};
