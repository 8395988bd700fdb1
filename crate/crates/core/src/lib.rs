//! Symbolic construction and verification of Koszul-Tate complexes for
//! degenerate graded Lagrangian systems.
//!
//! The crate works in a single coordinate chart with polynomial coefficient
//! functions and exact rational arithmetic:
//!
//! * [`algebra`]: graded polynomials over jet variables, Koszul signs.
//! * [`calculus`]: total derivatives, Euler-Lagrange operators, prolonged
//!   vertical derivations and their nilpotency.
//! * [`koszul_tate`]: antifield extension, stage operators, the stage-wise
//!   Koszul-Tate differentials and bounded homology searches.
//! * [`bf`]: the topological BF model and its end-to-end verifier.
//! * [`dsl`], [`report`], [`cli`]: model files, reports, command line.

pub mod algebra;
pub mod ansatz;
pub mod bf;
pub mod calculus;
pub mod cli;
pub mod dsl;
mod error;
pub mod koszul_tate;
pub mod linalg;
pub mod random;
pub mod report;

pub use error::{Error, Result};

/// Exact rational scalars.
pub type Q = num_rational::BigRational;

/// `n/1` as a rational.
pub fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}
