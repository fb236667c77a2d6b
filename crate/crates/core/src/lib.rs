//! Weil explicit formula machinery for Dirichlet L-functions.
//!
//! The crate provides test functions with closed-form and quadrature Fourier
//! transforms, archimedean integrals, sieve-backed prime sums, Dirichlet
//! character groups, a critical-line zero finder and evaluators for the
//! resulting bounds on low-lying zeros.

// Negated comparisons are how NaN arguments get rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod archimedean;
pub mod bounds;
pub mod characters;
pub mod error;
pub mod exec;
pub mod explicit_formula;
pub mod optimize;
pub mod primes;
pub mod quad;
pub mod special;
pub mod testfuncs;
pub mod zerofinder;

pub use error::{Error, Result};
pub use exec::Execution;
pub use testfuncs::{Family, TestFunction};
