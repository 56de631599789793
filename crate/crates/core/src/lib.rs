//! Candidate sequences `c_n = |L − f⁽ⁿ⁾(t0)|/mⁿ` of iterated contractions and
//! their limits, numerically (extended-precision iteration with Aitken
//! acceleration) and in closed form (Möbius diagonalization, eigen-function
//! identities, Chebyshev inverses).

pub mod catalog;
pub mod chebyshev;
pub mod cli;
pub mod eigen;
pub mod error;
pub mod iteration;
pub mod koenigs;
pub mod mobius;
pub mod numeric;
pub mod repro;

pub use catalog::{fixed_point, FunctionSpec, IterMap};
pub use error::{Error, Result};
pub use numeric::{Ext, Precision};
