//! Executable constructions around generalized-polynomial Bohr sets,
//! return times of nilrotations on upper-triangular unipotent groups, and
//! the combinatorial set families (finite sums, sums with bounded gaps,
//! common differences) they are compared against.
//!
//! Every computation runs on a finite window of integers. Exact rational
//! arithmetic is available throughout; the floating backend flags results
//! that land within a tie guard of a rounding boundary.

pub mod dynsim;
pub mod error;
pub mod gp;
pub mod nilmatrix;
pub mod oracle;
pub mod scalar;
pub mod serial;
pub mod setfamilies;
pub mod verify;
pub mod window;

pub use error::{Error, Result};
pub use scalar::{Arith, Rational, Scalar, TieGuard};
pub use window::{Verdict, WindowSet};
