//! Exact linear algebra over `F_p` and over the integers.

pub mod fp;
pub mod int;

pub use fp::{FpMatrix, Subspace};
pub use int::{gcd, Echelon, IntMatrix, Smith};
