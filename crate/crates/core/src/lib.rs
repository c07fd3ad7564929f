//! Exact algebra for Chow rings of generalized Rost motives.
//!
//! The crate is `no_std` (it needs `alloc`). It provides:
//!
//! * [`graded_algebra`]: truncated polynomial algebras `P(y)` over `F_p` or the
//!   p-local integers, their bases, characters and homomorphisms;
//! * [`omega_module`]: finitely generated submodules of `Ω* ⊗ P(y)` and the
//!   augmentation quotient that turns cobordism data into Chow groups;
//! * [`catalog`]: the in-memory model of catalog entries and the degree validator;
//! * [`decomposition`]: verifiers for chain edges and restriction statements;
//! * [`spectral`]: a small multiplicative spectral-sequence engine over `F_2`.
//!
//! File formats, reports and the command-line front end live in the `flagchow` crate.
#![no_std]

extern crate alloc;

pub mod catalog;
pub mod decomposition;
mod error;
pub mod graded_algebra;
pub mod linalg;
pub mod omega_module;
pub mod spectral;

pub use error::{Error, Result};
pub use graded_algebra::{
    AlgebraElement, AlgebraHom, AlgebraPresentation, CoefficientMode, GeneratorSpec, Monomial,
    Prime,
};
pub use omega_module::{GradedAbelianGroup, OmegaElement, OmegaMonomial, OmegaRing, OmegaSubmodule};
