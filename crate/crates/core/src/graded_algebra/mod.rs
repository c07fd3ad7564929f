//! Truncated polynomial algebras `P(y) = Z_(p)[y_1..y_s]/(y_i^{h_i})`.
//!
//! Relations are always pure generator powers, so every element has a unique
//! normal form as a sum of admissible monomials and products are computed by
//! adding exponent vectors and dropping anything that reaches a height.
//! Degrees are topological (twice the Chow degree). `Λ(a, …)` follows the
//! ambient-prime convention: each listed generator satisfies `a^p = 0`.

mod character;
mod element;
mod hom;
mod presentation;

pub use character::{
    complement_character, is_power_of_two, lambda_character, spin_generators, spin_lbar,
    subalgebra,
};
pub(crate) use character::e8_alias;
pub use element::AlgebraElement;
pub use hom::AlgebraHom;
pub use presentation::{
    convolve, truncated_convolve, AlgebraPresentation, CoefficientMode, GeneratorSpec, Monomial,
    Prime,
};

use alloc::sync::Arc;

/// `spin_generators(ℓ)` as a p = 2 presentation (all heights 2).
pub fn spin_presentation(l: u32) -> Arc<AlgebraPresentation> {
    Arc::new(
        AlgebraPresentation::new(
            Prime::new(2).expect("2 is supported"),
            spin_generators(l),
            CoefficientMode::PLocal,
        )
        .expect("spin generator names are distinct"),
    )
}
