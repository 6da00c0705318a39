//! Fiberwise polyvector fields and polydifferential operators on `Ŝ B^∨`,
//! extended by `Λ•L^∨`, with their brackets, products and differentials.
//!
//! A big element is a sparse sum of `(Word, C)` where the word carries the form
//! `ω ∈ Λ L^∨` and the coefficient monomial `χ^I`, and `C` is the fiber
//! coefficient (a wedge of `∂`'s or a tuple of `∂^J`'s). The fiber element is
//! `χ^I ⊗ C` and its Lie degree is the arity of `C`. The `Λ`-extension uses
//! `[ω⊗x, ω'⊗y] = (−1)^{|x||ω'|} ωω' ⊗ [x, y]`.

mod big;
pub mod dpoly;
pub mod tpoly;

pub use big::{BigCtx, BigElement, Fiber, FiberTerm};
pub use dpoly::{hochschild_fiber, DFiber, DTuple};
pub use tpoly::TFiber;
