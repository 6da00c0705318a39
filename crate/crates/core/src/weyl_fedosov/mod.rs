//! Operators on `W = Λ•L^∨ ⊗ Ŝ B^∨`: the Koszul differential `δ`, its homotopy `h`,
//! the projection `σ` and inclusion `τ`, the covariant differential `d_L^∇`, and
//! the iteration producing `X^∇` with `Q = −δ + d_L^∇ + X^∇`, `Q² = 0`.
//!
//! Forms use the adapted dual frame `λ^0, …, λ^{n-1}`: bits below `dimA` are the
//! `α`'s and bit `dimA + k` is the one-form `χ_k`. Every operator drops terms of
//! symmetric weight above the working cap.

mod fedosov;
mod ops;

pub use fedosov::{solve_fedosov, FedosovData, XTerm};
pub use ops::{apply_vertical, lift, Weyl, WeylElement};
