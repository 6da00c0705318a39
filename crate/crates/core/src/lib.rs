//! Exact computer-algebra kernel for Lie pairs `A ⊂ L` over a point: Fedosov
//! resolutions, polyvector and polydifferential contractions, homological
//! perturbation and homotopy transfer of L∞ structures.

// structure constants and connection tables are indexed by basis position
#![allow(clippy::needless_range_loop, clippy::type_complexity)]

pub mod cohomology;
pub mod contraction_engine;
pub mod error;
pub mod graded_core;
pub mod homotopy_transfer;
pub mod lie_pair;
pub mod pbw;
pub mod poly_structures;
pub mod suites;
pub mod weyl_fedosov;

pub use error::CoreError;
pub use graded_core::{MultiIndex, Scalar, Sparse, Word};
pub use lie_pair::{validate_pair, Connection, LiePair, LiePairSpec};
