//! Poincaré–Birkhoff–Witt data: the quotient `U(L)/U(L)A`, the PBW map of a
//! splitting and connection, `∇^⚡`, and transition maps between choices.

pub mod map;
pub mod uquotient;

pub use map::{dual_map, nabla_sym, PbwMap, Transition};
pub use uquotient::UQuotient;
