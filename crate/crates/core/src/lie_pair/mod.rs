//! Lie pairs over a point: input schema, validation, adapted frames, connections
//! and the Chevalley–Eilenberg differentials of the small complexes.

pub mod ce;
pub mod connection;
pub mod pair;
pub mod spec;

pub use ce::{arity_twist, d_a, d_a_bott, d_a_u, d_l_table, d_small_d, d_small_d_form_sign, DKey, TKey};
pub use connection::{Connection, ConnectionViolation};
pub use pair::{validate_pair, LiePair, PairViolation};
pub use spec::{BracketEntry, ChoiceSpec, LiePairSpec};
