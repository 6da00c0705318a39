//! Exact scalars, multi-indices, exterior-algebra words with Koszul signs, and the
//! sparse and dense linear algebra used throughout.

pub mod comul;
pub mod forms;
pub mod linalg;
pub mod multi_index;
pub mod scalar;
pub mod sparse;

pub use comul::{differentiate, pair_dual, sub_indices, sym_comul, sym_comul_iter};
pub use forms::{bits, contract, contract_sign, form_mul, replace_letter, wedge_mul, wedge_sign, FormMask, Word};
pub use linalg::Matrix;
pub use multi_index::{MultiIndex, MAX_RANK};
pub use scalar::Scalar;
pub use sparse::Sparse;
