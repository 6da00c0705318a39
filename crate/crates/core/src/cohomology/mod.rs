//! Chevalley–Eilenberg hypercohomology of the small complexes
//! `(Λ A^∨ ⊗ Λ^{•+1}B, d_A^Bott)` and `(Λ A^∨ ⊗ (U(L)/U(L)A)^{⊗•+1}, d_A^U + d_H)`,
//! and the Gerstenhaber structure induced on it by `λ_2` and the cup product.
//!
//! The polydifferential complex is infinite; it is filtered by the total PBW
//! weight, which `d_A^U + d_H` does not raise, and cohomology is that of the
//! weight-`≤ w` subcomplex.

mod basis;
mod induced;

pub use basis::{ce_cohomology, CohomologyBasis, DegreeDims, HPiece, SmallComplex};
pub use induced::{
    class_ids, compare_on_cohomology, gerstenhaber_on_cohomology, induced_table, lie_on_cohomology, representative_independence, ClassId,
    ClassTable, Operation,
};

use std::collections::BTreeMap;

use crate::graded_core::forms::{form_mul, wedge_sign};
use crate::graded_core::scalar::sign;
use crate::graded_core::sparse::Sparse;
use crate::lie_pair::ce::{d_a_bott, d_basis, d_small_d, t_basis, DKey, TKey};
use crate::lie_pair::LiePair;

/// The whole polyvector complex, filtered by `|b|`.
pub fn t_complex(pair: &LiePair) -> SmallComplex<'_, TKey> {
    let mut pieces: BTreeMap<i32, Vec<TKey>> = BTreeMap::new();
    for k in t_basis(pair) {
        pieces.entry(k.degree()).or_default().push(k);
    }
    SmallComplex::new(pieces, |k: &TKey| k.b.count_ones(), move |x| d_a_bott(pair, x))
}

/// Total degrees of the polyvector complex.
pub fn t_degrees(pair: &LiePair) -> std::ops::RangeInclusive<i32> {
    -1..=(pair.n as i32 - 1)
}

/// The weight-`≤ max_weight` polydifferential subcomplex in total degrees
/// `−1 ..= max_degree + 1`, filtered by weight.
pub fn d_complex(pair: &LiePair, max_degree: i32, max_weight: u32) -> SmallComplex<'_, DKey> {
    let mut pieces: BTreeMap<i32, Vec<DKey>> = BTreeMap::new();
    for k in d_basis(pair, (max_degree + 2).max(0) as usize, max_weight) {
        if k.degree() <= max_degree + 1 {
            pieces.entry(k.degree()).or_default().push(k);
        }
    }
    SmallComplex::new(pieces, |k: &DKey| k.weight(), move |x| d_small_d(pair, x))
}

/// Wedge product on `Λ A^∨ ⊗ Λ B` with the `A^∨` letters first.
pub fn t_cup(pair: &LiePair, x: &TKey, y: &TKey) -> Sparse<TKey> {
    let a = pair.dim_a;
    let joint = |k: &TKey| k.a | (k.b << a);
    form_mul(&Sparse::basis(joint(x)), &Sparse::basis(joint(y))).map_keys(|m| TKey { a: m & ((1 << a) - 1), b: m >> a })
}

/// Cup product `(ξ⊗u)·(η⊗v) = (−1)^{|u||η|} ξ∧η ⊗ u⊗v`, `|u|` the number of tensor
/// factors, conjugated by the arity twist `(−1)^{k(k−1)/2}` that carries the
/// transferred differential to the form-sign one.
pub fn d_cup(x: &DKey, y: &DKey) -> Sparse<DKey> {
    let Some(neg) = wedge_sign(x.a, y.a) else { return Sparse::new() };
    let mut u = x.u.clone();
    u.extend_from_slice(&y.u);
    let twist = |k: i64| k * (k - 1) / 2;
    let (kx, ky) = (x.arity() as i64, y.arity() as i64);
    let e = neg as i64 + x.u.len() as i64 * y.a.count_ones() as i64 + twist(kx) + twist(ky) + twist(kx + ky + 1);
    Sparse::term(DKey { a: x.a | y.a, u }, sign(e))
}

