//! Coalgebra structure of `S B` and its pairing with `Ŝ B^∨`.

use super::multi_index::MultiIndex;
use super::scalar::{zero, Scalar};

/// All splittings `J = K + M` with the multinomial weight `J!/(K!M!)`.
pub fn sym_comul(j: &MultiIndex) -> Vec<(MultiIndex, MultiIndex, Scalar)> {
    let jf = j.factorial();
    let mut out = Vec::new();
    for k in sub_indices(j) {
        let m = j.checked_sub(&k).expect("sub-index");
        let c = &jf / (k.factorial() * m.factorial());
        out.push((k, m, c));
    }
    out
}

/// Every `K ≺ J`, ordered lexicographically increasing.
pub fn sub_indices(j: &MultiIndex) -> Vec<MultiIndex> {
    let r = j.rank();
    let mut out = vec![MultiIndex::zero(r)];
    for i in 0..r {
        let mut next = Vec::new();
        for k in &out {
            let mut cur = *k;
            next.push(cur);
            for _ in 0..j.get(i) {
                cur = cur.add_unit(i);
                next.push(cur);
            }
        }
        out = next;
    }
    out.sort();
    out
}

/// Splittings `J = K_0 + … + K_{parts-1}` with weight `J!/(K_0!⋯)`.
pub fn sym_comul_iter(j: &MultiIndex, parts: usize) -> Vec<(Vec<MultiIndex>, Scalar)> {
    assert!(parts >= 1);
    if parts == 1 {
        return vec![(vec![*j], Scalar::from_integer(1.into()))];
    }
    let mut out = Vec::new();
    for (k, m, c) in sym_comul(j) {
        for (mut rest, c2) in sym_comul_iter(&m, parts - 1) {
            rest.insert(0, k);
            out.push((rest, &c * c2));
        }
    }
    out
}

/// `⟨χ^K, ∂^J⟩ = K!·δ_{K,J}`.
pub fn pair_dual(k: &MultiIndex, j: &MultiIndex) -> Scalar {
    if k == j {
        k.factorial()
    } else {
        zero()
    }
}

/// `∂^J(χ^K) = K!/(K−J)! · χ^{K−J}` when `J ≺ K`.
pub fn differentiate(j: &MultiIndex, k: &MultiIndex) -> Option<(Scalar, MultiIndex)> {
    let rest = k.checked_sub(j)?;
    Some((k.factorial() / rest.factorial(), rest))
}
