//! Human-readable names of small-complex basis elements, built from the input
//! basis names: `α^a` for the dual of `a ∈ A`, `∂_x` for the class of `x` in `B`.

use crate::graded_core::forms::bits;
use crate::graded_core::multi_index::MultiIndex;
use crate::lie_pair::ce::{DKey, TKey};
use crate::lie_pair::LiePair;

fn a_name(p: &LiePair, i: u32) -> &str {
    &p.names[p.a_idx[i as usize]]
}

fn b_name(p: &LiePair, k: usize) -> &str {
    &p.names[p.comp_idx[k]]
}

fn forms(p: &LiePair, a: u32) -> Option<String> {
    (a != 0).then(|| bits(a).map(|i| format!("α^{}", a_name(p, i))).collect::<Vec<_>>().join("∧"))
}

/// `x^2 y` style monomial in the complement generators; `1` for the unit.
pub fn monomial_label(p: &LiePair, m: &MultiIndex) -> String {
    let parts: Vec<String> = m
        .entries()
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(k, &e)| if e == 1 { b_name(p, k).to_string() } else { format!("{}^{e}", b_name(p, k)) })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join(" ")
    }
}

pub fn t_label(p: &LiePair, k: &TKey) -> String {
    let vectors = (k.b != 0).then(|| bits(k.b).map(|i| format!("∂_{}", b_name(p, i as usize))).collect::<Vec<_>>().join("∧"));
    match (forms(p, k.a), vectors) {
        (None, None) => "1".into(),
        (Some(f), None) => f,
        (None, Some(v)) => v,
        (Some(f), Some(v)) => format!("{f} ⊗ {v}"),
    }
}

pub fn d_label(p: &LiePair, k: &DKey) -> String {
    let tensors = (!k.u.is_empty()).then(|| k.u.iter().map(|m| format!("[{}]", monomial_label(p, m))).collect::<Vec<_>>().join(" ⊗ "));
    match (forms(p, k.a), tensors) {
        (None, None) => "1".into(),
        (Some(f), None) => f,
        (None, Some(t)) => t,
        (Some(f), Some(t)) => format!("{f} ⊗ {t}"),
    }
}
