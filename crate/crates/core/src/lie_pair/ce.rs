//! Chevalley–Eilenberg differentials: `d_L` on `Λ L^∨`, `d_A` on `Λ A^∨`, and the
//! small-side differentials `d_A^Bott` on `Λ A^∨ ⊗ Λ^{•+1}B` and
//! `d_A^U + 𝔡_H` on `Λ A^∨ ⊗ (U(L)/U(L)A)^{⊗•+1}`.

use crate::graded_core::comul::sym_comul;
use crate::graded_core::forms::{bits, form_mul, replace_letter, wedge_sign, FormMask};
use crate::graded_core::multi_index::MultiIndex;
use crate::graded_core::scalar::Scalar;
use crate::graded_core::sparse::Sparse;
use num_traits::Zero;

use super::pair::LiePair;

/// `d_L λ^k = −Σ_{i<j} c^k_{ij} λ^i λ^j` in the adapted dual frame.
pub fn d_l_generator(pair: &LiePair, k: usize) -> Sparse<FormMask> {
    let mut out = Sparse::new();
    for i in 0..pair.n {
        for j in i + 1..pair.n {
            let c = &pair.c[i][j][k];
            if !c.is_zero() {
                out.add_term((1 << i) | (1 << j), -c.clone());
            }
        }
    }
    out
}

/// `d_L` on every form word, indexed by mask.
pub fn d_l_table(pair: &LiePair) -> Vec<Sparse<FormMask>> {
    let gens: Vec<_> = (0..pair.n).map(|k| d_l_generator(pair, k)).collect();
    let mut table: Vec<Sparse<FormMask>> = vec![Sparse::new(); 1 << pair.n];
    for m in 1u32..(1 << pair.n) {
        let i = m.trailing_zeros();
        let rest = m & (m - 1);
        // d(λ^i ∧ ρ) = dλ^i ∧ ρ − λ^i ∧ dρ
        let mut v = form_mul(&gens[i as usize], &Sparse::basis(rest));
        v.sub_assign(&form_mul(&Sparse::basis(1 << i), &table[rest as usize]));
        table[m as usize] = v;
    }
    table
}

/// `d_A` on a word of `Λ A^∨` (bits below `dimA`).
pub fn d_a(pair: &LiePair, m: FormMask) -> Sparse<FormMask> {
    assert!(m >> pair.dim_a == 0, "not an A-form");
    if m == 0 {
        return Sparse::new();
    }
    let i = m.trailing_zeros();
    let rest = m & (m - 1);
    // d_L of an A-generator restricted to Λ A^∨; A is a subalgebra
    let gen = d_l_generator(pair, i as usize).filtered(|w| w >> pair.dim_a == 0);
    let mut v = form_mul(&gen, &Sparse::basis(rest));
    v.sub_assign(&form_mul(&Sparse::basis(1 << i), &d_a(pair, rest)));
    v
}

/// Basis element `α^{a} ⊗ ∂_{b}` of `Λ A^∨ ⊗ Λ B`; `b = 0` is the scalar coefficient.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct TKey {
    pub a: FormMask,
    pub b: FormMask,
}

impl TKey {
    pub fn arity(&self) -> i32 {
        self.b.count_ones() as i32 - 1
    }

    pub fn degree(&self) -> i32 {
        self.a.count_ones() as i32 + self.arity()
    }
}

/// Basis element `α^{a} ⊗ u_0 ⊗ … ⊗ u_k` with `u_i` ordered PBW monomials of
/// `U(L)/U(L)A` over the complement generators.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct DKey {
    pub a: FormMask,
    pub u: Vec<MultiIndex>,
}

impl DKey {
    pub fn arity(&self) -> i32 {
        self.u.len() as i32 - 1
    }

    pub fn degree(&self) -> i32 {
        self.a.count_ones() as i32 + self.arity()
    }

    pub fn weight(&self) -> u32 {
        self.u.iter().map(|m| m.weight()).sum()
    }
}

fn wedge_alpha(j: usize, m: FormMask) -> Option<(bool, FormMask)> {
    wedge_sign(1 << j, m).map(|neg| (neg, m | (1 << j)))
}

/// `∇^Bott_{a_j}` extended to `Λ B` as a derivation.
pub fn bott_on_wedge(pair: &LiePair, j: usize, b: FormMask) -> Sparse<FormMask> {
    let mut out = Sparse::new();
    for t in bits(b) {
        let v = pair.bott(j, t as usize);
        for (k, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if let Some((neg, m)) = replace_letter(b, t, k as u32) {
                out.add_term(m, if neg { -c.clone() } else { c.clone() });
            }
        }
    }
    out
}

pub fn d_a_bott_key(pair: &LiePair, key: &TKey) -> Sparse<TKey> {
    let mut out = Sparse::new();
    for (m, c) in &d_a(pair, key.a) {
        out.add_term(TKey { a: *m, b: key.b }, c.clone());
    }
    for j in 0..pair.dim_a {
        let Some((neg, am)) = wedge_alpha(j, key.a) else { continue };
        for (bm, c) in &bott_on_wedge(pair, j, key.b) {
            out.add_term(TKey { a: am, b: *bm }, if neg { -c.clone() } else { c.clone() });
        }
    }
    out
}

pub fn d_a_bott(pair: &LiePair, x: &Sparse<TKey>) -> Sparse<TKey> {
    x.map_linear(|k| d_a_bott_key(pair, k))
}

pub fn d_a_u_key(pair: &LiePair, key: &DKey) -> Sparse<DKey> {
    let mut out = Sparse::new();
    for (m, c) in &d_a(pair, key.a) {
        out.add_term(DKey { a: *m, u: key.u.clone() }, c.clone());
    }
    for j in 0..pair.dim_a {
        let Some((neg, am)) = wedge_alpha(j, key.a) else { continue };
        let letter = pair.a_idx[j];
        for slot in 0..key.u.len() {
            for (v, c) in &pair.uq.left_mult(letter, &key.u[slot]) {
                let mut u = key.u.clone();
                u[slot] = *v;
                out.add_term(DKey { a: am, u }, if neg { -c.clone() } else { c.clone() });
            }
        }
    }
    out
}

pub fn d_a_u(pair: &LiePair, x: &Sparse<DKey>) -> Sparse<DKey> {
    x.map_linear(|k| d_a_u_key(pair, k))
}

/// Hochschild coboundary on tuples `u_1 ⊗ … ⊗ u_k` of `U(L)/U(L)A`:
/// `1⊗u + Σ_i (−1)^i (…Δu_i…) + (−1)^{k+1} u⊗1`.
pub fn d_h_tuple(rank: usize, u: &[MultiIndex]) -> Sparse<Vec<MultiIndex>> {
    let k = u.len();
    let one = MultiIndex::zero(rank);
    let mut out = Sparse::new();
    let mut front = vec![one];
    front.extend_from_slice(u);
    out.add_term(front, Scalar::from_integer(1.into()));
    for i in 0..k {
        let s = if i % 2 == 0 { -1 } else { 1 };
        for (p, q, c) in sym_comul(&u[i]) {
            let mut w = u[..i].to_vec();
            w.push(p);
            w.push(q);
            w.extend_from_slice(&u[i + 1..]);
            out.add_term(w, c * Scalar::from_integer(s.into()));
        }
    }
    let mut back = u.to_vec();
    back.push(one);
    out.add_term(back, Scalar::from_integer(if k.is_multiple_of(2) { -1 } else { 1 }.into()));
    out
}

fn signed_d_h(pair: &LiePair, key: &DKey, odd: bool) -> Sparse<DKey> {
    let mut out = Sparse::new();
    for (u, c) in &d_h_tuple(pair.r, &key.u) {
        out.add_term(DKey { a: key.a, u: u.clone() }, if odd { -c.clone() } else { c.clone() });
    }
    out
}

/// `𝔡_H(ω⊗u) = (−1)^p ω ⊗ d_H u`, the form-degree sign alone.
pub fn frak_d_h_key(pair: &LiePair, key: &DKey) -> Sparse<DKey> {
    signed_d_h(pair, key, key.a.count_ones() % 2 == 1)
}

/// `(−1)^{p+k} ω ⊗ d_H u` for `u` of arity `k`: the column `σ⊗pbw` carries
/// `[m, −]` to, since `[m, u] = (−1)^k d_H u` fiberwise.
pub fn frak_d_h_bracket_key(pair: &LiePair, key: &DKey) -> Sparse<DKey> {
    signed_d_h(pair, key, (key.a.count_ones() as i32 + key.arity()).rem_euclid(2) == 1)
}

/// `d_A^U + (−1)^{p+k} id ⊗ d_H`, the small differential the transfer produces.
pub fn d_small_d(pair: &LiePair, x: &Sparse<DKey>) -> Sparse<DKey> {
    x.map_linear(|k| {
        let mut v = d_a_u_key(pair, k);
        v.add_assign(&frak_d_h_bracket_key(pair, k));
        v
    })
}

/// `d_A^U + 𝔡_H` with the form-degree sign alone.
pub fn d_small_d_form_sign(pair: &LiePair, x: &Sparse<DKey>) -> Sparse<DKey> {
    x.map_linear(|k| {
        let mut v = d_a_u_key(pair, k);
        v.add_assign(&frak_d_h_key(pair, k));
        v
    })
}

/// `ω⊗u ↦ (−1)^{k(k−1)/2} ω⊗u` for arity `k`; it carries `d_small_d` to
/// `d_small_d_form_sign`.
pub fn arity_twist(x: &Sparse<DKey>) -> Sparse<DKey> {
    x.map_linear(|key| {
        let k = key.arity() as i64;
        let odd = (k * (k - 1) / 2).rem_euclid(2) == 1;
        Sparse::term(key.clone(), Scalar::from_integer(if odd { -1 } else { 1 }.into()))
    })
}

/// All `TKey`s, ordered by key.
pub fn t_basis(pair: &LiePair) -> Vec<TKey> {
    let mut out = Vec::new();
    for a in 0u32..(1 << pair.dim_a) {
        for b in 0u32..(1 << pair.r) {
            out.push(TKey { a, b });
        }
    }
    out
}

/// All `DKey`s with at most `max_len` tensor factors and total weight at most `max_weight`.
pub fn d_basis(pair: &LiePair, max_len: usize, max_weight: u32) -> Vec<DKey> {
    let mut tuples: Vec<Vec<MultiIndex>> = vec![Vec::new()];
    let mut all = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for t in &tuples {
            let used: u32 = t.iter().map(|m| m.weight()).sum();
            for m in MultiIndex::up_to(pair.r, max_weight - used) {
                let mut v = t.clone();
                v.push(m);
                next.push(v);
            }
        }
        all.extend(next.iter().cloned());
        tuples = next;
    }
    let mut out = Vec::new();
    for a in 0u32..(1 << pair.dim_a) {
        for u in &all {
            out.push(DKey { a, u: u.clone() });
        }
    }
    out.sort();
    out
}
