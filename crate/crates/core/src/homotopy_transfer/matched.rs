//! Direct dgla structures of a matched pair `L = A ⋈ B`, where `j(B)` is a
//! subalgebra: the Schouten bracket on `Λ A^∨ ⊗ Λ^{•+1}B` and the Gerstenhaber
//! bracket on `Λ A^∨ ⊗ U(B)^{⊗•+1}` built from the smash product
//! `U(𝓑) = Λ A^∨ ⋊ U(B)`.
//!
//! `U(B)` is identified with `U(L)/U(L)A` through `j`; an ordered monomial
//! `y^K = j∂_0^{K_0} ⋯ j∂_{r-1}^{K_{r-1}}` equals the stored monomial `x^K`
//! plus terms of lower weight.

use std::collections::HashMap;
use std::sync::Mutex;

use num_traits::Zero;
use serde::Serialize;

use crate::contraction_engine::{IdentityReport, Status};
use crate::error::CoreError;
use crate::graded_core::comul::sym_comul_iter;
use crate::graded_core::forms::{bits, form_mul, replace_letter, FormMask};
use crate::graded_core::multi_index::MultiIndex;
use crate::graded_core::scalar::{one, sign, to_string, Scalar};
use crate::graded_core::sparse::Sparse;
use crate::lie_pair::ce::{DKey, TKey};
use crate::lie_pair::LiePair;

/// Whether `j(B)` is closed under the bracket of `L`.
pub fn matched_detect(pair: &LiePair) -> bool {
    pair.is_matched()
}

pub struct MatchedData<'a> {
    pub pair: &'a LiePair,
    x_to_y: Mutex<HashMap<MultiIndex, Sparse<MultiIndex>>>,
}

/// Concatenated mask `α^{a} ∧ b_{S}` with the `α` letters first.
fn joint(dim_a: usize, k: &TKey) -> FormMask {
    k.a | (k.b << dim_a)
}

fn split(dim_a: usize, m: FormMask) -> TKey {
    TKey { a: m & ((1 << dim_a) - 1), b: m >> dim_a }
}

impl<'a> MatchedData<'a> {
    pub fn new(pair: &'a LiePair) -> Result<Self, CoreError> {
        if !matched_detect(pair) {
            let a = pair.dim_a;
            let witness = (a..pair.n)
                .flat_map(|i| (a..pair.n).map(move |j| (i, j)))
                .find(|&(i, j)| (0..a).any(|k| !pair.c[i][j][k].is_zero()))
                .map(|(i, j)| format!("[j∂_{}, j∂_{}] leaves j(B)", i - a, j - a))
                .unwrap_or_default();
            return Err(CoreError::NotMatched(witness));
        }
        Ok(MatchedData { pair, x_to_y: Mutex::new(HashMap::new()) })
    }

    fn a(&self) -> usize {
        self.pair.dim_a
    }

    /// `[b_k, b_l] = Σ_m c b_m`.
    pub fn b_bracket(&self, k: usize, l: usize) -> Vec<(usize, Scalar)> {
        let a = self.a();
        (0..self.pair.r).map(|m| (m, self.pair.c[a + k][a + l][a + m].clone())).filter(|(_, c)| !c.is_zero()).collect()
    }

    /// `∇_{b_k} α^{i'} = −Σ_i c[b_k][a_i][a_{i'}] α^i`, the dual of `a ↦ pr_A [j b_k, a]`.
    pub fn nabla_alpha(&self, k: usize, i_prime: usize) -> Vec<(usize, Scalar)> {
        let a = self.a();
        (0..a).map(|i| (i, -self.pair.c[a + k][i][i_prime].clone())).filter(|(_, c)| !c.is_zero()).collect()
    }

    /// `∇_{b_k}` on `Λ A^∨`, extended as an even derivation.
    pub fn nabla_form(&self, k: usize, m: FormMask) -> Sparse<FormMask> {
        let mut out = Sparse::new();
        for ip in bits(m) {
            for (i, c) in self.nabla_alpha(k, ip as usize) {
                if let Some((neg, w)) = replace_letter(m, ip, i as u32) {
                    out.add_term(w, if neg { -c.clone() } else { c });
                }
            }
        }
        out
    }

    fn nabla_letters(&self, letters: &[usize], x: &Sparse<FormMask>) -> Sparse<FormMask> {
        let mut acc = x.clone();
        for &k in letters.iter().rev() {
            acc = acc.map_linear(|m| self.nabla_form(k, *m));
        }
        acc
    }

    // Schouten side.

    fn gen_bracket(&self, g: u32, h: u32) -> Sparse<FormMask> {
        let a = self.a() as u32;
        match (g >= a, h >= a) {
            (true, true) => self.b_bracket((g - a) as usize, (h - a) as usize).into_iter().map(|(m, c)| (1 << (a as usize + m), c)).collect(),
            (true, false) => self.nabla_alpha((g - a) as usize, h as usize).into_iter().map(|(i, c)| (1 << i, c)).collect(),
            (false, true) => self.nabla_alpha((h - a) as usize, g as usize).into_iter().map(|(i, c)| (1 << i, -c)).collect(),
            (false, false) => Sparse::new(),
        }
    }

    /// Degree `−1` Gerstenhaber bracket on `Λ(A^∨ ⊕ B)` with odd generators, from
    /// `[P∧R, Q] = P∧[R,Q] + (−1)^{|R|(|Q|−1)}[P,Q]∧R` and
    /// `[g, h∧Q'] = [g,h]∧Q' + h∧[g,Q']` for generators `g`, `h`.
    fn schouten_joint(&self, p: FormMask, q: FormMask) -> Sparse<FormMask> {
        let (dp, dq) = (p.count_ones() as i64, q.count_ones() as i64);
        if dp == 0 || dq == 0 {
            return Sparse::new();
        }
        if dp == 1 && dq == 1 {
            return self.gen_bracket(p.trailing_zeros(), q.trailing_zeros());
        }
        if dp >= 2 {
            let first = p & p.wrapping_neg();
            let rest = p & !first;
            let left = form_mul(&Sparse::basis(first), &self.schouten_joint(rest, q));
            let right = form_mul(&self.schouten_joint(first, q), &Sparse::basis(rest));
            return left.plus(&right.scaled(&sign((dp - 1) * (dq - 1))));
        }
        let first = q & q.wrapping_neg();
        let rest = q & !first;
        let left = form_mul(&self.gen_bracket(p.trailing_zeros(), first.trailing_zeros()), &Sparse::basis(rest));
        let right = form_mul(&Sparse::basis(first), &self.schouten_joint(p, rest));
        left.plus(&right)
    }

    /// Schouten bracket of `Λ A^∨ ⊗ Λ^{•+1}B` on basis elements.
    pub fn schouten(&self, x: &TKey, y: &TKey) -> Sparse<TKey> {
        let a = self.a();
        self.schouten_joint(joint(a, x), joint(a, y)).map_keys(|m| split(a, *m))
    }

    /// Wedge product of `Λ A^∨ ⊗ Λ B` with the `α` letters first.
    pub fn wedge(&self, x: &TKey, y: &TKey) -> Sparse<TKey> {
        let a = self.a();
        form_mul(&Sparse::basis(joint(a, x)), &Sparse::basis(joint(a, y))).map_keys(|m| split(a, *m))
    }

    // Polydifferential side.

    /// `y^K` in the stored basis of `U(L)/U(L)A`.
    pub fn y_to_x(&self, k: &MultiIndex) -> Sparse<MultiIndex> {
        let mut acc = Sparse::basis(MultiIndex::zero(self.pair.r));
        for l in k.letters().into_iter().rev() {
            acc = self.pair.uq.act(&self.pair.j_letters(l), &acc);
        }
        acc
    }

    /// `x^K` as a combination of ordered `j`-monomials.
    pub fn x_to_y(&self, k: &MultiIndex) -> Sparse<MultiIndex> {
        if let Some(v) = self.x_to_y.lock().unwrap().get(k) {
            return v.clone();
        }
        let mut out = Sparse::basis(*k);
        for (m, c) in &self.y_to_x(k) {
            if m != k {
                out.add_scaled(&self.x_to_y(m), &-c.clone());
            }
        }
        self.x_to_y.lock().unwrap().insert(*k, out.clone());
        out
    }

    /// `y^K · e` in `U(B)`, with `e` in the stored basis.
    fn y_times(&self, k: &MultiIndex, e: &Sparse<MultiIndex>) -> Sparse<MultiIndex> {
        let mut acc = e.clone();
        for l in k.letters().into_iter().rev() {
            acc = self.pair.uq.act(&self.pair.j_letters(l), &acc);
        }
        acc
    }

    /// The smash product `(ξ ⊗ b_{l_1}⋯b_{l_n}) · (η ⊗ e)`:
    /// `Σ_k Σ_{(k, n−k) shuffles} ξ ∧ ∇_{b_{σ(1)}}⋯∇_{b_{σ(k)}}η ⊗ b_{σ(k+1)}⋯b_{σ(n)} · e`.
    pub fn smash_product(&self, xi: FormMask, letters: &[usize], eta: FormMask, e: &Sparse<MultiIndex>) -> Sparse<(FormMask, MultiIndex)> {
        let n = letters.len();
        let mut out = Sparse::new();
        for mask in 0u32..(1 << n) {
            let acting: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).map(|i| letters[i]).collect();
            let staying: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) == 0).map(|i| letters[i]).collect();
            let form = form_mul(&Sparse::basis(xi), &self.nabla_letters(&acting, &Sparse::basis(eta)));
            if form.is_zero() {
                continue;
            }
            let mut u = e.clone();
            for &l in staying.iter().rev() {
                u = self.pair.uq.act(&self.pair.j_letters(l), &u);
            }
            for (f, cf) in &form {
                for (m, cm) in &u {
                    out.add_term((*f, *m), cf * cm);
                }
            }
        }
        out
    }

    /// `φ ⋆ ψ = Σ_i (−1)^{iv + u|η|} ξ ∧ (d_i^{(1)}·η) ⊗ d_0 ⊗ ⋯ ⊗ (Δ^v d_i^{(2)})·ψ ⊗ ⋯ ⊗ d_u`
    /// for `φ = ξ ⊗ d_0 ⊗ ⋯ ⊗ d_u`, `ψ = η ⊗ e_0 ⊗ ⋯ ⊗ e_v`.
    pub fn star(&self, x: &DKey, y: &DKey) -> Sparse<DKey> {
        let u = x.u.len() as i64 - 1;
        let v = y.u.len() as i64 - 1;
        let mut out = Sparse::new();
        if u < 0 {
            return out;
        }
        let eta = y.a.count_ones() as i64;
        for i in 0..x.u.len() {
            let s = sign(i as i64 * v + u * eta);
            for (k, ck) in &self.x_to_y(&x.u[i]) {
                for (parts, cp) in sym_comul_iter(k, y.u.len() + 1) {
                    let form = form_mul(&Sparse::basis(x.a), &self.nabla_letters(&parts[0].letters(), &Sparse::basis(y.a)));
                    if form.is_zero() {
                        continue;
                    }
                    let mut slots: Sparse<Vec<MultiIndex>> = Sparse::term(Vec::new(), one());
                    for (t, e) in y.u.iter().enumerate() {
                        let image = self.y_times(&parts[t + 1], &Sparse::basis(*e));
                        let mut next = Sparse::new();
                        for (prefix, c) in &slots {
                            for (m, d) in &image {
                                let mut w = prefix.clone();
                                w.push(*m);
                                next.add_term(w, c * d);
                            }
                        }
                        slots = next;
                    }
                    let coef = ck * &cp * &s;
                    for (f, cf) in &form {
                        for (middle, cm) in &slots {
                            let mut w = x.u[..i].to_vec();
                            w.extend_from_slice(middle);
                            w.extend_from_slice(&x.u[i + 1..]);
                            out.add_term(DKey { a: *f, u: w }, &coef * cf * cm);
                        }
                    }
                }
            }
        }
        out
    }

    /// `[φ, ψ] = φ ⋆ ψ − (−1)^{|φ||ψ|} ψ ⋆ φ` with total degrees.
    pub fn gerstenhaber(&self, x: &DKey, y: &DKey) -> Sparse<DKey> {
        let e = x.degree() as i64 * y.degree() as i64;
        self.star(x, y).minus(&self.star(y, x).scaled(&sign(e)))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MatchedComparison {
    pub reports: Vec<IdentityReport>,
}

impl MatchedComparison {
    pub fn passed(&self) -> bool {
        self.reports.iter().all(|r| r.passed())
    }
}

/// Compares two binary operations on every pair of inputs and reports the first difference.
pub fn compare_binary<S: Ord + Clone + std::fmt::Debug>(
    identity: &str,
    basis: &[S],
    mut keep: impl FnMut(&S, &S) -> bool,
    mut lhs: impl FnMut(&S, &S) -> Result<Sparse<S>, CoreError>,
    mut rhs: impl FnMut(&S, &S) -> Sparse<S>,
    depth: i64,
) -> Result<IdentityReport, CoreError> {
    let mut checked = 0;
    let mut witness = None;
    for x in basis {
        for y in basis {
            if !keep(x, y) {
                continue;
            }
            checked += 1;
            let diff = lhs(x, y)?.minus(&rhs(x, y));
            if witness.is_none() && !diff.is_zero() {
                let (k, c) = diff.iter().next().unwrap();
                witness = Some(format!("inputs ({x:?}, {y:?}): difference {} at {k:?}", to_string(c)));
            }
        }
    }
    Ok(IdentityReport { identity: identity.to_string(), status: Status::from_witness(&witness), checked, depth, witness })
}
