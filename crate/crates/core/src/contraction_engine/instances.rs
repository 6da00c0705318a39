use crate::graded_core::forms::{FormMask, Word};
use crate::graded_core::multi_index::MultiIndex;
use crate::graded_core::scalar::one;
use crate::graded_core::sparse::Sparse;
use crate::lie_pair::ce::{frak_d_h_bracket_key, DKey, TKey};
use crate::pbw::PbwMap;
use crate::poly_structures::{BigCtx, DFiber, DTuple, TFiber};

use super::{Contraction, Grading, Map, Perturbed};

pub type BigT = (Word, FormMask);
pub type BigD = (Word, DTuple);

fn max_steps<F: crate::poly_structures::Fiber>(ctx: &BigCtx<F>) -> usize {
    2 * ctx.homog_cap as usize + ctx.pair.r + 8
}

/// `(σ̃, τ̃, h̃)` between `(Λ L^∨ ⊗ T_poly, −δ̃)` and `(Λ A^∨ ⊗ Λ^{•+1}B, 0)`,
/// perturbed by `ϱ = d_L ⊗ id + [∇ + X, −]`.
pub fn instantiate_tpoly<'a>(ctx: &'a BigCtx<'a, TFiber>) -> (Perturbed<'a, TKey, BigT>, Grading<'a, TKey, BigT>) {
    let zero = MultiIndex::zero(ctx.pair.r);
    let sigma: Map<'a, BigT, TKey> = Box::new(move |x| {
        let mut out = Sparse::new();
        for ((w, b), c) in x {
            if let Some(a) = ctx.weyl.sigma_word(w) {
                out.add_term(TKey { a, b: *b }, c.clone());
            }
        }
        out
    });
    let tau: Map<'a, TKey, BigT> = Box::new(move |x| x.map_keys(|k| (Word::new(k.a, zero), k.b)));
    let base = Contraction {
        sigma,
        tau,
        h: Box::new(move |x| ctx.h_tilde(x)),
        d_big: Box::new(move |x| ctx.d0(x)),
        d_small: Box::new(|_| Sparse::new()),
    };
    let grading = Grading { small: Box::new(|k: &TKey| -(k.b.count_ones() as i64)), big: Box::new(move |k: &BigT| ctx.homog(k)), cap: ctx.homog_cap };
    (Perturbed { base, rho: Box::new(move |x| ctx.rho(x)), max_steps: max_steps(ctx) }, grading)
}

/// `f(u_0) ⊗ ⋯ ⊗ f(u_k)` expanded.
pub fn tensor_map(u: &[MultiIndex], f: impl Fn(&MultiIndex) -> Sparse<MultiIndex>) -> Sparse<Vec<MultiIndex>> {
    let mut acc: Sparse<Vec<MultiIndex>> = Sparse::term(Vec::new(), one());
    for j in u {
        let image = f(j);
        let mut next = Sparse::new();
        for (prefix, c) in &acc {
            for (v, d) in &image {
                let mut t = prefix.clone();
                t.push(*v);
                next.add_term(t, c * d);
            }
        }
        acc = next;
    }
    acc
}

/// `σ̃ = σ ⊗ pbw^{⊗k+1}`, `τ̃ = τ ⊗ (pbw^{-1})^{⊗k+1}`, `h̃ = h ⊗ id` between
/// `(Λ L^∨ ⊗ D_poly, −δ̃ + [m, −])` and `(Λ A^∨ ⊗ (U(L)/U(L)A)^{⊗•+1}, (−1)^{p+k} id ⊗ d_H)`,
/// perturbed by `ϱ`. `pbw.cap` bounds the order of the slots that reach `σ̃`.
pub fn instantiate_dpoly<'a>(ctx: &'a BigCtx<'a, DFiber>, pbw: &'a PbwMap) -> (Perturbed<'a, DKey, BigD>, Grading<'a, DKey, BigD>) {
    let zero = MultiIndex::zero(ctx.pair.r);
    let pair = ctx.pair;
    let sigma: Map<'a, BigD, DKey> = Box::new(move |x| {
        let mut out = Sparse::new();
        for ((w, t), c) in x {
            let Some(a) = ctx.weyl.sigma_word(w) else { continue };
            for (u, d) in &tensor_map(t, |j| pbw.pbw_basis(j).clone()) {
                out.add_term(DKey { a, u: u.clone() }, c * d);
            }
        }
        out
    });
    let tau: Map<'a, DKey, BigD> = Box::new(move |x| {
        let mut out = Sparse::new();
        for (k, c) in x {
            for (t, d) in &tensor_map(&k.u, |j| pbw.pbw_inv_basis(j).clone()) {
                out.add_term((Word::new(k.a, zero), t.clone()), c * d);
            }
        }
        out
    });
    let base = Contraction {
        sigma,
        tau,
        h: Box::new(move |x| ctx.h_tilde(x)),
        d_big: Box::new(move |x| ctx.d0(x)),
        d_small: Box::new(move |x| x.map_linear(|k| frak_d_h_bracket_key(pair, k))),
    };
    let grading = Grading { small: Box::new(|k: &DKey| -(k.weight() as i64)), big: Box::new(move |k: &BigD| ctx.homog(k)), cap: ctx.homog_cap };
    (Perturbed { base, rho: Box::new(move |x| ctx.rho(x)), max_steps: max_steps(ctx) }, grading)
}
