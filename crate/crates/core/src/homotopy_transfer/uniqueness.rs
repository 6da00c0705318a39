//! Comparison of the polydifferential pipelines of two choices `(j₁,∇₁)`, `(j₂,∇₂)`
//! through `ψ = pbw₁^{-1} ∘ pbw₂`, its transpose `ψ^∨` on `Ŝ B^∨`, and the induced
//! `ψ^∨_*(D) = ψ^∨ ∘ D ∘ ((ψ^∨)^{-1} ⊗ ⋯)` on polydifferential operators.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use crate::contraction_engine::{BigD, ContractionMaps, IdentityReport, Perturbed, Status};
use crate::error::CoreError;
use crate::graded_core::comul::differentiate;
use crate::graded_core::forms::{pushforward_form, FormMask, Word};
use crate::graded_core::multi_index::MultiIndex;
use crate::graded_core::scalar::{one, to_string};
use crate::graded_core::sparse::Sparse;
use crate::lie_pair::ce::DKey;
use crate::lie_pair::LiePair;
use crate::pbw::{dual_map, Transition};
use crate::poly_structures::{BigCtx, DFiber, DTuple};

/// `ψ^∨`, its inverse, and `ψ^∨_*` on normal-form operators `χ^I ∂^{J_0} ⊗ ⋯ ⊗ ∂^{J_k}`.
///
/// Series are exact up to `χ`-weight `cap`, the weight of the PBW tables.
pub struct Pushforward {
    pub rank: usize,
    pub cap: u32,
    dual: BTreeMap<MultiIndex, Sparse<MultiIndex>>,
    dual_inv: BTreeMap<MultiIndex, Sparse<MultiIndex>>,
    slots: Mutex<HashMap<MultiIndex, Vec<(MultiIndex, Sparse<MultiIndex>)>>>,
}

fn times_monomial(f: &Sparse<MultiIndex>, m: &MultiIndex, cap: u32) -> Sparse<MultiIndex> {
    let mut out = Sparse::new();
    for (k, c) in f {
        let p = k.add(m);
        if p.weight() <= cap {
            out.add_term(p, c.clone());
        }
    }
    out
}

fn mul_series(f: &Sparse<MultiIndex>, g: &Sparse<MultiIndex>, cap: u32) -> Sparse<MultiIndex> {
    let mut out = Sparse::new();
    for (k, c) in g {
        out.add_scaled(&times_monomial(f, k, cap), c);
    }
    out
}

impl Pushforward {
    pub fn new(rank: usize, t: &Transition) -> Self {
        let mut dual = BTreeMap::new();
        let mut dual_inv = BTreeMap::new();
        for k in MultiIndex::up_to(rank, t.cap) {
            dual.insert(k, dual_map(&t.psi, &k));
            dual_inv.insert(k, dual_map(&t.psi_inv, &k));
        }
        Pushforward { rank, cap: t.cap, dual, dual_inv, slots: Mutex::new(HashMap::new()) }
    }

    fn apply_table(table: &BTreeMap<MultiIndex, Sparse<MultiIndex>>, f: &Sparse<MultiIndex>, cap: u32) -> Sparse<MultiIndex> {
        let mut out = Sparse::new();
        for (k, c) in f {
            if k.weight() <= cap {
                out.add_scaled(&table[k].filtered(|m| m.weight() <= cap), c);
            }
        }
        out
    }

    /// `ψ^∨(f)` up to weight `cap`.
    pub fn dual(&self, f: &Sparse<MultiIndex>, cap: u32) -> Sparse<MultiIndex> {
        Self::apply_table(&self.dual, f, cap.min(self.cap))
    }

    /// `(ψ^∨)^{-1}(f)` up to weight `cap`.
    pub fn dual_inv(&self, f: &Sparse<MultiIndex>, cap: u32) -> Sparse<MultiIndex> {
        Self::apply_table(&self.dual_inv, f, cap.min(self.cap))
    }

    /// Normal form `Σ_M g_M ∂^M` of `ψ^∨ ∘ ∂^J ∘ (ψ^∨)^{-1}`, with `g_M` exact up to
    /// weight `cap − |J|`. The coefficients are recovered from the values on
    /// monomials: `P(χ^M) = Σ_{M' ≺ M} g_{M'} M!/(M−M')! χ^{M−M'}`.
    pub fn slot(&self, j: &MultiIndex) -> Vec<(MultiIndex, Sparse<MultiIndex>)> {
        if let Some(v) = self.slots.lock().unwrap().get(j) {
            return v.clone();
        }
        let w = self.cap.saturating_sub(j.weight());
        let mut g: Vec<(MultiIndex, Sparse<MultiIndex>)> = Vec::new();
        for m in MultiIndex::up_to(self.rank, j.weight()) {
            let pre = self.dual_inv(&Sparse::basis(m), self.cap);
            let mut derived = Sparse::new();
            for (k, c) in &pre {
                if let Some((f, rest)) = differentiate(j, k) {
                    derived.add_term(rest, c * f);
                }
            }
            let mut value = self.dual(&derived, w);
            for (mp, gmp) in &g {
                if let Some((f, rest)) = differentiate(mp, &m) {
                    if *mp != m {
                        value.add_scaled(&times_monomial(gmp, &rest, w), &-f);
                    }
                }
            }
            let coef = value.scaled(&(one() / m.factorial()));
            if !coef.is_zero() {
                g.push((m, coef));
            }
        }
        self.slots.lock().unwrap().insert(*j, g.clone());
        g
    }

    /// `ψ^∨_*(χ^I ∂^{J_0} ⊗ ⋯)` with terms of homogeneity above `homog_cap` dropped.
    pub fn apply(&self, x: &(MultiIndex, DTuple), homog_cap: i64) -> Result<Sparse<(MultiIndex, DTuple)>, CoreError> {
        let (i, tuple) = x;
        let order: u32 = tuple.iter().map(|j| j.weight()).sum();
        let widest = tuple.iter().map(|j| j.weight()).max().unwrap_or(0);
        let need = homog_cap + (order + widest) as i64;
        if need > self.cap as i64 {
            return Err(CoreError::TruncationTooSmall { required: need.max(0) as u32, given: self.cap });
        }
        let w = (homog_cap + order as i64).max(0) as u32;
        let mut terms: Vec<(Sparse<MultiIndex>, DTuple)> = vec![(self.dual(&Sparse::basis(*i), w), Vec::new())];
        for j in tuple {
            let mut next = Vec::new();
            for (f, prefix) in &terms {
                for (m, g) in self.slot(j) {
                    let prod = mul_series(f, &g, w);
                    if prod.is_zero() {
                        continue;
                    }
                    let mut t = prefix.clone();
                    t.push(m);
                    next.push((prod, t));
                }
            }
            terms = next;
        }
        let mut out = Sparse::new();
        for (f, t) in terms {
            let ord: i64 = t.iter().map(|m| m.weight() as i64).sum();
            for (k, c) in &f {
                if k.weight() as i64 - ord <= homog_cap {
                    out.add_term((*k, t.clone()), c.clone());
                }
            }
        }
        Ok(out)
    }
}

/// Images of the frame-1 forms `λ^{(1)}_m = Σ_l (P₁^{-1}P₂)[m][l] λ^{(2)}_l`.
pub fn form_transport(p1: &LiePair, p2: &LiePair) -> Vec<Sparse<FormMask>> {
    let t = p1.frame_inv.mul(&p2.frame);
    (0..p1.n).map(|m| (0..p1.n).map(|l| (1u32 << l, t.get(m, l).clone())).collect()).collect()
}

/// `id ⊗ ψ^∨_*` from the frame-1 big complex to the frame-2 big complex.
pub struct BigTransport<'a> {
    pub forms: Vec<Sparse<FormMask>>,
    pub push: &'a Pushforward,
    pub homog_cap: i64,
}

impl BigTransport<'_> {
    pub fn apply(&self, x: &Sparse<BigD>) -> Result<Sparse<BigD>, CoreError> {
        let mut out = Sparse::new();
        for ((w, t), c) in x {
            let forms = pushforward_form(w.form, &self.forms);
            let fiber = self.push.apply(&(w.sym, t.clone()), self.homog_cap)?;
            for (f, cf) in &forms {
                for ((i, u), cu) in &fiber {
                    out.add_term((Word::new(*f, *i), u.clone()), c * cf * cu);
                }
            }
        }
        Ok(out)
    }
}

fn first_difference<K: Ord + Clone + std::fmt::Debug>(diff: &Sparse<K>) -> String {
    let (k, c) = diff.iter().next().expect("nonzero");
    format!("difference {} at {k:?}", to_string(c))
}

/// `σ_{♮,2} ∘ (id ⊗ ψ^∨_*) ∘ τ'_{♮,1} = id` on every small basis element.
pub fn uniqueness_check(
    pert1: &Perturbed<'_, DKey, BigD>,
    pert2: &Perturbed<'_, DKey, BigD>,
    transport: &BigTransport,
    basis: &[DKey],
) -> Result<IdentityReport, CoreError> {
    let mut witness = None;
    for x in basis {
        let e = Sparse::basis(x.clone());
        let y = pert2.sigma(&transport.apply(&pert1.tau(&e)?)?)?;
        let diff = y.minus(&e);
        if witness.is_none() && !diff.is_zero() {
            witness = Some(format!("input {x:?}: {}", first_difference(&diff)));
        }
    }
    Ok(IdentityReport {
        identity: "sigma_2 (id x psi_*) tau'_1 = id".into(),
        status: Status::from_witness(&witness),
        checked: basis.len(),
        depth: transport.homog_cap,
        witness,
    })
}

/// `(id ⊗ ψ^∨_*) ∘ [Q₁ + m, −] = [Q₂ + m, −] ∘ (id ⊗ ψ^∨_*)` on big basis elements,
/// compared below the homogeneity cap.
pub fn intertwining_check(
    ctx1: &BigCtx<'_, DFiber>,
    ctx2: &BigCtx<'_, DFiber>,
    transport: &BigTransport,
    basis: &[BigD],
) -> Result<IdentityReport, CoreError> {
    let level = ctx1.homog_cap.min(ctx2.homog_cap) - 1;
    let mut witness = None;
    for b in basis {
        let e = Sparse::basis(b.clone());
        let lhs = transport.apply(&ctx1.total(&e))?;
        let rhs = ctx2.total(&transport.apply(&e)?);
        let diff = lhs.minus(&rhs).filtered(|k| ctx2.homog(k) <= level);
        if witness.is_none() && !diff.is_zero() {
            witness = Some(format!("input {b:?}: {}", first_difference(&diff)));
        }
    }
    Ok(IdentityReport {
        identity: "(id x psi_*) [Q1 + m, -] = [Q2 + m, -] (id x psi_*)".into(),
        status: Status::from_witness(&witness),
        checked: basis.len(),
        depth: level,
        witness,
    })
}
