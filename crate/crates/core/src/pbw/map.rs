//! The PBW isomorphism `S B → U(L)/U(L)A` of a splitting and connection, the flat
//! connection `∇^⚡` it induces, and transition maps between two choices.

use std::collections::BTreeMap;

use crate::error::CoreError;
use crate::graded_core::multi_index::MultiIndex;
use crate::graded_core::scalar::{int, Scalar};
use crate::graded_core::sparse::Sparse;
use crate::lie_pair::{Connection, LiePair};
use num_traits::Zero;

/// `∇_{e_l}` on `∂^J ∈ S B`, extended as a derivation.
pub fn nabla_sym(conn: &Connection, l: usize, j: &MultiIndex) -> Sparse<MultiIndex> {
    let mut out = Sparse::new();
    for m in 0..j.rank() {
        let jm = j.get(m);
        if jm == 0 {
            continue;
        }
        let rest = j.sub_unit(m).unwrap();
        for (k, g) in conn.gamma[l][m].iter().enumerate() {
            if !g.is_zero() {
                out.add_term(rest.add_unit(k), g * int(jm as i64));
            }
        }
    }
    out
}

/// Per-weight tables of `pbw` and its inverse up to weight `cap`.
#[derive(Clone, Debug)]
pub struct PbwMap {
    pub cap: u32,
    forward: BTreeMap<MultiIndex, Sparse<MultiIndex>>,
    inverse: BTreeMap<MultiIndex, Sparse<MultiIndex>>,
}

impl PbwMap {
    /// `pbw(∂^J) = 1/|J| Σ_m J_m [ j(∂_m)·pbw(∂^{J−e_m}) − pbw(∇_{j∂_m} ∂^{J−e_m}) ]`.
    pub fn build(pair: &LiePair, conn: &Connection, cap: u32) -> Self {
        let r = pair.r;
        let mut forward: BTreeMap<MultiIndex, Sparse<MultiIndex>> = BTreeMap::new();
        let mut inverse: BTreeMap<MultiIndex, Sparse<MultiIndex>> = BTreeMap::new();
        for w in 0..=cap {
            for j in MultiIndex::of_weight(r, w) {
                let v = if w == 0 {
                    Sparse::basis(j)
                } else {
                    let mut acc = Sparse::new();
                    for m in 0..r {
                        let jm = j.get(m);
                        if jm == 0 {
                            continue;
                        }
                        let rest = j.sub_unit(m).unwrap();
                        let mut term = pair.uq.act(&pair.j_letters(m), &forward[&rest]);
                        for (k, c) in &nabla_sym(conn, pair.dim_a + m, &rest) {
                            term.add_scaled(&forward[k], &-c.clone());
                        }
                        acc.add_scaled(&term, &int(jm as i64));
                    }
                    acc.scaled(&Scalar::new(1.into(), (w as i64).into()))
                };
                forward.insert(j, v);
            }
            // pbw(∂^K) = x^K + lower weight, so invert by back substitution
            for k in MultiIndex::of_weight(r, w) {
                let mut v = Sparse::basis(k);
                for (lower, c) in &forward[&k] {
                    if *lower == k {
                        debug_assert!(c == &int(1));
                        continue;
                    }
                    debug_assert!(lower.weight() < w);
                    v.add_scaled(&inverse[lower], &-c.clone());
                }
                inverse.insert(k, v);
            }
        }
        PbwMap { cap, forward, inverse }
    }

    fn check(&self, x: &Sparse<MultiIndex>) -> Result<(), CoreError> {
        match x.keys().map(|k| k.weight()).max() {
            Some(w) if w > self.cap => Err(CoreError::WeightOverflow { weight: w, cap: self.cap }),
            _ => Ok(()),
        }
    }

    pub fn pbw_basis(&self, j: &MultiIndex) -> &Sparse<MultiIndex> {
        &self.forward[j]
    }

    pub fn pbw_inv_basis(&self, k: &MultiIndex) -> &Sparse<MultiIndex> {
        &self.inverse[k]
    }

    pub fn pbw(&self, s: &Sparse<MultiIndex>) -> Result<Sparse<MultiIndex>, CoreError> {
        self.check(s)?;
        Ok(s.map_linear(|j| self.forward[j].clone()))
    }

    pub fn pbw_inv(&self, u: &Sparse<MultiIndex>) -> Result<Sparse<MultiIndex>, CoreError> {
        self.check(u)?;
        Ok(u.map_linear(|k| self.inverse[k].clone()))
    }

    /// `∇^⚡_{e_l}(s) = pbw^{-1}(e_l · pbw(s))`.
    pub fn nabla_flash(&self, pair: &LiePair, l: usize, s: &Sparse<MultiIndex>) -> Result<Sparse<MultiIndex>, CoreError> {
        let u = pair.uq.act(&pair.frame_letters(l), &self.pbw(s)?);
        self.pbw_inv(&u)
    }
}

impl PbwMap {
    /// `∇^⚡_{e_l}` as a vertical vector field `Σ_k θ_k ∂_k` on `B`: the dual
    /// derivation of `Ŝ B^∨`, with `θ_k = −Σ_M ⟨χ_k, ∇^⚡_{e_l}∂^M⟩/M! · χ^M` for
    /// `1 ≤ |M| ≤ max_weight`.
    pub fn flash_vector_field(&self, pair: &LiePair, l: usize, max_weight: u32) -> Result<Vec<Sparse<MultiIndex>>, CoreError> {
        let r = pair.r;
        let mut theta = vec![Sparse::new(); r];
        for m in MultiIndex::up_to(r, max_weight) {
            if m.weight() == 0 {
                continue;
            }
            let image = self.nabla_flash(pair, l, &Sparse::basis(m))?;
            for (k, t) in theta.iter_mut().enumerate() {
                let c = image.coefficient(&MultiIndex::unit(r, k));
                if !c.is_zero() {
                    t.add_term(m, -c / m.factorial());
                }
            }
        }
        Ok(theta)
    }
}

/// `ψ = pbw₁^{-1} ∘ pbw₂` and its inverse, on `S B` up to weight `cap`.
#[derive(Clone, Debug)]
pub struct Transition {
    pub cap: u32,
    pub psi: BTreeMap<MultiIndex, Sparse<MultiIndex>>,
    pub psi_inv: BTreeMap<MultiIndex, Sparse<MultiIndex>>,
}

impl Transition {
    pub fn new(pbw1: &PbwMap, pbw2: &PbwMap) -> Result<Self, CoreError> {
        if pbw1.cap != pbw2.cap {
            return Err(CoreError::Dimension(format!("PBW caps {} and {}", pbw1.cap, pbw2.cap)));
        }
        let mut psi = BTreeMap::new();
        let mut psi_inv = BTreeMap::new();
        for j in pbw1.forward.keys() {
            psi.insert(*j, pbw1.pbw_inv(pbw2.pbw_basis(j))?);
            psi_inv.insert(*j, pbw2.pbw_inv(pbw1.pbw_basis(j))?);
        }
        Ok(Transition { cap: pbw1.cap, psi, psi_inv })
    }

    pub fn is_identity(&self) -> bool {
        self.psi.iter().all(|(j, v)| *v == Sparse::basis(*j))
    }
}

/// Transpose of an `S B`-linear map under `⟨χ^K, ∂^J⟩ = K! δ_{K,J}`:
/// `f^∨(χ^K) = Σ_J ⟨χ^K, f(∂^J)⟩ / J! · χ^J`.
pub fn dual_map(f: &BTreeMap<MultiIndex, Sparse<MultiIndex>>, k: &MultiIndex) -> Sparse<MultiIndex> {
    let mut out = Sparse::new();
    for (j, image) in f {
        let c = image.coefficient(k);
        if !c.is_zero() {
            out.add_term(*j, c * k.factorial() / j.factorial());
        }
    }
    out
}
