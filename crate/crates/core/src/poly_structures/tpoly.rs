//! Polyvector fields `Ŝ B^∨ ⊗ Λ^{k+1} B` with the Schouten bracket.

use crate::graded_core::forms::{bits, wedge_sign, FormMask};
use crate::graded_core::multi_index::MultiIndex;
use crate::graded_core::scalar::int;
use crate::graded_core::sparse::Sparse;

use super::big::{Fiber, FiberTerm};

/// Coefficient `∂_S = ∂_{s_0} ∧ ⋯`, a bitmask over the `B` frame.
pub struct TFiber {
    pub rank: usize,
}

fn right_xi(s: FormMask, k: u32) -> Option<(bool, FormMask)> {
    if s & (1 << k) == 0 {
        return None;
    }
    let after = (s >> k >> 1).count_ones();
    Some((after % 2 == 1, s & !(1 << k)))
}

fn left_xi(s: FormMask, k: u32) -> Option<(bool, FormMask)> {
    if s & (1 << k) == 0 {
        return None;
    }
    let before = (s & ((1u32 << k) - 1)).count_ones();
    Some((before % 2 == 1, s & !(1 << k)))
}

impl Fiber for TFiber {
    type Coef = FormMask;

    fn arity(&self, c: &FormMask) -> i32 {
        c.count_ones() as i32 - 1
    }

    fn order(&self, c: &FormMask) -> u32 {
        c.count_ones()
    }

    fn vector(&self, k: usize) -> FormMask {
        1 << k
    }

    fn function(&self) -> FormMask {
        0
    }

    /// `(F,G) = Σ_k (F ∂⃖_{ξ_k})(∂_{χ_k} G) − (F ∂⃖_{χ_k})(∂⃗_{ξ_k} G)` with `ξ_k = ∂_k`.
    fn bracket(&self, x: &FiberTerm<FormMask>, y: &FiberTerm<FormMask>) -> Sparse<FiberTerm<FormMask>> {
        let (i, s) = x;
        let (j, t) = y;
        let mut out = Sparse::new();
        for k in 0..self.rank {
            if let (Some((n1, s_rest)), Some(jr)) = (right_xi(*s, k as u32), j.sub_unit(k)) {
                if let Some(n2) = wedge_sign(s_rest, *t) {
                    let c = int(j.get(k) as i64);
                    out.add_term((i.add(&jr), s_rest | t), if n1 ^ n2 { -c } else { c });
                }
            }
            if let (Some(ir), Some((n1, t_rest))) = (i.sub_unit(k), left_xi(*t, k as u32)) {
                if let Some(n2) = wedge_sign(*s, t_rest) {
                    let c = int(i.get(k) as i64);
                    out.add_term((ir.add(j), s | t_rest), if n1 ^ n2 { c } else { -c });
                }
            }
        }
        out
    }

    /// `(χ^I ∂_S)·(χ^J ∂_T) = ±χ^{I+J} ∂_S ∧ ∂_T`.
    fn cup(&self, x: &FiberTerm<FormMask>, y: &FiberTerm<FormMask>) -> Sparse<FiberTerm<FormMask>> {
        match wedge_sign(x.1, y.1) {
            Some(neg) => Sparse::term((x.0.add(&y.0), x.1 | y.1), if neg { int(-1) } else { int(1) }),
            None => Sparse::new(),
        }
    }

    fn cup_degree(&self, c: &FormMask) -> i32 {
        c.count_ones() as i32
    }
}

impl TFiber {
    pub fn letters(s: FormMask) -> Vec<u32> {
        bits(s).collect()
    }

    pub fn basis_coefs(&self) -> Vec<FormMask> {
        (0u32..(1 << self.rank)).collect()
    }

    pub fn unit(&self, i: MultiIndex, s: FormMask) -> FiberTerm<FormMask> {
        (i, s)
    }
}
