//! Exterior-algebra words, Koszul signs, and the graded-commutative product on
//! `Λ•L^∨ ⊗ Ŝ B^∨`.
//!
//! A form word is a bitmask over the frame `λ^0, …, λ^{n-1}` of `L^∨`; the frame
//! lists the `A^∨` generators first and the `B^∨` generators after them, so
//! `λ^{dimA + k}` is the one-form `q^⊤χ_k`. Every word is read in increasing
//! bit order.

use super::multi_index::MultiIndex;
use super::scalar::Scalar;
use super::sparse::Sparse;
use crate::error::CoreError;

pub type FormMask = u32;

pub fn degree(m: FormMask) -> u32 {
    m.count_ones()
}

/// Sign of `λ_x ∧ λ_y` against the sorted word `λ_{x∪y}`: `Some(true)` for `−1`,
/// `None` when the words share a generator.
pub fn wedge_sign(x: FormMask, y: FormMask) -> Option<bool> {
    if x & y != 0 {
        return None;
    }
    let mut swaps = 0u32;
    let mut rest = y;
    while rest != 0 {
        let j = rest.trailing_zeros();
        rest &= rest - 1;
        swaps += (x >> j >> 1).count_ones();
    }
    Some(swaps % 2 == 1)
}

/// Left interior product by the frame vector dual to `λ^k`: returns the sign and
/// the remaining word, or `None` when `k` is absent.
pub fn contract_sign(k: u32, m: FormMask) -> Option<(bool, FormMask)> {
    if m & (1 << k) == 0 {
        return None;
    }
    let below = (m & ((1u32 << k) - 1)).count_ones();
    Some((below % 2 == 1, m & !(1 << k)))
}

/// Indices of the set bits, ascending.
pub fn bits(m: FormMask) -> impl Iterator<Item = u32> {
    let mut rest = m;
    std::iter::from_fn(move || {
        if rest == 0 {
            None
        } else {
            let j = rest.trailing_zeros();
            rest &= rest - 1;
            Some(j)
        }
    })
}

/// Monomial `λ^{form} ⊗ χ^{sym}` of `Λ•L^∨ ⊗ Ŝ B^∨`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Word {
    pub form: FormMask,
    pub sym: MultiIndex,
}

impl Word {
    pub fn new(form: FormMask, sym: MultiIndex) -> Self {
        Word { form, sym }
    }

    /// The `Λ A^∨` factor.
    pub fn a_part(&self, dim_a: usize) -> FormMask {
        self.form & ((1u32 << dim_a) - 1)
    }

    /// The `Λ B^∨` factor, re-indexed from 0.
    pub fn b_part(&self, dim_a: usize) -> FormMask {
        self.form >> dim_a
    }

    /// Cohomological degree `|aPart| + |bFormPart|`.
    pub fn degree(&self) -> u32 {
        degree(self.form)
    }

    pub fn weight(&self) -> u32 {
        self.sym.weight()
    }
}

/// Product in the exterior algebra on form words.
pub fn form_mul(x: &Sparse<FormMask>, y: &Sparse<FormMask>) -> Sparse<FormMask> {
    let mut out = Sparse::new();
    for (a, ca) in x {
        for (b, cb) in y {
            if let Some(neg) = wedge_sign(*a, *b) {
                let c: Scalar = ca * cb;
                out.add_term(a | b, if neg { -c } else { c });
            }
        }
    }
    out
}

/// Replaces the letter `b` of the word `m` by `k` in place and re-sorts:
/// `∂_{<b} ∧ ∂_k ∧ ∂_{>b}`. `None` if `k` already occurs elsewhere.
pub fn replace_letter(m: FormMask, b: u32, k: u32) -> Option<(bool, FormMask)> {
    debug_assert!(m & (1 << b) != 0);
    let rest = m & !(1 << b);
    if rest & (1 << k) != 0 {
        return None;
    }
    let before = (rest & ((1u32 << b) - 1)).count_ones();
    let below_k = (rest & ((1u32 << k) - 1)).count_ones();
    Some(((before + below_k) % 2 == 1, rest | (1 << k)))
}

/// Product of two monomials, or `None` if it vanishes.
pub fn word_mul(x: &Word, y: &Word) -> Option<(bool, Word)> {
    let neg = wedge_sign(x.form, y.form)?;
    Some((neg, Word::new(x.form | y.form, x.sym.add(&y.sym))))
}

/// Graded-commutative product; terms of symmetric weight above `cap` are dropped and
/// reported through the returned flag.
pub fn wedge_mul(
    x: &Sparse<Word>,
    y: &Sparse<Word>,
    cap: Option<u32>,
) -> Result<(Sparse<Word>, bool), CoreError> {
    let rank = |s: &Sparse<Word>| s.keys().next().map(|w| w.sym.rank());
    if let (Some(a), Some(b)) = (rank(x), rank(y)) {
        if a != b {
            return Err(CoreError::Dimension(format!("rank {a} against rank {b}")));
        }
    }
    Ok(wedge_mul_unchecked(x, y, cap))
}

pub fn wedge_mul_unchecked(x: &Sparse<Word>, y: &Sparse<Word>, cap: Option<u32>) -> (Sparse<Word>, bool) {
    let mut out = Sparse::new();
    let mut truncated = false;
    for (wx, cx) in x {
        for (wy, cy) in y {
            if let Some((neg, w)) = word_mul(wx, wy) {
                if cap.is_some_and(|c| w.weight() > c) {
                    truncated = true;
                    continue;
                }
                let c = cx * cy;
                out.add_term(w, if neg { -c } else { c });
            }
        }
    }
    (out, truncated)
}

/// `ι_k` on every term: the interior product by the frame vector dual to `λ^k`.
pub fn contract(k: u32, x: &Sparse<Word>) -> Sparse<Word> {
    let mut out = Sparse::new();
    for (w, c) in x {
        if let Some((neg, m)) = contract_sign(k, w.form) {
            out.add_term(Word::new(m, w.sym), if neg { -c.clone() } else { c.clone() });
        }
    }
    out
}

/// Image of a form word under the algebra map induced by `λ^i ↦ images[i]`.
pub fn pushforward_form(m: FormMask, images: &[Sparse<FormMask>]) -> Sparse<FormMask> {
    let mut acc: Sparse<FormMask> = Sparse::basis(0);
    for i in bits(m) {
        let mut next = Sparse::new();
        for (a, ca) in &acc {
            for (b, cb) in &images[i as usize] {
                if let Some(neg) = wedge_sign(*a, *b) {
                    let c: Scalar = ca * cb;
                    next.add_term(a | b, if neg { -c } else { c });
                }
            }
        }
        acc = next;
    }
    acc
}
