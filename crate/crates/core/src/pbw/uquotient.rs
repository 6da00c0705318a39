//! Normal form in `U(L)/U(L)A` for a Lie algebra given in an input basis.
//!
//! Ordered monomials put the complement generators first (in their input order)
//! and the `A` generators last; the ordered monomials free of `A` letters form a
//! basis of the quotient, indexed by a `MultiIndex` over the complement.

use std::collections::HashMap;
use std::sync::Mutex;

use crate::graded_core::multi_index::MultiIndex;
use crate::graded_core::scalar::Scalar;
use crate::graded_core::sparse::Sparse;
use num_traits::Zero;

#[derive(Debug)]
pub struct UQuotient {
    /// `[x_i, x_j]` in input coordinates.
    bracket: Vec<Vec<Vec<(usize, Scalar)>>>,
    /// Position of each input letter among the complement generators, if any.
    comp_pos: Vec<Option<usize>>,
    comp_idx: Vec<usize>,
    memo: Mutex<HashMap<(usize, MultiIndex), Sparse<MultiIndex>>>,
}

impl UQuotient {
    pub fn new(bracket: &[Vec<Vec<Scalar>>], comp_idx: &[usize], _a_idx: &[usize]) -> Self {
        let n = bracket.len();
        let sparse_bracket = bracket
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (k, c.clone())).collect())
                    .collect()
            })
            .collect();
        let mut comp_pos = vec![None; n];
        for (p, &c) in comp_idx.iter().enumerate() {
            comp_pos[c] = Some(p);
        }
        UQuotient { bracket: sparse_bracket, comp_pos, comp_idx: comp_idx.to_vec(), memo: Mutex::new(HashMap::new()) }
    }

    pub fn rank(&self) -> usize {
        self.comp_idx.len()
    }

    /// The class of `x_letter · x^K`.
    pub fn left_mult(&self, letter: usize, k: &MultiIndex) -> Sparse<MultiIndex> {
        if let Some(v) = self.memo.lock().unwrap().get(&(letter, *k)) {
            return v.clone();
        }
        let v = self.left_mult_uncached(letter, k);
        self.memo.lock().unwrap().insert((letter, *k), v.clone());
        v
    }

    fn left_mult_uncached(&self, letter: usize, k: &MultiIndex) -> Sparse<MultiIndex> {
        let first = k.first_letter();
        match (self.comp_pos[letter], first) {
            (None, None) => Sparse::new(),
            (Some(p), None) => Sparse::basis(k.add_unit(p)),
            (Some(p), Some(m)) if p <= m => Sparse::basis(k.add_unit(p)),
            (_, Some(m)) => {
                // x_l x_m ρ = x_m (x_l ρ) + [x_l, x_m] ρ
                let rest = k.sub_unit(m).expect("first letter");
                let xm = self.comp_idx[m];
                let mut out = Sparse::new();
                for (w, c) in &self.left_mult(letter, &rest) {
                    out.add_scaled(&self.left_mult(xm, w), c);
                }
                for (t, c) in &self.bracket[letter][xm] {
                    out.add_scaled(&self.left_mult(*t, &rest), c);
                }
                out
            }
        }
    }

    pub fn left_mult_elem(&self, letter: usize, u: &Sparse<MultiIndex>) -> Sparse<MultiIndex> {
        u.map_linear(|k| self.left_mult(letter, k))
    }

    /// Left multiplication by `Σ c_m x_m`.
    pub fn act(&self, element: &[(usize, Scalar)], u: &Sparse<MultiIndex>) -> Sparse<MultiIndex> {
        let mut out = Sparse::new();
        for (m, c) in element {
            out.add_scaled(&self.left_mult_elem(*m, u), c);
        }
        out
    }

    /// The class of the word `x_{w_0} x_{w_1} ⋯`.
    pub fn normalize(&self, word: &[usize]) -> Sparse<MultiIndex> {
        let mut acc = Sparse::basis(MultiIndex::zero(self.rank()));
        for &l in word.iter().rev() {
            acc = self.left_mult_elem(l, &acc);
        }
        acc
    }
}
