use crate::graded_core::forms::{bits, contract_sign, wedge_mul_unchecked, wedge_sign, FormMask, Word};
use crate::graded_core::multi_index::MultiIndex;
use crate::graded_core::scalar::{int, Scalar};
use crate::graded_core::sparse::Sparse;
use crate::lie_pair::ce::d_l_table;
use crate::lie_pair::{Connection, LiePair};
use num_traits::Zero;

pub type WeylElement = Sparse<Word>;

/// Operator context for one pair, connection and truncation.
pub struct Weyl<'a> {
    pub pair: &'a LiePair,
    pub conn: &'a Connection,
    pub cap: u32,
    dl: Vec<Sparse<FormMask>>,
    /// `∇_{e_l} χ_k = Σ_b nabla_chi[l][k][b] χ_b`, i.e. `−Γ^k_{l,b}`.
    nabla_chi: Vec<Vec<Vec<(usize, Scalar)>>>,
}

impl<'a> Weyl<'a> {
    pub fn new(pair: &'a LiePair, conn: &'a Connection, cap: u32) -> Self {
        let nabla_chi = (0..pair.n)
            .map(|l| {
                (0..pair.r)
                    .map(|k| {
                        (0..pair.r)
                            .filter(|&b| !conn.gamma[l][b][k].is_zero())
                            .map(|b| (b, -conn.gamma[l][b][k].clone()))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Weyl { pair, conn, cap, dl: d_l_table(pair), nabla_chi }
    }

    pub fn with_cap(&self, cap: u32) -> Weyl<'a> {
        Weyl { pair: self.pair, conn: self.conn, cap, dl: self.dl.clone(), nabla_chi: self.nabla_chi.clone() }
    }

    pub fn rank(&self) -> usize {
        self.pair.r
    }

    /// Bit of the one-form `χ_k`.
    pub fn chi_form(&self, k: usize) -> FormMask {
        1 << (self.pair.dim_a + k)
    }

    /// Number of `χ`-form letters of a word.
    pub fn v_degree(&self, w: &Word) -> u32 {
        w.b_part(self.pair.dim_a).count_ones()
    }

    pub fn generator(&self, k: usize) -> WeylElement {
        Sparse::basis(Word::new(0, MultiIndex::unit(self.rank(), k)))
    }

    pub fn form(&self, m: FormMask) -> WeylElement {
        Sparse::basis(Word::new(m, MultiIndex::zero(self.rank())))
    }

    /// `δ(ω χ^J) = Σ_m J_m (χ_m ∧ ω) χ^{J−e_m}`.
    pub fn delta_word(&self, w: &Word) -> WeylElement {
        let mut out = Sparse::new();
        for m in 0..self.rank() {
            let jm = w.sym.get(m);
            if jm == 0 {
                continue;
            }
            if let Some(neg) = wedge_sign(self.chi_form(m), w.form) {
                let c = int(if neg { -(jm as i64) } else { jm as i64 });
                out.add_term(Word::new(w.form | self.chi_form(m), w.sym.sub_unit(m).unwrap()), c);
            }
        }
        out
    }

    /// `h(ω χ^J) = 1/(v+|J|) Σ_k ι_k ω · χ^{J+e_k}` for `v ≥ 1`, zero for `v = 0`.
    pub fn h_word(&self, w: &Word) -> WeylElement {
        let v = self.v_degree(w);
        let mut out = Sparse::new();
        if v == 0 || w.weight() + 1 > self.cap {
            return out;
        }
        let factor = Scalar::new(1.into(), ((v + w.weight()) as i64).into());
        for k in 0..self.rank() {
            let bit = (self.pair.dim_a + k) as u32;
            if let Some((neg, m)) = contract_sign(bit, w.form) {
                out.add_term(Word::new(m, w.sym.add_unit(k)), if neg { -factor.clone() } else { factor.clone() });
            }
        }
        out
    }

    /// `σ` keeps the terms with `v = 0` and `|J| = 0`.
    pub fn sigma_word(&self, w: &Word) -> Option<FormMask> {
        (self.v_degree(w) == 0 && w.weight() == 0).then_some(w.form)
    }

    pub fn delta(&self, x: &WeylElement) -> WeylElement {
        x.map_linear(|w| self.delta_word(w))
    }

    pub fn h(&self, x: &WeylElement) -> WeylElement {
        x.map_linear(|w| self.h_word(w))
    }

    /// `σ`, valued in `Λ A^∨`.
    pub fn sigma(&self, x: &WeylElement) -> Sparse<FormMask> {
        let mut out = Sparse::new();
        for (w, c) in x {
            if let Some(m) = self.sigma_word(w) {
                out.add_term(m, c.clone());
            }
        }
        out
    }

    /// `τ(α) = α ⊗ 1`.
    pub fn tau(&self, a: &Sparse<FormMask>) -> WeylElement {
        a.map_keys(|m| Word::new(*m, MultiIndex::zero(self.rank())))
    }

    /// `σ` followed by `τ`, as an endomorphism of `W`.
    pub fn tau_sigma(&self, x: &WeylElement) -> WeylElement {
        x.filtered(|w| self.sigma_word(w).is_some())
    }

    /// `∇_{e_l}` on `χ^J` as a derivation of `Ŝ B^∨`.
    pub fn nabla_sym(&self, l: usize, j: &MultiIndex) -> Sparse<MultiIndex> {
        let mut out = Sparse::new();
        for k in 0..self.rank() {
            let jk = j.get(k);
            if jk == 0 {
                continue;
            }
            let rest = j.sub_unit(k).unwrap();
            for (b, c) in &self.nabla_chi[l][k] {
                out.add_term(rest.add_unit(*b), c * int(jk as i64));
            }
        }
        out
    }

    /// `d_L^∇(ω g) = d_L ω · g + Σ_l λ^l ∧ ω · ∇_l g`.
    pub fn d_nabla_word(&self, w: &Word) -> WeylElement {
        let mut out = Sparse::new();
        for (m, c) in &self.dl[w.form as usize] {
            out.add_term(Word::new(*m, w.sym), c.clone());
        }
        for l in 0..self.pair.n {
            let Some(neg) = wedge_sign(1 << l, w.form) else { continue };
            for (j, c) in &self.nabla_sym(l, &w.sym) {
                out.add_term(Word::new(w.form | (1 << l), *j), if neg { -c.clone() } else { c.clone() });
            }
        }
        out
    }

    pub fn d_nabla(&self, x: &WeylElement) -> WeylElement {
        x.map_linear(|w| self.d_nabla_word(w))
    }

    /// Drops terms above the cap.
    pub fn truncate(&self, x: &WeylElement) -> WeylElement {
        x.filtered(|w| w.weight() <= self.cap)
    }

    pub fn mul(&self, x: &WeylElement, y: &WeylElement) -> WeylElement {
        wedge_mul_unchecked(x, y, Some(self.cap)).0
    }

    /// Every word of weight at most `max_weight`.
    pub fn basis(&self, max_weight: u32) -> Vec<Word> {
        let mut out = Vec::new();
        for m in 0u32..(1 << self.pair.n) {
            for j in MultiIndex::up_to(self.rank(), max_weight) {
                out.push(Word::new(m, j));
            }
        }
        out
    }

    /// The component of `ω` along the `A`-forms and `χ`-forms separately.
    pub fn split_form(&self, m: FormMask) -> (FormMask, FormMask) {
        let a = self.pair.dim_a;
        (m & ((1 << a) - 1), m >> a)
    }

    /// Letters of the `χ`-form part.
    pub fn chi_letters(&self, m: FormMask) -> Vec<usize> {
        bits(m >> self.pair.dim_a).map(|b| b as usize).collect()
    }
}

/// Derivation `Σ_k Y_k ∂/∂χ_k` with `Y_k = values[k]`:
/// `Y(ω χ^M) = Σ_k Y_k · ω · M_k χ^{M−e_k}`.
pub fn apply_vertical(values: &[WeylElement], x: &WeylElement, cap: u32) -> WeylElement {
    let mut out = Sparse::new();
    for (w, c) in x {
        for (k, yk) in values.iter().enumerate() {
            let mk = w.sym.get(k);
            if mk == 0 || yk.is_zero() {
                continue;
            }
            let rest = Sparse::term(Word::new(w.form, w.sym.sub_unit(k).unwrap()), c * int(mk as i64));
            out.add_assign(&wedge_mul_unchecked(yk, &rest, Some(cap)).0);
        }
    }
    out
}

/// Extends an operator on `W` to `W ⊗ C` acting on the first factor.
pub fn lift<C: Ord + Clone>(op: impl Fn(&Word) -> WeylElement, x: &Sparse<(Word, C)>) -> Sparse<(Word, C)> {
    let mut out = Sparse::new();
    for ((w, coef), c) in x {
        for (v, d) in &op(w) {
            out.add_term((*v, coef.clone()), c * d);
        }
    }
    out
}
