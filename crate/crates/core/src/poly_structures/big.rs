use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;
use std::sync::Mutex;

use crate::error::CoreError;
use crate::graded_core::forms::{wedge_sign, FormMask, Word};
use crate::graded_core::multi_index::MultiIndex;
use crate::graded_core::sparse::Sparse;
use crate::lie_pair::ce::d_l_table;
use crate::lie_pair::{Connection, LiePair};
use crate::weyl_fedosov::{lift, solve_fedosov, FedosovData, Weyl, WeylElement};

/// `χ^I ⊗ c`.
pub type FiberTerm<C> = (MultiIndex, C);

/// `Σ ω χ^I ⊗ c`.
pub type BigElement<C> = Sparse<(Word, C)>;

/// A graded Lie algebra of fiberwise operators over `Ŝ B^∨`.
pub trait Fiber {
    type Coef: Ord + Clone + Hash + Eq + Debug;

    /// Lie degree; functions have arity `−1`.
    fn arity(&self, c: &Self::Coef) -> i32;
    /// Number of derivatives carried by `c`.
    fn order(&self, c: &Self::Coef) -> u32;
    /// `∂_k` as a coefficient.
    fn vector(&self, k: usize) -> Self::Coef;
    /// The coefficient of a function.
    fn function(&self) -> Self::Coef;
    fn bracket(&self, x: &FiberTerm<Self::Coef>, y: &FiberTerm<Self::Coef>) -> Sparse<FiberTerm<Self::Coef>>;
    fn cup(&self, x: &FiberTerm<Self::Coef>, y: &FiberTerm<Self::Coef>) -> Sparse<FiberTerm<Self::Coef>>;
    /// Degree used for Koszul signs of the cup product.
    fn cup_degree(&self, c: &Self::Coef) -> i32;
}

/// The `Λ L^∨`-extended fiber algebra for one pair, connection and
/// homogeneity cap, with the vector fields of the Fedosov differential.
///
/// Homogeneity of `ω χ^I ⊗ c` is `|I| − order(c)`; it is additive under the
/// bracket, `δ̃` lowers it by one and every other operator raises it weakly.
/// Terms above `homog_cap` are dropped.
pub struct BigCtx<'a, F: Fiber> {
    pub fiber: F,
    pub pair: &'a LiePair,
    pub weyl: Weyl<'a>,
    pub fedosov: FedosovData,
    pub homog_cap: i64,
    pub delta_vf: BigElement<F::Coef>,
    pub nabla_vf: BigElement<F::Coef>,
    pub x_vf: BigElement<F::Coef>,
    /// Extra fiber element added to the unperturbed differential (`m` for operators).
    pub extra: Option<BigElement<F::Coef>>,
    dl: Vec<Sparse<FormMask>>,
    cache: Mutex<HashMap<(FiberTerm<F::Coef>, FiberTerm<F::Coef>), Sparse<FiberTerm<F::Coef>>>>,
}

fn koszul(neg: bool, k: i64) -> bool {
    neg ^ (k.rem_euclid(2) == 1)
}

impl<'a, F: Fiber> BigCtx<'a, F> {
    pub fn new(pair: &'a LiePair, conn: &'a Connection, fiber: F, homog_cap: u32) -> Result<Self, CoreError> {
        let fed_cap = homog_cap + 2;
        let fed_weyl = Weyl::new(pair, conn, fed_cap);
        let fedosov = solve_fedosov(&fed_weyl, fed_cap)?;
        let weyl = Weyl::new(pair, conn, u32::MAX / 4);
        let r = pair.r;
        let zero = MultiIndex::zero(r);
        let mut delta_vf = Sparse::new();
        for m in 0..r {
            delta_vf.add_term((Word::new(weyl.chi_form(m), zero), fiber.vector(m)), crate::graded_core::scalar::one());
        }
        let mut nabla_vf = Sparse::new();
        for l in 0..pair.n {
            for k in 0..r {
                for (j, c) in &weyl.nabla_sym(l, &MultiIndex::unit(r, k)) {
                    nabla_vf.add_term((Word::new(1 << l, *j), fiber.vector(k)), c.clone());
                }
            }
        }
        let mut x_vf = Sparse::new();
        for (k, v) in fedosov.x.iter().enumerate() {
            for (w, c) in v {
                x_vf.add_term((*w, fiber.vector(k)), c.clone());
            }
        }
        Ok(BigCtx {
            fiber,
            pair,
            weyl,
            fedosov,
            homog_cap: homog_cap as i64,
            delta_vf,
            nabla_vf,
            x_vf,
            extra: None,
            dl: d_l_table(pair),
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn homog(&self, key: &(Word, F::Coef)) -> i64 {
        key.0.weight() as i64 - self.fiber.order(&key.1) as i64
    }

    /// Total degree `|ω| + arity`.
    pub fn degree(&self, key: &(Word, F::Coef)) -> i32 {
        key.0.degree() as i32 + self.fiber.arity(&key.1)
    }

    pub fn truncate(&self, x: &BigElement<F::Coef>) -> BigElement<F::Coef> {
        x.filtered(|k| self.homog(k) <= self.homog_cap)
    }

    /// `ω ⊗ x`.
    pub fn embed(&self, form: FormMask, x: &Sparse<FiberTerm<F::Coef>>) -> BigElement<F::Coef> {
        x.map_keys(|(i, c)| (Word::new(form, *i), c.clone()))
    }

    fn fiber_bracket(&self, x: &FiberTerm<F::Coef>, y: &FiberTerm<F::Coef>) -> Sparse<FiberTerm<F::Coef>> {
        let key = (x.clone(), y.clone());
        if let Some(v) = self.cache.lock().unwrap().get(&key) {
            return v.clone();
        }
        let v = self.fiber.bracket(x, y);
        self.cache.lock().unwrap().insert(key, v.clone());
        v
    }

    /// `[ω⊗x, ω'⊗y] = (−1)^{|x||ω'|} ωω' ⊗ [x, y]`, truncated.
    pub fn bracket(&self, x: &BigElement<F::Coef>, y: &BigElement<F::Coef>) -> BigElement<F::Coef> {
        let mut out = Sparse::new();
        for ((w1, c1), a) in x {
            let h1 = w1.weight() as i64 - self.fiber.order(c1) as i64;
            for ((w2, c2), b) in y {
                let h2 = w2.weight() as i64 - self.fiber.order(c2) as i64;
                if h1 + h2 > self.homog_cap {
                    continue;
                }
                let Some(neg) = wedge_sign(w1.form, w2.form) else { continue };
                let neg = koszul(neg, self.fiber.arity(c1) as i64 * w2.degree() as i64);
                let coef = if neg { -(a * b) } else { a * b };
                for ((i, c), d) in &self.fiber_bracket(&(w1.sym, c1.clone()), &(w2.sym, c2.clone())) {
                    out.add_term((Word::new(w1.form | w2.form, *i), c.clone()), &coef * d);
                }
            }
        }
        out
    }

    /// `(ω⊗x)·(ω'⊗y) = (−1)^{|x|_∪ |ω'|} ωω' ⊗ x·y`, truncated.
    pub fn cup(&self, x: &BigElement<F::Coef>, y: &BigElement<F::Coef>) -> BigElement<F::Coef> {
        let mut out = Sparse::new();
        for ((w1, c1), a) in x {
            for ((w2, c2), b) in y {
                let Some(neg) = wedge_sign(w1.form, w2.form) else { continue };
                let neg = koszul(neg, self.fiber.cup_degree(c1) as i64 * w2.degree() as i64);
                let coef = if neg { -(a * b) } else { a * b };
                for ((i, c), d) in &self.fiber.cup(&(w1.sym, c1.clone()), &(w2.sym, c2.clone())) {
                    out.add_term((Word::new(w1.form | w2.form, *i), c.clone()), &coef * d);
                }
            }
        }
        self.truncate(&out)
    }

    /// `d_L ⊗ id`.
    pub fn d_l(&self, x: &BigElement<F::Coef>) -> BigElement<F::Coef> {
        let mut out = Sparse::new();
        for ((w, c), a) in x {
            for (m, d) in &self.dl[w.form as usize] {
                out.add_term((Word::new(*m, w.sym), c.clone()), a * d);
            }
        }
        out
    }

    pub fn delta_tilde(&self, x: &BigElement<F::Coef>) -> BigElement<F::Coef> {
        lift(|w| self.weyl.delta_word(w), x)
    }

    pub fn h_tilde(&self, x: &BigElement<F::Coef>) -> BigElement<F::Coef> {
        self.truncate(&lift(|w| self.weyl.h_word(w), x))
    }

    /// Keeps the `v = 0`, `|I| = 0` words.
    pub fn sigma_tilde_filter(&self, x: &BigElement<F::Coef>) -> BigElement<F::Coef> {
        x.filtered(|(w, _)| self.weyl.sigma_word(w).is_some())
    }

    /// `ϱ = d_L ⊗ id + [∇ + X, −]`.
    pub fn rho(&self, x: &BigElement<F::Coef>) -> BigElement<F::Coef> {
        let mut out = self.d_l(x);
        out.add_assign(&self.bracket(&self.nabla_vf, x));
        out.add_assign(&self.bracket(&self.x_vf, x));
        self.truncate(&out)
    }

    /// `−δ̃`, plus `[extra, −]` when present.
    pub fn d0(&self, x: &BigElement<F::Coef>) -> BigElement<F::Coef> {
        let mut out = self.delta_tilde(x).neg();
        if let Some(e) = &self.extra {
            out.add_assign(&self.bracket(e, x));
        }
        out
    }

    /// The full differential `d0 + ϱ`.
    pub fn total(&self, x: &BigElement<F::Coef>) -> BigElement<F::Coef> {
        let mut out = self.d0(x);
        out.add_assign(&self.rho(x));
        self.truncate(&out)
    }

    /// `−δ + ∇ + X` as a single fiber element.
    pub fn v_q(&self) -> BigElement<F::Coef> {
        let mut v = self.delta_vf.neg();
        v.add_assign(&self.nabla_vf);
        v.add_assign(&self.x_vf);
        v
    }

    /// Embeds a Weyl element as a function-valued big element.
    pub fn functions(&self, x: &WeylElement) -> BigElement<F::Coef> {
        x.map_keys(|w| (*w, self.fiber.function()))
    }
}
