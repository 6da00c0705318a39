//! Polydifferential operators `Ŝ B^∨ ⊗ (S B)^{⊗k+1}`: the tuple `∂^{J_0} ⊗ ⋯ ⊗ ∂^{J_k}`
//! with coefficient `χ^I` acts by `(f_0, …, f_k) ↦ χ^I ∏_i ∂^{J_i} f_i`.

use crate::graded_core::comul::{differentiate, sym_comul_iter};
use crate::graded_core::multi_index::MultiIndex;
use crate::graded_core::scalar::{one, sign};
use crate::graded_core::sparse::Sparse;
use crate::lie_pair::ce::d_h_tuple;

use super::big::{Fiber, FiberTerm};

pub type DTuple = Vec<MultiIndex>;

pub struct DFiber {
    pub rank: usize,
}

impl DFiber {
    /// `D ∘_i E`: `E` inserted into slot `i` of `D`.
    pub fn compose_at(&self, d: &FiberTerm<DTuple>, e: &FiberTerm<DTuple>, i: usize) -> Sparse<FiberTerm<DTuple>> {
        let (id, jd) = d;
        let (ie, me) = e;
        let mut out = Sparse::new();
        for (parts, c) in sym_comul_iter(&jd[i], me.len() + 1) {
            let Some((dc, rest)) = differentiate(&parts[0], ie) else { continue };
            let mut slots = jd[..i].to_vec();
            for (t, m) in me.iter().enumerate() {
                slots.push(parts[t + 1].add(m));
            }
            slots.extend_from_slice(&jd[i + 1..]);
            out.add_term((id.add(&rest), slots), c * dc);
        }
        out
    }

    /// `D ∘ E = Σ_i (−1)^{i·|E|} D ∘_i E`.
    pub fn compose(&self, d: &FiberTerm<DTuple>, e: &FiberTerm<DTuple>) -> Sparse<FiberTerm<DTuple>> {
        let v = e.1.len() as i64 - 1;
        let mut out = Sparse::new();
        for i in 0..d.1.len() {
            out.add_scaled(&self.compose_at(d, e, i), &sign(i as i64 * v));
        }
        out
    }

    /// The multiplication `m(f, g) = fg`.
    pub fn m(&self) -> FiberTerm<DTuple> {
        let z = MultiIndex::zero(self.rank);
        (z, vec![z, z])
    }

    /// Applies the operator to polynomial arguments.
    pub fn evaluate(&self, d: &FiberTerm<DTuple>, args: &[Sparse<MultiIndex>]) -> Sparse<MultiIndex> {
        assert_eq!(d.1.len(), args.len(), "arity mismatch");
        let mut acc: Sparse<MultiIndex> = Sparse::basis(d.0);
        for (j, f) in d.1.iter().zip(args) {
            let mut df = Sparse::new();
            for (k, c) in f {
                if let Some((dc, rest)) = differentiate(j, k) {
                    df.add_term(rest, c * dc);
                }
            }
            let mut next = Sparse::new();
            for (a, x) in &acc {
                for (b, y) in &df {
                    next.add_term(a.add(b), x * y);
                }
            }
            acc = next;
        }
        acc
    }
}

impl Fiber for DFiber {
    type Coef = DTuple;

    fn arity(&self, c: &DTuple) -> i32 {
        c.len() as i32 - 1
    }

    fn order(&self, c: &DTuple) -> u32 {
        c.iter().map(|j| j.weight()).sum()
    }

    fn vector(&self, k: usize) -> DTuple {
        vec![MultiIndex::unit(self.rank, k)]
    }

    fn function(&self) -> DTuple {
        Vec::new()
    }

    /// `[D, E] = D ∘ E − (−1)^{|D||E|} E ∘ D`.
    fn bracket(&self, d: &FiberTerm<DTuple>, e: &FiberTerm<DTuple>) -> Sparse<FiberTerm<DTuple>> {
        let u = d.1.len() as i64 - 1;
        let v = e.1.len() as i64 - 1;
        let mut out = self.compose(d, e);
        out.add_scaled(&self.compose(e, d), &-sign(u * v));
        out
    }

    /// Concatenation `(D ∪ E)(f, g) = D(f) E(g)`.
    fn cup(&self, d: &FiberTerm<DTuple>, e: &FiberTerm<DTuple>) -> Sparse<FiberTerm<DTuple>> {
        let mut slots = d.1.clone();
        slots.extend_from_slice(&e.1);
        Sparse::term((d.0.add(&e.0), slots), one())
    }

    fn cup_degree(&self, c: &DTuple) -> i32 {
        c.len() as i32
    }
}

/// `d_H` on the tuple part, coefficient untouched.
pub fn hochschild_fiber(rank: usize, x: &FiberTerm<DTuple>) -> Sparse<FiberTerm<DTuple>> {
    d_h_tuple(rank, &x.1).map_keys(|u| (x.0, u.clone()))
}

