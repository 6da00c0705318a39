use serde::Serialize;

use crate::error::CoreError;
use crate::graded_core::forms::Word;
use crate::graded_core::multi_index::MultiIndex;
use crate::graded_core::scalar::{self, Scalar};
use crate::graded_core::sparse::Sparse;

use super::ops::{apply_vertical, Weyl, WeylElement};

/// `X^∇ = Σ_k x[k] ∂/∂χ_k` solved up to weight `cap`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FedosovData {
    pub cap: u32,
    pub x: Vec<WeylElement>,
}

/// One term `λ^form ⊗ χ^sym ⊗ ∂_b` of `X^∇`.
#[derive(Clone, Debug, Serialize)]
pub struct XTerm {
    pub form: usize,
    pub sym: MultiIndex,
    pub b: usize,
    #[serde(with = "scalar::serde_str")]
    pub coeff: Scalar,
}

/// Solves `δ(X χ_k) = (d^∇)² χ_k + d^∇(X χ_k) + X(d^∇ χ_k) + X(X χ_k)` by
/// `X χ_k = h(·)`, one symmetric weight at a time.
pub fn solve_fedosov(weyl: &Weyl, cap: u32) -> Result<FedosovData, CoreError> {
    let w = weyl.with_cap(cap);
    let r = w.rank();
    let mut x: Vec<WeylElement> = vec![Sparse::new(); r];
    let d_chi: Vec<WeylElement> = (0..r).map(|k| w.d_nabla(&w.generator(k))).collect();
    let dd_chi: Vec<WeylElement> = d_chi.iter().map(|v| w.d_nabla(v)).collect();
    for weight in 1..cap {
        let mut next = Vec::with_capacity(r);
        for k in 0..r {
            let mut rhs = dd_chi[k].clone();
            rhs.add_assign(&w.d_nabla(&x[k]));
            rhs.add_assign(&apply_vertical(&x, &d_chi[k], cap));
            rhs.add_assign(&apply_vertical(&x, &x[k], cap));
            let slice = rhs.filtered(|t| t.weight() == weight);
            next.push(w.h(&slice));
        }
        for (k, v) in next.into_iter().enumerate() {
            if v.keys().any(|t| t.weight() != weight + 1 || t.degree() != 1) {
                return Err(CoreError::Other(format!("X^∇ step {weight} produced a term outside weight {}", weight + 1)));
            }
            x[k].add_assign(&v);
        }
    }
    Ok(FedosovData { cap, x })
}

impl FedosovData {
    pub fn apply_x(&self, y: &WeylElement, cap: u32) -> WeylElement {
        apply_vertical(&self.x, y, cap)
    }

    /// `Q = −δ + d_L^∇ + X^∇`.
    pub fn apply_q(&self, weyl: &Weyl, y: &WeylElement) -> WeylElement {
        let mut out = weyl.d_nabla(y);
        out.sub_assign(&weyl.delta(y));
        out.add_assign(&self.apply_x(y, weyl.cap));
        weyl.truncate(&out)
    }

    /// `ϱ = d_L^∇ + X^∇`.
    pub fn apply_rho(&self, weyl: &Weyl, y: &WeylElement) -> WeylElement {
        let mut out = weyl.d_nabla(y);
        out.add_assign(&self.apply_x(y, weyl.cap));
        weyl.truncate(&out)
    }

    pub fn is_zero(&self) -> bool {
        self.x.iter().all(|v| v.is_zero())
    }

    pub fn terms(&self) -> Vec<XTerm> {
        let mut out = Vec::new();
        for (b, v) in self.x.iter().enumerate() {
            for (w, c) in v {
                out.push(XTerm { form: w.form.trailing_zeros() as usize, sym: w.sym, b, coeff: c.clone() });
            }
        }
        out
    }

    /// `h̃(X^∇)`, which vanishes for the solution.
    pub fn h_tilde(&self, weyl: &Weyl) -> Vec<WeylElement> {
        self.x.iter().map(|v| weyl.h(v)).collect()
    }

    pub fn words(&self) -> impl Iterator<Item = &Word> {
        self.x.iter().flat_map(|v| v.keys())
    }
}
