//! Transfer of a dgla structure along a contraction.
//!
//! Work on the suspension, where brackets are graded symmetric of degree `+1`
//! in the shifted degree `|x| − 1`. For a sorted input tuple `x_S`:
//! `f_{x} = τ'x`, `Φ_S = Σ_{A ∋ min S} ε(A,B) (−1)^{|f_A|} [f_A, f_B]`,
//! `f_S = −h'(Φ_S)`, `p_S = σ'(Φ_S)` and `p_1 = −d'`. The unshifted brackets are
//! `λ_k(x_1..x_k) = c_k (−1)^{Σ_i (k−i)|x_i|} p_k(x_1..x_k)` with
//! `c_k = −(−1)^{k(k−1)/2}`, so `λ_1 = d'` and `λ_2 = σ'[τ'x, τ'y]`.

use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;
use std::sync::Mutex;

use serde::Serialize;

use crate::contraction_engine::{ContractionMaps, IdentityReport, Status};
use crate::error::CoreError;
use crate::graded_core::scalar::{sign, to_string};
use crate::graded_core::sparse::Sparse;

type Bracket<'a, B> = Box<dyn Fn(&Sparse<B>, &Sparse<B>) -> Sparse<B> + 'a>;

pub struct Transfer<'a, S: Ord, B: Ord, C> {
    pub maps: &'a C,
    bracket: Bracket<'a, B>,
    degree: Box<dyn Fn(&S) -> i32 + 'a>,
    order: Box<dyn Fn(&S) -> u32 + 'a>,
    /// Largest total input order for which outputs are exact.
    pub budget: u32,
    /// Negative control: negate `p_2` on inputs for which this returns true.
    pub corrupt_binary: Option<Box<dyn Fn(&S, &S) -> bool + 'a>>,
    f_cache: Mutex<HashMap<Vec<S>, Sparse<B>>>,
    p_cache: Mutex<HashMap<Vec<S>, Sparse<S>>>,
}

fn odd(n: i64) -> bool {
    n.rem_euclid(2) == 1
}

impl<'a, S, B, C> Transfer<'a, S, B, C>
where
    S: Ord + Clone + Hash + Debug,
    B: Ord + Clone,
    C: ContractionMaps<S, B>,
{
    pub fn new(
        maps: &'a C,
        bracket: impl Fn(&Sparse<B>, &Sparse<B>) -> Sparse<B> + 'a,
        degree: impl Fn(&S) -> i32 + 'a,
        order: impl Fn(&S) -> u32 + 'a,
        budget: u32,
    ) -> Self {
        Transfer {
            maps,
            bracket: Box::new(bracket),
            degree: Box::new(degree),
            order: Box::new(order),
            budget,
            corrupt_binary: None,
            f_cache: Mutex::new(HashMap::new()),
            p_cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn degree(&self, x: &S) -> i32 {
        (self.degree)(x)
    }

    fn shifted(&self, x: &S) -> i64 {
        (self.degree)(x) as i64 - 1
    }

    /// Sorts with the Koszul sign of the shifted degrees; `true` means negate.
    pub fn sort_with_sign(&self, xs: &[S]) -> (Vec<S>, bool) {
        let mut v = xs.to_vec();
        let mut neg = false;
        for i in 1..v.len() {
            let mut j = i;
            while j > 0 && v[j - 1] > v[j] {
                neg ^= odd(self.shifted(&v[j - 1]) * self.shifted(&v[j]));
                v.swap(j - 1, j);
                j -= 1;
            }
        }
        (v, neg)
    }

    fn check_budget(&self, xs: &[S]) -> Result<(), CoreError> {
        let total: u32 = xs.iter().map(|x| (self.order)(x)).sum();
        if total > self.budget {
            return Err(CoreError::TruncationTooSmall { required: total, given: self.budget });
        }
        Ok(())
    }

    /// `p_k` on any tuple of basis elements.
    pub fn shifted_bracket(&self, xs: &[S]) -> Result<Sparse<S>, CoreError> {
        self.check_budget(xs)?;
        let (sorted, neg) = self.sort_with_sign(xs);
        let v = self.p_sorted(&sorted)?;
        Ok(if neg { v.neg() } else { v })
    }

    /// `p_k` with the first argument a linear combination.
    pub fn shifted_bracket_first(&self, y: &Sparse<S>, rest: &[S]) -> Result<Sparse<S>, CoreError> {
        let mut out = Sparse::new();
        for (k, c) in y {
            let mut xs = vec![k.clone()];
            xs.extend_from_slice(rest);
            out.add_scaled(&self.shifted_bracket(&xs)?, c);
        }
        Ok(out)
    }

    /// `λ_k` in the unshifted convention.
    pub fn lambda(&self, xs: &[S]) -> Result<Sparse<S>, CoreError> {
        let k = xs.len() as i64;
        let mut e = k * (k - 1) / 2 + 1;
        for (i, x) in xs.iter().enumerate() {
            e += (k - 1 - i as i64) * self.degree(x) as i64;
        }
        Ok(self.shifted_bracket(xs)?.scaled(&sign(e)))
    }

    fn p_sorted(&self, xs: &[S]) -> Result<Sparse<S>, CoreError> {
        if let Some(v) = self.p_cache.lock().unwrap().get(xs) {
            return Ok(v.clone());
        }
        let mut v = if xs.len() == 1 {
            self.maps.d_small(&Sparse::basis(xs[0].clone()))?.neg()
        } else {
            self.maps.sigma(&self.phi(xs)?)?
        };
        if xs.len() == 2 {
            if let Some(flip) = &self.corrupt_binary {
                if flip(&xs[0], &xs[1]) {
                    v = v.neg();
                }
            }
        }
        self.p_cache.lock().unwrap().insert(xs.to_vec(), v.clone());
        Ok(v)
    }

    fn f_sorted(&self, xs: &[S]) -> Result<Sparse<B>, CoreError> {
        if let Some(v) = self.f_cache.lock().unwrap().get(xs) {
            return Ok(v.clone());
        }
        let v = if xs.len() == 1 {
            self.maps.tau(&Sparse::basis(xs[0].clone()))?
        } else {
            self.maps.h(&self.phi(xs)?)?.neg()
        };
        self.f_cache.lock().unwrap().insert(xs.to_vec(), v.clone());
        Ok(v)
    }

    fn phi(&self, xs: &[S]) -> Result<Sparse<B>, CoreError> {
        let k = xs.len();
        let mut out = Sparse::new();
        // A always holds position 0; bit i of `mask` puts position i+1 in A
        for mask in 0u32..(1 << (k - 1)) - 1 {
            let in_a = |i: usize| i == 0 || mask & (1 << (i - 1)) != 0;
            let a: Vec<S> = (0..k).filter(|&i| in_a(i)).map(|i| xs[i].clone()).collect();
            let b: Vec<S> = (0..k).filter(|&i| !in_a(i)).map(|i| xs[i].clone()).collect();
            let mut neg = false;
            for i in 0..k {
                for j in i + 1..k {
                    if !in_a(i) && in_a(j) {
                        neg ^= odd(self.shifted(&xs[i]) * self.shifted(&xs[j]));
                    }
                }
            }
            let fa_degree: i64 = a.iter().map(|x| self.shifted(x)).sum::<i64>() + 1;
            neg ^= odd(fa_degree);
            let br = (self.bracket)(&self.f_sorted(&a)?, &self.f_sorted(&b)?);
            out.add_scaled(&br, &sign(neg as i64));
        }
        Ok(out)
    }

    /// Every generalized Jacobi identity of arity `n ≤ k_max` on every sorted
    /// tuple of `basis` within the budget:
    /// `Σ_{I} ε(I) p_{n−|I|+1}(p_{|I|}(x_I), x_{rest}) = 0`.
    pub fn check_linfty(&self, basis: &[S], k_max: usize) -> Result<Vec<IdentityReport>, CoreError> {
        let mut reports = Vec::new();
        for n in 1..=k_max {
            let mut checked = 0;
            let mut witness = None;
            for tuple in multisets(basis, n) {
                let total: u32 = tuple.iter().map(|x| (self.order)(x)).sum();
                if total > self.budget {
                    continue;
                }
                checked += 1;
                let defect = self.jacobiator(&tuple)?;
                if witness.is_none() && !defect.is_zero() {
                    let (key, c) = defect.iter().next().unwrap();
                    witness = Some(format!("inputs {tuple:?}: defect {} at {key:?}", to_string(c)));
                }
            }
            reports.push(IdentityReport {
                identity: format!("L-infinity relation, arity {n}"),
                status: Status::from_witness(&witness),
                checked,
                depth: self.budget as i64,
                witness,
            });
        }
        Ok(reports)
    }

    pub fn jacobiator(&self, xs: &[S]) -> Result<Sparse<S>, CoreError> {
        let n = xs.len();
        let mut out = Sparse::new();
        for mask in 1u32..(1 << n) {
            let inside: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
            let rest: Vec<S> = (0..n).filter(|&i| mask & (1 << i) == 0).map(|i| xs[i].clone()).collect();
            let mut neg = false;
            for i in 0..n {
                for j in i + 1..n {
                    if mask & (1 << i) == 0 && mask & (1 << j) != 0 {
                        neg ^= odd(self.shifted(&xs[i]) * self.shifted(&xs[j]));
                    }
                }
            }
            let chosen: Vec<S> = inside.iter().map(|&i| xs[i].clone()).collect();
            let inner = self.shifted_bracket(&chosen)?;
            let outer = self.shifted_bracket_first(&inner, &rest)?;
            out.add_scaled(&outer, &sign(neg as i64));
        }
        Ok(out)
    }

    /// `λ_k` on every sorted tuple of `basis` within the budget.
    pub fn table(&self, basis: &[S], k: usize) -> Result<Vec<LambdaEntry<S>>, CoreError> {
        let mut out = Vec::new();
        for tuple in multisets(basis, k) {
            let total: u32 = tuple.iter().map(|x| (self.order)(x)).sum();
            if total > self.budget {
                continue;
            }
            let value = self.lambda(&tuple)?;
            if !value.is_zero() {
                out.push(LambdaEntry { inputs: tuple, value });
            }
        }
        Ok(out)
    }
}

/// One nonzero value `λ_k(inputs)`.
#[derive(Clone, Debug)]
pub struct LambdaEntry<S: Ord> {
    pub inputs: Vec<S>,
    pub value: Sparse<S>,
}

#[derive(Serialize)]
pub struct LambdaEntryJson {
    pub inputs: Vec<String>,
    pub value: Vec<(String, String)>,
}

impl<S: Ord + Clone + Debug> LambdaEntry<S> {
    pub fn to_json(&self) -> LambdaEntryJson {
        LambdaEntryJson {
            inputs: self.inputs.iter().map(|x| format!("{x:?}")).collect(),
            value: self.value.iter().map(|(k, c)| (format!("{k:?}"), to_string(c))).collect(),
        }
    }
}

/// All non-decreasing index tuples of length `n`, as element tuples.
pub fn multisets<S: Clone>(basis: &[S], n: usize) -> Vec<Vec<S>> {
    let mut out = Vec::new();
    let mut idx = vec![0usize; n];
    if basis.is_empty() {
        return out;
    }
    loop {
        out.push(idx.iter().map(|&i| basis[i].clone()).collect());
        let mut p = n;
        loop {
            if p == 0 {
                return out;
            }
            p -= 1;
            if idx[p] + 1 < basis.len() {
                idx[p] += 1;
                for q in p + 1..n {
                    idx[q] = idx[p];
                }
                break;
            }
        }
    }
}
