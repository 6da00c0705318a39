//! Contraction data `(σ, τ, h)` between a big and a small complex, exact
//! verification of the contraction identities, and the homological perturbation
//! lemma for a perturbation `ϱ` of the big differential.

mod instances;

pub use instances::{instantiate_dpoly, instantiate_tpoly, tensor_map, BigD, BigT};

use serde::Serialize;
use std::fmt::Debug;

use crate::error::CoreError;
use crate::graded_core::sparse::Sparse;

pub type Map<'a, X, Y> = Box<dyn Fn(&Sparse<X>) -> Sparse<Y> + 'a>;

/// The maps of a contraction; `h` has degree `−1`.
pub trait ContractionMaps<S: Ord + Clone, B: Ord + Clone> {
    fn sigma(&self, x: &Sparse<B>) -> Result<Sparse<S>, CoreError>;
    fn tau(&self, x: &Sparse<S>) -> Result<Sparse<B>, CoreError>;
    fn h(&self, x: &Sparse<B>) -> Result<Sparse<B>, CoreError>;
    fn d_big(&self, x: &Sparse<B>) -> Result<Sparse<B>, CoreError>;
    fn d_small(&self, x: &Sparse<S>) -> Result<Sparse<S>, CoreError>;
}

pub struct Contraction<'a, S: Ord, B: Ord> {
    pub sigma: Map<'a, B, S>,
    pub tau: Map<'a, S, B>,
    pub h: Map<'a, B, B>,
    pub d_big: Map<'a, B, B>,
    pub d_small: Map<'a, S, S>,
}

impl<S: Ord + Clone, B: Ord + Clone> ContractionMaps<S, B> for Contraction<'_, S, B> {
    fn sigma(&self, x: &Sparse<B>) -> Result<Sparse<S>, CoreError> {
        Ok((self.sigma)(x))
    }
    fn tau(&self, x: &Sparse<S>) -> Result<Sparse<B>, CoreError> {
        Ok((self.tau)(x))
    }
    fn h(&self, x: &Sparse<B>) -> Result<Sparse<B>, CoreError> {
        Ok((self.h)(x))
    }
    fn d_big(&self, x: &Sparse<B>) -> Result<Sparse<B>, CoreError> {
        Ok((self.d_big)(x))
    }
    fn d_small(&self, x: &Sparse<S>) -> Result<Sparse<S>, CoreError> {
        Ok((self.d_small)(x))
    }
}

/// The contraction deformed by `ϱ`:
/// `τ' = Σ(hϱ)^k τ`, `h' = Σ(hϱ)^k h`, `σ' = σ Σ(ϱh)^k`,
/// `d' = d + σ Σ(ϱh)^k ϱ τ`. The series must terminate within `max_steps`.
pub struct Perturbed<'a, S: Ord, B: Ord> {
    pub base: Contraction<'a, S, B>,
    pub rho: Map<'a, B, B>,
    pub max_steps: usize,
}

impl<S: Ord + Clone, B: Ord + Clone> Perturbed<'_, S, B> {
    /// `Σ_k (hϱ)^k x`.
    pub fn h_rho_series(&self, x: &Sparse<B>) -> Result<Sparse<B>, CoreError> {
        self.series(x, |y| (self.base.h)(&(self.rho)(y)))
    }

    /// `Σ_k (ϱh)^k x`.
    pub fn rho_h_series(&self, x: &Sparse<B>) -> Result<Sparse<B>, CoreError> {
        self.series(x, |y| (self.rho)(&(self.base.h)(y)))
    }

    fn series(&self, x: &Sparse<B>, step: impl Fn(&Sparse<B>) -> Sparse<B>) -> Result<Sparse<B>, CoreError> {
        let mut acc = x.clone();
        let mut cur = x.clone();
        for _ in 0..self.max_steps {
            cur = step(&cur);
            if cur.is_zero() {
                return Ok(acc);
            }
            acc.add_assign(&cur);
        }
        Err(CoreError::Filtration(self.max_steps))
    }
}

impl<S: Ord + Clone, B: Ord + Clone> ContractionMaps<S, B> for Perturbed<'_, S, B> {
    fn sigma(&self, x: &Sparse<B>) -> Result<Sparse<S>, CoreError> {
        Ok((self.base.sigma)(&self.rho_h_series(x)?))
    }
    fn tau(&self, x: &Sparse<S>) -> Result<Sparse<B>, CoreError> {
        self.h_rho_series(&(self.base.tau)(x))
    }
    fn h(&self, x: &Sparse<B>) -> Result<Sparse<B>, CoreError> {
        self.h_rho_series(&(self.base.h)(x))
    }
    fn d_big(&self, x: &Sparse<B>) -> Result<Sparse<B>, CoreError> {
        Ok((self.base.d_big)(x).plus(&(self.rho)(x)))
    }
    fn d_small(&self, x: &Sparse<S>) -> Result<Sparse<S>, CoreError> {
        let rt = (self.rho)(&(self.base.tau)(x));
        let correction = (self.base.sigma)(&self.rho_h_series(&rt)?);
        Ok((self.base.d_small)(x).plus(&correction))
    }
}

/// Which output terms are exact under truncation: a term of grade `g_out`
/// produced from an input of grade `g_in` is compared when
/// `g_out ≤ min(cap − 1, g_in + cap − 1)`.
pub struct Grading<'a, S, B> {
    pub small: Box<dyn Fn(&S) -> i64 + 'a>,
    pub big: Box<dyn Fn(&B) -> i64 + 'a>,
    pub cap: i64,
}

impl<S, B> Grading<'_, S, B> {
    fn level(&self, g_in: i64) -> i64 {
        (self.cap - 1).min(g_in + self.cap - 1)
    }
    fn exact_big(&self, g_in: i64) -> impl Fn(&B) -> bool + '_ {
        let l = self.level(g_in);
        move |k| (self.big)(k) <= l
    }
    fn exact_small(&self, g_in: i64) -> impl Fn(&S) -> bool + '_ {
        let l = self.level(g_in);
        move |k| (self.small)(k) <= l
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn from_witness(witness: &Option<String>) -> Self {
        if witness.is_none() {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub identity: String,
    pub status: Status,
    /// Number of basis inputs checked.
    pub checked: usize,
    /// Truncation level of the comparison.
    pub depth: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

struct Tally {
    identity: String,
    checked: usize,
    witness: Option<String>,
}

impl Tally {
    fn new(identity: &str) -> Self {
        Tally { identity: identity.into(), checked: 0, witness: None }
    }

    fn record<K: Ord + Clone + Debug, I: Debug>(&mut self, input: &I, defect: Sparse<K>) {
        self.checked += 1;
        if self.witness.is_none() && !defect.is_zero() {
            let (k, c) = defect.iter().next().unwrap();
            self.witness = Some(format!("input {input:?}: defect {} at {k:?}", crate::graded_core::scalar::to_string(c)));
        }
    }

    fn finish(self, depth: i64) -> IdentityReport {
        IdentityReport {
            identity: self.identity,
            status: if self.witness.is_none() { Status::Pass } else { Status::Fail },
            checked: self.checked,
            depth,
            witness: self.witness,
        }
    }
}

/// Checks the contraction identities on the given basis elements:
/// `d² = 0` on both sides, `σ` and `τ` chain maps, `στ = id`,
/// `τσ − id = dh + hd`, and `h² = 0`, `σh = 0`, `hτ = 0`.
pub fn verify<S, B, C>(c: &C, grading: &Grading<S, B>, big: &[B], small: &[S]) -> Result<Vec<IdentityReport>, CoreError>
where
    S: Ord + Clone + Debug,
    B: Ord + Clone + Debug,
    C: ContractionMaps<S, B>,
{
    let mut t_dd_big = Tally::new("d_big^2 = 0");
    let mut t_dd_small = Tally::new("d_small^2 = 0");
    let mut t_sigma = Tally::new("sigma d_big = d_small sigma");
    let mut t_tau = Tally::new("d_big tau = tau d_small");
    let mut t_st = Tally::new("sigma tau = id");
    let mut t_hom = Tally::new("tau sigma - id = d h + h d");
    let mut t_hh = Tally::new("h h = 0");
    let mut t_sh = Tally::new("sigma h = 0");
    let mut t_ht = Tally::new("h tau = 0");
    for b in big {
        let x = Sparse::basis(b.clone());
        let g = (grading.big)(b);
        let exact_b = grading.exact_big(g);
        let exact_s = grading.exact_small(g);
        let dx = c.d_big(&x)?;
        t_dd_big.record(b, c.d_big(&dx)?.filtered(&exact_b));
        let sx = c.sigma(&x)?;
        t_sigma.record(b, c.sigma(&dx)?.minus(&c.d_small(&sx)?).filtered(&exact_s));
        let hx = c.h(&x)?;
        let mut hom = c.tau(&sx)?.minus(&x);
        hom.sub_assign(&c.d_big(&hx)?);
        hom.sub_assign(&c.h(&dx)?);
        t_hom.record(b, hom.filtered(&exact_b));
        t_hh.record(b, c.h(&hx)?.filtered(&exact_b));
        t_sh.record(b, c.sigma(&hx)?.filtered(&exact_s));
    }
    for s in small {
        let x = Sparse::basis(s.clone());
        let g = (grading.small)(s);
        let exact_b = grading.exact_big(g);
        let exact_s = grading.exact_small(g);
        let dx = c.d_small(&x)?;
        t_dd_small.record(s, c.d_small(&dx)?.filtered(&exact_s));
        let tx = c.tau(&x)?;
        t_tau.record(s, c.d_big(&tx)?.minus(&c.tau(&dx)?).filtered(&exact_b));
        t_st.record(s, c.sigma(&tx)?.minus(&x).filtered(&exact_s));
        t_ht.record(s, c.h(&tx)?.filtered(&exact_b));
    }
    let depth = grading.cap - 1;
    Ok([t_dd_big, t_dd_small, t_sigma, t_tau, t_st, t_hom, t_hh, t_sh, t_ht].into_iter().map(|t| t.finish(depth)).collect())
}

/// Compares two operators on a basis; the report fails with the first difference.
pub fn compare_operators<S: Ord + Clone + Debug>(
    identity: &str,
    basis: &[S],
    lhs: impl Fn(&Sparse<S>) -> Result<Sparse<S>, CoreError>,
    rhs: impl Fn(&Sparse<S>) -> Sparse<S>,
    exact: impl Fn(&S, &S) -> bool,
    depth: i64,
) -> Result<IdentityReport, CoreError> {
    let mut t = Tally::new(identity);
    for s in basis {
        let x = Sparse::basis(s.clone());
        t.record(s, lhs(&x)?.minus(&rhs(&x)).filtered(|k| exact(s, k)));
    }
    Ok(t.finish(depth))
}
