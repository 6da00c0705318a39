use std::fmt::Debug;

use serde_json::{json, Map, Value};

use super::labels::{d_label, t_label};
use super::{Check, Instance, RunConfig, StageOutput, StageReport};
use crate::cohomology::{
    ce_cohomology, class_ids, compare_on_cohomology, d_complex, d_cup, gerstenhaber_on_cohomology, induced_table, lie_on_cohomology,
    representative_independence, t_complex, t_cup, t_degrees, CohomologyBasis, Operation,
};
use crate::contraction_engine::{compare_operators, instantiate_dpoly, instantiate_tpoly, verify, BigD, BigT, ContractionMaps, Status};
use crate::error::CoreError;
use crate::graded_core::forms::Word;
use crate::graded_core::multi_index::MultiIndex;
use crate::graded_core::scalar::to_string;
use crate::graded_core::sparse::Sparse;
use crate::homotopy_transfer::{
    compare_matched, form_transport, intertwining_check, transfer_dpoly, transfer_tpoly, uniqueness_check, BigTransport, LambdaEntry, Pushforward,
};
use crate::lie_pair::ce::{d_a_bott, d_basis, d_small_d, t_basis, DKey, TKey};
use crate::lie_pair::{Connection, ConnectionViolation, LiePair, LiePairSpec, PairViolation};
use crate::pbw::{PbwMap, Transition};
use crate::poly_structures::{BigCtx, DFiber, DTuple, TFiber};
use crate::weyl_fedosov::{solve_fedosov, Weyl};

/// Counts inputs and keeps the first defect.
struct Tally {
    identity: String,
    depth: i64,
    checked: usize,
    failure: Option<String>,
}

impl Tally {
    fn new(identity: &str, depth: i64) -> Self {
        Tally { identity: identity.into(), depth, checked: 0, failure: None }
    }

    fn record<K: Ord + Clone + Debug>(&mut self, input: &impl Debug, defect: &Sparse<K>) {
        self.checked += 1;
        if self.failure.is_none() && !defect.is_zero() {
            let (k, c) = defect.iter().next().unwrap();
            self.failure = Some(format!("input {input:?}: defect {} at {k:?}", to_string(c)));
        }
    }

    fn flag(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(detail());
        }
    }

    fn finish(self) -> Check {
        Check::outcome(self.identity, self.checked, self.depth, self.failure.map(|d| (d, Vec::new())))
    }
}

fn strings(m: &[Vec<Vec<crate::graded_core::scalar::Scalar>>]) -> Value {
    m.iter().map(|a| a.iter().map(|b| b.iter().map(to_string).collect::<Vec<_>>()).collect::<Vec<_>>()).collect::<Vec<_>>().into()
}

pub(super) fn invalid(v: &PairViolation) -> StageReport {
    let identity = match v {
        PairViolation::Shape(_) | PairViolation::Scalar(_) => "well-formed spec",
        PairViolation::Antisymmetry { .. } => "bracket antisymmetric",
        PairViolation::Jacobi { .. } => "Jacobi identity",
        PairViolation::NotSubalgebra { .. } => "A closed under the bracket",
        PairViolation::Splitting { .. } => "splitting axioms",
    };
    let check = Check::fail(identity, v.to_string(), v.witness());
    StageReport { stage: "validate", status: Status::Fail, checks: vec![check], artifacts: Map::new() }
}

pub(super) fn validate(inst: &Instance, out: &mut StageOutput) -> Result<(), CoreError> {
    let (p, c) = (&inst.pair, &inst.conn);
    let n = p.n;
    out.push(Check::pass("bracket antisymmetric", n * n, 0));
    out.push(Check::pass("Jacobi identity", n * n * n, 0));
    out.push(Check::pass("A closed under the bracket", p.dim_a * p.dim_a, 0));
    out.push(Check::pass("splitting axioms", n * p.r, 0));
    let names = p.adapted_names();
    let violations = c.violations(p);
    let bott = violations.iter().find_map(|v| match *v {
        ConnectionViolation::NotBott { a, b } => Some((format!("∇_{} ∂_{b} differs from the Bott connection", names[a]), vec![a, b])),
        _ => None,
    });
    let torsion = violations.iter().find_map(|v| match *v {
        ConnectionViolation::Torsion { l1, l2 } => Some((format!("T({}, {}) ≠ 0", names[l1], names[l2]), vec![l1, l2])),
        _ => None,
    });
    out.push(Check::outcome("connection extends the Bott connection", p.dim_a * p.r, 0, bott));
    out.push(Check::outcome("connection is torsion-free", n * (n - 1) / 2, 0, torsion));
    out.artifact("dimL", n);
    out.artifact("dimA", p.dim_a);
    out.artifact("rankB", p.r);
    out.artifact("basis", p.names.clone());
    out.artifact("adaptedBasis", names);
    out.artifact("matched", p.is_matched());
    out.artifact("connectionSource", if inst.conn_is_default { "default" } else { "input" });
    out.artifact("connection", strings(&c.to_input(p)));
    out.artifact("flat", c.is_flat(p));
    Ok(())
}

pub(super) fn fedosov(inst: &Instance, cfg: &RunConfig, out: &mut StageOutput) -> Result<(), CoreError> {
    let (p, c) = (&inst.pair, &inst.conn);
    let n = cfg.trunc;
    let depth = n as i64;
    // one weight above the tested words so nothing touches the truncation
    let w = Weyl::new(p, c, n + 1);
    let mut dd = Tally::new("delta delta = 0", depth);
    let mut hh = Tally::new("h h = 0", depth);
    let mut sh = Tally::new("sigma h = 0", depth);
    let mut hom = Tally::new("h delta + delta h = id - tau sigma", depth);
    for t in w.basis(n) {
        let x = Sparse::basis(t);
        dd.record(&t, &w.delta(&w.delta(&x)));
        let hx = w.h(&x);
        hh.record(&t, &w.h(&hx));
        sh.record(&t, &w.sigma(&hx));
        let mut defect = w.h(&w.delta(&x));
        defect.add_assign(&w.delta(&hx));
        defect.sub_assign(&x.minus(&w.tau_sigma(&x)));
        hom.record(&t, &defect);
    }
    let mut st = Tally::new("sigma tau = id", depth);
    let mut ht = Tally::new("h tau = 0", depth);
    for a in 0u32..(1 << p.dim_a) {
        let alpha = Sparse::basis(a);
        st.record(&a, &w.sigma(&w.tau(&alpha)).minus(&alpha));
        ht.record(&a, &w.h(&w.tau(&alpha)));
    }
    let w = Weyl::new(p, c, n);
    let mut anti = Tally::new("delta d_nabla + d_nabla delta = 0", depth - 1);
    for t in w.basis(n - 1) {
        let x = Sparse::basis(t);
        let mut v = w.delta(&w.d_nabla(&x));
        v.add_assign(&w.d_nabla(&w.delta(&x)));
        anti.record(&t, &v);
    }
    let f = solve_fedosov(&w, n)?;
    let mut shape = Tally::new("X^nabla has weight >= 2 and form degree 1", depth);
    let mut gauge = Tally::new("h X^nabla = 0", depth);
    for (k, v) in f.x.iter().enumerate() {
        shape.flag(v.keys().all(|t| t.weight() >= 2 && t.degree() == 1), || format!("component {k}: {v:?}"));
        gauge.record(&k, &w.h(v));
    }
    let mut qq = Tally::new("Q Q = 0 below weight N", depth - 1);
    for t in w.basis(n - 1) {
        let x = Sparse::basis(t);
        qq.record(&t, &f.apply_q(&w, &f.apply_q(&w, &x)).filtered(|s| s.weight() < n));
    }
    out.extend([dd, hh, sh, hom, st, ht, anti, shape, gauge, qq].map(Tally::finish));
    out.artifact("xZero", f.is_zero());
    out.artifact("xTerms", serde_json::to_value(f.terms()).map_err(|e| CoreError::Other(e.to_string()))?);
    Ok(())
}

fn big_t(p: &LiePair, max_i: u32) -> Vec<BigT> {
    let mut out = Vec::new();
    for form in 0u32..(1 << p.n) {
        for i in MultiIndex::up_to(p.r, max_i) {
            for b in 0u32..(1 << p.r) {
                out.push((Word::new(form, i), b));
            }
        }
    }
    out
}

fn big_d(p: &LiePair, max_i: u32, tuples: &[DTuple]) -> Vec<BigD> {
    let mut out = Vec::new();
    for form in 0u32..(1 << p.n) {
        for i in MultiIndex::up_to(p.r, max_i) {
            for t in tuples {
                out.push((Word::new(form, i), t.clone()));
            }
        }
    }
    out
}

/// `[]`, `[1]`, `[1,1]`, `[∂_k]`, `[∂_k, 1]`, `[1, ∂_k]`.
fn low_tuples(r: usize) -> Vec<DTuple> {
    let z = MultiIndex::zero(r);
    let mut out: Vec<DTuple> = vec![vec![], vec![z], vec![z, z]];
    for k in 0..r {
        let e = MultiIndex::unit(r, k);
        out.extend([vec![e], vec![e, z], vec![z, e]]);
    }
    out
}

fn d_ctx<'a>(p: &'a LiePair, c: &'a Connection, cap: u32) -> Result<BigCtx<'a, DFiber>, CoreError> {
    let mut ctx = BigCtx::new(p, c, DFiber { rank: p.r }, cap)?;
    ctx.extra = Some(ctx.embed(0, &Sparse::basis(ctx.fiber.m())));
    Ok(ctx)
}

pub(super) fn contraction(inst: &Instance, cfg: &RunConfig, out: &mut StageOutput) -> Result<(), CoreError> {
    let (p, c) = (&inst.pair, &inst.conn);
    let h = cfg.d_cap();

    let ctx = BigCtx::new(p, c, TFiber { rank: p.r }, h)?;
    let (pert, grading) = instantiate_tpoly(&ctx);
    let big = big_t(p, 1);
    let small = t_basis(p);
    out.extend(verify(&pert.base, &grading, &big, &small)?.into_iter().map(|r| Check::from(r).prefixed("polyvector")));
    out.extend(verify(&pert, &grading, &big, &small)?.into_iter().map(|r| Check::from(r).prefixed("polyvector perturbed")));
    out.push(compare_operators("polyvector: d' = d_A^Bott", &small, |x| pert.d_small(x), |x| d_a_bott(p, x), |_, _| true, 0)?);

    let dctx = d_ctx(p, c, h)?;
    let pbw = PbwMap::build(p, c, 2 * h + 2);
    let (dpert, dgrading) = instantiate_dpoly(&dctx, &pbw);
    let dbig = big_d(p, 1, &low_tuples(p.r));
    let dsmall = d_basis(p, 3, 2);
    out.extend(verify(&dpert.base, &dgrading, &dbig, &dsmall)?.into_iter().map(|r| Check::from(r).prefixed("polydifferential")));
    out.extend(verify(&dpert, &dgrading, &dbig, &dsmall)?.into_iter().map(|r| Check::from(r).prefixed("polydifferential perturbed")));
    out.push(compare_operators("polydifferential: d' = d_A^U + d_H", &dsmall, |x| dpert.d_small(x), |x| d_small_d(p, x), |_, _| true, 0)?);
    out.artifact("homogeneityCap", h);
    Ok(())
}

fn lambda_json<S: Ord + Clone + Debug>(entries: &[LambdaEntry<S>], label: impl Fn(&S) -> String) -> Value {
    entries
        .iter()
        .map(|e| {
            let value: Vec<Value> = e.value.iter().map(|(k, c)| json!([label(k), to_string(c)])).collect();
            json!({ "inputs": e.inputs.iter().map(&label).collect::<Vec<_>>(), "value": value })
        })
        .collect::<Vec<_>>()
        .into()
}

pub(super) fn transfer_t(inst: &Instance, cfg: &RunConfig, out: &mut StageOutput) -> Result<(), CoreError> {
    let (p, c) = (&inst.pair, &inst.conn);
    let h = cfg.t_cap();
    let ctx = BigCtx::new(p, c, TFiber { rank: p.r }, h)?;
    let (pert, _) = instantiate_tpoly(&ctx);
    let tr = transfer_tpoly(&ctx, &pert);
    let basis = t_basis(p);
    let mut unary = Tally::new("lambda_1 = d_A^Bott", h as i64);
    for x in &basis {
        unary.record(x, &tr.lambda(&[*x])?.minus(&d_a_bott(p, &Sparse::basis(*x))));
    }
    out.push(unary.finish());
    out.extend(tr.check_linfty(&basis, cfg.arity)?);
    let mut tables = Map::new();
    for k in 1..=cfg.arity {
        tables.insert(k.to_string(), lambda_json(&tr.table(&basis, k)?, |x| t_label(p, x)));
    }
    out.artifact("homogeneityCap", h);
    out.artifact("lambda", tables);
    Ok(())
}

pub(super) fn transfer_d(inst: &Instance, cfg: &RunConfig, out: &mut StageOutput) -> Result<(), CoreError> {
    let (p, c) = (&inst.pair, &inst.conn);
    let h = cfg.d_cap();
    let ctx = d_ctx(p, c, h)?;
    let pbw = PbwMap::build(p, c, 2 * h + 2);
    let (pert, _) = instantiate_dpoly(&ctx, &pbw);
    let tr = transfer_dpoly(&ctx, &pert);
    let mut unary = Tally::new("lambda_1 = d_A^U + d_H", h as i64);
    for x in d_basis(p, 2, 2.min(h)) {
        unary.record(&x, &tr.lambda(std::slice::from_ref(&x))?.minus(&d_small_d(p, &Sparse::basis(x.clone()))));
    }
    out.push(unary.finish());
    let basis = d_basis(p, 2, 1);
    out.extend(tr.check_linfty(&basis, cfg.arity)?);
    let mut tables = Map::new();
    for k in 1..=cfg.arity {
        tables.insert(k.to_string(), lambda_json(&tr.table(&basis, k)?, |x| d_label(p, x)));
    }
    out.artifact("homogeneityCap", h);
    out.artifact("inputs", "at most two tensor factors, total weight at most 1");
    out.artifact("lambda", tables);
    Ok(())
}

pub(super) fn matched(inst: &Instance, cfg: &RunConfig, out: &mut StageOutput) -> Result<(), CoreError> {
    let (p, c) = (&inst.pair, &inst.conn);
    out.artifact("matched", p.is_matched());
    if !p.is_matched() {
        return Ok(());
    }
    let cmp = compare_matched(p, c, cfg.t_cap(), cfg.d_cap())?;
    let lambda3_zero = cmp.reports.iter().filter(|r| r.identity.contains("lambda_3")).all(|r| r.passed());
    out.extend(cmp.reports);
    out.artifact("lambda3Zero", lambda3_zero);
    Ok(())
}

/// The spec's alternative choices of `(j, ∇)`, numbered from 1.
fn alternatives(inst: &Instance) -> Vec<(usize, LiePairSpec)> {
    inst.spec.alternatives.iter().enumerate().map(|(i, alt)| (i + 1, inst.spec.with_choice(alt))).collect()
}

fn choice_failure(i: usize, v: &PairViolation) -> Check {
    Check::fail(format!("choice {i}: valid"), v.to_string(), v.witness())
}

pub(super) fn uniqueness(inst: &Instance, cfg: &RunConfig, out: &mut StageOutput) -> Result<(), CoreError> {
    let h = cfg.d_cap();
    let cap = 4 * h + 4;
    let (p1, c1) = (&inst.pair, &inst.conn);
    let pbw1 = PbwMap::build(p1, c1, cap);
    let ctx1 = d_ctx(p1, c1, h)?;
    let (pert1, _) = instantiate_dpoly(&ctx1, &pbw1);
    let small = d_basis(p1, 2, 2);
    let z = MultiIndex::zero(p1.r);
    let tuples = [vec![], vec![z], vec![MultiIndex::unit(p1.r, 0)], vec![z, MultiIndex::unit(p1.r, p1.r - 1)]];
    let big = big_d(p1, 1, &tuples);
    let mut identity_transitions = 0;
    let alts = alternatives(inst);
    for (i, spec2) in &alts {
        let inst2 = match Instance::new(spec2) {
            Ok(x) => x,
            Err(v) => {
                out.push(choice_failure(*i, &v));
                continue;
            }
        };
        let (p2, c2) = (&inst2.pair, &inst2.conn);
        let pbw2 = PbwMap::build(p2, c2, cap);
        let t = Transition::new(&pbw1, &pbw2)?;
        if t.is_identity() {
            identity_transitions += 1;
        }
        let push = Pushforward::new(p1.r, &t);
        let ctx2 = d_ctx(p2, c2, h)?;
        let (pert2, _) = instantiate_dpoly(&ctx2, &pbw2);
        let tr = BigTransport { forms: form_transport(p1, p2), push: &push, homog_cap: h as i64 };
        let prefix = format!("choice {i}");
        out.push(Check::from(uniqueness_check(&pert1, &pert2, &tr, &small)?).prefixed(&prefix));
        out.push(Check::from(intertwining_check(&ctx1, &ctx2, &tr, &big)?).prefixed(&prefix));
    }
    out.artifact("choices", alts.len() + 1);
    out.artifact("identityTransitions", identity_transitions);
    out.artifact("homogeneityCap", h);
    out.artifact("pbwCap", cap);
    Ok(())
}

const SAMPLES: usize = 20;

fn nonzero_entries(t: &crate::cohomology::ClassTable) -> usize {
    t.entries.values().filter(|v| !v.is_zero()).count()
}

fn dims_json<S: Ord + Clone + Debug>(h: &CohomologyBasis<S>) -> Result<Value, CoreError> {
    serde_json::to_value(h.dims()).map_err(|e| CoreError::Other(e.to_string()))
}

pub(super) fn cohomology(inst: &Instance, cfg: &RunConfig, out: &mut StageOutput) -> Result<(), CoreError> {
    let (p, c) = (&inst.pair, &inst.conn);
    let alts = alternatives(inst);

    // polyvector side: the complex is finite; brackets of two classes need order 2r
    let t_cap = 2 * p.r as u32;
    let t_cx = t_complex(p);
    let t_h = ce_cohomology(&t_cx, t_degrees(p))?;
    let ctx = BigCtx::new(p, c, TFiber { rank: p.r }, t_cap)?;
    let (pert, _) = instantiate_tpoly(&ctx);
    let tr = transfer_tpoly(&ctx, &pert);
    let br = Operation::new("polyvector lambda_2", 0, |x: &TKey, y: &TKey| tr.lambda(&[*x, *y]));
    let cup = Operation::new("polyvector wedge", 1, |x: &TKey, y: &TKey| Ok(t_cup(p, x, y)));
    let (bt, r1) = induced_table(&t_h, &t_cx, &br, t_cap)?;
    let (ct, r2) = induced_table(&t_h, &t_cx, &cup, 2 * t_cap)?;
    let ids = class_ids(&t_h);
    out.extend([r1, r2]);
    out.extend(lie_on_cohomology(&ids, &bt).into_iter().map(|r| Check::from(r).prefixed("polyvector")));
    out.extend(gerstenhaber_on_cohomology(&ids, &bt, &ct).into_iter().map(|r| Check::from(r).prefixed("polyvector")));
    out.push(Check::from(representative_independence(&t_h, &t_cx, &br, &bt, SAMPLES, cfg.seed)?).prefixed("polyvector").sampled(SAMPLES, cfg.seed));
    out.artifact("polyvector", dims_json(&t_h)?);
    out.artifact("polyvectorBracketEntries", nonzero_entries(&bt));

    // polydifferential side: weight-filtered subcomplex
    let w = cfg.d_cap();
    let d_cx = d_complex(p, 2, w);
    let d_h = ce_cohomology(&d_cx, -1..=2)?;
    let dctx = d_ctx(p, c, w)?;
    let pbw = PbwMap::build(p, c, 2 * w + 2);
    let (dpert, _) = instantiate_dpoly(&dctx, &pbw);
    let dtr = transfer_dpoly(&dctx, &dpert);
    let dbr = Operation::new("polydifferential lambda_2", 0, |x: &DKey, y: &DKey| dtr.lambda(&[x.clone(), y.clone()]));
    let dcup = Operation::new("polydifferential cup", 1, |x: &DKey, y: &DKey| Ok(d_cup(x, y)));
    let (dbt, r1) = induced_table(&d_h, &d_cx, &dbr, w)?;
    let (dct, r2) = induced_table(&d_h, &d_cx, &dcup, w)?;
    let dids = class_ids(&d_h);
    out.extend([r1, r2]);
    out.extend(lie_on_cohomology(&dids, &dbt).into_iter().map(|r| Check::from(r).prefixed("polydifferential")));
    out.extend(gerstenhaber_on_cohomology(&dids, &dbt, &dct).into_iter().map(|r| Check::from(r).prefixed("polydifferential")));
    out.push(
        Check::from(representative_independence(&d_h, &d_cx, &dbr, &dbt, SAMPLES, cfg.seed)?)
            .prefixed("polydifferential")
            .sampled(SAMPLES, cfg.seed),
    );
    let mut agree = Tally::new("polyvector and polydifferential dimensions agree", w as i64);
    for n in -1..=2 {
        let (a, b) = (t_h.piece(n).map_or(0, |x| x.dim()), d_h.piece(n).map_or(0, |x| x.dim()));
        agree.flag(a == b, || format!("degree {n}: {a} ≠ {b}"));
    }
    out.push(agree.finish());
    out.artifact("polydifferential", dims_json(&d_h)?);
    out.artifact("polydifferentialWeight", w);
    out.artifact("polydifferentialBracketEntries", nonzero_entries(&dbt));

    // the same brackets for every alternative choice of (j, ∇)
    for (i, spec2) in &alts {
        let inst2 = match Instance::new(spec2) {
            Ok(x) => x,
            Err(v) => {
                out.push(choice_failure(*i, &v));
                continue;
            }
        };
        let (p2, c2) = (&inst2.pair, &inst2.conn);
        let prefix = format!("choice {i}");
        let t_cx2 = t_complex(p2);
        let t_h2 = ce_cohomology(&t_cx2, t_degrees(p2))?;
        let ctx2 = BigCtx::new(p2, c2, TFiber { rank: p2.r }, t_cap)?;
        let (pert2, _) = instantiate_tpoly(&ctx2);
        let tr2 = transfer_tpoly(&ctx2, &pert2);
        let br2 = Operation::new("polyvector lambda_2", 0, |x: &TKey, y: &TKey| tr2.lambda(&[*x, *y]));
        out.push(Check::from(compare_on_cohomology(&t_h, &br, &t_h2, &br2, |x| Ok(x.clone()), t_cap)?).prefixed(&prefix));

        let d_cx2 = d_complex(p2, 2, w);
        let d_h2 = ce_cohomology(&d_cx2, -1..=2)?;
        let dctx2 = d_ctx(p2, c2, w)?;
        let pbw2 = PbwMap::build(p2, c2, 2 * w + 2);
        let (dpert2, _) = instantiate_dpoly(&dctx2, &pbw2);
        let dtr2 = transfer_dpoly(&dctx2, &dpert2);
        let dbr2 = Operation::new("polydifferential lambda_2", 0, |x: &DKey, y: &DKey| dtr2.lambda(&[x.clone(), y.clone()]));
        out.push(Check::from(compare_on_cohomology(&d_h, &dbr, &d_h2, &dbr2, |x| Ok(x.clone()), w)?).prefixed(&prefix));
    }
    Ok(())
}
