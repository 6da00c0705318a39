mod common;

use common::*;
use fedosov_core::contraction_engine::{instantiate_tpoly, ContractionMaps, Status};
use fedosov_core::error::CoreError;
use fedosov_core::graded_core::forms::{wedge_sign, FormMask};
use fedosov_core::graded_core::scalar::Scalar;
use fedosov_core::graded_core::{MultiIndex, Sparse};
use fedosov_core::homotopy_transfer::{compare_matched, matched_detect, MatchedData};
use fedosov_core::lie_pair::ce::TKey;
use fedosov_core::lie_pair::LiePair;
use fedosov_core::poly_structures::{BigCtx, TFiber};

const MATCHED: [&str; 3] = ["sl2_borel", "heisenberg_x", "abelian"];

#[test]
fn detection() {
    assert!(!matched_detect(&pair("heisenberg_center")));
    assert!(matched_detect(&pair("sl2_borel")));
    assert!(matched_detect(&pair("heisenberg_x")));
    match MatchedData::new(&pair("heisenberg_center")) {
        Err(CoreError::NotMatched(w)) => assert!(w.contains("leaves j(B)"), "{w}"),
        _ => panic!("non-matched pair accepted"),
    }
}

/// Every matched `(j, ∇)` choice available in the fixtures.
fn matched_choices() -> Vec<(String, fedosov_core::LiePairSpec)> {
    let mut out = Vec::new();
    for name in FIXTURES {
        let base = spec(name);
        if pair(name).is_matched() {
            out.push((name.to_string(), base.clone()));
        }
        for (i, alt) in base.alternatives.iter().enumerate() {
            let s = base.with_choice(alt);
            if choice(&s).0.is_matched() {
                out.push((format!("{name}#{i}"), s));
            }
        }
    }
    out
}

#[test]
fn transferred_structures_equal_direct_ones() {
    let choices = matched_choices();
    assert!(choices.len() >= 5, "{}", choices.len());
    for (label, s) in choices {
        let (p, c) = choice(&s);
        let cmp = compare_matched(&p, &c, 4, 3).unwrap();
        for r in &cmp.reports {
            assert_eq!(r.status, Status::Pass, "{label}: {} {:?}", r.identity, r.witness);
        }
        assert!(cmp.passed());
    }
}

fn wedge(x: FormMask, y: FormMask) -> Sparse<FormMask> {
    match wedge_sign(x, y) {
        Some(neg) => Sparse::term(x | y, if neg { -Scalar::from_integer(1.into()) } else { Scalar::from_integer(1.into()) }),
        None => Sparse::new(),
    }
}

/// `∇_{b_k} ξ` with `(∇_b α)(a) = −α(pr_A[j b, a])`, extended as a derivation.
fn bott_on_forms(p: &LiePair, k: usize, xi: FormMask) -> Sparse<FormMask> {
    let a = p.dim_a;
    let mut out = Sparse::new();
    for ip in 0..a {
        if xi & (1 << ip) == 0 {
            continue;
        }
        let before = (xi & ((1 << ip) - 1)).count_ones();
        for i in 0..a {
            let c = -p.c[a + k][i][ip].clone();
            let rest = xi & !(1 << ip);
            // α^{ip} sits after `before` letters; the new letter is moved into place from the front
            let sign_front = if before % 2 == 1 { -c.clone() } else { c.clone() };
            out.add_scaled(&wedge(1 << i, rest), &sign_front);
        }
    }
    out
}

fn tensor_b(x: &Sparse<FormMask>, b: FormMask) -> Sparse<TKey> {
    x.map_keys(|a| TKey { a: *a, b })
}

#[test]
fn section_bracket_formula() {
    for name in MATCHED {
        let p = pair(name);
        let md = MatchedData::new(&p).unwrap();
        for x1 in 0u32..(1 << p.dim_a) {
            for x2 in 0u32..(1 << p.dim_a) {
                for b1 in 0..p.r {
                    for b2 in 0..p.r {
                        let got = md.schouten(&TKey { a: x1, b: 1 << b1 }, &TKey { a: x2, b: 1 << b2 });
                        let mut want = Sparse::new();
                        for (m, c) in md.b_bracket(b1, b2) {
                            want.add_scaled(&tensor_b(&wedge(x1, x2), 1 << m), &c);
                        }
                        let n1 = bott_on_forms(&p, b1, x2);
                        for (f, c) in &n1 {
                            want.add_scaled(&tensor_b(&wedge(x1, *f), 1 << b2), c);
                        }
                        let n2 = bott_on_forms(&p, b2, x1);
                        for (f, c) in &n2 {
                            want.add_scaled(&tensor_b(&wedge(*f, x2), 1 << b1), &-c.clone());
                        }
                        assert_eq!(got, want, "{name} ξ1={x1:b} b{b1} ξ2={x2:b} b{b2}");
                    }
                }
            }
        }
    }
}

fn smash(md: &MatchedData, x: &Sparse<(FormMask, MultiIndex)>, y: &Sparse<(FormMask, MultiIndex)>) -> Sparse<(FormMask, MultiIndex)> {
    let mut out = Sparse::new();
    for ((xi, m), c) in x {
        for (k, ck) in &md.x_to_y(m) {
            for ((eta, e), d) in y {
                out.add_scaled(&md.smash_product(*xi, &k.letters(), *eta, &Sparse::basis(*e)), &(c * ck * d));
            }
        }
    }
    out
}

#[test]
fn smash_product_relations() {
    for name in MATCHED {
        let p = pair(name);
        let md = MatchedData::new(&p).unwrap();
        let z = MultiIndex::zero(p.r);
        let forms: Vec<FormMask> = (0u32..(1 << p.dim_a)).collect();
        let monos = MultiIndex::up_to(p.r, 2);
        let el = |f: FormMask, m: MultiIndex| Sparse::basis((f, m));
        for &xi in &forms {
            for &eta in &forms {
                assert_eq!(smash(&md, &el(xi, z), &el(eta, z)), wedge(xi, eta).map_keys(|f| (*f, z)));
            }
            for &u in &monos {
                assert_eq!(smash(&md, &el(xi, z), &el(0, u)), el(xi, u));
            }
            for k in 0..p.r {
                let b = MultiIndex::unit(p.r, k);
                let commutator = smash(&md, &el(0, b), &el(xi, z)).minus(&smash(&md, &el(xi, z), &el(0, b)));
                assert_eq!(commutator, bott_on_forms(&p, k, xi).map_keys(|f| (*f, z)), "{name} ξ={xi:b} b{k}");
            }
        }
        for &u in &monos {
            for &v in &monos {
                let prod = md.y_to_x(&u);
                let mut want = Sparse::new();
                for (m, c) in &prod {
                    want.add_scaled(&smash(&md, &el(0, *m), &Sparse::basis((0, v))), c);
                }
                assert_eq!(smash(&md, &md.y_to_x(&u).map_keys(|m| (0, *m)), &el(0, v)), want);
            }
        }
        let mut elems = Vec::new();
        for &f in &forms {
            for &m in &MultiIndex::up_to(p.r, 1) {
                elems.push(el(f, m));
            }
        }
        for x in &elems {
            for y in &elems {
                for w in &elems {
                    assert_eq!(smash(&md, &smash(&md, x, y), w), smash(&md, x, &smash(&md, y, w)), "{name} associativity");
                }
            }
        }
    }
}

#[test]
fn perturbed_tau_respects_matched_structure() {
    let h = 4;
    for name in MATCHED {
        let (p, c) = pair_conn(name);
        let md = MatchedData::new(&p).unwrap();
        let ctx = BigCtx::new(&p, &c, TFiber { rank: p.r }, h).unwrap();
        let (pert, _) = instantiate_tpoly(&ctx);
        let tau = |x: &Sparse<TKey>| pert.tau(x).unwrap();
        let low = |x: &Sparse<_>| x.filtered(|k| ctx.homog(k) < h as i64);
        let forms: Vec<FormMask> = (0u32..(1 << p.dim_a)).collect();
        for &xi in &forms {
            for &eta in &forms {
                for b in 0..p.r {
                    let sec = |f: FormMask, k: usize| Sparse::basis(TKey { a: f, b: 1 << k });
                    let fun = |f: FormMask| Sparse::basis(TKey { a: f, b: 0 });
                    let lhs = tau(&tensor_b(&wedge(xi, eta), 1 << b));
                    let rhs = ctx.cup(&tau(&fun(xi)), &tau(&sec(eta, b)));
                    assert_eq!(low(&lhs), low(&rhs), "{name} product ξ={xi:b} η={eta:b} b{b}");
                    for c2 in 0..p.r {
                        let lhs = ctx.bracket(&tau(&sec(xi, b)), &tau(&sec(eta, c2)));
                        let rhs = tau(&md.schouten(&TKey { a: xi, b: 1 << b }, &TKey { a: eta, b: 1 << c2 }));
                        assert_eq!(low(&lhs), low(&rhs), "{name} section bracket ξ={xi:b} b{b} η={eta:b} c{c2}");
                    }
                    let lhs = ctx.bracket(&tau(&sec(xi, b)), &tau(&fun(eta)));
                    let rhs = tau(&md.schouten(&TKey { a: xi, b: 1 << b }, &TKey { a: eta, b: 0 }));
                    assert_eq!(low(&lhs), low(&rhs), "{name} anchor ξ={xi:b} b{b} η={eta:b}");
                }
            }
        }
    }
}
