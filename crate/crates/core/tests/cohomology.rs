mod common;

use common::*;
use fedosov_core::cohomology::*;
use fedosov_core::contraction_engine::{instantiate_dpoly, instantiate_tpoly, IdentityReport, Status};
use fedosov_core::error::CoreError;
use fedosov_core::graded_core::linalg::Matrix;
use fedosov_core::graded_core::scalar::{int, sign};
use fedosov_core::graded_core::Sparse;
use fedosov_core::homotopy_transfer::{transfer_dpoly, transfer_tpoly};
use fedosov_core::lie_pair::ce::{d_a_bott, d_basis, d_small_d, t_basis, DKey, TKey};
use fedosov_core::pbw::PbwMap;
use fedosov_core::poly_structures::{BigCtx, DFiber, TFiber};
use fedosov_core::{Connection, LiePair};

fn binomial(n: u32, k: u32) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc * (n - i) as usize / (i + 1) as usize)
}

fn assert_pass(label: &str, reports: &[IdentityReport]) {
    for r in reports {
        assert_eq!(r.status, Status::Pass, "{label}: {} {:?}", r.identity, r.witness);
    }
}

#[test]
fn vanishing_differential_gives_everything() {
    for name in ["heisenberg_center", "abelian"] {
        let p = pair(name);
        for k in t_basis(&p) {
            assert!(d_a_bott(&p, &Sparse::basis(k)).is_zero(), "{name}");
        }
        let h = ce_cohomology(&t_complex(&p), t_degrees(&p)).unwrap();
        for d in h.dims() {
            // Σ_{i+j = n+1, j ≥ 1} C(dim A, i) C(r, j), plus the scalar functions ΛA^∨ in degree i − 1
            let n = d.degree + 1;
            let want: usize = (0..=n).map(|i| binomial(p.dim_a as u32, i as u32) * binomial(p.r as u32, (n - i) as u32)).sum();
            assert_eq!(d.cohomology, want, "{name} degree {}", d.degree);
            assert_eq!(d.cohomology, d.cochains);
        }
    }
}

#[test]
fn bott_invariants_in_lowest_polyvector_degree() {
    for name in FIXTURES {
        let p = pair(name);
        // invariants of the Bott representation: v with Σ_b v_b ∇_{a_i} ∂_b = 0 for all i
        let rows: Vec<Vec<_>> = (0..p.dim_a).flat_map(|i| (0..p.r).map(move |k| (i, k))).map(|(i, k)| (0..p.r).map(|b| p.bott(i, b)[k].clone()).collect()).collect();
        let mut m = Matrix::zeros(rows.len(), p.r);
        for (i, r) in rows.into_iter().enumerate() {
            m.data[i] = r;
        }
        let oracle = p.r - m.rank();
        let keys: Vec<TKey> = (0..p.r).map(|b| TKey { a: 0, b: 1 << b }).collect();
        let cols: Vec<Vec<_>> = keys
            .iter()
            .map(|k| {
                let image = d_a_bott(&p, &Sparse::basis(*k));
                t_basis(&p).iter().map(|t| image.coefficient(t)).collect()
            })
            .collect();
        let d = Matrix::from_columns(t_basis(&p).len(), &cols);
        assert_eq!(d.kernel().len(), oracle, "{name}");
    }
    let p = pair("sl2_borel");
    let h = ce_cohomology(&t_complex(&p), t_degrees(&p)).unwrap();
    let dims: Vec<usize> = h.dims().iter().map(|d| d.cohomology).collect();
    assert_eq!(dims, vec![1, 1, 0, 0]);
}

#[test]
fn polyvector_and_polydifferential_dimensions_agree() {
    for name in FIXTURES {
        let p = pair(name);
        let t = ce_cohomology(&t_complex(&p), t_degrees(&p)).unwrap();
        let d = ce_cohomology(&d_complex(&p, 2, 3), -1..=2).unwrap();
        for n in -1..=2 {
            assert_eq!(t.piece(n).map_or(0, |x| x.dim()), d.piece(n).unwrap().dim(), "{name} degree {n}");
        }
    }
}

#[test]
fn projection_of_section_is_identity() {
    for name in FIXTURES {
        let p = pair(name);
        let h = ce_cohomology(&d_complex(&p, 1, 2), -1..=1).unwrap();
        for piece in h.pieces.values() {
            for i in 0..piece.dim() {
                let mut e = vec![int(0); piece.dim()];
                e[i] = int(3);
                assert_eq!(piece.project(&piece.section(&e)).unwrap(), e);
            }
        }
    }
}

#[test]
fn square_zero_is_asserted() {
    let p = pair("sl2_borel");
    // d + N with N: 1 ↦ α^0, α^0 ↦ α^0 ⊗ ∂_0, so (d + N)²(1) has an α^0 ⊗ ∂_0 term
    let q = pair("sl2_borel");
    let extra = |k: &TKey| match (k.a, k.b) {
        (0, 0) => Sparse::basis(TKey { a: 1, b: 0 }),
        (1, 0) => Sparse::basis(TKey { a: 1, b: 1 }),
        _ => Sparse::new(),
    };
    let broken = SmallComplex::new(t_complex(&p).pieces, |_: &TKey| 0, move |x: &Sparse<TKey>| d_a_bott(&q, x).plus(&x.map_linear(extra)));
    match ce_cohomology(&broken, t_degrees(&p)) {
        Err(CoreError::Invariant(w)) => assert!(w.contains("d²"), "{w}"),
        other => panic!("{other:?}"),
    }
}

fn leibniz_t(p: &LiePair) {
    let basis = t_basis(p);
    for x in &basis {
        for y in &basis {
            let lhs = d_a_bott(p, &t_cup(p, x, y));
            let dx = d_a_bott(p, &Sparse::basis(*x));
            let dy = d_a_bott(p, &Sparse::basis(*y));
            let mut rhs = Sparse::new();
            for (k, c) in &dx {
                rhs.add_scaled(&t_cup(p, k, y), c);
            }
            for (k, c) in &dy {
                rhs.add_scaled(&t_cup(p, x, k), &(c * sign(x.degree() as i64 + 1)));
            }
            assert_eq!(lhs, rhs, "{x:?} {y:?}");
        }
    }
}

fn leibniz_d(p: &LiePair) {
    let basis = d_basis(p, 2, 1);
    let cup = |x: &Sparse<DKey>, y: &Sparse<DKey>| {
        let mut out = Sparse::new();
        for (a, ca) in x {
            for (b, cb) in y {
                out.add_scaled(&d_cup(a, b), &(ca * cb));
            }
        }
        out
    };
    for x in &basis {
        for y in &basis {
            let (ex, ey) = (Sparse::basis(x.clone()), Sparse::basis(y.clone()));
            let lhs = d_small_d(p, &cup(&ex, &ey));
            let rhs = cup(&d_small_d(p, &ex), &ey).plus(&cup(&ex, &d_small_d(p, &ey)).scaled(&sign(x.degree() as i64 + 1)));
            assert_eq!(lhs, rhs, "{x:?} {y:?}");
        }
    }
}

#[test]
fn cup_products_satisfy_leibniz() {
    for name in FIXTURES {
        let p = pair(name);
        leibniz_t(&p);
        leibniz_d(&p);
    }
}

fn t_side(name: &str, p: &LiePair, c: &Connection, seed: u64) -> Vec<IdentityReport> {
    let cap = 2 * p.r as u32;
    let ctx = BigCtx::new(p, c, TFiber { rank: p.r }, cap).unwrap();
    let (pert, _) = instantiate_tpoly(&ctx);
    let tr = transfer_tpoly(&ctx, &pert);
    let complex = t_complex(p);
    let h = ce_cohomology(&complex, t_degrees(p)).unwrap();
    let br = Operation::new("lambda_2", 0, |x: &TKey, y: &TKey| tr.lambda(&[*x, *y]));
    let cup = Operation::new("wedge", 1, |x: &TKey, y: &TKey| Ok(t_cup(p, x, y)));
    let (bt, r1) = induced_table(&h, &complex, &br, cap).unwrap();
    let (ct, r2) = induced_table(&h, &complex, &cup, 2 * cap).unwrap();
    let ids = class_ids(&h);
    let mut out = vec![r1, r2];
    out.extend(lie_on_cohomology(&ids, &bt));
    out.extend(gerstenhaber_on_cohomology(&ids, &bt, &ct));
    out.push(representative_independence(&h, &complex, &br, &bt, 20, seed).unwrap());
    assert!(out.iter().all(|r| r.checked > 0 || r.identity.contains("representatives")), "{name}");
    out
}

fn d_setup<R>(p: &LiePair, c: &Connection, cap: u32, f: impl FnOnce(&Operation<DKey>) -> R) -> R {
    let pbw = PbwMap::build(p, c, 2 * cap + 2);
    let mut ctx = BigCtx::new(p, c, DFiber { rank: p.r }, cap).unwrap();
    ctx.extra = Some(ctx.embed(0, &Sparse::basis(ctx.fiber.m())));
    let (pert, _) = instantiate_dpoly(&ctx, &pbw);
    let tr = transfer_dpoly(&ctx, &pert);
    let br = Operation::new("lambda_2", 0, |x: &DKey, y: &DKey| tr.lambda(&[x.clone(), y.clone()]));
    f(&br)
}

#[test]
fn polyvector_gerstenhaber_structure_on_cohomology() {
    for name in FIXTURES {
        let (p, c) = pair_conn(name);
        assert_pass(name, &t_side(name, &p, &c, 7));
    }
}

#[test]
fn polydifferential_gerstenhaber_structure_on_cohomology() {
    let cap = 3;
    for name in FIXTURES {
        let (p, c) = pair_conn(name);
        let complex = d_complex(&p, 2, cap);
        let h = ce_cohomology(&complex, -1..=2).unwrap();
        let reports = d_setup(&p, &c, cap, |br| {
            let cup = Operation::new("cup", 1, |x: &DKey, y: &DKey| Ok(d_cup(x, y)));
            let (bt, r1) = induced_table(&h, &complex, br, cap).unwrap();
            let (ct, r2) = induced_table(&h, &complex, &cup, cap).unwrap();
            let ids = class_ids(&h);
            let mut out = vec![r1, r2];
            out.extend(lie_on_cohomology(&ids, &bt));
            out.extend(gerstenhaber_on_cohomology(&ids, &bt, &ct));
            out.push(representative_independence(&h, &complex, br, &bt, 20, 11).unwrap());
            out
        });
        assert_pass(name, &reports);
    }
}

/// Bracket tables on cohomology agree for two choices of `(j, ∇)`, and a
/// transport that rescales cochains is caught.
#[test]
fn brackets_on_cohomology_do_not_depend_on_the_choice() {
    let cap = 2;
    let mut nonzero_seen = false;
    for name in FIXTURES {
        for alt in alternatives(name) {
            let (p1, c1) = pair_conn(name);
            let (p2, c2) = choice(&spec(name).with_choice(&alt));
            let k1 = d_complex(&p1, 2, cap);
            let k2 = d_complex(&p2, 2, cap);
            let h1 = ce_cohomology(&k1, -1..=2).unwrap();
            let h2 = ce_cohomology(&k2, -1..=2).unwrap();
            d_setup(&p1, &c1, cap, |br1| {
                d_setup(&p2, &c2, cap, |br2| {
                    let same = compare_on_cohomology(&h1, br1, &h2, br2, |x| Ok(x.clone()), cap).unwrap();
                    assert_eq!(same.status, Status::Pass, "{name} {:?}", same.witness);
                    let (bt, _) = induced_table(&h1, &k1, br1, cap).unwrap();
                    if !bt.is_zero() {
                        nonzero_seen = true;
                        let wrong = compare_on_cohomology(&h1, br1, &h2, br2, |x| Ok(x.scaled(&int(2))), cap).unwrap();
                        assert_eq!(wrong.status, Status::Fail, "{name}");
                        assert!(wrong.witness.is_some());
                    }
                })
            });
            let t1 = t_side(name, &p1, &c1, 1);
            let t2 = t_side(name, &p2, &c2, 1);
            assert_pass(name, &t1);
            assert_pass(name, &t2);
        }
    }
    assert!(nonzero_seen);
}
