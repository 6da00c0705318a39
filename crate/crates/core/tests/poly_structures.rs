mod common;

use common::*;
use fedosov_core::graded_core::forms::Word;
use fedosov_core::graded_core::scalar::{int, sign};
use fedosov_core::graded_core::{MultiIndex, Sparse};
use fedosov_core::lie_pair::ce::d_h_tuple;
use fedosov_core::poly_structures::{hochschild_fiber, BigCtx, BigElement, DFiber, DTuple, Fiber, TFiber};
use proptest::prelude::*;

fn mi(e: &[u32]) -> MultiIndex {
    MultiIndex::from_slice(e)
}

type TElem = Sparse<(MultiIndex, u32)>;
type DElem = Sparse<(MultiIndex, DTuple)>;

fn fiber_bracket<F: Fiber>(f: &F, x: &Sparse<(MultiIndex, F::Coef)>, y: &Sparse<(MultiIndex, F::Coef)>) -> Sparse<(MultiIndex, F::Coef)> {
    let mut out = Sparse::new();
    for (a, c) in x {
        for (b, d) in y {
            out.add_scaled(&f.bracket(a, b), &(c * d));
        }
    }
    out
}

/// `[x,[y,z]] − [[x,y],z] − (−1)^{|x||y|}[y,[x,z]]` for homogeneous basis terms.
fn jacobiator<F: Fiber>(f: &F, x: &(MultiIndex, F::Coef), y: &(MultiIndex, F::Coef), z: &(MultiIndex, F::Coef)) -> Sparse<(MultiIndex, F::Coef)> {
    let b = |p: &(MultiIndex, F::Coef)| Sparse::basis(p.clone());
    let (xs, ys, zs) = (b(x), b(y), b(z));
    let s = sign(f.arity(&x.1) as i64 * f.arity(&y.1) as i64);
    let mut j = fiber_bracket(f, &xs, &fiber_bracket(f, &ys, &zs));
    j.sub_assign(&fiber_bracket(f, &fiber_bracket(f, &xs, &ys), &zs));
    j.sub_assign(&fiber_bracket(f, &ys, &fiber_bracket(f, &xs, &zs)).scaled(&s));
    j
}

#[test]
fn schouten_examples() {
    let t = TFiber { rank: 2 };
    let d1 = Sparse::basis((mi(&[0, 0]), 0b01u32));
    let chi1_d1: TElem = Sparse::basis((mi(&[1, 0]), 0b01));
    assert_eq!(fiber_bracket(&t, &d1, &chi1_d1), d1);
    // [∂_1∧∂_2, χ_1] = −∂_2 under the right-derivative convention
    let d12: TElem = Sparse::basis((mi(&[0, 0]), 0b11));
    let chi1: TElem = Sparse::basis((mi(&[1, 0]), 0));
    assert_eq!(fiber_bracket(&t, &d12, &chi1), Sparse::term((mi(&[0, 0]), 0b10), int(-1)));
    // a vector field acts on functions by differentiation
    let chi1sq: TElem = Sparse::basis((mi(&[2, 0]), 0));
    assert_eq!(fiber_bracket(&t, &d1, &chi1sq), Sparse::term((mi(&[1, 0]), 0), int(2)));
}

#[test]
fn schouten_is_graded_lie_exhaustively() {
    let t = TFiber { rank: 2 };
    let mut basis = Vec::new();
    for i in MultiIndex::up_to(2, 2) {
        for s in 0u32..4 {
            basis.push((i, s));
        }
    }
    for x in &basis {
        for y in &basis {
            let xy = t.bracket(x, y);
            let yx = t.bracket(y, x);
            let s = sign(t.arity(&x.1) as i64 * t.arity(&y.1) as i64 + 1);
            assert_eq!(xy, yx.scaled(&s), "antisymmetry {x:?} {y:?}");
            for z in &basis {
                assert!(jacobiator(&t, x, y, z).is_zero(), "Jacobi {x:?} {y:?} {z:?}");
            }
        }
    }
}

#[test]
fn gerstenhaber_examples() {
    let d = DFiber { rank: 1 };
    let d1: DElem = Sparse::basis((mi(&[0]), vec![mi(&[1])]));
    let chi_d1: DElem = Sparse::basis((mi(&[1]), vec![mi(&[1])]));
    assert_eq!(fiber_bracket(&d, &chi_d1, &d1), d1.neg());
    let m: DElem = Sparse::basis(d.m());
    assert!(fiber_bracket(&d, &m, &m).is_zero());
}

fn monomials(rank: usize, w: u32) -> Vec<Sparse<MultiIndex>> {
    MultiIndex::up_to(rank, w).into_iter().map(Sparse::basis).collect()
}

fn d_terms(rank: usize, max_slots: usize, w: u32) -> Vec<(MultiIndex, DTuple)> {
    let mut tuples: Vec<DTuple> = vec![vec![]];
    let mut all = vec![vec![]];
    for _ in 0..max_slots {
        let mut next = Vec::new();
        for t in &tuples {
            for j in MultiIndex::up_to(rank, w) {
                let mut v = t.clone();
                v.push(j);
                next.push(v);
            }
        }
        all.extend(next.iter().cloned());
        tuples = next;
    }
    let mut out = Vec::new();
    for i in MultiIndex::up_to(rank, w) {
        for t in &all {
            out.push((i, t.clone()));
        }
    }
    out
}

#[test]
fn partial_composition_matches_operator_oracle() {
    let d = DFiber { rank: 2 };
    let terms = d_terms(2, 2, 1);
    let args = monomials(2, 2);
    for x in terms.iter().filter(|x| !x.1.is_empty()) {
        for y in &terms {
            let u = x.1.len();
            let v = y.1.len();
            let slots = u + v - 1;
            for i in 0..u {
                let comp = d.compose_at(x, y, i);
                // a fixed rotating choice of polynomial arguments
                for shift in 0..3 {
                    let fs: Vec<_> = (0..slots).map(|s| args[(s * 5 + shift * 7 + i) % args.len()].clone()).collect();
                    let mut lhs = Sparse::new();
                    for (t, c) in &comp {
                        lhs.add_scaled(&d.evaluate(t, &fs), c);
                    }
                    let inner = d.evaluate(y, &fs[i..i + v]);
                    let mut outer_args = fs[..i].to_vec();
                    outer_args.push(inner);
                    outer_args.extend_from_slice(&fs[i + v..]);
                    assert_eq!(lhs, d.evaluate(x, &outer_args), "{x:?} ∘_{i} {y:?}");
                }
            }
        }
    }
}

#[test]
fn bracket_with_m_is_signed_hochschild() {
    let d = DFiber { rank: 2 };
    let m = d.m();
    for (i, u) in d_terms(2, 3, 1) {
        if i.weight() > 0 || u.is_empty() {
            continue;
        }
        let k = u.len() as i64 - 1;
        let lhs = d.bracket(&m, &(i, u.clone()));
        let rhs = hochschild_fiber(2, &(i, u.clone())).scaled(&sign(k));
        assert_eq!(lhs, rhs, "{u:?}");
    }
}

#[test]
fn hochschild_squares_to_zero() {
    for u in d_terms(2, 3, 2).into_iter().map(|t| t.1) {
        let once = d_h_tuple(2, &u);
        let mut twice = Sparse::new();
        for (v, c) in &once {
            twice.add_scaled(&d_h_tuple(2, v), c);
        }
        assert!(twice.is_zero(), "{u:?}");
    }
}

fn d_term_strategy() -> impl Strategy<Value = (MultiIndex, DTuple)> {
    (prop::collection::vec(0u32..2, 2), prop::collection::vec(prop::collection::vec(0u32..2, 2), 0..3))
        .prop_map(|(i, t)| (mi(&i), t.iter().map(|j| mi(j)).collect()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gerstenhaber_is_graded_lie(x in d_term_strategy(), y in d_term_strategy(), z in d_term_strategy()) {
        let d = DFiber { rank: 2 };
        let s = sign(d.arity(&x.1) as i64 * d.arity(&y.1) as i64 + 1);
        prop_assert_eq!(d.bracket(&x, &y), d.bracket(&y, &x).scaled(&s));
        prop_assert!(jacobiator(&d, &x, &y, &z).is_zero());
    }
}

fn big_basis<F: Fiber>(ctx: &BigCtx<F>, coefs: &[F::Coef], max_i: u32) -> Vec<(Word, F::Coef)> {
    let mut out = Vec::new();
    for form in 0u32..(1 << ctx.pair.n) {
        for i in MultiIndex::up_to(ctx.pair.r, max_i) {
            for c in coefs {
                out.push((Word::new(form, i), c.clone()));
            }
        }
    }
    out
}

fn squares_to_zero<F: Fiber>(ctx: &BigCtx<F>, basis: &[(Word, F::Coef)], op: impl Fn(&BigElement<F::Coef>) -> BigElement<F::Coef>) {
    let h = ctx.homog_cap;
    for t in basis {
        let level = (h - 1).min(ctx.homog(t) + h - 1);
        let x = Sparse::basis(t.clone());
        let sq = op(&op(&x)).filtered(|k| ctx.homog(k) <= level);
        assert!(sq.is_zero(), "{}: square on {t:?} = {sq:?}", ctx.pair.name);
    }
}

#[test]
fn polyvector_differential_squares_to_zero() {
    for name in FIXTURES {
        let (p, c) = pair_conn(name);
        let ctx = BigCtx::new(&p, &c, TFiber { rank: p.r }, 3).unwrap();
        let coefs: Vec<u32> = (0u32..(1 << p.r)).collect();
        let basis = big_basis(&ctx, &coefs, 1);
        squares_to_zero(&ctx, &basis, |x| ctx.total(x));
        squares_to_zero(&ctx, &basis, |x| ctx.d0(x));
        // [δ, −] on the extended algebra is δ̃
        for t in &basis {
            let x = Sparse::basis(*t);
            assert_eq!(ctx.bracket(&ctx.delta_vf, &x), ctx.delta_tilde(&x), "{t:?}");
        }
    }
}

fn d_ctx<'a>(p: &'a fedosov_core::LiePair, c: &'a fedosov_core::Connection, h: u32) -> BigCtx<'a, DFiber> {
    let mut ctx = BigCtx::new(p, c, DFiber { rank: p.r }, h).unwrap();
    let m = ctx.embed(0, &Sparse::basis(ctx.fiber.m()));
    ctx.extra = Some(m);
    ctx
}

#[test]
fn polydifferential_differential_squares_to_zero() {
    for name in ["heisenberg_center", "sl2_borel", "sl2_h"] {
        let (p, c) = pair_conn(name);
        let ctx = d_ctx(&p, &c, 3);
        let z = MultiIndex::zero(p.r);
        let mut coefs: Vec<DTuple> = vec![vec![], vec![z]];
        for k in 0..p.r {
            coefs.push(vec![MultiIndex::unit(p.r, k)]);
            coefs.push(vec![MultiIndex::unit(p.r, k), z]);
        }
        let basis = big_basis(&ctx, &coefs, 1);
        squares_to_zero(&ctx, &basis, |x| ctx.d0(x));
        squares_to_zero(&ctx, &basis, |x| ctx.total(x));
    }
}

#[test]
fn fedosov_vector_fields_commute_with_m() {
    for name in FIXTURES {
        let (p, c) = pair_conn(name);
        let ctx = d_ctx(&p, &c, 4);
        let m = ctx.extra.clone().unwrap();
        let mut v = ctx.nabla_vf.clone();
        v.add_assign(&ctx.x_vf);
        assert!(ctx.bracket(&v, &m).is_zero(), "{name}");
        assert!(ctx.bracket(&ctx.delta_vf, &m).is_zero(), "{name}");
    }
}

/// The `[m, −]` columns and the `−δ̃` rows of the big polydifferential complex
/// anticommute.
#[test]
fn hochschild_and_koszul_directions_anticommute() {
    for name in FIXTURES {
        let (p, c) = pair_conn(name);
        let ctx = d_ctx(&p, &c, 3);
        let m = ctx.extra.clone().unwrap();
        let z = MultiIndex::zero(p.r);
        let mut coefs: Vec<DTuple> = vec![vec![], vec![z], vec![z, z]];
        for k in 0..p.r {
            coefs.push(vec![MultiIndex::unit(p.r, k)]);
            coefs.push(vec![MultiIndex::unit(p.r, k), z]);
        }
        for t in big_basis(&ctx, &coefs, 2) {
            let x = Sparse::basis(t.clone());
            let mut s = ctx.delta_tilde(&ctx.bracket(&m, &x));
            s.add_assign(&ctx.bracket(&m, &ctx.delta_tilde(&x)));
            assert!(s.is_zero(), "{name} {t:?}: {s:?}");
        }
    }
}

#[test]
fn extended_bracket_jacobi() {
    let (p, c) = pair_conn("sl2_borel");
    let ctx = BigCtx::new(&p, &c, TFiber { rank: p.r }, 50).unwrap();
    let basis = big_basis(&ctx, &[0, 1], 1);
    let deg = |t: &(Word, u32)| ctx.degree(t) as i64;
    for (n, x) in basis.iter().enumerate().step_by(3) {
        for y in basis.iter().skip(n % 5).step_by(4) {
            for z in basis.iter().skip(n % 7).step_by(5) {
                let (xs, ys, zs) = (Sparse::basis(*x), Sparse::basis(*y), Sparse::basis(*z));
                let mut j = ctx.bracket(&xs, &ctx.bracket(&ys, &zs));
                j.sub_assign(&ctx.bracket(&ctx.bracket(&xs, &ys), &zs));
                j.sub_assign(&ctx.bracket(&ys, &ctx.bracket(&xs, &zs)).scaled(&sign(deg(x) * deg(y))));
                assert!(j.is_zero(), "{x:?} {y:?} {z:?}");
            }
        }
    }
}

/// `D(x·y) = Dx·y + (−1)^{|x|} x·Dy` with `|x| = |ω| + cup degree`.
fn derivation_defect<F: Fiber>(ctx: &BigCtx<F>, x: &(Word, F::Coef), y: &(Word, F::Coef), op: &impl Fn(&BigElement<F::Coef>) -> BigElement<F::Coef>) -> BigElement<F::Coef> {
    let (xs, ys) = (Sparse::basis(x.clone()), Sparse::basis(y.clone()));
    let dx = x.0.degree() as i64 + ctx.fiber.cup_degree(&x.1) as i64;
    let mut out = op(&ctx.cup(&xs, &ys));
    out.sub_assign(&ctx.cup(&op(&xs), &ys));
    out.sub_assign(&ctx.cup(&xs, &op(&ys)).scaled(&sign(dx)));
    out
}

#[test]
fn polyvector_differential_is_a_derivation_of_the_wedge() {
    let (p, c) = pair_conn("heisenberg_x");
    let ctx = BigCtx::new(&p, &c, TFiber { rank: p.r }, 3).unwrap();
    let basis = big_basis(&ctx, &[0, 1, 2, 3], 1);
    let op = |x: &BigElement<u32>| ctx.total(x);
    for x in basis.iter().step_by(5) {
        for y in basis.iter().step_by(7) {
            let level = ctx.homog(x) + ctx.homog(y) + 1;
            let defect = derivation_defect(&ctx, x, y, &op).filtered(|k| ctx.homog(k) <= level.min(1));
            assert!(defect.is_zero(), "{x:?} {y:?}: {defect:?}");
        }
    }
}
