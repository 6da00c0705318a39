mod common;

use common::*;
use fedosov_core::graded_core::forms::{contract, Word};
use fedosov_core::graded_core::scalar::{frac, int};
use fedosov_core::graded_core::{MultiIndex, Sparse};
use fedosov_core::lie_pair::{Connection, LiePair};
use fedosov_core::pbw::PbwMap;
use fedosov_core::weyl_fedosov::{lift, solve_fedosov, Weyl, WeylElement};

const N: u32 = 5;

fn word(form: u32, sym: &[u32]) -> WeylElement {
    Sparse::basis(Word::new(form, MultiIndex::from_slice(sym)))
}

#[test]
fn delta_examples() {
    let (p, c) = pair_conn("heisenberg_center");
    let w = Weyl::new(&p, &c, N);
    // frame (z | x̄, ȳ): χ_1 is bit 1
    assert_eq!(w.delta(&word(0, &[1, 0])), word(0b010, &[0, 0]));
    assert!(w.delta(&word(0b111, &[0, 0])).is_zero());
    assert_eq!(w.delta(&word(0, &[2, 0])), word(0b010, &[1, 0]).scaled(&int(2)));
    // δ(χ_1·χ_1) = 2 χ_1 δ(χ_1) by the derivation rule
    let chi = word(0, &[1, 0]);
    let rule = w.mul(&chi, &w.delta(&chi)).scaled(&int(2));
    assert_eq!(w.delta(&w.mul(&chi, &chi)), rule);
}

#[test]
fn homotopy_examples() {
    let (p, c) = pair_conn("heisenberg_center");
    let w = Weyl::new(&p, &c, N);
    assert_eq!(w.h(&word(0b010, &[0, 0])), word(0, &[1, 0]));
    assert!(w.h(&word(0b001, &[1, 1])).is_zero());
    let expected = word(0b100, &[1, 0]).scaled(&frac(1, 2)).minus(&word(0b010, &[0, 1]).scaled(&frac(1, 2)));
    assert_eq!(w.h(&word(0b110, &[0, 0])), expected);
    let x = word(0b110, &[0, 0]);
    let mut homotopy = w.h(&w.delta(&x));
    homotopy.add_assign(&w.delta(&w.h(&x)));
    assert_eq!(homotopy, x.minus(&w.tau_sigma(&x)));
    let alpha = Sparse::basis(0b001u32);
    assert_eq!(w.sigma(&w.tau(&alpha)), alpha);
    assert!(w.sigma(&word(0b010, &[0, 0])).is_zero());
}

fn check_contraction(p: &LiePair, c: &Connection) {
    // cap one above the tested weight, so nothing tested touches the truncation
    let w = Weyl::new(p, c, N + 1);
    for t in w.basis(N) {
        let x = Sparse::basis(t);
        assert!(w.delta(&w.delta(&x)).is_zero(), "δ² {t:?}");
        assert!(w.h(&w.h(&x)).is_zero(), "h² {t:?}");
        assert!(w.sigma(&w.h(&x)).is_zero(), "σh {t:?}");
        let mut lhs = w.h(&w.delta(&x));
        lhs.add_assign(&w.delta(&w.h(&x)));
        assert_eq!(lhs, x.minus(&w.tau_sigma(&x)), "homotopy {t:?}");
        let dh = w.delta(&w.h(&x));
        assert!(dh.keys().all(|s| s.weight() == t.weight()));
        assert!(w.h(&x).keys().all(|s| s.weight() == t.weight() + 1));
        assert!(w.delta(&x).keys().all(|s| s.weight() + 1 == t.weight()));
        assert!(w.d_nabla(&x).keys().all(|s| s.weight() == t.weight()));
    }
    for a in 0u32..(1 << p.dim_a) {
        let alpha = Sparse::basis(a);
        assert_eq!(w.sigma(&w.tau(&alpha)), alpha);
        assert!(w.h(&w.tau(&alpha)).is_zero());
    }
}

#[test]
fn contraction_identities_exhaustive() {
    for name in FIXTURES {
        let (p, c) = pair_conn(name);
        check_contraction(&p, &c);
    }
}

#[test]
fn lifted_operators_act_on_the_weyl_factor() {
    let (p, c) = pair_conn("sl2_h");
    let w = Weyl::new(&p, &c, N);
    let x: Sparse<(Word, u32)> = Sparse::basis((Word::new(0b010, MultiIndex::zero(2)), 0b01));
    let lifted = lift(|t| w.delta_word(t), &x);
    assert!(lifted.is_zero());
    let y: Sparse<(Word, u32)> = Sparse::basis((Word::new(0, MultiIndex::unit(2, 0)), 0b11));
    assert_eq!(lift(|t| w.delta_word(t), &y), Sparse::basis((Word::new(0b010, MultiIndex::zero(2)), 0b11)));
    for a in 0u32..2 {
        let tau: Sparse<(Word, u32)> = Sparse::basis((Word::new(a, MultiIndex::zero(2)), 0b11));
        assert!(lift(|t| w.h_word(t), &tau).is_zero());
    }
}

fn anticommutator_vanishes(p: &LiePair, c: &Connection) -> bool {
    let w = Weyl::new(p, c, N);
    w.basis(N - 1).into_iter().all(|t| {
        let x = Sparse::basis(t);
        let mut v = w.delta(&w.d_nabla(&x));
        v.add_assign(&w.d_nabla(&w.delta(&x)));
        v.is_zero()
    })
}

#[test]
fn torsion_free_iff_delta_anticommutes_with_d_nabla() {
    for name in FIXTURES {
        let (p, c) = pair_conn(name);
        assert!(anticommutator_vanishes(&p, &c), "{name}");
    }
    let (p, mut c) = pair_conn("sl2_h");
    c.gamma[1][1][0] += int(1);
    assert!(!anticommutator_vanishes(&p, &c));
}

#[test]
fn d_nabla_examples() {
    let (p, c) = pair_conn("abelian");
    let w = Weyl::new(&p, &c, N);
    for t in w.basis(2) {
        assert!(w.d_nabla(&Sparse::basis(t)).is_zero());
    }
    let (p, c) = pair_conn("sl2_borel");
    let w = Weyl::new(&p, &c, N);
    let d = w.d_nabla(&w.generator(0));
    // frame (h, e | f̄): 2 λ^h ⊗ χ_f
    assert_eq!(d.coefficient(&Word::new(0b001, MultiIndex::unit(1, 0))), int(2));
    let (p, c) = pair_conn("heisenberg_x");
    let w = Weyl::new(&p, &c, N);
    // frame (x | ȳ, z̄): d λ^{z} = −λ^x λ^y
    assert_eq!(w.d_nabla(&w.form(0b100)), word(0b011, &[0, 0]).scaled(&int(-1)));
}

fn q_squared_vanishes(name: &str, p: &LiePair, c: &Connection) {
    let w = Weyl::new(p, c, N);
    let f = solve_fedosov(&w, N).unwrap();
    for v in &f.x {
        assert!(v.keys().all(|t| t.weight() >= 2 && t.degree() == 1), "{name}");
        assert!(w.h(v).is_zero(), "{name} h̃X");
    }
    for t in w.basis(N - 1) {
        let x = Sparse::basis(t);
        let qq = f.apply_q(&w, &f.apply_q(&w, &x)).filtered(|s| s.weight() < N);
        assert!(qq.is_zero(), "{name} Q² on {t:?}");
    }
}

#[test]
fn fedosov_solutions_square_to_zero() {
    for name in FIXTURES {
        let (p, c) = pair_conn(name);
        q_squared_vanishes(name, &p, &c);
        for alt in alternatives(name) {
            let (p, c) = choice(&spec(name).with_choice(&alt));
            q_squared_vanishes(name, &p, &c);
        }
    }
}

#[test]
fn flat_cases_have_vanishing_x() {
    for name in ["heisenberg_center", "abelian"] {
        let (p, c) = pair_conn(name);
        let w = Weyl::new(&p, &c, N);
        assert!(solve_fedosov(&w, N).unwrap().is_zero(), "{name}");
    }
    let (p, c) = pair_conn("sl2_h");
    let w = Weyl::new(&p, &c, N);
    assert!(!solve_fedosov(&w, N).unwrap().is_zero());
}

/// `Q(χ_k) = Σ_l λ^l ⊗ D_l(χ_k)` where `D_l` is the transpose of `∇^⚡_{e_l}`:
/// the coefficient of `χ^J` in `D_l χ_k` is `−[∂_k]∇^⚡_{e_l}(∂^J) / J!`.
#[test]
fn fedosov_field_is_the_ce_differential_of_the_flat_connection() {
    for name in FIXTURES {
        let mut choices = vec![spec(name)];
        choices.extend(alternatives(name).iter().map(|a| spec(name).with_choice(a)));
        for s in choices {
            let (p, c) = choice(&s);
            let w = Weyl::new(&p, &c, N);
            let f = solve_fedosov(&w, N).unwrap();
            let pbw = PbwMap::build(&p, &c, N + 1);
            for k in 0..p.r {
                let q = f.apply_q(&w, &w.generator(k));
                for l in 0..p.n {
                    let mut from_pbw = Sparse::new();
                    for j in MultiIndex::up_to(p.r, N) {
                        let image = pbw.nabla_flash(&p, l, &Sparse::basis(j)).unwrap();
                        let coef = image.coefficient(&MultiIndex::unit(p.r, k));
                        from_pbw.add_term(j, -coef / j.factorial());
                    }
                    let from_q: Sparse<MultiIndex> = contract(l as u32, &q.filtered(|t| t.form == 1 << l))
                        .iter()
                        .map(|(t, c)| (t.sym, c.clone()))
                        .collect();
                    assert_eq!(from_q, from_pbw, "{} k={k} l={l}", s.name);
                }
            }
        }
    }
}
