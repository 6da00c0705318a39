mod common;

use std::collections::BTreeMap;

use common::*;
use fedosov_core::graded_core::comul::sym_comul;
use fedosov_core::graded_core::scalar::{frac, int};
use fedosov_core::graded_core::{MultiIndex, Sparse};
use fedosov_core::lie_pair::LiePair;
use fedosov_core::pbw::{PbwMap, Transition};
use fedosov_core::Scalar;
use num_traits::Zero;

/// Rewrites words of `U(L)` by adjacent swaps `x_j x_i → x_i x_j + [x_j, x_i]`
/// until sorted, then drops words with an `A` letter.
fn rewrite_oracle(p: &LiePair, word: Vec<usize>) -> Sparse<MultiIndex> {
    let key = |l: usize| match p.comp_idx.iter().position(|&c| c == l) {
        Some(k) => k,
        None => p.r + p.a_idx.iter().position(|&a| a == l).unwrap(),
    };
    let mut pending: Vec<(Vec<usize>, Scalar)> = vec![(word, int(1))];
    let mut out = Sparse::new();
    while let Some((w, c)) = pending.pop() {
        match (0..w.len().saturating_sub(1)).find(|&i| key(w[i]) > key(w[i + 1])) {
            None => {
                if w.iter().all(|l| p.comp_idx.contains(l)) {
                    let mut m = MultiIndex::zero(p.r);
                    for l in w {
                        m = m.add_unit(key(l));
                    }
                    out.add_term(m, c);
                }
            }
            Some(i) => {
                let mut swapped = w.clone();
                swapped.swap(i, i + 1);
                pending.push((swapped, c.clone()));
                for (t, b) in p.input_bracket[w[i]][w[i + 1]].iter().enumerate() {
                    if !b.is_zero() {
                        let mut v = w[..i].to_vec();
                        v.push(t);
                        v.extend_from_slice(&w[i + 2..]);
                        pending.push((v, &c * b));
                    }
                }
            }
        }
    }
    out
}

fn all_words(n: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out.into_iter().flat_map(|w| (0..n).map(move |l| [w.clone(), vec![l]].concat())).collect();
    }
    out
}

#[test]
fn normal_form_matches_rewriting_oracle() {
    for name in FIXTURES {
        let p = pair(name);
        for len in 0..=4 {
            for w in all_words(p.n, len) {
                assert_eq!(p.uq.normalize(&w), rewrite_oracle(&p, w.clone()), "{name} {w:?}");
            }
        }
    }
}

fn comul_u(u: &Sparse<MultiIndex>) -> Sparse<(MultiIndex, MultiIndex)> {
    let mut out = Sparse::new();
    for (k, c) in u {
        for (a, b, m) in sym_comul(k) {
            out.add_term((a, b), c * m);
        }
    }
    out
}

fn tensor(pbw: &PbwMap, x: &Sparse<(MultiIndex, MultiIndex)>) -> Sparse<(MultiIndex, MultiIndex)> {
    let mut out = Sparse::new();
    for ((a, b), c) in x {
        for (u, cu) in pbw.pbw_basis(a) {
            for (v, cv) in pbw.pbw_basis(b) {
                out.add_term((*u, *v), c * cu * cv);
            }
        }
    }
    out
}

#[test]
fn pbw_low_degree_examples() {
    for name in FIXTURES {
        let (p, c) = pair_conn(name);
        let pbw = PbwMap::build(&p, &c, 3);
        assert_eq!(pbw.pbw_basis(&MultiIndex::zero(p.r)), &Sparse::basis(MultiIndex::zero(p.r)));
        for k in 0..p.r {
            let jk = p.uq.act(&p.j_letters(k), &Sparse::basis(MultiIndex::zero(p.r)));
            assert_eq!(pbw.pbw_basis(&MultiIndex::unit(p.r, k)), &jk);
        }
    }
    // symmetrization ½(xy + yx) = xy − ½z ≡ xy
    let (p, c) = pair_conn("heisenberg_center");
    let pbw = PbwMap::build(&p, &c, 3);
    let xy = MultiIndex::from_slice(&[1, 1]);
    let mut sym = rewrite_oracle(&p, vec![0, 1]);
    sym.add_assign(&rewrite_oracle(&p, vec![1, 0]));
    assert_eq!(pbw.pbw_basis(&xy), &sym.scaled(&frac(1, 2)));
    assert_eq!(pbw.pbw_basis(&xy), &Sparse::basis(xy));
}

#[test]
fn pbw_inverse_and_coalgebra_morphism() {
    for name in FIXTURES {
        let mut choices = vec![spec(name)];
        choices.extend(alternatives(name).iter().map(|a| spec(name).with_choice(a)));
        for s in choices {
            let (p, c) = choice(&s);
            let pbw = PbwMap::build(&p, &c, 4);
            for j in MultiIndex::up_to(p.r, 4) {
                let s = Sparse::basis(j);
                assert_eq!(pbw.pbw_inv(&pbw.pbw(&s).unwrap()).unwrap(), s);
                assert_eq!(pbw.pbw(&pbw.pbw_inv(&s).unwrap()).unwrap(), s);
                if j.weight() <= 3 {
                    let lhs = comul_u(pbw.pbw_basis(&j));
                    let sym: Sparse<(MultiIndex, MultiIndex)> =
                        sym_comul(&j).into_iter().map(|(a, b, m)| ((a, b), m)).collect();
                    assert_eq!(lhs, tensor(&pbw, &sym), "{name} {j:?}");
                }
            }
            assert!(pbw.pbw(&Sparse::basis(MultiIndex::up_to(p.r, 5).pop().unwrap())).is_err());
        }
    }
}

#[test]
fn flat_connection_examples() {
    let (p, c) = pair_conn("heisenberg_center");
    let pbw = PbwMap::build(&p, &c, 3);
    let xbar = Sparse::basis(MultiIndex::unit(2, 0));
    assert!(pbw.nabla_flash(&p, 0, &xbar).unwrap().is_zero());
    for name in FIXTURES {
        let (p, c) = pair_conn(name);
        let pbw = PbwMap::build(&p, &c, 4);
        let one = Sparse::basis(MultiIndex::zero(p.r));
        for a in 0..p.dim_a {
            assert!(pbw.nabla_flash(&p, a, &one).unwrap().is_zero());
            for j in 0..p.r {
                let v = pbw.nabla_flash(&p, a, &Sparse::basis(MultiIndex::unit(p.r, j))).unwrap();
                let lead: Vec<Scalar> = (0..p.r).map(|k| v.coefficient(&MultiIndex::unit(p.r, k))).collect();
                assert_eq!(lead, p.bott(a, j), "{name}");
                assert!(v.keys().all(|m| m.weight() >= 1));
            }
        }
    }
}

fn apply_flash(pbw: &PbwMap, p: &LiePair, l: usize, s: &Sparse<MultiIndex>) -> Sparse<MultiIndex> {
    pbw.nabla_flash(p, l, s).unwrap()
}

#[test]
fn flat_connection_is_flat_and_a_coderivation() {
    for name in FIXTURES {
        let (p, c) = pair_conn(name);
        let pbw = PbwMap::build(&p, &c, 4);
        for j in MultiIndex::up_to(p.r, 2) {
            let s = Sparse::basis(j);
            for l1 in 0..p.n {
                for l2 in 0..p.n {
                    let mut lhs = apply_flash(&pbw, &p, l1, &apply_flash(&pbw, &p, l2, &s));
                    lhs.sub_assign(&apply_flash(&pbw, &p, l2, &apply_flash(&pbw, &p, l1, &s)));
                    let mut rhs = Sparse::new();
                    for (l, cl) in p.c[l1][l2].iter().enumerate() {
                        if !cl.is_zero() {
                            rhs.add_scaled(&apply_flash(&pbw, &p, l, &s), cl);
                        }
                    }
                    assert_eq!(lhs, rhs, "{name} {j:?} {l1} {l2}");
                }
            }
            for l in 0..p.n {
                let image = apply_flash(&pbw, &p, l, &s);
                let lhs: Sparse<(MultiIndex, MultiIndex)> = image
                    .iter()
                    .flat_map(|(k, c)| sym_comul(k).into_iter().map(move |(a, b, m)| ((a, b), c * m)))
                    .collect();
                let mut rhs = Sparse::new();
                for (a, b, m) in sym_comul(&j) {
                    for (x, cx) in &apply_flash(&pbw, &p, l, &Sparse::basis(a)) {
                        rhs.add_term((*x, b), &m * cx);
                    }
                    for (y, cy) in &apply_flash(&pbw, &p, l, &Sparse::basis(b)) {
                        rhs.add_term((a, *y), &m * cy);
                    }
                }
                assert_eq!(lhs, rhs, "{name} coderivation {j:?} {l}");
            }
        }
    }
}

#[test]
fn transitions_between_choices() {
    for name in FIXTURES {
        let (p, c) = pair_conn(name);
        let pbw = PbwMap::build(&p, &c, 3);
        assert!(Transition::new(&pbw, &pbw).unwrap().is_identity());
        for alt in alternatives(name) {
            let (p2, c2) = choice(&spec(name).with_choice(&alt));
            let pbw2 = PbwMap::build(&p2, &c2, 3);
            let t = Transition::new(&pbw, &pbw2).unwrap();
            let mut total = BTreeMap::new();
            for (j, v) in &t.psi {
                // leading term is the identity, corrections have lower weight
                assert_eq!(v.coefficient(j), int(1));
                assert!(v.keys().all(|k| k == j || k.weight() < j.weight()));
                let lhs = comul_u(v);
                let mut rhs = Sparse::new();
                for (a, b, m) in sym_comul(j) {
                    for (x, cx) in &t.psi[&a] {
                        for (y, cy) in &t.psi[&b] {
                            rhs.add_term((*x, *y), &m * cx * cy);
                        }
                    }
                }
                assert_eq!(lhs, rhs, "{name} ψ coalgebra {j:?}");
                let back = v.map_linear(|k| t.psi_inv[k].clone());
                assert_eq!(back, Sparse::basis(*j));
                total.insert(*j, v.clone());
            }
            if name == "heisenberg_center" && alt.connection.is_some() {
                assert!(!t.is_identity());
                assert!(t.psi.iter().all(|(j, v)| j.weight() >= 2 || *v == Sparse::basis(*j)));
            }
        }
    }
}
