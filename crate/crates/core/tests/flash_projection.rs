//! The `χ`-constant part of the bracket of `∇^⚡_a`, seen as a vertical vector field,
//! with a constant fiber element recovers the action of `a` on that element.

mod common;

use common::*;
use fedosov_core::graded_core::{MultiIndex, Sparse};
use fedosov_core::pbw::PbwMap;
use fedosov_core::poly_structures::{DFiber, DTuple, Fiber, TFiber};

fn project_constant<C: Ord + Clone>(x: &Sparse<(MultiIndex, C)>) -> Sparse<(MultiIndex, C)> {
    x.filtered(|(i, _)| i.weight() == 0)
}

fn bracket_with<F: Fiber>(f: &F, v: &Sparse<(MultiIndex, F::Coef)>, y: &(MultiIndex, F::Coef)) -> Sparse<(MultiIndex, F::Coef)> {
    let mut out = Sparse::new();
    for (x, c) in v {
        out.add_scaled(&f.bracket(x, y), c);
    }
    out
}

#[test]
fn polyvector_projection_is_bott() {
    for name in FIXTURES {
        let (p, c) = pair_conn(name);
        let pbw = PbwMap::build(&p, &c, 3);
        let fiber = TFiber { rank: p.r };
        for a in 0..p.dim_a {
            let theta = pbw.flash_vector_field(&p, a, 2).unwrap();
            let v: Sparse<(MultiIndex, u32)> =
                theta.iter().enumerate().flat_map(|(k, t)| t.iter().map(move |(m, c)| ((*m, 1u32 << k), c.clone()))).collect();
            for j in 0..p.r {
                let got = project_constant(&bracket_with(&fiber, &v, &(MultiIndex::zero(p.r), 1 << j)));
                let want: Sparse<(MultiIndex, u32)> =
                    p.bott(a, j).into_iter().enumerate().map(|(k, c)| ((MultiIndex::zero(p.r), 1u32 << k), c)).collect();
                assert_eq!(got, want, "{name} a={a} j={j}");
            }
        }
    }
}

#[test]
fn polydifferential_projection_is_flat_connection() {
    let w = 3;
    for name in FIXTURES {
        let (p, c) = pair_conn(name);
        let pbw = PbwMap::build(&p, &c, w + 1);
        let fiber = DFiber { rank: p.r };
        let z = MultiIndex::zero(p.r);
        for a in 0..p.dim_a {
            let theta = pbw.flash_vector_field(&p, a, w).unwrap();
            let v: Sparse<(MultiIndex, DTuple)> = theta
                .iter()
                .enumerate()
                .flat_map(|(k, t)| t.iter().map(move |(m, c)| ((*m, vec![MultiIndex::unit(m.rank(), k)]), c.clone())))
                .collect();
            for j in MultiIndex::up_to(p.r, w) {
                let got = project_constant(&bracket_with(&fiber, &v, &(z, vec![j])));
                let want = pbw.nabla_flash(&p, a, &Sparse::basis(j)).unwrap().map_keys(|m| (z, vec![*m]));
                assert_eq!(got, want, "{name} a={a} J={j:?}");
            }
        }
    }
}

#[test]
fn nontrivial_instances_exist() {
    let (p, c) = pair_conn("sl2_borel");
    let pbw = PbwMap::build(&p, &c, 3);
    let moved = (0..p.dim_a).any(|a| !pbw.nabla_flash(&p, a, &Sparse::basis(MultiIndex::from_slice(&[2]))).unwrap().is_zero());
    assert!(moved);
}
