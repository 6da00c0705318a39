//! Operations induced on cohomology by bilinear cochain operations, and the
//! Gerstenhaber identities checked on the resulting tables.

use std::collections::BTreeMap;
use std::fmt::Debug;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::contraction_engine::{IdentityReport, Status};
use crate::error::CoreError;
use crate::graded_core::scalar::{sign, to_string, Scalar};
use crate::graded_core::sparse::Sparse;

use super::basis::{CohomologyBasis, SmallComplex};

/// `(degree, index)` of a basis class of `H`.
pub type ClassId = (i32, usize);

type BinaryOp<'a, S> = Box<dyn Fn(&S, &S) -> Result<Sparse<S>, CoreError> + 'a>;

/// A bilinear cochain operation of degree `shift`: `|x ∘ y| = |x| + |y| + shift`.
pub struct Operation<'a, S: Ord> {
    pub name: String,
    pub shift: i32,
    op: BinaryOp<'a, S>,
}

impl<'a, S: Ord + Clone> Operation<'a, S> {
    pub fn new(name: &str, shift: i32, op: impl Fn(&S, &S) -> Result<Sparse<S>, CoreError> + 'a) -> Self {
        Operation { name: name.into(), shift, op: Box::new(op) }
    }

    pub fn apply(&self, x: &Sparse<S>, y: &Sparse<S>) -> Result<Sparse<S>, CoreError> {
        let mut out = Sparse::new();
        for (a, ca) in x {
            for (b, cb) in y {
                out.add_scaled(&(self.op)(a, b)?, &(ca * cb));
            }
        }
        Ok(out)
    }
}

/// Structure constants on the classes; pairs outside the level budget are absent.
#[derive(Clone, Debug, Default)]
pub struct ClassTable {
    pub shift: i32,
    pub entries: BTreeMap<(ClassId, ClassId), Sparse<ClassId>>,
}

impl ClassTable {
    /// Bilinear extension, `None` when a needed entry is absent.
    pub fn apply(&self, x: &Sparse<ClassId>, y: &Sparse<ClassId>) -> Option<Sparse<ClassId>> {
        let mut out = Sparse::new();
        for (a, ca) in x {
            for (b, cb) in y {
                out.add_scaled(self.entries.get(&(*a, *b))?, &(ca * cb));
            }
        }
        Some(out)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.values().all(Sparse::is_zero)
    }
}

fn classes<S: Ord + Clone + Debug>(h: &CohomologyBasis<S>) -> Vec<(ClassId, u32)> {
    h.pieces.values().flat_map(|p| (0..p.dim()).map(move |i| ((p.degree, i), p.rep_levels[i]))).collect()
}

fn to_classes(n: i32, c: &[Scalar]) -> Sparse<ClassId> {
    c.iter().enumerate().map(|(i, x)| ((n, i), x.clone())).collect()
}

fn report(identity: String, checked: usize, depth: u32, witness: Option<String>) -> IdentityReport {
    IdentityReport { identity, status: Status::from_witness(&witness), checked, depth: depth as i64, witness }
}

/// Table of the induced operation on every pair of classes with level sum at most
/// `cap`, together with the check that it is well defined: values on cocycles are
/// cocycles and values with one coboundary argument are coboundaries.
pub fn induced_table<S: Ord + Clone + Debug>(
    h: &CohomologyBasis<S>,
    c: &SmallComplex<S>,
    op: &Operation<S>,
    cap: u32,
) -> Result<(ClassTable, IdentityReport), CoreError> {
    let mut table = ClassTable { shift: op.shift, entries: BTreeMap::new() };
    let mut witness = None;
    let mut checked = 0;
    let all = classes(h);
    for &((p, i), li) in &all {
        for &((q, j), lj) in &all {
            let Some(target) = h.piece(p + q + op.shift) else { continue };
            if li + lj > cap {
                continue;
            }
            checked += 1;
            let v = op.apply(&h.pieces[&p].reps[i], &h.pieces[&q].reps[j])?;
            match target.project(&v) {
                Ok(coords) => {
                    table.entries.insert(((p, i), (q, j)), to_classes(target.degree, &coords));
                }
                Err(CoreError::Invariant(_)) => {
                    witness.get_or_insert_with(|| format!("{} of classes {:?}, {:?} is not a cocycle", op.name, (p, i), (q, j)));
                }
                Err(e) => return Err(e),
            }
        }
    }
    for &((p, i), li) in &all {
        let rep = &h.pieces[&p].reps[i];
        for (&q, basis) in &c.pieces {
            let Some(target) = h.piece(p + q + 1 + op.shift) else { continue };
            if h.piece(q + 1).is_none() {
                continue;
            }
            for e in basis {
                if li + c.level(e) > cap {
                    continue;
                }
                let de = c.d(&Sparse::basis(e.clone()));
                if de.is_zero() {
                    continue;
                }
                checked += 2;
                for (v, side) in [(op.apply(rep, &de)?, "right"), (op.apply(&de, rep)?, "left")] {
                    let ok = matches!(target.is_coboundary(&v), Ok(true));
                    if !ok && witness.is_none() {
                        witness = Some(format!("{} of class {:?} with coboundary d{e:?} ({side}) is not a coboundary", op.name, (p, i)));
                    }
                }
            }
        }
    }
    Ok((table, report(format!("{} descends to cohomology", op.name), checked, cap, witness)))
}

/// Seeded random check that the table does not depend on representatives:
/// `(rep_i + d e) ∘ (rep_j + d f)` has the tabulated class.
pub fn representative_independence<S: Ord + Clone + Debug>(
    h: &CohomologyBasis<S>,
    c: &SmallComplex<S>,
    op: &Operation<S>,
    table: &ClassTable,
    samples: usize,
    seed: u64,
) -> Result<IdentityReport, CoreError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let keys: Vec<&(ClassId, ClassId)> = table.entries.keys().collect();
    let mut witness = None;
    let mut checked = 0;
    if keys.is_empty() {
        return Ok(report(format!("{} is independent of representatives (seed {seed})", op.name), 0, 0, None));
    }
    for _ in 0..samples {
        let &&(x, y) = &keys[rng.gen_range(0..keys.len())];
        let mut perturb = |id: ClassId| -> Sparse<S> {
            let piece = &h.pieces[&id.0];
            let level = piece.rep_levels[id.1];
            let below: Vec<&S> = c.piece(id.0 - 1).iter().filter(|e| c.level(e) <= level).collect();
            let mut out = piece.reps[id.1].clone();
            if !below.is_empty() {
                let e = below[rng.gen_range(0..below.len())].clone();
                let k: i64 = rng.gen_range(-3..=3);
                out.add_scaled(&c.d(&Sparse::basis(e)), &Scalar::from_integer(k.into()));
            }
            out
        };
        let (xs, ys) = (perturb(x), perturb(y));
        let target = &h.pieces[&(x.0 + y.0 + op.shift)];
        let got = to_classes(target.degree, &target.project(&op.apply(&xs, &ys)?)?);
        checked += 1;
        if got != table.entries[&(x, y)] && witness.is_none() {
            witness = Some(format!("classes {x:?}, {y:?}: {got:?} ≠ {:?}", table.entries[&(x, y)]));
        }
    }
    Ok(report(format!("{} is independent of representatives (seed {seed})", op.name), checked, 0, witness))
}

fn basis_class(id: ClassId) -> Sparse<ClassId> {
    Sparse::basis(id)
}

fn first_witness(v: &Sparse<ClassId>) -> String {
    let (k, c) = v.iter().next().unwrap();
    format!("defect {} at class {k:?}", to_string(c))
}

/// `[x,y] = −(−1)^{|x||y|}[y,x]` and `[x,[y,z]] = [[x,y],z] + (−1)^{|x||y|}[y,[x,z]]` on
/// every pair and triple of classes where the table is defined.
pub fn lie_on_cohomology(h_classes: &[ClassId], br: &ClassTable) -> Vec<IdentityReport> {
    let mut sym = (0, None);
    let mut jac = (0, None);
    for &x in h_classes {
        for &y in h_classes {
            let (Some(xy), Some(yx)) = (br.apply(&basis_class(x), &basis_class(y)), br.apply(&basis_class(y), &basis_class(x))) else { continue };
            sym.0 += 1;
            let defect = xy.plus(&yx.scaled(&sign(x.0 as i64 * y.0 as i64)));
            if !defect.is_zero() && sym.1.is_none() {
                sym.1 = Some(format!("classes {x:?}, {y:?}: {}", first_witness(&defect)));
            }
            for &z in h_classes {
                let terms = (|| {
                    let a = br.apply(&basis_class(x), &br.apply(&basis_class(y), &basis_class(z))?)?;
                    let b = br.apply(&xy, &basis_class(z))?;
                    let c = br.apply(&basis_class(y), &br.apply(&basis_class(x), &basis_class(z))?)?;
                    Some(a.minus(&b).minus(&c.scaled(&sign(x.0 as i64 * y.0 as i64))))
                })();
                let Some(defect) = terms else { continue };
                jac.0 += 1;
                if !defect.is_zero() && jac.1.is_none() {
                    jac.1 = Some(format!("classes {x:?}, {y:?}, {z:?}: {}", first_witness(&defect)));
                }
            }
        }
    }
    vec![
        report("induced bracket is graded antisymmetric".into(), sym.0, 0, sym.1),
        report("induced bracket satisfies Jacobi".into(), jac.0, 0, jac.1),
    ]
}

/// Graded commutativity of the induced product, `x·y = (−1)^{(|x|+1)(|y|+1)} y·x`, and
/// the biderivation rule `[x, y·z] = [x,y]·z + (−1)^{|x|(|y|+1)} y·[x,z]`, in the
/// total degree of the complex.
pub fn gerstenhaber_on_cohomology(h_classes: &[ClassId], br: &ClassTable, cup: &ClassTable) -> Vec<IdentityReport> {
    let mut comm = (0, None);
    let mut bider = (0, None);
    for &x in h_classes {
        for &y in h_classes {
            if let (Some(xy), Some(yx)) = (cup.apply(&basis_class(x), &basis_class(y)), cup.apply(&basis_class(y), &basis_class(x))) {
                comm.0 += 1;
                let defect = xy.minus(&yx.scaled(&sign((x.0 as i64 + 1) * (y.0 as i64 + 1))));
                if !defect.is_zero() && comm.1.is_none() {
                    comm.1 = Some(format!("classes {x:?}, {y:?}: {}", first_witness(&defect)));
                }
            }
            for &z in h_classes {
                let terms = (|| {
                    let (bx, by, bz) = (basis_class(x), basis_class(y), basis_class(z));
                    let lhs = br.apply(&bx, &cup.apply(&by, &bz)?)?;
                    let first = cup.apply(&br.apply(&bx, &by)?, &bz)?;
                    let second = cup.apply(&by, &br.apply(&bx, &bz)?)?;
                    Some(lhs.minus(&first).minus(&second.scaled(&sign(x.0 as i64 * (y.0 as i64 + 1)))))
                })();
                let Some(defect) = terms else { continue };
                bider.0 += 1;
                if !defect.is_zero() && bider.1.is_none() {
                    bider.1 = Some(format!("classes {x:?}, {y:?}, {z:?}: {}", first_witness(&defect)));
                }
            }
        }
    }
    vec![
        report("induced product is graded commutative".into(), comm.0, 0, comm.1),
        report("induced bracket is a biderivation of the product".into(), bider.0, 0, bider.1),
    ]
}

/// Every class of `h`, in degree order.
pub fn class_ids<S: Ord + Clone + Debug>(h: &CohomologyBasis<S>) -> Vec<ClassId> {
    classes(h).into_iter().map(|(id, _)| id).collect()
}

/// Compares the operations of two complexes through a cochain map `iso` from the
/// first to the second: `op₂(iso x, iso y) − iso(op₁(x, y))` must be a coboundary
/// for every pair of classes of the first complex within the level budget.
pub fn compare_on_cohomology<S: Ord + Clone + Debug>(
    h1: &CohomologyBasis<S>,
    op1: &Operation<S>,
    h2: &CohomologyBasis<S>,
    op2: &Operation<S>,
    iso: impl Fn(&Sparse<S>) -> Result<Sparse<S>, CoreError>,
    cap: u32,
) -> Result<IdentityReport, CoreError> {
    let mut witness = None;
    let mut checked = 0;
    let all = classes(h1);
    for &((p, i), li) in &all {
        for &((q, j), lj) in &all {
            let Some(target) = h2.piece(p + q + op1.shift) else { continue };
            if li + lj > cap {
                continue;
            }
            checked += 1;
            let (x, y) = (&h1.pieces[&p].reps[i], &h1.pieces[&q].reps[j]);
            let lhs = op2.apply(&iso(x)?, &iso(y)?)?;
            let rhs = iso(&op1.apply(x, y)?)?;
            let ok = matches!(target.is_coboundary(&lhs.minus(&rhs)), Ok(true));
            if !ok && witness.is_none() {
                witness = Some(format!("classes {:?}, {:?}: transported {} differs", (p, i), (q, j), op1.name));
            }
        }
    }
    Ok(report(format!("{} agrees on cohomology", op1.name), checked, cap, witness))
}
