//! Exact cohomology of a finite graded piece of a cochain complex.

use std::collections::BTreeMap;
use std::fmt::Debug;

use num_traits::Zero;
use serde::Serialize;

use crate::error::CoreError;
use crate::graded_core::linalg::Matrix;
use crate::graded_core::scalar::Scalar;
use crate::graded_core::sparse::Sparse;

type Differential<'a, S> = Box<dyn Fn(&Sparse<S>) -> Sparse<S> + 'a>;

/// A finite subcomplex given by its basis in each total degree, a differential of
/// degree `+1`, and an increasing filtration `level` preserved or lowered by `d`.
pub struct SmallComplex<'a, S: Ord> {
    pub pieces: BTreeMap<i32, Vec<S>>,
    level: Box<dyn Fn(&S) -> u32 + 'a>,
    d: Differential<'a, S>,
}

impl<'a, S: Ord + Clone + Debug> SmallComplex<'a, S> {
    pub fn new(pieces: BTreeMap<i32, Vec<S>>, level: impl Fn(&S) -> u32 + 'a, d: impl Fn(&Sparse<S>) -> Sparse<S> + 'a) -> Self {
        SmallComplex { pieces, level: Box::new(level), d: Box::new(d) }
    }

    pub fn d(&self, x: &Sparse<S>) -> Sparse<S> {
        (self.d)(x)
    }

    pub fn level(&self, x: &S) -> u32 {
        (self.level)(x)
    }

    /// Largest level among the terms; `0` for zero.
    pub fn level_of(&self, x: &Sparse<S>) -> u32 {
        x.keys().map(|k| self.level(k)).max().unwrap_or(0)
    }

    pub fn piece(&self, n: i32) -> &[S] {
        self.pieces.get(&n).map(Vec::as_slice).unwrap_or(&[])
    }
}

/// Incremental row-reduced spanning set.
struct Span {
    rows: Vec<(usize, Vec<Scalar>)>,
}

impl Span {
    fn new() -> Self {
        Span { rows: Vec::new() }
    }

    /// Adds `v` if it is independent of the current span; returns whether it was added.
    fn insert(&mut self, mut v: Vec<Scalar>) -> bool {
        for (p, row) in &self.rows {
            if !v[*p].is_zero() {
                let f = v[*p].clone();
                for (x, y) in v.iter_mut().zip(row) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        let Some(p) = v.iter().position(|x| !x.is_zero()) else { return false };
        let inv = Scalar::from_integer(1.into()) / &v[p];
        for x in v.iter_mut() {
            *x *= &inv;
        }
        for (_, row) in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let f = row[p].clone();
                for (x, y) in row.iter_mut().zip(&v) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        self.rows.push((p, v));
        true
    }
}

/// Cohomology in one total degree: `Z = span(reps) ⊕ B`, with `B` spanned by
/// independent boundaries.
#[derive(Clone, Debug)]
pub struct HPiece<S: Ord> {
    pub degree: i32,
    pub basis: Vec<S>,
    index: BTreeMap<S, usize>,
    pub kernel_dim: usize,
    pub image_dim: usize,
    /// Cocycles whose classes form a basis of `H`, chosen level by level.
    pub reps: Vec<Sparse<S>>,
    pub rep_levels: Vec<u32>,
    /// Columns: `reps` then the independent boundaries.
    frame: Matrix,
    /// Left inverse of `frame`.
    coords: Matrix,
}

impl<S: Ord + Clone + Debug> HPiece<S> {
    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    fn vector(&self, x: &Sparse<S>) -> Result<Vec<Scalar>, CoreError> {
        let mut v = vec![Scalar::zero(); self.basis.len()];
        for (k, c) in x {
            let i = self.index.get(k).ok_or_else(|| CoreError::Dimension(format!("{k:?} is outside degree {}", self.degree)))?;
            v[*i] = c.clone();
        }
        Ok(v)
    }

    /// Coordinates of the class of a cocycle in the basis of `reps`.
    pub fn project(&self, x: &Sparse<S>) -> Result<Vec<Scalar>, CoreError> {
        let v = self.vector(x)?;
        let c = self.coords.apply(&v);
        if self.frame.apply(&c) != v {
            return Err(CoreError::Invariant(format!("not a cocycle in degree {}: {x:?}", self.degree)));
        }
        Ok(c[..self.reps.len()].to_vec())
    }

    pub fn is_coboundary(&self, x: &Sparse<S>) -> Result<bool, CoreError> {
        Ok(self.project(x)?.iter().all(Zero::is_zero))
    }

    /// `Σ c_i reps_i`.
    pub fn section(&self, c: &[Scalar]) -> Sparse<S> {
        let mut out = Sparse::new();
        for (r, ci) in self.reps.iter().zip(c) {
            out.add_scaled(r, ci);
        }
        out
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeDims {
    pub degree: i32,
    pub cochains: usize,
    pub cocycles: usize,
    pub coboundaries: usize,
    pub cohomology: usize,
}

#[derive(Clone, Debug)]
pub struct CohomologyBasis<S: Ord> {
    pub pieces: BTreeMap<i32, HPiece<S>>,
}

impl<S: Ord + Clone + Debug> CohomologyBasis<S> {
    pub fn piece(&self, n: i32) -> Option<&HPiece<S>> {
        self.pieces.get(&n)
    }

    pub fn dims(&self) -> Vec<DegreeDims> {
        self.pieces
            .values()
            .map(|p| DegreeDims { degree: p.degree, cochains: p.basis.len(), cocycles: p.kernel_dim, coboundaries: p.image_dim, cohomology: p.dim() })
            .collect()
    }
}

fn matrix_of<S: Ord + Clone + Debug>(
    c: &SmallComplex<S>,
    from: &[S],
    to_index: &BTreeMap<S, usize>,
    rows: usize,
    degree: i32,
) -> Result<Matrix, CoreError> {
    let mut m = Matrix::zeros(rows, from.len());
    for (j, e) in from.iter().enumerate() {
        for (k, v) in &c.d(&Sparse::basis(e.clone())) {
            let i = to_index.get(k).ok_or_else(|| CoreError::Invariant(format!("d{e:?} has {k:?}, outside the truncated degree {}", degree + 1)))?;
            m.data[*i][j] = v.clone();
        }
    }
    Ok(m)
}

fn index_of<S: Ord + Clone>(basis: &[S]) -> BTreeMap<S, usize> {
    basis.iter().enumerate().map(|(i, k)| (k.clone(), i)).collect()
}

/// Kernel modulo image in each requested degree. `d² = 0` is asserted on the
/// previous degree before any rank computation.
pub fn ce_cohomology<S: Ord + Clone + Debug>(c: &SmallComplex<S>, degrees: impl IntoIterator<Item = i32>) -> Result<CohomologyBasis<S>, CoreError> {
    let mut pieces = BTreeMap::new();
    for n in degrees {
        let prev = c.piece(n - 1);
        let here = c.piece(n);
        let next = c.piece(n + 1);
        for e in prev {
            let dd = c.d(&c.d(&Sparse::basis(e.clone())));
            if !dd.is_zero() {
                return Err(CoreError::Invariant(format!("d² ≠ 0 on {e:?}: {dd:?}")));
            }
        }
        let index = index_of(here);
        let d_here = matrix_of(c, here, &index_of(next), next.len(), n)?;
        let d_prev = matrix_of(c, prev, &index, here.len(), n - 1)?;

        let ech = d_prev.echelon();
        let boundaries: Vec<Vec<Scalar>> = ech.pivots.iter().map(|&j| d_prev.column(j)).collect();
        let mut span = Span::new();
        for b in &boundaries {
            span.insert(b.clone());
        }
        let kernel_dim = d_here.kernel().len();

        let mut levels: Vec<u32> = here.iter().map(|k| c.level(k)).collect();
        levels.sort_unstable();
        levels.dedup();
        let mut reps = Vec::new();
        let mut rep_levels = Vec::new();
        for w in levels {
            let cols: Vec<usize> = (0..here.len()).filter(|&j| c.level(&here[j]) <= w).collect();
            let sub = Matrix::from_columns(next.len(), &cols.iter().map(|&j| d_here.column(j)).collect::<Vec<_>>());
            for k in sub.kernel() {
                let mut v = vec![Scalar::zero(); here.len()];
                for (&j, x) in cols.iter().zip(k) {
                    v[j] = x;
                }
                if span.insert(v.clone()) {
                    reps.push(v);
                    rep_levels.push(w);
                }
            }
        }
        if reps.len() + boundaries.len() != kernel_dim {
            return Err(CoreError::Invariant(format!("degree {n}: {} classes + {} boundaries ≠ kernel {kernel_dim}", reps.len(), boundaries.len())));
        }

        let columns: Vec<Vec<Scalar>> = reps.iter().chain(&boundaries).cloned().collect();
        let frame = Matrix::from_columns(here.len(), &columns);
        let coords = left_inverse(&frame);
        let to_sparse = |v: &Vec<Scalar>| -> Sparse<S> { v.iter().enumerate().map(|(i, x)| (here[i].clone(), x.clone())).collect() };
        pieces.insert(
            n,
            HPiece {
                degree: n,
                basis: here.to_vec(),
                index,
                kernel_dim,
                image_dim: boundaries.len(),
                reps: reps.iter().map(to_sparse).collect(),
                rep_levels,
                frame,
                coords,
            },
        );
    }
    Ok(CohomologyBasis { pieces })
}

/// `L` with `L·M = I` for `M` of full column rank.
fn left_inverse(m: &Matrix) -> Matrix {
    let k = m.cols;
    let mut aug = Matrix::zeros(m.rows, k + m.rows);
    for i in 0..m.rows {
        for j in 0..k {
            aug.data[i][j] = m.data[i][j].clone();
        }
        aug.data[i][k + i] = Scalar::from_integer(1.into());
    }
    let ech = aug.echelon();
    debug_assert!(ech.pivots.iter().take(k).copied().eq(0..k));
    let mut out = Matrix::zeros(k, m.rows);
    for i in 0..k {
        out.data[i] = ech.rref.data[i][k..].to_vec();
    }
    out
}
