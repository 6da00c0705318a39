//! Validated Lie pairs with a splitting, in an adapted basis.

use std::fmt;

use crate::graded_core::linalg::Matrix;
use crate::graded_core::scalar::{self, Scalar};
use crate::pbw::UQuotient;
use num_traits::{One, Zero};

use super::spec::LiePairSpec;

/// Reason a spec is rejected, with the offending basis indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PairViolation {
    Shape(String),
    Scalar(String),
    Antisymmetry { i: usize, j: usize },
    Jacobi { i: usize, j: usize, k: usize },
    NotSubalgebra { i: usize, j: usize, outside: usize },
    Splitting { column: usize, row: usize },
}

impl fmt::Display for PairViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PairViolation::Shape(s) => write!(f, "malformed spec: {s}"),
            PairViolation::Scalar(s) => write!(f, "bad scalar: {s}"),
            PairViolation::Antisymmetry { i, j } => write!(f, "bracket not antisymmetric on ({i},{j})"),
            PairViolation::Jacobi { i, j, k } => write!(f, "Jacobi identity fails on ({i},{j},{k})"),
            PairViolation::NotSubalgebra { i, j, outside } => {
                write!(f, "[x_{i},x_{j}] has component on x_{outside} outside A")
            }
            PairViolation::Splitting { column, row } => {
                write!(f, "q∘j ≠ id: column {column}, row {row}")
            }
        }
    }
}

impl std::error::Error for PairViolation {}

impl PairViolation {
    /// The violating basis indices, when there are any.
    pub fn witness(&self) -> Vec<usize> {
        match *self {
            PairViolation::Antisymmetry { i, j } => vec![i, j],
            PairViolation::Jacobi { i, j, k } => vec![i, j, k],
            PairViolation::NotSubalgebra { i, j, outside } => vec![i, j, outside],
            PairViolation::Splitting { column, row } => vec![column, row],
            _ => Vec::new(),
        }
    }
}

/// A Lie pair `A ⊂ L` over a point with a splitting `j: B → L`.
///
/// The input basis is `x_0, …, x_{n-1}`. The adapted basis is
/// `e = (a_0, …, a_{dimA-1}, j∂_0, …, j∂_{r-1})` with `a_i = x_{aIdx[i]}` and `∂_k`
/// the class of `x_{compIdx[k]}`; the columns of `frame` are `e` in input
/// coordinates.
#[derive(Debug)]
pub struct LiePair {
    pub name: String,
    pub names: Vec<String>,
    pub n: usize,
    pub dim_a: usize,
    pub r: usize,
    pub a_idx: Vec<usize>,
    pub comp_idx: Vec<usize>,
    /// `[x_i, x_j]` in input coordinates.
    pub input_bracket: Vec<Vec<Vec<Scalar>>>,
    pub splitting: Matrix,
    pub frame: Matrix,
    pub frame_inv: Matrix,
    /// `c[i][j][k]`: structure constants in the adapted basis.
    pub c: Vec<Vec<Vec<Scalar>>>,
    pub uq: UQuotient,
}

fn parse_scalar(text: &str) -> Result<Scalar, PairViolation> {
    scalar::parse(text).map_err(|e| PairViolation::Scalar(e.to_string()))
}

pub fn parse_matrix(rows: &[Vec<String>], nrows: usize, ncols: usize, what: &str) -> Result<Matrix, PairViolation> {
    if rows.len() != nrows || rows.iter().any(|r| r.len() != ncols) {
        return Err(PairViolation::Shape(format!("{what} must be {nrows}×{ncols}")));
    }
    let mut m = Matrix::zeros(nrows, ncols);
    for (i, row) in rows.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            m.data[i][j] = parse_scalar(v)?;
        }
    }
    Ok(m)
}

pub fn parse_tensor3(t: &[Vec<Vec<String>>], d0: usize, d1: usize, d2: usize, what: &str) -> Result<Vec<Vec<Vec<Scalar>>>, PairViolation> {
    let shape_err = || PairViolation::Shape(format!("{what} must be {d0}×{d1}×{d2}"));
    if t.len() != d0 {
        return Err(shape_err());
    }
    let mut out = Vec::with_capacity(d0);
    for a in t {
        if a.len() != d1 {
            return Err(shape_err());
        }
        let mut row = Vec::with_capacity(d1);
        for b in a {
            if b.len() != d2 {
                return Err(shape_err());
            }
            row.push(b.iter().map(|s| parse_scalar(s)).collect::<Result<Vec<_>, _>>()?);
        }
        out.push(row);
    }
    Ok(out)
}

/// Checks antisymmetry, Jacobi, closure of `A` and the splitting axioms, and
/// builds the adapted data.
pub fn validate_pair(spec: &LiePairSpec) -> Result<LiePair, PairViolation> {
    let n = spec.dim_l;
    let dim_a = spec.dim_a;
    if n == 0 || n > 16 {
        return Err(PairViolation::Shape(format!("dimL = {n} must be in 1..=16")));
    }
    if dim_a == 0 || dim_a > n {
        return Err(PairViolation::Shape(format!("dimA = {dim_a} must be in 1..=dimL")));
    }
    let r = n - dim_a;
    if r > crate::graded_core::MAX_RANK {
        return Err(PairViolation::Shape(format!("rank of B = {r} exceeds {}", crate::graded_core::MAX_RANK)));
    }
    if spec.basis.len() != n {
        return Err(PairViolation::Shape("basis must list dimL names".into()));
    }
    let mut a_idx = spec.a_indices.clone();
    a_idx.sort_unstable();
    a_idx.dedup();
    if a_idx.len() != dim_a || a_idx.iter().any(|&i| i >= n) {
        return Err(PairViolation::Shape("aIndices must be dimA distinct indices below dimL".into()));
    }
    let a_idx = spec.a_indices.clone();
    let comp_idx: Vec<usize> = (0..n).filter(|i| !a_idx.contains(i)).collect();

    let mut br = vec![vec![vec![Scalar::zero(); n]; n]; n];
    let mut given = vec![vec![false; n]; n];
    for e in &spec.brackets {
        if e.i >= n || e.j >= n || e.coeffs.keys().any(|&k| k >= n) {
            return Err(PairViolation::Shape(format!("bracket ({},{}) refers to an index ≥ dimL", e.i, e.j)));
        }
        let mut v = vec![Scalar::zero(); n];
        for (&k, s) in &e.coeffs {
            v[k] = parse_scalar(s)?;
        }
        if e.i == e.j {
            if v.iter().any(|x| !x.is_zero()) {
                return Err(PairViolation::Antisymmetry { i: e.i, j: e.j });
            }
            continue;
        }
        let neg: Vec<Scalar> = v.iter().map(|x| -x).collect();
        for (a, b, val) in [(e.i, e.j, v), (e.j, e.i, neg)] {
            if given[a][b] && br[a][b] != val {
                return Err(PairViolation::Antisymmetry { i: e.i, j: e.j });
            }
            given[a][b] = true;
            br[a][b] = val;
        }
    }

    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let mut total = vec![Scalar::zero(); n];
                for (x, y, z) in [(i, j, k), (j, k, i), (k, i, j)] {
                    for (m, c) in br[x][y].iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        for (t, d) in br[m][z].iter().enumerate() {
                            total[t] += c * d;
                        }
                    }
                }
                if total.iter().any(|x| !x.is_zero()) {
                    return Err(PairViolation::Jacobi { i, j, k });
                }
            }
        }
    }
    for &i in &a_idx {
        for &j in &a_idx {
            for &m in &comp_idx {
                if !br[i][j][m].is_zero() {
                    return Err(PairViolation::NotSubalgebra { i, j, outside: m });
                }
            }
        }
    }

    let splitting = match &spec.splitting {
        Some(rows) => parse_matrix(rows, n, r, "splitting")?,
        None => {
            let mut s = Matrix::zeros(n, r);
            for (k, &c) in comp_idx.iter().enumerate() {
                s.data[c][k] = Scalar::one();
            }
            s
        }
    };
    for k in 0..r {
        for (m, &c) in comp_idx.iter().enumerate() {
            let want = if m == k { Scalar::one() } else { Scalar::zero() };
            if splitting.data[c][k] != want {
                return Err(PairViolation::Splitting { column: k, row: c });
            }
        }
    }

    let mut frame = Matrix::zeros(n, n);
    for (i, &a) in a_idx.iter().enumerate() {
        frame.data[a][i] = Scalar::one();
    }
    for k in 0..r {
        for m in 0..n {
            frame.data[m][dim_a + k] = splitting.data[m][k].clone();
        }
    }
    let frame_inv = frame.inverse().expect("adapted frame is unitriangular up to permutation");

    let mut c = vec![vec![vec![Scalar::zero(); n]; n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut v = vec![Scalar::zero(); n];
            for (p, cp) in frame.column(i).iter().enumerate() {
                if cp.is_zero() {
                    continue;
                }
                for (q, cq) in frame.column(j).iter().enumerate() {
                    if cq.is_zero() {
                        continue;
                    }
                    let f = cp * cq;
                    for (t, b) in br[p][q].iter().enumerate() {
                        if !b.is_zero() {
                            v[t] += &f * b;
                        }
                    }
                }
            }
            c[i][j] = frame_inv.apply(&v);
        }
    }
    let uq = UQuotient::new(&br, &comp_idx, &a_idx);

    Ok(LiePair {
        name: spec.name.clone(),
        names: spec.basis.clone(),
        n,
        dim_a,
        r,
        a_idx,
        comp_idx,
        input_bracket: br,
        splitting,
        frame,
        frame_inv,
        c,
        uq,
    })
}

impl LiePair {
    /// `q[a_i, j∂_b]` as a B-vector.
    pub fn bott(&self, i: usize, b: usize) -> Vec<Scalar> {
        assert!(i < self.dim_a && b < self.r);
        (0..self.r).map(|k| self.c[i][self.dim_a + b][self.dim_a + k].clone()).collect()
    }

    /// Whether `j(B)` is closed under the bracket.
    pub fn is_matched(&self) -> bool {
        let a = self.dim_a;
        (a..self.n).all(|i| (a..self.n).all(|j| (0..a).all(|k| self.c[i][j][k].is_zero())))
    }

    /// `j(∂_k)` as a combination of input generators.
    pub fn j_letters(&self, k: usize) -> Vec<(usize, Scalar)> {
        (0..self.n)
            .filter(|&m| !self.splitting.data[m][k].is_zero())
            .map(|m| (m, self.splitting.data[m][k].clone()))
            .collect()
    }

    /// Adapted basis vector `e_i` as a combination of input generators.
    pub fn frame_letters(&self, i: usize) -> Vec<(usize, Scalar)> {
        (0..self.n)
            .filter(|&m| !self.frame.data[m][i].is_zero())
            .map(|m| (m, self.frame.data[m][i].clone()))
            .collect()
    }

    /// Names of the adapted basis, with `j(·)` marking splitting images.
    pub fn adapted_names(&self) -> Vec<String> {
        let mut out: Vec<String> = self.a_idx.iter().map(|&i| self.names[i].clone()).collect();
        out.extend(self.comp_idx.iter().map(|&i| format!("j({})", self.names[i])));
        out
    }
}
