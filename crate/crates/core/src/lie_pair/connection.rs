//! `L`-connections on `B`, Bott extension, torsion and curvature.

use crate::graded_core::scalar::{frac, Scalar};
use num_traits::Zero;

use super::pair::{parse_tensor3, LiePair, PairViolation};

/// `∇_{e_l} ∂_b = Σ_k gamma[l][b][k] ∂_k` with `e_l` the adapted basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Connection {
    pub gamma: Vec<Vec<Vec<Scalar>>>,
}

/// A failed connection axiom, with witnesses in the adapted basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConnectionViolation {
    NotBott { a: usize, b: usize },
    Torsion { l1: usize, l2: usize },
}

impl Connection {
    pub fn zero(pair: &LiePair) -> Self {
        Connection { gamma: vec![vec![vec![Scalar::zero(); pair.r]; pair.r]; pair.n] }
    }

    /// `∇_{a} = Bott(a, ·)` on `A`, and `∇_{j b} b' = ½ q[j b, j b']`.
    pub fn default_for(pair: &LiePair) -> Self {
        let a = pair.dim_a;
        let half = frac(1, 2);
        let mut g = Self::zero(pair);
        for l in 0..pair.n {
            for b in 0..pair.r {
                for k in 0..pair.r {
                    let v = &pair.c[l][a + b][a + k];
                    g.gamma[l][b][k] = if l < a { v.clone() } else { v * &half };
                }
            }
        }
        g
    }

    /// Converts `Γ` given on the input basis of `L`.
    pub fn from_input(pair: &LiePair, input: &[Vec<Vec<Scalar>>]) -> Self {
        let mut g = Self::zero(pair);
        for l in 0..pair.n {
            for (m, coef) in pair.frame_letters(l) {
                for b in 0..pair.r {
                    for k in 0..pair.r {
                        g.gamma[l][b][k] += &coef * &input[m][b][k];
                    }
                }
            }
        }
        g
    }

    pub fn from_strings(pair: &LiePair, input: &[Vec<Vec<String>>]) -> Result<Self, PairViolation> {
        let t = parse_tensor3(input, pair.n, pair.r, pair.r, "connection")?;
        Ok(Self::from_input(pair, &t))
    }

    /// `Γ` on the input basis of `L`.
    pub fn to_input(&self, pair: &LiePair) -> Vec<Vec<Vec<Scalar>>> {
        let mut out = vec![vec![vec![Scalar::zero(); pair.r]; pair.r]; pair.n];
        for m in 0..pair.n {
            for l in 0..pair.n {
                let coef = &pair.frame_inv.data[l][m];
                if coef.is_zero() {
                    continue;
                }
                for b in 0..pair.r {
                    for k in 0..pair.r {
                        out[m][b][k] += coef * &self.gamma[l][b][k];
                    }
                }
            }
        }
        out
    }

    /// `T(e_i, e_j) = ∇_{e_i} q e_j − ∇_{e_j} q e_i − q[e_i, e_j]`.
    pub fn torsion(&self, pair: &LiePair) -> Vec<Vec<Vec<Scalar>>> {
        let a = pair.dim_a;
        let mut t = vec![vec![vec![Scalar::zero(); pair.r]; pair.n]; pair.n];
        for i in 0..pair.n {
            for j in 0..pair.n {
                for k in 0..pair.r {
                    let mut v = -pair.c[i][j][a + k].clone();
                    if j >= a {
                        v += &self.gamma[i][j - a][k];
                    }
                    if i >= a {
                        v -= &self.gamma[j][i - a][k];
                    }
                    t[i][j][k] = v;
                }
            }
        }
        t
    }

    /// `R(e_i, e_j) ∂_b` as `curv[i][j][b][k]`.
    pub fn curvature(&self, pair: &LiePair) -> Vec<Vec<Vec<Vec<Scalar>>>> {
        let (n, r) = (pair.n, pair.r);
        let mut out = vec![vec![vec![vec![Scalar::zero(); r]; r]; n]; n];
        for i in 0..n {
            for j in 0..n {
                for b in 0..r {
                    for k in 0..r {
                        let mut v = Scalar::zero();
                        for m in 0..r {
                            v += &self.gamma[j][b][m] * &self.gamma[i][m][k];
                            v -= &self.gamma[i][b][m] * &self.gamma[j][m][k];
                        }
                        for l in 0..n {
                            if !pair.c[i][j][l].is_zero() {
                                v -= &pair.c[i][j][l] * &self.gamma[l][b][k];
                            }
                        }
                        out[i][j][b][k] = v;
                    }
                }
            }
        }
        out
    }

    /// All failures of the Bott-extension and torsion-free conditions.
    pub fn violations(&self, pair: &LiePair) -> Vec<ConnectionViolation> {
        let mut out = Vec::new();
        for a in 0..pair.dim_a {
            for b in 0..pair.r {
                if self.gamma[a][b] != pair.bott(a, b) {
                    out.push(ConnectionViolation::NotBott { a, b });
                }
            }
        }
        let t = self.torsion(pair);
        for i in 0..pair.n {
            for j in i + 1..pair.n {
                if t[i][j].iter().any(|x| !x.is_zero()) {
                    out.push(ConnectionViolation::Torsion { l1: i, l2: j });
                }
            }
        }
        out
    }

    pub fn is_flat(&self, pair: &LiePair) -> bool {
        self.curvature(pair).iter().flatten().flatten().flatten().all(|x| x.is_zero())
    }

    /// `∇_{e_l}` on `B` as a matrix `m[b][k]`.
    pub fn on(&self, l: usize) -> &Vec<Vec<Scalar>> {
        &self.gamma[l]
    }
}
