//! Exponent vectors `J ∈ ℕ^r` for monomials `χ^J` and `∂^J`.

use super::scalar::{factorial, Scalar};
use std::fmt;

/// Largest supported rank of the quotient `B`.
pub const MAX_RANK: usize = 8;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex {
    rank: u8,
    e: [u8; MAX_RANK],
}

impl MultiIndex {
    pub fn zero(rank: usize) -> Self {
        assert!(rank <= MAX_RANK, "rank {rank} exceeds {MAX_RANK}");
        MultiIndex { rank: rank as u8, e: [0; MAX_RANK] }
    }

    /// `e_m`, the index with a single 1 in position `m`.
    pub fn unit(rank: usize, m: usize) -> Self {
        let mut j = Self::zero(rank);
        j.e[m] = 1;
        j
    }

    pub fn from_slice(entries: &[u32]) -> Self {
        let mut j = Self::zero(entries.len());
        for (i, &v) in entries.iter().enumerate() {
            j.e[i] = u8::try_from(v).expect("exponent overflow");
        }
        j
    }

    pub fn rank(&self) -> usize {
        self.rank as usize
    }

    pub fn get(&self, i: usize) -> u32 {
        self.e[i] as u32
    }

    pub fn entries(&self) -> Vec<u32> {
        (0..self.rank()).map(|i| self.get(i)).collect()
    }

    /// `|J|`.
    pub fn weight(&self) -> u32 {
        self.e[..self.rank()].iter().map(|&v| v as u32).sum()
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.rank, other.rank);
        let mut j = *self;
        for i in 0..self.rank() {
            j.e[i] = self.e[i].checked_add(other.e[i]).expect("exponent overflow");
        }
        j
    }

    pub fn add_unit(&self, m: usize) -> Self {
        let mut j = *self;
        j.e[m] += 1;
        j
    }

    /// `J − e_m`, or `None` when `J_m = 0`.
    pub fn sub_unit(&self, m: usize) -> Option<Self> {
        let mut j = *self;
        j.e[m] = j.e[m].checked_sub(1)?;
        Some(j)
    }

    /// `self − other` when `other ≺ self`.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        let mut j = *self;
        for i in 0..self.rank() {
            j.e[i] = self.e[i].checked_sub(other.e[i])?;
        }
        Some(j)
    }

    /// The partial order `self ≺ other` (componentwise `≤`).
    pub fn precedes(&self, other: &Self) -> bool {
        (0..self.rank()).all(|i| self.e[i] <= other.e[i])
    }

    /// `J! = ∏ J_i!`.
    pub fn factorial(&self) -> Scalar {
        let mut acc = Scalar::from_integer(1.into());
        for i in 0..self.rank() {
            acc *= factorial(self.get(i));
        }
        acc
    }

    /// Position list with multiplicity: `2e_0 + e_1 ↦ [0, 0, 1]`.
    pub fn letters(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.weight() as usize);
        for i in 0..self.rank() {
            for _ in 0..self.e[i] {
                out.push(i);
            }
        }
        out
    }

    /// First position with a nonzero entry.
    pub fn first_letter(&self) -> Option<usize> {
        (0..self.rank()).find(|&i| self.e[i] > 0)
    }

    /// All indices of weight exactly `w`, in lexicographically decreasing order of entries.
    pub fn of_weight(rank: usize, w: u32) -> Vec<Self> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; rank];
        fn rec(pos: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if pos + 1 == cur.len() {
                cur[pos] = left;
                out.push(MultiIndex::from_slice(cur));
                return;
            }
            for v in (0..=left).rev() {
                cur[pos] = v;
                rec(pos + 1, left - v, cur, out);
            }
        }
        if rank == 0 {
            if w == 0 {
                out.push(Self::zero(0));
            }
            return out;
        }
        rec(0, w, &mut cur, &mut out);
        out
    }

    /// All indices of weight `≤ w`, ordered by weight.
    pub fn up_to(rank: usize, w: u32) -> Vec<Self> {
        (0..=w).flat_map(|k| Self::of_weight(rank, k)).collect()
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.entries())
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl serde::Serialize for MultiIndex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.entries().serialize(s)
    }
}
