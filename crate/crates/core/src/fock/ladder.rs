//! Ladder operators on the full 2^K occupation basis.
//!
//! Basis state index = occupation bitmask (bit i-1 <-> orbital i). Operators
//! are stored column-sparse; ladder operators have at most one entry per
//! column, so products and anticommutators stay cheap even at the K=14 cap.

use crate::fock::FockError;
use crate::scalar::Scalar;

/// Column-sparse operator on the full Fock space.
#[derive(Debug, Clone, PartialEq)]
pub struct FullOperator<S> {
    pub k: usize,
    /// cols[j] lists (row, value) pairs of column j, sorted by row.
    cols: Vec<Vec<(usize, S)>>,
}

impl<S: Scalar> FullOperator<S> {
    pub fn zero(k: usize) -> Self {
        Self { k, cols: vec![Vec::new(); 1 << k] }
    }

    pub fn identity(k: usize) -> Self {
        Self { k, cols: (0..1usize << k).map(|j| vec![(j, S::one())]).collect() }
    }

    pub fn dim(&self) -> usize {
        1 << self.k
    }

    /// Build from raw columns of (row, value) pairs; entries are merged.
    pub fn from_columns(k: usize, cols: Vec<Vec<(usize, S)>>) -> Self {
        assert_eq!(cols.len(), 1 << k);
        Self { k, cols }.normalize()
    }

    pub fn column(&self, j: usize) -> &[(usize, S)] {
        &self.cols[j]
    }

    pub fn entry(&self, i: usize, j: usize) -> S {
        self.cols[j]
            .iter()
            .find(|(r, _)| *r == i)
            .map(|(_, v)| v.clone())
            .unwrap_or_else(S::zero)
    }

    fn push(&mut self, i: usize, j: usize, v: S) {
        if !v.prune() {
            self.cols[j].push((i, v));
        }
    }

    fn normalize(mut self) -> Self {
        for col in &mut self.cols {
            col.sort_by_key(|(r, _)| *r);
            let mut merged: Vec<(usize, S)> = Vec::with_capacity(col.len());
            for (r, v) in col.drain(..) {
                match merged.last_mut() {
                    Some((mr, mv)) if *mr == r => *mv = mv.clone() + v,
                    _ => merged.push((r, v)),
                }
            }
            merged.retain(|(_, v)| !v.prune());
            *col = merged;
        }
        self
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.k, other.k);
        let mut out = self.clone();
        for (j, col) in other.cols.iter().enumerate() {
            out.cols[j].extend(col.iter().cloned());
        }
        out.normalize()
    }

    pub fn scale(&self, s: &S) -> Self {
        let cols = self
            .cols
            .iter()
            .map(|col| col.iter().map(|(r, v)| (*r, v.clone() * s.clone())).collect())
            .collect();
        Self { k: self.k, cols }.normalize()
    }

    /// Matrix product self * other.
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.k, other.k);
        let mut out = Self::zero(self.k);
        for j in 0..other.dim() {
            for (m, v) in &other.cols[j] {
                for (i, w) in &self.cols[*m] {
                    out.push(*i, j, w.clone() * v.clone());
                }
            }
        }
        out.normalize()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }
}

/// The creation operator a_i^dagger (or annihilation a_i) with sign
/// sigma(i, k) = (-1)^(occupied orbitals strictly below i).
pub fn ladder_operator<S: Scalar>(i: usize, create: bool, k: usize) -> FullOperator<S> {
    assert!((1..=k).contains(&i), "orbital index out of range");
    let bit = 1usize << (i - 1);
    let below = bit - 1;
    let mut op = FullOperator::zero(k);
    for mask in 0..1usize << k {
        let occupied = mask & bit != 0;
        if create == occupied {
            continue;
        }
        let sign = if (mask & below).count_ones() % 2 == 0 { S::one() } else { -S::one() };
        let target = mask ^ bit;
        op.push(target, mask, sign);
    }
    op
}

/// Result of the exhaustive canonical-anticommutation-relation check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CarReport {
    pub k: usize,
    pub pairs_checked: usize,
    pub all_hold: bool,
}

/// Verify {a_i, a_j^dagger} = delta_ij Id, {a_i, a_j} = 0, and
/// {a_i^dagger, a_j^dagger} = 0 exactly, for all orbital pairs.
pub fn car_check(k: usize) -> Result<CarReport, FockError> {
    const CAP: usize = 10;
    if k > CAP {
        return Err(FockError::FockCapExceeded { k, cap: CAP });
    }
    let create: Vec<FullOperator<crate::scalar::Rational>> =
        (1..=k).map(|i| ladder_operator(i, true, k)).collect();
    let annihilate: Vec<FullOperator<crate::scalar::Rational>> =
        (1..=k).map(|i| ladder_operator(i, false, k)).collect();
    let id = FullOperator::identity(k);
    let mut pairs_checked = 0;
    let mut all_hold = true;
    for i in 0..k {
        for j in 0..k {
            let mixed =
                annihilate[i].matmul(&create[j]).add(&create[j].matmul(&annihilate[i]));
            let expected = if i == j { id.clone() } else { FullOperator::zero(k) };
            let both_ann =
                annihilate[i].matmul(&annihilate[j]).add(&annihilate[j].matmul(&annihilate[i]));
            let both_cre = create[i].matmul(&create[j]).add(&create[j].matmul(&create[i]));
            if mixed != expected || !both_ann.is_zero() || !both_cre.is_zero() {
                all_hold = false;
            }
            pairs_checked += 1;
        }
    }
    Ok(CarReport { k, pairs_checked, all_hold })
}
