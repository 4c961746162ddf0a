//! Dense operators on the N-particle sector in the phase-fixed basis
//! {Phi_0, Phi_mu = X_mu Phi_0}.

use crate::fock::{FullOperator, SectorBasis, SpinOrbitalBasis};
use crate::scalar::Scalar;
use std::sync::Arc;

/// A sector operator: dense matrix over the canonical determinant ordering.
#[derive(Debug, Clone)]
pub struct FockOperator<S> {
    pub sector: Arc<SectorBasis>,
    /// Row-major; entry[r][c] = <Phi_r, A Phi_c>.
    entries: Vec<Vec<S>>,
}

impl<S: Scalar> FockOperator<S> {
    pub fn from_entries(sector: Arc<SectorBasis>, entries: Vec<Vec<S>>) -> Self {
        let d = sector.len();
        assert!(entries.len() == d && entries.iter().all(|r| r.len() == d));
        Self { sector, entries }
    }

    pub fn zero(sector: Arc<SectorBasis>) -> Self {
        let d = sector.len();
        Self { sector, entries: vec![vec![S::zero(); d]; d] }
    }

    pub fn identity(sector: Arc<SectorBasis>) -> Self {
        let mut out = Self::zero(sector);
        for i in 0..out.dim() {
            out.entries[i][i] = S::one();
        }
        out
    }

    /// Project a full-Fock operator to the sector, inserting basis phases.
    pub fn project_full(sector: Arc<SectorBasis>, full: &FullOperator<S>) -> Self {
        let d = sector.len();
        let masks: Vec<usize> =
            (0..d).map(|i| sector.determinant(i).mask() as usize).collect();
        let row_of_mask: std::collections::HashMap<usize, usize> =
            masks.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let mut entries = vec![vec![S::zero(); d]; d];
        for c in 0..d {
            let pc = phase_scalar::<S>(sector.phase(c));
            for (row_mask, v) in full.column(masks[c]) {
                if let Some(&r) = row_of_mask.get(row_mask) {
                    let pr = phase_scalar::<S>(sector.phase(r));
                    entries[r][c] = pr * pc.clone() * v.clone();
                }
            }
        }
        Self { sector, entries }
    }

    pub fn basis(&self) -> SpinOrbitalBasis {
        self.sector.basis
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, r: usize, c: usize) -> &S {
        &self.entries[r][c]
    }

    pub fn set_entry(&mut self, r: usize, c: usize, v: S) {
        self.entries[r][c] = v;
    }

    pub fn rows(&self) -> &[Vec<S>] {
        &self.entries
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a - b)
    }

    fn zip(&self, other: &Self, f: impl Fn(S, S) -> S) -> Self {
        assert_eq!(self.dim(), other.dim());
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(ra, rb)| ra.iter().zip(rb).map(|(a, b)| f(a.clone(), b.clone())).collect())
            .collect();
        Self { sector: self.sector.clone(), entries }
    }

    pub fn scale(&self, s: &S) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|r| r.iter().map(|v| v.clone() * s.clone()).collect())
            .collect();
        Self { sector: self.sector.clone(), entries }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        let d = self.dim();
        assert_eq!(d, other.dim());
        let mut entries = vec![vec![S::zero(); d]; d];
        for i in 0..d {
            for k in 0..d {
                let a = &self.entries[i][k];
                if a.prune() {
                    continue;
                }
                for j in 0..d {
                    let b = &other.entries[k][j];
                    if !b.prune() {
                        entries[i][j] = entries[i][j].clone() + a.clone() * b.clone();
                    }
                }
            }
        }
        Self { sector: self.sector.clone(), entries }
    }

    pub fn apply(&self, v: &[S]) -> Vec<S> {
        assert_eq!(v.len(), self.dim());
        self.entries
            .iter()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .fold(S::zero(), |acc, (a, x)| acc + a.clone() * x.clone())
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(|v| v.prune())
    }

    pub fn max_magnitude(&self) -> f64 {
        self.entries.iter().flatten().map(|v| v.magnitude()).fold(0.0, f64::max)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> FockOperator<T> {
        FockOperator {
            sector: self.sector.clone(),
            entries: self.entries.iter().map(|r| r.iter().map(&f).collect()).collect(),
        }
    }
}

fn phase_scalar<S: Scalar>(p: i8) -> S {
    if p >= 0 {
        S::one()
    } else {
        -S::one()
    }
}
