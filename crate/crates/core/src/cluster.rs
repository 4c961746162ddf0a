//! Cluster operators, the exponential parametrization, cluster analysis of
//! sector states, the CC energy, and the exact matrix-route residual.

use crate::fock::{
    enumerate_excitations, ExcitationIndex, FockOperator, SectorBasis, SpinOrbitalBasis,
};
use crate::scalar::Scalar;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ClusterError {
    #[error("amplitude key {0} not admitted by the truncation scheme")]
    KeyOutsideScheme(String),
    #[error("reference overlap {0:e} below tolerance; state has no cluster representation")]
    VanishingReferenceOverlap(f64),
    #[error("truncation scheme is empty or exceeds the particle number")]
    BadScheme,
}

/// Which excitation ranks the cluster operator retains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncationScheme {
    ranks: BTreeSet<usize>,
}

impl TruncationScheme {
    pub fn new(ranks: impl IntoIterator<Item = usize>, n: usize) -> Result<Self, ClusterError> {
        let ranks: BTreeSet<usize> = ranks.into_iter().collect();
        if ranks.is_empty() || ranks.iter().any(|&r| r == 0 || r > n) {
            return Err(ClusterError::BadScheme);
        }
        Ok(Self { ranks })
    }

    pub fn ccs(n: usize) -> Self {
        Self::new([1], n).expect("N >= 1")
    }

    pub fn ccsd(n: usize) -> Self {
        Self::new(1..=2.min(n), n).expect("N >= 1")
    }

    pub fn full(n: usize) -> Self {
        Self::new(1..=n, n).expect("N >= 1")
    }

    pub fn admits(&self, rank: usize) -> bool {
        self.ranks.contains(&rank)
    }

    pub fn ranks(&self) -> impl Iterator<Item = usize> + '_ {
        self.ranks.iter().copied()
    }

    pub fn max_rank(&self) -> usize {
        *self.ranks.iter().max().expect("non-empty")
    }
}

impl std::fmt::Display for TruncationScheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let ranks: Vec<usize> = self.ranks.iter().copied().collect();
        match ranks.as_slice() {
            [1] => write!(f, "ccs"),
            [1, 2] => write!(f, "ccsd"),
            [1, 2, 3] => write!(f, "ccsdt"),
            _ => write!(f, "ranks{:?}", ranks),
        }
    }
}

/// The variables admitted by a scheme, in the frozen canonical ordering
/// (rank-major, then lexicographic on occupied and virtual lists).
pub fn scheme_variables(basis: SpinOrbitalBasis, scheme: &TruncationScheme) -> Vec<ExcitationIndex> {
    enumerate_excitations(basis, basis.n)
        .into_iter()
        .filter(|mu| scheme.admits(mu.rank()))
        .collect()
}

/// Amplitude vector t = (t_mu) over the scheme's variables.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterAmplitudes<S> {
    pub basis: SpinOrbitalBasis,
    pub scheme: TruncationScheme,
    variables: Vec<ExcitationIndex>,
    values: Vec<S>,
}

impl<S: Scalar> ClusterAmplitudes<S> {
    pub fn zero(basis: SpinOrbitalBasis, scheme: TruncationScheme) -> Self {
        let variables = scheme_variables(basis, &scheme);
        let values = vec![S::zero(); variables.len()];
        Self { basis, scheme, variables, values }
    }

    pub fn from_values(
        basis: SpinOrbitalBasis,
        scheme: TruncationScheme,
        values: Vec<S>,
    ) -> Self {
        let variables = scheme_variables(basis, &scheme);
        assert_eq!(variables.len(), values.len(), "value count mismatch");
        Self { basis, scheme, variables, values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn variables(&self) -> &[ExcitationIndex] {
        &self.variables
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn get(&self, mu: &ExcitationIndex) -> Result<&S, ClusterError> {
        self.variables
            .iter()
            .position(|v| v == mu)
            .map(|i| &self.values[i])
            .ok_or_else(|| ClusterError::KeyOutsideScheme(mu.to_string()))
    }

    pub fn set(&mut self, mu: &ExcitationIndex, value: S) -> Result<(), ClusterError> {
        let i = self
            .variables
            .iter()
            .position(|v| v == mu)
            .ok_or_else(|| ClusterError::KeyOutsideScheme(mu.to_string()))?;
        self.values[i] = value;
        Ok(())
    }

    /// Restrict to a smaller scheme, dropping higher-rank amplitudes.
    pub fn truncate(&self, scheme: TruncationScheme) -> Self {
        let mut out = Self::zero(self.basis, scheme);
        for (mu, v) in self.variables.iter().zip(&self.values) {
            if out.scheme.admits(mu.rank()) {
                out.set(mu, v.clone()).expect("subset scheme");
            }
        }
        out
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> ClusterAmplitudes<T> {
        ClusterAmplitudes {
            basis: self.basis,
            scheme: self.scheme.clone(),
            variables: self.variables.clone(),
            values: self.values.iter().map(f).collect(),
        }
    }
}

/// JSON element of the amplitude serialization.
#[derive(Serialize, Deserialize)]
pub struct AmplitudeEntry {
    pub occupied: Vec<usize>,
    pub virtual_: Vec<usize>,
    pub re: f64,
    pub im: f64,
}

impl<S: Scalar> ClusterAmplitudes<S> {
    pub fn to_json(&self) -> String {
        let entries: Vec<AmplitudeEntry> = self
            .variables
            .iter()
            .zip(&self.values)
            .map(|(mu, v)| {
                let c = v.to_c64();
                AmplitudeEntry {
                    occupied: mu.occupied().to_vec(),
                    virtual_: mu.virtuals().to_vec(),
                    re: c.re,
                    im: c.im,
                }
            })
            .collect();
        serde_json::to_string_pretty(&entries).expect("serializable")
    }
}

/// T = sum t_mu X_mu as a sector matrix (strictly block-lower-triangular).
pub fn cluster_matrix<S: Scalar>(
    t: &ClusterAmplitudes<S>,
    sector: &Arc<SectorBasis>,
) -> FockOperator<S> {
    assert_eq!(sector.basis, t.basis);
    let mut out: FockOperator<S> = FockOperator::zero(sector.clone());
    for (mu, value) in t.variables.iter().zip(&t.values) {
        if value.prune() {
            continue;
        }
        for j in 0..sector.len() {
            if let Some((i, phase)) = sector.excite_basis_state(mu, j) {
                let signed = if phase > 0 { value.clone() } else { -value.clone() };
                let cur = out.entry(i, j).clone();
                out.set_entry(i, j, cur + signed);
            }
        }
    }
    out
}

/// exp(T) via the terminating series sum_{k<=N} T^k / k!.
pub fn exp_cluster<S: Scalar>(
    t: &ClusterAmplitudes<S>,
    sector: &Arc<SectorBasis>,
) -> FockOperator<S> {
    let matrix = cluster_matrix(t, sector);
    exp_nilpotent(&matrix, sector.basis.n)
}

/// Series exponential of a nilpotent sector matrix (T^(N+1) = 0).
pub fn exp_nilpotent<S: Scalar>(matrix: &FockOperator<S>, n: usize) -> FockOperator<S> {
    let mut out = FockOperator::identity(matrix.sector.clone());
    let mut power = FockOperator::identity(matrix.sector.clone());
    let mut factorial: i64 = 1;
    for k in 1..=n {
        power = power.matmul(matrix);
        factorial *= k as i64;
        out = out.add(&power.scale(&S::from_ratio(1, factorial)));
    }
    out
}

/// The terminating matrix log of a wave operator Id + C; inverse of
/// exp_nilpotent on the strictly block-lower-triangular cone.
pub fn log_wave_operator<S: Scalar>(omega: &FockOperator<S>, n: usize) -> FockOperator<S> {
    let c = omega.sub(&FockOperator::identity(omega.sector.clone()));
    let mut out = FockOperator::zero(omega.sector.clone());
    let mut power = FockOperator::identity(omega.sector.clone());
    for m in 1..=n {
        power = power.matmul(&c);
        let sign = if m % 2 == 1 { 1 } else { -1 };
        out = out.add(&power.scale(&S::from_ratio(sign, m as i64)));
    }
    out
}

const REFERENCE_OVERLAP_TOL: f64 = 1e-12;

/// Cluster analysis: the unique FULL-scheme t with exp(T) Phi_0 = v / <Phi_0,v>.
pub fn amplitudes_from_state<S: Scalar>(
    v: &[S],
    sector: &Arc<SectorBasis>,
) -> Result<ClusterAmplitudes<S>, ClusterError> {
    let n = sector.basis.n;
    assert_eq!(v.len(), sector.len());
    let overlap = v[0].clone();
    if overlap.magnitude() < REFERENCE_OVERLAP_TOL {
        return Err(ClusterError::VanishingReferenceOverlap(overlap.magnitude()));
    }
    let normalized: Vec<S> = v.iter().map(|x| x.clone() / overlap.clone()).collect();
    let mut t: ClusterAmplitudes<S> =
        ClusterAmplitudes::zero(sector.basis, TruncationScheme::full(n));
    // Rank-by-rank: the coefficient of Phi_mu in exp(T)Phi_0 is t_mu plus a
    // polynomial in strictly lower ranks, so each sweep fixes one rank.
    for rank in 1..=n {
        let w = column_zero(&exp_cluster(&t, sector));
        for i in 1..sector.len() {
            let mu = sector.excitation(i).expect("non-reference");
            if mu.rank() == rank {
                let value = normalized[i].clone() - w[i].clone();
                t.set(mu, value).expect("FULL scheme");
            }
        }
    }
    Ok(t)
}

fn column_zero<S: Scalar>(op: &FockOperator<S>) -> Vec<S> {
    (0..op.dim()).map(|i| op.entry(i, 0).clone()).collect()
}

/// e^{-T} H e^{T} Phi_0 as a sector vector.
fn similarity_transformed_reference<S: Scalar>(
    h: &FockOperator<S>,
    t: &ClusterAmplitudes<S>,
) -> Vec<S> {
    let sector = &h.sector;
    let mut v = vec![S::zero(); sector.len()];
    v[0] = S::one();
    let w = exp_cluster(t, sector).apply(&v);
    let u = h.apply(&w);
    let minus_t = t.map(|x| -x.clone());
    exp_cluster(&minus_t, sector).apply(&u)
}

/// The coupled-cluster energy <Phi_0, e^{-T} H e^{T} Phi_0>.
pub fn cc_energy<S: Scalar>(h: &FockOperator<S>, t: &ClusterAmplitudes<S>) -> S {
    similarity_transformed_reference(h, t)[0].clone()
}

/// Exact matrix-route residual vector, indexed by the scheme's excitations
/// in canonical order; the oracle for the symbolic generator.
pub fn residual_exact<S: Scalar>(
    h: &FockOperator<S>,
    t: &ClusterAmplitudes<S>,
    scheme: &TruncationScheme,
) -> Vec<S> {
    let z = similarity_transformed_reference(h, t);
    let sector = &h.sector;
    let mut out = Vec::new();
    for i in 1..sector.len() {
        let mu = sector.excitation(i).expect("non-reference");
        if scheme.admits(mu.rank()) {
            out.push(z[i].clone());
        }
    }
    out
}
