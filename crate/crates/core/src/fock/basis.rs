//! Determinant basis of the N-particle sector and excitation indices.
//!
//! Orbitals are numbered 1..=K. A Slater determinant is stored as its
//! strictly increasing orbital list; the occupation-vector view is a bitmask
//! with bit i-1 set when orbital i is occupied. Excited basis states are
//! defined as `Phi_mu = X_mu Phi_0`, which differs from the canonically
//! sorted determinant by a phase; [`SectorBasis`] records that phase so all
//! sector matrices live consistently in the `{Phi_mu}` basis.

use crate::fock::FockError;
use itertools::Itertools;
use std::collections::HashMap;

/// K spin orbitals holding N electrons.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpinOrbitalBasis {
    pub k: usize,
    pub n: usize,
}

impl SpinOrbitalBasis {
    pub fn new(k: usize, n: usize) -> Result<Self, FockError> {
        if n > k {
            return Err(FockError::TooManyElectrons { n, k });
        }
        Ok(Self { k, n })
    }

    /// Dimension of the N-particle (FCI) sector, binomial(K, N).
    pub fn sector_dim(&self) -> usize {
        binomial(self.k, self.n)
    }

    /// Dimension of the full Fock space, 2^K.
    pub fn fock_dim(&self) -> usize {
        1usize << self.k
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Occupation-number view of a Fock-space basis state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OccupationVector {
    pub mask: u32,
    pub k: usize,
}

impl OccupationVector {
    pub fn particle_count(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn orbitals(&self) -> Vec<usize> {
        (1..=self.k).filter(|&i| self.mask >> (i - 1) & 1 == 1).collect()
    }
}

/// Canonically ordered Slater determinant of the N-particle sector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SlaterDeterminant {
    orbitals: Vec<usize>,
}

impl SlaterDeterminant {
    pub fn new(mut orbitals: Vec<usize>) -> Self {
        orbitals.sort_unstable();
        debug_assert!(orbitals.windows(2).all(|w| w[0] < w[1]), "repeated orbital");
        Self { orbitals }
    }

    pub fn reference(n: usize) -> Self {
        Self { orbitals: (1..=n).collect() }
    }

    pub fn orbitals(&self) -> &[usize] {
        &self.orbitals
    }

    pub fn particle_count(&self) -> usize {
        self.orbitals.len()
    }

    pub fn mask(&self) -> u32 {
        self.orbitals.iter().fold(0u32, |m, &i| m | 1 << (i - 1))
    }

    pub fn from_mask(occ: OccupationVector) -> Self {
        Self { orbitals: occ.orbitals() }
    }

    pub fn contains(&self, orbital: usize) -> bool {
        self.orbitals.binary_search(&orbital).is_ok()
    }
}

/// Multi-index mu: excitation from occupied orbitals into virtual orbitals.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExcitationIndex {
    occupied: Vec<usize>,
    virtuals: Vec<usize>,
}

impl ExcitationIndex {
    pub fn new(occupied: Vec<usize>, virtuals: Vec<usize>) -> Result<Self, FockError> {
        if occupied.is_empty() || occupied.len() != virtuals.len() {
            return Err(FockError::BadExcitationIndex);
        }
        if !occupied.windows(2).all(|w| w[0] < w[1]) || !virtuals.windows(2).all(|w| w[0] < w[1]) {
            return Err(FockError::BadExcitationIndex);
        }
        Ok(Self { occupied, virtuals })
    }

    pub fn occupied(&self) -> &[usize] {
        &self.occupied
    }

    pub fn virtuals(&self) -> &[usize] {
        &self.virtuals
    }

    pub fn rank(&self) -> usize {
        self.occupied.len()
    }
}

impl std::fmt::Display for ExcitationIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "t[{}]^[{}]",
            self.occupied.iter().join(","),
            self.virtuals.iter().join(",")
        )
    }
}

/// Rank-major determinant list: reference first, then by excitation rank,
/// ties broken lexicographically on (occupied list, virtual list).
pub fn enumerate_determinants(basis: SpinOrbitalBasis) -> Vec<SlaterDeterminant> {
    let mut dets = vec![SlaterDeterminant::reference(basis.n)];
    for mu in enumerate_excitations(basis, basis.n) {
        dets.push(excited_determinant(&mu, basis.n));
    }
    dets
}

/// All excitation indices of rank 1..=max_rank in the canonical ordering.
pub fn enumerate_excitations(basis: SpinOrbitalBasis, max_rank: usize) -> Vec<ExcitationIndex> {
    let mut out = Vec::new();
    for rank in 1..=max_rank.min(basis.n).min(basis.k - basis.n) {
        for occ in (1..=basis.n).combinations(rank) {
            for virt in (basis.n + 1..=basis.k).combinations(rank) {
                out.push(ExcitationIndex::new(occ.clone(), virt).expect("canonical index"));
            }
        }
    }
    out
}

/// The canonically sorted determinant underlying `X_mu Phi_0` (phase dropped).
pub fn excited_determinant(mu: &ExcitationIndex, n: usize) -> SlaterDeterminant {
    let mut orbitals: Vec<usize> =
        (1..=n).filter(|i| !mu.occupied.contains(i)).chain(mu.virtuals.iter().copied()).collect();
    orbitals.sort_unstable();
    SlaterDeterminant::new(orbitals)
}

/// Sign (-1)^(occupied orbitals strictly below `orbital`).
fn jordan_wigner_sign(mask: u32, orbital: usize) -> i8 {
    let below = mask & ((1u32 << (orbital - 1)) - 1);
    if below.count_ones() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Apply a single excitation a_a^dagger a_i to a determinant (mask form).
/// Returns None when the action annihilates the state.
fn apply_single(mask: u32, i: usize, a: usize) -> Option<(i8, u32)> {
    if mask >> (i - 1) & 1 == 0 {
        return None;
    }
    let s1 = jordan_wigner_sign(mask, i);
    let mid = mask & !(1u32 << (i - 1));
    if mid >> (a - 1) & 1 == 1 {
        return None;
    }
    let s2 = jordan_wigner_sign(mid, a);
    Some((s1 * s2, mid | 1 << (a - 1)))
}

/// Apply `X_mu` (the product of its commuting single excitations) to a
/// canonically ordered determinant. The zero outcome is a value, not an error.
pub fn apply_excitation(
    mu: &ExcitationIndex,
    det: &SlaterDeterminant,
) -> Option<(i8, SlaterDeterminant)> {
    let mut phase = 1i8;
    let mut mask = det.mask();
    for (&i, &a) in mu.occupied.iter().zip(&mu.virtuals) {
        let (s, next) = apply_single(mask, i, a)?;
        phase *= s;
        mask = next;
    }
    Some((phase, SlaterDeterminant::from_mask(OccupationVector { mask, k: 32 })))
}

/// Apply the de-excitation `X_mu^dagger` (each factor a_i^dagger a_a).
pub fn apply_deexcitation(
    mu: &ExcitationIndex,
    det: &SlaterDeterminant,
) -> Option<(i8, SlaterDeterminant)> {
    let mut phase = 1i8;
    let mut mask = det.mask();
    for (&i, &a) in mu.occupied.iter().zip(&mu.virtuals) {
        let (s, next) = apply_single(mask, a, i)?;
        phase *= s;
        mask = next;
    }
    Some((phase, SlaterDeterminant::from_mask(OccupationVector { mask, k: 32 })))
}

/// The N-sector basis `{Phi_0} u {Phi_mu = X_mu Phi_0}` in canonical order,
/// with the phase of each `Phi_mu` relative to its sorted determinant.
#[derive(Debug, Clone)]
pub struct SectorBasis {
    pub basis: SpinOrbitalBasis,
    dets: Vec<SlaterDeterminant>,
    excitations: Vec<Option<ExcitationIndex>>,
    phases: Vec<i8>,
    index: HashMap<SlaterDeterminant, usize>,
}

impl SectorBasis {
    pub fn new(basis: SpinOrbitalBasis) -> Self {
        let dets = enumerate_determinants(basis);
        let mut excitations = vec![None];
        let mut phases = vec![1i8];
        let reference = SlaterDeterminant::reference(basis.n);
        for mu in enumerate_excitations(basis, basis.n) {
            let (phase, det) = apply_excitation(&mu, &reference).expect("reference excitation");
            debug_assert_eq!(det, excited_determinant(&mu, basis.n));
            phases.push(phase);
            excitations.push(Some(mu));
        }
        let index = dets.iter().cloned().enumerate().map(|(i, d)| (d, i)).collect();
        Self { basis, dets, excitations, phases, index }
    }

    pub fn len(&self) -> usize {
        self.dets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dets.is_empty()
    }

    pub fn determinant(&self, i: usize) -> &SlaterDeterminant {
        &self.dets[i]
    }

    pub fn determinants(&self) -> &[SlaterDeterminant] {
        &self.dets
    }

    /// Phase of `Phi_i` relative to the canonically sorted determinant.
    pub fn phase(&self, i: usize) -> i8 {
        self.phases[i]
    }

    /// Excitation index of basis state i; None for the reference.
    pub fn excitation(&self, i: usize) -> Option<&ExcitationIndex> {
        self.excitations[i].as_ref()
    }

    pub fn position(&self, det: &SlaterDeterminant) -> Option<usize> {
        self.index.get(det).copied()
    }

    /// Index of `X_mu Phi_0` in the sector ordering.
    pub fn position_of_excitation(&self, mu: &ExcitationIndex) -> Option<usize> {
        self.position(&excited_determinant(mu, self.basis.n))
    }

    /// Coefficient of `X_mu Phi_j` on basis state `Phi_i`, if nonzero:
    /// returns (i, phase) in the phase-fixed sector basis.
    pub fn excite_basis_state(&self, mu: &ExcitationIndex, j: usize) -> Option<(usize, i8)> {
        let (p, det) = apply_excitation(mu, &self.dets[j])?;
        let i = self.position(&det)?;
        Some((i, self.phases[j] * p * self.phases[i]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_counts() {
        let b = SpinOrbitalBasis::new(4, 2).unwrap();
        let dets = enumerate_determinants(b);
        assert_eq!(dets.len(), 6);
        assert_eq!(dets[0], SlaterDeterminant::new(vec![1, 2]));
        let b = SpinOrbitalBasis::new(6, 3).unwrap();
        assert_eq!(enumerate_determinants(b).len(), 20);
        let b = SpinOrbitalBasis::new(4, 0).unwrap();
        assert_eq!(enumerate_determinants(b).len(), 1);
        assert!(enumerate_determinants(b)[0].orbitals().is_empty());
    }

    #[test]
    fn too_many_electrons_rejected() {
        assert!(SpinOrbitalBasis::new(3, 4).is_err());
    }

    #[test]
    fn determinant_ordering_is_rank_major() {
        let b = SpinOrbitalBasis::new(4, 2).unwrap();
        let dets = enumerate_determinants(b);
        // Phi0, then singles lex by (i, a), then the double.
        let expect: Vec<Vec<usize>> =
            vec![vec![1, 2], vec![2, 3], vec![2, 4], vec![1, 3], vec![1, 4], vec![3, 4]];
        let got: Vec<Vec<usize>> = dets.iter().map(|d| d.orbitals().to_vec()).collect();
        assert_eq!(got, expect);
    }

    #[test]
    fn excitation_on_phi23() {
        // X_2^4 Phi[2,3] = -Phi[3,4]
        let mu = ExcitationIndex::new(vec![2], vec![4]).unwrap();
        let d = SlaterDeterminant::new(vec![2, 3]);
        let (phase, det) = apply_excitation(&mu, &d).unwrap();
        assert_eq!(phase, -1);
        assert_eq!(det, SlaterDeterminant::new(vec![3, 4]));
    }

    #[test]
    fn excitation_blocked_by_pauli() {
        // X_1^3 on Phi[2,3]: orbital 3 already occupied.
        let mu = ExcitationIndex::new(vec![1], vec![3]).unwrap();
        let d = SlaterDeterminant::new(vec![2, 3]);
        assert!(apply_excitation(&mu, &d).is_none());
        // X on a determinant lacking the occupied orbital.
        let mu = ExcitationIndex::new(vec![1], vec![4]).unwrap();
        assert!(apply_excitation(&mu, &d).is_none());
    }

    #[test]
    fn sector_phases_two_in_four() {
        let sb = SectorBasis::new(SpinOrbitalBasis::new(4, 2).unwrap());
        // Phi_1^3 = -Phi[2,3], Phi_1^4 = -Phi[2,4], Phi_2^3 = +Phi[1,3],
        // Phi_2^4 = +Phi[1,4], Phi_12^34 = X_1^3 X_2^4 Phi_0 = +Phi[3,4].
        assert_eq!(
            (0..6).map(|i| sb.phase(i)).collect::<Vec<_>>(),
            vec![1, -1, -1, 1, 1, 1]
        );
    }

    #[test]
    fn deexcitation_round_trip() {
        let sb = SectorBasis::new(SpinOrbitalBasis::new(6, 3).unwrap());
        let reference = SlaterDeterminant::reference(3);
        for i in 1..sb.len() {
            let mu = sb.excitation(i).unwrap();
            let (p1, d) = apply_excitation(mu, &reference).unwrap();
            let (p2, back) = apply_deexcitation(mu, &d).unwrap();
            assert_eq!(back, reference);
            assert_eq!(p1 * p2, 1);
        }
    }
}
