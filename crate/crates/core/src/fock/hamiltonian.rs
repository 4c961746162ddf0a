//! Second-quantized Hamiltonian assembly from one- and two-electron
//! integrals, plus direct ingestion of sector matrices.

use crate::fock::{FockError, FockOperator, FullOperator, SectorBasis, SpinOrbitalBasis};
use crate::scalar::Scalar;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Index convention of the two-electron tensor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IntegralConvention {
    /// v[p,q,r,s] = (pq|rs); H2 = 1/2 sum (pq|rs) a_p+ a_r+ a_s a_q.
    Chemist,
    /// v[p,q,r,s] = <pq|rs>; permuted to chemist order on ingestion.
    Physicist,
}

/// One- and two-electron integral tensors over K spin orbitals.
#[derive(Debug, Clone)]
pub struct IntegralSet<S> {
    pub k: usize,
    pub convention: IntegralConvention,
    /// Row-major K x K.
    pub h: Vec<S>,
    /// Row-major K^4, in the declared convention.
    pub v: Vec<S>,
}

#[derive(Serialize, Deserialize)]
struct IntegralFile {
    #[serde(rename = "K")]
    k: usize,
    convention: IntegralConvention,
    h: Vec<f64>,
    v: Vec<f64>,
}

impl<S: Scalar> IntegralSet<S> {
    pub fn new(
        k: usize,
        convention: IntegralConvention,
        h: Vec<S>,
        v: Vec<S>,
    ) -> Result<Self, FockError> {
        if h.len() != k * k || v.len() != k * k * k * k {
            return Err(FockError::BadTensorSize { k });
        }
        Ok(Self { k, convention, h, v })
    }

    pub fn from_json(text: &str) -> Result<Self, Box<dyn std::error::Error>> {
        let file: IntegralFile = serde_json::from_str(text)?;
        let h = file.h.iter().map(|&x| S::from_f64(x)).collect();
        let v = file.v.iter().map(|&x| S::from_f64(x)).collect();
        Ok(Self::new(file.k, file.convention, h, v)?)
    }

    pub fn to_json(&self) -> String {
        let file = IntegralFile {
            k: self.k,
            convention: self.convention,
            h: self.h.iter().map(|x| x.to_c64().re).collect(),
            v: self.v.iter().map(|x| x.to_c64().re).collect(),
        };
        serde_json::to_string_pretty(&file).expect("serializable")
    }

    fn h_at(&self, p: usize, q: usize) -> &S {
        &self.h[(p - 1) * self.k + q - 1]
    }

    /// Two-electron entry in chemist order, permuting if physicist input.
    fn v_chemist(&self, p: usize, q: usize, r: usize, s: usize) -> &S {
        let (a, b, c, d) = match self.convention {
            IntegralConvention::Chemist => (p, q, r, s),
            // (pq|rs) = <pr|qs>
            IntegralConvention::Physicist => (p, r, q, s),
        };
        let k = self.k;
        &self.v[((a - 1) * k + b - 1) * k * k + (c - 1) * k + d - 1]
    }
}

const FULL_FOCK_CAP: usize = 14;

/// Apply a string of ladder factors (rightmost first) to one basis mask.
/// Each factor is (orbital, create). Returns None when annihilated.
fn apply_string(mask: usize, factors: &[(usize, bool)]) -> Option<(i8, usize)> {
    let mut mask = mask;
    let mut sign = 1i8;
    for &(orb, create) in factors.iter().rev() {
        let bit = 1usize << (orb - 1);
        if create == (mask & bit != 0) {
            return None;
        }
        if (mask & (bit - 1)).count_ones() % 2 == 1 {
            sign = -sign;
        }
        mask ^= bit;
    }
    Some((sign, mask))
}

/// Assemble H = sum h_pq a_p+ a_q + 1/2 sum (pq|rs) a_p+ a_r+ a_s a_q on the
/// 2^K occupation basis, then project to the N-sector.
pub fn hamiltonian_from_integrals<S: Scalar>(
    ints: &IntegralSet<S>,
    basis: SpinOrbitalBasis,
) -> Result<FockOperator<S>, FockError> {
    if ints.k != basis.k {
        return Err(FockError::DimensionMismatch { expected: basis.k, got: ints.k });
    }
    if basis.k > FULL_FOCK_CAP {
        return Err(FockError::FockCapExceeded { k: basis.k, cap: FULL_FOCK_CAP });
    }
    let k = basis.k;
    let half = S::from_ratio(1, 2);
    // Accumulate column-wise: for each basis mask, apply every term.
    let mut columns: Vec<Vec<(usize, S)>> = vec![Vec::new(); 1 << k];
    for mask in 0..1usize << k {
        let col = &mut columns[mask];
        for p in 1..=k {
            for q in 1..=k {
                let coeff = ints.h_at(p, q);
                if coeff.prune() {
                    continue;
                }
                if let Some((sign, target)) = apply_string(mask, &[(p, true), (q, false)]) {
                    let v = if sign > 0 { coeff.clone() } else { -coeff.clone() };
                    col.push((target, v));
                }
            }
        }
        for p in 1..=k {
            for q in 1..=k {
                for r in 1..=k {
                    for s in 1..=k {
                        let coeff = ints.v_chemist(p, q, r, s);
                        if coeff.prune() {
                            continue;
                        }
                        let factors = [(p, true), (r, true), (s, false), (q, false)];
                        if let Some((sign, target)) = apply_string(mask, &factors) {
                            let v = half.clone() * coeff.clone();
                            col.push((target, if sign > 0 { v } else { -v }));
                        }
                    }
                }
            }
        }
    }
    let full = FullOperator::from_columns(k, columns);
    let sector = Arc::new(SectorBasis::new(basis));
    Ok(FockOperator::project_full(sector, &full))
}

/// Wrap a dense symmetric matrix given directly in the determinant basis.
pub fn hamiltonian_from_matrix<S: Scalar>(
    entries: Vec<Vec<S>>,
    basis: SpinOrbitalBasis,
) -> Result<FockOperator<S>, FockError> {
    let d = basis.sector_dim();
    if entries.len() != d || entries.iter().any(|r| r.len() != d) {
        return Err(FockError::DimensionMismatch { expected: d, got: entries.len() });
    }
    let tolerance = 1e-12;
    let mut deviation = 0.0f64;
    for i in 0..d {
        for j in 0..i {
            let diff = entries[i][j].clone() - entries[j][i].clone();
            deviation = deviation.max(diff.magnitude());
        }
    }
    if deviation > tolerance {
        return Err(FockError::NotSymmetric { deviation, tolerance });
    }
    let sector = Arc::new(SectorBasis::new(basis));
    Ok(FockOperator::from_entries(sector, entries))
}

/// JSON schema for sector-matrix files.
#[derive(Serialize, Deserialize)]
pub struct MatrixFile {
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "N")]
    pub n: usize,
    /// Row-major binomial(K,N)^2 entries.
    pub entries: Vec<f64>,
}
