//! Dense symmetric eigensolves of sector Hamiltonians; the exact-diagonal
//! reference that the coupled-cluster roots are judged against.

use crate::fock::FockOperator;
use nalgebra::DMatrix;

/// Eigenvalues ascending with matching orthonormal eigenvectors (columns).
#[derive(Debug, Clone)]
pub struct Eigensystem {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

impl Eigensystem {
    pub fn ground_energy(&self) -> f64 {
        self.values[0]
    }

    /// Spectral width max - min, the scale for reality tolerances.
    pub fn width(&self) -> f64 {
        self.values[self.values.len() - 1] - self.values[0]
    }
}

/// Full diagonalization of a symmetric sector operator.
pub fn fci_eigensolve(h: &FockOperator<f64>) -> Eigensystem {
    let d = h.dim();
    let m = DMatrix::from_fn(d, d, |r, c| *h.entry(r, c));
    let sym = m.symmetric_eigen();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| sym.eigenvalues[a].total_cmp(&sym.eigenvalues[b]));
    let values = order.iter().map(|&i| sym.eigenvalues[i]).collect();
    let vectors = order
        .iter()
        .map(|&i| sym.eigenvectors.column(i).iter().copied().collect())
        .collect();
    Eigensystem { values, vectors }
}
