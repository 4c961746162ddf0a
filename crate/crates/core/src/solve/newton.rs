//! Newton's method on the residual systems with analytic Jacobians, plus
//! root records and their physical/unphysical classification.

use crate::poly::{Poly, PolynomialSystem};
use nalgebra::{DMatrix, DVector};
use num::complex::Complex64;
use serde::Serialize;

#[derive(Debug, Clone)]
pub struct NewtonConfig {
    pub max_iterations: usize,
    pub tolerance: f64,
    pub damping: f64,
    /// Iterations abort when the Jacobian condition estimate exceeds this.
    pub max_condition: f64,
}

impl Default for NewtonConfig {
    fn default() -> Self {
        Self { max_iterations: 30, tolerance: 1e-10, damping: 1.0, max_condition: 1e14 }
    }
}

#[derive(Debug, Clone)]
pub struct NewtonResult {
    pub x: Vec<Complex64>,
    pub residual_norm: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Infinity-norm condition estimate of the Jacobian at the final point.
    pub condition: f64,
    /// Distinguishes a numerically singular Jacobian from plain
    /// non-convergence at the iteration cap.
    pub singular_jacobian: bool,
}

fn eval_matrix(
    jac: &[Vec<Poly<Complex64>>],
    x: &[Complex64],
) -> DMatrix<Complex64> {
    let n = jac.len();
    DMatrix::from_fn(n, n, |i, j| jac[i][j].eval(x))
}

fn norm_inf(m: &DMatrix<Complex64>) -> f64 {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn condition_estimate(m: &DMatrix<Complex64>) -> f64 {
    let lu = m.clone().lu();
    match lu.try_inverse() {
        Some(inv) => norm_inf(m) * norm_inf(&inv),
        None => f64::INFINITY,
    }
}

/// Damped Newton iteration from a given start point.
pub fn newton_solve(
    sys: &PolynomialSystem<Complex64>,
    x0: &[Complex64],
    cfg: &NewtonConfig,
) -> NewtonResult {
    let jac = sys.jacobian();
    let mut x = x0.to_vec();
    let mut condition = f64::NAN;
    let mut singular = false;
    for iter in 0..=cfg.max_iterations {
        let f = sys.eval(&x);
        let residual_norm = f.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        if residual_norm < cfg.tolerance {
            let j = eval_matrix(&jac, &x);
            return NewtonResult {
                x,
                residual_norm,
                iterations: iter,
                converged: true,
                condition: condition_estimate(&j),
                singular_jacobian: false,
            };
        }
        if iter == cfg.max_iterations {
            break;
        }
        let j = eval_matrix(&jac, &x);
        condition = condition_estimate(&j);
        if !condition.is_finite() || condition > cfg.max_condition {
            singular = true;
            break;
        }
        let rhs = DVector::from_vec(f);
        let Some(step) = j.lu().solve(&rhs) else {
            singular = true;
            break;
        };
        for (xi, si) in x.iter_mut().zip(step.iter()) {
            *xi -= Complex64::new(cfg.damping, 0.0) * si;
        }
    }
    let f = sys.eval(&x);
    let residual_norm = f.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    NewtonResult {
        x,
        residual_norm,
        iterations: cfg.max_iterations,
        converged: false,
        condition,
        singular_jacobian: singular,
    }
}

/// Reality/physicality classification of a converged root.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RootClass {
    /// Real amplitudes, energy matching an exact eigenvalue.
    RealPhysical,
    /// Real amplitudes, energy outside the exact spectrum.
    RealUnphysical,
    Complex,
}

/// A classified solution of a residual system.
#[derive(Debug, Clone)]
pub struct RootRecord {
    pub amplitudes: Vec<Complex64>,
    pub energy: Complex64,
    pub residual_norm: f64,
    pub condition: f64,
    pub class: RootClass,
}

/// Classify against the exact spectrum; the tolerance scales with the
/// spectral width so it is invariant under rescaling the Hamiltonian.
pub fn classify_root(
    amplitudes: &[Complex64],
    energy: Complex64,
    fci_values: &[f64],
    spectral_width: f64,
) -> RootClass {
    let delta = 1e-6 * spectral_width.max(1.0);
    let real = amplitudes.iter().all(|t| t.im.abs() <= delta) && energy.im.abs() <= delta;
    if !real {
        return RootClass::Complex;
    }
    let near_spectrum = fci_values.iter().any(|&e| (energy.re - e).abs() <= delta);
    if near_spectrum {
        RootClass::RealPhysical
    } else {
        RootClass::RealUnphysical
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::ExcitationIndex;
    use crate::poly::Poly;

    fn small_system() -> PolynomialSystem<Complex64> {
        // x^2 - 2 = 0, y - x = 0
        let x = Poly::<Complex64>::variable(0, 2);
        let y = Poly::<Complex64>::variable(1, 2);
        let two = Poly::constant(2, Complex64::new(2.0, 0.0));
        PolynomialSystem {
            n: 0,
            k: 0,
            scheme_name: "test".into(),
            variables: vec![
                ExcitationIndex::new(vec![1], vec![2]).unwrap(),
                ExcitationIndex::new(vec![1], vec![3]).unwrap(),
            ],
            equations: vec![x.mul(&x).sub(&two), y.sub(&x)],
        }
    }

    #[test]
    fn converges_quadratically() {
        let sys = small_system();
        let start = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        let out = newton_solve(&sys, &start, &NewtonConfig::default());
        assert!(out.converged);
        assert!((out.x[0].re - 2f64.sqrt()).abs() < 1e-9);
        assert!((out.x[1] - out.x[0]).norm() < 1e-9);
        assert!(out.iterations <= 8);
    }

    #[test]
    fn classification() {
        let fci = [1.0, 3.0];
        let t = [Complex64::new(0.5, 0.0)];
        assert_eq!(classify_root(&t, Complex64::new(1.0, 0.0), &fci, 2.0), RootClass::RealPhysical);
        assert_eq!(
            classify_root(&t, Complex64::new(2.0, 0.0), &fci, 2.0),
            RootClass::RealUnphysical
        );
        assert_eq!(classify_root(&t, Complex64::new(1.0, 0.1), &fci, 2.0), RootClass::Complex);
    }
}
