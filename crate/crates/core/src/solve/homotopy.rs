//! Total-degree homotopy continuation: track every start root of the
//! product-of-degrees system into the target system to obtain a full root
//! census.

use super::newton::{newton_solve, NewtonConfig};
use crate::poly::PolynomialSystem;
use nalgebra::{DMatrix, DVector};
use num::complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;

#[derive(Debug, Clone)]
pub struct HomotopyConfig {
    pub seed: u64,
    pub min_step: f64,
    pub max_step: f64,
    /// Paths whose iterates exceed this magnitude count as divergent.
    pub divergence_bound: f64,
    /// Distinct-root deduplication distance.
    pub dedup_tolerance: f64,
    pub newton: NewtonConfig,
}

impl Default for HomotopyConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            min_step: 1e-4,
            max_step: 1e-1,
            divergence_bound: 1e8,
            dedup_tolerance: 1e-8,
            newton: NewtonConfig::default(),
        }
    }
}

/// Outcome of tracking all start roots.
#[derive(Debug, Clone)]
pub struct RootCensus {
    /// Distinct polished solutions of the target system.
    pub roots: Vec<Vec<Complex64>>,
    pub paths_tracked: usize,
    pub paths_diverged: usize,
    pub paths_failed: usize,
}

struct Homotopy<'a> {
    target: &'a PolynomialSystem<Complex64>,
    target_jac: Vec<Vec<crate::poly::Poly<Complex64>>>,
    degrees: Vec<u32>,
    /// Start system x_i^{d_i} - b_i, pre-multiplied by the gamma constant.
    b: Vec<Complex64>,
    gamma: Complex64,
}

impl Homotopy<'_> {
    fn n(&self) -> usize {
        self.degrees.len()
    }

    /// H(x, s) = (1-s) gamma (x^d - b) + s f(x).
    fn eval(&self, x: &[Complex64], s: f64) -> DVector<Complex64> {
        let f = self.target.eval(x);
        DVector::from_fn(self.n(), |i, _| {
            let g = x[i].powu(self.degrees[i]) - self.b[i];
            self.gamma * Complex64::new(1.0 - s, 0.0) * g + Complex64::new(s, 0.0) * f[i]
        })
    }

    fn jacobian(&self, x: &[Complex64], s: f64) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.n(), self.n(), |i, j| {
            let mut v = Complex64::new(s, 0.0) * self.target_jac[i][j].eval(x);
            if i == j {
                let d = self.degrees[i];
                v += self.gamma
                    * Complex64::new(1.0 - s, 0.0)
                    * Complex64::new(d as f64, 0.0)
                    * x[i].powu(d - 1);
            }
            v
        })
    }

    /// dH/ds = f(x) - gamma (x^d - b).
    fn ds(&self, x: &[Complex64], _s: f64) -> DVector<Complex64> {
        let f = self.target.eval(x);
        DVector::from_fn(self.n(), |i, _| {
            f[i] - self.gamma * (x[i].powu(self.degrees[i]) - self.b[i])
        })
    }
}

enum PathOutcome {
    Arrived(Vec<Complex64>),
    /// Step underflow before s = 1; the endpoint polish decides the fate.
    Stalled(Vec<Complex64>, f64),
    Diverged,
}

fn track_path(
    h: &Homotopy,
    start: Vec<Complex64>,
    s0: f64,
    min_step: f64,
    max_step: f64,
    cfg: &HomotopyConfig,
) -> PathOutcome {
    let mut x = start;
    let mut s = s0;
    let mut step = max_step;
    while s < 1.0 {
        let ds = step.min(1.0 - s);
        // Euler predictor along the Davidenko equation.
        let j = h.jacobian(&x, s);
        let rhs = h.ds(&x, s);
        let Some(tangent) = j.lu().solve(&rhs) else {
            return PathOutcome::Stalled(x, s);
        };
        let mut xp: Vec<Complex64> = x
            .iter()
            .zip(tangent.iter())
            .map(|(xi, ti)| xi - Complex64::new(ds, 0.0) * ti)
            .collect();
        // Newton corrector at fixed s + ds; tolerance is relative to the
        // iterate scale since the final endpoint gets a separate polish.
        let s_next = s + ds;
        let mut ok = false;
        for _ in 0..5 {
            let r = h.eval(&xp, s_next);
            let jj = h.jacobian(&xp, s_next);
            let Some(delta) = jj.lu().solve(&r) else { break };
            let delta_norm = delta.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
            for (xi, di) in xp.iter_mut().zip(delta.iter()) {
                *xi -= di;
            }
            let scale = 1.0 + xp.iter().map(|v| v.norm()).fold(0.0, f64::max);
            if delta_norm < 1e-8 * scale {
                ok = true;
                break;
            }
        }
        let magnitude = xp.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if magnitude > cfg.divergence_bound {
            return PathOutcome::Diverged;
        }
        if ok {
            x = xp;
            s = s_next;
            step = (step * 2.0).min(max_step);
        } else {
            step /= 2.0;
            if step < min_step {
                return PathOutcome::Stalled(x, s);
            }
        }
    }
    PathOutcome::Arrived(x)
}

/// Coarse phase, then a finer retry from wherever the coarse phase stalled.
fn track_path_staged(h: &Homotopy, start: Vec<Complex64>, cfg: &HomotopyConfig) -> PathOutcome {
    match track_path(h, start, 0.0, cfg.min_step, cfg.max_step, cfg) {
        PathOutcome::Stalled(x, s) => {
            track_path(h, x, s, cfg.min_step * 1e-3, cfg.max_step * 1e-2, cfg)
        }
        other => other,
    }
}

/// Track all product-of-degrees start roots into the target system and
/// return the polished, deduplicated census.
pub fn homotopy_solve_all(
    sys: &PolynomialSystem<Complex64>,
    cfg: &HomotopyConfig,
) -> RootCensus {
    let n = sys.nvars();
    let degrees = sys.degrees();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let angle: f64 = rng.gen_range(0.0..TAU);
    let gamma = Complex64::from_polar(1.0, angle);
    // Start system x_i^{d_i} - 1 = 0; genericity comes from the gamma trick.
    let b: Vec<Complex64> = vec![Complex64::new(1.0, 0.0); n];
    let homotopy = Homotopy { target: sys, target_jac: sys.jacobian(), degrees: degrees.clone(), b: b.clone(), gamma };

    // Enumerate start roots: x_i ranges over the d_i-th roots of b_i.
    let total: usize = degrees.iter().map(|&d| d as usize).product();
    let mut roots: Vec<Vec<Complex64>> = Vec::new();
    let mut diverged = 0;
    let mut failed = 0;
    for idx in 0..total {
        let mut rem = idx;
        let mut start = Vec::with_capacity(n);
        for i in 0..n {
            let d = degrees[i] as usize;
            let k = rem % d;
            rem /= d;
            start.push(Complex64::from_polar(1.0, TAU * k as f64 / d as f64));
        }
        match track_path_staged(&homotopy, start, cfg) {
            PathOutcome::Diverged => diverged += 1,
            PathOutcome::Arrived(x) | PathOutcome::Stalled(x, _) => {
                let polished = newton_solve(sys, &x, &cfg.newton);
                if !polished.converged {
                    // Stalled paths with large endpoints were heading to
                    // roots at infinity.
                    let here = x.iter().map(|v| v.norm()).fold(0.0, f64::max);
                    if here > 1e4 {
                        diverged += 1;
                    } else {
                        failed += 1;
                    }
                    continue;
                }
                let magnitude = polished.x.iter().map(|v| v.norm()).fold(0.0, f64::max);
                if magnitude > cfg.divergence_bound {
                    diverged += 1;
                    continue;
                }
                let duplicate = roots.iter().any(|r| {
                    r.iter()
                        .zip(&polished.x)
                        .map(|(a, c)| (a - c).norm())
                        .fold(0.0, f64::max)
                        < cfg.dedup_tolerance
                });
                if !duplicate {
                    roots.push(polished.x);
                }
            }
        }
    }
    RootCensus { roots, paths_tracked: total, paths_diverged: diverged, paths_failed: failed }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::ExcitationIndex;
    use crate::poly::Poly;

    #[test]
    fn census_of_decoupled_quadratics() {
        // x^2 = 1, y^2 = 4: four roots (+-1, +-2).
        let x = Poly::<Complex64>::variable(0, 2);
        let y = Poly::<Complex64>::variable(1, 2);
        let c = |v: f64| Poly::constant(2, Complex64::new(v, 0.0));
        let sys = PolynomialSystem {
            n: 0,
            k: 0,
            scheme_name: "test".into(),
            variables: vec![
                ExcitationIndex::new(vec![1], vec![2]).unwrap(),
                ExcitationIndex::new(vec![1], vec![3]).unwrap(),
            ],
            equations: vec![x.mul(&x).sub(&c(1.0)), y.mul(&y).sub(&c(4.0))],
        };
        let census = homotopy_solve_all(&sys.to_complex(), &HomotopyConfig::default());
        assert_eq!(census.paths_tracked, 4);
        assert_eq!(census.roots.len(), 4);
        for r in &census.roots {
            assert!((r[0].re.abs() - 1.0).abs() < 1e-9);
            assert!((r[1].re.abs() - 2.0).abs() < 1e-9);
        }
    }

    #[test]
    fn deterministic_census() {
        let x = Poly::<Complex64>::variable(0, 1);
        let c = Poly::constant(1, Complex64::new(-3.0, 0.0));
        let sys = PolynomialSystem {
            n: 0,
            k: 0,
            scheme_name: "test".into(),
            variables: vec![ExcitationIndex::new(vec![1], vec![2]).unwrap()],
            equations: vec![x.mul(&x).mul(&x).add(&c)],
        };
        let a = homotopy_solve_all(&sys, &HomotopyConfig { seed: 7, ..Default::default() });
        let b = homotopy_solve_all(&sys, &HomotopyConfig { seed: 7, ..Default::default() });
        assert_eq!(a.roots.len(), 3);
        assert_eq!(a.roots, b.roots);
    }
}
