//! The two scripted numerical studies: the one-parameter CCS trajectory on
//! the doubly occupied four-orbital model, and the Newton basin
//! perturbation study on random three-in-six Hamiltonians.

use super::eigen::{fci_eigensolve, Eigensystem};
use super::homotopy::{homotopy_solve_all, HomotopyConfig};
use super::newton::{classify_root, newton_solve, NewtonConfig, RootClass};
use crate::ccgen::{generate_residual_system, GeneratedSystem};
use crate::cluster::{amplitudes_from_state, TruncationScheme};
use crate::fock::{FockOperator, SectorBasis, SpinOrbitalBasis};
use nalgebra::DMatrix;
use num::complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use std::sync::Arc;

// ---------------------------------------------------------------------------
// CCS trajectory on the parametrized two-in-four model

/// The parametrized model Hamiltonian: an orthogonalized frame V(eps) from a
/// fixed raw frame, conjugating a fixed spectrum, so the exact eigenvalues
/// are independent of eps.
pub fn build_ccs_hamiltonian(epsilon: f64, gamma: f64) -> FockOperator<f64> {
    let mut raw = DMatrix::zeros(6, 6);
    raw[(0, 0)] = 1.0;
    for c in 1..6 {
        raw[(0, c)] = 1.0 + epsilon;
    }
    for i in 1..5 {
        raw[(i, 0)] = 0.05;
        raw[(i, i)] = 1.0;
    }
    for c in 1..6 {
        raw[(5, c)] = epsilon;
    }
    let qr = raw.qr();
    let mut q = qr.q();
    let r = qr.r();
    // Sign convention: positive R diagonal fixes Q uniquely.
    for i in 0..6 {
        if r[(i, i)] < 0.0 {
            for j in 0..6 {
                q[(j, i)] = -q[(j, i)];
            }
        }
    }
    let spectrum = [
        1.0 / 6.0 - gamma,
        1.0 / 6.0 + gamma,
        2.0 / 6.0,
        3.0 / 6.0,
        4.0 / 6.0,
        5.0 / 6.0,
    ];
    let d = DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(&spectrum));
    // Columns of Q are the eigenvectors; column 0 stays proportional to
    // (1, 0.05, 0.05, 0.05, 0.05, 0) for every eps, so the lowest state is
    // independent of the parameter.
    let h = &q * d * q.transpose();
    let sym = (&h + h.transpose()) * 0.5;
    let sector = Arc::new(SectorBasis::new(SpinOrbitalBasis::new(4, 2).expect("2-in-4")));
    let entries: Vec<Vec<f64>> = (0..6).map(|i| (0..6).map(|j| sym[(i, j)]).collect()).collect();
    FockOperator::from_entries(sector, entries)
}

/// One branch point: CCS amplitudes and the associated energy.
#[derive(Debug, Clone)]
pub struct BranchPoint {
    pub amplitudes: Vec<Complex64>,
    pub energy: Complex64,
}

/// A root branch; it may be born partway through the sweep when roots come
/// in from infinity, and it ends when no census root matches.
#[derive(Debug, Clone)]
pub struct Branch {
    /// Grid index of the first point.
    pub start: usize,
    pub points: Vec<BranchPoint>,
}

impl Branch {
    pub fn point_at(&self, grid_index: usize) -> Option<&BranchPoint> {
        grid_index
            .checked_sub(self.start)
            .filter(|_| self.is_alive_at(grid_index))
            .map(|o| &self.points[o])
    }

    fn is_alive_at(&self, grid_index: usize) -> bool {
        grid_index >= self.start && grid_index < self.start + self.points.len()
    }
}

/// All CCS root branches over the epsilon grid, with the exact spectra.
#[derive(Debug, Clone)]
pub struct CcsTrajectory {
    pub epsilons: Vec<f64>,
    /// Exact eigenvalues (ascending) at each grid point.
    pub fci_spectra: Vec<Vec<f64>>,
    pub branches: Vec<Branch>,
}

fn ccs_system_at(epsilon: f64, gamma: f64) -> (GeneratedSystem<f64>, Eigensystem) {
    let h = build_ccs_hamiltonian(epsilon, gamma);
    let eig = fci_eigensolve(&h);
    (generate_residual_system(&h, &TruncationScheme::ccs(2)), eig)
}

const BRANCH_MATCH_DISTANCE: f64 = 0.5;

fn amp_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Census of the CCS system at one parameter value: roots with energies.
fn ccs_census(epsilon: f64, gamma: f64, seed: u64) -> (Vec<BranchPoint>, Vec<f64>) {
    let (generated, eig) = ccs_system_at(epsilon, gamma);
    let sys = generated.system.to_complex();
    let census = homotopy_solve_all(&sys, &HomotopyConfig { seed, ..Default::default() });
    let energy = generated.energy.to_complex();
    let points = census
        .roots
        .into_iter()
        .map(|r| {
            let e = energy.eval(&r);
            BranchPoint { amplitudes: r, energy: e }
        })
        .collect();
    (points, eig.values)
}

/// Find which root of `next` a root of the current census continues into,
/// refining with censuses at intermediate parameter values when the nearest
/// match is too far away.
fn connect(
    from: &[Complex64],
    eps_from: f64,
    eps_to: f64,
    next: &[BranchPoint],
    gamma: f64,
    seed: u64,
    depth: usize,
) -> Option<usize> {
    let nearest = next
        .iter()
        .enumerate()
        .min_by(|a, b| {
            amp_distance(from, &a.1.amplitudes).total_cmp(&amp_distance(from, &b.1.amplitudes))
        })?
        .0;
    if amp_distance(from, &next[nearest].amplitudes) <= BRANCH_MATCH_DISTANCE {
        return Some(nearest);
    }
    if depth == 0 {
        return None;
    }
    let mid = 0.5 * (eps_from + eps_to);
    let (mid_points, _) = ccs_census(mid, gamma, seed);
    let k = connect(from, eps_from, mid, &mid_points, gamma, seed, depth - 1)?;
    connect(&mid_points[k].amplitudes, mid, eps_to, next, gamma, seed, depth - 1)
}

/// Full root census at every grid point, with branches matched across
/// consecutive parameter values by nearest amplitude distance.
pub fn ccs_trajectory_experiment(gamma: f64, grid: &[f64], seed: u64) -> CcsTrajectory {
    let (points0, spectrum0) = ccs_census(grid[0], gamma, seed);
    let mut fci_spectra = vec![spectrum0];
    let mut branches: Vec<Branch> = points0
        .into_iter()
        .map(|p| Branch { start: 0, points: vec![p] })
        .collect();
    for (g, w) in grid.windows(2).enumerate() {
        let (next, spectrum) = ccs_census(w[1], gamma, seed);
        fci_spectra.push(spectrum);
        let mut taken = vec![false; next.len()];
        for branch in branches.iter_mut() {
            if !branch.is_alive_at(g) {
                continue;
            }
            let from = &branch.points.last().expect("non-empty").amplitudes;
            if let Some(k) = connect(from, w[0], w[1], &next, gamma, seed, 6) {
                if !taken[k] {
                    taken[k] = true;
                    branch.points.push(next[k].clone());
                }
            }
        }
        for (k, point) in next.iter().enumerate() {
            if !taken[k] {
                branches.push(Branch { start: g + 1, points: vec![point.clone()] });
            }
        }
    }
    CcsTrajectory { epsilons: grid.to_vec(), fci_spectra, branches }
}

/// The canonical grid: 81 points covering [0, 8].
pub fn default_epsilon_grid() -> Vec<f64> {
    (0..81).map(|i| i as f64 * 0.1).collect()
}

// ---------------------------------------------------------------------------
// Root-census instances at two-in-four

/// Minimal normalized reference weight over all eigenvectors for a census
/// instance to count as nondegenerate; below it some coupled-cluster root
/// has amplitudes ~ 1/weight and falls outside f64 solver reach.
const CENSUS_WEIGHT_MIN: f64 = 0.05;

/// A random symmetric rational 2-in-4 sector Hamiltonian, redrawn until
/// every eigenvector has a non-negligible reference component.
pub fn census_hamiltonian_2in4(seed: u64) -> FockOperator<f64> {
    let sector = Arc::new(SectorBasis::new(SpinOrbitalBasis::new(4, 2).expect("2-in-4")));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut entries = vec![vec![0.0f64; 6]; 6];
        for i in 0..6 {
            for j in 0..=i {
                // Dyadic rationals in [-1, 1], exactly representable.
                let v = rng.gen_range(-128i64..=128) as f64 / 128.0;
                entries[i][j] = v;
                entries[j][i] = v;
            }
        }
        let h = FockOperator::from_entries(sector.clone(), entries);
        let eig = fci_eigensolve(&h);
        let degenerate = eig.vectors.iter().any(|v| {
            let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v[0].abs() / norm < CENSUS_WEIGHT_MIN
        });
        if !degenerate {
            return h;
        }
    }
}

/// A random symmetric dyadic-rational Hamiltonian on an arbitrary sector;
/// seeded demonstration input for batch runs.
pub fn random_sector_hamiltonian(basis: SpinOrbitalBasis, seed: u64) -> FockOperator<f64> {
    let sector = Arc::new(SectorBasis::new(basis));
    let d = sector.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut entries = vec![vec![0.0f64; d]; d];
    for i in 0..d {
        for j in 0..=i {
            let v = rng.gen_range(-128i64..=128) as f64 / 128.0;
            entries[i][j] = v;
            entries[j][i] = v;
        }
    }
    FockOperator::from_entries(sector, entries)
}

// ---------------------------------------------------------------------------
// Newton perturbation study at three-in-six

/// Standard deviation of the random off-diagonal couplings, small against
/// the diagonal spread so that single-reference instances actually occur in
/// the ensemble.
const OFF_DIAGONAL_SCALE: f64 = 0.15;

/// A random symmetric sector Hamiltonian: diagonal entries spread uniformly
/// over [1, 20], Gaussian off-diagonal couplings, and the direct
/// reference-to-triple coupling removed.
pub fn random_hamiltonian_3in6(rng: &mut ChaCha8Rng) -> FockOperator<f64> {
    let sector = Arc::new(SectorBasis::new(SpinOrbitalBasis::new(6, 3).expect("3-in-6")));
    let d = sector.len();
    let mut entries = vec![vec![0.0f64; d]; d];
    for i in 0..d {
        entries[i][i] = rng.gen_range(1.0..20.0);
        for j in 0..i {
            let v: f64 = rng.sample::<f64, _>(StandardNormal) * OFF_DIAGONAL_SCALE;
            entries[i][j] = v;
            entries[j][i] = v;
        }
    }
    entries[0][d - 1] = 0.0;
    entries[d - 1][0] = 0.0;
    FockOperator::from_entries(sector, entries)
}

/// A random Hamiltonian that passed the single-reference acceptance test.
#[derive(Debug, Clone)]
pub struct AcceptedInstance {
    pub hamiltonian: FockOperator<f64>,
    pub eigensystem: Eigensystem,
    /// Index of the accepted single-reference eigenvector.
    pub target: usize,
    /// Random draws consumed before this instance was found.
    pub draws_used: usize,
    /// Normalized reference weight |v_0| / ||v|| of the target eigenvector.
    pub reference_weight: f64,
}

/// One Newton run from a perturbed start point.
#[derive(Debug, Clone)]
pub struct PerturbationTrial {
    pub converged: bool,
    pub iterations: usize,
    /// Max-norm distance of the converged endpoint to the center root.
    pub distance: f64,
    /// Classification of the converged root; None when not converged.
    pub class: Option<RootClass>,
}

/// Convergence statistics at one perturbation radius.
#[derive(Debug, Clone)]
pub struct PerturbationOutcome {
    pub radius: f64,
    pub attempts: usize,
    /// Newton runs that converged to any root.
    pub successes: usize,
    /// Converged runs that landed on a root other than the center.
    pub other_root: usize,
    /// Other-root convergences whose real energy lies outside the exact
    /// spectrum.
    pub real_unphysical: usize,
    /// Largest iteration count over the converged runs.
    pub max_iterations: usize,
    pub trials: Vec<PerturbationTrial>,
}

impl PerturbationOutcome {
    pub fn rate(&self) -> f64 {
        self.successes as f64 / self.attempts as f64
    }
}

/// The full perturbation study on one accepted random Hamiltonian.
#[derive(Debug, Clone)]
pub struct PerturbationReport {
    pub seed: u64,
    /// Random draws consumed before a Hamiltonian met the acceptance test.
    pub draws_used: usize,
    /// Reference weight |v_0| / ||v|| of the accepted target eigenvector.
    pub reference_weight: f64,
    pub target_energy: f64,
    pub center: Vec<Complex64>,
    pub outcomes: Vec<PerturbationOutcome>,
}

const MAX_DRAWS: usize = 1000;
const REFERENCE_WEIGHT_MIN: f64 = 0.95;
const TRIPLES_MAX: f64 = 0.01;

/// Draw Hamiltonians until some eigenvector is single-reference enough:
/// dominant reference weight and negligible triples amplitude.
pub fn accept_hamiltonian(seed: u64) -> Option<AcceptedInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for draw in 1..=MAX_DRAWS {
        let h = random_hamiltonian_3in6(&mut rng);
        let eig = fci_eigensolve(&h);
        for (target, vector) in eig.vectors.iter().enumerate() {
            let norm: f64 = vector.iter().map(|v| v * v).sum::<f64>().sqrt();
            let weight = vector[0].abs() / norm;
            if weight < REFERENCE_WEIGHT_MIN {
                continue;
            }
            let t = match amplitudes_from_state(vector, &h.sector) {
                Ok(t) => t,
                Err(_) => continue,
            };
            let triples_ok = t
                .variables()
                .iter()
                .zip(t.values())
                .filter(|(mu, _)| mu.rank() == 3)
                .all(|(_, v)| v.abs() <= TRIPLES_MAX);
            if triples_ok {
                return Some(AcceptedInstance {
                    hamiltonian: h,
                    eigensystem: eig,
                    target,
                    draws_used: draw,
                    reference_weight: weight,
                });
            }
        }
    }
    None
}

/// How close a converged Newton endpoint must stay to the center amplitudes
/// to count as a recovery of the same root.
const SAME_ROOT_DISTANCE: f64 = 1e-6;

/// Basin-of-attraction study: perturb the converged CCSD root at fixed radii
/// and count Newton recoveries, recording where the strays go.
pub fn perturbation_experiment(
    seed: u64,
    radii: &[f64],
    samples: usize,
) -> Option<PerturbationReport> {
    let instance = accept_hamiltonian(seed)?;
    let h = &instance.hamiltonian;
    let eig = &instance.eigensystem;
    let scheme = TruncationScheme::ccsd(3);
    let generated = generate_residual_system(h, &scheme);
    let sys = generated.system.to_complex();
    let energy = generated.energy.to_complex();
    let newton_cfg = NewtonConfig::default();
    // Center: exact target-state amplitudes truncated to CCSD, then polished
    // onto the CCSD variety.
    let full = amplitudes_from_state(&eig.vectors[instance.target], &h.sector).ok()?;
    let truncated = full.truncate(scheme);
    let start: Vec<Complex64> =
        truncated.values().iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let polished = newton_solve(&sys, &start, &newton_cfg);
    if !polished.converged {
        return None;
    }
    let center = polished.x;
    let n = center.len();
    let width = eig.width();
    let mut outcomes = Vec::new();
    for &radius in radii {
        let mut outcome = PerturbationOutcome {
            radius,
            attempts: samples,
            successes: 0,
            other_root: 0,
            real_unphysical: 0,
            max_iterations: 0,
            trials: Vec::with_capacity(samples),
        };
        for sample in 0..samples {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ sample as u64);
            let direction: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
            let norm: f64 = direction.iter().map(|v| v * v).sum::<f64>().sqrt();
            let start: Vec<Complex64> = center
                .iter()
                .zip(&direction)
                .map(|(c, d)| c + Complex64::new(radius * d / norm, 0.0))
                .collect();
            let out = newton_solve(&sys, &start, &newton_cfg);
            if !out.converged {
                outcome.trials.push(PerturbationTrial {
                    converged: false,
                    iterations: out.iterations,
                    distance: f64::NAN,
                    class: None,
                });
                continue;
            }
            outcome.successes += 1;
            outcome.max_iterations = outcome.max_iterations.max(out.iterations);
            let distance = out
                .x
                .iter()
                .zip(&center)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            let class = classify_root(&out.x, energy.eval(&out.x), &eig.values, width);
            if distance > SAME_ROOT_DISTANCE {
                outcome.other_root += 1;
                if class == RootClass::RealUnphysical {
                    outcome.real_unphysical += 1;
                }
            }
            outcome.trials.push(PerturbationTrial {
                converged: true,
                iterations: out.iterations,
                distance,
                class: Some(class),
            });
        }
        outcomes.push(outcome);
    }
    Some(PerturbationReport {
        seed,
        draws_used: instance.draws_used,
        reference_weight: instance.reference_weight,
        target_energy: eig.values[instance.target],
        center,
        outcomes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn model_spectrum_constant_in_epsilon() {
        let gamma = 1.0 / 12.0;
        let expect = [1.0 / 12.0, 0.25, 1.0 / 3.0, 0.5, 2.0 / 3.0, 5.0 / 6.0];
        for eps in [0.0, 0.7, 3.2, 8.0] {
            let h = build_ccs_hamiltonian(eps, gamma);
            let eig = fci_eigensolve(&h);
            for (got, want) in eig.values.iter().zip(expect) {
                assert!((got - want).abs() < 1e-10, "eps={eps}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn model_is_symmetric() {
        let h = build_ccs_hamiltonian(1.3, 1.0 / 12.0);
        for i in 0..6 {
            for j in 0..6 {
                assert!((h.entry(i, j) - h.entry(j, i)).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn random_hamiltonian_shape() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let h = random_hamiltonian_3in6(&mut rng);
        assert_eq!(h.dim(), 20);
        assert_eq!(*h.entry(0, 19), 0.0);
        for i in 0..20 {
            for j in 0..20 {
                assert_eq!(h.entry(i, j), h.entry(j, i));
            }
        }
    }
}
