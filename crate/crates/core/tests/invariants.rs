//! Structural invariants checked across random inputs: operator algebra,
//! residual generation, polytope geometry, and solver determinism.

use ccpoly::ccgen::{generate_residual_system, newton_polytope, surrogate_generators, SurrogateKind};
use ccpoly::cluster::{
    amplitudes_from_state, cc_energy, cluster_matrix, residual_exact, scheme_variables,
    ClusterAmplitudes, TruncationScheme,
};
use ccpoly::fock::{
    enumerate_excitations, excited_determinant, FockOperator, SectorBasis, SpinOrbitalBasis,
};
use ccpoly::polytope::{convex_hull, f_vector, mixed_volume, LatticePolytope};
use ccpoly::solve::{fci_eigensolve, homotopy_solve_all, HomotopyConfig};
use num::BigInt;
use proptest::prelude::*;
use std::sync::Arc;

mod common;
use common::random_two_body_hamiltonian;

fn basis(k: usize, n: usize) -> SpinOrbitalBasis {
    SpinOrbitalBasis::new(k, n).expect("valid sector")
}

fn sector(k: usize, n: usize) -> Arc<SectorBasis> {
    Arc::new(SectorBasis::new(basis(k, n)))
}

fn transpose(op: &FockOperator<f64>) -> FockOperator<f64> {
    let d = op.dim();
    let entries: Vec<Vec<f64>> =
        (0..d).map(|r| (0..d).map(|c| *op.entry(c, r)).collect()).collect();
    FockOperator::from_entries(op.sector.clone(), entries)
}

fn unit_excitation_matrix(
    s: &Arc<SectorBasis>,
    mu: &ccpoly::fock::ExcitationIndex,
) -> FockOperator<f64> {
    let n = s.basis.n;
    let mut t = ClusterAmplitudes::zero(s.basis, TruncationScheme::full(n));
    t.set(mu, 1.0).expect("admitted");
    cluster_matrix(&t, s)
}

// --- Fock-space operator algebra ---------------------------------------

#[test]
fn excitations_enumerate_nonreference_determinants_once() {
    for (k, n) in [(4usize, 2usize), (6, 3), (5, 2)] {
        let b = basis(k, n);
        let excitations = enumerate_excitations(b, n);
        let mut images: Vec<Vec<usize>> = excitations
            .iter()
            .map(|mu| excited_determinant(mu, n).orbitals().to_vec())
            .collect();
        images.sort();
        let before = images.len();
        images.dedup();
        assert_eq!(images.len(), before, "duplicate image at ({k},{n})");
        assert_eq!(images.len(), b.sector_dim() - 1, "missed determinants at ({k},{n})");
        assert!(!images.contains(&(1..=n).collect::<Vec<_>>()), "reference hit at ({k},{n})");
    }
}

#[test]
fn disjoint_excitation_adjoint_commutators_vanish() {
    for (k, n) in [(4usize, 2usize), (6, 3)] {
        let s = sector(k, n);
        let excitations = enumerate_excitations(s.basis, n);
        for mu in &excitations {
            for nu in &excitations {
                let disjoint = mu
                    .occupied()
                    .iter()
                    .chain(mu.virtuals())
                    .all(|i| !nu.occupied().contains(i) && !nu.virtuals().contains(i));
                if !disjoint {
                    continue;
                }
                let x = unit_excitation_matrix(&s, mu);
                let y = transpose(&unit_excitation_matrix(&s, nu));
                let commutator = x.matmul(&y).sub(&y.matmul(&x));
                assert!(
                    commutator.is_zero(),
                    "[X_{mu:?}, X_{nu:?}^+] != 0 at ({k},{n})"
                );
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cluster_matrices_are_nilpotent(values in proptest::collection::vec(-2.0f64..2.0, 5)) {
        let s = sector(4, 2);
        let t = ClusterAmplitudes::from_values(s.basis, TruncationScheme::full(2), values);
        let m = cluster_matrix(&t, &s);
        // T^(N+1) = 0 exactly in the N-particle sector.
        let cube = m.matmul(&m).matmul(&m);
        prop_assert!(cube.is_zero());
    }

    #[test]
    fn truncation_keeps_admitted_values(values in proptest::collection::vec(-2.0f64..2.0, 5)) {
        let b = basis(4, 2);
        let full = ClusterAmplitudes::from_values(b, TruncationScheme::full(2), values);
        let ccs = full.truncate(TruncationScheme::ccs(2));
        prop_assert_eq!(ccs.variables().len(), 4);
        for mu in ccs.variables().to_vec() {
            prop_assert_eq!(ccs.get(&mu).unwrap(), full.get(&mu).unwrap());
        }
    }
}

// --- Cluster analysis against the eigensolver --------------------------

#[test]
fn cc_energy_is_the_rayleigh_quotient_on_eigenvectors() {
    for (k, n) in [(4usize, 2usize), (6, 3)] {
        let s = sector(k, n);
        let h = random_two_body_hamiltonian(s.basis, 31 + k as u64);
        let eig = fci_eigensolve(&h);
        let mut checked = 0;
        for (value, vector) in eig.values.iter().zip(&eig.vectors) {
            if vector[0].abs() <= 1e-8 {
                continue;
            }
            let t = amplitudes_from_state(vector, &s).expect("nonzero overlap");
            assert!((cc_energy(&h, &t) - value).abs() <= 1e-8, "energy off at ({k},{n})");
            let full = TruncationScheme::full(n);
            let residual = residual_exact(&h, &t, &full);
            let worst = residual.iter().fold(0.0f64, |a, x| a.max(x.abs()));
            // Rounding in the residual grows with the amplitude magnitudes,
            // which scale as the inverse reference weight of the eigenvector.
            let tmax = t.values().iter().fold(0.0f64, |a, x| a.max(x.abs()));
            let tolerance = 1e-10 * (1.0 + tmax).powi(3);
            assert!(
                worst <= tolerance,
                "FULL residual {worst:e} > {tolerance:e} at eigenvector, ({k},{n})"
            );
            checked += 1;
        }
        assert!(checked >= 2, "too few eigenvectors with reference overlap at ({k},{n})");
    }
}

#[test]
fn deexcitation_rule_holds_on_intermediates() {
    // <Phi_mu, T H T^m Phi_0> = t_mu <Phi_0, H T^m Phi_0> for singles mu.
    let mut rng_state = 0x9e3779b97f4a7c15u64;
    let mut next = move || {
        rng_state = rng_state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (rng_state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    };
    for (k, n) in [(4usize, 2usize), (6, 3)] {
        let s = sector(k, n);
        let h = random_two_body_hamiltonian(s.basis, 47 + k as u64);
        let nvars = scheme_variables(s.basis, &TruncationScheme::full(n)).len();
        for _ in 0..10 {
            let values: Vec<f64> = (0..nvars).map(|_| next()).collect();
            let t = ClusterAmplitudes::from_values(s.basis, TruncationScheme::full(n), values);
            let m = cluster_matrix(&t, &s);
            let mut w = vec![0.0; s.len()];
            w[0] = 1.0;
            for _ in 0..=2 {
                let u = h.apply(&w);
                let projected = m.apply(&u);
                for (mu, value) in t.variables().iter().zip(t.values()) {
                    if mu.rank() != 1 {
                        continue;
                    }
                    let i = s.position_of_excitation(mu).expect("in sector");
                    let lhs = projected[i];
                    let rhs = value * u[0];
                    assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + rhs.abs()));
                }
                w = m.apply(&w); // advance T^m Phi_0
            }
        }
    }
}

// --- Generated systems -------------------------------------------------

#[test]
fn degrees_respect_truncation_caps() {
    for (k, n) in [(4usize, 2usize), (6, 3)] {
        let h = random_two_body_hamiltonian(basis(k, n), 63 + k as u64);
        let generated = generate_residual_system(&h, &TruncationScheme::ccsd(n));
        for (mu, eq) in generated.system.variables.iter().zip(&generated.system.equations) {
            let degree = eq
                .support()
                .iter()
                .map(|e| e.iter().sum::<u32>())
                .max()
                .unwrap_or(0) as usize;
            assert!(degree <= (mu.rank() + 2).min(4), "degree {degree} for rank {}", mu.rank());
        }
    }
}

#[test]
fn cubic_and_quartic_terms_have_the_claimed_shapes() {
    // Cubic monomials of singles equations factor as xyz or x^2 y over
    // distinct singles; quartic monomials of doubles equations live entirely
    // on singles with multiplicity pattern wxyz, x^2 yz, or x^2 y^2. Every
    // such pattern is a convex combination of x^2 y^2 points, so the doubles
    // surrogate polytope needs only the squared pairs among its generators.
    for (k, n) in [(4usize, 2usize), (6, 3)] {
        let h = random_two_body_hamiltonian(basis(k, n), 71 + k as u64);
        let generated = generate_residual_system(&h, &TruncationScheme::ccsd(n));
        let ranks: Vec<usize> =
            generated.system.variables.iter().map(|mu| mu.rank()).collect();
        for (mu, eq) in generated.system.variables.iter().zip(&generated.system.equations) {
            for e in eq.support() {
                let degree: u32 = e.iter().sum();
                let on_doubles: u32 = e
                    .iter()
                    .zip(&ranks)
                    .filter(|(_, r)| **r == 2)
                    .map(|(x, _)| *x)
                    .sum();
                let mut singles_pattern: Vec<u32> = e
                    .iter()
                    .zip(&ranks)
                    .filter(|(x, r)| **x > 0 && **r == 1)
                    .map(|(x, _)| *x)
                    .collect();
                singles_pattern.sort();
                match (mu.rank(), degree) {
                    (1, 3) => {
                        assert_eq!(on_doubles, 0, "cubic singles term touches a double");
                        assert!(
                            singles_pattern == [1, 1, 1] || singles_pattern == [1, 2],
                            "cubic shape {singles_pattern:?}"
                        );
                    }
                    (2, 4) => {
                        assert_eq!(on_doubles, 0, "quartic doubles term touches a double");
                        assert!(
                            singles_pattern == [1, 1, 1, 1]
                                || singles_pattern == [1, 1, 2]
                                || singles_pattern == [2, 2],
                            "quartic shape {singles_pattern:?}"
                        );
                    }
                    _ => {}
                }
            }
        }
    }
}

// --- Polytope geometry -------------------------------------------------

fn small_point_sets(dim: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    proptest::collection::vec(proptest::collection::vec(0i64..5, dim), 4..10)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn hull_is_idempotent(points in small_point_sets(3)) {
        let p = convex_hull(&points).unwrap();
        let q = convex_hull(&p.vertices).unwrap();
        prop_assert_eq!(&p.vertices, &q.vertices);
        prop_assert_eq!(p.volume(), q.volume());
        prop_assert_eq!(&p.facets, &q.facets);
    }

    #[test]
    fn vertices_are_tight_on_enough_facets(points in small_point_sets(3)) {
        let p = convex_hull(&points).unwrap();
        prop_assume!(p.affine_dim == p.ambient_dim);
        for (v, _) in p.vertices.iter().enumerate() {
            let tight = p.incidence.iter().filter(|facet| facet.contains(&v)).count();
            prop_assert!(tight >= p.affine_dim, "vertex {v} tight on {tight} facets");
        }
    }

    #[test]
    fn euler_relation_holds(points in small_point_sets(3)) {
        let p = convex_hull(&points).unwrap();
        prop_assume!(p.affine_dim == p.ambient_dim);
        let fv = f_vector(&p).unwrap();
        let alternating: i64 = fv
            .0
            .iter()
            .enumerate()
            .map(|(i, &c)| if i % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum();
        let d = p.affine_dim as i64;
        prop_assert_eq!(alternating, 1 - (-1i64).pow(d as u32));
    }

    #[test]
    fn mixed_volume_is_symmetric_and_monotone(
        a in small_point_sets(3),
        b in small_point_sets(3),
        c in small_point_sets(3),
        extra in proptest::collection::vec(0i64..5, 3),
    ) {
        let pa = convex_hull(&a).unwrap();
        let pb = convex_hull(&b).unwrap();
        let pc = convex_hull(&c).unwrap();
        let forward = mixed_volume(&[pa.clone(), pb.clone(), pc.clone()]).unwrap();
        let shuffled = mixed_volume(&[pc.clone(), pa.clone(), pb.clone()]).unwrap();
        prop_assert_eq!(&forward, &shuffled);

        let mut enlarged_points = a.clone();
        enlarged_points.push(extra);
        let enlarged = convex_hull(&enlarged_points).unwrap();
        let bigger = mixed_volume(&[enlarged, pb, pc]).unwrap();
        prop_assert!(bigger >= forward);
    }
}

#[test]
fn surrogate_mixed_volume_sandwich() {
    // Actual 2-in-4 CCSD mixed volume <= mixed volume of the surrogate
    // copies <= n_vars! times the volume of the doubles surrogate.
    let b = basis(4, 2);
    let h = random_two_body_hamiltonian(b, 83);
    let generated = generate_residual_system(&h, &TruncationScheme::ccsd(2));
    let actual: Vec<LatticePolytope> = generated
        .system
        .equations
        .iter()
        .map(|f| newton_polytope(f).expect("within caps"))
        .collect();
    let actual_mv = mixed_volume(&actual).expect("well-posed");

    let ns = convex_hull(&surrogate_generators(b, SurrogateKind::Singles)).unwrap();
    let nd = convex_hull(&surrogate_generators(b, SurrogateKind::Doubles)).unwrap();
    let copies = vec![ns.clone(), ns.clone(), ns.clone(), ns, nd.clone()];
    let surrogate_mv = mixed_volume(&copies).expect("well-posed");
    assert!(actual_mv <= surrogate_mv, "{actual_mv} > {surrogate_mv}");

    let factorial = BigInt::from(120);
    let vol = nd.volume();
    let bound_num = factorial * vol.numer();
    let upper = bound_num / vol.denom();
    assert!(surrogate_mv <= upper, "{surrogate_mv} > {upper}");
}

// --- Solver determinism ------------------------------------------------

#[test]
fn homotopy_census_is_deterministic() {
    let h = random_two_body_hamiltonian(basis(4, 2), 97);
    let sys = generate_residual_system(&h, &TruncationScheme::ccsd(2)).system.to_complex();
    let config = HomotopyConfig { seed: 17, ..Default::default() };
    let first = homotopy_solve_all(&sys, &config);
    let second = homotopy_solve_all(&sys, &config);
    assert_eq!(first.roots.len(), second.roots.len());
    for (a, b) in first.roots.iter().zip(&second.roots) {
        assert_eq!(a, b, "roots differ between identical runs");
    }
}
