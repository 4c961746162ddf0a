//! Helpers shared by the integration test suites.

use ccpoly::fock::{
    hamiltonian_from_integrals, FockOperator, IntegralConvention, IntegralSet, SpinOrbitalBasis,
};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A random Hamiltonian with genuine one- plus two-body structure: several
/// support and polytope statements rely on the interaction de-exciting by at
/// most two ranks, which an arbitrary sector matrix does not respect.
pub fn random_two_body_hamiltonian(b: SpinOrbitalBasis, seed: u64) -> FockOperator<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = b.k;
    let mut h = vec![0.0f64; k * k];
    for p in 0..k {
        for q in 0..=p {
            let x = rng.gen_range(-1.0..1.0);
            h[p * k + q] = x;
            h[q * k + p] = x;
        }
    }
    let mut v = vec![0.0f64; k * k * k * k];
    let idx = |p: usize, q: usize, r: usize, s: usize| ((p * k + q) * k + r) * k + s;
    for p in 0..k {
        for q in 0..k {
            for r in 0..k {
                for s in 0..k {
                    if v[idx(p, q, r, s)] != 0.0 {
                        continue;
                    }
                    let x = rng.gen_range(-1.0..1.0);
                    // Real-orbital chemist symmetry (pq|rs) = (qp|sr) = (rs|pq).
                    for (a, c, e, f) in [
                        (p, q, r, s),
                        (q, p, s, r),
                        (r, s, p, q),
                        (s, r, q, p),
                        (p, q, s, r),
                        (q, p, r, s),
                        (r, s, q, p),
                        (s, r, p, q),
                    ] {
                        v[idx(a, c, e, f)] = x;
                    }
                }
            }
        }
    }
    let ints = IntegralSet::new(k, IntegralConvention::Chemist, h, v).expect("sized");
    hamiltonian_from_integrals(&ints, b).expect("within cap")
}
