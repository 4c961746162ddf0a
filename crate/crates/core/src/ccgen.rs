//! Symbolic generation of the projected coupled-cluster residual systems
//! f_mu(t) = <Phi_mu, e^{-T} H e^{T} Phi_0> = 0, plus the root-count
//! machinery built on them: Bezout-style bounds, Newton polytopes,
//! surrogate polytopes with their inclusion lemmas, and the quadratic
//! reformulation of the 2-in-4 system.

use crate::cluster::{scheme_variables, TruncationScheme};
use crate::fock::{ExcitationIndex, FockOperator, SectorBasis, SpinOrbitalBasis};
use crate::poly::{Poly, PolynomialSystem};
use crate::polytope::{convex_hull, convex_membership, LatticePolytope, PolytopeError};
use crate::scalar::{Rational, Scalar};
use num::BigInt;

/// The residual system together with the energy polynomial E(t) = f_0(t).
#[derive(Debug, Clone)]
pub struct GeneratedSystem<S> {
    pub system: PolynomialSystem<S>,
    pub energy: Poly<S>,
}

/// Apply T = sum_mu t_mu X_mu symbolically to a sector vector of polynomials.
fn apply_cluster_symbolic<S: Scalar>(
    vars: &[ExcitationIndex],
    sector: &SectorBasis,
    v: &[Poly<S>],
) -> Vec<Poly<S>> {
    let nv = vars.len();
    let mut out = vec![Poly::zero(nv); sector.len()];
    for (vi, mu) in vars.iter().enumerate() {
        let tvar = Poly::<S>::variable(vi, nv);
        for (j, vj) in v.iter().enumerate() {
            if vj.is_zero() {
                continue;
            }
            if let Some((i, phase)) = sector.excite_basis_state(mu, j) {
                let mut term = tvar.mul(vj);
                if phase < 0 {
                    term = term.scale(&-S::one());
                }
                out[i] = out[i].add(&term);
            }
        }
    }
    out
}

/// exp(sign * T) applied symbolically; the series terminates at order N.
fn exp_cluster_symbolic<S: Scalar>(
    vars: &[ExcitationIndex],
    sector: &SectorBasis,
    v: &[Poly<S>],
    negate: bool,
) -> Vec<Poly<S>> {
    let n = sector.basis.n;
    let mut acc: Vec<Poly<S>> = v.to_vec();
    let mut power: Vec<Poly<S>> = v.to_vec();
    let mut factorial: i64 = 1;
    for k in 1..=n {
        power = apply_cluster_symbolic(vars, sector, &power);
        factorial *= k as i64;
        let sign = if negate && k % 2 == 1 { -1 } else { 1 };
        let coeff = S::from_ratio(sign, factorial);
        for (a, p) in acc.iter_mut().zip(&power) {
            *a = a.add(&p.scale(&coeff));
        }
    }
    acc
}

/// Build the square residual system for the given truncation scheme from a
/// numeric sector Hamiltonian, by symbolic similarity transformation.
pub fn generate_residual_system<S: Scalar>(
    h: &FockOperator<S>,
    scheme: &TruncationScheme,
) -> GeneratedSystem<S> {
    let sector = h.sector.clone();
    let basis = sector.basis;
    let vars = scheme_variables(basis, scheme);
    let nv = vars.len();
    let dim = sector.len();
    let mut e0 = vec![Poly::zero(nv); dim];
    e0[0] = Poly::constant(nv, S::one());
    let u = exp_cluster_symbolic(&vars, &sector, &e0, false);
    // w = H u, numeric matrix times polynomial vector.
    let mut w = vec![Poly::zero(nv); dim];
    for (i, wi) in w.iter_mut().enumerate() {
        for (j, uj) in u.iter().enumerate() {
            let hij = h.entry(i, j);
            if !hij.clone().prune() && !uj.is_zero() {
                *wi = wi.add(&uj.scale(hij));
            }
        }
    }
    let z = exp_cluster_symbolic(&vars, &sector, &w, true);
    let equations = vars
        .iter()
        .map(|mu| z[sector.position_of_excitation(mu).expect("scheme variable")].clone())
        .collect();
    GeneratedSystem {
        system: PolynomialSystem {
            n: basis.n,
            k: basis.k,
            scheme_name: scheme.to_string(),
            variables: vars,
            equations,
        },
        energy: z[0].clone(),
    }
}

/// Per-equation (variable label, term count, total degree).
pub fn system_counts<S: Scalar>(sys: &PolynomialSystem<S>) -> Vec<(String, usize, u32)> {
    sys.variables
        .iter()
        .zip(&sys.equations)
        .map(|(mu, f)| (mu.to_string(), f.num_terms(), f.degree()))
        .collect()
}

// ---------------------------------------------------------------------------
// Root-count bounds

/// Numbers of singles and doubles amplitudes for the CCSD system at (N, K).
pub fn amplitude_counts(basis: SpinOrbitalBasis) -> (usize, usize) {
    let n = basis.n;
    let v = basis.k - basis.n;
    (n * v, n * (n - 1) / 2 * (v * (v - 1) / 2))
}

/// Product-of-degrees root bounds for the CCSD residual system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BezoutBounds {
    /// All equations taken at the generic degree cap 4: 4^(n_s + n_d).
    pub naive: BigInt,
    /// Degree-3 singles equations: 3^(n_s) 4^(n_d).
    pub refined: BigInt,
    /// Multilinear bound of the quadratic reformulation: 2^(n_s + 2 n_d).
    pub quadratic: BigInt,
}

pub fn bezout_bounds(n_singles: usize, n_doubles: usize) -> BezoutBounds {
    let pow = |b: i64, e: usize| num::pow::pow(BigInt::from(b), e);
    BezoutBounds {
        naive: pow(4, n_singles + n_doubles),
        refined: pow(3, n_singles) * pow(4, n_doubles),
        quadratic: pow(2, n_singles + 2 * n_doubles),
    }
}

/// Newton polytope of a polynomial: the hull of its exponent support.
pub fn newton_polytope<S: Scalar>(f: &Poly<S>) -> Result<LatticePolytope, PolytopeError> {
    let pts: Vec<Vec<i64>> = f
        .support()
        .iter()
        .map(|e| e.iter().map(|&x| x as i64).collect())
        .collect();
    convex_hull(&pts)
}

// ---------------------------------------------------------------------------
// Surrogate supports

/// The structural monomial families appearing in CCSD residuals. Coordinates
/// follow the canonical CCSD variable order: n_s singles then n_d doubles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurrogateClass {
    S1,
    S2,
    S3,
    S4,
    S5,
    S6,
    S7,
    D1,
    D2,
    D3,
    D4,
    D5,
    D6,
    D7,
    D8,
    D9,
    D10,
    D11,
    D12,
}

/// Which surrogate polytope: the one dominating singles residual supports or
/// the one dominating doubles residual supports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurrogateKind {
    Singles,
    Doubles,
}

fn unit(nv: usize, i: usize) -> Vec<i64> {
    let mut e = vec![0i64; nv];
    e[i] = 1;
    e
}

fn sum_points(nv: usize, parts: &[&[i64]]) -> Vec<i64> {
    let mut out = vec![0i64; nv];
    for p in parts {
        for (o, v) in out.iter_mut().zip(*p) {
            *o += v;
        }
    }
    out
}

/// Exponent vectors of one structural class at (N, K).
pub fn surrogate_set(basis: SpinOrbitalBasis, class: SurrogateClass) -> Vec<Vec<i64>> {
    let (ns, nd) = amplitude_counts(basis);
    let nv = ns + nd;
    let singles: Vec<usize> = (0..ns).collect();
    let doubles: Vec<usize> = (ns..nv).collect();
    let mut out = Vec::new();
    use SurrogateClass::*;
    match class {
        S1 | D4 => {
            for &i in &singles {
                out.push(unit(nv, i));
            }
        }
        S2 | D1 => {
            for &j in &doubles {
                out.push(unit(nv, j));
            }
        }
        S3 | D5 => {
            for a in 0..ns {
                for b in a + 1..ns {
                    out.push(sum_points(nv, &[&unit(nv, a), &unit(nv, b)]));
                }
            }
        }
        S4 | D6 => {
            for &i in &singles {
                for &j in &doubles {
                    out.push(sum_points(nv, &[&unit(nv, i), &unit(nv, j)]));
                }
            }
        }
        S5 | D8 => {
            for a in 0..ns {
                for b in a + 1..ns {
                    for c in b + 1..ns {
                        out.push(sum_points(nv, &[&unit(nv, a), &unit(nv, b), &unit(nv, c)]));
                    }
                }
            }
        }
        S6 | D10 => {
            for &i in &singles {
                out.push(sum_points(nv, &[&unit(nv, i), &unit(nv, i)]));
            }
        }
        S7 => {
            for &i in &singles {
                for &ip in &singles {
                    if i != ip {
                        out.push(sum_points(nv, &[&unit(nv, i), &unit(nv, i), &unit(nv, ip)]));
                    }
                }
            }
        }
        D2 => {
            for a in 0..nd {
                for b in a + 1..nd {
                    out.push(sum_points(nv, &[&unit(nv, ns + a), &unit(nv, ns + b)]));
                }
            }
        }
        D3 => {
            for &j in &doubles {
                out.push(sum_points(nv, &[&unit(nv, j), &unit(nv, j)]));
            }
        }
        D7 => {
            for a in 0..ns {
                for b in a + 1..ns {
                    for &j in &doubles {
                        out.push(sum_points(nv, &[&unit(nv, a), &unit(nv, b), &unit(nv, j)]));
                    }
                }
            }
        }
        D9 => {
            for a in 0..ns {
                for b in a + 1..ns {
                    for c in b + 1..ns {
                        for d in c + 1..ns {
                            out.push(sum_points(
                                nv,
                                &[&unit(nv, a), &unit(nv, b), &unit(nv, c), &unit(nv, d)],
                            ));
                        }
                    }
                }
            }
        }
        D11 => {
            for &i in &singles {
                for &j in &doubles {
                    out.push(sum_points(nv, &[&unit(nv, i), &unit(nv, i), &unit(nv, j)]));
                }
            }
        }
        D12 => {
            for a in 0..ns {
                for b in a + 1..ns {
                    out.push(sum_points(
                        nv,
                        &[&unit(nv, a), &unit(nv, a), &unit(nv, b), &unit(nv, b)],
                    ));
                }
            }
        }
    }
    out
}

/// Generators (not hull-reduced) of the surrogate polytope dominating the
/// singles or doubles residual supports.
pub fn surrogate_generators(basis: SpinOrbitalBasis, kind: SurrogateKind) -> Vec<Vec<i64>> {
    let (ns, nd) = amplitude_counts(basis);
    let mut out = vec![vec![0i64; ns + nd]];
    let classes: &[SurrogateClass] = match kind {
        SurrogateKind::Singles => {
            &[SurrogateClass::S2, SurrogateClass::S4, SurrogateClass::S6, SurrogateClass::S7]
        }
        SurrogateKind::Doubles => {
            &[SurrogateClass::D3, SurrogateClass::D10, SurrogateClass::D11, SurrogateClass::D12]
        }
    };
    for &c in classes {
        out.extend(surrogate_set(basis, c));
    }
    out.sort();
    out.dedup();
    out
}

/// Is every query point inside the convex hull of the generators? Pure LP
/// membership, so it stays exact in high ambient dimension.
pub fn points_in_hull(generators: &[Vec<i64>], queries: &[Vec<i64>]) -> bool {
    let gens: Vec<Vec<Rational>> = generators
        .iter()
        .map(|p| p.iter().map(|&c| Rational::from_ratio(c, 1)).collect())
        .collect();
    queries.iter().all(|q| {
        let qr: Vec<Rational> = q.iter().map(|&c| Rational::from_ratio(c, 1)).collect();
        convex_membership(&gens, &qr)
    })
}

/// One verified structural inclusion between surrogate classes.
#[derive(Debug, Clone)]
pub struct InclusionLemma {
    pub statement: String,
    pub holds: bool,
}

/// Check the reduction lemmas that let the surrogate polytopes be generated
/// by their few extremal classes. Classes that are empty at small (N, K)
/// give vacuously true inclusions.
pub fn verify_inclusion_lemmas(basis: SpinOrbitalBasis) -> Vec<InclusionLemma> {
    use SurrogateClass::*;
    let (ns, nd) = amplitude_counts(basis);
    let origin = vec![vec![0i64; ns + nd]];
    let set = |cs: &[SurrogateClass], with_origin: bool| -> Vec<Vec<i64>> {
        let mut pts = if with_origin { origin.clone() } else { Vec::new() };
        for &c in cs {
            pts.extend(surrogate_set(basis, c));
        }
        pts
    };
    let mut out = Vec::new();
    let mut check = |name: &str, lhs: &[SurrogateClass], rhs: &[SurrogateClass], orig: bool| {
        let holds = points_in_hull(&set(rhs, orig), &set(lhs, false));
        out.push(InclusionLemma { statement: name.to_string(), holds });
    };
    check("S1 in conv(S6, 0)", &[S1], &[S6], true);
    check("S3 in conv(S6)", &[S3], &[S6], false);
    check("S5 in conv(S7)", &[S5], &[S7], false);
    check("S2 in conv(D3, 0)", &[S2], &[D3], true);
    check("S4 in conv(D3, D10)", &[S4], &[D3, D10], false);
    check("S7 in conv(D10, D12)", &[S7], &[D10, D12], false);
    check("D1 in conv(D3, 0)", &[D1], &[D3], true);
    check("D2 in conv(D3)", &[D2], &[D3], false);
    check("D4 in conv(D10, 0)", &[D4], &[D10], true);
    check("D5 in conv(D10)", &[D5], &[D10], false);
    check("D6 in conv(D3, D10)", &[D6], &[D3, D10], false);
    check("D7 in conv(D3, D12)", &[D7], &[D3, D12], false);
    check("D8 in conv(D10, D12)", &[D8], &[D10, D12], false);
    check("D9 in conv(D12)", &[D9], &[D12], false);
    let s6 = surrogate_set(basis, S6);
    let d10 = surrogate_set(basis, D10);
    out.push(InclusionLemma { statement: "S6 = D10".to_string(), holds: s6 == d10 });
    out
}

// ---------------------------------------------------------------------------
// Quadratic reformulation of the 2-in-4 system

/// Alternative amplitude ordering for the minimal doubly occupied case:
/// (t_2^3, t_2^4, t_1^3, t_1^4, t_5) relative to the canonical
/// (t_1^3, t_1^4, t_2^3, t_2^4, t_5); entry j gives the canonical index.
pub const VAR_PERM: [usize; 5] = [2, 3, 0, 1, 4];
/// Sector-basis reordering for the same convention: position j of the
/// reordered basis is canonical position BASIS_PERM[j].
pub const BASIS_PERM: [usize; 6] = [0, 3, 4, 1, 2, 5];

/// The 2-in-4 residual system written as f_i = v^T A_i v over the extended
/// coordinate vector v = (1, t, x6) with one auxiliary bilinear coordinate.
#[derive(Debug, Clone)]
pub struct QuadraticForm2in4<S> {
    /// Five 7x7 matrices in the reordered equation convention.
    pub matrices: Vec<Vec<Vec<S>>>,
}

/// Build the quadratic reformulation from a 2-in-4 sector Hamiltonian.
pub fn quadratic_form_2in4<S: Scalar>(h: &FockOperator<S>) -> QuadraticForm2in4<S> {
    assert_eq!(h.basis(), SpinOrbitalBasis::new(4, 2).expect("2-in-4"));
    // Row j of the reordered Hamiltonian, extended so that r_j . v = R_j,
    // the coefficient of basis state j in H e^T Phi_0.
    let r: Vec<Vec<S>> = (0..6)
        .map(|j| {
            let mut row: Vec<S> =
                (0..6).map(|k| h.entry(BASIS_PERM[j], BASIS_PERM[k]).clone()).collect();
            let last = -row[5].clone();
            row.push(last);
            row
        })
        .collect();
    let zero_row = || vec![S::zero(); 7];
    let neg = |row: &Vec<S>| -> Vec<S> { row.iter().map(|x| -x.clone()).collect() };
    let mut matrices = Vec::with_capacity(5);
    for i in 1..=4 {
        // f_i = R_i - t_i R_0: project, then subtract the energy coupling.
        let mut m: Vec<Vec<S>> = (0..7).map(|_| zero_row()).collect();
        m[0] = r[i].clone();
        m[i] = neg(&r[0]);
        matrices.push(m);
    }
    let m5 = vec![
        r[5].clone(),
        r[4].clone(),
        neg(&r[3]),
        neg(&r[2]),
        r[1].clone(),
        neg(&r[0]),
        neg(&r[0]),
    ];
    matrices.push(m5);
    QuadraticForm2in4 { matrices }
}

impl<S: Scalar> QuadraticForm2in4<S> {
    /// Lift canonical amplitudes onto the quadratic variety:
    /// v = (1, t reordered, x6) with x6 = t_2^3 t_1^4 - t_1^3 t_2^4.
    pub fn lift(t: &[S]) -> Vec<S> {
        assert_eq!(t.len(), 5);
        let mut v = vec![S::one()];
        for &p in &VAR_PERM {
            v.push(t[p].clone());
        }
        v.push(t[2].clone() * t[1].clone() - t[0].clone() * t[3].clone());
        v
    }

    /// Residuals in the canonical equation order, evaluated as v^T A_i v.
    pub fn residuals(&self, t: &[S]) -> Vec<S> {
        let v = Self::lift(t);
        (0..5)
            .map(|c| {
                let a = &self.matrices[VAR_PERM[c]];
                let mut acc = S::zero();
                for (i, row) in a.iter().enumerate() {
                    for (j, x) in row.iter().enumerate() {
                        acc = acc + v[i].clone() * x.clone() * v[j].clone();
                    }
                }
                acc
            })
            .collect()
    }
}
