//! Exact lattice-polytope computations: hulls, faces, f-vectors, facet
//! graphs, Minkowski sums, volumes, and mixed volumes.

mod hull;
mod lp;

pub use lp::convex_membership;

use crate::scalar::{Rational, Scalar};
use num::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PolytopeError {
    #[error("empty point set")]
    EmptyInput,
    #[error("ambient dimension {n} exceeds the hard cap of {cap}")]
    DimensionCap { n: usize, cap: usize },
    #[error("ambient dimensions differ: {a} vs {b}")]
    DimensionMismatch { a: usize, b: usize },
    #[error("facet count {count} exceeds the face-lattice cap of {cap}")]
    FacetCap { count: usize, cap: usize },
    #[error("mixed volume needs {n} full-dimensional-ambient polytopes in R^{n}, got {got}")]
    MixedVolumeArity { n: usize, got: usize },
}

const DIM_CAP: usize = 10;
const FACET_CAP: usize = 64;
const MIXED_VOLUME_CAP: usize = 6;

/// Integer-point V-representation with derived exact H-representation.
#[derive(Debug, Clone)]
pub struct LatticePolytope {
    pub ambient_dim: usize,
    pub affine_dim: usize,
    /// Deduplicated input points.
    pub generators: Vec<Vec<i64>>,
    /// Hull-reduced subset, sorted lexicographically.
    pub vertices: Vec<Vec<i64>>,
    /// Homogeneous facet rows [b, a_1..a_n] meaning b + a.x >= 0, primitive;
    /// empty unless the polytope is full-dimensional in its ambient space.
    pub facets: Vec<Vec<BigInt>>,
    /// Per facet: indices into `vertices` lying on it (working-coordinate
    /// combinatorics; valid for degenerate polytopes as well).
    pub incidence: Vec<Vec<usize>>,
    volume_ambient: Rational,
}

/// Face counts (f_0, ..., f_{d-1}).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FVector(pub Vec<usize>);

/// Facet intersection graph: edge labels are intersection dimensions.
#[derive(Debug, Clone)]
pub struct FacetGraph {
    pub facet_count: usize,
    /// (i, j, dim of facet_i intersect facet_j), i < j, only non-empty meets.
    pub edges: Vec<(usize, usize, usize)>,
}

/// Exact hull of integer points; handles lower-dimensional inputs by
/// restricting to pivot coordinates of the affine hull.
pub fn convex_hull(points: &[Vec<i64>]) -> Result<LatticePolytope, PolytopeError> {
    if points.is_empty() {
        return Err(PolytopeError::EmptyInput);
    }
    let n = points[0].len();
    if n > DIM_CAP {
        return Err(PolytopeError::DimensionCap { n, cap: DIM_CAP });
    }
    let mut generators: Vec<Vec<i64>> = points.to_vec();
    generators.sort();
    generators.dedup();
    // Affine hull: pivot coordinates of the difference space.
    let diffs: Vec<Vec<Rational>> = generators[1..]
        .iter()
        .map(|p| {
            (0..n)
                .map(|j| Rational::from_ratio(p[j] - generators[0][j], 1))
                .collect()
        })
        .collect();
    let pivots = pivot_columns(&diffs, n);
    let affine_dim = pivots.len();
    if affine_dim == 0 {
        return Ok(LatticePolytope {
            ambient_dim: n,
            affine_dim: 0,
            vertices: generators.clone(),
            generators,
            facets: Vec::new(),
            incidence: Vec::new(),
            volume_ambient: Rational::zero(),
        });
    }
    // Restriction to pivot coordinates is an affine bijection on the hull.
    let working: Vec<Vec<Rational>> = generators
        .iter()
        .map(|p| pivots.iter().map(|&c| Rational::from_ratio(p[c], 1)).collect())
        .collect();
    let h = hull::hull(&working);
    let vertices: Vec<Vec<i64>> =
        h.vertex_indices.iter().map(|&i| generators[i].clone()).collect();
    let full_dim = affine_dim == n;
    let facets = if full_dim {
        h.facets.iter().map(facet_homogeneous).collect()
    } else {
        Vec::new()
    };
    let incidence = h
        .facets
        .iter()
        .map(|f| {
            f.vertex_indices
                .iter()
                .map(|gi| {
                    h.vertex_indices
                        .binary_search(gi)
                        .expect("facet vertices are hull vertices")
                })
                .collect()
        })
        .collect();
    Ok(LatticePolytope {
        ambient_dim: n,
        affine_dim,
        generators,
        vertices,
        facets,
        incidence,
        volume_ambient: if full_dim { h.volume } else { Rational::zero() },
    })
}

/// Interior form normal.x <= offset becomes homogeneous [b, a] with
/// b + a.x >= 0: b = offset, a = -normal, cleared to primitive integers.
fn facet_homogeneous(f: &hull::MergedFacet) -> Vec<BigInt> {
    let mut row: Vec<Rational> = Vec::with_capacity(f.normal.len() + 1);
    row.push(f.offset.clone());
    for v in &f.normal {
        row.push(-v.clone());
    }
    let mut lcm_den = BigInt::one();
    for v in &row {
        lcm_den = num::Integer::lcm(&lcm_den, v.denom());
    }
    let ints: Vec<BigInt> = row.iter().map(|v| v.numer() * &lcm_den / v.denom()).collect();
    let mut g = BigInt::zero();
    for v in &ints {
        g = num::Integer::gcd(&g, v);
    }
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|v| v / &g).collect()
}

impl LatticePolytope {
    /// Exact ambient Euclidean volume; zero for degenerate polytopes.
    pub fn volume(&self) -> Rational {
        self.volume_ambient.clone()
    }

    /// Exact membership test for a rational point.
    pub fn contains(&self, q: &[Rational]) -> bool {
        assert_eq!(q.len(), self.ambient_dim);
        if !self.facets.is_empty() {
            return self.facets.iter().all(|row| {
                let mut acc = Rational::from_integer(row[0].clone());
                for (a, x) in row[1..].iter().zip(q) {
                    acc += Rational::from_integer(a.clone()) * x.clone();
                }
                acc >= Rational::zero()
            });
        }
        let pts: Vec<Vec<Rational>> = self
            .generators
            .iter()
            .map(|p| p.iter().map(|&c| Rational::from_ratio(c, 1)).collect())
            .collect();
        convex_membership(&pts, q)
    }

    pub fn contains_lattice(&self, q: &[i64]) -> bool {
        let qr: Vec<Rational> = q.iter().map(|&c| Rational::from_ratio(c, 1)).collect();
        self.contains(&qr)
    }
}

/// Face counts via vertex-facet incidence closure.
pub fn f_vector(p: &LatticePolytope) -> Result<FVector, PolytopeError> {
    let d = p.affine_dim;
    if d == 0 {
        return Ok(FVector(vec![1]));
    }
    if p.incidence.len() > FACET_CAP {
        return Err(PolytopeError::FacetCap { count: p.incidence.len(), cap: FACET_CAP });
    }
    // Faces are intersections of facet vertex sets; close under intersection.
    let mut faces: BTreeSet<Vec<usize>> = BTreeSet::new();
    for f in &p.incidence {
        let mut s = f.clone();
        s.sort_unstable();
        faces.insert(s);
    }
    loop {
        let snapshot: Vec<Vec<usize>> = faces.iter().cloned().collect();
        let before = faces.len();
        for i in 0..snapshot.len() {
            for j in i + 1..snapshot.len() {
                let meet: Vec<usize> = snapshot[i]
                    .iter()
                    .filter(|v| snapshot[j].binary_search(v).is_ok())
                    .copied()
                    .collect();
                if !meet.is_empty() {
                    faces.insert(meet);
                }
            }
        }
        if faces.len() == before {
            break;
        }
    }
    // All vertices are faces even if some vertex is on < 2 facets' meets.
    for v in 0..p.vertices.len() {
        faces.insert(vec![v]);
    }
    let mut counts = vec![0usize; d];
    for face in &faces {
        let dim = affine_dim_of(&face.iter().map(|&v| p.vertices[v].clone()).collect::<Vec<_>>());
        if dim < d {
            counts[dim] += 1;
        }
    }
    Ok(FVector(counts))
}

fn affine_dim_of(points: &[Vec<i64>]) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let n = points[0].len();
    let diffs: Vec<Vec<Rational>> = points[1..]
        .iter()
        .map(|p| (0..n).map(|j| Rational::from_ratio(p[j] - points[0][j], 1)).collect())
        .collect();
    hull::rank(&diffs)
}

/// Pairwise facet intersection dimensions from shared vertices.
pub fn facet_intersection_graph(p: &LatticePolytope) -> FacetGraph {
    let m = p.incidence.len();
    let mut edges = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            let shared: Vec<Vec<i64>> = p.incidence[i]
                .iter()
                .filter(|v| p.incidence[j].contains(v))
                .map(|&v| p.vertices[v].clone())
                .collect();
            if !shared.is_empty() {
                edges.push((i, j, affine_dim_of(&shared)));
            }
        }
    }
    FacetGraph { facet_count: m, edges }
}

/// Hull of pairwise vertex sums.
pub fn minkowski_sum(
    p: &LatticePolytope,
    q: &LatticePolytope,
) -> Result<LatticePolytope, PolytopeError> {
    if p.ambient_dim != q.ambient_dim {
        return Err(PolytopeError::DimensionMismatch { a: p.ambient_dim, b: q.ambient_dim });
    }
    let mut sums = Vec::with_capacity(p.vertices.len() * q.vertices.len());
    for a in &p.vertices {
        for b in &q.vertices {
            sums.push(a.iter().zip(b).map(|(x, y)| x + y).collect());
        }
    }
    convex_hull(&sums)
}

/// Mixed volume via inclusion-exclusion over Minkowski-sum volumes,
/// normalized so that MV(P, ..., P) = n! Vol(P); the BKK root bound.
pub fn mixed_volume(polys: &[LatticePolytope]) -> Result<BigInt, PolytopeError> {
    let n = polys.len();
    if n == 0 || polys.iter().any(|p| p.ambient_dim != n) {
        return Err(PolytopeError::MixedVolumeArity {
            n,
            got: polys.first().map_or(0, |p| p.ambient_dim),
        });
    }
    if n > MIXED_VOLUME_CAP {
        return Err(PolytopeError::DimensionCap { n, cap: MIXED_VOLUME_CAP });
    }
    let mut total = Rational::zero();
    for subset in 1u32..1 << n {
        let members: Vec<usize> = (0..n).filter(|i| subset >> i & 1 == 1).collect();
        let mut sum = polys[members[0]].clone();
        for &i in &members[1..] {
            sum = minkowski_sum(&sum, &polys[i])?;
        }
        let sign = if (n - members.len()) % 2 == 0 { 1 } else { -1 };
        total += sum.volume() * Rational::from_ratio(sign, 1);
    }
    // The alternating sum of Minkowski-sum volumes is the normalized mixed
    // volume, an integer for lattice polytopes.
    debug_assert!(total.is_integer(), "mixed volume must be integral");
    Ok(total.to_integer())
}

#[cfg(test)]
fn factorial_rational(n: usize) -> Rational {
    let mut acc = Rational::one();
    for i in 2..=n {
        acc *= Rational::from_ratio(i as i64, 1);
    }
    acc
}

// ---------------------------------------------------------------------------
// JSON serialization

#[derive(Serialize, Deserialize)]
struct PolytopeJson {
    dim: usize,
    generators: Vec<Vec<i64>>,
    vertices: Vec<Vec<i64>>,
    facets: Vec<Vec<String>>,
}

impl LatticePolytope {
    pub fn to_json(&self) -> String {
        let facets = self
            .facets
            .iter()
            .map(|row| row.iter().map(BigInt::to_string).collect())
            .collect();
        let json = PolytopeJson {
            dim: self.ambient_dim,
            generators: self.generators.clone(),
            vertices: self.vertices.clone(),
            facets,
        };
        serde_json::to_string_pretty(&json).expect("serializable")
    }
}


fn pivot_columns(rows: &[Vec<Rational>], n: usize) -> Vec<usize> {
    let mut m = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        if r == m.len() {
            break;
        }
        if let Some(pr) = (r..m.len()).find(|&i| !m[i][c].is_zero()) {
            m.swap(r, pr);
            let p = m[r][c].clone();
            for v in m[r].iter_mut() {
                *v /= p.clone();
            }
            for i in 0..m.len() {
                if i != r && !m[i][c].is_zero() {
                    let f = m[i][c].clone();
                    for j in 0..n {
                        let sub = f.clone() * m[r][j].clone();
                        m[i][j] -= sub;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
    }
    pivots
}
