//! Exact incremental convex hull (beneath-beyond / placing triangulation).
//!
//! Works in a full-dimensional coordinate system over exact rationals. The
//! boundary is kept as a simplicial complex; only strictly visible facets
//! are coned, which is exactly the placing rule, so coplanar degeneracies of
//! lattice polytopes are handled without perturbation. Coplanar simplicial
//! facets are merged into true facets at the end, and the Euclidean volume
//! is accumulated cone by cone during insertion.

use crate::scalar::Rational;
use num_traits::{One, Zero};
use std::collections::HashMap;

/// A merged (true) facet: supporting hyperplane plus incident vertices.
/// Interior satisfies normal . x <= offset; the facet is the equality set.
#[derive(Debug, Clone)]
pub struct MergedFacet {
    pub normal: Vec<Rational>,
    pub offset: Rational,
    /// Indices into the input point list, sorted.
    pub vertex_indices: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct HullResult {
    /// Indices of extremal input points, sorted.
    pub vertex_indices: Vec<usize>,
    pub facets: Vec<MergedFacet>,
    /// Euclidean volume in the working coordinates.
    pub volume: Rational,
}

#[derive(Debug, Clone)]
struct SimplicialFacet {
    /// Exactly d point indices, sorted.
    verts: Vec<usize>,
    normal: Vec<Rational>,
    offset: Rational,
}

/// Convex hull of affinely spanning points in dimension d >= 1.
/// `pts` must be deduplicated; panics if the points do not span.
pub fn hull(pts: &[Vec<Rational>]) -> HullResult {
    let d = pts[0].len();
    assert!(d >= 1);
    let initial = initial_simplex(pts, d);
    let interior = centroid(pts, &initial);
    let mut volume = simplex_volume(pts, &initial);
    let mut facets: Vec<Option<SimplicialFacet>> = Vec::new();
    for omit in 0..initial.len() {
        let mut verts: Vec<usize> = initial
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != omit)
            .map(|(_, &v)| v)
            .collect();
        verts.sort_unstable();
        facets.push(Some(make_facet(pts, verts, &interior)));
    }
    let in_simplex: std::collections::HashSet<usize> = initial.iter().copied().collect();
    for (p_idx, p) in pts.iter().enumerate() {
        if in_simplex.contains(&p_idx) {
            continue;
        }
        insert_point(pts, p_idx, p, &mut facets, &interior, &mut volume);
    }
    finalize(pts, facets, d, volume)
}

fn insert_point(
    pts: &[Vec<Rational>],
    p_idx: usize,
    p: &[Rational],
    facets: &mut Vec<Option<SimplicialFacet>>,
    interior: &[Rational],
    volume: &mut Rational,
) {
    let visible: Vec<usize> = facets
        .iter()
        .enumerate()
        .filter_map(|(id, f)| {
            let f = f.as_ref()?;
            (dot(&f.normal, p) > f.offset).then_some(id)
        })
        .collect();
    if visible.is_empty() {
        return;
    }
    // Ridge -> incident facet ids, over all alive facets.
    let mut ridges: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
    for (id, f) in facets.iter().enumerate() {
        let Some(f) = f else { continue };
        for omit in 0..f.verts.len() {
            let mut key = f.verts.clone();
            key.remove(omit);
            ridges.entry(key).or_default().push(id);
        }
    }
    let is_visible = |id: usize| visible.contains(&id);
    let mut new_facets: Vec<SimplicialFacet> = Vec::new();
    for (ridge, incident) in &ridges {
        debug_assert_eq!(incident.len(), 2, "boundary complex must be closed");
        let vis_count = incident.iter().filter(|&&id| is_visible(id)).count();
        if vis_count == 1 {
            let mut verts = ridge.clone();
            verts.push(p_idx);
            verts.sort_unstable();
            new_facets.push(make_facet(pts, verts, interior));
        }
    }
    for &id in &visible {
        let f = facets[id].take().expect("visible facet alive");
        *volume += cone_volume(pts, &f.verts, p);
    }
    for f in new_facets {
        facets.push(Some(f));
    }
}

fn finalize(
    _pts: &[Vec<Rational>],
    facets: Vec<Option<SimplicialFacet>>,
    d: usize,
    volume: Rational,
) -> HullResult {
    // Merge coplanar simplicial facets into true facets.
    let mut groups: HashMap<Vec<Rational>, Vec<usize>> = HashMap::new();
    let alive: Vec<SimplicialFacet> = facets.into_iter().flatten().collect();
    for (id, f) in alive.iter().enumerate() {
        let mut key = f.normal.clone();
        key.push(f.offset.clone());
        scale_canonical(&mut key);
        groups.entry(key).or_default().push(id);
    }
    let mut merged: Vec<MergedFacet> = groups
        .into_iter()
        .map(|(key, ids)| {
            let offset = key[d].clone();
            let normal = key[..d].to_vec();
            let mut vertex_indices: Vec<usize> =
                ids.iter().flat_map(|&id| alive[id].verts.iter().copied()).collect();
            vertex_indices.sort_unstable();
            vertex_indices.dedup();
            MergedFacet { normal, offset, vertex_indices }
        })
        .collect();
    merged.sort_by(|a, b| a.normal.cmp(&b.normal).then_with(|| a.offset.cmp(&b.offset)));
    // True vertices: points whose incident facet normals span the space.
    let mut candidates: Vec<usize> =
        merged.iter().flat_map(|f| f.vertex_indices.iter().copied()).collect();
    candidates.sort_unstable();
    candidates.dedup();
    let vertex_indices: Vec<usize> = candidates
        .into_iter()
        .filter(|&q| {
            let normals: Vec<Vec<Rational>> = merged
                .iter()
                .filter(|f| f.vertex_indices.binary_search(&q).is_ok())
                .map(|f| f.normal.clone())
                .collect();
            rank(&normals) == d
        })
        .collect();
    for f in &mut merged {
        f.vertex_indices.retain(|v| vertex_indices.binary_search(v).is_ok());
    }
    HullResult { vertex_indices, facets: merged, volume }
}

fn make_facet(pts: &[Vec<Rational>], verts: Vec<usize>, interior: &[Rational]) -> SimplicialFacet {
    let points: Vec<&Vec<Rational>> = verts.iter().map(|&v| &pts[v]).collect();
    let (mut normal, mut offset) =
        hyperplane(&points).expect("facet points affinely independent");
    let side = dot(&normal, interior);
    match side.cmp(&offset) {
        std::cmp::Ordering::Greater => {
            for v in &mut normal {
                *v = -v.clone();
            }
            offset = -offset;
        }
        std::cmp::Ordering::Less => {}
        std::cmp::Ordering::Equal => panic!("interior reference lies on a facet hyperplane"),
    }
    SimplicialFacet { verts, normal, offset }
}

/// Hyperplane through d affinely independent points of R^d: a nonzero
/// solution of (p_i - p_0) . a = 0 together with offset a . p_0.
fn hyperplane(points: &[&Vec<Rational>]) -> Option<(Vec<Rational>, Rational)> {
    let d = points[0].len();
    let rows: Vec<Vec<Rational>> = points[1..]
        .iter()
        .map(|p| (0..d).map(|j| p[j].clone() - points[0][j].clone()).collect())
        .collect();
    let normal = nullspace_vector(&rows, d)?;
    let offset = dot(&normal, points[0]);
    Some((normal, offset))
}

/// One nonzero vector in the nullspace of `rows`, provided it is
/// one-dimensional (rank = d - 1); None otherwise.
fn nullspace_vector(rows: &[Vec<Rational>], d: usize) -> Option<Vec<Rational>> {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..d {
        if let Some(pr) = (r..m.len()).find(|&i| !m[i][c].is_zero()) {
            m.swap(r, pr);
            let p = m[r][c].clone();
            for v in m[r].iter_mut() {
                *v /= p.clone();
            }
            for i in 0..m.len() {
                if i != r && !m[i][c].is_zero() {
                    let f = m[i][c].clone();
                    for j in 0..d {
                        let sub = f.clone() * m[r][j].clone();
                        m[i][j] -= sub;
                    }
                }
            }
            pivot_cols.push(c);
            r += 1;
        }
    }
    if r != d - 1 {
        return None;
    }
    let free_col = (0..d).find(|c| !pivot_cols.contains(c))?;
    let mut x = vec![Rational::zero(); d];
    x[free_col] = Rational::one();
    for (row, &pc) in pivot_cols.iter().enumerate() {
        x[pc] = -m[row][free_col].clone();
    }
    Some(x)
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

fn centroid(pts: &[Vec<Rational>], indices: &[usize]) -> Vec<Rational> {
    let d = pts[0].len();
    let count = Rational::from_integer((indices.len() as i64).into());
    (0..d)
        .map(|j| {
            indices
                .iter()
                .fold(Rational::zero(), |acc, &i| acc + pts[i][j].clone())
                / count.clone()
        })
        .collect()
}

/// Greedy affinely independent subset of size d + 1; panics if absent.
fn initial_simplex(pts: &[Vec<Rational>], d: usize) -> Vec<usize> {
    let mut chosen = vec![0usize];
    let mut basis: Vec<Vec<Rational>> = Vec::new();
    for i in 1..pts.len() {
        if chosen.len() == d + 1 {
            break;
        }
        let diff: Vec<Rational> =
            (0..d).map(|j| pts[i][j].clone() - pts[chosen[0]][j].clone()).collect();
        let mut trial = basis.clone();
        trial.push(diff);
        if rank(&trial) == trial.len() {
            basis = trial;
            chosen.push(i);
        }
    }
    assert_eq!(chosen.len(), d + 1, "input points do not span the working dimension");
    chosen
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let d = rows[0].len();
    let mut m = rows.to_vec();
    let mut r = 0;
    for c in 0..d {
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
                    for j in 0..d {
                        let sub = f.clone() * m[r][j].clone();
                        m[i][j] -= sub;
                    }
                }
            }
            r += 1;
        }
    }
    r
}

fn simplex_volume(pts: &[Vec<Rational>], indices: &[usize]) -> Rational {
    let d = pts[0].len();
    let rows: Vec<Vec<Rational>> = indices[1..]
        .iter()
        .map(|&i| (0..d).map(|j| pts[i][j].clone() - pts[indices[0]][j].clone()).collect())
        .collect();
    det_abs(rows) / factorial(d)
}

fn cone_volume(pts: &[Vec<Rational>], facet_verts: &[usize], apex: &[Rational]) -> Rational {
    let d = apex.len();
    let rows: Vec<Vec<Rational>> = facet_verts
        .iter()
        .map(|&i| (0..d).map(|j| pts[i][j].clone() - apex[j].clone()).collect())
        .collect();
    det_abs(rows) / factorial(d)
}

fn det_abs(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Rational::zero();
        };
        m.swap(c, pr);
        det *= m[c][c].clone();
        let p = m[c][c].clone();
        for i in c + 1..n {
            if !m[i][c].is_zero() {
                let f = m[i][c].clone() / p.clone();
                for j in c..n {
                    let sub = f.clone() * m[c][j].clone();
                    m[i][j] -= sub;
                }
            }
        }
    }
    if det < Rational::zero() {
        -det
    } else {
        det
    }
}

fn factorial(n: usize) -> Rational {
    let mut acc = Rational::one();
    for i in 2..=n {
        acc *= Rational::from_integer((i as i64).into());
    }
    acc
}

/// Rescale (normal | offset) by a positive rational so entries become
/// coprime integers; canonical across coplanar facets of equal orientation.
fn scale_canonical(key: &mut [Rational]) {
    use num::BigInt;
    let mut lcm_den = BigInt::from(1);
    for v in key.iter() {
        lcm_den = num::Integer::lcm(&lcm_den, v.denom());
    }
    let mut gcd_num = BigInt::from(0);
    for v in key.iter() {
        let scaled = v.numer() * &lcm_den / v.denom();
        gcd_num = num::Integer::gcd(&gcd_num, &scaled);
    }
    if gcd_num.is_zero() {
        return;
    }
    let factor = Rational::new(lcm_den, gcd_num);
    for v in key.iter_mut() {
        *v *= factor.clone();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    fn pts(raw: &[&[i64]]) -> Vec<Vec<Rational>> {
        raw.iter()
            .map(|row| row.iter().map(|&c| Rational::from_ratio(c, 1)).collect())
            .collect()
    }

    #[test]
    fn unit_square() {
        let p = pts(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]);
        let h = hull(&p);
        assert_eq!(h.vertex_indices, vec![0, 1, 2, 3]);
        assert_eq!(h.facets.len(), 4);
        assert_eq!(h.volume, Rational::from_ratio(1, 1));
    }

    #[test]
    fn interior_and_coplanar_points_excluded() {
        // square with a center point and an edge midpoint (after scaling)
        let p = pts(&[&[0, 0], &[2, 0], &[0, 2], &[2, 2], &[1, 1], &[1, 0]]);
        let h = hull(&p);
        assert_eq!(h.vertex_indices, vec![0, 1, 2, 3]);
        assert_eq!(h.volume, Rational::from_ratio(4, 1));
    }

    #[test]
    fn simplex_3d() {
        let p = pts(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let h = hull(&p);
        assert_eq!(h.facets.len(), 4);
        assert_eq!(h.volume, Rational::from_ratio(1, 6));
    }

    #[test]
    fn cube_with_face_centers() {
        let mut raw: Vec<Vec<i64>> = Vec::new();
        for x in [0i64, 2] {
            for y in [0i64, 2] {
                for z in [0i64, 2] {
                    raw.push(vec![x, y, z]);
                }
            }
        }
        raw.push(vec![1, 1, 0]); // face center
        raw.push(vec![1, 1, 1]); // body center
        let p: Vec<Vec<Rational>> = raw
            .iter()
            .map(|r| r.iter().map(|&c| Rational::from_ratio(c, 1)).collect())
            .collect();
        let h = hull(&p);
        assert_eq!(h.vertex_indices.len(), 8);
        assert_eq!(h.facets.len(), 6);
        assert_eq!(h.volume, Rational::from_ratio(8, 1));
    }

    #[test]
    fn segment_1d() {
        let p = pts(&[&[3], &[0], &[7], &[5]]);
        let h = hull(&p);
        assert_eq!(h.vertex_indices, vec![1, 2]);
        assert_eq!(h.facets.len(), 2);
        assert_eq!(h.volume, Rational::from_ratio(7, 1));
    }
}
