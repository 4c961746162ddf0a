//! Exact rational linear programming, just enough for convex-membership
//! feasibility queries: phase-1 simplex with Bland's rule.

use crate::scalar::Rational;
use num_traits::{One, Zero};

/// Is {x >= 0 : A x = b} non-empty? Exact arithmetic, Bland's rule, so
/// termination is guaranteed.
pub fn feasible(a: &[Vec<Rational>], b: &[Rational]) -> bool {
    let m = a.len();
    if m == 0 {
        return true;
    }
    let n = a[0].len();
    // Tableau with artificial variables: columns [x | artificial | rhs].
    let mut tab: Vec<Vec<Rational>> = Vec::with_capacity(m);
    for i in 0..m {
        let flip = b[i] < Rational::zero();
        let mut row: Vec<Rational> = Vec::with_capacity(n + m + 1);
        for j in 0..n {
            row.push(if flip { -a[i][j].clone() } else { a[i][j].clone() });
        }
        for j in 0..m {
            row.push(if i == j { Rational::one() } else { Rational::zero() });
        }
        row.push(if flip { -b[i].clone() } else { b[i].clone() });
        tab.push(row);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    // Objective: minimize the sum of artificials; reduced costs start as
    // minus the column sums of the artificial rows.
    let mut obj = vec![Rational::zero(); n + m + 1];
    for row in &tab {
        for (j, v) in row.iter().enumerate() {
            obj[j] -= v.clone();
        }
    }
    for j in n..n + m {
        obj[j] = Rational::zero();
    }
    loop {
        // Bland: first column with negative reduced cost.
        let Some(enter) = (0..n + m).find(|&j| obj[j] < Rational::zero()) else {
            break;
        };
        // Ratio test, ties broken by smallest basis variable (Bland).
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..m {
            if tab[i][enter] > Rational::zero() {
                let ratio = tab[i][n + m].clone() / tab[i][enter].clone();
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => {
                        ratio < *lr || (ratio == *lr && basis[i] < basis[*li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((pivot_row, _)) = leave else {
            // Unbounded in phase 1 cannot happen (objective bounded below by 0),
            // but guard anyway.
            return false;
        };
        pivot(&mut tab, &mut obj, pivot_row, enter);
        basis[pivot_row] = enter;
    }
    // Feasible iff the artificial objective reaches zero.
    let total: Rational = (0..m).fold(Rational::zero(), |acc, i| {
        if basis[i] >= n {
            acc + tab[i][n + m].clone()
        } else {
            acc
        }
    });
    total.is_zero()
}

fn pivot(tab: &mut [Vec<Rational>], obj: &mut [Rational], row: usize, col: usize) {
    let p = tab[row][col].clone();
    for v in tab[row].iter_mut() {
        *v /= p.clone();
    }
    let pivot_row = tab[row].clone();
    for (i, r) in tab.iter_mut().enumerate() {
        if i != row && !r[col].is_zero() {
            let f = r[col].clone();
            for (v, pv) in r.iter_mut().zip(&pivot_row) {
                *v -= f.clone() * pv.clone();
            }
        }
    }
    if !obj[col].is_zero() {
        let f = obj[col].clone();
        for (v, pv) in obj.iter_mut().zip(&pivot_row) {
            *v -= f.clone() * pv.clone();
        }
    }
}

/// Is q in the convex hull of the given points? Exact LP feasibility.
pub fn convex_membership(points: &[Vec<Rational>], q: &[Rational]) -> bool {
    if points.is_empty() {
        return false;
    }
    let dim = q.len();
    let mut a: Vec<Vec<Rational>> = Vec::with_capacity(dim + 1);
    for coord in 0..dim {
        a.push(points.iter().map(|p| p[coord].clone()).collect());
    }
    a.push(vec![Rational::one(); points.len()]);
    let mut b: Vec<Rational> = q.to_vec();
    b.push(Rational::one());
    feasible(&a, &b)
}
