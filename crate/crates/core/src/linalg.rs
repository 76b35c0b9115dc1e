//! Small dense linear algebra over any [`Scalar`]: echelon forms, rank, inverse.

use crate::polyform::Scalar;

/// Row-major dense matrix.
pub type Dense<T> = Vec<Vec<T>>;

pub fn zeros<T: Scalar>(rows: usize, cols: usize) -> Dense<T> {
    vec![vec![T::zero(); cols]; rows]
}

pub fn identity<T: Scalar>(n: usize) -> Dense<T> {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = T::one();
    }
    m
}

pub fn transpose<T: Scalar>(m: &Dense<T>, cols: usize) -> Dense<T> {
    (0..cols).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn matmul<T: Scalar>(a: &Dense<T>, b: &Dense<T>) -> Dense<T> {
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            let mut out = vec![T::zero(); cols];
            for (l, a_il) in row.iter().enumerate() {
                if a_il.is_zero() {
                    continue;
                }
                for (o, b_lj) in out.iter_mut().zip(&b[l]) {
                    *o += a_il.clone() * b_lj.clone();
                }
            }
            out
        })
        .collect()
}

pub fn matvec<T: Scalar>(a: &Dense<T>, x: &[T]) -> Vec<T> {
    a.iter()
        .map(|row| {
            let mut acc = T::zero();
            for (v, xi) in row.iter().zip(x) {
                acc += v.clone() * xi.clone();
            }
            acc
        })
        .collect()
}

fn max_abs<T: Scalar>(m: &Dense<T>) -> f64 {
    m.iter().flatten().map(|v| v.magnitude()).fold(0.0, f64::max)
}

/// Reduced row echelon form in place; returns the pivot columns.
///
/// Floating-point input uses a zero threshold relative to the largest entry.
pub fn row_reduce<T: Scalar>(m: &mut Dense<T>) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let scale = max_abs(m);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let mut best = None;
        let mut best_mag = 0.0;
        for i in r..rows {
            if m[i][c].negligible(scale) {
                continue;
            }
            let mag = m[i][c].magnitude();
            if best.is_none() || (!T::EXACT && mag > best_mag) {
                best = Some(i);
                best_mag = mag;
            }
            if T::EXACT {
                break;
            }
        }
        let Some(p) = best else { continue };
        m.swap(r, p);
        let inv = T::one() / m[r][c].clone();
        for v in m[r].iter_mut() {
            *v *= inv.clone();
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row).skip(c) {
                *v -= f.clone() * p.clone();
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<T: Scalar>(m: &Dense<T>) -> usize {
    let mut work = m.clone();
    row_reduce(&mut work).len()
}

/// Indices of a maximal linearly independent subset of the rows, chosen greedily in order.
pub fn independent_rows<T: Scalar>(m: &Dense<T>) -> Vec<usize> {
    let cols = m.first().map_or(0, |r| r.len());
    let t = transpose(m, cols);
    let mut work = t;
    row_reduce(&mut work)
}

/// Inverse of a square matrix, `None` when singular.
pub fn inverse<T: Scalar>(m: &Dense<T>) -> Option<Dense<T>> {
    let n = m.len();
    let mut aug: Dense<T> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { T::one() } else { T::zero() }));
            r
        })
        .collect();
    let pivots = row_reduce(&mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Solve `m x = b` for a matrix of full column rank; `None` if inconsistent or rank deficient.
pub fn solve_consistent<T: Scalar>(m: &Dense<T>, b: &[T]) -> Option<Vec<T>> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut aug: Dense<T> = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = row_reduce(&mut aug);
    if pivots.len() != cols || pivots.iter().enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    Some((0..cols).map(|i| aug[i][cols].clone()).collect())
}

/// Basis of the null space `{x : m x = 0}` as row vectors.
pub fn null_space<T: Scalar>(m: &Dense<T>, cols: usize) -> Vec<Vec<T>> {
    let mut work = m.clone();
    let pivots = row_reduce(&mut work);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![T::zero(); cols];
            x[f] = T::one();
            for (r, &p) in pivots.iter().enumerate() {
                x[p] = -work[r][f].clone();
            }
            x
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyform::{int, Rational};

    #[test]
    fn identity_rank() {
        assert_eq!(rank(&identity::<f64>(5)), 5);
        assert_eq!(rank(&identity::<Rational>(5)), 5);
    }

    #[test]
    fn inverse_roundtrip() {
        let m: Dense<Rational> = vec![
            vec![int(2), int(1), int(0)],
            vec![int(1), int(3), int(1)],
            vec![int(0), int(1), int(4)],
        ];
        let inv = inverse(&m).unwrap();
        assert_eq!(matmul(&m, &inv), identity(3));
        let singular: Dense<Rational> = vec![vec![int(1), int(2)], vec![int(2), int(4)]];
        assert!(inverse(&singular).is_none());
    }

    #[test]
    fn null_space_is_annihilated() {
        let m: Dense<Rational> = vec![vec![int(1), int(2), int(3)], vec![int(2), int(4), int(6)]];
        let ns = null_space(&m, 3);
        assert_eq!(ns.len(), 2);
        for x in ns {
            assert!(matvec(&m, &x).iter().all(|v| *v == int(0)));
        }
        assert_eq!(independent_rows(&m), vec![0]);
    }
}
