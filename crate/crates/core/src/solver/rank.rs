use std::collections::{BTreeMap, HashMap};

use crate::polyform::Rational;
use crate::sparse::CsrMatrix;
use num::Zero;

/// Relative singular value cutoff for floating-point ranks.
pub const RANK_TOL: f64 = 1e-10;

/// Singular values in nonincreasing order.
pub fn singular_values(m: &CsrMatrix<f64>) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s = m
        .to_faer_dense()
        .singular_values()
        .expect("singular value decomposition converges");
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Number of singular values above `tol · σ_max`.
pub fn matrix_rank(m: &CsrMatrix<f64>, tol: f64) -> usize {
    let s = singular_values(m);
    let Some(&max) = s.first() else { return 0 };
    if max == 0.0 {
        return 0;
    }
    s.iter().filter(|v| **v > tol * max).count()
}

type SparseRow = BTreeMap<usize, Rational>;

/// Exact rank by sparse row echelon reduction, sparsest rows first.
pub fn exact_rank(m: &CsrMatrix<Rational>) -> usize {
    let mut order: Vec<usize> = (0..m.nrows()).collect();
    order.sort_by_key(|&r| (m.row(r).count(), r));
    let mut pivots: HashMap<usize, SparseRow> = HashMap::new();
    for r in order {
        let mut row: SparseRow = m.row(r).map(|(c, v)| (c, v.clone())).collect();
        while let Some((&lead, _)) = row.iter().next() {
            let Some(p) = pivots.get(&lead) else { break };
            let factor = row[&lead].clone() / p[&lead].clone();
            for (c, v) in p {
                let e = row.entry(*c).or_insert_with(Rational::zero);
                *e -= factor.clone() * v.clone();
                if e.is_zero() {
                    row.remove(c);
                }
            }
        }
        if let Some((&lead, _)) = row.iter().next() {
            pivots.insert(lead, row);
        }
    }
    pivots.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyform::{int, Scalar};

    #[test]
    fn identity_and_dependent_rows() {
        let id = CsrMatrix::from_dense(&crate::linalg::identity::<f64>(5), 5);
        assert_eq!(matrix_rank(&id, RANK_TOL), 5);
        let m: Vec<Vec<Rational>> = vec![
            vec![int(1), int(2), int(0)],
            vec![int(2), int(4), int(0)],
            vec![int(0), int(1), int(1)],
        ];
        assert_eq!(exact_rank(&CsrMatrix::from_dense(&m, 3)), 2);
        let f = CsrMatrix::from_dense(&m, 3).map(|v| v.to_f64());
        assert_eq!(matrix_rank(&f, RANK_TOL), 2);
        assert_eq!(exact_rank(&CsrMatrix::<Rational>::zeros(3, 4)), 0);
    }
}
