//! Compressed sparse row matrices over any [`Scalar`].

use std::collections::BTreeMap;

use crate::linalg::Dense;
use crate::polyform::Scalar;

/// How repeated `(row, col)` entries are combined.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Merge {
    Add,
    /// Keep the last value; used for interpolation-type operators whose
    /// contributions from neighbouring elements coincide.
    Assign,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CsrMatrix<T> {
    nrows: usize,
    ncols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<T>,
}

/// Triplet accumulator with a fixed merge rule.
#[derive(Clone, Debug)]
pub struct TripletBuilder<T> {
    nrows: usize,
    ncols: usize,
    merge: Merge,
    entries: Vec<(usize, usize, T)>,
}

impl<T: Scalar> TripletBuilder<T> {
    pub fn new(nrows: usize, ncols: usize, merge: Merge) -> Self {
        TripletBuilder {
            nrows,
            ncols,
            merge,
            entries: Vec::new(),
        }
    }

    pub fn push(&mut self, row: usize, col: usize, value: T) {
        debug_assert!(row < self.nrows && col < self.ncols);
        self.entries.push((row, col, value));
    }

    /// Scatter a dense local block through row and column index maps.
    pub fn push_block(&mut self, rows: &[usize], cols: &[usize], block: &Dense<T>) {
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                let v = &block[i][j];
                if !v.is_zero() || self.merge == Merge::Assign {
                    self.entries.push((r, c, v.clone()));
                }
            }
        }
    }

    pub fn extend(&mut self, other: TripletBuilder<T>) {
        self.entries.extend(other.entries);
    }

    /// Entries are merged in push order, so the result does not depend on how the
    /// builder was filled as long as that order is deterministic.
    pub fn build(self) -> CsrMatrix<T> {
        let mut map: BTreeMap<(usize, usize), T> = BTreeMap::new();
        for (r, c, v) in self.entries {
            match self.merge {
                Merge::Add => *map.entry((r, c)).or_insert_with(T::zero) += v,
                Merge::Assign => {
                    map.insert((r, c), v);
                }
            }
        }
        let mut row_ptr = vec![0; self.nrows + 1];
        let mut col_idx = Vec::with_capacity(map.len());
        let mut values = Vec::with_capacity(map.len());
        for ((r, c), v) in map {
            if v.is_zero() {
                continue;
            }
            row_ptr[r + 1] += 1;
            col_idx.push(c);
            values.push(v);
        }
        for r in 0..self.nrows {
            row_ptr[r + 1] += row_ptr[r];
        }
        CsrMatrix {
            nrows: self.nrows,
            ncols: self.ncols,
            row_ptr,
            col_idx,
            values,
        }
    }
}

impl<T: Scalar> CsrMatrix<T> {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        TripletBuilder::new(nrows, ncols, Merge::Add).build()
    }

    pub fn from_dense(m: &Dense<T>, ncols: usize) -> Self {
        let mut b = TripletBuilder::new(m.len(), ncols, Merge::Add);
        let rows: Vec<usize> = (0..m.len()).collect();
        let cols: Vec<usize> = (0..ncols).collect();
        b.push_block(&rows, &cols, m);
        b.build()
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// `(column, value)` pairs of one row, columns ascending.
    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, &T)> {
        let range = self.row_ptr[r]..self.row_ptr[r + 1];
        self.col_idx[range.clone()].iter().copied().zip(&self.values[range])
    }

    pub fn get(&self, r: usize, c: usize) -> T {
        let range = self.row_ptr[r]..self.row_ptr[r + 1];
        match self.col_idx[range.clone()].binary_search(&c) {
            Ok(i) => self.values[range.start + i].clone(),
            Err(_) => T::zero(),
        }
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &T)> {
        (0..self.nrows).flat_map(move |r| self.row(r).map(move |(c, v)| (r, c, v)))
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.ncols);
        (0..self.nrows)
            .map(|r| {
                let mut acc = T::zero();
                for (c, v) in self.row(r) {
                    acc += v.clone() * x[c].clone();
                }
                acc
            })
            .collect()
    }

    pub fn transpose(&self) -> CsrMatrix<T> {
        let mut b = TripletBuilder::new(self.ncols, self.nrows, Merge::Add);
        for (r, c, v) in self.triplets() {
            b.push(c, r, v.clone());
        }
        b.build()
    }

    pub fn matmul(&self, other: &CsrMatrix<T>) -> CsrMatrix<T> {
        assert_eq!(self.ncols, other.nrows);
        let mut b = TripletBuilder::new(self.nrows, other.ncols, Merge::Add);
        for r in 0..self.nrows {
            let mut acc: BTreeMap<usize, T> = BTreeMap::new();
            for (l, a) in self.row(r) {
                for (c, v) in other.row(l) {
                    *acc.entry(c).or_insert_with(T::zero) += a.clone() * v.clone();
                }
            }
            for (c, v) in acc {
                b.push(r, c, v);
            }
        }
        b.build()
    }

    pub fn scale(&self, s: &T) -> CsrMatrix<T> {
        CsrMatrix {
            values: self.values.iter().map(|v| v.clone() * s.clone()).collect(),
            ..self.clone()
        }
    }

    /// Stack matrices with equal column counts on top of each other.
    pub fn vstack(blocks: &[&CsrMatrix<T>]) -> CsrMatrix<T> {
        let ncols = blocks.first().map_or(0, |b| b.ncols);
        let nrows = blocks.iter().map(|b| b.nrows).sum();
        let mut out = TripletBuilder::new(nrows, ncols, Merge::Add);
        let mut off = 0;
        for b in blocks {
            assert_eq!(b.ncols, ncols);
            for (r, c, v) in b.triplets() {
                out.push(off + r, c, v.clone());
            }
            off += b.nrows;
        }
        out.build()
    }

    pub fn to_dense(&self) -> Dense<T> {
        let mut m = crate::linalg::zeros(self.nrows, self.ncols);
        for (r, c, v) in self.triplets() {
            m[r][c] = v.clone();
        }
        m
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.magnitude()).fold(0.0, f64::max)
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> CsrMatrix<U> {
        CsrMatrix {
            nrows: self.nrows,
            ncols: self.ncols,
            row_ptr: self.row_ptr.clone(),
            col_idx: self.col_idx.clone(),
            values: self.values.iter().map(f).collect(),
        }
    }

    pub fn to_f64(&self) -> CsrMatrix<f64> {
        self.map(|v| v.to_f64())
    }
}

impl CsrMatrix<f64> {
    pub fn to_faer(&self) -> faer::sparse::SparseColMat<usize, f64> {
        let triplets: Vec<faer::sparse::Triplet<usize, usize, f64>> = self
            .triplets()
            .map(|(r, c, v)| faer::sparse::Triplet::new(r, c, *v))
            .collect();
        faer::sparse::SparseColMat::try_new_from_triplets(self.nrows, self.ncols, &triplets)
            .expect("valid triplets")
    }

    pub fn to_faer_dense(&self) -> faer::Mat<f64> {
        let mut m = faer::Mat::zeros(self.nrows, self.ncols);
        for (r, c, v) in self.triplets() {
            m[(r, c)] = *v;
        }
        m
    }

    /// Largest entry of `self − selfᵀ`.
    pub fn asymmetry(&self) -> f64 {
        self.triplets()
            .map(|(r, c, v)| (v - self.get(c, r)).abs())
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_and_assign_merge() {
        let mut b = TripletBuilder::new(2, 2, Merge::Add);
        b.push(0, 1, 1.0);
        b.push(0, 1, 2.0);
        b.push(1, 0, 4.0);
        let m = b.build();
        assert_eq!(m.get(0, 1), 3.0);
        assert_eq!(m.nnz(), 2);
        assert_eq!(m.transpose().get(1, 0), 3.0);
        assert_eq!(m.mul_vec(&[1.0, 1.0]), vec![3.0, 4.0]);

        let mut a = TripletBuilder::new(1, 1, Merge::Assign);
        a.push(0, 0, 1.0);
        a.push(0, 0, 5.0);
        assert_eq!(a.build().get(0, 0), 5.0);
    }

    #[test]
    fn product_matches_dense() {
        let a = CsrMatrix::from_dense(&vec![vec![1.0, 2.0], vec![0.0, 3.0]], 2);
        let p = a.matmul(&a.transpose());
        assert_eq!(p.to_dense(), vec![vec![5.0, 6.0], vec![6.0, 9.0]]);
    }
}
