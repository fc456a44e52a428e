//! Row-compressed sparse linear systems `A·x = b`.

use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Accumulates `(row, col, value)` triplets; duplicates are summed on
/// [`finish`](TripletBuilder::finish).
#[derive(Debug, Clone)]
pub struct TripletBuilder {
    n: usize,
    entries: Vec<(usize, usize, f64)>,
    rhs: Vec<f64>,
}

impl TripletBuilder {
    pub fn new(n: usize) -> Self {
        Self { n, entries: Vec::new(), rhs: vec![0.0; n] }
    }

    pub fn add(&mut self, row: usize, col: usize, value: f64) {
        debug_assert!(row < self.n && col < self.n);
        self.entries.push((row, col, value));
    }

    pub fn add_rhs(&mut self, row: usize, value: f64) {
        self.rhs[row] += value;
    }

    pub fn finish(self) -> SparseSystem {
        SparseSystem::from_triplets(self.n, self.entries, self.rhs)
    }
}

/// Square sparse system stored as duplicate-free CSR with sorted columns.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSystem {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
    rhs: Vec<f64>,
}

impl SparseSystem {
    /// Builds the canonical form: entries sorted by `(row, col)` with
    /// duplicates summed in insertion order.
    pub fn from_triplets(n: usize, mut entries: Vec<(usize, usize, f64)>, rhs: Vec<f64>) -> Self {
        assert_eq!(rhs.len(), n, "rhs length");
        // stable sort keeps the summation order of duplicates deterministic
        entries.sort_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; n + 1];
        let mut cols = Vec::with_capacity(entries.len());
        let mut vals: Vec<f64> = Vec::with_capacity(entries.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in entries {
            assert!(r < n && c < n, "triplet ({r}, {c}) out of range for n = {n}");
            if last == Some((r, c)) {
                *vals.last_mut().unwrap() += v;
            } else {
                cols.push(c);
                vals.push(v);
                row_ptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for r in 0..n {
            row_ptr[r + 1] += row_ptr[r];
        }
        Self { n, row_ptr, cols, vals, rhs }
    }

    pub fn n_unknown(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    /// Column indices and values of one row.
    pub fn row(&self, r: usize) -> (&[usize], &[f64]) {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        (&self.cols[span.clone()], &self.vals[span])
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        let (cols, vals) = self.row(r);
        cols.binary_search(&c).map(|k| vals[k]).unwrap_or(0.0)
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|r| self.get(r, r)).collect()
    }

    /// All stored entries in row-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |r| {
            let (cols, vals) = self.row(r);
            cols.iter().zip(vals).map(move |(&c, &v)| (r, c, v))
        })
    }

    /// `y = A·x`, summing each row left to right.
    pub fn matvec_into(&self, x: &[f64], y: &mut [f64]) {
        for (r, out) in y.iter_mut().enumerate() {
            let (cols, vals) = self.row(r);
            *out = cols.iter().zip(vals).map(|(&c, &v)| v * x[c]).sum();
        }
    }

    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, got: x.len() });
        }
        let mut y = vec![0.0; self.n];
        self.matvec_into(x, &mut y);
        Ok(y)
    }

    /// Row-major dense copy of `A`.
    pub fn to_dense(&self) -> Vec<f64> {
        let mut a = vec![0.0; self.n * self.n];
        for (r, c, v) in self.triplets() {
            a[r * self.n + c] = v;
        }
        a
    }

    /// Symmetry up to `rel_tol` times the largest entry magnitude.
    pub fn is_symmetric(&self, rel_tol: f64) -> bool {
        let scale = self.vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        self.triplets().all(|(r, c, v)| (v - self.get(c, r)).abs() <= rel_tol * scale)
    }

    /// The system `(-A)·x = -b`.
    pub fn negated(&self) -> Self {
        Self {
            n: self.n,
            row_ptr: self.row_ptr.clone(),
            cols: self.cols.clone(),
            vals: self.vals.iter().map(|v| -v).collect(),
            rhs: self.rhs.iter().map(|v| -v).collect(),
        }
    }

    /// MatrixMarket coordinate dump of `A` (1-based indices).
    pub fn to_matrix_market(&self) -> String {
        let mut out = String::from("%%MatrixMarket matrix coordinate real general\n");
        writeln!(out, "{} {} {}", self.n, self.n, self.nnz()).unwrap();
        for (r, c, v) in self.triplets() {
            writeln!(out, "{} {} {:e}", r + 1, c + 1, v).unwrap();
        }
        out
    }

    /// MatrixMarket array dump of `b`.
    pub fn rhs_to_matrix_market(&self) -> String {
        let mut out = String::from("%%MatrixMarket matrix array real general\n");
        writeln!(out, "{} 1", self.n).unwrap();
        for v in &self.rhs {
            writeln!(out, "{v:e}").unwrap();
        }
        out
    }
}
