//! Dense bitset linear algebra over F2.
//!
//! Vectors are packed into `u64` words. Matrices are stored as a list of
//! row bitsets; elimination always picks the leftmost available pivot
//! column and, within it, the topmost candidate row, so every result is a
//! deterministic function of the input.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("dimension mismatch: expected {expected}, got {got}")]
pub struct DimensionMismatch {
    pub expected: usize,
    pub got: usize,
}

/// A vector over F2 of fixed length.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec {
    words: Vec<u64>,
    len: usize,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        Self { words: vec![0; len.div_ceil(64)], len }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_indices(len: usize, ones: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in ones {
            v.flip(i);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range (len {})", self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit {i} out of range (len {})", self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range (len {})", self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// In-place addition (xor). Panics on length mismatch.
    pub fn add_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "bitvec length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn dot(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len, "bitvec length mismatch");
        let mut acc = 0u32;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= (a & b).count_ones() & 1;
        }
        acc == 1
    }

    pub fn first_one(&self) -> Option<usize> {
        for (wi, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(wi * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + t)
            })
        })
    }

    /// Copy of the bits `[start, start + len)`.
    pub fn slice(&self, start: usize, len: usize) -> BitVec {
        BitVec::from_indices(len, self.ones().filter(|&i| i >= start && i < start + len).map(|i| i - start))
    }

    /// Concatenation of several vectors.
    pub fn concat<'a>(parts: impl IntoIterator<Item = &'a BitVec>) -> BitVec {
        let parts: Vec<&BitVec> = parts.into_iter().collect();
        let len = parts.iter().map(|p| p.len).sum();
        let mut out = BitVec::zeros(len);
        let mut offset = 0;
        for p in parts {
            for i in p.ones() {
                out.set(offset + i, true);
            }
            offset += p.len;
        }
        out
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// A dense matrix over F2 stored by rows.
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: Vec<BitVec>,
    ncols: usize,
}

impl BitMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self { rows: vec![BitVec::zeros(ncols); nrows], ncols }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from row vectors of length `ncols`.
    pub fn from_rows(ncols: usize, rows: Vec<BitVec>) -> Self {
        assert!(rows.iter().all(|r| r.len() == ncols), "row length mismatch");
        Self { rows, ncols }
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(nrows: usize, cols: &[BitVec]) -> Self {
        let mut m = Self::zeros(nrows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), nrows, "column length mismatch");
            for i in c.ones() {
                m.set(i, j, true);
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        self.rows[i].set(j, v)
    }

    pub fn flip(&mut self, i: usize, j: usize) {
        self.rows[i].flip(j)
    }

    pub fn row(&self, i: usize) -> &BitVec {
        &self.rows[i]
    }

    pub fn column(&self, j: usize) -> BitVec {
        BitVec::from_indices(self.nrows(), (0..self.nrows()).filter(|&i| self.get(i, j)))
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BitVec::is_zero)
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.ncols, self.nrows());
        for (i, r) in self.rows.iter().enumerate() {
            for j in r.ones() {
                t.set(j, i, true);
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &BitVec) -> Result<BitVec, DimensionMismatch> {
        if v.len() != self.ncols {
            return Err(DimensionMismatch { expected: self.ncols, got: v.len() });
        }
        Ok(BitVec::from_indices(self.nrows(), (0..self.nrows()).filter(|&i| self.rows[i].dot(v))))
    }

    pub fn mul(&self, other: &BitMatrix) -> Result<BitMatrix, DimensionMismatch> {
        if other.nrows() != self.ncols {
            return Err(DimensionMismatch { expected: self.ncols, got: other.nrows() });
        }
        let mut out = BitMatrix::zeros(self.nrows(), other.ncols);
        for (i, r) in self.rows.iter().enumerate() {
            for k in r.ones() {
                out.rows[i].add_assign(&other.rows[k]);
            }
        }
        Ok(out)
    }

    pub fn add_assign(&mut self, other: &BitMatrix) {
        assert_eq!((self.nrows(), self.ncols), (other.nrows(), other.ncols));
        for (a, b) in self.rows.iter_mut().zip(&other.rows) {
            a.add_assign(b);
        }
    }

    /// Reduced row echelon form; returns the pivot columns in order.
    fn rref_with(&self, mut extra: Option<&mut Vec<BitVec>>) -> (Vec<BitVec>, Vec<usize>) {
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.ncols {
            let Some(p) = (r..rows.len()).find(|&i| rows[i].get(c)) else { continue };
            rows.swap(r, p);
            if let Some(e) = extra.as_deref_mut() {
                e.swap(r, p);
            }
            for i in 0..rows.len() {
                if i != r && rows[i].get(c) {
                    let pivot_row = rows[r].clone();
                    rows[i].add_assign(&pivot_row);
                    if let Some(e) = extra.as_deref_mut() {
                        let pe = e[r].clone();
                        e[i].add_assign(&pe);
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == rows.len() {
                break;
            }
        }
        (rows, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref_with(None).1.len()
    }

    /// A basis of the column space, taken from the pivot columns of `self`.
    pub fn image_basis(&self) -> Vec<BitVec> {
        let (_, pivots) = self.rref_with(None);
        pivots.into_iter().map(|j| self.column(j)).collect()
    }

    /// A basis of `{ v : A v = 0 }`.
    pub fn kernel_basis(&self) -> Vec<BitVec> {
        let (rows, pivots) = self.rref_with(None);
        let mut is_pivot = vec![false; self.ncols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.ncols).filter(|&j| !is_pivot[j]) {
            let mut v = BitVec::unit(self.ncols, free);
            for (r, &p) in pivots.iter().enumerate() {
                if rows[r].get(free) {
                    v.set(p, true);
                }
            }
            basis.push(v);
        }
        basis
    }

    /// Some `x` with `A x = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &BitVec) -> Result<Option<BitVec>, DimensionMismatch> {
        if b.len() != self.nrows() {
            return Err(DimensionMismatch { expected: self.nrows(), got: b.len() });
        }
        let mut rhs: Vec<BitVec> = (0..self.nrows()).map(|i| BitVec::from_indices(1, b.get(i).then_some(0))).collect();
        let (rows, pivots) = self.rref_with(Some(&mut rhs));
        // rows beyond the rank are zero; their rhs must vanish
        if (pivots.len()..rows.len()).any(|i| rhs[i].get(0)) {
            return Ok(None);
        }
        let mut x = BitVec::zeros(self.ncols);
        for (r, &p) in pivots.iter().enumerate() {
            if rhs[r].get(0) {
                x.set(p, true);
            }
        }
        Ok(Some(x))
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.nrows(), self.ncols)?;
        for r in &self.rows {
            writeln!(f, "  {r:?}")?;
        }
        Ok(())
    }
}

/// Rank of the span of a set of vectors of common length `len`.
pub fn span_rank(len: usize, vectors: &[BitVec]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    BitMatrix::from_columns(len, vectors).rank()
}

/// Solves `A x = b` for an arbitrary matrix.
pub fn f2_solve(a: &BitMatrix, b: &BitVec) -> Result<Option<BitVec>, DimensionMismatch> {
    a.solve(b)
}

/// Basis of the column space of `a`.
pub fn f2_image_basis(a: &BitMatrix) -> Vec<BitVec> {
    a.image_basis()
}

/// A sparse matrix over F2 stored as sorted column lists of row indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseColumns {
    nrows: usize,
    cols: Vec<Vec<usize>>,
}

impl SparseColumns {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self { nrows, cols: vec![Vec::new(); ncols] }
    }

    /// Builds from `(row, col)` entries; repeated entries cancel in pairs.
    pub fn from_entries(nrows: usize, ncols: usize, entries: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut m = Self::zeros(nrows, ncols);
        for (i, j) in entries {
            m.flip(i, j);
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn flip(&mut self, i: usize, j: usize) {
        assert!(i < self.nrows, "row index out of range");
        let col = &mut self.cols[j];
        match col.binary_search(&i) {
            Ok(k) => {
                col.remove(k);
            }
            Err(k) => col.insert(k, i),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.cols[j].binary_search(&i).is_ok()
    }

    pub fn column(&self, j: usize) -> &[usize] {
        &self.cols[j]
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn apply(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.ncols(), "vector length mismatch");
        let mut out = BitVec::zeros(self.nrows);
        for j in v.ones() {
            for &i in &self.cols[j] {
                out.flip(i);
            }
        }
        out
    }

    pub fn to_dense(&self) -> BitMatrix {
        let mut m = BitMatrix::zeros(self.nrows, self.ncols());
        for (j, col) in self.cols.iter().enumerate() {
            for &i in col {
                m.set(i, j, true);
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identity_system_returns_rhs() {
        let a = BitMatrix::identity(70);
        let b = BitVec::from_indices(70, [0, 3, 64, 69]);
        assert_eq!(a.solve(&b).unwrap(), Some(b));
    }

    #[test]
    fn inconsistent_row() {
        let a = BitMatrix::zeros(1, 1);
        assert_eq!(a.solve(&BitVec::unit(1, 0)).unwrap(), None);
    }

    #[test]
    fn dimension_mismatch_reported() {
        let a = BitMatrix::zeros(2, 3);
        assert!(a.solve(&BitVec::zeros(3)).is_err());
        assert!(a.mul_vec(&BitVec::zeros(2)).is_err());
    }

    #[test]
    fn kernel_and_image() {
        // columns: e0, e1, e0+e1
        let cols = [BitVec::from_indices(2, [0]), BitVec::from_indices(2, [1]), BitVec::from_indices(2, [0, 1])];
        let a = BitMatrix::from_columns(2, &cols);
        assert_eq!(a.rank(), 2);
        assert_eq!(a.image_basis(), vec![cols[0].clone(), cols[1].clone()]);
        let k = a.kernel_basis();
        assert_eq!(k, vec![BitVec::from_indices(3, [0, 1, 2])]);
    }

    fn arb_matrix() -> impl Strategy<Value = BitMatrix> {
        (1usize..9, 1usize..9).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::bool::ANY, r * c).prop_map(move |bits| {
                let mut m = BitMatrix::zeros(r, c);
                for (k, b) in bits.into_iter().enumerate() {
                    m.set(k / c, k % c, b);
                }
                m
            })
        })
    }

    proptest! {
        #[test]
        fn solve_agrees_with_brute_force(a in arb_matrix(), seed in 0u64..512) {
            let b = BitVec::from_indices(a.nrows(), (0..a.nrows()).filter(|i| (seed >> i) & 1 == 1));
            let brute = (0u32..(1 << a.ncols())).any(|mask| {
                let x = BitVec::from_indices(a.ncols(), (0..a.ncols()).filter(|j| (mask >> j) & 1 == 1));
                a.mul_vec(&x).unwrap() == b
            });
            let sol = a.solve(&b).unwrap();
            prop_assert_eq!(sol.is_some(), brute);
            if let Some(x) = sol {
                prop_assert_eq!(a.mul_vec(&x).unwrap(), b);
            }
        }

        #[test]
        fn rank_nullity(a in arb_matrix()) {
            let k = a.kernel_basis();
            prop_assert_eq!(a.rank() + k.len(), a.ncols());
            for v in &k {
                prop_assert!(a.mul_vec(v).unwrap().is_zero());
            }
            prop_assert_eq!(span_rank(a.ncols(), &k), k.len());
        }
    }

    #[test]
    fn sparse_entries_cancel_and_apply() {
        let m = SparseColumns::from_entries(3, 2, [(0, 0), (2, 0), (0, 0), (1, 1)]);
        assert_eq!(m.column(0), &[2]);
        assert_eq!(m.nnz(), 2);
        let v = BitVec::from_indices(2, [0, 1]);
        assert_eq!(m.apply(&v), BitVec::from_indices(3, [1, 2]));
        assert_eq!(m.to_dense().mul_vec(&v).unwrap(), m.apply(&v));
    }
}
