//! Dense linear algebra over a small prime field F_ℓ.
//!
//! Vectors are column vectors stored as `Vec<u64>` of reduced residues;
//! matrices act on the left. Subspaces are kept in reduced row-echelon
//! form, so two subspaces are equal exactly when their representations are.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::field::{Field, PrimeField};

fn fl(ell: u64) -> PrimeField {
    PrimeField::new(ell).expect("ℓ is validated prime by constructors")
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix {
    ell: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries((0..self.rows).map(|r| self.row(r))).finish()
    }
}

impl Matrix {
    pub fn new(ell: u64, rows: usize, cols: usize, data: Vec<u64>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has wrong length");
        let data = data.into_iter().map(|x| x % ell).collect();
        Self { ell, rows, cols, data }
    }

    pub fn from_rows(ell: u64, rows: &[Vec<u64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self::new(ell, rows.len(), cols, rows.concat())
    }

    pub fn from_i64_rows(ell: u64, rows: &[&[i64]]) -> Self {
        let f = fl(ell);
        let rows: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|&x| f.from_i64(x)).collect()).collect();
        Self::from_rows(ell, &rows)
    }

    pub fn zero(ell: u64, rows: usize, cols: usize) -> Self {
        Self { ell, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(ell: u64, n: usize) -> Self {
        let mut m = Self::zero(ell, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % ell;
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(ell: u64, n: usize, cols: &[Vec<u64>]) -> Self {
        let mut m = Self::zero(ell, n, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for i in 0..n {
                m.data[i * cols.len() + j] = c[i] % ell;
            }
        }
        m
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = v % self.ell;
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let f = fl(self.ell);
        let mut out = Self::zero(self.ell, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = f.add(&out.data[idx], &f.mul(&a, &other.get(k, j)));
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        let f = fl(self.ell);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(0, |acc, (a, b)| f.add(&acc, &f.mul(a, b))))
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        let f = fl(self.ell);
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f.add(a, b)).collect();
        Self { data, ..self.clone() }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        let f = fl(self.ell);
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f.sub(a, b)).collect();
        Self { data, ..self.clone() }
    }

    pub fn scale(&self, c: u64) -> Matrix {
        let f = fl(self.ell);
        let data = self.data.iter().map(|a| f.mul(a, &(c % self.ell))).collect();
        Self { data, ..self.clone() }
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Self::zero(self.ell, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.get(i, j);
            }
        }
        out
    }

    pub fn pow(&self, mut e: u64) -> Matrix {
        let mut base = self.clone();
        let mut acc = Self::identity(self.ell, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Self::identity(self.ell, self.rows)
    }

    pub fn trace(&self) -> u64 {
        let f = fl(self.ell);
        (0..self.rows.min(self.cols)).fold(0, |acc, i| f.add(&acc, &self.get(i, i)))
    }

    /// Reduced row-echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let f = fl(self.ell);
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m.get(i, c) != 0) else { continue };
            if pr != r {
                for j in 0..m.cols {
                    m.data.swap(pr * m.cols + j, r * m.cols + j);
                }
            }
            let inv = f.inv(&m.get(r, c)).unwrap();
            for j in 0..m.cols {
                let idx = r * m.cols + j;
                m.data[idx] = f.mul(&m.data[idx], &inv);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c);
                if factor == 0 {
                    continue;
                }
                for j in 0..m.cols {
                    let t = f.mul(&factor, &m.get(r, j));
                    let idx = i * m.cols + j;
                    m.data[idx] = f.sub(&m.data[idx], &t);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel `{v : M v = 0}`.
    pub fn kernel(&self) -> Vec<Vec<u64>> {
        let f = fl(self.ell);
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![0; self.cols];
                v[fc] = 1 % self.ell;
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(&r.get(i, fc));
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zero(self.ell, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.data[i * 2 * n + j] = self.get(i, j);
            }
            aug.data[i * 2 * n + n + i] = 1 % self.ell;
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut out = Self::zero(self.ell, n, n);
        for i in 0..n {
            for j in 0..n {
                out.data[i * n + j] = r.get(i, n + j);
            }
        }
        Some(out)
    }

    pub fn determinant(&self) -> u64 {
        assert!(self.is_square());
        let f = fl(self.ell);
        let mut m = self.clone();
        let n = self.rows;
        let mut det = 1 % self.ell;
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| m.get(i, c) != 0) else { return 0 };
            if pr != c {
                for j in 0..n {
                    m.data.swap(pr * n + j, c * n + j);
                }
                det = f.neg(&det);
            }
            let pivot = m.get(c, c);
            det = f.mul(&det, &pivot);
            let inv = f.inv(&pivot).unwrap();
            for i in c + 1..n {
                let factor = f.mul(&m.get(i, c), &inv);
                if factor == 0 {
                    continue;
                }
                for j in c..n {
                    let t = f.mul(&factor, &m.get(c, j));
                    m.data[i * n + j] = f.sub(&m.data[i * n + j], &t);
                }
            }
        }
        det
    }

    pub fn block_diag(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.ell, other.ell);
        let rows = self.rows + other.rows;
        let cols = self.cols + other.cols;
        let mut out = Self::zero(self.ell, rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[i * cols + j] = self.get(i, j);
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.data[(self.rows + i) * cols + self.cols + j] = other.get(i, j);
            }
        }
        out
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Self { ell: self.ell, rows: self.rows + other.rows, cols: self.cols, data }
    }
}

/// A subspace of F_ℓ^n in canonical reduced row-echelon form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Subspace {
    ell: u64,
    ambient: usize,
    basis: Vec<Vec<u64>>,
}

impl Subspace {
    pub fn zero(ell: u64, ambient: usize) -> Self {
        Self { ell, ambient, basis: Vec::new() }
    }

    pub fn full(ell: u64, ambient: usize) -> Self {
        Self::span(ell, ambient, &Matrix::identity(ell, ambient).to_rows())
    }

    pub fn span(ell: u64, ambient: usize, vectors: &[Vec<u64>]) -> Self {
        if vectors.is_empty() {
            return Self::zero(ell, ambient);
        }
        let (r, pivots) = Matrix::from_rows(ell, vectors).rref();
        let basis = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
        Self { ell, ambient, basis }
    }

    /// `{v : f(v) = 0 for every functional f}`.
    pub fn from_functionals(ell: u64, ambient: usize, functionals: &[Vec<u64>]) -> Self {
        if functionals.is_empty() {
            return Self::full(ell, ambient);
        }
        Self::span(ell, ambient, &Matrix::from_rows(ell, functionals).kernel())
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<u64>] {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.basis.iter().map(|r| r.iter().position(|&x| x != 0).unwrap()).collect()
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        if v.iter().all(|&x| x % self.ell == 0) {
            return true;
        }
        let mut rows = self.basis.clone();
        rows.push(v.iter().map(|x| x % self.ell).collect());
        Matrix::from_rows(self.ell, &rows).rank() == self.dim()
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.iter().all(|v| other.contains(v))
    }

    /// Functionals vanishing on the subspace.
    pub fn annihilator(&self) -> Vec<Vec<u64>> {
        if self.basis.is_empty() {
            return Matrix::identity(self.ell, self.ambient).to_rows();
        }
        Matrix::from_rows(self.ell, &self.basis).kernel()
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        let mut fns = self.annihilator();
        fns.extend(other.annihilator());
        Self::from_functionals(self.ell, self.ambient, &fns)
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        Self::span(self.ell, self.ambient, &rows)
    }

    /// The coordinate complement spanned by unit vectors on non-pivot columns.
    pub fn echelon_complement(&self) -> Subspace {
        let pivots = self.pivots();
        let rows: Vec<Vec<u64>> = (0..self.ambient)
            .filter(|c| !pivots.contains(c))
            .map(|c| {
                let mut v = vec![0; self.ambient];
                v[c] = 1 % self.ell;
                v
            })
            .collect();
        Self::span(self.ell, self.ambient, &rows)
    }

    pub fn image(&self, m: &Matrix) -> Subspace {
        let rows: Vec<Vec<u64>> = self.basis.iter().map(|v| m.apply(v)).collect();
        Self::span(self.ell, m.rows(), &rows)
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[u64]) -> Option<Vec<u64>> {
        let f = fl(self.ell);
        let coords: Vec<u64> = self.pivots().iter().map(|&c| v[c] % self.ell).collect();
        let mut recon = vec![0; self.ambient];
        for (c, row) in coords.iter().zip(&self.basis) {
            for (r, x) in recon.iter_mut().zip(row) {
                *r = f.add(r, &f.mul(c, x));
            }
        }
        (recon.iter().zip(v).all(|(a, b)| *a == b % self.ell)).then_some(coords)
    }

    /// Every vector of the subspace (ℓ^dim of them).
    pub fn elements(&self) -> Vec<Vec<u64>> {
        let f = fl(self.ell);
        let total = (self.ell as usize).pow(self.dim() as u32);
        (0..total)
            .map(|mut idx| {
                let mut v = vec![0; self.ambient];
                for row in &self.basis {
                    let c = (idx % self.ell as usize) as u64;
                    idx /= self.ell as usize;
                    for (x, r) in v.iter_mut().zip(row) {
                        *x = f.add(x, &f.mul(&c, r));
                    }
                }
                v
            })
            .collect()
    }
}

/// Every vector of F_ℓ^n, in base-ℓ counting order.
pub fn all_vectors(ell: u64, n: usize) -> impl Iterator<Item = Vec<u64>> {
    let total = (ell as usize).pow(n as u32);
    (0..total).map(move |mut idx| {
        (0..n)
            .map(|_| {
                let d = (idx % ell as usize) as u64;
                idx /= ell as usize;
                d
            })
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn e(n: usize, i: usize) -> Vec<u64> {
        let mut v = vec![0; n];
        v[i] = 1;
        v
    }

    #[test]
    fn coordinate_intersection() {
        let h1 = Subspace::span(3, 4, &[e(4, 0), e(4, 2), e(4, 3)]);
        let h2 = Subspace::span(3, 4, &[e(4, 0), e(4, 1), e(4, 2)]);
        assert_eq!(h1.intersect(&h2), Subspace::span(3, 4, &[e(4, 0), e(4, 2)]));
    }

    #[test]
    fn inverse_and_determinant() {
        let m = Matrix::from_i64_rows(5, &[&[1, 2, 0], &[0, 1, 4], &[3, 0, 2]]);
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        assert_ne!(m.determinant(), 0);
        let singular = Matrix::from_i64_rows(5, &[&[1, 2], &[2, 4]]);
        assert!(singular.inverse().is_none());
        assert_eq!(singular.determinant(), 0);
    }

    proptest! {
        #[test]
        fn span_is_canonical(seed in proptest::collection::vec(0u64..5, 12), mix in proptest::collection::vec(0u64..5, 9)) {
            let rows: Vec<Vec<u64>> = seed.chunks(4).map(|c| c.to_vec()).collect();
            let a = Subspace::span(5, 4, &rows);
            // random recombination of the same rows spans the same space
            let m = Matrix::new(5, 3, 3, mix);
            if m.determinant() != 0 {
                let mixed = m.mul(&Matrix::from_rows(5, &rows)).to_rows();
                prop_assert_eq!(Subspace::span(5, 4, &mixed), a.clone());
            }
            for v in a.elements() {
                prop_assert!(a.contains(&v));
            }
            let kernel_dim = Matrix::from_rows(5, &rows).kernel().len();
            prop_assert_eq!(a.dim() + kernel_dim, 4);
        }

        #[test]
        fn intersection_matches_enumeration(x in proptest::collection::vec(0u64..3, 8), y in proptest::collection::vec(0u64..3, 8)) {
            let a = Subspace::span(3, 4, &x.chunks(4).map(|c| c.to_vec()).collect::<Vec<_>>());
            let b = Subspace::span(3, 4, &y.chunks(4).map(|c| c.to_vec()).collect::<Vec<_>>());
            let both = a.intersect(&b);
            let count = all_vectors(3, 4).filter(|v| a.contains(v) && b.contains(v)).count();
            prop_assert_eq!(count, 3usize.pow(both.dim() as u32));
            prop_assert_eq!(a.sum(&b).dim() + both.dim(), a.dim() + b.dim());
        }
    }
}
