//! Dense matrices over a [`Ring`] and twisted (semilinear) maps.

use crate::error::{Error, Result};
use crate::ring::{Elem, Ring};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Mat {
        Mat { rows, cols, data: vec![Elem::ZERO; rows * cols] }
    }

    pub fn identity(r: &Ring, n: usize) -> Mat {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = r.one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Elem) -> Mat {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    /// Matrix with integer entries.
    pub fn from_ints(r: &Ring, rows: &[Vec<i64>]) -> Mat {
        let cols = rows.first().map_or(0, |row| row.len());
        Mat::from_fn(rows.len(), cols, |i, j| r.from_int(rows[i][j]))
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(rows: usize, cols: &[Vec<Elem>]) -> Mat {
        Mat::from_fn(rows, cols.len(), |i, j| cols[j][i])
    }

    pub fn diag(r: &Ring, entries: &[Elem]) -> Mat {
        let mut m = Mat::zeros(entries.len(), entries.len());
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = e;
        }
        let _ = r;
        m
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

    pub fn col(&self, j: usize) -> Vec<Elem> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn row(&self, i: usize) -> Vec<Elem> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn columns(&self) -> Vec<Vec<Elem>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&e| e == Elem::ZERO)
    }

    pub fn map(&self, f: impl Fn(Elem) -> Elem) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&e| f(e)).collect() }
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn mul(&self, r: &Ring, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if r.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other[(k, j)];
                    if !r.is_zero(b) {
                        out[(i, j)] = r.add(out[(i, j)], r.mul(a, b));
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, r: &Ring, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).fold(r.zero(), |acc, j| r.add(acc, r.mul(self[(i, j)], v[j]))))
            .collect()
    }

    pub fn add(&self, r: &Ring, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat::from_fn(self.rows, self.cols, |i, j| r.add(self[(i, j)], other[(i, j)]))
    }

    pub fn sub(&self, r: &Ring, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat::from_fn(self.rows, self.cols, |i, j| r.sub(self[(i, j)], other[(i, j)]))
    }

    pub fn neg(&self, r: &Ring) -> Mat {
        self.map(|e| r.neg(e))
    }

    pub fn scale(&self, r: &Ring, c: Elem) -> Mat {
        self.map(|e| r.mul(c, e))
    }

    pub fn scale_int(&self, r: &Ring, c: i64) -> Mat {
        self.map(|e| r.scale(e, c))
    }

    /// Entrywise `sigma^k`.
    pub fn frobenius(&self, r: &Ring, k: i64) -> Mat {
        self.map(|e| r.frobenius(e, k))
    }

    /// Entrywise reduction mod p (result lives in the residue field).
    pub fn reduce(&self, r: &Ring) -> Mat {
        self.map(|e| r.reduce(e))
    }

    /// Coefficientwise lift into a higher-precision ring with the same residue field.
    pub fn lift(&self, target: &Ring) -> Mat {
        self.map(|e| target.lift(e))
    }

    /// Smallest p-adic valuation among the entries (`prec` for the zero matrix).
    pub fn min_valuation(&self, r: &Ring) -> u32 {
        self.data.iter().map(|&e| r.valuation(e)).min().unwrap_or(r.precision())
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Mat {
        Mat::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])])
    }

    /// Rectangular block `[r0, r0+h) x [c0, c0+w)`.
    pub fn block(&self, r0: usize, c0: usize, h: usize, w: usize) -> Mat {
        Mat::from_fn(h, w, |i, j| self[(r0 + i, c0 + j)])
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Mat) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self[(r0 + i, c0 + j)] = b[(i, j)];
            }
        }
    }

    pub fn hstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows);
        Mat::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols { self[(i, j)] } else { other[(i, j - self.cols)] }
        })
    }

    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols);
        Mat::from_fn(self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows { self[(i, j)] } else { other[(i - self.rows, j)] }
        })
    }

    pub fn block_diag(&self, other: &Mat) -> Mat {
        let mut m = Mat::zeros(self.rows + other.rows, self.cols + other.cols);
        m.set_block(0, 0, self);
        m.set_block(self.rows, self.cols, other);
        m
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// `row[dst] += c * row[src]`
    pub fn add_row_multiple(&mut self, r: &Ring, dst: usize, src: usize, c: Elem) {
        for j in 0..self.cols {
            let v = r.mul(c, self[(src, j)]);
            self[(dst, j)] = r.add(self[(dst, j)], v);
        }
    }

    /// `col[dst] += c * col[src]`
    pub fn add_col_multiple(&mut self, r: &Ring, dst: usize, src: usize, c: Elem) {
        for i in 0..self.rows {
            let v = r.mul(self[(i, src)], c);
            self[(i, dst)] = r.add(self[(i, dst)], v);
        }
    }

    pub fn scale_row(&mut self, r: &Ring, i: usize, c: Elem) {
        for j in 0..self.cols {
            self[(i, j)] = r.mul(c, self[(i, j)]);
        }
    }

    /// Reduced row echelon form using unit pivots. Over a field this is the
    /// usual RREF; over a Witt ring only unit pivots are used, so the result
    /// is an echelon form of the reduction with lifted entries.
    pub fn rref(&self, r: &Ring) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(piv) = (row..m.rows).find(|&i| r.is_unit(m[(i, col)])) else { continue };
            m.swap_rows(row, piv);
            let inv = r.inv(m[(row, col)]).expect("unit pivot");
            m.scale_row(r, row, inv);
            for i in 0..m.rows {
                if i != row && !r.is_zero(m[(i, col)]) {
                    let c = r.neg(m[(i, col)]);
                    m.add_row_multiple(r, i, row, c);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    /// Rank over a field.
    pub fn rank(&self, r: &Ring) -> usize {
        debug_assert!(r.is_field());
        self.rref(r).1.len()
    }

    /// Basis of the right kernel over a field, as the columns of the result.
    pub fn kernel(&self, r: &Ring) -> Mat {
        debug_assert!(r.is_field());
        let (m, pivots) = self.rref(r);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Mat::zeros(self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            out[(fc, k)] = r.one();
            for (pi, &pc) in pivots.iter().enumerate() {
                out[(pc, k)] = r.neg(m[(pi, fc)]);
            }
        }
        out
    }

    /// Inverse of a matrix invertible over the ring (unit determinant).
    pub fn inverse(&self, r: &Ring) -> Result<Mat> {
        if !self.is_square() {
            return Err(Error::NotInvertible("non-square matrix".into()));
        }
        let n = self.rows;
        let aug = self.hstack(&Mat::identity(r, n));
        let (m, pivots) = aug.rref(r);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::NotInvertible("singular matrix".into()));
        }
        Ok(m.block(0, n, n, n))
    }

    /// Some solution `x` of `self * x = b`, if one exists. Over a Witt ring
    /// only unit pivots are used and the candidate is checked, so a `None`
    /// there may also mean the columns do not span a direct summand.
    pub fn solve(&self, r: &Ring, b: &[Elem]) -> Option<Vec<Elem>> {
        let aug = self.hstack(&Mat::from_cols(self.rows, &[b.to_vec()]));
        let (m, pivots) = aug.rref(r);
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![r.zero(); self.cols];
        for (pi, &pc) in pivots.iter().enumerate() {
            x[pc] = m[(pi, self.cols)];
        }
        if !r.is_field() && self.apply(r, &x) != b {
            return None;
        }
        Some(x)
    }

    /// Right kernel over a Witt ring, valid when the rows reduce to an
    /// independent set modulo p (so the kernel is a free direct summand).
    pub fn kernel_of_surjection(&self, r: &Ring) -> Option<Mat> {
        let (m, pivots) = self.rref(r);
        if pivots.len() != self.rows {
            return None;
        }
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Mat::zeros(self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            out[(fc, k)] = r.one();
            for (pi, &pc) in pivots.iter().enumerate() {
                out[(pc, k)] = r.neg(m[(pi, fc)]);
            }
        }
        Some(out)
    }

    /// Columns forming a basis of the column space over a field (reduced echelon form).
    pub fn column_space(&self, r: &Ring) -> Mat {
        let (m, pivots) = self.transpose().rref(r);
        m.block(0, 0, pivots.len(), self.rows).transpose()
    }

    pub fn is_invertible(&self, r: &Ring) -> bool {
        self.inverse(r).is_ok()
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = Elem;
    fn index(&self, (i, j): (usize, usize)) -> &Elem {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Elem {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// The semilinear map `x -> A * sigma^t(x)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TwistedMap {
    pub mat: Mat,
    pub twist: i64,
}

impl TwistedMap {
    pub fn new(mat: Mat, twist: i64) -> TwistedMap {
        TwistedMap { mat, twist }
    }

    /// `self ∘ other`: `(A, t) ∘ (B, s) = (A sigma^t(B), t + s)`.
    pub fn compose(&self, r: &Ring, other: &TwistedMap) -> TwistedMap {
        TwistedMap { mat: self.mat.mul(r, &other.mat.frobenius(r, self.twist)), twist: self.twist + other.twist }
    }

    pub fn apply(&self, r: &Ring, x: &[Elem]) -> Vec<Elem> {
        let sx: Vec<Elem> = x.iter().map(|&e| r.frobenius(e, self.twist)).collect();
        self.mat.apply(r, &sx)
    }

    /// Image of the columns of `x`.
    pub fn apply_mat(&self, r: &Ring, x: &Mat) -> Mat {
        self.mat.mul(r, &x.frobenius(r, self.twist))
    }
}
