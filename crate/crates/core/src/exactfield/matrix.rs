use std::fmt::{self, Debug};

use super::{Field, Scalar};

/// A commutative ring whose elements know the field they live over.
///
/// Implemented by [`Scalar`], polynomials and Laurent polynomials so that the
/// same dense matrix type serves all of them.
pub trait RingElem: Clone + PartialEq + Debug {
    fn zero(field: Field) -> Self;
    fn one(field: Field) -> Self;
    fn field(&self) -> Field;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn from_scalar(c: &Scalar) -> Self;
}

impl RingElem for Scalar {
    fn zero(field: Field) -> Self {
        field.zero()
    }
    fn one(field: Field) -> Self {
        field.one()
    }
    fn field(&self) -> Field {
        Scalar::field(self)
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_scalar(c: &Scalar) -> Self {
        c.clone()
    }
}

/// Dense row-major matrix over a ring.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<R> {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<R>,
}

pub type Mat = Matrix<Scalar>;

impl<R: RingElem> Matrix<R> {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Matrix { field, rows, cols, data: vec![R::zero(field); rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = R::one(field);
        }
        m
    }

    pub fn from_vec(field: Field, rows: usize, cols: usize, data: Vec<R>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has wrong length");
        Matrix { field, rows, cols, data }
    }

    pub fn from_rows(field: Field, rows: Vec<Vec<R>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        Matrix { field, rows: r, cols: c, data }
    }

    /// Single column built from a vector.
    pub fn column_vector(field: Field, v: Vec<R>) -> Self {
        let n = v.len();
        Matrix { field, rows: n, cols: 1, data: v }
    }

    pub fn diagonal(field: Field, entries: &[R]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(field, n, n);
        for (i, e) in entries.iter().enumerate() {
            m.data[i * n + i] = e.clone();
        }
        m
    }

    pub fn field(&self) -> Field {
        self.field
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

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[R] {
        &self.data
    }

    pub fn row(&self, i: usize) -> Vec<R> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<R> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(RingElem::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Self::identity(self.field, self.rows)
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix { field: self.field, rows: self.cols, cols: self.rows, data }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = out.data[idx].add(&a.mul(b));
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "matrix sum shape mismatch");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.add(b)).collect();
        Matrix { field: self.field, rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "matrix difference shape mismatch");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.sub(b)).collect();
        Matrix { field: self.field, rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> Self {
        self.map(RingElem::neg)
    }

    pub fn scale(&self, c: &R) -> Self {
        self.map(|a| c.mul(a))
    }

    pub fn map(&self, f: impl Fn(&R) -> R) -> Self {
        Matrix { field: self.field, rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    /// Entrywise conversion into another ring over the same field.
    pub fn convert<S: RingElem>(&self, f: impl Fn(&R) -> S) -> Matrix<S> {
        Matrix { field: self.field, rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let mut data = Vec::with_capacity(self.data.len() + other.data.len());
        for i in 0..self.rows {
            data.extend_from_slice(&self.data[i * self.cols..(i + 1) * self.cols]);
            data.extend_from_slice(&other.data[i * other.cols..(i + 1) * other.cols]);
        }
        Matrix { field: self.field, rows: self.rows, cols: self.cols + other.cols, data }
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix { field: self.field, rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn hconcat(field: Field, rows: usize, blocks: &[Self]) -> Self {
        blocks.iter().fold(Self::zeros(field, rows, 0), |acc, b| acc.hstack(b))
    }

    pub fn vconcat(field: Field, cols: usize, blocks: &[Self]) -> Self {
        blocks.iter().fold(Self::zeros(field, 0, cols), |acc, b| acc.vstack(b))
    }

    pub fn block_diag(&self, other: &Self) -> Self {
        let mut m = Self::zeros(self.field, self.rows + other.rows, self.cols + other.cols);
        m.paste(0, 0, self);
        m.paste(self.rows, self.cols, other);
        m
    }

    pub fn block_diag_all(field: Field, blocks: &[Self]) -> Self {
        blocks.iter().fold(Self::zeros(field, 0, 0), |acc, b| acc.block_diag(b))
    }

    /// Overwrites the block starting at `(r0, c0)` with `block`.
    pub fn paste(&mut self, r0: usize, c0: usize, block: &Self) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j).clone());
            }
        }
    }

    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        let mut data = Vec::with_capacity((r1 - r0) * (c1 - c0));
        for i in r0..r1 {
            data.extend_from_slice(&self.data[i * self.cols + c0..i * self.cols + c1]);
        }
        Matrix { field: self.field, rows: r1 - r0, cols: c1 - c0, data }
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(&self.data[i * self.cols..(i + 1) * self.cols]);
        }
        Matrix { field: self.field, rows: idx.len(), cols: self.cols, data }
    }

    pub fn select_cols(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * self.rows);
        for i in 0..self.rows {
            for &j in idx {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix { field: self.field, rows: self.rows, cols: idx.len(), data }
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let mut m = Self::zeros(self.field, self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                m.paste(i * other.rows, j * other.cols, &other.scale(a));
            }
        }
        m
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[dst] += c * row[src]`.
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, c: &R) {
        for j in 0..self.cols {
            let s = self.get(src, j);
            if s.is_zero() {
                continue;
            }
            let v = self.get(dst, j).add(&c.mul(s));
            self.set(dst, j, v);
        }
    }

    /// `col[dst] += c * col[src]`.
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, c: &R) {
        for i in 0..self.rows {
            let s = self.get(i, src);
            if s.is_zero() {
                continue;
            }
            let v = self.get(i, dst).add(&s.mul(c));
            self.set(i, dst, v);
        }
    }

    pub fn scale_row(&mut self, i: usize, c: &R) {
        for j in 0..self.cols {
            let v = c.mul(self.get(i, j));
            self.set(i, j, v);
        }
    }

    pub fn scale_col(&mut self, j: usize, c: &R) {
        for i in 0..self.rows {
            let v = self.get(i, j).mul(c);
            self.set(i, j, v);
        }
    }

    /// Indices of columns that are not identically zero.
    pub fn nonzero_cols(&self) -> Vec<usize> {
        (0..self.cols).filter(|&j| (0..self.rows).any(|i| !self.get(i, j).is_zero())).collect()
    }
}

impl<R: Debug> Debug for Matrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "{:?}", &self.data[i * self.cols..(i + 1) * self.cols])?;
            if i + 1 < self.rows {
                write!(f, ", ")?;
            }
        }
        write!(f, "]")
    }
}

impl Mat {
    /// Matrix from integer rows, mapped into the field.
    pub fn from_ints(field: Field, rows: &[&[i64]]) -> Mat {
        Mat::from_rows(field, rows.iter().map(|r| r.iter().map(|&x| field.int(x)).collect()).collect())
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
            if i + 1 < self.rows {
                write!(f, ",")?;
            }
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_kron() {
        let q = Field::Rational;
        let a = Mat::from_ints(q, &[&[1, 2], &[3, 4]]);
        let i = Mat::identity(q, 2);
        assert_eq!(a.mul(&i), a);
        assert_eq!(a.mul(&a), Mat::from_ints(q, &[&[7, 10], &[15, 22]]));
        let k = i.kron(&a);
        assert_eq!(k.rows(), 4);
        assert_eq!(k.submatrix(2, 4, 2, 4), a);
        assert!(k.submatrix(0, 2, 2, 4).is_zero());
    }

    #[test]
    fn stacking() {
        let f = Field::Prime(5);
        let a = Mat::from_ints(f, &[&[1], &[2]]);
        let b = Mat::from_ints(f, &[&[3], &[4]]);
        let h = a.hstack(&b);
        assert_eq!(h, Mat::from_ints(f, &[&[1, 3], &[2, 4]]));
        assert_eq!(h.transpose(), a.transpose().vstack(&b.transpose()));
        assert_eq!(h.select_cols(&[1]), b);
    }
}
