use crate::error::{Error, Result};
use crate::C64;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

/// Dense row-major complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

const ZERO: C64 = C64::new(0.0, 0.0);

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn scalar(n: usize, c: C64) -> Self {
        Self::identity(n) * c
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        CMat { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        Self::from_fn(r, c, |i, j| rows[i][j])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dim(&self) -> usize {
        debug_assert_eq!(self.rows, self.cols);
        self.rows
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn matmul(&self, other: &CMat) -> Result<CMat> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = CMat::zeros(self.rows, other.cols);
        let n = other.cols;
        for i in 0..self.rows {
            let orow = &mut out.data[i * n..(i + 1) * n];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let brow = &other.data[k * n..(k + 1) * n];
                for (o, b) in orow.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn comm(&self, other: &CMat) -> Result<CMat> {
        Ok(&self.matmul(other)? - &other.matmul(self)?)
    }

    pub fn kron(&self, other: &CMat) -> CMat {
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        let mut out = CMat::zeros(r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                if a == ZERO {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out[(i * other.rows + k, j * other.cols + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> CMat {
        CMat::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, c: C64) -> CMat {
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    /// self += c * other
    pub fn axpy(&mut self, c: C64, other: &CMat) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += c * b;
        }
    }

    /// Adds c * payload into the block starting at (r0, c0).
    pub fn add_block(&mut self, r0: usize, c0: usize, c: C64, payload: &CMat) {
        for i in 0..payload.rows {
            let row = (r0 + i) * self.cols + c0;
            for j in 0..payload.cols {
                self.data[row + j] += c * payload.data[i * payload.cols + j];
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> CMat {
        CMat::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)])
    }

    pub fn pow(&self, k: u32) -> CMat {
        let mut out = CMat::identity(self.rows);
        for _ in 0..k {
            out = out.matmul(self).expect("square");
        }
        out
    }

    /// Projection onto the identity: returns (c, max_abs(self - c·1)) with
    /// c = tr/n.
    pub fn split_identity(&self) -> (C64, f64) {
        let c = self.trace() / self.rows as f64;
        let rest = self - &CMat::scalar(self.rows, c);
        (c, rest.max_abs())
    }
}

impl Index<(usize, usize)> for CMat {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &CMat {
    type Output = CMat;
    fn add(self, o: &CMat) -> CMat {
        let mut out = self.clone();
        out += o;
        out
    }
}

impl Sub for &CMat {
    type Output = CMat;
    fn sub(self, o: &CMat) -> CMat {
        let mut out = self.clone();
        out -= o;
        out
    }
}

impl AddAssign<&CMat> for CMat {
    fn add_assign(&mut self, o: &CMat) {
        self.axpy(C64::new(1.0, 0.0), o);
    }
}

impl SubAssign<&CMat> for CMat {
    fn sub_assign(&mut self, o: &CMat) {
        self.axpy(C64::new(-1.0, 0.0), o);
    }
}

impl Mul for &CMat {
    type Output = CMat;
    fn mul(self, o: &CMat) -> CMat {
        self.matmul(o).expect("matrix shapes agree")
    }
}

impl Mul<C64> for CMat {
    type Output = CMat;
    fn mul(self, c: C64) -> CMat {
        self.scale(c)
    }
}

impl Mul<C64> for &CMat {
    type Output = CMat;
    fn mul(self, c: C64) -> CMat {
        self.scale(c)
    }
}

impl Neg for &CMat {
    type Output = CMat;
    fn neg(self) -> CMat {
        self.scale(C64::new(-1.0, 0.0))
    }
}
