use std::borrow::Cow;
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Dense vector over ℚ.
pub type Vector = Vec<Rational>;

// Below this many scalar operations the rayon fan-out costs more than it saves.
const PAR_THRESHOLD: usize = 1 << 14;

/// Dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Rational::one();
        }
        m
    }

    /// The all-ones matrix `J`.
    pub fn ones(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            data: vec![Rational::one(); rows * cols],
        }
    }

    pub fn diagonal(diag: Vec<Rational>) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, v) in diag.into_iter().enumerate() {
            m.data[i * n + i] = v;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        ExactMatrix { rows, cols, data }
    }

    /// Rows must all have the same length. An empty list yields a `0 × cols`
    /// matrix.
    pub fn from_rows(rows: Vec<Vector>, cols: usize) -> Result<Self> {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for (i, r) in rows.into_iter().enumerate() {
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has length {}, expected {cols}",
                    r.len()
                )));
            }
            data.extend(r);
        }
        Ok(ExactMatrix {
            rows: nrows,
            cols,
            data,
        })
    }

    /// Convenience constructor from small integers.
    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows: Vec<Vector> = rows
            .iter()
            .map(|r| r.iter().map(|&v| Rational::from_int(v)).collect())
            .collect();
        Self::from_rows(rows, cols).expect("ragged integer rows")
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

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn into_rows(self) -> Vec<Vector> {
        let cols = self.cols;
        if cols == 0 {
            return vec![Vec::new(); self.rows];
        }
        let mut out = Vec::with_capacity(self.rows);
        let mut it = self.data.into_iter();
        for _ in 0..self.rows {
            out.push(it.by_ref().take(cols).collect());
        }
        out
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn diag(&self) -> Vector {
        (0..self.rows.min(self.cols))
            .map(|i| self.get(i, i).clone())
            .collect()
    }

    pub fn trace(&self) -> Rational {
        self.diag().iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Rational::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    fn check_same_shape(&self, other: &Self, op: &str) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{op}: {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    fn zip_with(&self, other: &Self, op: &str, f: impl Fn(&Rational, &Rational) -> Rational + Sync) -> Result<Self> {
        self.check_same_shape(other, op)?;
        let data = self
            .data
            .par_iter()
            .zip(other.data.par_iter())
            .with_min_len(4096)
            .map(|(a, b)| f(a, b))
            .collect();
        Ok(ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, "add", |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, "sub", |a, b| a - b)
    }

    /// Entrywise (Hadamard) product.
    pub fn hadamard(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, "hadamard", |a, b| a * b)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.par_iter().with_min_len(4096).map(|a| a * c).collect(),
        }
    }

    /// `self + c·I`.
    pub fn add_scalar_identity(&self, c: &Rational) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("shift of a non-square matrix".into()));
        }
        let mut m = self.clone();
        for i in 0..self.rows {
            let v = m.get(i, i) + c;
            m.set(i, i, v);
        }
        Ok(m)
    }

    /// Least common multiple of the entry denominators.
    pub fn common_denominator(&self) -> Rational {
        self.data
            .iter()
            .filter(|v| !v.is_integer())
            .fold(Rational::one(), |l, v| Rational::int_lcm(&l, &v.denom_rational()))
    }

    /// Matrix product. Zero entries of `self` are skipped, so sparse left
    /// factors (adjacency and distance matrices) cost `O(nnz · cols)`.
    /// Both factors are first cleared of denominators so the inner loop runs
    /// on integers; the result is rescaled once per entry.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let la = self.common_denominator();
        let lb = other.common_denominator();
        if la.is_one() && lb.is_one() {
            return self.mul_raw(other);
        }
        let a = if la.is_one() { Cow::Borrowed(self) } else { Cow::Owned(self.scale(&la)) };
        let b = if lb.is_one() { Cow::Borrowed(other) } else { Cow::Owned(other.scale(&lb)) };
        let product = a.mul_raw(&b)?;
        Ok(product.scale(&(&la * &lb).recip()))
    }

    fn mul_raw(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "product of {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let (inner, cols) = (self.cols, other.cols);
        let mut data = vec![Rational::zero(); self.rows * cols];
        if cols == 0 {
            return Ok(ExactMatrix { rows: self.rows, cols, data });
        }
        let work = self.rows * inner * cols;
        let body = |(i, out): (usize, &mut [Rational])| {
            for k in 0..inner {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                let brow = other.row(k);
                if a.is_one() {
                    for (o, b) in out.iter_mut().zip(brow) {
                        if !b.is_zero() {
                            *o += b;
                        }
                    }
                } else {
                    for (o, b) in out.iter_mut().zip(brow) {
                        if !b.is_zero() {
                            *o = o.add_mul(a, b);
                        }
                    }
                }
            }
        };
        if work >= PAR_THRESHOLD {
            data.par_chunks_mut(cols).enumerate().for_each(body);
        } else {
            data.chunks_mut(cols).enumerate().for_each(body);
        }
        Ok(ExactMatrix {
            rows: self.rows,
            cols,
            data,
        })
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vector> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let row_dot = |i: usize| dot(self.row(i), v);
        if self.rows * self.cols >= PAR_THRESHOLD {
            Ok((0..self.rows).into_par_iter().map(row_dot).collect())
        } else {
            Ok((0..self.rows).map(row_dot).collect())
        }
    }
}

/// `Σ a_i b_i`, skipping zeros.
pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    let mut acc = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc = acc.add_mul(x, y);
        }
    }
    acc
}

/// `Σ c_k v_k` for equal-length vectors.
pub fn linear_combination<'a>(
    terms: impl IntoIterator<Item = (Rational, &'a [Rational])>,
    len: usize,
) -> Vector {
    let mut acc = vec![Rational::zero(); len];
    for (c, v) in terms {
        if c.is_zero() {
            continue;
        }
        for (a, b) in acc.iter_mut().zip(v) {
            if !b.is_zero() {
                *a = a.add_mul(&c, b);
            }
        }
    }
    acc
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}
