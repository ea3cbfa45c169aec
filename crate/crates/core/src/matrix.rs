//! Dense exact matrices over the integers and rationals, plus the
//! whitespace-separated matrix file format:
//!
//! ```text
//! rows cols
//! a11 a12 ...
//! ...
//! ```
//!
//! Entries are integers or fractions `p/q`. Lines starting with `#` are ignored.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type IntMatrix = Matrix<BigInt>;
pub type RatMatrix = Matrix<BigRational>;

impl<T: Clone + Zero + One> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = T::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
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

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Copies `block` into `self` with its top-left corner at `(r, c)`.
    pub fn put_block(&mut self, r: usize, c: usize, block: &Matrix<T>) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r + i, c + j, block.get(i, j).clone());
            }
        }
    }

    pub fn block(&self, r: usize, c: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |i, j| self.get(r + i, c + j).clone())
    }
}

impl<T> Matrix<T>
where
    T: Clone + Zero + One,
    for<'a> &'a T: Mul<&'a T, Output = T>,
{
    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let idx = i * rhs.cols + j;
                    out.data[idx] = out.data[idx].clone() + a * rhs.get(k, j);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix on vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(T::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    /// `x^T self y`.
    pub fn bilinear(&self, x: &[T], y: &[T]) -> Result<T> {
        let sy = self.mul_vec(y)?;
        if x.len() != self.rows {
            return Err(Error::DimensionMismatch("bilinear form arity".into()));
        }
        Ok(x.iter().zip(&sy).fold(T::zero(), |acc, (a, b)| acc + a * b))
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(
                "power of a non-square matrix".into(),
            ));
        }
        let mut acc = Self::identity(self.rows);
        for _ in 0..k {
            acc = acc.checked_mul(self)?;
        }
        Ok(acc)
    }
}

impl<T: Clone + Zero + One + Add<Output = T>> Add for &Matrix<T> {
    type Output = Matrix<T>;
    fn add(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }
}

impl<T: Clone + Zero + One + Sub<Output = T>> Sub for &Matrix<T> {
    type Output = Matrix<T>;
    fn sub(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }
}

impl<T: Clone + Neg<Output = T>> Neg for &Matrix<T> {
    type Output = Matrix<T>;
    fn neg(self) -> Matrix<T> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| -a.clone()).collect(),
        }
    }
}

impl IntMatrix {
    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        Matrix {
            rows,
            cols,
            data: entries.iter().map(|&x| BigInt::from(x)).collect(),
        }
    }

    pub fn to_rational(&self) -> RatMatrix {
        self.map(|x| BigRational::from_integer(x.clone()))
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && *self == self.transpose()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(
                "determinant of a non-square matrix".into(),
            ));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a.get(i, k).is_zero()) else {
                    return Ok(BigInt::zero());
                };
                for j in 0..n {
                    a.data.swap(k * n + j, p * n + j);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.set(i, j, v);
                }
            }
            prev = a.get(k, k).clone();
        }
        Ok(sign * a.get(n - 1, n - 1))
    }

    /// Inverse over the integers, when the determinant is a unit.
    pub fn unimodular_inverse(&self) -> Result<IntMatrix> {
        let inv = self.to_rational().inverse()?;
        if inv.data.iter().any(|x| !x.is_integer()) {
            return Err(Error::DimensionMismatch("matrix is not unimodular".into()));
        }
        Ok(inv.map(|x| x.to_integer()))
    }
}

impl RatMatrix {
    /// Integer matrix if every entry is integral.
    pub fn to_integer(&self) -> Result<IntMatrix> {
        if let Some(x) = self.data.iter().find(|x| !x.is_integer()) {
            return Err(Error::parse(format!("expected integer entry, found {x}")));
        }
        Ok(self.map(|x| x.to_integer()))
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self) -> Result<RatMatrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(
                "inverse of a non-square matrix".into(),
            ));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = RatMatrix::identity(n);
        for col in 0..n {
            let Some(p) = (col..n).find(|&i| !a.get(i, col).is_zero()) else {
                return Err(Error::DimensionMismatch("singular matrix".into()));
            };
            if p != col {
                for j in 0..n {
                    a.data.swap(col * n + j, p * n + j);
                    inv.data.swap(col * n + j, p * n + j);
                }
            }
            let piv = a.get(col, col).clone();
            for j in 0..n {
                a.set(col, j, a.get(col, j) / &piv);
                inv.set(col, j, inv.get(col, j) / &piv);
            }
            for i in 0..n {
                if i == col || a.get(i, col).is_zero() {
                    continue;
                }
                let f = a.get(i, col).clone();
                for j in 0..n {
                    a.set(i, j, a.get(i, j) - &f * a.get(col, j));
                    inv.set(i, j, inv.get(i, j) - &f * inv.get(col, j));
                }
            }
        }
        Ok(inv)
    }

    /// `(positive, negative, zero)` counts of a symmetric form, by congruence
    /// diagonalization.
    pub fn inertia(&self) -> Result<(usize, usize, usize)> {
        if !self.is_square() || *self != self.transpose() {
            return Err(Error::DimensionMismatch(
                "inertia needs a symmetric matrix".into(),
            ));
        }
        let mut a = self.clone();
        let mut active: Vec<usize> = (0..a.rows).collect();
        let (mut pos, mut neg, mut zero) = (0, 0, 0);
        while !active.is_empty() {
            let pivot = match active.iter().copied().find(|&i| !a.get(i, i).is_zero()) {
                Some(i) => i,
                None => {
                    // all diagonal entries vanish: fold an off-diagonal pair in
                    let pair = active.iter().copied().find_map(|i| {
                        active
                            .iter()
                            .copied()
                            .find(|&j| j != i && !a.get(i, j).is_zero())
                            .map(|j| (i, j))
                    });
                    let Some((i, j)) = pair else {
                        zero += active.len();
                        break;
                    };
                    // e_i <- e_i + e_j
                    let n = a.rows;
                    for k in 0..n {
                        let v = a.get(i, k) + a.get(j, k);
                        a.set(i, k, v);
                    }
                    for k in 0..n {
                        let v = a.get(k, i) + a.get(k, j);
                        a.set(k, i, v);
                    }
                    i
                }
            };
            let d = a.get(pivot, pivot).clone();
            if d.is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
            active.retain(|&i| i != pivot);
            for &i in &active {
                let f = a.get(i, pivot) / &d;
                if f.is_zero() {
                    continue;
                }
                for &j in &active {
                    let v = a.get(i, j) - &f * a.get(pivot, j);
                    a.set(i, j, v);
                }
                a.set(i, pivot, BigRational::zero());
            }
            for &j in &active {
                a.set(pivot, j, BigRational::zero());
            }
        }
        Ok((pos, neg, zero))
    }

    /// Parses the dense matrix file format.
    pub fn parse(text: &str) -> Result<RatMatrix> {
        let mut tokens = text
            .lines()
            .filter(|l| !l.trim_start().starts_with('#'))
            .flat_map(str::split_whitespace);
        let mut dim = |what: &str| -> Result<usize> {
            let t = tokens
                .next()
                .ok_or_else(|| Error::parse(format!("missing {what} in matrix header")))?;
            t.parse::<usize>()
                .map_err(|_| Error::parse(format!("bad {what} {t:?} in matrix header")))
        };
        let rows = dim("row count")?;
        let cols = dim("column count")?;
        if rows == 0 || cols == 0 || rows.saturating_mul(cols) > 1 << 20 {
            return Err(Error::parse(format!(
                "unsupported matrix shape {rows}x{cols}"
            )));
        }
        let mut data = Vec::with_capacity(rows * cols);
        for t in tokens {
            data.push(parse_rational(t)?);
        }
        if data.len() != rows * cols {
            return Err(Error::parse(format!(
                "expected {} entries, found {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }
}

pub fn parse_rational(t: &str) -> Result<BigRational> {
    let bad = || Error::parse(format!("bad matrix entry {t:?}"));
    let int = |s: &str| -> Result<BigInt> {
        let digits = s.strip_prefix('-').unwrap_or(s);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        s.parse().map_err(|_| bad())
    };
    match t.split_once('/') {
        Some((p, q)) => {
            let q = int(q)?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(int(p)?, q))
        }
        None => Ok(BigRational::from_integer(int(t)?)),
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    /// Writes the matrix file format.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.data[i * self.cols..(i + 1) * self.cols]
                .iter()
                .map(ToString::to_string)
                .collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Gaussian rational `re + i im`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRat { re, im }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl Mul for &GaussRat {
    type Output = GaussRat;
    fn mul(self, rhs: &GaussRat) -> GaussRat {
        GaussRat {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Sub for GaussRat {
    type Output = GaussRat;
    fn sub(self, rhs: GaussRat) -> GaussRat {
        GaussRat {
            re: self.re - rhs.re,
            im: self.im - rhs.im,
        }
    }
}
