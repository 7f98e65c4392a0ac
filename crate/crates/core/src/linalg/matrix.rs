use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{denominator_lcm, rat, PolynomialQ, Rational};
use crate::error::{Error, Result};

/// Dense rational matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MatrixQ {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl MatrixQ {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        MatrixQ {
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

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::domain("ragged rows"));
        }
        Ok(MatrixQ {
            rows: nrows,
            cols: ncols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Builds a matrix with a fixed column count; allows zero rows.
    pub fn from_rows_with_cols(cols: usize, rows: Vec<Vec<Rational>>) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "row length mismatch");
        MatrixQ {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows_with_cols(cols, rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect())
    }

    pub fn diagonal(entries: &[Rational]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m.data[i * n + i] = e.clone();
        }
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

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, s: &Rational) -> Self {
        MatrixQ {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    /// Row vector times matrix.
    pub fn left_apply(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![Rational::zero(); self.cols];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (o, m) in out.iter_mut().zip(self.row(i)) {
                if !m.is_zero() {
                    *o += vi * m;
                }
            }
        }
        out
    }

    pub fn try_mul(&self, rhs: &MatrixQ) -> Result<MatrixQ> {
        if self.cols != rhs.rows {
            return Err(Error::domain(format!(
                "dimension mismatch: {}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        // Integer products with one common denominator per output row.
        let (db, b) = rhs.clear_denominators();
        let b_rows: Vec<Vec<(usize, BigInt)>> = (0..rhs.rows)
            .map(|k| {
                (0..rhs.cols)
                    .filter(|&j| !b[k * rhs.cols + j].is_zero())
                    .map(|j| (j, b[k * rhs.cols + j].clone()))
                    .collect()
            })
            .collect();
        let data: Vec<Rational> = (0..self.rows)
            .into_par_iter()
            .flat_map_iter(|i| {
                let row = self.row(i);
                let da = denominator_lcm(row.iter());
                let mut acc = vec![BigInt::zero(); rhs.cols];
                for (k, a) in row.iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    let a = a.numer() * (&da / a.denom());
                    for (j, x) in &b_rows[k] {
                        acc[*j] += &a * x;
                    }
                }
                let den = &da * &db;
                acc.into_iter().map(move |x| Rational::new(x, den.clone()))
            })
            .collect();
        Ok(MatrixQ {
            rows: self.rows,
            cols: rhs.cols,
            data,
        })
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &MatrixQ) -> Result<MatrixQ> {
        if self.cols != other.cols && self.rows > 0 && other.rows > 0 {
            return Err(Error::domain("vstack column mismatch"));
        }
        let cols = if self.rows > 0 { self.cols } else { other.cols };
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(MatrixQ {
            rows: self.rows + other.rows,
            cols,
            data,
        })
    }

    /// Places `other` to the right of `self`.
    pub fn hstack(&self, other: &MatrixQ) -> Result<MatrixQ> {
        if self.rows != other.rows {
            return Err(Error::domain("hstack row mismatch"));
        }
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            data.extend(self.row(i).iter().cloned());
            data.extend(other.row(i).iter().cloned());
        }
        Ok(MatrixQ {
            rows: self.rows,
            cols,
            data,
        })
    }

    /// Evaluates a polynomial at a square matrix by Horner's rule.
    pub fn eval_poly(&self, p: &PolynomialQ) -> Result<MatrixQ> {
        if !self.is_square() {
            return Err(Error::domain("polynomial evaluation needs a square matrix"));
        }
        let n = self.rows;
        let mut acc = MatrixQ::zeros(n, n);
        for c in p.coeffs().iter().rev() {
            acc = acc.try_mul(self)?;
            for i in 0..n {
                acc.data[i * n + i] += c;
            }
        }
        Ok(acc)
    }

    /// True when every entry is an integer.
    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.is_integer())
    }

    /// Common denominator d and the integer matrix d * self.
    pub fn clear_denominators(&self) -> (BigInt, Vec<BigInt>) {
        let d = denominator_lcm(self.data.iter());
        let ints = self
            .data
            .iter()
            .map(|x| x.numer() * (&d / x.denom()))
            .collect();
        (d, ints)
    }

    pub fn commutes_with(&self, other: &MatrixQ) -> bool {
        match (self.try_mul(other), other.try_mul(self)) {
            (Ok(a), Ok(b)) => a == b,
            _ => false,
        }
    }

    /// Matrix entries as decimal "num/den" strings, row-major. Used by the cache.
    pub fn to_string_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.to_string()).collect())
            .collect()
    }

    pub fn from_string_rows(cols: usize, rows: &[Vec<String>]) -> Result<MatrixQ> {
        let parsed = rows
            .iter()
            .map(|r| {
                if r.len() != cols {
                    return Err(Error::Cache("matrix row length mismatch".into()));
                }
                r.iter()
                    .map(|s| parse_rational(s))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_rows_with_cols(cols, parsed))
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Cache(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.parse().map_err(|_| bad())?;
            let d: BigInt = d.parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<String>>,
}

impl Serialize for MatrixQ {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixRepr {
            rows: self.rows,
            cols: self.cols,
            entries: self.to_string_rows(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MatrixQ {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = MatrixRepr::deserialize(d)?;
        if r.entries.len() != r.rows {
            return Err(serde::de::Error::custom("row count mismatch"));
        }
        MatrixQ::from_string_rows(r.cols, &r.entries).map_err(serde::de::Error::custom)
    }
}

impl Mul for &MatrixQ {
    type Output = MatrixQ;
    fn mul(self, rhs: &MatrixQ) -> MatrixQ {
        self.try_mul(rhs).expect("matrix dimension mismatch")
    }
}

impl Add for &MatrixQ {
    type Output = MatrixQ;
    fn add(self, rhs: &MatrixQ) -> MatrixQ {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        MatrixQ {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &MatrixQ {
    type Output = MatrixQ;
    fn sub(self, rhs: &MatrixQ) -> MatrixQ {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        MatrixQ {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Debug for MatrixQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "MatrixQ {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}
