//! Dense univariate polynomials over Q, lowest degree first.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::modp::PolyFp;
use super::modular::{half_word_primes, residue, Crt};
use super::{content, denominator_lcm, int_to_rat, rat, Rational};
use crate::error::{Error, Result};

/// A polynomial with rational coefficients. The coefficient vector never has
/// trailing zeros, so the zero polynomial is the empty vector.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct PolynomialQ {
    coeffs: Vec<Rational>,
}

impl PolynomialQ {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        PolynomialQ { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn from_integers(coeffs: &[BigInt]) -> Self {
        Self::new(coeffs.iter().map(int_to_rat).collect())
    }

    pub fn zero() -> Self {
        PolynomialQ { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The monomial c * x^n.
    pub fn monomial(c: Rational, n: usize) -> Self {
        let mut v = vec![Rational::zero(); n + 1];
        v[n] = c;
        Self::new(v)
    }

    /// x - a
    pub fn linear_root(a: Rational) -> Self {
        Self::new(vec![-a, Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    /// Degree, with -1 for the zero polynomial.
    pub fn degree(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(One::is_one)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.leading();
        Self::new(self.coeffs.iter().map(|c| c / &lc).collect())
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rat(i as i64))
                .collect(),
        )
    }

    /// Quotient and remainder; errors on division by zero.
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self)> {
        if d.is_zero() {
            return Err(Error::domain("polynomial division by zero"));
        }
        let dd = d.coeffs.len() - 1;
        let lc = d.leading();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut q = vec![Rational::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = &r[i + dd] / &lc;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[i + j] -= &c * dc;
            }
            q[i] = c;
        }
        r.truncate(dd);
        Ok((Self::new(q), Self::new(r)))
    }

    pub fn rem(&self, d: &Self) -> Result<Self> {
        Ok(self.div_rem(d)?.1)
    }

    /// Exact division; errors if `d` does not divide `self`.
    pub fn exact_div(&self, d: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(d)?;
        if !r.is_zero() {
            return Err(Error::domain("polynomial division is not exact"));
        }
        Ok(q)
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    ///
    /// Monic gcds modulo primes not dividing either leading coefficient have
    /// degree at least that of the true gcd; those of least degree are combined
    /// by CRT and rational reconstruction, and a candidate is accepted once it
    /// divides both inputs exactly.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return if self.is_zero() { other.monic() } else { self.monic() };
        }
        let (_, a) = self.primitive_integer();
        let (_, b) = other.primitive_integer();
        let (la, lb) = (&a[a.len() - 1], &b[b.len() - 1]);
        let mut best = a.len().min(b.len());
        let mut crt = Crt::new(0);
        let mut verify_at = 0;
        for p in half_word_primes() {
            if residue(la, p) == 0 || residue(lb, p) == 0 {
                continue;
            }
            let fp = |v: &[BigInt]| PolyFp::new(p, v.iter().map(|x| residue(x, p)).collect());
            let g = fp(&a).gcd(&fp(&b)).monic();
            let d = g.degree() as usize;
            if d == 0 {
                return Self::one();
            }
            if d > best {
                continue;
            }
            if d < best || crt.is_empty() {
                best = d;
                crt = Crt::new(d + 1);
                verify_at = 0;
            }
            crt.add(p, &g.c);
            if crt.bits() < verify_at {
                continue;
            }
            if let Some(vals) = crt.reconstruct() {
                let cand = Self::new(vals);
                if self.rem(&cand).is_ok_and(|r| r.is_zero()) && other.rem(&cand).is_ok_and(|r| r.is_zero()) {
                    return cand;
                }
            }
            verify_at = crt.bits() + crt.bits() / 4 + 1;
        }
        unreachable!("prime stream is infinite")
    }

    /// Monic gcd by the Euclidean algorithm over Q; the slow independent route.
    pub fn gcd_euclid(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            // The primitive-part rescaling keeps coefficient sizes in check.
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r.primitive_part_q();
        }
        a.monic()
    }

    /// Same polynomial rescaled to have coprime integer coefficients with positive
    /// leading coefficient, returned as a rational polynomial.
    fn primitive_part_q(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self::from_integers(&self.primitive_integer().1)
    }

    /// Splits the polynomial as `content * primitive`, where `primitive` has coprime
    /// integer coefficients and a positive leading coefficient.
    pub fn primitive_integer(&self) -> (Rational, Vec<BigInt>) {
        if self.is_zero() {
            return (Rational::zero(), Vec::new());
        }
        let l = denominator_lcm(self.coeffs.iter());
        let mut ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&l / c.denom()))
            .collect();
        let mut g = content(&ints);
        if ints.last().is_some_and(|x| x.is_negative()) {
            g = -g;
        }
        for x in ints.iter_mut() {
            *x /= &g;
        }
        (Rational::new(g, l), ints)
    }

    /// Integer coefficient vector, if every coefficient is an integer.
    pub fn to_integers(&self) -> Option<Vec<BigInt>> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }

    pub fn has_integer_coefficients(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut r = Self::one();
        for _ in 0..e {
            r = &r * self;
        }
        r
    }

    /// Composition self(other(x)).
    pub fn compose(&self, other: &Self) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| &(&acc * other) + &Self::constant(c.clone()))
    }

    /// Rational roots, ascending, via the rational root test on the primitive part.
    pub fn rational_roots(&self) -> Vec<Rational> {
        if self.degree() < 1 {
            return Vec::new();
        }
        let (_, ints) = self.primitive_integer();
        let mut roots = Vec::new();
        // x = 0 is handled separately so the constant-term divisor search stays finite.
        let first_nonzero = ints.iter().position(|c| !c.is_zero()).unwrap_or(0);
        if first_nonzero > 0 {
            roots.push(Rational::zero());
        }
        let ints = &ints[first_nonzero..];
        if ints.len() < 2 {
            return roots;
        }
        let a0 = ints[0].abs();
        let an = ints[ints.len() - 1].abs();
        let num_divs = small_divisors(&a0);
        let den_divs = small_divisors(&an);
        let reduced = Self::from_integers(ints);
        for p in &num_divs {
            for q in &den_divs {
                for sign in [1i64, -1] {
                    let cand = Rational::new(p * BigInt::from(sign), q.clone());
                    if !roots.contains(&cand) && reduced.eval(&cand).is_zero() {
                        roots.push(cand);
                    }
                }
            }
        }
        roots.sort();
        roots
    }

    /// Serializes as a list of [numerator, denominator] decimal-string pairs.
    pub fn to_string_pairs(&self) -> Vec<[String; 2]> {
        self.coeffs
            .iter()
            .map(|c| [c.numer().to_string(), c.denom().to_string()])
            .collect()
    }

    pub fn from_string_pairs(pairs: &[[String; 2]]) -> Result<Self> {
        let coeffs = pairs
            .iter()
            .map(|[n, d]| {
                let n: BigInt = n.parse().map_err(|_| Error::domain(format!("bad integer {n}")))?;
                let d: BigInt = d.parse().map_err(|_| Error::domain(format!("bad integer {d}")))?;
                if d.is_zero() {
                    return Err(Error::domain("zero denominator"));
                }
                Ok(Rational::new(n, d))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(coeffs))
    }
}

/// Positive divisors of |n|. Only used by the rational root test, where the inputs
/// are the extreme coefficients of small test polynomials.
fn small_divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    if n.is_zero() {
        return vec![BigInt::one()];
    }
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            out.push(d.clone());
            let q = &n / &d;
            if q != d {
                out.push(q);
            }
        }
        d += 1;
    }
    out
}

impl Serialize for PolynomialQ {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_string_pairs().serialize(s)
    }
}

impl<'de> Deserialize<'de> for PolynomialQ {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let pairs = Vec::<[String; 2]>::deserialize(d)?;
        PolynomialQ::from_string_pairs(&pairs).map_err(serde::de::Error::custom)
    }
}

impl Add for &PolynomialQ {
    type Output = PolynomialQ;
    fn add(self, rhs: &PolynomialQ) -> PolynomialQ {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        PolynomialQ::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &PolynomialQ {
    type Output = PolynomialQ;
    fn sub(self, rhs: &PolynomialQ) -> PolynomialQ {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        PolynomialQ::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &PolynomialQ {
    type Output = PolynomialQ;
    fn mul(self, rhs: &PolynomialQ) -> PolynomialQ {
        if self.is_zero() || rhs.is_zero() {
            return PolynomialQ::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        PolynomialQ::new(out)
    }
}

impl Neg for &PolynomialQ {
    type Output = PolynomialQ;
    fn neg(self) -> PolynomialQ {
        PolynomialQ::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for PolynomialQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let show_coeff = i == 0 || !a.is_one();
            if show_coeff {
                write!(f, "{a}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "{}x", if show_coeff { "*" } else { "" })?,
                _ => write!(f, "{}x^{i}", if show_coeff { "*" } else { "" })?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for PolynomialQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolynomialQ({self})")
    }
}
