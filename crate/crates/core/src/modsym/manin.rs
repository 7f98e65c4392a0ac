//! Manin symbols, the polynomial action of integer matrices, and reduction of
//! arbitrary path symbols to Manin symbols by continued fractions.
//!
//! Monomials of degree w = k - 2 are indexed by m, standing for X^m Y^(w-m).
//! A 2×2 integer matrix g = [a, b; c, d] acts on the left by
//! (g·P)(X, Y) = P(dX - bY, -cX + aY).
//! The Manin symbol [P, (c:d)] is g·(P{0, ∞}) = (g·P){g0, g∞} for any g in
//! SL₂(Z) with bottom row lifting (c:d).

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::p1::P1List;

/// Row-major 2×2 integer matrix [a, b, c, d].
pub type Mat2 = [i64; 4];

pub fn mat_mul(x: &Mat2, y: &Mat2) -> Mat2 {
    [
        x[0] * y[0] + x[1] * y[2],
        x[0] * y[1] + x[1] * y[3],
        x[2] * y[0] + x[3] * y[2],
        x[2] * y[1] + x[3] * y[3],
    ]
}

pub fn det(x: &Mat2) -> i64 {
    x[0] * x[3] - x[1] * x[2]
}

/// Binomial coefficients C(n, i) for n ≤ w.
#[derive(Clone, Debug)]
pub struct Binomials {
    rows: Vec<Vec<BigInt>>,
}

impl Binomials {
    pub fn new(w: usize) -> Self {
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(w + 1);
        for n in 0..=w {
            let mut row = vec![BigInt::one(); n + 1];
            for i in 1..n {
                row[i] = &rows[n - 1][i - 1] + &rows[n - 1][i];
            }
            rows.push(row);
        }
        Binomials { rows }
    }

    pub fn get(&self, n: usize, i: usize) -> &BigInt {
        &self.rows[n][i]
    }
}

fn powers(x: i64, w: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(w + 1);
    let mut acc = BigInt::one();
    let xb = BigInt::from(x);
    for _ in 0..=w {
        out.push(acc.clone());
        acc *= &xb;
    }
    out
}

/// Coefficients (index j for X^j Y^(w-j)) of g·(X^m Y^(w-m))
/// = (dX - bY)^m (-cX + aY)^(w-m).
pub fn act_on_monomial(g: &Mat2, m: usize, w: usize, binom: &Binomials) -> Vec<BigInt> {
    let [a, b, c, d] = *g;
    let pd = powers(d, m);
    let pb = powers(-b, m);
    let pc = powers(-c, w - m);
    let pa = powers(a, w - m);
    // (dX - bY)^m = sum_i C(m,i) d^i (-b)^(m-i) X^i Y^(m-i)
    let left: Vec<BigInt> = (0..=m)
        .map(|i| binom.get(m, i) * &pd[i] * &pb[m - i])
        .collect();
    let right: Vec<BigInt> = (0..=w - m)
        .map(|j| binom.get(w - m, j) * &pc[j] * &pa[w - m - j])
        .collect();
    let mut out = vec![BigInt::zero(); w + 1];
    for (i, l) in left.iter().enumerate() {
        if l.is_zero() {
            continue;
        }
        for (j, r) in right.iter().enumerate() {
            if !r.is_zero() {
                out[i + j] += l * r;
            }
        }
    }
    out
}

/// The symbols of weight k at a fixed level: index arithmetic and the
/// continued-fraction reduction.
#[derive(Clone, Debug)]
pub struct ManinSymbols {
    pub p1: P1List,
    pub weight: u32,
    binom: Binomials,
}

impl ManinSymbols {
    pub fn new(p1: P1List, weight: u32) -> Self {
        let w = weight as usize - 2;
        ManinSymbols {
            p1,
            weight,
            binom: Binomials::new(w),
        }
    }

    /// Degree w = k - 2 of the polynomials.
    pub fn w(&self) -> usize {
        self.weight as usize - 2
    }

    pub fn len(&self) -> usize {
        (self.w() + 1) * self.p1.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, m: usize, p1_index: usize) -> usize {
        p1_index * (self.w() + 1) + m
    }

    /// (monomial index, P¹ index) of a generator.
    pub fn split(&self, g: usize) -> (usize, usize) {
        (g % (self.w() + 1), g / (self.w() + 1))
    }

    pub fn binomials(&self) -> &Binomials {
        &self.binom
    }

    pub fn act(&self, g: &Mat2, m: usize) -> Vec<BigInt> {
        act_on_monomial(g, m, self.w(), &self.binom)
    }

    fn add_unimodular(&self, g: &Mat2, h: &Mat2, m: usize, sign: i64, acc: &mut [BigInt]) {
        // Q{g0, g∞} = g·((g⁻¹Q){0, ∞}) with Q = h·X^m Y^(w-m).
        let ginv = [g[3], -g[1], -g[2], g[0]];
        let t = mat_mul(&ginv, h);
        let coeffs = self.act(&t, m);
        let cls = self
            .p1
            .index_of(g[2], g[3])
            .expect("bottom row of an SL2 matrix is a P1 point");
        let base = self.index(0, cls);
        for (j, c) in coeffs.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if sign > 0 {
                acc[base + j] += c;
            } else {
                acc[base + j] -= c;
            }
        }
    }

    /// Adds sign · Q{0, num/den} with Q = h·X^m Y^(w-m) into `acc`
    /// (a vector indexed by generators). den = 0 means the cusp ∞.
    fn add_from_zero(&self, num: i64, den: i64, h: &Mat2, m: usize, sign: i64, acc: &mut [BigInt]) {
        let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
        if num == 0 {
            return;
        }
        // j = -1 term: g = identity, path {0, ∞}.
        let (mut p2, mut q2) = (0i64, 1i64);
        let (mut p1, mut q1) = (1i64, 0i64);
        self.add_unimodular(&[1, 0, 0, 1], h, m, sign, acc);
        if den == 0 {
            return;
        }
        let (mut u, mut v) = (num, den);
        let mut s = -1i64; // (-1)^(j-1) for j = 0
        while v != 0 {
            let a = u.div_euclid(v);
            (u, v) = (v, u - a * v);
            let p = a * p1 + p2;
            let q = a * q1 + q2;
            let g = [s * p, p1, s * q, q1];
            debug_assert_eq!(det(&g), 1);
            self.add_unimodular(&g, h, m, sign, acc);
            (p2, q2, p1, q1) = (p1, q1, p, q);
            s = -s;
        }
    }

    /// Adds sign · Q{α, β} with Q = h·X^m Y^(w-m); cusps are given as
    /// (numerator, denominator) pairs.
    pub fn add_path(&self, alpha: (i64, i64), beta: (i64, i64), h: &Mat2, m: usize, sign: i64, acc: &mut [BigInt]) {
        self.add_from_zero(beta.0, beta.1, h, m, sign, acc);
        self.add_from_zero(alpha.0, alpha.1, h, m, -sign, acc);
    }

    /// Adds sign · x where x = M·(X^m Y^(w-m){0, ∞}) = (M·X^m Y^(w-m)){M0, M∞}
    /// for an integer matrix M of nonzero determinant.
    pub fn add_transport(&self, mat: &Mat2, m: usize, sign: i64, acc: &mut [BigInt]) {
        let alpha = (mat[1], mat[3]);
        let beta = (mat[0], mat[2]);
        self.add_path(alpha, beta, mat, m, sign, acc);
    }

    /// Image of the generator `gen` under an integer matrix `t`:
    /// t·[P, g] = (t g·P){t g 0, t g ∞}, as a dense generator vector.
    pub fn transport_generator(&self, gen: usize, t: &Mat2, acc: &mut [BigInt]) {
        let (m, i) = self.split(gen);
        let g = self.p1.lift_to_sl2(i);
        self.add_transport(&mat_mul(t, &g), m, 1, acc);
    }
}
