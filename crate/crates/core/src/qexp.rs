//! Level-one q-expansions: Δ, E₄, E₆, product bases of S_k(SL₂(Z)) and the
//! Hecke action on coefficients. Independent of the modular-symbols code and
//! used to check it.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::ntheory::{divisors, is_prime};
use crate::arith::{int_to_rat, Rational};
use crate::error::{Error, Result};
use crate::linalg::{rref, MatrixQ};

/// Coefficients a_0, ..., a_{prec-1}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QExpansion {
    pub coeffs: Vec<BigInt>,
}

impl QExpansion {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        QExpansion { coeffs }
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, n: usize) -> &BigInt {
        &self.coeffs[n]
    }

    /// Truncated product; precision is the smaller of the two.
    pub fn mul(&self, other: &QExpansion) -> QExpansion {
        let prec = self.precision().min(other.precision());
        let mut out = vec![BigInt::zero(); prec];
        for (i, a) in self.coeffs.iter().take(prec).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(prec - i).enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        QExpansion::new(out)
    }

    pub fn pow(&self, e: u32) -> QExpansion {
        let mut one = vec![BigInt::zero(); self.precision()];
        if let Some(x) = one.first_mut() {
            *x = BigInt::one();
        }
        (0..e).fold(QExpansion::new(one), |acc, _| acc.mul(self))
    }

    pub fn scale(&self, s: &BigInt) -> QExpansion {
        QExpansion::new(self.coeffs.iter().map(|c| c * s).collect())
    }
}

/// Π(1 - q^n)^3 = Σ (-1)^n (2n + 1) q^(n(n+1)/2).
fn eta_cubed(prec: usize) -> QExpansion {
    let mut c = vec![BigInt::zero(); prec];
    let mut n = 0usize;
    while n * (n + 1) / 2 < prec {
        let v = BigInt::from(2 * n as i64 + 1);
        c[n * (n + 1) / 2] = if n % 2 == 0 { v } else { -v };
        n += 1;
    }
    QExpansion::new(c)
}

/// q Π(1 - q^n)^24 to precision `prec`.
pub fn delta_qexp(prec: usize) -> Result<QExpansion> {
    if prec < 2 {
        return Err(Error::domain("precision must be at least 2"));
    }
    // (Π(1 - q^n)^3)^8 by three squarings.
    let e3 = eta_cubed(prec - 1);
    let e6 = e3.mul(&e3);
    let e12 = e6.mul(&e6);
    let e24 = e12.mul(&e12);
    let mut c = vec![BigInt::zero()];
    c.extend(e24.coeffs);
    Ok(QExpansion::new(c))
}

fn sigma(n: u64, r: u32) -> BigInt {
    divisors(n).into_iter().map(|d| BigInt::from(d).pow(r)).sum()
}

/// E₄ = 1 + 240 Σ σ₃(n) q^n and E₆ = 1 - 504 Σ σ₅(n) q^n.
pub fn eisenstein_qexp(weight: u32, prec: usize) -> Result<QExpansion> {
    let (c, r) = match weight {
        4 => (240i64, 3u32),
        6 => (-504, 5),
        _ => return Err(Error::domain(format!("no Eisenstein oracle for weight {weight}"))),
    };
    let mut coeffs = vec![BigInt::one()];
    coeffs.extend((1..prec as u64).map(|n| BigInt::from(c) * sigma(n, r)));
    coeffs.truncate(prec);
    Ok(QExpansion::new(coeffs))
}

/// Dimension of S_k(SL₂(Z)) for even k ≥ 0.
pub fn level1_cusp_dim(k: u32) -> usize {
    if k < 12 || k % 2 == 1 {
        return 0;
    }
    let base = (k / 12) as usize;
    if k % 12 == 2 {
        base - 1
    } else {
        base
    }
}

/// Echelonized basis of S_k(SL₂(Z)) spanned by Δ^a E₄^b E₆^c.
pub fn level1_cusp_basis(k: u32, prec: usize) -> Result<Vec<QExpansion>> {
    if k % 2 == 1 || !(12..=60).contains(&k) {
        return Err(Error::domain(format!("weight {k} outside the oracle range")));
    }
    let dim = level1_cusp_dim(k);
    if prec <= 2 * dim + 10 {
        return Err(Error::domain("insufficient precision for the cusp basis"));
    }
    let delta = delta_qexp(prec)?;
    let e4 = eisenstein_qexp(4, prec)?;
    let e6 = eisenstein_qexp(6, prec)?;
    let mut products = Vec::new();
    for a in 1..=k / 12 {
        for b in 0..=(k - 12 * a) / 4 {
            let rest = k - 12 * a - 4 * b;
            if rest % 6 != 0 {
                continue;
            }
            let c = rest / 6;
            products.push(delta.pow(a).mul(&e4.pow(b)).mul(&e6.pow(c)));
        }
    }
    let rows: Vec<Vec<Rational>> = products
        .iter()
        .map(|f| f.coeffs.iter().map(int_to_rat).collect())
        .collect();
    let (r, _) = rref(&MatrixQ::from_rows_with_cols(prec, rows));
    if r.rows() != dim {
        return Err(Error::internal(format!(
            "product basis has rank {} but dim S_{k} = {dim}",
            r.rows()
        )));
    }
    // Rows rescaled to primitive integer vectors.
    (0..r.rows())
        .map(|i| {
            let ints = crate::arith::primitive_integer_vector(r.row(i));
            Ok(QExpansion::new(ints))
        })
        .collect()
}

/// a_m(T_p f) = a_{pm}(f) + p^{k-1} a_{m/p}(f).
pub fn hecke_on_coeffs(f: &QExpansion, p: u64, k: u32, out_prec: usize) -> Result<QExpansion> {
    if !is_prime(p) {
        return Err(Error::domain(format!("{p} is not prime")));
    }
    let p = p as usize;
    if out_prec == 0 || p * (out_prec - 1) >= f.precision() {
        return Err(Error::domain("precision shortfall for the Hecke action"));
    }
    let pk = BigInt::from(p).pow(k - 1);
    let coeffs = (0..out_prec)
        .map(|m| {
            let mut a = f.coeffs[p * m].clone();
            if m % p == 0 {
                a += &pk * &f.coeffs[m / p];
            }
            a
        })
        .collect();
    Ok(QExpansion::new(coeffs))
}

/// Matrix of T_p on an echelon basis (rows = images of basis elements).
pub fn hecke_matrix_on_basis(basis: &[QExpansion], p: u64, k: u32) -> Result<MatrixQ> {
    let prec = basis.first().map_or(0, QExpansion::precision);
    let out_prec = (prec - 1) / p as usize + 1;
    let rows: Vec<Vec<Rational>> = basis.iter().map(|f| f.coeffs.iter().map(int_to_rat).collect()).collect();
    let b = MatrixQ::from_rows_with_cols(prec, rows);
    let (ech, pivots) = rref(&b);
    if pivots.iter().any(|&c| c >= out_prec) {
        return Err(Error::domain("precision shortfall for the Hecke matrix"));
    }
    let mut out = Vec::with_capacity(basis.len());
    for f in basis {
        let tf = hecke_on_coeffs(f, p, k, out_prec)?;
        let tf: Vec<Rational> = tf.coeffs.iter().map(int_to_rat).collect();
        // coordinates in the echelon basis, then back to the given basis
        let coords: Vec<Rational> = pivots.iter().map(|&c| tf[c].clone()).collect();
        let recon = ech.left_apply(&coords);
        if recon[..out_prec] != tf[..] {
            return Err(Error::internal("T_p image is not in the span of the basis"));
        }
        out.push(coords);
    }
    // Change of basis from echelon coordinates to `basis` coordinates.
    let to_ech: Vec<Vec<Rational>> = basis
        .iter()
        .map(|f| pivots.iter().map(|&c| int_to_rat(&f.coeffs[c])).collect())
        .collect();
    let c = MatrixQ::from_rows_with_cols(basis.len(), to_ech);
    let t_ech = MatrixQ::from_rows_with_cols(basis.len(), out);
    // rows of t_ech are T(f_i) in echelon coordinates; T(f_i) = Σ x_j f_j with x C = t_ech_i
    let cinv = invert(&c)?;
    t_ech.try_mul(&cinv)
}

fn invert(m: &MatrixQ) -> Result<MatrixQ> {
    let n = m.rows();
    let aug = m.hstack(&MatrixQ::identity(n))?;
    let (r, pivots) = rref(&aug);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
        return Err(Error::domain("matrix is singular"));
    }
    let rows = (0..n).map(|i| r.row(i)[n..].to_vec()).collect();
    Ok(MatrixQ::from_rows_with_cols(n, rows))
}

/// Default precision: twice the Sturm bound plus 10.
pub fn default_precision(k: u32) -> usize {
    2 * (k as usize / 12) + 10
}
