//! Exact characteristic polynomials det(x I - M).
//!
//! `charpoly` clears denominators, reduces modulo word-sized primes, computes a
//! Hessenberg form and its characteristic polynomial modulo each prime, and
//! reconstructs the integer coefficients by CRT once the product of primes
//! exceeds twice the coefficient bound. `charpoly_berkowitz` is the
//! division-free route over Z, kept as an independent check.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::modp::PolyFp;
use super::ntheory::{pow_mod, word_primes};
use super::{PolynomialQ, Rational};
use crate::error::{Error, Result};
use crate::linalg::MatrixQ;

fn square_check(m: &MatrixQ) -> Result<usize> {
    if !m.is_square() {
        return Err(Error::domain(format!(
            "characteristic polynomial of a non-square {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    Ok(m.rows())
}

/// Rescales the characteristic polynomial of d*M (integer coefficients, lowest
/// first) back to the one of M.
fn unscale(int_coeffs: Vec<BigInt>, d: &BigInt) -> PolynomialQ {
    let n = int_coeffs.len() - 1;
    let coeffs = int_coeffs
        .into_iter()
        .enumerate()
        .map(|(i, c)| Rational::new(c, d.pow((n - i) as u32)))
        .collect();
    PolynomialQ::new(coeffs)
}

fn reduce(x: &BigInt, p: u64) -> u64 {
    let r = x.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue fits a word")
}

fn mulm(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn subm(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + (p - b)
    }
}

fn addm(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

/// Characteristic polynomial modulo p (coefficients lowest first, monic),
/// via reduction to upper Hessenberg form.
fn charpoly_mod_p(a: &[u64], n: usize, p: u64) -> Vec<u64> {
    let mut h = a.to_vec();
    let idx = |i: usize, j: usize| i * n + j;
    for m in 1..n.saturating_sub(1) {
        let Some(i) = (m..n).find(|&i| h[idx(i, m - 1)] != 0) else {
            continue;
        };
        if i != m {
            for j in 0..n {
                h.swap(idx(i, j), idx(m, j));
            }
            for r in 0..n {
                h.swap(idx(r, i), idx(r, m));
            }
        }
        let tinv = pow_mod(h[idx(m, m - 1)], p - 2, p);
        for i in (m + 1)..n {
            let u = mulm(h[idx(i, m - 1)], tinv, p);
            if u == 0 {
                continue;
            }
            for j in 0..n {
                let v = mulm(u, h[idx(m, j)], p);
                h[idx(i, j)] = subm(h[idx(i, j)], v, p);
            }
            for r in 0..n {
                let v = mulm(u, h[idx(r, i)], p);
                h[idx(r, m)] = addm(h[idx(r, m)], v, p);
            }
        }
    }
    // polys[m] is the characteristic polynomial of the leading m x m block.
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for m in 1..=n {
        let prev = &polys[m - 1];
        let mut cur = vec![0u64; m + 1];
        let diag = h[idx(m - 1, m - 1)];
        for (k, &c) in prev.iter().enumerate() {
            cur[k + 1] = addm(cur[k + 1], c, p);
            cur[k] = subm(cur[k], mulm(diag, c, p), p);
        }
        let mut t = 1u64;
        for i in (1..m).rev() {
            t = mulm(t, h[idx(i, i - 1)], p);
            let coef = mulm(h[idx(i - 1, m - 1)], t, p);
            if coef == 0 {
                continue;
            }
            for (k, &c) in polys[i - 1].iter().enumerate() {
                cur[k] = subm(cur[k], mulm(coef, c, p), p);
            }
        }
        polys.push(cur);
    }
    polys.pop().expect("at least the constant polynomial")
}

/// Bound (R + 1)^n on the absolute values of the coefficients, R the largest
/// absolute row sum.
fn coefficient_bound(a: &[BigInt], n: usize) -> BigUint {
    let r = (0..n)
        .map(|i| a[i * n..(i + 1) * n].iter().map(|x| x.magnitude().clone()).sum::<BigUint>())
        .max()
        .unwrap_or_default();
    (r + 1u32).pow(n as u32)
}

/// Exact characteristic polynomial det(x I - M), monic of degree n.
pub fn charpoly(m: &MatrixQ) -> Result<PolynomialQ> {
    let n = square_check(m)?;
    if n == 0 {
        return Ok(PolynomialQ::one());
    }
    let (d, ints) = m.clear_denominators();
    let target = coefficient_bound(&ints, n) * 2u32 + 1u32;
    let mut modulus = BigUint::one();
    let mut residues: Vec<BigInt> = vec![BigInt::zero(); n + 1];
    for p in word_primes() {
        if modulus > target {
            break;
        }
        let reduced: Vec<u64> = ints.iter().map(|x| reduce(x, p)).collect();
        let cp = charpoly_mod_p(&reduced, n, p);
        // CRT: x = r + M * ((c - r) * M^{-1} mod p)
        let mod_big = BigInt::from_biguint(Sign::Plus, modulus.clone());
        let m_mod_p = (&modulus % p).to_u64().expect("word");
        let minv = pow_mod(m_mod_p, p - 2, p);
        for (r, &c) in residues.iter_mut().zip(&cp) {
            let rp = reduce(r, p);
            let k = mulm(subm(c, rp, p), minv, p);
            *r += &mod_big * BigInt::from(k);
        }
        modulus *= p;
    }
    let modulus = BigInt::from_biguint(Sign::Plus, modulus);
    let half = &modulus >> 1;
    let coeffs: Vec<BigInt> = residues
        .into_iter()
        .map(|r| if r > half { r - &modulus } else { r })
        .collect();
    if !coeffs[n].is_one() {
        return Err(Error::internal("modular characteristic polynomial is not monic"));
    }
    Ok(unscale(coeffs, &d))
}

/// M modulo p from its integer form (d, d M), or None when p divides d.
fn matrix_mod_p(d: &BigInt, ints: &[BigInt], p: u64) -> Option<Vec<u64>> {
    let dp = reduce(d, p);
    if dp == 0 {
        return None;
    }
    let di = pow_mod(dp, p - 2, p);
    Some(ints.iter().map(|x| mulm(reduce(x, p), di, p)).collect())
}

/// Certifies that the characteristic polynomial of M is squarefree: its
/// reduction modulo a prime not dividing any denominator is squarefree of full
/// degree, so the discriminant is nonzero. Tries `tries` primes; false only
/// means no certificate was found.
pub fn charpoly_squarefree_certified(m: &MatrixQ, tries: usize) -> Result<bool> {
    let n = square_check(m)?;
    let (d, ints) = m.clear_denominators();
    for p in word_primes().take(tries) {
        let Some(a) = matrix_mod_p(&d, &ints, p) else { continue };
        if PolyFp::new(p, charpoly_mod_p(&a, n, p)).is_squarefree() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Characteristic polynomial of a matrix whose characteristic polynomial is
/// known to have integer coefficients and whose eigenvalues all have absolute
/// value at most `radius`, as for Hecke operators on cusp forms. Coefficients
/// are then bounded by (radius + 1)^n, independently of the entry sizes of M.
/// Two further primes must agree with the reconstruction; if they do not, the
/// premises fail and the general route is taken.
pub fn charpoly_spectral(m: &MatrixQ, radius: &BigUint) -> Result<PolynomialQ> {
    let n = square_check(m)?;
    if n == 0 {
        return Ok(PolynomialQ::one());
    }
    let (d, ints) = m.clear_denominators();
    let target = (radius + 1u32).pow(n as u32) * 2u32 + 1u32;
    let mut crt = BigUint::one();
    let mut residues: Vec<BigInt> = vec![BigInt::zero(); n + 1];
    let mut primes = word_primes();
    while crt <= target {
        let p = primes.next().expect("infinite prime stream");
        let Some(a) = matrix_mod_p(&d, &ints, p) else { continue };
        let cp = charpoly_mod_p(&a, n, p);
        let mod_big = BigInt::from_biguint(Sign::Plus, crt.clone());
        let minv = pow_mod((&crt % p).to_u64().expect("word"), p - 2, p);
        for (r, &c) in residues.iter_mut().zip(&cp) {
            let k = mulm(subm(c, reduce(r, p), p), minv, p);
            *r += &mod_big * BigInt::from(k);
        }
        crt *= p;
    }
    let modulus = BigInt::from_biguint(Sign::Plus, crt);
    let half = &modulus >> 1;
    let coeffs: Vec<BigInt> = residues
        .into_iter()
        .map(|r| if r > half { r - &modulus } else { r })
        .collect();
    let mut checked = 0;
    while checked < 2 {
        let p = primes.next().expect("infinite prime stream");
        let Some(a) = matrix_mod_p(&d, &ints, p) else { continue };
        let cp = charpoly_mod_p(&a, n, p);
        if coeffs.iter().zip(&cp).any(|(c, &r)| reduce(c, p) != r) {
            return charpoly(m);
        }
        checked += 1;
    }
    Ok(PolynomialQ::from_integers(&coeffs))
}

/// Division-free Berkowitz algorithm over Z on the denominator-cleared matrix.
pub fn charpoly_berkowitz(m: &MatrixQ) -> Result<PolynomialQ> {
    let n = square_check(m)?;
    if n == 0 {
        return Ok(PolynomialQ::one());
    }
    let (d, a) = m.clear_denominators();
    let at = |i: usize, j: usize| &a[i * n + j];
    // Coefficients highest degree first.
    let mut vect: Vec<BigInt> = vec![BigInt::one()];
    for k in 0..n {
        let mut q = Vec::with_capacity(k + 2);
        q.push(BigInt::one());
        q.push(-at(k, k).clone());
        // w runs through A^j C for the leading k x k block A and column C.
        let mut w: Vec<BigInt> = (0..k).map(|i| at(i, k).clone()).collect();
        for j in 0..k {
            let rc: BigInt = (0..k).map(|i| at(k, i) * &w[i]).sum();
            q.push(-rc);
            if j + 1 < k {
                w = (0..k)
                    .map(|i| (0..k).map(|l| at(i, l) * &w[l]).sum())
                    .collect();
            }
        }
        let next: Vec<BigInt> = (0..k + 2)
            .map(|i| {
                (0..=i.min(k))
                    .filter(|&j| i - j < q.len())
                    .map(|j| &q[i - j] * &vect[j])
                    .sum()
            })
            .collect();
        vect = next;
    }
    vect.reverse();
    Ok(unscale(vect, &d))
}

/// True when every coefficient of the characteristic polynomial is an integer.
pub fn has_integral_charpoly(m: &MatrixQ) -> Result<bool> {
    Ok(charpoly(m)?.has_integer_coefficients())
}
