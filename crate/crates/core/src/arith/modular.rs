//! Modular building blocks for exact linear algebra: prime streams, dense
//! row reduction modulo p, Chinese remaindering and rational reconstruction.
//!
//! Results reconstructed from residues are never trusted on their own; callers
//! verify them over Q.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ntheory::{inverse_mod, is_prime};
use super::Rational;

/// Primes below 2^31, descending. Products of two residues fit in a u64.
pub fn half_word_primes() -> impl Iterator<Item = u64> {
    let mut p: u64 = 1 << 31;
    std::iter::from_fn(move || loop {
        p -= 1;
        if is_prime(p) {
            return Some(p);
        }
    })
}

pub fn residue(x: &BigInt, p: u64) -> u64 {
    match x.to_i64() {
        Some(v) => v.rem_euclid(p as i64) as u64,
        None => x.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits a word"),
    }
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    inverse_mod(a as i64, p as i64).expect("unit modulo p") as u64
}

/// Gauss-Jordan elimination modulo p in place. Returns the pivot columns; the
/// first `rank` rows are reduced with unit pivots and the rest are dropped.
pub fn rref_mod_p(rows: &mut Vec<Vec<u64>>, cols: usize, p: u64) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut rank = 0;
    let mut nz: Vec<usize> = Vec::with_capacity(cols);
    for col in 0..cols {
        if rank == rows.len() {
            break;
        }
        let Some(pr) = (rank..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(rank, pr);
        let inv = inv_mod(rows[rank][col], p);
        nz.clear();
        for j in col..cols {
            let x = rows[rank][j];
            if x != 0 {
                rows[rank][j] = x * inv % p;
                nz.push(j);
            }
        }
        let (head, tail) = rows.split_at_mut(rank);
        let (piv, tail) = tail.split_first_mut().expect("pivot row");
        for row in head.iter_mut().chain(tail.iter_mut()) {
            let f = row[col];
            if f == 0 {
                continue;
            }
            let nf = p - f;
            for &j in &nz {
                row[j] = (row[j] + nf * piv[j]) % p;
            }
        }
        pivots.push(col);
        rank += 1;
    }
    rows.truncate(rank);
    pivots
}

/// n/d with |n|, d ≤ sqrt(m/2) and n ≡ a d (mod m), if one exists.
pub fn rational_reconstruction(a: &BigInt, m: &BigInt) -> Option<Rational> {
    let bound = (m >> 1u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let (q, r) = r0.div_rem(&r1);
        r0 = std::mem::replace(&mut r1, r);
        let t = &t0 - &q * &t1;
        t0 = std::mem::replace(&mut t1, t);
    }
    if t1.is_zero() || t1.abs() > bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    if t1.is_negative() {
        r1 = -r1;
        t1 = -t1;
    }
    Some(Rational::new(r1, t1))
}

/// Residues of a fixed-length vector combined across primes.
pub struct Crt {
    modulus: BigInt,
    values: Vec<BigInt>,
    /// Index of the entry that last failed to reconstruct; tried first next time.
    hint: usize,
}

impl Crt {
    pub fn new(len: usize) -> Self {
        Crt {
            modulus: BigInt::one(),
            values: vec![BigInt::zero(); len],
            hint: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn bits(&self) -> u64 {
        self.modulus.bits()
    }

    pub fn add(&mut self, p: u64, residues: &[u64]) {
        assert_eq!(residues.len(), self.values.len());
        let m_mod_p = residue(&self.modulus, p);
        let m_inv = inv_mod(m_mod_p, p);
        for (v, &r) in self.values.iter_mut().zip(residues) {
            let cur = residue(v, p);
            let delta = (r + p - cur) % p * m_inv % p;
            if delta != 0 {
                *v += &self.modulus * delta;
            }
        }
        self.modulus *= p;
    }

    /// All entries as rationals, or None as soon as one fails.
    pub fn reconstruct(&mut self) -> Option<Vec<Rational>> {
        let n = self.values.len();
        if n == 0 {
            return Some(Vec::new());
        }
        let h = self.hint.min(n - 1);
        rational_reconstruction(&self.values[h], &self.modulus)?;
        let mut out = Vec::with_capacity(n);
        for (i, v) in self.values.iter().enumerate() {
            match rational_reconstruction(v, &self.modulus) {
                Some(q) => out.push(q),
                None => {
                    self.hint = i;
                    return None;
                }
            }
        }
        Some(out)
    }
}
