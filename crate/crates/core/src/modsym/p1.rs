//! The projective line P¹(Z/N).

use serde::{Deserialize, Serialize};

use crate::arith::ntheory::gcd_i64;
use crate::error::{Error, Result};

/// Canonical representative of a point of P¹(Z/N): the lexicographically
/// smallest pair (u·c mod N, u·d mod N) over units u.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct P1Class {
    pub c: u64,
    pub d: u64,
}

fn units(n: u64) -> Vec<u64> {
    if n == 1 {
        return vec![0];
    }
    (1..n).filter(|&u| gcd_i64(u as i64, n as i64) == 1).collect()
}

fn check(c: i64, d: i64, n: u64) -> Result<(u64, u64)> {
    if n == 0 {
        return Err(Error::domain("level must be positive"));
    }
    let g = gcd_i64(gcd_i64(c, d), n as i64);
    if g != 1 {
        return Err(Error::domain(format!("({c}:{d}) is not a point of P1(Z/{n})")));
    }
    let n = n as i64;
    Ok((c.rem_euclid(n) as u64, d.rem_euclid(n) as u64))
}

/// Normalizes (c : d) by scanning all units; independent of any lookup table.
pub fn p1_normalize(c: i64, d: i64, n: u64) -> Result<P1Class> {
    let (c, d) = check(c, d, n)?;
    let best = units(n)
        .into_iter()
        .map(|u| ((u as u128 * c as u128 % n as u128) as u64, (u as u128 * d as u128 % n as u128) as u64))
        .min()
        .expect("at least one unit");
    Ok(P1Class { c: best.0, d: best.1 })
}

/// All points of P¹(Z/N) in lexicographic order of their canonical
/// representatives, with an N×N lookup table from pairs to indices.
#[derive(Clone, Debug)]
pub struct P1List {
    n: u64,
    classes: Vec<P1Class>,
    index: Vec<u32>,
}

const NONE: u32 = u32::MAX;

impl P1List {
    pub fn new(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("level must be positive"));
        }
        let nn = n as usize;
        let us = units(n);
        let mut index = vec![NONE; nn * nn];
        let mut classes = Vec::new();
        for c in 0..n {
            for d in 0..n {
                if index[(c * n + d) as usize] != NONE || gcd_i64(gcd_i64(c as i64, d as i64), n as i64) != 1 {
                    continue;
                }
                let id = classes.len() as u32;
                classes.push(P1Class { c, d });
                for &u in &us {
                    let uc = (u * c) % n;
                    let ud = (u * d) % n;
                    index[(uc * n + ud) as usize] = id;
                }
            }
        }
        Ok(P1List { n, classes, index })
    }

    pub fn level(&self) -> u64 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn get(&self, i: usize) -> P1Class {
        self.classes[i]
    }

    pub fn classes(&self) -> &[P1Class] {
        &self.classes
    }

    /// Index of the class of (c : d), or None when gcd(c, d, N) > 1.
    pub fn index_of(&self, c: i64, d: i64) -> Option<usize> {
        let n = self.n as i64;
        let (c, d) = (c.rem_euclid(n), d.rem_euclid(n));
        let id = self.index[(c * n + d) as usize];
        (id != NONE).then_some(id as usize)
    }

    pub fn normalize(&self, c: i64, d: i64) -> Result<P1Class> {
        self.index_of(c, d)
            .map(|i| self.classes[i])
            .ok_or_else(|| Error::domain(format!("({c}:{d}) is not a point of P1(Z/{})", self.n)))
    }

    /// Integers (c', d') coprime with c' ≡ c, d' ≡ d (mod N).
    pub fn lift(&self, i: usize) -> (i64, i64) {
        let P1Class { c, d } = self.classes[i];
        let n = self.n as i64;
        let c = c as i64;
        let c = if c == 0 { n } else { c };
        let mut d = d as i64;
        while gcd_i64(c, d) != 1 {
            d += n;
        }
        (c, d)
    }

    /// A matrix [a, b; c, d] in SL₂(Z) whose bottom row lifts class `i`.
    pub fn lift_to_sl2(&self, i: usize) -> [i64; 4] {
        let (c, d) = self.lift(i);
        let (g, x, y) = crate::arith::ntheory::xgcd(c, d);
        debug_assert_eq!(g, 1);
        // x c + y d = 1, so a = y, b = -x gives a d - b c = 1.
        [y, -x, c, d]
    }
}
