//! Dense polynomials over a prime field F_p, coefficients lowest degree first,
//! and the distinct-degree / equal-degree splitting used by the factorizer.

use num_bigint::BigUint;
use rand::Rng;

use super::ntheory::{mul_mod, pow_mod};

/// A polynomial over F_p. Invariant: no trailing zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyFp {
    pub p: u64,
    pub c: Vec<u64>,
}

impl PolyFp {
    pub fn new(p: u64, mut c: Vec<u64>) -> Self {
        for x in c.iter_mut() {
            *x %= p;
        }
        while c.last() == Some(&0) {
            c.pop();
        }
        PolyFp { p, c }
    }

    pub fn zero(p: u64) -> Self {
        PolyFp { p, c: Vec::new() }
    }

    pub fn one(p: u64) -> Self {
        Self::new(p, vec![1])
    }

    pub fn x(p: u64) -> Self {
        Self::new(p, vec![0, 1])
    }

    pub fn degree(&self) -> isize {
        self.c.len() as isize - 1
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c == [1]
    }

    pub fn leading(&self) -> u64 {
        self.c.last().copied().unwrap_or(0)
    }

    fn inv(&self, a: u64) -> u64 {
        pow_mod(a, self.p - 2, self.p)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let li = self.inv(self.leading());
        self.scale(li)
    }

    pub fn scale(&self, s: u64) -> Self {
        Self::new(self.p, self.c.iter().map(|&a| mul_mod(a, s, self.p)).collect())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let v = (0..n)
            .map(|i| {
                let a = self.c.get(i).copied().unwrap_or(0);
                let b = o.c.get(i).copied().unwrap_or(0);
                (a + b) % self.p
            })
            .collect();
        Self::new(self.p, v)
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let v = (0..n)
            .map(|i| {
                let a = self.c.get(i).copied().unwrap_or(0);
                let b = o.c.get(i).copied().unwrap_or(0);
                (a + self.p - b) % self.p
            })
            .collect();
        Self::new(self.p, v)
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.p);
        }
        let p = self.p as u128;
        let mut acc = vec![0u128; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                acc[i + j] = (acc[i + j] + a as u128 * b as u128) % p;
            }
        }
        Self::new(self.p, acc.into_iter().map(|x| x as u64).collect())
    }

    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial over F_p");
        let p = self.p;
        let dd = d.c.len() - 1;
        if self.c.len() <= dd {
            return (Self::zero(p), self.clone());
        }
        let li = self.inv(d.leading());
        let mut r = self.c.clone();
        let mut q = vec![0u64; r.len() - dd];
        for i in (0..q.len()).rev() {
            let coef = mul_mod(r[i + dd], li, p);
            if coef == 0 {
                continue;
            }
            for (j, &dc) in d.c.iter().enumerate() {
                r[i + j] = (r[i + j] + p - mul_mod(coef, dc, p)) % p;
            }
            q[i] = coef;
        }
        r.truncate(dd);
        (Self::new(p, q), Self::new(p, r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended gcd: (g, s, t) with s*self + t*o = g, g monic.
    pub fn xgcd(&self, o: &Self) -> (Self, Self, Self) {
        let p = self.p;
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Self::one(p), Self::zero(p));
        let (mut t0, mut t1) = (Self::zero(p), Self::one(p));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        let li = if r0.is_zero() { 1 } else { self.inv(r0.leading()) };
        (r0.scale(li), s0.scale(li), t0.scale(li))
    }

    pub fn derivative(&self) -> Self {
        let v = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| mul_mod(a, i as u64 % self.p, self.p))
            .collect();
        Self::new(self.p, v)
    }

    /// self^e mod m, with the exponent given as a big integer.
    pub fn pow_mod(&self, e: &BigUint, m: &Self) -> Self {
        let mut result = Self::one(self.p).rem(m);
        let base = self.rem(m);
        for i in (0..e.bits()).rev() {
            result = result.mul(&result).rem(m);
            if e.bit(i) {
                result = result.mul(&base).rem(m);
            }
        }
        result
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() == 0
    }
}

/// Distinct-degree factorization of a monic squarefree polynomial: returns
/// (g, d) pairs where g is the product of all irreducible factors of degree d.
pub fn distinct_degree(f: &PolyFp) -> Vec<(PolyFp, usize)> {
    let p = f.p;
    let mut out = Vec::new();
    let mut rest = f.clone();
    let x = PolyFp::x(p);
    let mut h = x.clone();
    let pbig = BigUint::from(p);
    let mut d = 1;
    while rest.degree() >= 2 * d as isize {
        h = h.pow_mod(&pbig, &rest);
        let g = rest.gcd(&h.sub(&x));
        if g.degree() > 0 {
            rest = rest.div_rem(&g).0;
            h = h.rem(&rest);
            out.push((g, d));
        }
        d += 1;
    }
    if rest.degree() > 0 {
        let deg = rest.degree() as usize;
        out.push((rest.monic(), deg));
    }
    out
}

/// Cantor-Zassenhaus equal-degree splitting of a monic squarefree product of
/// irreducibles of degree `d` (odd p). Output factors are monic and sorted.
pub fn equal_degree<R: Rng>(f: &PolyFp, d: usize, rng: &mut R) -> Vec<PolyFp> {
    let p = f.p;
    let n = f.degree() as usize;
    if n == d {
        return vec![f.monic()];
    }
    let exponent = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
    loop {
        let a = PolyFp::new(p, (0..n).map(|_| rng.gen_range(0..p)).collect());
        if a.degree() < 1 {
            continue;
        }
        let g = f.gcd(&a);
        let g = if g.degree() > 0 {
            g
        } else {
            let b = a.pow_mod(&exponent, f).sub(&PolyFp::one(p));
            f.gcd(&b)
        };
        if g.degree() > 0 && g.degree() < f.degree() {
            let h = f.div_rem(&g).0.monic();
            let mut out = equal_degree(&g, d, rng);
            out.extend(equal_degree(&h, d, rng));
            out.sort_by(|a, b| a.c.cmp(&b.c));
            return out;
        }
    }
}

/// Complete factorization of a monic squarefree polynomial into monic irreducibles.
pub fn factor_squarefree<R: Rng>(f: &PolyFp, rng: &mut R) -> Vec<PolyFp> {
    let mut out = Vec::new();
    for (g, d) in distinct_degree(&f.monic()) {
        out.extend(equal_degree(&g, d, rng));
    }
    out.sort_by(|a, b| a.degree().cmp(&b.degree()).then(a.c.cmp(&b.c)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn splits_x4_plus_1_mod_17() {
        // 17 = 1 mod 8, so x^4 + 1 splits completely.
        let f = PolyFp::new(17, vec![1, 0, 0, 0, 1]);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let fs = factor_squarefree(&f, &mut rng);
        assert_eq!(fs.len(), 4);
        let prod = fs.iter().fold(PolyFp::one(17), |a, b| a.mul(b));
        assert_eq!(prod, f);
    }

    #[test]
    fn x4_plus_1_mod_13_is_two_quadratics() {
        let f = PolyFp::new(13, vec![1, 0, 0, 0, 1]);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let fs = factor_squarefree(&f, &mut rng);
        assert_eq!(fs.iter().map(|g| g.degree()).collect::<Vec<_>>(), vec![2, 2]);
    }

    #[test]
    fn xgcd_identity() {
        let a = PolyFp::new(13, vec![1, 2, 3, 1]);
        let b = PolyFp::new(13, vec![5, 0, 1]);
        let (g, s, t) = a.xgcd(&b);
        assert_eq!(s.mul(&a).add(&t.mul(&b)), g);
        assert!(g.is_one());
    }
}
