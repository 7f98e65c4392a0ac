//! Squarefree decomposition and complete factorization over Q.
//!
//! Pipeline: content extraction, squarefree decomposition (Yun), factorization
//! modulo a good prime (distinct-degree then Cantor-Zassenhaus), quadratic Hensel
//! lifting past the Mignotte bound, and recombination over subsets of the lifted
//! modular factors.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::modp::{factor_squarefree, PolyFp};
use super::ntheory::{inverse_mod, is_prime};
use super::poly::PolynomialQ;
use super::Rational;
use crate::error::{Error, Result};

/// Smallest prime tried for modular factorization.
const FIRST_MODULAR_PRIME: u64 = 13;
/// Number of good primes examined; the one yielding the fewest modular factors wins.
const PRIMES_TO_COMPARE: usize = 3;
const FACTOR_SEED: u64 = 0x6865_636b_6530;

/// `unit * prod factor_i ^ mult_i`, factors monic, irreducible over Q and pairwise
/// distinct, in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactoredPolynomial {
    pub unit: Rational,
    pub factors: Vec<(PolynomialQ, u32)>,
}

impl FactoredPolynomial {
    pub fn expand(&self) -> PolynomialQ {
        let mut acc = PolynomialQ::constant(self.unit.clone());
        for (f, m) in &self.factors {
            acc = &acc * &f.pow(*m);
        }
        acc
    }

    /// True when there is a single factor of multiplicity one.
    pub fn is_irreducible(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].1 == 1
    }

    /// True when every multiplicity is one.
    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|(_, m)| *m == 1)
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.factors
            .iter()
            .flat_map(|(f, m)| std::iter::repeat(f.degree() as usize).take(*m as usize))
            .collect()
    }
}

/// Squarefree decomposition of a nonzero polynomial: monic, pairwise coprime,
/// squarefree parts with their multiplicities, ordered by multiplicity.
pub fn squarefree_decompose(f: &PolynomialQ) -> Result<Vec<(PolynomialQ, u32)>> {
    if f.is_zero() {
        return Err(Error::domain("squarefree decomposition of the zero polynomial"));
    }
    let f = f.monic();
    if f.degree() == 0 {
        return Ok(Vec::new());
    }
    let df = f.derivative();
    let a0 = f.gcd(&df);
    let mut b = f.exact_div(&a0)?;
    let c = df.exact_div(&a0)?;
    let mut d = &c - &b.derivative();
    let mut out = Vec::new();
    let mut i = 1;
    while b.degree() > 0 {
        let a = b.gcd(&d);
        let nb = b.exact_div(&a)?;
        let nc = d.exact_div(&a)?;
        d = &nc - &nb.derivative();
        b = nb;
        if a.degree() > 0 {
            out.push((a.monic(), i));
        }
        i += 1;
    }
    Ok(out)
}

/// Factors a nonzero polynomial over Q into monic irreducibles.
pub fn factor_over_q(f: &PolynomialQ) -> Result<FactoredPolynomial> {
    if f.is_zero() {
        return Err(Error::domain("factorization of the zero polynomial"));
    }
    let unit = f.leading();
    let mut factors = Vec::new();
    for (part, mult) in squarefree_decompose(f)? {
        let (_, prim) = part.primitive_integer();
        for g in factor_squarefree_primitive(prim) {
            factors.push((PolynomialQ::from_integers(&g).monic(), mult));
        }
    }
    factors.sort_by(|a, b| canonical_order(&a.0, &b.0));
    Ok(FactoredPolynomial { unit, factors })
}

/// Degree first, then lexicographic on the primitive integer coefficient list.
pub fn canonical_order(a: &PolynomialQ, b: &PolynomialQ) -> Ordering {
    a.degree()
        .cmp(&b.degree())
        .then_with(|| a.primitive_integer().1.cmp(&b.primitive_integer().1))
}

// --- integer polynomial helpers (Vec<BigInt>, lowest degree first) ---

fn trim(v: &mut Vec<BigInt>) {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
}

fn zmul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

fn zsub(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    let mut out: Vec<BigInt> = (0..n)
        .map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z))
        .collect();
    trim(&mut out);
    out
}

fn zadd(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    let mut out: Vec<BigInt> = (0..n)
        .map(|i| a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z))
        .collect();
    trim(&mut out);
    out
}

fn zmod(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let mut out: Vec<BigInt> = a.iter().map(|x| x.mod_floor(m)).collect();
    trim(&mut out);
    out
}

fn zscale(a: &[BigInt], s: &BigInt) -> Vec<BigInt> {
    let mut out: Vec<BigInt> = a.iter().map(|x| x * s).collect();
    trim(&mut out);
    out
}

/// Symmetric residues in (-m/2, m/2].
fn zsymmetric(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let half = m >> 1;
    let mut out: Vec<BigInt> = a
        .iter()
        .map(|x| {
            let r = x.mod_floor(m);
            if r > half {
                r - m
            } else {
                r
            }
        })
        .collect();
    trim(&mut out);
    out
}

/// Division by a monic polynomial modulo m.
fn zdivrem_monic(a: &[BigInt], d: &[BigInt], m: &BigInt) -> (Vec<BigInt>, Vec<BigInt>) {
    debug_assert!(d.last().is_some_and(One::is_one));
    let dd = d.len() - 1;
    let mut r = zmod(a, m);
    if r.len() <= dd {
        return (Vec::new(), r);
    }
    let mut q = vec![BigInt::zero(); r.len() - dd];
    for i in (0..q.len()).rev() {
        let c = r[i + dd].mod_floor(m);
        if c.is_zero() {
            continue;
        }
        for (j, dc) in d.iter().enumerate() {
            r[i + j] = (&r[i + j] - &c * dc).mod_floor(m);
        }
        q[i] = c;
    }
    r.truncate(dd);
    trim(&mut r);
    trim(&mut q);
    (q, r)
}

/// Exact division over Z, if it exists.
fn zexact_div(a: &[BigInt], d: &[BigInt]) -> Option<Vec<BigInt>> {
    if d.is_empty() {
        return None;
    }
    let dd = d.len() - 1;
    if a.len() < d.len() {
        return if a.is_empty() { Some(Vec::new()) } else { None };
    }
    let lc = &d[dd];
    let mut r = a.to_vec();
    let mut q = vec![BigInt::zero(); a.len() - dd];
    for i in (0..q.len()).rev() {
        let (c, rem) = r[i + dd].div_rem(lc);
        if !rem.is_zero() {
            return None;
        }
        if c.is_zero() {
            continue;
        }
        for (j, dc) in d.iter().enumerate() {
            r[i + j] -= &c * dc;
        }
        q[i] = c;
    }
    if r.iter().any(|x| !x.is_zero()) {
        return None;
    }
    trim(&mut q);
    Some(q)
}

fn to_fp(a: &[BigInt], p: u64) -> PolyFp {
    let pb = BigInt::from(p);
    PolyFp::new(
        p,
        a.iter()
            .map(|x| x.mod_floor(&pb).to_u64().expect("residue fits"))
            .collect(),
    )
}

fn from_fp(a: &PolyFp) -> Vec<BigInt> {
    a.c.iter().map(|&x| BigInt::from(x)).collect()
}

fn primitive(a: Vec<BigInt>) -> Vec<BigInt> {
    let g = super::content(&a);
    let mut out: Vec<BigInt> = if g.is_zero() || g.is_one() {
        a
    } else {
        a.into_iter().map(|x| x / &g).collect()
    };
    if out.last().is_some_and(Signed::is_negative) {
        for x in out.iter_mut() {
            *x = -&*x;
        }
    }
    out
}

/// One quadratic Hensel step: from f = g h (mod m), s g + t h = 1 (mod m), with f
/// and h monic, to the same identities modulo m^2.
fn hensel_step(
    f: &[BigInt],
    g: &[BigInt],
    h: &[BigInt],
    s: &[BigInt],
    t: &[BigInt],
    m: &BigInt,
) -> (Vec<BigInt>, Vec<BigInt>, Vec<BigInt>, Vec<BigInt>) {
    let m2 = m * m;
    let e = zmod(&zsub(f, &zmul(g, h)), &m2);
    let (q, r) = zdivrem_monic(&zmul(s, &e), h, &m2);
    let g2 = zmod(&zadd(&zadd(g, &zmul(t, &e)), &zmul(&q, g)), &m2);
    let h2 = zmod(&zadd(h, &r), &m2);
    let b = zmod(&zsub(&zadd(&zmul(s, &g2), &zmul(t, &h2)), &[BigInt::one()]), &m2);
    let (c, d) = zdivrem_monic(&zmul(s, &b), &h2, &m2);
    let s2 = zmod(&zsub(s, &d), &m2);
    let t2 = zmod(&zsub(&zsub(t, &zmul(t, &b)), &zmul(&c, &g2)), &m2);
    (g2, h2, s2, t2)
}

/// Lifts a factorization of the monic polynomial `f` into monic coprime factors
/// modulo p to a factorization modulo a power of p that is at least `target`.
/// Returns the lifted factors and the final modulus.
fn hensel_lift(f: &[BigInt], factors: &[PolyFp], p: u64, target: &BigInt) -> (Vec<Vec<BigInt>>, BigInt) {
    let pb = BigInt::from(p);
    let mut modulus = pb.clone();
    while &modulus < target {
        modulus = &modulus * &modulus;
    }
    let mut out = Vec::with_capacity(factors.len());
    let mut rest = zmod(f, &modulus);
    for (i, gfp) in factors.iter().enumerate() {
        if i + 1 == factors.len() {
            out.push(rest);
            break;
        }
        let hfp = factors[i + 1..]
            .iter()
            .fold(PolyFp::one(p), |a, b| a.mul(b));
        let (one, sfp, tfp) = gfp.xgcd(&hfp);
        debug_assert!(one.is_one());
        let (mut g, mut h) = (from_fp(gfp), from_fp(&hfp));
        let (mut s, mut t) = (from_fp(&sfp), from_fp(&tfp));
        let mut m = pb.clone();
        while m < modulus {
            let fm = zmod(&rest, &(&m * &m));
            (g, h, s, t) = hensel_step(&fm, &g, &h, &s, &t, &m);
            m = &m * &m;
        }
        out.push(g);
        rest = h;
    }
    (out, modulus)
}

fn l2_norm_ceil(f: &[BigInt]) -> BigInt {
    let sumsq: BigInt = f.iter().map(|c| c * c).sum();
    sumsq.sqrt() + 1
}

/// Chooses the modular prime: among the first few primes >= 13 that do not divide
/// the leading coefficient and keep the reduction squarefree, the one giving the
/// fewest irreducible factors (ties go to the smaller prime).
fn choose_prime(f: &[BigInt], rng: &mut ChaCha8Rng) -> (u64, Vec<PolyFp>) {
    let lc = f.last().expect("nonzero");
    let mut best: Option<(u64, Vec<PolyFp>)> = None;
    let mut seen = 0;
    let mut p = FIRST_MODULAR_PRIME;
    while seen < PRIMES_TO_COMPARE {
        if is_prime(p) && !(lc % BigInt::from(p)).is_zero() {
            let fp = to_fp(f, p);
            if fp.degree() == f.len() as isize - 1 && fp.is_squarefree() {
                seen += 1;
                let fs = factor_squarefree(&fp, rng);
                let better = best.as_ref().map_or(true, |(_, b)| fs.len() < b.len());
                if better {
                    best = Some((p, fs));
                }
                if best.as_ref().is_some_and(|(_, b)| b.len() == 1) {
                    break;
                }
            }
        }
        p += 1;
    }
    best.expect("a good prime always exists for a squarefree polynomial")
}

/// Irreducible factors over Z of a primitive squarefree integer polynomial,
/// each primitive with positive leading coefficient.
fn factor_squarefree_primitive(f: Vec<BigInt>) -> Vec<Vec<BigInt>> {
    let mut f = primitive(f);
    let mut found = Vec::new();
    if f.len() >= 2 && f[0].is_zero() {
        found.push(vec![BigInt::zero(), BigInt::one()]);
        f.remove(0);
    }
    if f.len() <= 2 {
        if f.len() == 2 {
            found.push(f);
        }
        return found;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(FACTOR_SEED);
    let (p, modular) = choose_prime(&f, &mut rng);
    if modular.len() == 1 {
        found.push(f);
        return found;
    }

    let n = f.len() - 1;
    let lc = f[n].clone();
    let bound = &lc * l2_norm_ceil(&f) * (BigInt::one() << n);
    let target = &bound * 2 + 1;
    let pb = BigInt::from(p);
    let lc_inv = BigInt::from(
        inverse_mod((&lc).mod_floor(&pb).to_i64().expect("small"), p as i64).expect("p does not divide lc"),
    );
    // Make f monic modulo a large power of p before lifting.
    let mut modulus_guess = pb.clone();
    while modulus_guess < target {
        modulus_guess = &modulus_guess * &modulus_guess;
    }
    let lc_inv_big = modular_inverse_big(&lc, &modulus_guess, &lc_inv, &pb);
    let monic_f = zmod(&zscale(&f, &lc_inv_big), &modulus_guess);
    let (lifted, modulus) = hensel_lift(&monic_f, &modular, p, &target);
    debug_assert_eq!(modulus, modulus_guess);

    let mut remaining: Vec<Vec<BigInt>> = lifted;
    let mut cur = f;
    let mut size = 1;
    while 2 * size <= remaining.len() {
        let mut progressed = false;
        let idx: Vec<usize> = (0..remaining.len()).collect();
        for subset in combinations(&idx, size) {
            let lcc = cur.last().expect("nonzero").clone();
            let prod = subset
                .iter()
                .fold(vec![lcc.clone()], |acc, &i| zmod(&zmul(&acc, &remaining[i]), &modulus));
            let cand = primitive(zsymmetric(&prod, &modulus));
            if cand.len() < 2 {
                continue;
            }
            // Cheap constant-term screen before the full trial division.
            if !cur[0].is_zero() && !(&cur[0] % &cand[0]).is_zero() {
                continue;
            }
            if let Some(q) = zexact_div(&cur, &cand) {
                found.push(cand);
                cur = primitive(q);
                let mut keep = Vec::new();
                for (i, g) in remaining.into_iter().enumerate() {
                    if !subset.contains(&i) {
                        keep.push(g);
                    }
                }
                remaining = keep;
                progressed = true;
                break;
            }
        }
        if !progressed {
            size += 1;
        }
    }
    if cur.len() > 1 {
        found.push(cur);
    }
    found
}

/// Inverse of `a` modulo `m` (a power of p), seeded by the inverse modulo p.
fn modular_inverse_big(a: &BigInt, m: &BigInt, inv_p: &BigInt, p: &BigInt) -> BigInt {
    // Newton iteration x <- x (2 - a x), doubling the p-adic precision each step.
    let mut x = inv_p.clone();
    let mut prec = p.clone();
    while &prec < m {
        prec = &prec * &prec;
        let ax = (a * &x).mod_floor(&prec);
        x = (&x * (BigInt::from(2) - ax)).mod_floor(&prec);
    }
    x.mod_floor(m)
}

/// All k-element subsets of `items`, in lexicographic order.
fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let n = items.len();
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
