//! Consistency reports: the pigeonhole lower bound, the Atkin–Lehner shape of
//! T_p for p | N, and separability and factor counts of T_p for p ∤ N.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::arith::ntheory::{factorize, is_squarefree, next_prime, omega, prime_divisors};
use crate::arith::{factor_over_q, int_to_rat, PolynomialQ};
use crate::error::{Error, Result};
use crate::linalg::{commuting_algebra_dim, kernel, restrict, MatrixQ};

use super::{least_prime_not_dividing, N0Result, SStar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckStatus {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EasyHalfReport {
    pub level: u64,
    pub weight: u32,
    /// Number of consecutive primes 2, 3, 5, ... dividing N.
    pub t: u32,
    pub dim_s: usize,
    pub least_prime_not_dividing: u64,
    pub n0: u64,
    pub status: CheckStatus,
}

/// If dim S* > 2^t then at least two newforms share every a_p with p | N,
/// so n₀ is at least the least prime not dividing N.
pub fn easy_half_check(result: &N0Result) -> EasyHalfReport {
    let n = result.level;
    let mut t = 0;
    let mut p = 2;
    while n % p == 0 {
        t += 1;
        p = next_prime(p);
    }
    let lp = least_prime_not_dividing(n);
    let applies = (result.dim_s as u128) > 1u128 << t;
    let status = if !applies {
        CheckStatus::NotApplicable
    } else if result.n0 >= lp {
        CheckStatus::Pass
    } else {
        CheckStatus::Fail
    };
    EasyHalfReport {
        level: n,
        weight: result.weight,
        t,
        dim_s: result.dim_s,
        least_prime_not_dividing: lp,
        n0: result.n0,
        status,
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AtkinLehnerEntry {
    pub p: u64,
    pub p_squared_divides: bool,
    pub charpoly: PolynomialQ,
    /// Multiplicity of p^(k/2-1) as a root (zero when p² | N).
    pub plus: usize,
    /// Multiplicity of -p^(k/2-1) as a root.
    pub minus: usize,
    /// Dimension of the +1 eigenspace of the normalized W_p on S*, when p ‖ N.
    pub w_plus_dim: Option<usize>,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AtkinLehnerReport {
    pub level: u64,
    pub weight: u32,
    pub dim_s: usize,
    pub entries: Vec<AtkinLehnerEntry>,
    pub ok: bool,
}

fn linear_power(root: &BigInt, e: usize) -> PolynomialQ {
    PolynomialQ::linear_root(int_to_rat(root)).pow(e as u32)
}

/// For each p | N: T_p on S* has charpoly x^dim if p² | N and
/// (x - p^(k/2-1))^a (x + p^(k/2-1))^b otherwise. For p ‖ N the sign split is
/// compared with the eigenspaces of W_p, on which a_p = -p^(k/2-1) w_p, when
/// `with_involution` is set.
pub fn atkin_lehner_eigen_check(s: &SStar, with_involution: bool) -> Result<AtkinLehnerReport> {
    let n = s.level();
    let k = s.weight();
    let dim = s.dim();
    let mut entries = Vec::new();
    for (p, e) in factorize(n) {
        let cp = s.hecke_charpoly(p)?;
        let mut entry = AtkinLehnerEntry {
            p,
            p_squared_divides: e >= 2,
            charpoly: cp.clone(),
            plus: 0,
            minus: 0,
            w_plus_dim: None,
            ok: false,
        };
        if e >= 2 {
            entry.ok = cp == PolynomialQ::monomial(int_to_rat(&BigInt::from(1)), dim);
        } else {
            let r = BigInt::from(p).pow(k / 2 - 1);
            let root = int_to_rat(&r);
            let neg = -root.clone();
            let mut rest = cp.clone();
            while rest.degree() > 0 && rest.eval(&root) == int_to_rat(&BigInt::from(0)) {
                rest = rest.exact_div(&PolynomialQ::linear_root(root.clone()))?;
                entry.plus += 1;
            }
            while rest.degree() > 0 && rest.eval(&neg) == int_to_rat(&BigInt::from(0)) {
                rest = rest.exact_div(&PolynomialQ::linear_root(neg.clone()))?;
                entry.minus += 1;
            }
            let shape_ok = entry.plus + entry.minus == dim
                && cp == &linear_power(&r, entry.plus) * &linear_power(&-r.clone(), entry.minus);
            entry.ok = shape_ok;
            if with_involution {
                let w = restrict(&s.space()?.atkin_lehner(p)?, s.subspace())?;
                let w_plus = kernel(&(&w - &MatrixQ::identity(dim))).dim();
                entry.w_plus_dim = Some(w_plus);
                entry.ok &= w_plus == entry.minus;
            }
        }
        entries.push(entry);
    }
    let ok = entries.iter().all(|e| e.ok);
    Ok(AtkinLehnerReport {
        level: n,
        weight: k,
        dim_s: dim,
        entries,
        ok,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MaedaEntry {
    pub p: u64,
    pub separable: bool,
    pub factor_count: usize,
    pub degrees: Vec<usize>,
    /// Whether the factor count equals 2^ω(N); only for squarefree N.
    pub matches_orbit_count: Option<bool>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MaedaReport {
    pub level: u64,
    pub weight: u32,
    pub dim_s: usize,
    pub squarefree: bool,
    /// 2^ω(N) for squarefree N.
    pub expected_orbits: Option<u64>,
    /// Number of Atkin–Lehner sign patterns occurring in S*, for squarefree N.
    pub sign_patterns: Option<usize>,
    pub entries: Vec<MaedaEntry>,
}

/// Observational: factor the charpoly of T_p on S* for each given p ∤ N.
pub fn maeda_report(s: &SStar, primes: &[u64]) -> Result<MaedaReport> {
    let n = s.level();
    if let Some(p) = primes.iter().find(|&&p| n % p == 0) {
        return Err(Error::domain(format!("{p} divides the level {n}")));
    }
    let squarefree = is_squarefree(n);
    let expected = squarefree.then(|| 1u64 << omega(n));
    let sign_patterns = if squarefree && s.dim() > 0 {
        let gens = prime_divisors(n)
            .into_iter()
            .map(|p| s.hecke(p).map(|m| m.as_ref().clone()))
            .collect::<Result<Vec<_>>>()?;
        Some(commuting_algebra_dim(&gens)?)
    } else {
        None
    };
    let mut entries = Vec::new();
    for &p in primes {
        let cp = s.hecke_charpoly(p)?;
        let f = factor_over_q(&cp)?;
        let count = f.factors.len();
        entries.push(MaedaEntry {
            p,
            separable: f.is_squarefree(),
            factor_count: count,
            degrees: f.degrees(),
            matches_orbit_count: expected.map(|e| e == count as u64),
        });
    }
    Ok(MaedaReport {
        level: n,
        weight: s.weight(),
        dim_s: s.dim(),
        squarefree,
        expected_orbits: expected,
        sign_patterns,
        entries,
    })
}

/// The `count` smallest primes not dividing N.
pub fn primes_coprime_to(n: u64, count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut p = 2;
    while out.len() < count {
        if n % p != 0 {
            out.push(p);
        }
        p = next_prime(p);
    }
    out
}
