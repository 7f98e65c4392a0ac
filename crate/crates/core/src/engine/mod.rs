//! Homes and streets: the computation of n₀(N, k).
//!
//! Joint Hecke eigensystems are never constructed over an extension field.
//! For a commuting family of semisimple operators on V, the number of distinct
//! joint eigenvalue tuples equals the dimension of the unital algebra the
//! family generates, and that dimension does not change under extension of
//! scalars. Newforms in S* are separated by T_p for p ≤ ℓ exactly when the
//! algebra generated by those T_p restricted to S* has dimension dim S*.

mod reports;
mod sstar;

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::arith::ntheory::{is_prime, next_prime, psi};
use crate::arith::{charpoly, charpoly_spectral, factor_over_q, PolynomialQ};
use crate::cache::Cache;
use crate::error::{Error, Result};
use crate::linalg::{commuting_algebra_dim, poly_kernel, restrict, MatrixQ, SubspaceQ};

pub use reports::{
    atkin_lehner_eigen_check, easy_half_check, maeda_report, AtkinLehnerEntry, AtkinLehnerReport, CheckStatus,
    EasyHalfReport, MaedaEntry, MaedaReport, primes_coprime_to,
};
pub use sstar::SStar;

/// The primes q at which final streets are examined, in order.
pub const Q_SCHEDULE: [u64; 4] = [7, 5, 3, 2];

/// floor(k ψ(N) / 12).
pub fn sturm_bound(n: u64, k: u32) -> u64 {
    k as u64 * psi(n) / 12
}

/// Smallest prime not dividing N; at most 2(ln N + 1).
pub fn least_prime_not_dividing(n: u64) -> u64 {
    let mut p = 2;
    while n % p == 0 {
        p = next_prime(p);
    }
    debug_assert!((p as f64) <= 2.0 * ((n as f64).ln() + 1.0));
    p
}

/// Anything that can produce the matrix of T_p on a fixed space.
pub trait HeckeSource {
    fn dim(&self) -> usize;
    fn hecke(&self, p: u64) -> Result<Arc<MatrixQ>>;

    /// A proven bound on the absolute values of the eigenvalues of T_p, when
    /// its characteristic polynomial is also known to be integral.
    fn spectral_radius(&self, _p: u64) -> Option<BigUint> {
        None
    }
}

impl HeckeSource for SStar {
    fn dim(&self) -> usize {
        SStar::dim(self)
    }

    fn hecke(&self, p: u64) -> Result<Arc<MatrixQ>> {
        SStar::hecke(self, p)
    }

    fn spectral_radius(&self, p: u64) -> Option<BigUint> {
        Some(SStar::spectral_radius(self, p))
    }
}

/// Fixed matrices indexed by prime; used for fixtures.
impl HeckeSource for BTreeMap<u64, MatrixQ> {
    fn dim(&self) -> usize {
        self.values().next().map_or(0, MatrixQ::rows)
    }

    fn hecke(&self, p: u64) -> Result<Arc<MatrixQ>> {
        self.get(&p)
            .cloned()
            .map(Arc::new)
            .ok_or_else(|| Error::domain(format!("no operator for p = {p}")))
    }
}

/// A Hecke-stable subspace of S* cut out by kernels of irreducible factors.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Street {
    pub space: SubspaceQ,
    pub lineage: Vec<(u64, PolynomialQ)>,
}

impl Street {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }
}

/// Least prime ℓ ≤ `limit` such that {T_p restricted to V : p ≤ ℓ} generates an
/// algebra of dimension dim V. Failing to separate by `limit` is an internal
/// error, since `limit` is always a proven upper bound for n₀.
pub fn separation_prime<S: HeckeSource + ?Sized>(v: &SubspaceQ, source: &S, limit: u64) -> Result<u64> {
    separation_prime_bounded(v, source, limit, false)
}

/// As [`separation_prime`]; with `trust_limit` the limit is a proven bound on
/// n₀ and is returned as soon as it is reached, without testing it.
pub fn separation_prime_bounded<S: HeckeSource + ?Sized>(
    v: &SubspaceQ,
    source: &S,
    limit: u64,
    trust_limit: bool,
) -> Result<u64> {
    if v.dim() < 2 {
        return Err(Error::domain("separation needs a subspace of dimension at least 2"));
    }
    let mut gens = Vec::new();
    let mut p = 2;
    while p <= limit {
        if trust_limit && p == limit {
            return Ok(p);
        }
        gens.push(restrict(source.hecke(p)?.as_ref(), v)?);
        if commuting_algebra_dim(&gens)? == v.dim() {
            return Ok(p);
        }
        p = next_prime(p);
    }
    Err(Error::internal(format!(
        "subspace '{}' of dimension {} not separated by primes up to {limit}",
        v.provenance(),
        v.dim()
    )))
}

/// Splits each street by the irreducible factors of the characteristic
/// polynomial of T_p on it, keeping pieces of dimension greater than one.
pub fn refine_streets<S: HeckeSource + ?Sized>(streets: &[Street], p: u64, source: &S) -> Result<Vec<Street>> {
    let t = source.hecke(p)?;
    let mut out = Vec::new();
    for st in streets {
        let r = restrict(t.as_ref(), &st.space)?;
        let radius = source.spectral_radius(p);
        let cp = match &radius {
            Some(b) => charpoly_spectral(&r, b)?,
            None => charpoly(&r)?,
        };
        let fac = factor_over_q(&cp)?;
        if fac.is_irreducible() {
            // the charpoly kills T_p on the street, so the kernel is all of it
            let mut st = st.clone();
            let factor = fac.factors[0].0.clone();
            st.space = st.space.clone().with_provenance(format!("{} | T{p}:{factor}", st.space.provenance()));
            st.lineage.push((p, factor));
            out.push(st);
            continue;
        }
        let mut total = 0;
        for (factor, _) in fac.factors {
            let kernel = poly_kernel(&r, &factor, radius.as_ref())?;
            total += kernel.dim();
            if kernel.dim() > 1 {
                let mut lineage = st.lineage.clone();
                lineage.push((p, factor.clone()));
                let space = st
                    .space
                    .embed(&kernel)?
                    .with_provenance(format!("{} | T{p}:{factor}", st.space.provenance()));
                out.push(Street { space, lineage });
            }
        }
        if total != st.dim() {
            return Err(Error::internal(format!(
                "T_{p} is not semisimple on a street of dimension {} (kernels total {total})",
                st.dim()
            )));
        }
    }
    Ok(out)
}

/// Final streets for q: refine S* successively by T_2, T_3, ..., T_q.
pub fn streets_for_q<S: HeckeSource + ?Sized>(source: &S, q: u64) -> Result<Vec<Street>> {
    let n = source.dim();
    if n < 2 {
        return Err(Error::domain("streets need dim S* at least 2"));
    }
    let mut streets = vec![Street {
        space: SubspaceQ::full(n).with_provenance("S*"),
        lineage: Vec::new(),
    }];
    let mut p = 2;
    while p <= q && !streets.is_empty() {
        streets = refine_streets(&streets, p, source)?;
        p = next_prime(p);
    }
    Ok(streets)
}

/// Diagnostics of one pass of the q schedule.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QRun {
    pub q: u64,
    pub street_dims: Vec<usize>,
    pub separation_primes: Vec<u64>,
    pub m: u64,
    pub upper_bound: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct N0Result {
    pub level: u64,
    pub weight: u32,
    pub n0: u64,
    pub dim_s: usize,
    pub sturm_bound: u64,
    pub runs: Vec<QRun>,
    pub elapsed_seconds: f64,
}

/// The q = 7, 5, 3, 2 procedure on a prepared source of dimension ≥ 2.
pub fn n0_by_streets<S: HeckeSource + ?Sized>(source: &S, sturm: u64) -> Result<(u64, Vec<QRun>)> {
    let n = source.dim();
    if n < 2 {
        return Ok((0, Vec::new()));
    }
    // Streets after each prime, computed once and reused across q.
    let mut after: BTreeMap<u64, Vec<Street>> = BTreeMap::new();
    let mut current = vec![Street {
        space: SubspaceQ::full(n).with_provenance("S*"),
        lineage: Vec::new(),
    }];
    let mut p = 2;
    while p <= Q_SCHEDULE[0] {
        if !current.is_empty() {
            current = refine_streets(&current, p, source)?;
        }
        after.insert(p, current.clone());
        p = next_prime(p);
    }

    // Per street: separation prime, and whether it is exact or only a lower bound.
    let mut known: HashMap<MatrixQ, (u64, bool)> = HashMap::new();
    let mut upper = sturm;
    let mut lower = 0u64;
    let mut runs = Vec::new();
    for q in Q_SCHEDULE {
        let streets = &after[&q];
        let mut run = QRun {
            q,
            street_dims: streets.iter().map(Street::dim).collect(),
            separation_primes: Vec::new(),
            m: 0,
            upper_bound: upper,
        };
        for st in streets {
            let key = st.space.basis().clone();
            let trust = upper < sturm;
            let s = match known.get(&key) {
                Some(&(s, exact)) if exact && (s < upper || (s == upper && !trust)) => s,
                Some(&(s, _)) if trust && s >= upper => upper,
                _ => {
                    let s = separation_prime_bounded(&st.space, source, upper, trust)?;
                    known.insert(key, (s, !(trust && s == upper)));
                    s
                }
            };
            run.separation_primes.push(s);
            run.m = run.m.max(s);
            lower = lower.max(s);
            if lower == upper {
                runs.push(run);
                return Ok((upper, runs));
            }
        }
        let m = run.m;
        runs.push(run);
        if m >= q {
            return Ok((m, runs));
        }
        upper = upper.min(q);
    }
    Ok((2, runs))
}

/// Least prime ℓ with generated_algebra_dim({T_p on S* : p ≤ ℓ}) = dim S*, and
/// the algebra dimension after each prime. Returns 0 when dim S* < 2.
pub fn n0_direct<S: HeckeSource + ?Sized>(source: &S, sturm: u64) -> Result<(u64, Vec<(u64, usize)>)> {
    let n = source.dim();
    if n < 2 {
        return Ok((0, Vec::new()));
    }
    let mut gens: Vec<MatrixQ> = Vec::new();
    let mut dims = Vec::new();
    let mut p = 2;
    while p <= sturm.max(2) {
        gens.push(source.hecke(p)?.as_ref().clone());
        let d = commuting_algebra_dim(&gens)?;
        dims.push((p, d));
        if d == n {
            return Ok((p, dims));
        }
        p = next_prime(p);
    }
    Err(Error::internal(format!("S* of dimension {n} not separated within the Sturm bound {sturm}")))
}

/// n₀(N, k) by the streets procedure.
pub fn compute_n0(n: u64, k: u32, cache: Option<&Cache>) -> Result<N0Result> {
    let start = Instant::now();
    if n == 0 || k == 0 {
        return Err(Error::domain("level and weight must be positive"));
    }
    let sturm = sturm_bound(n, k);
    if k % 2 == 1 {
        return Ok(N0Result {
            level: n,
            weight: k,
            n0: 0,
            dim_s: 0,
            sturm_bound: sturm,
            runs: Vec::new(),
            elapsed_seconds: start.elapsed().as_secs_f64(),
        });
    }
    let s = SStar::build(n, k, cache)?;
    let (n0, runs) = n0_by_streets(&s, sturm)?;
    debug_assert!(n0 == 0 || is_prime(n0));
    Ok(N0Result {
        level: n,
        weight: k,
        n0,
        dim_s: s.dim(),
        sturm_bound: sturm,
        runs,
        elapsed_seconds: start.elapsed().as_secs_f64(),
    })
}
