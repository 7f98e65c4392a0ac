//! The space of weight-k modular symbols for Γ₀(N) as a quotient of the free
//! module on Manin symbols, with its star involution, boundary map, Hecke
//! operators, degeneracy maps and Atkin-Lehner involutions.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::cusps::CuspClasses;
use super::manin::{Mat2, ManinSymbols};
use super::p1::P1List;
use super::quotient::{self, Relation};
use crate::arith::ntheory::{gcd_i64, is_prime, prime_divisors, xgcd};
use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::linalg::{left_kernel, MatrixQ, SubspaceQ};

/// Weight-k modular symbols for Γ₀(N) over Q.
pub struct ModSymSpace {
    level: u64,
    weight: u32,
    syms: ManinSymbols,
    cusps: CuspClasses,
    /// Generator index of each basis element.
    basis_gens: Vec<usize>,
    /// Image of every generator in basis coordinates, times `qden`.
    qmap: Vec<Vec<(u32, BigInt)>>,
    qden: BigInt,
    hecke: Mutex<HashMap<u64, Arc<MatrixQ>>>,
}

impl std::fmt::Debug for ModSymSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ModSymSpace")
            .field("level", &self.level)
            .field("weight", &self.weight)
            .field("dim", &self.dim())
            .finish()
    }
}

fn sigma_partner(syms: &ManinSymbols, g: usize) -> (usize, i64) {
    // x_{m,(c:d)} + (-1)^m x_{w-m,(d:-c)} = 0
    let (m, i) = syms.split(g);
    let c = syms.p1.get(i);
    let j = syms.p1.index_of(c.d as i64, -(c.c as i64)).expect("P1 point");
    let sign = if m % 2 == 0 { 1 } else { -1 };
    (syms.index(syms.w() - m, j), sign)
}

const TAU_INV: Mat2 = [-1, 1, -1, 0];
const TAU: Mat2 = [0, -1, 1, -1];

/// Generator vector of the three-term relation at generator g.
fn tau_relation(syms: &ManinSymbols, g: usize) -> BTreeMap<usize, BigInt> {
    let (m, i) = syms.split(g);
    let cl = syms.p1.get(i);
    let (c, d) = (cl.c as i64, cl.d as i64);
    let i1 = syms.p1.index_of(d, -c - d).expect("P1 point");
    let i2 = syms.p1.index_of(-c - d, c).expect("P1 point");
    let mut rel: BTreeMap<usize, BigInt> = BTreeMap::new();
    rel.insert(g, BigInt::one());
    for (mat, idx) in [(TAU_INV, i1), (TAU, i2)] {
        for (j, coef) in syms.act(&mat, m).into_iter().enumerate() {
            if !coef.is_zero() {
                *rel.entry(syms.index(j, idx)).or_insert_with(BigInt::zero) += coef;
            }
        }
    }
    rel.retain(|_, c| !c.is_zero());
    rel
}

impl ModSymSpace {
    /// Builds the relation quotient for level `n` and even weight `k` ≥ 2.
    pub fn new(n: u64, k: u32) -> Result<Self> {
        if k < 2 || k % 2 == 1 {
            return Err(Error::UnsupportedWeight(k));
        }
        if n == 0 {
            return Err(Error::domain("level must be positive"));
        }
        let p1 = P1List::new(n)?;
        let cusps = CuspClasses::new(&p1);
        let syms = ManinSymbols::new(p1, k);
        let len = syms.len();

        // Two-term relations: each generator is ± a representative, or zero.
        let mut sig: Vec<Option<(usize, i64)>> = vec![None; len];
        for g in 0..len {
            let (partner, sign) = sigma_partner(&syms, g);
            // x_g = s x_partner with s = -sign
            let s = -sign;
            sig[g] = if partner == g {
                (s == 1).then_some((g, 1))
            } else if g < partner {
                Some((g, 1))
            } else {
                Some((partner, s))
            };
        }

        // Three-term relations on the representatives.
        let reps: Vec<usize> = (0..len).filter(|&g| matches!(sig[g], Some((r, _)) if r == g)).collect();
        let var: HashMap<usize, usize> = reps.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let relations: Vec<Relation> = (0..len)
            .map(|g| {
                let mut rel: BTreeMap<usize, BigInt> = BTreeMap::new();
                for (gen, c) in tau_relation(&syms, g) {
                    if let Some((rep, s)) = sig[gen] {
                        *rel.entry(var[&rep]).or_insert_with(BigInt::zero) += if s < 0 { -c } else { c };
                    }
                }
                rel.into_iter().filter(|(_, c)| !c.is_zero()).collect::<Relation>()
            })
            .filter(|r| !r.is_empty())
            .collect();
        let q = quotient::solve(reps.len(), &relations);
        let basis_gens: Vec<usize> = q.free.iter().map(|&v| reps[v]).collect();
        let qmap: Vec<Vec<(u32, BigInt)>> = (0..len)
            .map(|g| match sig[g] {
                None => Vec::new(),
                Some((rep, s)) => q.expr[var[&rep]]
                    .iter()
                    .map(|(j, c)| (*j, if s < 0 { -c } else { c.clone() }))
                    .collect(),
            })
            .collect();

        Ok(ModSymSpace {
            level: n,
            weight: k,
            syms,
            cusps,
            basis_gens,
            qmap,
            qden: q.den,
            hecke: Mutex::new(HashMap::new()),
        })
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn dim(&self) -> usize {
        self.basis_gens.len()
    }

    pub fn generator_count(&self) -> usize {
        self.syms.len()
    }

    pub fn symbols(&self) -> &ManinSymbols {
        &self.syms
    }

    pub fn p1(&self) -> &P1List {
        &self.syms.p1
    }

    pub fn cusp_classes(&self) -> &CuspClasses {
        &self.cusps
    }

    pub fn basis_generators(&self) -> &[usize] {
        &self.basis_gens
    }

    /// Image in basis coordinates of a (dense) integer combination of generators.
    pub fn reduce_generators(&self, acc: &[BigInt]) -> Vec<Rational> {
        self.reduce_terms(acc.iter().enumerate().filter(|(_, c)| !c.is_zero()))
    }

    fn reduce_terms<'a>(&self, terms: impl Iterator<Item = (usize, &'a BigInt)>) -> Vec<Rational> {
        let mut out = vec![BigInt::zero(); self.dim()];
        for (g, c) in terms {
            for (j, q) in &self.qmap[g] {
                out[*j as usize] += q * c;
            }
        }
        out.into_iter().map(|x| Rational::new(x, self.qden.clone())).collect()
    }

    /// Image of a single generator.
    pub fn reduce_generator(&self, g: usize) -> Vec<Rational> {
        self.reduce_terms(std::iter::once((g, &BigInt::one())))
    }

    /// Image of a sparse integer combination of generators.
    pub fn reduce_sparse(&self, rel: &BTreeMap<usize, BigInt>) -> Vec<Rational> {
        self.reduce_terms(rel.iter().map(|(g, c)| (*g, c)))
    }

    /// The two-term relation at generator g, as a sparse generator vector.
    pub fn sigma_relation(&self, g: usize) -> BTreeMap<usize, BigInt> {
        let (partner, sign) = sigma_partner(&self.syms, g);
        let mut rel = BTreeMap::new();
        *rel.entry(g).or_insert_with(BigInt::zero) += 1;
        *rel.entry(partner).or_insert_with(BigInt::zero) += sign;
        rel.retain(|_, c: &mut BigInt| !c.is_zero());
        rel
    }

    /// The three-term relation at generator g.
    pub fn tau_relation(&self, g: usize) -> BTreeMap<usize, BigInt> {
        tau_relation(&self.syms, g)
    }

    /// Matrix (rows = basis elements) of the map sending each basis generator
    /// through `image`, a function producing a dense generator vector.
    fn matrix_from<F>(&self, image: F) -> MatrixQ
    where
        F: Fn(usize, &mut [BigInt]) + Sync,
    {
        let rows: Vec<Vec<Rational>> = self
            .basis_gens
            .par_iter()
            .map(|&g| {
                let mut acc = vec![BigInt::zero(); self.syms.len()];
                image(g, &mut acc);
                self.reduce_generators(&acc)
            })
            .collect();
        MatrixQ::from_rows_with_cols(self.dim(), rows)
    }

    /// Matrix of the involution induced by [-1, 0; 0, 1]:
    /// x_{m,(c:d)} -> (-1)^m x_{m,(-c:d)}.
    pub fn star_involution(&self) -> MatrixQ {
        let rows: Vec<Vec<Rational>> = self
            .basis_gens
            .iter()
            .map(|&g| {
                let (m, i) = self.syms.split(g);
                let c = self.syms.p1.get(i);
                let j = self.syms.p1.index_of(-(c.c as i64), c.d as i64).expect("P1 point");
                let mut row = self.reduce_generator(self.syms.index(m, j));
                if m % 2 == 1 {
                    for x in row.iter_mut() {
                        *x = -&*x;
                    }
                }
                row
            })
            .collect();
        MatrixQ::from_rows_with_cols(self.dim(), rows)
    }

    /// The same involution computed by transporting paths with the
    /// determinant -1 matrix; used to cross-check `star_involution`.
    pub fn star_via_paths(&self) -> MatrixQ {
        self.matrix_from(|g, acc| self.syms.transport_generator(g, &[-1, 0, 0, 1], acc))
    }

    /// Boundary map to the cusp classes: rows = basis elements.
    pub fn boundary_matrix(&self) -> MatrixQ {
        let w = self.syms.w();
        let ncusps = self.cusps.count();
        let rows: Vec<Vec<Rational>> = self
            .basis_gens
            .iter()
            .map(|&g| {
                let (m, i) = self.syms.split(g);
                let mut row = vec![Rational::zero(); ncusps];
                let c = self.syms.p1.get(i);
                if m == w {
                    // (g·P)(g∞) with g∞ in the class of (c:d)
                    row[self.cusps.class_of_p1(i)] += Rational::one();
                }
                if m == 0 {
                    // g0 = (gσ)∞ with bottom row (d : -c)
                    let j = self.cusps.class_of_bottom_row(&self.syms.p1, c.d as i64, -(c.c as i64));
                    row[j] -= Rational::one();
                }
                row
            })
            .collect();
        MatrixQ::from_rows_with_cols(ncusps, rows)
    }

    pub fn cuspidal_subspace(&self) -> SubspaceQ {
        left_kernel(&self.boundary_matrix()).with_provenance("cuspidal")
    }

    fn star_minus_identity(&self) -> MatrixQ {
        &self.star_involution() - &MatrixQ::identity(self.dim())
    }

    pub fn plus_subspace(&self) -> SubspaceQ {
        left_kernel(&self.star_minus_identity()).with_provenance("plus")
    }

    pub fn cuspidal_plus_subspace(&self) -> Result<SubspaceQ> {
        let m = self.boundary_matrix().hstack(&self.star_minus_identity())?;
        Ok(left_kernel(&m).with_provenance("cuspidal plus"))
    }

    /// Matrix of T_p on the whole space (rows = images of basis elements).
    pub fn hecke_matrix(&self, p: u64) -> Result<Arc<MatrixQ>> {
        if !is_prime(p) {
            return Err(Error::domain(format!("T_{p}: only prime indices are supported")));
        }
        if let Some(t) = self.hecke.lock().expect("hecke cache lock").get(&p) {
            return Ok(Arc::clone(t));
        }
        let t = Arc::new(self.compute_hecke(p));
        let mut cache = self.hecke.lock().expect("hecke cache lock");
        Ok(Arc::clone(cache.entry(p).or_insert(t)))
    }

    /// Inserts a previously computed Hecke matrix (for instance from disk).
    pub fn insert_hecke(&self, p: u64, t: MatrixQ) -> Result<()> {
        if t.rows() != self.dim() || t.cols() != self.dim() {
            return Err(Error::Cache(format!("T_{p} has the wrong shape")));
        }
        self.hecke.lock().expect("hecke cache lock").entry(p).or_insert_with(|| Arc::new(t));
        Ok(())
    }

    fn hecke_coset_reps(&self, p: u64) -> Vec<Mat2> {
        let p = p as i64;
        let mut reps: Vec<Mat2> = (0..p).map(|r| [1, r, 0, p]).collect();
        if self.level as i64 % p != 0 {
            reps.push([p, 0, 0, 1]);
        }
        reps
    }

    fn compute_hecke(&self, p: u64) -> MatrixQ {
        let reps = self.hecke_coset_reps(p);
        self.matrix_from(|g, acc| {
            for h in &reps {
                self.syms.transport_generator(g, h, acc);
            }
        })
    }

    /// The two degeneracy maps to level N/p (p prime dividing N), as matrices
    /// from this space to `lower`: the forgetful map and transport by [p,0;0,1].
    pub fn degeneracy_matrices(&self, lower: &ModSymSpace, p: u64) -> Result<(MatrixQ, MatrixQ)> {
        if self.level % p != 0 || lower.level != self.level / p || lower.weight != self.weight {
            return Err(Error::domain("degeneracy target must have level N/p and the same weight"));
        }
        let lp1 = &lower.syms.p1;
        let forget: Vec<Vec<Rational>> = self
            .basis_gens
            .iter()
            .map(|&g| {
                let (m, i) = self.syms.split(g);
                let c = self.syms.p1.get(i);
                let j = lp1.index_of(c.c as i64, c.d as i64).expect("reduction of a P1 point");
                lower.reduce_generator(lower.syms.index(m, j))
            })
            .collect();
        let shift = [p as i64, 0, 0, 1];
        let twisted: Vec<Vec<Rational>> = self
            .basis_gens
            .par_iter()
            .map(|&g| {
                let (m, i) = self.syms.split(g);
                let lift = self.syms.p1.lift_to_sl2(i);
                let mat = super::manin::mat_mul(&shift, &lift);
                let mut acc = vec![BigInt::zero(); lower.syms.len()];
                lower.syms.add_transport(&mat, m, 1, &mut acc);
                lower.reduce_generators(&acc)
            })
            .collect();
        Ok((
            MatrixQ::from_rows_with_cols(lower.dim(), forget),
            MatrixQ::from_rows_with_cols(lower.dim(), twisted),
        ))
    }

    /// New cuspidal plus subspace S*, given the spaces at levels N/p for every
    /// prime p dividing N (in any order).
    pub fn new_cuspidal_plus_subspace(&self, lower: &[&ModSymSpace]) -> Result<SubspaceQ> {
        let mut m = self.boundary_matrix().hstack(&self.star_minus_identity())?;
        for p in prime_divisors(self.level) {
            let target = lower
                .iter()
                .find(|s| s.level == self.level / p)
                .ok_or_else(|| Error::domain(format!("missing level {} space", self.level / p)))?;
            let (a, b) = self.degeneracy_matrices(target, p)?;
            m = m.hstack(&a)?.hstack(&b)?;
        }
        Ok(left_kernel(&m).with_provenance("new cuspidal plus"))
    }

    /// Builds the lower-level spaces and returns S*.
    pub fn new_cuspidal_plus(&self) -> Result<SubspaceQ> {
        let lower: Vec<ModSymSpace> = prime_divisors(self.level)
            .into_iter()
            .map(|p| ModSymSpace::new(self.level / p, self.weight))
            .collect::<Result<_>>()?;
        let refs: Vec<&ModSymSpace> = lower.iter().collect();
        self.new_cuspidal_plus_subspace(&refs)
    }

    /// Atkin-Lehner matrix W_Q = [Qx, y; N, Q] of determinant Q, acting on the
    /// whole space and divided by Q^(k/2 - 1).
    pub fn atkin_lehner(&self, q: u64) -> Result<MatrixQ> {
        if q == 0 || self.level % q != 0 || gcd_i64(q as i64, (self.level / q) as i64) != 1 {
            return Err(Error::domain(format!("{q} is not an exact divisor of {}", self.level)));
        }
        let (qi, r) = (q as i64, (self.level / q) as i64);
        // Q x + r y0 = 1 gives det [Qx, -y0; N, Q] = Q(Qx + r y0) = Q.
        let (_, x, y0) = xgcd(qi, r);
        let w: Mat2 = [qi * x, -y0, self.level as i64, qi];
        debug_assert_eq!(super::manin::det(&w), qi);
        let raw = self.matrix_from(|g, acc| self.syms.transport_generator(g, &w, acc));
        let scale = BigInt::from(q).pow(self.weight / 2 - 1);
        Ok(raw.scale(&Rational::new(BigInt::one(), scale)))
    }
}

/// Sparse elimination of linear relations Σ c_v x_v = 0, keeping every pivot
/// variable expressed in terms of the current free variables only.
#[cfg(test)]
use std::collections::BTreeSet;
#[cfg(test)]
use num_traits::Signed;
#[cfg(test)]
use crate::arith::rational_height;

#[cfg(test)]
#[derive(Default)]
struct RelationSolver {
    rows: HashMap<usize, BTreeMap<usize, Rational>>,
    occurs: HashMap<usize, BTreeSet<usize>>,
}

#[cfg(test)]
impl RelationSolver {
    fn reduce(&self, rel: BTreeMap<usize, Rational>) -> BTreeMap<usize, Rational> {
        let mut out: BTreeMap<usize, Rational> = BTreeMap::new();
        for (v, c) in rel {
            match self.rows.get(&v) {
                Some(row) => {
                    for (u, cu) in row {
                        *out.entry(*u).or_insert_with(Rational::zero) += &c * cu;
                    }
                }
                None => *out.entry(v).or_insert_with(Rational::zero) += c,
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    fn add(&mut self, rel: BTreeMap<usize, Rational>) {
        let r = self.reduce(rel);
        if r.is_empty() {
            return;
        }
        let occ = |v: &usize| self.occurs.get(v).map_or(0, BTreeSet::len);
        let pivot = *r
            .iter()
            .min_by_key(|(v, c)| (!(c.abs().is_one()), rational_height(c), occ(v), **v))
            .map(|(v, _)| v)
            .expect("nonempty relation");
        let cv = r[&pivot].clone();
        let expr: BTreeMap<usize, Rational> = r
            .into_iter()
            .filter(|(u, _)| *u != pivot)
            .map(|(u, c)| (u, -c / &cv))
            .collect();
        if let Some(users) = self.occurs.remove(&pivot) {
            for p in users {
                let row = self.rows.get_mut(&p).expect("user row exists");
                let Some(c) = row.remove(&pivot) else { continue };
                for (u, e) in &expr {
                    let entry = row.entry(*u).or_insert_with(Rational::zero);
                    *entry += &c * e;
                    if entry.is_zero() {
                        row.remove(u);
                        if let Some(s) = self.occurs.get_mut(u) {
                            s.remove(&p);
                        }
                    } else {
                        self.occurs.entry(*u).or_default().insert(p);
                    }
                }
            }
        }
        for u in expr.keys() {
            self.occurs.entry(*u).or_default().insert(pivot);
        }
        self.rows.insert(pivot, expr);
    }
}
