//! Quotient of a free module by sparse integer relations.
//!
//! Elimination runs modulo primes. The first prime fixes which variables stay
//! free; later primes eliminate with the same free set, so the expression of
//! every other variable in terms of the free ones is the same rational vector
//! reduced mod p. These are combined by CRT and rational reconstruction and
//! accepted only once every relation is checked to vanish exactly.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::arith::denominator_lcm;
use crate::arith::modular::{half_word_primes, inv_mod, residue, Crt};

pub(crate) type Relation = Vec<(usize, BigInt)>;

/// Every variable as an integer combination of the free variables, divided by
/// a common denominator.
pub(crate) struct Quotient {
    pub free: Vec<usize>,
    pub den: BigInt,
    /// expr[v] lists (position in `free`, numerator).
    pub expr: Vec<Vec<(u32, BigInt)>>,
}

struct ModSolver {
    p: u64,
    rows: HashMap<usize, BTreeMap<usize, u64>>,
    occurs: HashMap<usize, BTreeSet<usize>>,
}

impl ModSolver {
    fn new(p: u64) -> Self {
        ModSolver {
            p,
            rows: HashMap::new(),
            occurs: HashMap::new(),
        }
    }

    fn reduce(&self, rel: &Relation) -> BTreeMap<usize, u64> {
        let p = self.p;
        let mut out: BTreeMap<usize, u64> = BTreeMap::new();
        for (v, c) in rel {
            let c = residue(c, p);
            if c == 0 {
                continue;
            }
            match self.rows.get(v) {
                Some(row) => {
                    for (u, cu) in row {
                        let e = out.entry(*u).or_insert(0);
                        *e = (*e + c * cu) % p;
                    }
                }
                None => {
                    let e = out.entry(*v).or_insert(0);
                    *e = (*e + c) % p;
                }
            }
        }
        out.retain(|_, c| *c != 0);
        out
    }

    /// Adds a relation. With `fixed_free`, only variables outside it may become
    /// pivots; returns false if the reduced relation involves free variables only.
    fn add(&mut self, rel: &Relation, fixed_free: Option<&[bool]>) -> bool {
        let p = self.p;
        let r = self.reduce(rel);
        if r.is_empty() {
            return true;
        }
        let occ = |v: &usize| self.occurs.get(v).map_or(0, BTreeSet::len);
        let pivot = r
            .iter()
            .filter(|(v, _)| fixed_free.map_or(true, |f| !f[**v]))
            .min_by_key(|(v, c)| (**c != 1 && **c != p - 1, occ(v), **v))
            .map(|(v, _)| *v);
        let Some(pivot) = pivot else { return false };
        let neg_inv = p - inv_mod(r[&pivot], p);
        let expr: BTreeMap<usize, u64> = r
            .into_iter()
            .filter(|(u, _)| *u != pivot)
            .map(|(u, c)| (u, c * neg_inv % p))
            .collect();
        if let Some(users) = self.occurs.remove(&pivot) {
            for user in users {
                let row = self.rows.get_mut(&user).expect("user row exists");
                let Some(c) = row.remove(&pivot) else { continue };
                for (u, e) in &expr {
                    let entry = row.entry(*u).or_insert(0);
                    *entry = (*entry + c * e) % p;
                    if *entry == 0 {
                        row.remove(u);
                        if let Some(s) = self.occurs.get_mut(u) {
                            s.remove(&user);
                        }
                    } else {
                        self.occurs.entry(*u).or_default().insert(user);
                    }
                }
            }
        }
        for u in expr.keys() {
            self.occurs.entry(*u).or_default().insert(pivot);
        }
        self.rows.insert(pivot, expr);
        true
    }
}

fn eliminate(nvars: usize, relations: &[Relation], p: u64, fixed_free: Option<&[bool]>) -> Option<ModSolver> {
    let mut s = ModSolver::new(p);
    for rel in relations {
        if !s.add(rel, fixed_free) {
            return None;
        }
    }
    debug_assert!(s.rows.keys().all(|&v| v < nvars));
    Some(s)
}

/// Exact check that every relation vanishes on the reconstructed quotient map.
fn relations_vanish(relations: &[Relation], expr: &[Vec<(u32, BigInt)>]) -> bool {
    relations.iter().all(|rel| {
        let mut acc: BTreeMap<u32, BigInt> = BTreeMap::new();
        for (v, c) in rel {
            for (j, x) in &expr[*v] {
                *acc.entry(*j).or_insert_with(BigInt::zero) += c * x;
            }
        }
        acc.values().all(Zero::is_zero)
    })
}

/// Solves the relations over Q.
pub(crate) fn solve(nvars: usize, relations: &[Relation]) -> Quotient {
    let mut primes = half_word_primes();
    'restart: loop {
        let p0 = primes.next().expect("infinite prime stream");
        let base = eliminate(nvars, relations, p0, None).expect("unconstrained elimination succeeds");
        let mut is_free = vec![true; nvars];
        for v in base.rows.keys() {
            is_free[*v] = false;
        }
        let free: Vec<usize> = (0..nvars).filter(|&v| is_free[v]).collect();
        let pivots: Vec<usize> = (0..nvars).filter(|&v| !is_free[v]).collect();
        let pos: HashMap<usize, u32> = free.iter().enumerate().map(|(i, &v)| (v, i as u32)).collect();
        let nf = free.len();
        let residues = |s: &ModSolver| -> Vec<u64> {
            let mut out = vec![0u64; pivots.len() * nf];
            for (i, v) in pivots.iter().enumerate() {
                for (u, c) in &s.rows[v] {
                    out[i * nf + pos[u] as usize] = *c;
                }
            }
            out
        };
        let mut crt = Crt::new(pivots.len() * nf);
        crt.add(p0, &residues(&base));
        let mut verify_at = 0u64;
        loop {
            if crt.bits() >= verify_at {
                if let Some(vals) = crt.reconstruct() {
                    let den = denominator_lcm(vals.iter());
                    let mut expr: Vec<Vec<(u32, BigInt)>> = vec![Vec::new(); nvars];
                    for (i, &f) in free.iter().enumerate() {
                        expr[f] = vec![(i as u32, den.clone())];
                    }
                    for (i, &v) in pivots.iter().enumerate() {
                        expr[v] = vals[i * nf..(i + 1) * nf]
                            .iter()
                            .enumerate()
                            .filter(|(_, q)| !q.is_zero())
                            .map(|(j, q)| (j as u32, q.numer() * (&den / q.denom())))
                            .collect();
                    }
                    if relations_vanish(relations, &expr) {
                        return Quotient { free, den, expr };
                    }
                    verify_at = crt.bits() + crt.bits() / 4 + 1;
                }
            }
            let p = primes.next().expect("infinite prime stream");
            match eliminate(nvars, relations, p, Some(&is_free)) {
                // p sees more independent relations than p0 did: p0 was unlucky
                None => continue 'restart,
                Some(s) if s.rows.len() == pivots.len() => crt.add(p, &residues(&s)),
                Some(_) => continue,
            }
        }
    }
}

#[cfg(test)]
impl Quotient {
    pub fn dim(&self) -> usize {
        self.free.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(terms: &[(usize, i64)]) -> Relation {
        terms.iter().map(|&(v, c)| (v, BigInt::from(c))).collect()
    }

    #[test]
    fn small_system() {
        // x0 + x1 + x2 = 0, 2 x0 - x1 = 0, x3 free
        let q = solve(4, &[rel(&[(0, 1), (1, 1), (2, 1)]), rel(&[(0, 2), (1, -1)])]);
        assert_eq!(q.dim(), 2);
        // check: any relation evaluated through expr vanishes
        assert!(relations_vanish(&[rel(&[(0, 1), (1, 1), (2, 1)]), rel(&[(0, 2), (1, -1)])], &q.expr));
    }

    #[test]
    fn fractions_appear() {
        // 3 x0 = 2 x1
        let q = solve(2, &[rel(&[(0, 3), (1, -2)])]);
        assert_eq!(q.dim(), 1);
        assert!(relations_vanish(&[rel(&[(0, 3), (1, -2)])], &q.expr));
        let (f, other) = (q.free[0], 1 - q.free[0]);
        assert_eq!(q.expr[f], vec![(0, q.den.clone())]);
        // x1 = 3/2 x0 or x0 = 2/3 x1
        let (num, den) = if f == 0 { (3, 2) } else { (2, 3) };
        assert_eq!(&q.expr[other][0].1 * den, &q.den * num);
    }

    #[test]
    fn dependent_relations() {
        let rels = vec![rel(&[(0, 1), (1, 1)]), rel(&[(0, 2), (1, 2)]), rel(&[(1, 1), (2, -1)])];
        let q = solve(3, &rels);
        assert_eq!(q.dim(), 1);
    }
}
