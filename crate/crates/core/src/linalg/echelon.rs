//! Reduced row-echelon forms, kernels and subspaces over Q.
//!
//! `rref` works modulo a stream of primes, keeps the primes whose pivot
//! pattern is the best seen so far, rebuilds the reduced rows by CRT and
//! rational reconstruction, and accepts them only after checking exactly that
//! every input row lies in their span. `rref_fraction_free` is the direct route
//! over Z: rows kept primitive, smallest pivot by bit-length.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::MatrixQ;
use crate::arith::modular::{half_word_primes, inv_mod, rref_mod_p, residue, Crt};
use crate::arith::{charpoly, charpoly_spectral, content, denominator_lcm, primitive_integer_vector, PolynomialQ, Rational};
use crate::error::{Error, Result};

fn make_primitive(row: &mut [BigInt]) {
    let g = content(row);
    if g.is_zero() || g.is_one() {
        return;
    }
    for x in row.iter_mut() {
        if !x.is_zero() {
            *x /= &g;
        }
    }
}

/// Gauss-Jordan elimination on integer rows. Returns the nonzero reduced rows
/// (each primitive, pivot entries positive) and their pivot columns.
pub(crate) fn rref_integer(mut rows: Vec<Vec<BigInt>>, cols: usize) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    rows.retain(|r| r.iter().any(|x| !x.is_zero()));
    for r in rows.iter_mut() {
        make_primitive(r);
    }
    let mut rank = 0;
    let mut pivots = Vec::new();
    for col in 0..cols {
        if rank == rows.len() {
            break;
        }
        let choice = (rank..rows.len())
            .filter(|&i| !rows[i][col].is_zero())
            .min_by_key(|&i| (rows[i][col].bits(), i));
        let Some(pr) = choice else { continue };
        rows.swap(rank, pr);
        if rows[rank][col].is_negative() {
            for x in rows[rank].iter_mut() {
                *x = -&*x;
            }
        }
        let (head, tail) = rows.split_at_mut(rank);
        let (pivot_row, tail) = tail.split_first_mut().expect("pivot row exists");
        let a = pivot_row[col].clone();
        for row in head.iter_mut().chain(tail.iter_mut()) {
            if row[col].is_zero() {
                continue;
            }
            let g = a.gcd(&row[col]);
            let am = &a / &g;
            let bm = &row[col] / &g;
            for (x, p) in row.iter_mut().zip(pivot_row.iter()) {
                if p.is_zero() {
                    if !x.is_zero() && !am.is_one() {
                        *x *= &am;
                    }
                } else {
                    *x = &*x * &am - &bm * p;
                }
            }
            make_primitive(row);
        }
        pivots.push(col);
        rank += 1;
    }
    rows.truncate(rank);
    (rows, pivots)
}

fn integer_rows(m: &MatrixQ) -> Vec<Vec<BigInt>> {
    (0..m.rows())
        .map(|i| primitive_integer_vector(m.row(i)))
        .collect()
}

fn normalize_rows(rows: Vec<Vec<BigInt>>, pivots: &[usize]) -> Vec<Vec<Rational>> {
    rows.into_iter()
        .zip(pivots)
        .map(|(r, &p)| {
            let piv = r[p].clone();
            r.into_iter()
                .map(|x| Rational::new(x, piv.clone()))
                .collect()
        })
        .collect()
}

/// True when every integer row v satisfies D v_j = Σ_i v[piv_i] T_i[j] on the
/// non-pivot columns j, where T = D R is the integer form of the candidate.
fn rows_in_span(rows: &[Vec<BigInt>], cand: &[Vec<Rational>], pivots: &[usize], free: &[usize]) -> bool {
    let d = denominator_lcm(cand.iter().flat_map(|r| free.iter().map(move |&j| &r[j])));
    let t: Vec<Vec<BigInt>> = cand
        .iter()
        .map(|r| free.iter().map(|&j| r[j].numer() * (&d / r[j].denom())).collect())
        .collect();
    rows.iter().all(|v| {
        let used: Vec<(usize, &BigInt)> = pivots
            .iter()
            .enumerate()
            .filter(|(_, &c)| !v[c].is_zero())
            .map(|(i, &c)| (i, &v[c]))
            .collect();
        free.iter().enumerate().all(|(fi, &j)| {
            let mut acc = BigInt::zero();
            for &(i, c) in &used {
                if !t[i][fi].is_zero() {
                    acc += c * &t[i][fi];
                }
            }
            acc == &d * &v[j]
        })
    })
}

/// Multimodular reduced echelon form of integer rows.
pub(crate) fn rref_multimodular(rows: &[Vec<BigInt>], cols: usize) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let mut best: Option<(Vec<usize>, Vec<usize>, Crt)> = None;
    let mut verify_at = 0u64;
    for p in half_word_primes() {
        let mut m: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|x| residue(x, p)).collect()).collect();
        let piv = rref_mod_p(&mut m, cols, p);
        let better = match &best {
            None => true,
            Some((bp, _, _)) => piv.len() > bp.len() || (piv.len() == bp.len() && piv < *bp),
        };
        if better {
            let free: Vec<usize> = (0..cols).filter(|c| piv.binary_search(c).is_err()).collect();
            let crt = Crt::new(piv.len() * free.len());
            best = Some((piv.clone(), free, crt));
            verify_at = 0;
        }
        let (bp, free, crt) = best.as_mut().expect("a pivot pattern");
        if piv != *bp {
            continue;
        }
        let res: Vec<u64> = m.iter().flat_map(|r| free.iter().map(|&j| r[j])).collect();
        crt.add(p, &res);
        if crt.bits() < verify_at {
            continue;
        }
        let Some(vals) = crt.reconstruct() else { continue };
        let nf = free.len();
        let cand: Vec<Vec<Rational>> = (0..bp.len())
            .map(|i| {
                let mut r = vec![Rational::zero(); cols];
                r[bp[i]] = Rational::one();
                for (t, &j) in free.iter().enumerate() {
                    r[j] = vals[i * nf + t].clone();
                }
                r
            })
            .collect();
        if rows_in_span(rows, &cand, bp, free) {
            return (cand, bp.clone());
        }
        verify_at = crt.bits() + crt.bits() / 4 + 1;
    }
    unreachable!("the prime stream is infinite")
}

/// Reduced row-echelon form (zero rows dropped) and pivot columns.
pub fn rref(m: &MatrixQ) -> (MatrixQ, Vec<usize>) {
    let mut rows = integer_rows(m);
    rows.retain(|r| r.iter().any(|x| !x.is_zero()));
    let (r, pivots) = rref_multimodular(&rows, m.cols());
    (MatrixQ::from_rows_with_cols(m.cols(), r), pivots)
}

/// The same form computed by fraction-free elimination over Z.
pub fn rref_fraction_free(m: &MatrixQ) -> (MatrixQ, Vec<usize>) {
    let (rows, pivots) = rref_integer(integer_rows(m), m.cols());
    let normalized = normalize_rows(rows, &pivots);
    (MatrixQ::from_rows_with_cols(m.cols(), normalized), pivots)
}

/// Reduced row-echelon form keeping the original row count (zero rows at the bottom).
pub fn rref_full(m: &MatrixQ) -> (MatrixQ, Vec<usize>) {
    let (r, pivots) = rref(m);
    let pad = MatrixQ::zeros(m.rows() - r.rows(), m.cols());
    (r.vstack(&pad).expect("same column count"), pivots)
}

pub fn rank(m: &MatrixQ) -> usize {
    rref(m).1.len()
}

/// A subspace of Q^n stored as the reduced row-echelon basis of its row space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubspaceQ {
    ambient_dim: usize,
    basis: MatrixQ,
    pivots: Vec<usize>,
    provenance: String,
}

impl SubspaceQ {
    /// Span of the given vectors.
    pub fn span(ambient_dim: usize, vectors: Vec<Vec<Rational>>, provenance: impl Into<String>) -> Self {
        let m = MatrixQ::from_rows_with_cols(ambient_dim, vectors);
        Self::row_space(&m, provenance)
    }

    pub fn row_space(m: &MatrixQ, provenance: impl Into<String>) -> Self {
        let (basis, pivots) = rref(m);
        SubspaceQ {
            ambient_dim: m.cols(),
            basis,
            pivots,
            provenance: provenance.into(),
        }
    }

    pub fn zero(n: usize) -> Self {
        SubspaceQ {
            ambient_dim: n,
            basis: MatrixQ::zeros(0, n),
            pivots: Vec::new(),
            provenance: "zero".into(),
        }
    }

    pub fn full(n: usize) -> Self {
        SubspaceQ {
            ambient_dim: n,
            basis: MatrixQ::identity(n),
            pivots: (0..n).collect(),
            provenance: "full".into(),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn basis(&self) -> &MatrixQ {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn with_provenance(mut self, provenance: impl Into<String>) -> Self {
        self.provenance = provenance.into();
        self
    }

    /// Coefficients of `v` in the echelon basis, or None if `v` is not in the span.
    pub fn coordinates(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(v.len(), self.ambient_dim);
        let coords: Vec<Rational> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let recon = self.basis.left_apply(&coords);
        (recon.as_slice() == v).then_some(coords)
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_subspace(&self, other: &SubspaceQ) -> bool {
        (0..other.dim()).all(|i| self.contains(other.basis.row(i)))
    }

    pub fn intersect(&self, other: &SubspaceQ) -> Result<SubspaceQ> {
        intersect(self, other)
    }

    pub fn sum(&self, other: &SubspaceQ) -> Result<SubspaceQ> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::domain("ambient dimension mismatch in subspace sum"));
        }
        let stacked = self.basis.vstack(&other.basis)?;
        let stacked = if stacked.rows() == 0 {
            MatrixQ::zeros(0, self.ambient_dim)
        } else {
            stacked
        };
        Ok(SubspaceQ::row_space(&stacked, format!("({})+({})", self.provenance, other.provenance)))
    }

    /// Maps a subspace given in coordinates relative to this subspace's basis into
    /// the ambient space.
    pub fn embed(&self, inner: &SubspaceQ) -> Result<SubspaceQ> {
        if inner.ambient_dim != self.dim() {
            return Err(Error::domain("inner subspace does not live in this subspace"));
        }
        let m = inner.basis.try_mul(&self.basis)?;
        let m = if m.rows() == 0 { MatrixQ::zeros(0, self.ambient_dim) } else { m };
        Ok(SubspaceQ::row_space(&m, inner.provenance.clone()))
    }

    /// Expresses a subspace of the ambient space contained in `self` in
    /// coordinates relative to this subspace's basis.
    pub fn relative(&self, outer: &SubspaceQ) -> Result<SubspaceQ> {
        let rows = (0..outer.dim())
            .map(|i| {
                self.coordinates(outer.basis.row(i))
                    .ok_or_else(|| Error::domain("subspace is not contained in the reference subspace"))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SubspaceQ::span(self.dim(), rows, outer.provenance.clone()))
    }
}

/// Right kernel {v : M v^T = 0} as an echelon subspace.
pub fn kernel(m: &MatrixQ) -> SubspaceQ {
    let n = m.cols();
    let (r, pivots) = rref(m);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let vectors: Vec<Vec<Rational>> = free
        .iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); n];
            v[f] = Rational::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -r.get(i, f).clone();
            }
            v
        })
        .collect();
    SubspaceQ::span(n, vectors, "kernel")
}

/// Left kernel {v : v M = 0}.
pub fn left_kernel(m: &MatrixQ) -> SubspaceQ {
    kernel(&m.transpose()).with_provenance("left kernel")
}

/// {v : v g(T) = 0} for a square matrix T, without forming g(T) over Q.
///
/// Kernels of g(T) mod p can only be larger than the true kernel. The smallest
/// ones (and among those the earliest pivot pattern) are lifted by CRT and
/// rational reconstruction; a candidate K is accepted once it is exactly
/// T-stable with g(T|K) = 0, since then K lies in the kernel and has at least
/// its dimension.
///
/// `radius`, when given, is a bound as in [`charpoly_spectral`] for T; it
/// passes to T restricted to any stable subspace.
pub fn poly_kernel(t: &MatrixQ, g: &PolynomialQ, radius: Option<&BigUint>) -> Result<SubspaceQ> {
    if !t.is_square() {
        return Err(Error::domain("polynomial kernel needs a square matrix"));
    }
    let n = t.rows();
    if g.is_zero() {
        return Ok(SubspaceQ::full(n));
    }
    let (d, a) = t.clear_denominators();
    let (gl, gc) = (denominator_lcm(g.coeffs().iter()), g.coeffs());
    let mut best: Option<(Vec<usize>, Vec<usize>, Crt)> = None;
    let mut verify_at = 0u64;
    for p in half_word_primes() {
        if residue(&d, p) == 0 || residue(&gl, p) == 0 {
            continue;
        }
        let di = inv_mod(residue(&d, p), p);
        let tp: Vec<u64> = a.iter().map(|x| residue(x, p) * di % p).collect();
        let cp: Vec<u64> = gc
            .iter()
            .map(|c| residue(c.numer(), p) * inv_mod(residue(c.denom(), p), p) % p)
            .collect();
        // Horner for g(T)^T mod p, so that its right kernel is the left kernel of g(T)
        let mut acc = vec![0u64; n * n];
        for &c in cp.iter().rev() {
            let mut next = vec![0u64; n * n];
            for i in 0..n {
                for k in 0..n {
                    let x = acc[i * n + k];
                    if x == 0 {
                        continue;
                    }
                    for j in 0..n {
                        next[i * n + j] = (next[i * n + j] + x * tp[k * n + j]) % p;
                    }
                }
                next[i * n + i] = (next[i * n + i] + c) % p;
            }
            acc = next;
        }
        let mut rows: Vec<Vec<u64>> = (0..n).map(|j| (0..n).map(|i| acc[i * n + j]).collect()).collect();
        let piv = rref_mod_p(&mut rows, n, p);
        let mut ker: Vec<Vec<u64>> = (0..n)
            .filter(|c| piv.binary_search(c).is_err())
            .map(|f| {
                let mut v = vec![0u64; n];
                v[f] = 1;
                for (i, &pc) in piv.iter().enumerate() {
                    v[pc] = (p - rows[i][f]) % p;
                }
                v
            })
            .collect();
        if ker.is_empty() {
            return Ok(SubspaceQ::zero(n).with_provenance("polynomial kernel"));
        }
        let kp = rref_mod_p(&mut ker, n, p);
        let better = match &best {
            None => true,
            Some((bp, _, _)) => kp.len() < bp.len() || (kp.len() == bp.len() && kp < *bp),
        };
        if better {
            let free: Vec<usize> = (0..n).filter(|c| kp.binary_search(c).is_err()).collect();
            best = Some((kp.clone(), free.clone(), Crt::new(kp.len() * free.len())));
            verify_at = 0;
        }
        let (bp, free, crt) = best.as_mut().expect("a pivot pattern");
        if kp != *bp {
            continue;
        }
        let res: Vec<u64> = ker.iter().flat_map(|r| free.iter().map(|&j| r[j])).collect();
        crt.add(p, &res);
        if crt.bits() < verify_at {
            continue;
        }
        let Some(vals) = crt.reconstruct() else { continue };
        let nf = free.len();
        let basis: Vec<Vec<Rational>> = (0..bp.len())
            .map(|i| {
                let mut r = vec![Rational::zero(); n];
                r[bp[i]] = Rational::one();
                for (s, &j) in free.iter().enumerate() {
                    r[j] = vals[i * nf + s].clone();
                }
                r
            })
            .collect();
        let cand = SubspaceQ {
            basis: MatrixQ::from_rows_with_cols(n, basis),
            pivots: bp.clone(),
            ambient_dim: n,
            provenance: "polynomial kernel".into(),
        };
        if let Ok(r) = restrict(t, &cand) {
            if annihilates(&r, g, radius)? {
                return Ok(cand);
            }
        }
        verify_at = crt.bits() + crt.bits() / 4 + 1;
    }
    unreachable!("the prime stream is infinite")
}

/// Whether g(R) = 0. When deg g = dim R this holds if g is the characteristic
/// polynomial. Otherwise, when the Krylov sequence of the first unit vector
/// spans (its rank certified modulo a prime), g(R) vanishes exactly when it
/// kills that vector; failing both, g(R) is evaluated.
fn annihilates(r: &MatrixQ, g: &PolynomialQ, radius: Option<&BigUint>) -> Result<bool> {
    let dim = r.rows();
    if dim == 0 || g.is_zero() {
        return Ok(true);
    }
    if g.degree() as usize == dim {
        let cp = match radius {
            Some(b) => charpoly_spectral(r, b)?,
            None => charpoly(r)?,
        };
        if cp == g.monic() {
            return Ok(true);
        }
    }
    let mut v = vec![Rational::zero(); dim];
    v[0] = Rational::one();
    let mut krylov = vec![v];
    while krylov.len() < (g.degree() as usize + 1).max(dim) {
        let next = r.left_apply(krylov.last().expect("nonempty"));
        krylov.push(next);
    }
    let mut image = vec![Rational::zero(); dim];
    for (c, w) in g.coeffs().iter().zip(&krylov) {
        for (x, y) in image.iter_mut().zip(w) {
            *x += c * y;
        }
    }
    if image.iter().any(|x| !x.is_zero()) {
        return Ok(false);
    }
    if full_rank_certified(&krylov[..dim]) {
        return Ok(true);
    }
    Ok(r.eval_poly(g)?.is_zero())
}

/// True when the square rational matrix with these rows has a nonzero
/// determinant modulo some prime not dividing its denominators.
fn full_rank_certified(rows: &[Vec<Rational>]) -> bool {
    let n = rows.len();
    'primes: for p in half_word_primes().take(3) {
        let mut m = Vec::with_capacity(n);
        for row in rows {
            let mut out = Vec::with_capacity(row.len());
            for x in row {
                let den = residue(x.denom(), p);
                if den == 0 {
                    continue 'primes;
                }
                out.push(residue(x.numer(), p) * inv_mod(den, p) % p);
            }
            m.push(out);
        }
        if rref_mod_p(&mut m, n, p).len() == n {
            return true;
        }
    }
    false
}

/// Intersection via the null space of the stacked bases: (x, y) with
/// x A + y B = 0 gives x A in both subspaces.
pub fn intersect(a: &SubspaceQ, b: &SubspaceQ) -> Result<SubspaceQ> {
    if a.ambient_dim != b.ambient_dim {
        return Err(Error::domain(format!(
            "ambient dimension mismatch: {} vs {}",
            a.ambient_dim, b.ambient_dim
        )));
    }
    let prov = format!("({})&({})", a.provenance, b.provenance);
    if a.dim() == 0 || b.dim() == 0 {
        return Ok(SubspaceQ::zero(a.ambient_dim).with_provenance(prov));
    }
    let stacked = a.basis.vstack(&b.basis)?;
    let null = left_kernel(&stacked);
    let ra = a.dim();
    let vectors: Vec<Vec<Rational>> = (0..null.dim())
        .map(|i| a.basis.left_apply(&null.basis.row(i)[..ra]))
        .collect();
    Ok(SubspaceQ::span(a.ambient_dim, vectors, prov))
}

/// The matrix of the operator `t` (acting on row vectors from the right) on the
/// invariant subspace `v`, in the echelon basis of `v`: basis * t = R * basis.
pub fn restrict(t: &MatrixQ, v: &SubspaceQ) -> Result<MatrixQ> {
    if !t.is_square() || t.rows() != v.ambient_dim {
        return Err(Error::domain("operator and subspace dimensions disagree"));
    }
    let image = v.basis.try_mul(t)?;
    let d = v.dim();
    let rows: Vec<Vec<Rational>> = (0..d)
        .map(|i| v.pivots.iter().map(|&p| image.get(i, p).clone()).collect())
        .collect();
    let r = MatrixQ::from_rows_with_cols(d, rows);
    if d > 0 && r.try_mul(&v.basis)? != image {
        return Err(Error::Invariant(format!(
            "subspace '{}' is not stable under the operator",
            v.provenance
        )));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn m(rows: &[&[i64]]) -> MatrixQ {
        MatrixQ::from_i64(rows)
    }

    #[test]
    fn rref_examples() {
        let (r, p) = rref_full(&m(&[&[2, 4], &[1, 2]]));
        assert_eq!(r, m(&[&[1, 2], &[0, 0]]));
        assert_eq!(p, vec![0]);
        let (r, p) = rref(&MatrixQ::identity(3));
        assert_eq!(r, MatrixQ::identity(3));
        assert_eq!(p, vec![0, 1, 2]);
        let (r, p) = rref_full(&MatrixQ::zeros(2, 2));
        assert!(r.is_zero());
        assert!(p.is_empty());
    }

    #[test]
    fn rref_with_fractions() {
        let (r, p) = rref(&m(&[&[2, 3, 1], &[4, 1, 5]]));
        assert_eq!(p, vec![0, 1]);
        assert_eq!(r.get(0, 2), &crate::arith::rat_frac(7, 5));
        assert_eq!(r.get(1, 2), &crate::arith::rat_frac(-3, 5));
    }

    #[test]
    fn kernel_examples() {
        let k = kernel(&m(&[&[1, 1]]));
        assert_eq!(k.dim(), 1);
        assert_eq!(k.basis().row(0), &[rat(1), rat(-1)]);
        assert_eq!(kernel(&m(&[&[2, 1, 0], &[0, 1, 3], &[1, 0, 1]])).dim(), 0);
        assert_eq!(kernel(&MatrixQ::zeros(2, 2)).dim(), 2);
    }

    #[test]
    fn intersect_examples() {
        let a = SubspaceQ::row_space(&m(&[&[1, 0, 0], &[0, 1, 0]]), "xy");
        let b = SubspaceQ::row_space(&m(&[&[0, 1, 0], &[0, 0, 1]]), "yz");
        let ab = intersect(&a, &b).unwrap();
        assert_eq!(ab.dim(), 1);
        assert_eq!(ab.basis().row(0), &[rat(0), rat(1), rat(0)]);
        assert_eq!(intersect(&a, &a).unwrap().basis(), a.basis());
        let x = SubspaceQ::row_space(&m(&[&[1, 0]]), "x");
        let y = SubspaceQ::row_space(&m(&[&[0, 1]]), "y");
        assert_eq!(intersect(&x, &y).unwrap().dim(), 0);
        assert!(intersect(&a, &x).is_err());
    }

    #[test]
    fn restrict_examples() {
        let t = MatrixQ::diagonal(&[rat(1), rat(2), rat(3)]);
        let v = SubspaceQ::row_space(&m(&[&[1, 0, 0], &[0, 1, 0]]), "e1,e2");
        assert_eq!(restrict(&t, &v).unwrap(), MatrixQ::diagonal(&[rat(1), rat(2)]));
        let w = SubspaceQ::row_space(&m(&[&[1, 1, 0]]), "w");
        assert_eq!(restrict(&MatrixQ::identity(3), &w).unwrap(), MatrixQ::identity(1));
        let swap = m(&[&[0, 1], &[1, 0]]);
        let diag = SubspaceQ::row_space(&m(&[&[1, 1]]), "diag");
        assert_eq!(restrict(&swap, &diag).unwrap(), m(&[&[1]]));
        let e1 = SubspaceQ::row_space(&m(&[&[1, 0]]), "e1");
        assert!(matches!(restrict(&swap, &e1), Err(Error::Invariant(_))));
    }

    #[test]
    fn coordinates_and_embedding() {
        let v = SubspaceQ::row_space(&m(&[&[1, 2, 0], &[0, 0, 1]]), "v");
        assert_eq!(v.coordinates(&[rat(2), rat(4), rat(5)]), Some(vec![rat(2), rat(5)]));
        assert_eq!(v.coordinates(&[rat(0), rat(1), rat(0)]), None);
        let inner = SubspaceQ::row_space(&m(&[&[1, 1]]), "inner");
        let e = v.embed(&inner).unwrap();
        assert_eq!(e.basis().row(0), &[rat(1), rat(2), rat(1)]);
        assert_eq!(v.relative(&e).unwrap().basis(), inner.basis());
    }
}
