use std::collections::VecDeque;

use num_traits::{One, Zero};

use super::matrix::MatrixQ;
use crate::arith::{charpoly, charpoly_squarefree_certified, Rational};
use crate::error::{Error, Result};

/// Incrementally maintained echelon basis. Each stored row has a unit pivot and
/// zeros in the pivot columns of all rows inserted before it, so reducing a
/// vector against the rows in insertion order clears every pivot column.
#[derive(Clone, Debug, Default)]
pub struct EchelonBuilder {
    len: usize,
    rows: Vec<(usize, Vec<Rational>)>,
}

impl EchelonBuilder {
    pub fn new(len: usize) -> Self {
        EchelonBuilder { len, rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, mut v: Vec<Rational>) -> Vec<Rational> {
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let c = v[*p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x -= &c * r;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        assert_eq!(v.len(), self.len);
        self.reduce(v.to_vec()).iter().all(Zero::is_zero)
    }

    /// Adds `v` to the span; returns false if it was already there.
    pub fn insert(&mut self, v: Vec<Rational>) -> bool {
        assert_eq!(v.len(), self.len);
        let mut r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        if !r[p].is_one() {
            let inv = r[p].recip();
            for x in r.iter_mut() {
                *x *= &inv;
            }
        }
        self.rows.push((p, r));
        true
    }
}

/// Dimension over Q of the algebra generated by the identity and `ops`.
/// The operators must be square, of equal size, and pairwise commuting.
pub fn generated_algebra_dim(ops: &[MatrixQ]) -> Result<usize> {
    let Some(first) = ops.first() else {
        return Ok(1);
    };
    let n = first.rows();
    if ops.iter().any(|t| !t.is_square() || t.rows() != n) {
        return Err(Error::domain("operators must be square of the same size"));
    }
    if n == 0 {
        return Ok(0);
    }
    for (i, a) in ops.iter().enumerate() {
        for b in &ops[i + 1..] {
            if !a.commutes_with(b) {
                return Err(Error::domain("operators do not commute"));
            }
        }
    }
    let mut span = EchelonBuilder::new(n * n);
    let id = MatrixQ::identity(n);
    span.insert(id.entries().to_vec());
    let mut queue = VecDeque::from([id]);
    while let Some(m) = queue.pop_front() {
        for t in ops {
            let prod = m.try_mul(t)?;
            if span.insert(prod.entries().to_vec()) {
                queue.push_back(prod);
            }
        }
    }
    Ok(span.dim())
}

/// Same value as [`generated_algebra_dim`], with exact shortcuts tried first.
/// If some combination Σ yⁱ Tᵢ has a squarefree charpoly (certified modulo a
/// prime), the algebra has full dimension. One operator: if the squarefree part
/// g of its charpoly has g(T) = 0 then g is the minimal polynomial. Otherwise
/// the closure is computed.
pub fn commuting_algebra_dim(ops: &[MatrixQ]) -> Result<usize> {
    let Some(first) = ops.first() else {
        return Ok(1);
    };
    let n = first.rows();
    if n == 0 || ops.iter().any(|t| !t.is_square() || t.rows() != n) {
        return generated_algebra_dim(ops);
    }
    if ops.len() == 1 {
        if charpoly_squarefree_certified(first, 3)? {
            return Ok(n);
        }
        let f = charpoly(first)?;
        let g = f.exact_div(&f.gcd(&f.derivative()))?;
        if first.eval_poly(&g)?.is_zero() {
            return Ok(g.degree() as usize);
        }
        return generated_algebra_dim(ops);
    }
    for (i, a) in ops.iter().enumerate() {
        for b in &ops[i + 1..] {
            if !a.commutes_with(b) {
                return Err(Error::domain("operators do not commute"));
            }
        }
    }
    for y in 1..=3i64 {
        let mut l = ops[0].clone();
        let mut c = Rational::one();
        for t in &ops[1..] {
            c *= Rational::from_integer(y.into());
            l = &l + &t.scale(&c);
        }
        if charpoly_squarefree_certified(&l, 2)? {
            return Ok(n);
        }
    }
    generated_algebra_dim(ops)
}
