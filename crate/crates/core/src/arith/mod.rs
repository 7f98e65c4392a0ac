//! Exact arithmetic: big rationals, univariate polynomials over Q, factorization
//! over Q and exact characteristic polynomials.

pub mod charpoly;
pub mod factor;
pub mod modp;
pub mod modular;
pub mod ntheory;
pub mod poly;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use charpoly::{charpoly, charpoly_berkowitz, charpoly_spectral, charpoly_squarefree_certified};
pub use factor::{factor_over_q, squarefree_decompose, FactoredPolynomial};
pub use poly::PolynomialQ;

/// Exact rational scalar, always in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int_to_rat(n: &BigInt) -> Rational {
    Rational::from_integer(n.clone())
}

/// Least common multiple of the denominators of `values` (1 for an empty slice).
pub fn denominator_lcm<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    let mut l = BigInt::one();
    for v in values {
        if !v.denom().is_one() {
            l = l.lcm(v.denom());
        }
    }
    l
}

/// Scales a rational vector to a primitive integer vector with the same span.
/// The first nonzero entry keeps its sign. Returns all zeros for a zero vector.
pub fn primitive_integer_vector(values: &[Rational]) -> Vec<BigInt> {
    let l = denominator_lcm(values.iter());
    let mut ints: Vec<BigInt> = values
        .iter()
        .map(|v| v.numer() * (&l / v.denom()))
        .collect();
    let g = content(&ints);
    if !g.is_zero() && !g.is_one() {
        for x in ints.iter_mut() {
            *x /= &g;
        }
    }
    ints
}

/// Nonnegative gcd of a list of integers (0 for an all-zero list).
pub fn content(values: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for v in values {
        if v.is_zero() {
            continue;
        }
        g = g.gcd(v);
        if g.is_one() {
            break;
        }
    }
    g.abs()
}

/// Number of bits in the numerator plus denominator; a size measure for pivoting.
pub fn rational_height(r: &Rational) -> u64 {
    r.numer().bits() + r.denom().bits()
}
