//! Word-size number theory used throughout: primes, factorizations of levels,
//! the index psi(N) and friends.

use num_integer::Integer;

pub fn gcd_i64(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

/// Extended gcd: returns (g, x, y) with a*x + b*y = g >= 0.
pub fn xgcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i64, 0i64);
    let (mut old_t, mut t) = (0i64, 1i64);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Inverse of `a` modulo `m` (m >= 1), if it exists. Result lies in [0, m).
pub fn inverse_mod(a: i64, m: i64) -> Option<i64> {
    if m == 1 {
        return Some(0);
    }
    let (g, x, _) = xgcd(a.rem_euclid(m), m);
    (g == 1).then(|| x.rem_euclid(m))
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn next_prime(n: u64) -> u64 {
    let mut p = n + 1;
    while !is_prime(p) {
        p += 1;
    }
    p
}

/// Primes p with p <= bound, ascending.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    (2..=bound).filter(|&p| is_prime(p)).collect()
}

/// Prime factorization as (prime, exponent) pairs, ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn prime_divisors(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

/// Positive divisors of n, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut ds: Vec<u64> = (1..=n).take_while(|d| d * d <= n).filter(|d| n % d == 0).collect();
    let mut big: Vec<u64> = ds.iter().rev().map(|d| n / d).filter(|&q| q * q != n).collect();
    ds.append(&mut big);
    ds
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// The index [SL2(Z) : Gamma0(N)] = N * prod_{p | N} (1 + 1/p).
pub fn psi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p + 1))
}

/// Number of positive divisors.
pub fn sigma0(n: u64) -> u64 {
    factorize(n).into_iter().map(|(_, e)| e as u64 + 1).product()
}

/// Number of distinct prime divisors.
pub fn omega(n: u64) -> u32 {
    factorize(n).len() as u32
}

pub fn is_squarefree(n: u64) -> bool {
    factorize(n).iter().all(|&(_, e)| e == 1)
}

/// Number of cusps of Gamma0(N): sum over d | N of phi(gcd(d, N/d)).
pub fn cusp_count(n: u64) -> u64 {
    divisors(n)
        .into_iter()
        .map(|d| euler_phi(d.gcd(&(n / d))))
        .sum()
}

/// Primes used for multi-modular work: the largest primes below 2^62, descending.
pub fn word_primes() -> impl Iterator<Item = u64> {
    let mut p: u64 = 1 << 62;
    std::iter::from_fn(move || {
        loop {
            p -= 1;
            if is_prime(p) {
                return Some(p);
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psi_matches_index_counts() {
        assert_eq!(psi(1), 1);
        assert_eq!(psi(11), 12);
        assert_eq!(psi(6), 12);
        assert_eq!(psi(90), 216);
        assert_eq!(psi(49), 56);
    }

    #[test]
    fn cusp_counts() {
        assert_eq!(cusp_count(1), 1);
        assert_eq!(cusp_count(11), 2);
        assert_eq!(cusp_count(12), 6);
        assert_eq!(cusp_count(49), 8);
    }

    #[test]
    fn small_helpers() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(49), vec![1, 7, 49]);
        assert_eq!(sigma0(12), 6);
        assert_eq!(omega(30), 3);
        assert!(is_squarefree(30) && !is_squarefree(12));
        assert_eq!(inverse_mod(3, 7), Some(5));
        assert_eq!(inverse_mod(2, 4), None);
        assert_eq!(xgcd(240, 46).0, 2);
        assert!(is_prime(4611686018427387847));
        assert_eq!(next_prime(13), 17);
    }
}
