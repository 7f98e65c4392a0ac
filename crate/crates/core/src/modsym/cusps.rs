//! Cusps of Γ₀(N) and their equivalence classes.

use serde::{Deserialize, Serialize};

use super::p1::P1List;
use crate::arith::ntheory::{gcd_i64, inverse_mod, xgcd};

/// A cusp a/c in lowest terms with c ≥ 0; ∞ is 1/0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cusp {
    pub num: i64,
    pub den: i64,
}

impl Cusp {
    pub fn new(num: i64, den: i64) -> Self {
        if den == 0 {
            return Cusp::infinity();
        }
        let g = gcd_i64(num, den);
        let (mut a, mut c) = (num / g, den / g);
        if c < 0 {
            a = -a;
            c = -c;
        }
        Cusp { num: a, den: c }
    }

    pub fn infinity() -> Self {
        Cusp { num: 1, den: 0 }
    }

    pub fn is_infinity(&self) -> bool {
        self.den == 0
    }

    /// A matrix in SL₂(Z) sending ∞ to this cusp.
    pub fn to_sl2(&self) -> [i64; 4] {
        let (g, x, y) = xgcd(self.num, self.den);
        debug_assert_eq!(g, 1);
        // x a + y c = 1: [a, -y; c, x] has determinant a x + y c = 1.
        [self.num, -y, self.den, x]
    }

    /// Image under an integer matrix acting by fractional linear transformation.
    pub fn apply(&self, g: &[i64; 4]) -> Cusp {
        Cusp::new(g[0] * self.num + g[1] * self.den, g[2] * self.num + g[3] * self.den)
    }
}

/// Γ₀(N)-equivalence of cusps in lowest terms: a1/c1 ~ a2/c2 iff
/// s1 c2 ≡ s2 c1 (mod gcd(c1 c2, N)) where a_j s_j ≡ 1 (mod c_j).
pub fn cusp_equivalent(x: &Cusp, y: &Cusp, n: u64) -> bool {
    let n = n as i64;
    let (a1, c1) = (x.num, x.den);
    let (a2, c2) = (y.num, y.den);
    let s = |a: i64, c: i64| -> i64 {
        if c == 0 {
            a.signum()
        } else {
            inverse_mod(a, c).expect("cusp in lowest terms")
        }
    };
    let (s1, s2) = (s(a1, c1), s(a2, c2));
    let m = gcd_i64(c1 * c2, n);
    (s1 * c2 - s2 * c1).rem_euclid(m) == 0
}

/// Cusp classes as orbits of P¹(Z/N) under (c:d) -> (c:c+d); the cusp g∞ for
/// g in SL₂(Z) with bottom row (c, d) lies in the class of (c:d).
#[derive(Clone, Debug)]
pub struct CuspClasses {
    class_of: Vec<usize>,
    count: usize,
}

impl CuspClasses {
    pub fn new(p1: &P1List) -> Self {
        let n = p1.len();
        let mut class_of = vec![usize::MAX; n];
        let mut count = 0;
        for start in 0..n {
            if class_of[start] != usize::MAX {
                continue;
            }
            let mut i = start;
            loop {
                class_of[i] = count;
                let cls = p1.get(i);
                let next = p1
                    .index_of(cls.c as i64, cls.c as i64 + cls.d as i64)
                    .expect("orbit stays in P1");
                if class_of[next] != usize::MAX {
                    break;
                }
                i = next;
            }
            count += 1;
        }
        CuspClasses { class_of, count }
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn class_of_p1(&self, i: usize) -> usize {
        self.class_of[i]
    }

    /// Class of the cusp g∞ where g has bottom row (c, d).
    pub fn class_of_bottom_row(&self, p1: &P1List, c: i64, d: i64) -> usize {
        self.class_of[p1.index_of(c, d).expect("coprime bottom row")]
    }

    pub fn class_of_cusp(&self, p1: &P1List, x: &Cusp) -> usize {
        let g = x.to_sl2();
        self.class_of_bottom_row(p1, g[2], g[3])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ntheory::cusp_count;

    #[test]
    fn examples() {
        let zero = Cusp::new(0, 1);
        let inf = Cusp::infinity();
        assert!(cusp_equivalent(&zero, &inf, 1));
        assert!(!cusp_equivalent(&zero, &inf, 11));
        let p1 = P1List::new(12).unwrap();
        assert_eq!(CuspClasses::new(&p1).count(), 6);
    }

    #[test]
    fn orbit_count_matches_formula() {
        for n in 1..=100u64 {
            let p1 = P1List::new(n).unwrap();
            assert_eq!(CuspClasses::new(&p1).count() as u64, cusp_count(n), "N={n}");
        }
    }

    fn small_cusps(h: i64) -> Vec<Cusp> {
        let mut v = vec![Cusp::infinity()];
        for c in 1..=h {
            for a in -h..=h {
                if gcd_i64(a, c) == 1 {
                    v.push(Cusp::new(a, c));
                }
            }
        }
        v
    }

    #[test]
    fn criterion_matches_orbits() {
        for n in 1..=30u64 {
            let p1 = P1List::new(n).unwrap();
            let cc = CuspClasses::new(&p1);
            let cusps = small_cusps(12);
            for x in &cusps {
                for y in &cusps {
                    let by_orbit = cc.class_of_cusp(&p1, x) == cc.class_of_cusp(&p1, y);
                    assert_eq!(cusp_equivalent(x, y, n), by_orbit, "N={n} {x:?} {y:?}");
                }
            }
        }
    }

    #[test]
    fn invariant_under_gamma0_words() {
        // Words in T = [1,1;0,1] and L = [1,0;N,1] generate elements of Γ₀(N).
        for n in 1..=20i64 {
            let t = [1, 1, 0, 1];
            let ti = [1, -1, 0, 1];
            let l = [1, 0, n, 1];
            let li = [1, 0, -n, 1];
            let gens = [t, ti, l, li];
            let cusps = small_cusps(6);
            let mut state = 17u64;
            for x in &cusps {
                let mut y = *x;
                for _ in 0..6 {
                    state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    y = y.apply(&gens[(state >> 33) as usize % 4]);
                }
                assert!(cusp_equivalent(x, &y, n as u64), "N={n} {x:?} {y:?}");
            }
        }
    }
}
