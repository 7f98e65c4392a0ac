use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;

use hecke_n0::arith::rat;
use hecke_n0::engine::{
    atkin_lehner_eigen_check, compute_n0, easy_half_check, maeda_report, n0_by_streets, n0_direct, streets_for_q,
    sturm_bound, CheckStatus, SStar,
};
use hecke_n0::linalg::{rref, MatrixQ};

const PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

fn invert(m: &MatrixQ) -> MatrixQ {
    let n = m.rows();
    let (r, pivots) = rref(&m.hstack(&MatrixQ::identity(n)).unwrap());
    assert_eq!(pivots, (0..n).collect::<Vec<_>>());
    MatrixQ::from_rows_with_cols(n, (0..n).map(|i| r.row(i)[n..].to_vec()).collect())
}

/// Unit lower times unit upper triangular: invertible over Z.
fn change_of_basis(lower: &[i64], upper: &[i64], n: usize) -> MatrixQ {
    let mut l = MatrixQ::identity(n);
    let mut u = MatrixQ::identity(n);
    let mut it = lower.iter().chain(upper.iter()).cycle();
    for i in 0..n {
        for j in 0..i {
            l.set(i, j, rat(*it.next().unwrap()));
            u.set(j, i, rat(*it.next().unwrap()));
        }
    }
    &l * &u
}

fn brute_force_n0(eigen: &[Vec<i64>]) -> u64 {
    let n = eigen[0].len();
    if n < 2 {
        return 0;
    }
    for (i, &p) in PRIMES.iter().enumerate() {
        let tuples: BTreeSet<Vec<i64>> = (0..n).map(|j| eigen[..=i].iter().map(|e| e[j]).collect()).collect();
        if tuples.len() == n {
            return p;
        }
    }
    unreachable!("the last prime separates by construction")
}

fn fixture(eigen: &[Vec<i64>], p: &MatrixQ) -> BTreeMap<u64, MatrixQ> {
    let pinv = invert(p);
    PRIMES
        .iter()
        .zip(eigen)
        .map(|(&q, e)| {
            let d = MatrixQ::diagonal(&e.iter().map(|&x| rat(x)).collect::<Vec<_>>());
            (q, &(&pinv * &d) * p)
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn streets_direct_and_brute_force_agree(
        n in 2usize..7,
        raw in prop::collection::vec(prop::collection::vec(0i64..3, 7), 5),
        lower in prop::collection::vec(-2i64..3, 1..8),
        upper in prop::collection::vec(-2i64..3, 1..8),
    ) {
        let mut eigen: Vec<Vec<i64>> = raw.iter().map(|r| r[..n].to_vec()).collect();
        eigen.push((0..n as i64).collect());
        let src = fixture(&eigen, &change_of_basis(&lower, &upper, n));
        let want = brute_force_n0(&eigen);
        prop_assert_eq!(n0_by_streets(&src, 13).unwrap().0, want);
        prop_assert_eq!(n0_direct(&src, 13).unwrap().0, want);
    }
}

#[test]
fn galois_orbits_are_separated_by_a_later_prime() {
    // two copies of the orbit {±√2} at p = 2, told apart at p = 3 only
    let mut t2 = MatrixQ::zeros(4, 4);
    for b in [0, 2] {
        t2.set(b, b + 1, rat(2));
        t2.set(b + 1, b, rat(1));
    }
    let t3 = MatrixQ::diagonal(&[rat(1), rat(1), rat(2), rat(2)]);
    let mut src = BTreeMap::new();
    src.insert(2, t2);
    src.insert(3, t3);
    src.insert(5, MatrixQ::identity(4));
    src.insert(7, MatrixQ::identity(4));
    let streets = streets_for_q(&src, 2).unwrap();
    assert_eq!(streets.iter().map(|s| s.dim()).collect::<Vec<_>>(), vec![4]);
    assert_eq!(streets_for_q(&src, 3).unwrap().iter().map(|s| s.dim()).collect::<Vec<_>>(), vec![2, 2]);
    assert_eq!(n0_direct(&src, 3).unwrap().0, 3);
    assert_eq!(n0_by_streets(&src, 3).unwrap().0, 3);
}

#[test]
fn streets_and_direct_agree_on_computed_cells() {
    for (n, k) in [(1, 24), (6, 10), (11, 8), (14, 6), (21, 4), (22, 4), (24, 6), (27, 4), (30, 4)] {
        let s = SStar::build(n, k, None).unwrap();
        if s.dim() < 2 {
            continue;
        }
        let sturm = sturm_bound(n, k);
        assert_eq!(n0_by_streets(&s, sturm).unwrap().0, n0_direct(&s, sturm).unwrap().0, "N={n} k={k}");
    }
}

#[test]
fn atkin_lehner_signs_match_the_involution() {
    for (n, k) in [(11, 2), (6, 8), (10, 6), (15, 4), (26, 2), (30, 4), (12, 6), (18, 4)] {
        let s = SStar::build(n, k, None).unwrap();
        let rep = atkin_lehner_eigen_check(&s, true).unwrap();
        assert!(rep.ok, "N={n} k={k}: {rep:?}");
    }
    // 11a has a_11 = 1 = -w_11, so w_11 = -1
    let s = SStar::build(11, 2, None).unwrap();
    let rep = atkin_lehner_eigen_check(&s, true).unwrap();
    assert_eq!((rep.entries[0].plus, rep.entries[0].minus, rep.entries[0].w_plus_dim), (1, 0, Some(0)));
}

#[test]
fn easy_half_and_maeda_reports() {
    let r = compute_n0(6, 38, None).unwrap();
    let e = easy_half_check(&r);
    assert_eq!((e.t, e.least_prime_not_dividing, e.status), (2, 5, CheckStatus::Pass));
    let r = compute_n0(11, 2, None).unwrap();
    assert_eq!(easy_half_check(&r).status, CheckStatus::NotApplicable);

    let s = SStar::build(10, 12, None).unwrap();
    let m = maeda_report(&s, &[3, 7, 11]).unwrap();
    assert_eq!(m.expected_orbits, Some(4));
    assert_eq!(m.sign_patterns, Some(4));
    assert!(m.entries.iter().all(|e| e.separable && e.matches_orbit_count == Some(true)));
    assert!(maeda_report(&s, &[5]).is_err());
}

#[test]
fn paper_anchor_cells() {
    for (n, k, n0) in [(1, 38, 2), (2, 38, 3), (6, 38, 5), (40, 2, 0), (49, 4, 3), (57, 2, 3), (30, 14, 7), (90, 4, 7)] {
        assert_eq!(compute_n0(n, k, None).unwrap().n0, n0, "N={n} k={k}");
    }
}

#[test]
fn level_32_weight_10_needs_the_prime_3() {
    // 4 | 32 forces a_2 = 0 on every newform, and there are nine of them,
    // so nothing is separated at 2; the tabulated 2 cannot hold.
    let s = SStar::build(32, 10, None).unwrap();
    assert_eq!(s.dim(), 9);
    assert_eq!(s.hecke_charpoly(2).unwrap(), hecke_n0::arith::PolynomialQ::monomial(rat(1), 9));
    let sturm = sturm_bound(32, 10);
    assert_eq!(n0_direct(&s, sturm).unwrap(), (3, vec![(2, 1), (3, 9)]));
    assert_eq!(n0_by_streets(&s, sturm).unwrap().0, 3);
}
