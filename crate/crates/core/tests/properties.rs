use std::collections::BTreeSet;

use proptest::prelude::*;

use num_bigint::BigUint;

use hecke_n0::arith::{
    charpoly, charpoly_berkowitz, charpoly_spectral, charpoly_squarefree_certified, factor_over_q, rat, rat_frac,
    squarefree_decompose, PolynomialQ,
};
use hecke_n0::linalg::{
    commuting_algebra_dim, generated_algebra_dim, kernel, left_kernel, poly_kernel, rank, restrict, rref, rref_fraction_free,
    MatrixQ, SubspaceQ,
};

fn poly(coeffs: &[i64]) -> PolynomialQ {
    PolynomialQ::from_i64(coeffs)
}

fn matrix(n: usize, cols: usize, entries: &[i64]) -> MatrixQ {
    let rows = (0..n)
        .map(|i| (0..cols).map(|j| rat(entries[(i * cols + j) % entries.len()])).collect())
        .collect();
    MatrixQ::from_rows_with_cols(cols, rows)
}

/// D A D⁻¹ for an integer matrix A and a rational diagonal D: rational entries,
/// integral charpoly, eigenvalues bounded by the largest absolute row sum of A.
fn rescaled(n: usize, e: &[i64], scales: &[i64]) -> (MatrixQ, BigUint) {
    let a = matrix(n, n, e);
    let d = |i: usize| rat_frac(scales[i % scales.len()], 1 + (i as i64 % 3));
    let rows = (0..n)
        .map(|i| (0..n).map(|j| a.get(i, j) * d(i) / d(j)).collect())
        .collect();
    let radius = (0..n)
        .map(|i| (0..n).map(|j| e[(i * n + j) % e.len()].unsigned_abs()).sum::<u64>())
        .max()
        .unwrap_or(0);
    (MatrixQ::from_rows_with_cols(n, rows), BigUint::from(radius))
}

fn monic_factor() -> impl Strategy<Value = PolynomialQ> {
    (1usize..=3, prop::collection::vec(-6i64..=6, 3)).prop_map(|(d, c)| {
        let mut c = c[..d].to_vec();
        c.push(1);
        poly(&c)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn factor_round_trip(parts in prop::collection::vec(monic_factor(), 1..4), unit in 1i64..7) {
        let mut f = PolynomialQ::constant(rat(unit));
        for g in &parts {
            f = &f * g;
        }
        prop_assume!(f.degree() <= 8);
        let fac = factor_over_q(&f).unwrap();
        prop_assert_eq!(fac.expand(), f.clone());
        prop_assert_eq!(fac.degrees().iter().sum::<usize>(), f.degree() as usize);
        for (g, _) in &fac.factors {
            prop_assert!(g.is_monic());
            // irreducible factors are squarefree
            prop_assert_eq!(squarefree_decompose(g).unwrap().len(), 1);
        }
    }

    #[test]
    fn modular_gcd_matches_euclid(common in prop::collection::vec(monic_factor(), 0..3), a in monic_factor(), b in monic_factor(), s in 1i64..50, t in -30i64..30) {
        let mut g = PolynomialQ::one();
        for c in &common {
            g = &g * c;
        }
        let x = &(&g * &a) * &PolynomialQ::constant(rat(s));
        let y = &(&g * &b) * &PolynomialQ::constant(hecke_n0::arith::rat_frac(t.max(1), 7));
        let fast = x.gcd(&y);
        prop_assert_eq!(&fast, &x.gcd_euclid(&y));
        prop_assert!(x.rem(&fast).unwrap().is_zero());
        prop_assert_eq!(x.gcd(&PolynomialQ::zero()), x.monic());
    }

    #[test]
    fn spectral_charpoly_and_squarefree_certificate(n in 1usize..=9, e in prop::collection::vec(-5i64..=5, 1..40), scales in prop::collection::vec(1i64..=7, 1..5)) {
        let (m, radius) = rescaled(n, &e, &scales);
        let exact = charpoly(&m).unwrap();
        prop_assert_eq!(charpoly_spectral(&m, &radius).unwrap(), exact.clone());
        // an understated radius is caught by the extra primes or happens to suffice
        prop_assert_eq!(charpoly_spectral(&m, &BigUint::from(0u32)).unwrap(), exact.clone());
        if charpoly_squarefree_certified(&m, 3).unwrap() {
            prop_assert_eq!(exact.gcd_euclid(&exact.derivative()).degree(), 0);
        }
    }

    #[test]
    fn polynomial_kernels_match_evaluation(n in 1usize..=7, e in prop::collection::vec(-3i64..=3, 1..30), scales in prop::collection::vec(1i64..=5, 1..4), extra in prop::collection::vec(-2i64..=2, 1..4)) {
        let (m, radius) = rescaled(n, &e, &scales);
        let mut polys: Vec<PolynomialQ> = factor_over_q(&charpoly(&m).unwrap())
            .unwrap()
            .factors
            .into_iter()
            .flat_map(|(g, k)| [g.clone(), g.pow(k)])
            .collect();
        polys.push(PolynomialQ::from_i64(&extra));
        for g in polys {
            let want = left_kernel(&m.eval_poly(&g).unwrap());
            let plain = poly_kernel(&m, &g, None).unwrap();
            let bounded = poly_kernel(&m, &g, Some(&radius)).unwrap();
            prop_assert_eq!(plain.basis(), want.basis());
            prop_assert_eq!(bounded.basis(), want.basis());
        }
    }

    #[test]
    fn cayley_hamilton_and_two_charpoly_routes(n in 1usize..=12, e in prop::collection::vec(-4i64..=4, 1..40)) {
        let m = matrix(n, n, &e);
        let cp = charpoly(&m).unwrap();
        prop_assert_eq!(cp.degree(), n as isize);
        prop_assert!(m.eval_poly(&cp).unwrap().is_zero());
        prop_assert_eq!(cp, charpoly_berkowitz(&m).unwrap());
    }

    #[test]
    fn grassmann_identity(n in 1usize..9, a in prop::collection::vec(-2i64..=2, 1..60), b in prop::collection::vec(-2i64..=2, 1..60), ra in 0usize..9, rb in 0usize..9) {
        let u = SubspaceQ::row_space(&matrix(ra.min(n), n, &a), "u");
        let w = SubspaceQ::row_space(&matrix(rb.min(n), n, &b), "w");
        let sum = u.sum(&w).unwrap();
        let cap = u.intersect(&w).unwrap();
        prop_assert_eq!(sum.dim() + cap.dim(), u.dim() + w.dim());
        prop_assert!(u.contains_subspace(&cap) && w.contains_subspace(&cap));
        prop_assert!(sum.contains_subspace(&u) && sum.contains_subspace(&w));
    }

    #[test]
    fn algebra_dim_counts_joint_tuples(n in 1usize..=8, raw in prop::collection::vec(prop::collection::vec(0i64..3, 8), 1..4)) {
        let diag: Vec<Vec<i64>> = raw.iter().map(|r| r[..n].to_vec()).collect();
        let tuples: BTreeSet<Vec<i64>> = (0..n).map(|j| diag.iter().map(|d| d[j]).collect()).collect();
        let ops: Vec<MatrixQ> = diag
            .iter()
            .map(|d| MatrixQ::diagonal(&d.iter().map(|&x| rat(x)).collect::<Vec<_>>()))
            .collect();
        prop_assert_eq!(generated_algebra_dim(&ops).unwrap(), tuples.len());
        prop_assert_eq!(commuting_algebra_dim(&ops).unwrap(), tuples.len());
    }

    #[test]
    fn polynomial_algebra_of_one_matrix(n in 1usize..=7, e in prop::collection::vec(-3i64..=3, 1..30)) {
        // includes non-semisimple matrices, where the shortcut must defer to the closure
        let m = matrix(n, n, &e);
        let sq = &m * &m;
        prop_assert_eq!(commuting_algebra_dim(&[m.clone()]).unwrap(), generated_algebra_dim(&[m.clone()]).unwrap());
        prop_assert_eq!(
            commuting_algebra_dim(&[m.clone(), sq.clone()]).unwrap(),
            generated_algebra_dim(&[m, sq]).unwrap()
        );
    }

    #[test]
    fn multimodular_rref_matches_fraction_free(r in 1usize..8, c in 1usize..9, e in prop::collection::vec(-50i64..=50, 1..80), shift in 0usize..8) {
        let m = matrix(r, c, &e);
        prop_assert_eq!(rref(&m), rref_fraction_free(&m));
        // row order does not matter
        let rows = m.row_vecs();
        let rotated: Vec<_> = rows.iter().cycle().skip(shift % r).take(r).cloned().collect();
        prop_assert_eq!(rref(&MatrixQ::from_rows_with_cols(c, rotated)), rref(&m));
    }

    #[test]
    fn kernels_are_kernels(r in 1usize..7, c in 1usize..7, e in prop::collection::vec(-9i64..=9, 1..50)) {
        let m = matrix(r, c, &e);
        let k = kernel(&m);
        prop_assert_eq!(k.dim() + rank(&m), c);
        for v in k.basis().row_vecs() {
            prop_assert!(m.transpose().left_apply(&v).iter().all(|x| *x == rat(0)));
        }
        let lk = left_kernel(&m);
        prop_assert_eq!(lk.dim() + rank(&m), r);
        for v in lk.basis().row_vecs() {
            prop_assert!(m.left_apply(&v).iter().all(|x| *x == rat(0)));
        }
    }

    #[test]
    fn restriction_composes(n in 2usize..7, d in prop::collection::vec(-3i64..=3, 7), lo in prop::collection::vec(-2i64..=2, 1..20), keep in 1usize..6) {
        // an operator stable on the span of the first basis vectors after a change of basis
        let keep = keep.min(n - 1);
        let mut t = MatrixQ::zeros(n, n);
        for i in 0..n {
            t.set(i, i, rat(d[i % d.len()]));
            if i + 1 < keep {
                t.set(i, i + 1, rat(1));
            }
        }
        let mut p = MatrixQ::identity(n);
        for i in 0..n {
            for j in 0..i {
                p.set(i, j, rat(lo[(i * n + j) % lo.len()]));
            }
        }
        let (pinv_aug, _) = rref(&p.hstack(&MatrixQ::identity(n)).unwrap());
        let pinv = MatrixQ::from_rows_with_cols(n, (0..n).map(|i| pinv_aug.row(i)[n..].to_vec()).collect());
        let conj = &(&pinv * &t) * &p;
        let v = SubspaceQ::span(n, (0..keep).map(|i| p.row(i).to_vec()).collect(), "v");
        let tv = restrict(&conj, &v).unwrap();
        let g = factor_over_q(&charpoly(&tv).unwrap()).unwrap().factors[0].0.clone();
        let w = left_kernel(&tv.eval_poly(&g).unwrap());
        prop_assert!(w.dim() > 0);
        let tw = restrict(&tv, &w).unwrap();
        let direct = restrict(&conj, &v.embed(&w).unwrap()).unwrap();
        prop_assert_eq!(charpoly(&tw).unwrap(), charpoly(&direct).unwrap());
        prop_assert_eq!(charpoly(&tv).unwrap().degree(), keep as isize);
    }
}
