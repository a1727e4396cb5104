use formal_inverse::algebra::{rat, series_compose, Monomial, Poly, PolyMatrix, Rational, Series};
use formal_inverse::tensor::{orbit_size, parse_map, serialize_map, PolyMap, SymTensor};
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(p, q)| rat(p, q))
}

fn poly(nvars: usize, max_deg: u32) -> impl Strategy<Value = Poly> {
    prop::collection::vec((prop::collection::vec(0..=max_deg, nvars), small_rational()), 0..5)
        .prop_map(move |terms| Poly::from_terms(nvars, terms.into_iter().map(|(e, c)| (Monomial::new(e), c))))
}

fn tensor(n: usize, d: usize) -> impl Strategy<Value = PolyMap> {
    prop::collection::vec((0..n, prop::collection::vec(0..n, d), small_rational()), 0..6).prop_map(move |es| {
        let mut t = SymTensor::new(n, d).unwrap();
        for (i, lower, v) in es {
            t.add(i, &lower, v).unwrap();
        }
        PolyMap::new(t, None)
    })
}

fn any_map() -> impl Strategy<Value = PolyMap> {
    (1usize..=3, 2usize..=3).prop_flat_map(|(n, d)| tensor(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_axioms(a in poly(2, 3), b in poly(2, 3), c in poly(2, 3)) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &(-&a), Poly::zero(2));
        prop_assert_eq!(&a * &Poly::one(2), a.clone());
    }

    #[test]
    fn truncated_compose_matches_full(f in poly(2, 3), g0 in poly(2, 2), g1 in poly(2, 2), cap in 0u32..6) {
        // inner series without constant term
        let strip = |p: &Poly| Poly::from_terms(2, p.terms().filter(|(m, _)| m.degree() > 0).map(|(m, c)| (m.clone(), c.clone())));
        let (g0, g1) = (strip(&g0), strip(&g1));
        let full = f.compose(&[g0.clone(), g1.clone()]).unwrap().truncate(cap);
        let series = series_compose(&f, &[Series::new(g0, cap), Series::new(g1, cap)]).unwrap();
        prop_assert_eq!(series.body(), &full);
    }

    #[test]
    fn det_is_multiplicative(a in prop::collection::vec(poly(1, 2), 4), b in prop::collection::vec(poly(1, 2), 4)) {
        let ma = PolyMatrix::from_rows(vec![a[0..2].to_vec(), a[2..4].to_vec()]).unwrap();
        let mb = PolyMatrix::from_rows(vec![b[0..2].to_vec(), b[2..4].to_vec()]).unwrap();
        let lhs = ma.mul(&mb).unwrap().det().unwrap();
        prop_assert_eq!(lhs, &ma.det().unwrap() * &mb.det().unwrap());
    }

    #[test]
    fn map_file_round_trip(map in any_map()) {
        let parsed = parse_map(&serialize_map(&map)).unwrap();
        prop_assert_eq!(parsed.tensor(), map.tensor());
        prop_assert_eq!(parsed.build_h(), map.build_h());
    }

    #[test]
    fn norm_matches_brute_force(map in any_map()) {
        let (n, d) = (map.n(), map.d());
        let mut best = Rational::zero();
        for i in 0..n {
            let mut row = Rational::zero();
            let mut idx = vec![0usize; d];
            loop {
                row += map.tensor().get(i, &idx).abs();
                let mut k = 0;
                while k < d && idx[k] + 1 == n {
                    idx[k] = 0;
                    k += 1;
                }
                if k == d {
                    break;
                }
                idx[k] += 1;
            }
            best = best.max(row);
        }
        prop_assert_eq!(map.norm_w(), best);
    }

    #[test]
    fn euler_identity(map in any_map()) {
        // sum_j M_ij x_j = d H_i for homogeneous H
        let n = map.n();
        let h = map.build_h();
        let m = map.jacobian_matrix();
        for i in 0..n {
            let mut lhs = Poly::zero(n);
            for j in 0..n {
                lhs = &lhs + &(m.get(i, j) * &Poly::var(n, j));
            }
            prop_assert_eq!(lhs, h[i].scale(&rat(map.d() as i64, 1)));
        }
    }

    #[test]
    fn jacobian_is_one_at_origin(map in any_map()) {
        let jf = map.jacobian_det().unwrap();
        prop_assert_eq!(jf.constant_term(), rat(1, 1));
        prop_assert_eq!(jf.eval(&vec![Rational::zero(); map.n()]).unwrap(), rat(1, 1));
    }

    #[test]
    fn orbit_sizes_sum_to_power(n in 1usize..=3, d in 2usize..=4) {
        let total = formal_inverse::tensor::sorted_tuples(n, d).iter().map(|t| orbit_size(t)).sum::<num_bigint::BigUint>();
        prop_assert_eq!(total, num_bigint::BigUint::from(n).pow(d as u32));
    }
}
