use formal_inverse::algebra::{rat, Rational};
use formal_inverse::inversion::{fixed_point_inverse, lagrange_oracle_1d, verify_inverse};
use formal_inverse::jacobian::{analyze, chain_tensor_by_polarization, loop_tensor_by_polarization, symmetrized_chain_tensor, symmetrized_loop_tensor};
use formal_inverse::tensor::{catalog, PolyMap, SymTensor};
use formal_inverse::trees::tree_sum_inverse;

#[test]
fn tree_sum_matches_fixed_point_on_catalog() {
    for map in catalog() {
        let cap = 7;
        let trees = tree_sum_inverse(&map, cap).unwrap();
        let fixed = fixed_point_inverse(&map, cap).unwrap();
        assert_eq!(trees, fixed, "{}", map.name().unwrap());
        assert!(verify_inverse(&map, &fixed, cap).unwrap());
    }
}

#[test]
fn fixed_point_matches_lagrange() {
    for d in 2..=4u32 {
        for a in [rat(1, 1), rat(-2, 3), rat(5, 1)] {
            let mut t = SymTensor::new(1, d as usize).unwrap();
            // H = a x^d means w = a d!
            let fact: i64 = (1..=d as i64).product();
            t.add(0, &vec![0; d as usize], &a * rat(fact, 1)).unwrap();
            let map = PolyMap::new(t, None);
            let g = fixed_point_inverse(&map, 12).unwrap();
            assert_eq!(g[0], lagrange_oracle_1d(d, &a, 12), "d={d} a={a}");
        }
    }
}

#[test]
fn random_tensors_three_way_equivalence() {
    let mut positives = 0;
    for seed in 0..100u64 {
        let n = 1 + (seed % 3) as usize;
        let d = 2 + (seed / 3 % 2) as usize;
        let map = PolyMap::new(SymTensor::random_dense(n, d, 1000 + seed, 3).unwrap(), None);
        let v = analyze(&map).unwrap();
        assert!(v.is_consistent(), "seed {seed}: {v:?}");
        assert!(!v.unit_jacobian, "dense random tensor {seed} has unit Jacobian");
        for k in 1..=n {
            assert_eq!(symmetrized_chain_tensor(&map, k).unwrap(), chain_tensor_by_polarization(&map, k).unwrap());
            assert_eq!(symmetrized_loop_tensor(&map, k).unwrap(), loop_tensor_by_polarization(&map, k).unwrap());
        }
        // loops vanish for all k <= n exactly when the Jacobian is one
        let loops_vanish = (1..=n).all(|k| symmetrized_loop_tensor(&map, k).unwrap().is_empty());
        assert_eq!(loops_vanish, v.unit_jacobian);
        positives += v.unit_jacobian as usize;
    }
    assert_eq!(positives, 0);
}

#[test]
fn unit_jacobian_fixtures_have_vanishing_loops() {
    for map in catalog() {
        let v = analyze(&map).unwrap();
        assert!(v.is_consistent(), "{}", map.name().unwrap());
        let loops_vanish = (1..=map.n()).all(|k| symmetrized_loop_tensor(&map, k).unwrap().is_empty());
        assert_eq!(loops_vanish, v.unit_jacobian, "{}", map.name().unwrap());
    }
}

#[test]
fn scaled_fixture_keeps_its_verdict() {
    let base = formal_inverse::tensor::lookup("triangular-3-2").unwrap();
    let mut t = SymTensor::new(3, 2).unwrap();
    for ((i, key), v) in base.tensor().entries() {
        t.add(*i, key, v * Rational::from_integer(7.into())).unwrap();
    }
    assert!(analyze(&PolyMap::new(t, None)).unwrap().unit_jacobian);
}
