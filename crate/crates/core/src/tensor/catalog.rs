use thiserror::Error;

use super::{PolyMap, SymTensor};
use crate::algebra::{factorial, rat_int, uint_to_rat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("no catalog fixture named `{0}`")]
    Unknown(String),
}

pub const CATALOG_NAMES: &[&str] = &[
    "zero-1-2",
    "zero-2-3",
    "univar-2",
    "univar-3",
    "univar-3-w1",
    "triangular-2-2",
    "triangular-2-3",
    "triangular-3-2",
    "triangular-4-3",
    "nilsq-2-2",
    "nilsq-3-3",
    "random-3-2",
    "random-2-3",
];

const RANDOM_SEED: u64 = 0x005e_ed0f_f1c5;

fn univariate(d: usize, w: i64) -> SymTensor {
    let mut t = SymTensor::new(1, d).expect("valid shape");
    t.add(0, &vec![0; d], rat_int(w)).expect("in range");
    t
}

/// `F_i = x_i - x_{i+1}^d` for `i < n`, `F_n = x_n`.
fn triangular(n: usize, d: usize) -> SymTensor {
    let mut t = SymTensor::new(n, d).expect("valid shape");
    for i in 0..n - 1 {
        t.add(i, &vec![i + 1; d], uint_to_rat(factorial(d as u64))).expect("in range");
    }
    t
}

/// `H(x) = s(x)^d * v` with `s = x_1 + ... + x_n` and `v` summing to zero,
/// so `M = v grad(s^d)^T` and `M^2 = (grad(s^d) . v) M = 0` while no
/// coordinate ordering makes `M` triangular.
fn rank_one_square_nilpotent(n: usize, d: usize, v: &[i64]) -> SymTensor {
    assert_eq!(v.iter().sum::<i64>(), 0);
    let mut t = SymTensor::new(n, d).expect("valid shape");
    // s^d = (1/d!) sum over ordered tuples of d! x_j1..x_jd
    let d_fact = uint_to_rat(factorial(d as u64));
    for (i, &vi) in v.iter().enumerate() {
        for key in super::sorted_tuples(n, d) {
            t.add(i, &key, &d_fact * rat_int(vi)).expect("in range");
        }
    }
    t
}

fn build(name: &str) -> Option<SymTensor> {
    let t = match name {
        "zero-1-2" => SymTensor::new(1, 2).ok()?,
        "zero-2-3" => SymTensor::new(2, 3).ok()?,
        "univar-2" => univariate(2, 1),
        "univar-3" => univariate(3, 6),
        "univar-3-w1" => univariate(3, 1),
        "triangular-2-2" => triangular(2, 2),
        "triangular-2-3" => triangular(2, 3),
        "triangular-3-2" => triangular(3, 2),
        "triangular-4-3" => triangular(4, 3),
        "nilsq-2-2" => rank_one_square_nilpotent(2, 2, &[1, -1]),
        "nilsq-3-3" => rank_one_square_nilpotent(3, 3, &[1, 1, -2]),
        "random-3-2" => SymTensor::random_dense(3, 2, RANDOM_SEED, 3).ok()?,
        "random-2-3" => SymTensor::random_dense(2, 3, RANDOM_SEED + 1, 3).ok()?,
        _ => return None,
    };
    Some(t)
}

pub fn lookup(name: &str) -> Result<PolyMap, CatalogError> {
    build(name)
        .map(|t| PolyMap::named(t, name))
        .ok_or_else(|| CatalogError::Unknown(name.to_string()))
}

/// Every fixture, in [`CATALOG_NAMES`] order.
pub fn catalog() -> Vec<PolyMap> {
    CATALOG_NAMES.iter().map(|name| lookup(name).expect("catalog names resolve")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, Poly};

    #[test]
    fn lookup_triangular_3_2() {
        let m = lookup("triangular-3-2").unwrap();
        let x = |k| Poly::var(3, k);
        assert_eq!(m.build_h(), vec![x(1).pow(2), x(2).pow(2), Poly::zero(3)]);
    }

    #[test]
    fn lookup_univar_2() {
        let m = lookup("univar-2").unwrap();
        assert_eq!(m.build_h(), vec![Poly::var(1, 0).pow(2).scale(&rat(1, 2))]);
    }

    #[test]
    fn unknown_name() {
        assert_eq!(lookup("nope"), Err(CatalogError::Unknown("nope".into())));
    }

    #[test]
    fn nilsq_h_is_power_of_sum() {
        let m = lookup("nilsq-2-2").unwrap();
        let s = &Poly::var(2, 0) + &Poly::var(2, 1);
        assert_eq!(m.build_h(), vec![s.pow(2), -&s.pow(2)]);
    }

    #[test]
    fn random_fixtures_are_dense_and_reproducible() {
        let a = lookup("random-3-2").unwrap();
        assert_eq!(a.tensor().entries().count(), 3 * 6);
        assert_eq!(a, lookup("random-3-2").unwrap());
    }

    #[test]
    fn names_are_unique() {
        let mut names = CATALOG_NAMES.to_vec();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), CATALOG_NAMES.len());
    }
}
