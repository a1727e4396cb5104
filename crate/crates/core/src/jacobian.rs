//! The Jacobian condition `det(I - M(x)) = 1` and its equivalent forms:
//! nilpotency of `M(x)`, vanishing of `tr M(x)^k`, and vanishing of the
//! symmetrized chain and loop diagrams built from `w`.
//!
//! Diagram tensors are computed by contracting `w`-vertices directly, then
//! compared against the coefficients of `M(x)^k` via polarization, which is
//! exact over the rationals.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::algebra::{factorial, multinomial, AlgebraError, Poly, PolyMatrix, RatMatrix, Rational};
use crate::tensor::PolyMap;

/// Cap on `n^2 * n^(k(d-1))` ordered leg assignments per diagram tensor.
pub const DEFAULT_DIAGRAM_BUDGET: u64 = 1_000_000;

const MAX_CAYLEY_HAMILTON_DIM: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JacobianError {
    #[error("diagram contraction passed {needed} steps, over the budget of {budget}")]
    BudgetExceeded { needed: u64, budget: u64 },
    #[error("chain/loop/trace length must be at least 1")]
    ZeroLength,
    #[error("matrix of dimension {0} is too large for the Newton-identity check")]
    MatrixTooLarge(usize),
    #[error("diagram contraction disagrees with polarization of M(x)^{0}")]
    PolarizationMismatch(usize),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// `(i, j, sorted legs) -> value` for chains; zero entries are absent.
pub type ChainTensor = BTreeMap<(usize, usize, Vec<usize>), Rational>;
/// `sorted legs -> value` for loops.
pub type LoopTensor = BTreeMap<Vec<usize>, Rational>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JacobianVerdict {
    pub unit_jacobian: bool,
    /// Least `k <= n` with `M(x)^k = 0`.
    pub nilpotency_order: Option<usize>,
    /// `tr M(x)^k = 0` for `k = 1..=n`.
    pub traces_vanish: bool,
}

impl JacobianVerdict {
    /// The three criteria agree, as they must for homogeneous `H`.
    pub fn is_consistent(&self) -> bool {
        self.unit_jacobian == self.nilpotency_order.is_some() && self.unit_jacobian == self.traces_vanish
    }
}

pub fn analyze(map: &PolyMap) -> Result<JacobianVerdict, JacobianError> {
    Ok(JacobianVerdict {
        unit_jacobian: is_unit_jacobian(map)?,
        nilpotency_order: nilpotency_order(map),
        traces_vanish: trace_powers(map, map.n())?.iter().all(Poly::is_zero),
    })
}

pub fn is_unit_jacobian(map: &PolyMap) -> Result<bool, JacobianError> {
    Ok(map.jacobian_det()? == Poly::one(map.n()))
}

pub fn nilpotency_order(map: &PolyMap) -> Option<usize> {
    let m = map.jacobian_matrix();
    let mut power = m.clone();
    for k in 1..=map.n() {
        if power.is_zero() {
            return Some(k);
        }
        power = power.mul(&m).expect("square matrices of one shape");
    }
    None
}

/// `tr M(x)^k` for `k = 1..=k_max`.
pub fn trace_powers(map: &PolyMap, k_max: usize) -> Result<Vec<Poly>, JacobianError> {
    if k_max == 0 {
        return Err(JacobianError::ZeroLength);
    }
    let m = map.jacobian_matrix();
    let mut power = m.clone();
    let mut out = Vec::with_capacity(k_max);
    for _ in 0..k_max {
        out.push(power.trace());
        power = power.mul(&m)?;
    }
    Ok(out)
}

type ChainState = HashMap<(usize, usize, Vec<usize>), Rational>;

/// Unsymmetrized chain values keyed by `(i, j, ordered legs)`: `k` vertices
/// in a row, the first emitting `i`, the last receiving `j`, each carrying
/// `d - 1` external legs. `budget` caps the number of partial-chain
/// extensions performed.
fn contract_chain(
    map: &PolyMap,
    k: usize,
    budget: u64,
) -> Result<ChainState, JacobianError> {
    if k == 0 {
        return Err(JacobianError::ZeroLength);
    }
    let mut needed = 0u64;
    let rows: Vec<Vec<(Vec<usize>, Rational)>> = (0..map.n()).map(|a| map.tensor().ordered_entries(a)).collect();
    let mut state: ChainState =
        (0..map.n()).map(|i| ((i, i, Vec::new()), Rational::one())).collect();
    for _ in 0..k {
        let mut next = ChainState::new();
        for ((i, a, legs), val) in &state {
            needed = needed.saturating_add(rows[*a].len() as u64);
            if needed > budget {
                return Err(JacobianError::BudgetExceeded { needed, budget });
            }
            for (js, w) in &rows[*a] {
                // lower slot 0 continues the chain, the rest are legs
                let mut new_legs = legs.clone();
                new_legs.extend_from_slice(&js[1..]);
                let slot = next.entry((*i, js[0], new_legs)).or_insert_with(Rational::zero);
                *slot += val * w;
            }
        }
        next.retain(|_, v| !v.is_zero());
        state = next;
    }
    Ok(state)
}

fn leg_counts(sorted: &[usize]) -> Vec<u32> {
    let mut counts: Vec<u32> = Vec::new();
    for (idx, v) in sorted.iter().enumerate() {
        if idx > 0 && sorted[idx - 1] == *v {
            *counts.last_mut().expect("nonempty") += 1;
        } else {
            counts.push(1);
        }
    }
    counts
}

/// Averages over orderings of the legs: the total over all orderings of a
/// multiset divided by the number of such orderings.
fn symmetrize<K: Ord + Clone>(raw: impl IntoIterator<Item = (K, Vec<usize>, Rational)>) -> BTreeMap<(K, Vec<usize>), Rational> {
    let mut out: BTreeMap<(K, Vec<usize>), Rational> = BTreeMap::new();
    for (key, mut legs, v) in raw {
        legs.sort_unstable();
        *out.entry((key, legs)).or_insert_with(Rational::zero) += v;
    }
    out.retain(|_, v| !v.is_zero());
    for ((_, legs), v) in out.iter_mut() {
        *v /= Rational::from_integer(BigInt::from(multinomial(&leg_counts(legs))));
    }
    out
}

/// The chain diagram with `k` vertices, symmetrized over its `k(d-1)`
/// legs. Cross-checked against [`chain_tensor_by_polarization`].
pub fn symmetrized_chain_tensor(map: &PolyMap, k: usize) -> Result<ChainTensor, JacobianError> {
    symmetrized_chain_tensor_with_budget(map, k, DEFAULT_DIAGRAM_BUDGET)
}

pub fn symmetrized_chain_tensor_with_budget(map: &PolyMap, k: usize, budget: u64) -> Result<ChainTensor, JacobianError> {
    let raw = contract_chain(map, k, budget)?.into_iter().map(|((i, j, legs), v)| ((i, j), legs, v));
    let sym: ChainTensor = symmetrize(raw).into_iter().map(|(((i, j), legs), v)| ((i, j, legs), v)).collect();
    if sym != chain_tensor_by_polarization(map, k)? {
        return Err(JacobianError::PolarizationMismatch(k));
    }
    Ok(sym)
}

/// The loop diagram with `k` vertices, symmetrized over its legs.
/// Cross-checked against [`loop_tensor_by_polarization`].
pub fn symmetrized_loop_tensor(map: &PolyMap, k: usize) -> Result<LoopTensor, JacobianError> {
    let raw = contract_chain(map, k, DEFAULT_DIAGRAM_BUDGET)?
        .into_iter()
        .filter(|((i, j, _), _)| i == j)
        .map(|((_, _, legs), v)| ((), legs, v));
    let sym: LoopTensor = symmetrize(raw).into_iter().map(|(((), legs), v)| (legs, v)).collect();
    if sym != loop_tensor_by_polarization(map, k)? {
        return Err(JacobianError::PolarizationMismatch(k));
    }
    Ok(sym)
}

/// Symmetric tensor of a homogeneous polynomial of degree `k(d-1)`:
/// `coeff(x^alpha) * (d-1)!^k / multinomial(alpha)`.
fn polarize(p: &Poly, k: usize, d: usize) -> BTreeMap<Vec<usize>, Rational> {
    let scale = Rational::from_integer(BigInt::from(factorial((d - 1) as u64).pow(k as u32)));
    p.terms()
        .map(|(m, c)| {
            let legs = m.to_indices();
            let orderings = Rational::from_integer(BigInt::from(multinomial(&leg_counts(&legs))));
            (legs, c * &scale / orderings)
        })
        .collect()
}

pub fn chain_tensor_by_polarization(map: &PolyMap, k: usize) -> Result<ChainTensor, JacobianError> {
    if k == 0 {
        return Err(JacobianError::ZeroLength);
    }
    let power: PolyMatrix = map.jacobian_matrix().pow(k as u32)?;
    let mut out = ChainTensor::new();
    for i in 0..map.n() {
        for j in 0..map.n() {
            for (legs, v) in polarize(power.get(i, j), k, map.d()) {
                out.insert((i, j, legs), v);
            }
        }
    }
    Ok(out)
}

pub fn loop_tensor_by_polarization(map: &PolyMap, k: usize) -> Result<LoopTensor, JacobianError> {
    if k == 0 {
        return Err(JacobianError::ZeroLength);
    }
    let trace = map.jacobian_matrix().pow(k as u32)?.trace();
    Ok(polarize(&trace, k, map.d()))
}

/// Elementary symmetric functions `e_0..e_n` from power sums `p_1..p_n`
/// by Newton's identities `k e_k = sum_{i=1..k} (-1)^{i-1} e_{k-i} p_i`.
pub fn elementary_from_power_sums(power_sums: &[Rational]) -> Vec<Rational> {
    let mut e = vec![Rational::one()];
    for k in 1..=power_sums.len() {
        let mut acc = Rational::zero();
        for i in 1..=k {
            let t = &e[k - i] * &power_sums[i - 1];
            if i % 2 == 1 {
                acc += t;
            } else {
                acc -= t;
            }
        }
        e.push(acc / Rational::from_integer(BigInt::from(k)));
    }
    e
}

/// Characteristic coefficients from traces via Newton, then evaluates
/// `sum_k (-1)^k e_k m^{n-k}` and reports whether it vanishes.
pub fn newton_cayley_hamilton_check(m: &RatMatrix) -> Result<bool, JacobianError> {
    let n = m.dim();
    if n > MAX_CAYLEY_HAMILTON_DIM {
        return Err(JacobianError::MatrixTooLarge(n));
    }
    // powers[k] = m^k
    let mut powers = vec![RatMatrix::identity(n)];
    for k in 1..=n {
        powers.push(powers[k - 1].mul(m));
    }
    let p: Vec<Rational> = powers[1..].iter().map(RatMatrix::trace).collect();
    let e = elementary_from_power_sums(&p);
    let mut acc = RatMatrix::zero(n);
    for (k, ek) in e.iter().enumerate() {
        let c = if k % 2 == 0 { ek.clone() } else { -ek.clone() };
        acc = acc.add(&powers[n - k].scale(&c));
    }
    Ok(acc.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, rat_int};
    use crate::tensor::{lookup, SymTensor};

    #[test]
    fn unit_jacobian_examples() {
        assert!(is_unit_jacobian(&lookup("triangular-3-2").unwrap()).unwrap());
        assert!(!is_unit_jacobian(&lookup("univar-2").unwrap()).unwrap());
        assert!(is_unit_jacobian(&lookup("zero-2-3").unwrap()).unwrap());
    }

    #[test]
    fn nilpotency_examples() {
        assert_eq!(nilpotency_order(&lookup("triangular-2-3").unwrap()), Some(2));
        assert_eq!(nilpotency_order(&lookup("triangular-3-2").unwrap()), Some(3));
        assert_eq!(nilpotency_order(&lookup("univar-2").unwrap()), None);
        assert_eq!(nilpotency_order(&lookup("zero-2-3").unwrap()), Some(1));
    }

    #[test]
    fn trace_examples() {
        let tri = trace_powers(&lookup("triangular-2-3").unwrap(), 2).unwrap();
        assert!(tri.iter().all(Poly::is_zero));
        let uni = trace_powers(&lookup("univar-2").unwrap(), 2).unwrap();
        assert_eq!(uni, vec![Poly::var(1, 0), Poly::var(1, 0).pow(2)]);
        assert!(trace_powers(&lookup("zero-1-2").unwrap(), 3).unwrap().iter().all(Poly::is_zero));
        assert_eq!(trace_powers(&lookup("univar-2").unwrap(), 0), Err(JacobianError::ZeroLength));
    }

    #[test]
    fn chain_examples() {
        assert!(symmetrized_chain_tensor(&lookup("triangular-2-3").unwrap(), 2).unwrap().is_empty());

        let uni = symmetrized_chain_tensor(&lookup("univar-2").unwrap(), 2).unwrap();
        assert_eq!(uni.get(&(0, 0, vec![0, 0])), Some(&rat_int(1)));
        assert_eq!(uni.len(), 1);
    }

    #[test]
    fn single_vertex_chain_is_w() {
        for name in ["random-3-2", "random-2-3", "nilsq-3-3"] {
            let m = lookup(name).unwrap();
            let chain = symmetrized_chain_tensor(&m, 1).unwrap();
            let mut expected = ChainTensor::new();
            for ((i, key), v) in m.tensor().entries() {
                // each (j, legs) split of the sorted key, once per distinct j
                let mut seen = Vec::new();
                for pos in 0..key.len() {
                    let j = key[pos];
                    if seen.contains(&j) {
                        continue;
                    }
                    seen.push(j);
                    let mut legs = key.clone();
                    legs.remove(pos);
                    expected.insert((*i, j, legs), v.clone());
                }
            }
            assert_eq!(chain, expected, "{name}");
        }
    }

    #[test]
    fn loop_examples() {
        assert!(symmetrized_loop_tensor(&lookup("triangular-2-3").unwrap(), 1).unwrap().is_empty());
        let uni = symmetrized_loop_tensor(&lookup("univar-2").unwrap(), 1).unwrap();
        assert_eq!(uni, LoopTensor::from([(vec![0], rat_int(1))]));
        for k in 1..4 {
            assert!(symmetrized_loop_tensor(&lookup("zero-2-3").unwrap(), k).unwrap().is_empty());
        }
    }

    #[test]
    fn diagram_budget() {
        let m = lookup("random-3-2").unwrap();
        assert!(matches!(
            symmetrized_chain_tensor_with_budget(&m, 3, 100),
            Err(JacobianError::BudgetExceeded { budget: 100, .. })
        ));
    }

    #[test]
    fn newton_examples() {
        let m = RatMatrix::from_rows(vec![vec![rat(1, 2), rat(3, 1)], vec![rat(-2, 3), rat(5, 7)]]).unwrap();
        assert!(newton_cayley_hamilton_check(&m).unwrap());

        let nil = RatMatrix::from_rows(vec![vec![rat_int(0), rat_int(1)], vec![rat_int(0), rat_int(0)]]).unwrap();
        assert!(newton_cayley_hamilton_check(&nil).unwrap());
        let p = [nil.trace(), nil.mul(&nil).trace()];
        assert_eq!(elementary_from_power_sums(&p), vec![rat_int(1), rat_int(0), rat_int(0)]);

        assert_eq!(newton_cayley_hamilton_check(&RatMatrix::identity(7)), Err(JacobianError::MatrixTooLarge(7)));
    }

    #[test]
    fn newton_gives_trace_and_determinant() {
        // [[2,1],[1,3]]: e1 = 5, e2 = 5
        let m = RatMatrix::from_rows(vec![vec![rat_int(2), rat_int(1)], vec![rat_int(1), rat_int(3)]]).unwrap();
        let p = [m.trace(), m.mul(&m).trace()];
        assert_eq!(elementary_from_power_sums(&p), vec![rat_int(1), rat_int(5), rat_int(5)]);
    }

    #[test]
    fn verdicts_on_small_maps() {
        let v = analyze(&lookup("triangular-3-2").unwrap()).unwrap();
        assert_eq!(v, JacobianVerdict { unit_jacobian: true, nilpotency_order: Some(3), traces_vanish: true });
        let v = analyze(&lookup("univar-2").unwrap()).unwrap();
        assert_eq!(v, JacobianVerdict { unit_jacobian: false, nilpotency_order: None, traces_vanish: false });
        assert!(v.is_consistent());
        let dense = PolyMap::new(SymTensor::random_dense(2, 2, 3, 2).unwrap(), None);
        assert!(analyze(&dense).unwrap().is_consistent());
    }
}
