//! Symmetric coefficient tensors and the polynomial maps `F(x) = x - H(x)`
//! they define.
//!
//! A [`SymTensor`] stores `w[i; j1..jd]` once per orbit of the lower indices,
//! keyed by the sorted tuple. Indices are 0-based in the library API and
//! 1-based in the text format (see [`format`]).

mod catalog;
pub mod format;

pub use catalog::{catalog, lookup, CatalogError, CATALOG_NAMES};
pub use format::{parse_map, serialize_map, MapFileError, MapFileErrorKind};

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::algebra::{
    factorial, multinomial, rat_int, uint_to_rat, AlgebraError, Monomial, Poly, PolyMatrix, Rational,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TensorError {
    #[error("index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("expected {expected} lower indices, found {found}")]
    Arity { expected: usize, found: usize },
    #[error("dimension must be at least 1")]
    InvalidDimension,
    #[error("degree must be at least 2, found {0}")]
    InvalidDegree(usize),
}

/// `w[i; j1..jd]`, completely symmetric in the lower indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymTensor {
    n: usize,
    d: usize,
    entries: BTreeMap<(usize, Vec<usize>), Rational>,
}

impl SymTensor {
    pub fn new(n: usize, d: usize) -> Result<Self, TensorError> {
        if n == 0 {
            return Err(TensorError::InvalidDimension);
        }
        if d < 2 {
            return Err(TensorError::InvalidDegree(d));
        }
        Ok(SymTensor { n, d, entries: BTreeMap::new() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    fn validate(&self, i: usize, lower: &[usize]) -> Result<(), TensorError> {
        if lower.len() != self.d {
            return Err(TensorError::Arity { expected: self.d, found: lower.len() });
        }
        for &ix in std::iter::once(&i).chain(lower) {
            if ix >= self.n {
                return Err(TensorError::IndexOutOfRange { index: ix + 1, n: self.n });
            }
        }
        Ok(())
    }

    /// Adds `value` to the orbit of `(i; lower)`; lower indices may come in
    /// any order.
    pub fn add(&mut self, i: usize, lower: &[usize], value: Rational) -> Result<(), TensorError> {
        self.validate(i, lower)?;
        let mut key = lower.to_vec();
        key.sort_unstable();
        let key = (i, key);
        let sum = self.entries.get(&key).cloned().unwrap_or_else(Rational::zero) + value;
        if sum.is_zero() {
            self.entries.remove(&key);
        } else {
            self.entries.insert(key, sum);
        }
        Ok(())
    }

    pub fn get(&self, i: usize, lower: &[usize]) -> Rational {
        let mut key = lower.to_vec();
        key.sort_unstable();
        self.entries.get(&(i, key)).cloned().unwrap_or_else(Rational::zero)
    }

    /// Canonical entries `((i, sorted lower), value)`.
    pub fn entries(&self) -> impl Iterator<Item = (&(usize, Vec<usize>), &Rational)> {
        self.entries.iter()
    }

    /// Nonzero entries with upper index `i`, one per ordered lower tuple.
    pub fn ordered_entries(&self, i: usize) -> Vec<(Vec<usize>, Rational)> {
        let mut out = Vec::new();
        let lo = (i, Vec::new());
        let hi = (i + 1, Vec::new());
        for ((_, key), v) in self.entries.range(lo..hi) {
            let mut perm = key.clone();
            loop {
                out.push((perm.clone(), v.clone()));
                if !next_permutation(&mut perm) {
                    break;
                }
            }
        }
        out
    }

    /// Dense tensor with every orbit drawn uniformly from the nonzero
    /// integers in `[-bound, bound]`.
    pub fn random_dense(n: usize, d: usize, seed: u64, bound: i64) -> Result<Self, TensorError> {
        let mut t = SymTensor::new(n, d)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for i in 0..n {
            for key in sorted_tuples(n, d) {
                let mut v = 0;
                while v == 0 {
                    v = rng.gen_range(-bound..=bound);
                }
                t.add(i, &key, rat_int(v))?;
            }
        }
        Ok(t)
    }
}

/// Number of ordered tuples whose sorted form is `sorted`.
pub fn orbit_size(sorted: &[usize]) -> BigUint {
    let mut counts = Vec::new();
    let mut iter = sorted.iter().peekable();
    while let Some(&x) = iter.next() {
        let mut c = 1u32;
        while iter.peek() == Some(&&x) {
            iter.next();
            c += 1;
        }
        counts.push(c);
    }
    multinomial(&counts)
}

/// All nondecreasing tuples of length `d` over `0..n`.
pub fn sorted_tuples(n: usize, d: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0usize; d];
    if d == 0 {
        return vec![Vec::new()];
    }
    loop {
        out.push(cur.clone());
        // advance to the next nondecreasing tuple
        let mut pos = d;
        while pos > 0 && cur[pos - 1] == n - 1 {
            pos -= 1;
        }
        if pos == 0 {
            return out;
        }
        cur[pos - 1] += 1;
        let v = cur[pos - 1];
        for slot in cur.iter_mut().skip(pos) {
            *slot = v;
        }
    }
}

/// Lexicographic successor; returns false at the last permutation.
pub(crate) fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// The polynomial map `F_i(x) = x_i - H_i(x)` with
/// `H_i(x) = (1/d!) sum over ordered tuples of w[i; j1..jd] x_j1 ... x_jd`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMap {
    tensor: SymTensor,
    name: Option<String>,
}

impl PolyMap {
    pub fn new(tensor: SymTensor, name: Option<String>) -> Self {
        PolyMap { tensor, name }
    }

    pub fn named(tensor: SymTensor, name: &str) -> Self {
        PolyMap { tensor, name: Some(name.to_string()) }
    }

    pub fn tensor(&self) -> &SymTensor {
        &self.tensor
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn n(&self) -> usize {
        self.tensor.n
    }

    pub fn d(&self) -> usize {
        self.tensor.d
    }

    /// `d^(n-1)`, saturating.
    pub fn gabber_bound(&self) -> u32 {
        (self.d() as u32).saturating_pow(self.n() as u32 - 1)
    }

    pub fn build_h(&self) -> Vec<Poly> {
        let n = self.n();
        let d_fact = uint_to_rat(factorial(self.d() as u64));
        let mut h = vec![Poly::zero(n); n];
        for ((i, key), v) in self.tensor.entries() {
            let weight = uint_to_rat(orbit_size(key)) / &d_fact;
            h[*i].add_term(Monomial::from_indices(n, key), v * weight);
        }
        h
    }

    /// Components of `F(x) = x - H(x)`.
    pub fn build_f(&self) -> Vec<Poly> {
        let n = self.n();
        self.build_h().iter().enumerate().map(|(i, h)| &Poly::var(n, i) - h).collect()
    }

    /// `M(x)_{ij} = dH_i/dx_j`.
    pub fn jacobian_matrix(&self) -> PolyMatrix {
        let h = self.build_h();
        PolyMatrix::from_fn(self.n(), self.n(), |i, j| h[i].derivative(j))
    }

    /// `JF(x) = det(I - M(x))`.
    pub fn jacobian_det(&self) -> Result<Poly, AlgebraError> {
        let n = self.n();
        PolyMatrix::identity(n, n).checked_sub(&self.jacobian_matrix())?.det()
    }

    /// `max_i sum over ordered tuples |w[i; j1..jd]|`.
    pub fn norm_w(&self) -> Rational {
        let mut per_row = vec![Rational::zero(); self.n()];
        for ((i, key), v) in self.tensor.entries() {
            per_row[*i] += v.abs() * uint_to_rat(orbit_size(key));
        }
        per_row.into_iter().max().unwrap_or_else(Rational::zero)
    }
}
