use std::collections::HashMap;

use num_traits::Zero;

use super::{AlgebraError, Poly, Rational};

/// Largest dimension accepted by [`PolyMatrix::det`].
pub const DEFAULT_DET_GUARD: usize = 8;

/// Square matrix of polynomials sharing one ambient dimension, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    dim: usize,
    nvars: usize,
    entries: Vec<Poly>,
}

impl PolyMatrix {
    pub fn zero(dim: usize, nvars: usize) -> Self {
        PolyMatrix { dim, nvars, entries: vec![Poly::zero(nvars); dim * dim] }
    }

    pub fn identity(dim: usize, nvars: usize) -> Self {
        let mut m = PolyMatrix::zero(dim, nvars);
        for i in 0..dim {
            m.entries[i * dim + i] = Poly::one(nvars);
        }
        m
    }

    /// Builds from rows; every row must have `rows.len()` entries.
    pub fn from_rows(rows: Vec<Vec<Poly>>) -> Result<Self, AlgebraError> {
        let dim = rows.len();
        let nvars = rows.first().and_then(|r| r.first()).map(Poly::nvars).unwrap_or(0);
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(AlgebraError::ShapeMismatch { left: dim, right: row.len() });
            }
            for p in row {
                if p.nvars() != nvars {
                    return Err(AlgebraError::DimensionMismatch { expected: nvars, found: p.nvars() });
                }
                entries.push(p);
            }
        }
        Ok(PolyMatrix { dim, nvars, entries })
    }

    pub fn from_fn(dim: usize, nvars: usize, mut f: impl FnMut(usize, usize) -> Poly) -> Self {
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let p = f(i, j);
                assert_eq!(p.nvars(), nvars);
                entries.push(p);
            }
        }
        PolyMatrix { dim, nvars, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.dim + j]
    }

    pub fn entries(&self) -> &[Poly] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Poly::is_zero)
    }

    pub fn map(&self, f: impl Fn(&Poly) -> Poly) -> PolyMatrix {
        let entries: Vec<Poly> = self.entries.iter().map(f).collect();
        let nvars = entries.first().map(Poly::nvars).unwrap_or(self.nvars);
        PolyMatrix { dim: self.dim, nvars, entries }
    }

    pub fn checked_sub(&self, other: &PolyMatrix) -> Result<PolyMatrix, AlgebraError> {
        self.check(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.checked_sub(b))
            .collect::<Result<_, _>>()?;
        Ok(PolyMatrix { dim: self.dim, nvars: self.nvars, entries })
    }

    fn check(&self, other: &PolyMatrix) -> Result<(), AlgebraError> {
        if self.dim != other.dim {
            return Err(AlgebraError::ShapeMismatch { left: self.dim, right: other.dim });
        }
        if self.nvars != other.nvars {
            return Err(AlgebraError::DimensionMismatch { expected: self.nvars, found: other.nvars });
        }
        Ok(())
    }

    pub fn mul(&self, other: &PolyMatrix) -> Result<PolyMatrix, AlgebraError> {
        self.mul_impl(other, None)
    }

    /// Product with every entry truncated at total degree `cap`.
    pub fn mul_truncated(&self, other: &PolyMatrix, cap: u32) -> Result<PolyMatrix, AlgebraError> {
        self.mul_impl(other, Some(cap))
    }

    fn mul_impl(&self, other: &PolyMatrix, cap: Option<u32>) -> Result<PolyMatrix, AlgebraError> {
        self.check(other)?;
        let n = self.dim;
        let mut out = PolyMatrix::zero(n, self.nvars);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Poly::zero(self.nvars);
                for k in 0..n {
                    let (a, b) = (self.get(i, k), other.get(k, j));
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    let t = match cap {
                        Some(c) => a.mul_truncated(b, c)?,
                        None => a.checked_mul(b)?,
                    };
                    acc = acc.checked_add(&t)?;
                }
                out.entries[i * n + j] = acc;
            }
        }
        Ok(out)
    }

    /// Exact `k`-th power, `k >= 1`.
    pub fn pow(&self, k: u32) -> Result<PolyMatrix, AlgebraError> {
        if k == 0 {
            return Err(AlgebraError::ZeroPower);
        }
        let mut acc = self.clone();
        for _ in 1..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    pub fn trace(&self) -> Poly {
        let mut acc = Poly::zero(self.nvars);
        for i in 0..self.dim {
            acc = &acc + self.get(i, i);
        }
        acc
    }

    pub fn det(&self) -> Result<Poly, AlgebraError> {
        self.det_with_guard(DEFAULT_DET_GUARD)
    }

    /// Cofactor expansion along successive rows, memoized on the set of
    /// columns still available (at most `2^dim` distinct minors).
    pub fn det_with_guard(&self, guard: usize) -> Result<Poly, AlgebraError> {
        if self.dim > guard {
            return Err(AlgebraError::DeterminantGuard { dim: self.dim, guard });
        }
        let full: u32 = if self.dim == 0 { 0 } else { (1u32 << self.dim) - 1 };
        let mut memo = HashMap::new();
        Ok(self.minor(0, full, &mut memo))
    }

    fn minor(&self, row: usize, cols: u32, memo: &mut HashMap<u32, Poly>) -> Poly {
        if row == self.dim {
            return Poly::one(self.nvars);
        }
        if let Some(p) = memo.get(&cols) {
            return p.clone();
        }
        let mut acc = Poly::zero(self.nvars);
        let mut sign_positive = true;
        for c in 0..self.dim {
            if cols & (1 << c) == 0 {
                continue;
            }
            let entry = self.get(row, c);
            if !entry.is_zero() {
                let sub = self.minor(row + 1, cols & !(1 << c), memo);
                let t = entry * &sub;
                acc = if sign_positive { &acc + &t } else { &acc - &t };
            }
            sign_positive = !sign_positive;
        }
        memo.insert(cols, acc.clone());
        acc
    }
}

/// Dense square matrix of rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    dim: usize,
    entries: Vec<Rational>,
}

impl RatMatrix {
    pub fn zero(dim: usize) -> Self {
        RatMatrix { dim, entries: vec![Rational::zero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = RatMatrix::zero(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = Rational::from_integer(1.into());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, AlgebraError> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(AlgebraError::ShapeMismatch { left: dim, right: row.len() });
            }
            entries.extend(row);
        }
        Ok(RatMatrix { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.dim + j]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn trace(&self) -> Rational {
        (0..self.dim).map(|i| self.get(i, i).clone()).sum()
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = RatMatrix::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out.entries[i * n + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> RatMatrix {
        RatMatrix { dim: self.dim, entries: self.entries.iter().map(|e| e * c).collect() }
    }

    pub fn add(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.dim, other.dim);
        RatMatrix {
            dim: self.dim,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        }
    }

    /// The same matrix as constant polynomials in `nvars` variables.
    pub fn to_poly_matrix(&self, nvars: usize) -> PolyMatrix {
        PolyMatrix::from_fn(self.dim, nvars, |i, j| Poly::constant(nvars, self.get(i, j).clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::super::{rat_int, Monomial};
    use super::*;

    fn c(v: i64) -> Poly {
        Poly::constant(2, rat_int(v))
    }

    fn x2sq(k: i64) -> Poly {
        Poly::monomial(Monomial::new(vec![0, 2]), rat_int(k))
    }

    #[test]
    fn identity_det_is_one() {
        assert_eq!(PolyMatrix::identity(2, 2).det().unwrap(), Poly::one(2));
        assert_eq!(PolyMatrix::identity(0, 2).det().unwrap(), Poly::one(2));
    }

    #[test]
    fn triangular_det() {
        let m = PolyMatrix::from_rows(vec![vec![c(1), x2sq(-3)], vec![c(0), c(1)]]).unwrap();
        assert_eq!(m.det().unwrap(), Poly::one(2));
    }

    #[test]
    fn diagonal_det() {
        let one_minus_x1 = &c(1) - &Poly::var(2, 0);
        let m = PolyMatrix::from_rows(vec![vec![one_minus_x1.clone(), c(0)], vec![c(0), c(1)]]).unwrap();
        assert_eq!(m.det().unwrap(), one_minus_x1);
    }

    #[test]
    fn det_guard() {
        let m = PolyMatrix::identity(9, 1);
        assert_eq!(m.det(), Err(AlgebraError::DeterminantGuard { dim: 9, guard: 8 }));
        assert_eq!(m.det_with_guard(9).unwrap(), Poly::one(1));
    }

    #[test]
    fn dense_det_matches_leibniz() {
        // det [[1,2,3],[4,5,6],[7,8,10]] = -3
        let rows = vec![vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 10]];
        let m = PolyMatrix::from_rows(rows.into_iter().map(|r| r.into_iter().map(c).collect()).collect()).unwrap();
        assert_eq!(m.det().unwrap(), c(-3));
    }

    #[test]
    fn nilpotent_square_vanishes() {
        let m = PolyMatrix::from_rows(vec![vec![c(0), x2sq(3)], vec![c(0), c(0)]]).unwrap();
        assert!(m.pow(2).unwrap().is_zero());
        assert!(!m.pow(1).unwrap().is_zero());
    }

    #[test]
    fn powers_of_identity_and_first_power() {
        let id = PolyMatrix::identity(3, 2);
        assert_eq!(id.pow(5).unwrap(), id);
        let j = PolyMatrix::from_rows(vec![vec![c(0), c(1)], vec![c(0), c(0)]]).unwrap();
        assert_eq!(j.pow(1).unwrap(), j);
        assert_eq!(j.pow(0), Err(AlgebraError::ZeroPower));
    }
}
