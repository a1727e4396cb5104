use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{fmt_rational, AlgebraError, Rational};

/// Exponent vector; entry `k` is the power of variable `k` (0-based).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, k: usize) -> Self {
        let mut e = vec![0; nvars];
        e[k] = 1;
        Monomial(e)
    }

    /// Monomial `x_{j1} ... x_{jm}` from a list of (possibly repeated) indices.
    pub fn from_indices(nvars: usize, indices: &[usize]) -> Self {
        let mut e = vec![0; nvars];
        for &j in indices {
            e[j] += 1;
        }
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.0.len(), other.0.len());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Sorted list of variable indices, each repeated by its exponent.
    pub fn to_indices(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(k, &e)| std::iter::repeat_n(k, e as usize))
            .collect()
    }
}

/// Sparse multivariate polynomial over the rationals.
///
/// Terms are kept in a `BTreeMap` so iteration (and therefore printing and
/// float summation) is deterministic. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Poly::zero(nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Poly::constant(nvars, Rational::one())
    }

    pub fn var(nvars: usize, k: usize) -> Self {
        Poly::monomial(Monomial::var(nvars, k), Rational::one())
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let mut p = Poly::zero(m.nvars());
        p.add_term(m, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(nvars: usize, terms: I) -> Self {
        let mut p = Poly::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars, "monomial has wrong number of variables");
            p.add_term(m, c);
        }
        p
    }

    /// Accumulates `c * m`, pruning the entry if it cancels.
    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&Monomial::one(self.nvars))
    }

    /// Highest total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).min()
    }

    /// True when every term has total degree `k`; the zero polynomial is
    /// homogeneous of every degree.
    pub fn is_homogeneous_of(&self, k: u32) -> bool {
        self.terms.keys().all(|m| m.degree() == k)
    }

    pub fn homogeneous_component(&self, k: u32) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == k)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn truncate(&self, cap: u32) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= cap)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    fn check_dims(&self, other: &Poly) -> Result<(), AlgebraError> {
        if self.nvars != other.nvars {
            return Err(AlgebraError::DimensionMismatch { expected: self.nvars, found: other.nvars });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly, AlgebraError> {
        self.check_dims(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly, AlgebraError> {
        self.check_dims(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly, AlgebraError> {
        self.check_dims(other)?;
        Ok(self.mul_impl(other, None))
    }

    /// Product keeping only terms of total degree `<= cap`.
    pub fn mul_truncated(&self, other: &Poly, cap: u32) -> Result<Poly, AlgebraError> {
        self.check_dims(other)?;
        Ok(self.mul_impl(other, Some(cap)))
    }

    fn mul_impl(&self, other: &Poly, cap: Option<u32>) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            let da = ma.degree();
            for (mb, cb) in &other.terms {
                if let Some(cap) = cap {
                    if da + mb.degree() > cap {
                        continue;
                    }
                }
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one(self.nvars);
        for _ in 0..k {
            acc = acc.mul_impl(self, None);
        }
        acc
    }

    /// Partial derivative with respect to variable `k`.
    pub fn derivative(&self, k: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.exponents()[k];
            if e == 0 {
                continue;
            }
            let mut exps = m.exponents().to_vec();
            exps[k] -= 1;
            out.add_term(Monomial::new(exps), c * Rational::from_integer(e.into()));
        }
        out
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, point: &[Rational]) -> Result<Rational, AlgebraError> {
        if point.len() != self.nvars {
            return Err(AlgebraError::DimensionMismatch { expected: self.nvars, found: point.len() });
        }
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                for _ in 0..e {
                    t *= x;
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Full (untruncated) substitution `self(g_1, ..., g_n)`.
    pub fn compose(&self, g: &[Poly]) -> Result<Poly, AlgebraError> {
        if g.len() != self.nvars {
            return Err(AlgebraError::DimensionMismatch { expected: self.nvars, found: g.len() });
        }
        let target = g.first().map(Poly::nvars).unwrap_or(0);
        for gi in g {
            if gi.nvars != target {
                return Err(AlgebraError::DimensionMismatch { expected: target, found: gi.nvars });
            }
        }
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(target, c.clone());
            for (gi, &e) in g.iter().zip(m.exponents()) {
                for _ in 0..e {
                    t = t.mul_impl(gi, None);
                }
            }
            out = out.checked_add(&t)?;
        }
        Ok(out)
    }

    /// Terms ordered by total degree, then with `y1` before `y2` etc.
    pub fn graded_terms(&self) -> Vec<(&Monomial, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(a, _), (b, _)| a.degree().cmp(&b.degree()).then_with(|| b.cmp(a)));
        v
    }

    /// Renders like `1/1*y1 + -1/2*y1^2*y2`; variables are 1-based.
    pub fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.graded_terms()
            .into_iter()
            .map(|(m, c)| {
                let mut s = fmt_rational(c);
                for (k, &e) in m.exponents().iter().enumerate() {
                    match e {
                        0 => {}
                        1 => s.push_str(&format!("*{var}{}", k + 1)),
                        _ => s.push_str(&format!("*{var}{}^{e}", k + 1)),
                    }
                }
                s
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("x"))
    }
}

// Operator forms panic on a dimension mismatch; use the `checked_*`
// methods where the operands come from user input.
impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.checked_add(rhs).expect("poly add")
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.checked_sub(rhs).expect("poly sub")
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.checked_mul(rhs).expect("poly mul")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::{rat, rat_int};
    use super::*;

    fn x(k: usize) -> Poly {
        Poly::var(2, k)
    }

    #[test]
    fn additive_inverse_cancels() {
        let a = x(0);
        assert!((&a + &(-&a)).is_zero());
    }

    #[test]
    fn exponents_add_under_mul() {
        let sq = &x(1) * &x(1);
        let cube = &sq * &x(1);
        assert_eq!(cube, Poly::monomial(Monomial::new(vec![0, 3]), rat_int(1)));
    }

    #[test]
    fn difference_of_squares() {
        let got = &(&x(0) + &x(1)) * &(&x(0) - &x(1));
        // coefficient convolution done by hand: x1^2 + x1x2 - x2x1 - x2^2
        let want = Poly::from_terms(
            2,
            [
                (Monomial::new(vec![2, 0]), rat_int(1)),
                (Monomial::new(vec![0, 2]), rat_int(-1)),
            ],
        );
        assert_eq!(got, want);
        assert!(got.is_homogeneous_of(2));
    }

    #[test]
    fn mismatched_dimensions_are_rejected() {
        let a = Poly::var(1, 0);
        let b = Poly::var(2, 0);
        assert_eq!(
            a.checked_add(&b),
            Err(AlgebraError::DimensionMismatch { expected: 1, found: 2 })
        );
        assert!(a.checked_mul(&b).is_err());
    }

    #[test]
    fn scale_by_zero_prunes() {
        let p = &x(0) + &x(1);
        assert!(p.scale(&rat_int(0)).is_zero());
        assert_eq!(p.scale(&rat(1, 2)).coeff(&Monomial::var(2, 1)), rat(1, 2));
    }

    #[test]
    fn derivative_of_cube() {
        let p = x(1).pow(3);
        assert_eq!(p.derivative(1), x(1).pow(2).scale(&rat_int(3)));
        assert!(p.derivative(0).is_zero());
    }

    #[test]
    fn render_is_graded() {
        let p = &(&x(1) + &x(0).pow(2).scale(&rat(-1, 2))) + &x(0);
        assert_eq!(p.render("y"), "1/1*y1 + 1/1*y2 + -1/2*y1^2");
    }
}
