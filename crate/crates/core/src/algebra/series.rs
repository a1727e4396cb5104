use num_traits::{One, Zero};

use super::{rat_int, AlgebraError, Monomial, Poly, Rational};

/// Multivariate formal power series truncated at total degree `cap`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Series {
    body: Poly,
    cap: u32,
}

impl Series {
    /// Truncates `body` to `cap`.
    pub fn new(body: Poly, cap: u32) -> Self {
        Series { body: body.truncate(cap), cap }
    }

    pub fn zero(nvars: usize, cap: u32) -> Self {
        Series { body: Poly::zero(nvars), cap }
    }

    pub fn one(nvars: usize, cap: u32) -> Self {
        Series { body: Poly::one(nvars), cap }
    }

    pub fn var(nvars: usize, k: usize, cap: u32) -> Self {
        Series::new(Poly::var(nvars, k), cap)
    }

    /// The identity vector `(y_1, ..., y_n)`.
    pub fn identity(nvars: usize, cap: u32) -> Vec<Series> {
        (0..nvars).map(|k| Series::var(nvars, k, cap)).collect()
    }

    pub fn body(&self) -> &Poly {
        &self.body
    }

    pub fn into_body(self) -> Poly {
        self.body
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn nvars(&self) -> usize {
        self.body.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.body.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.body == Poly::one(self.nvars())
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.body.coeff(m)
    }

    pub fn component(&self, k: u32) -> Poly {
        self.body.homogeneous_component(k)
    }

    pub fn with_cap(&self, cap: u32) -> Series {
        Series::new(self.body.clone(), cap.min(self.cap))
    }

    /// Equality of the retained coefficients up to degree `upto`.
    pub fn agrees_to(&self, other: &Series, upto: u32) -> bool {
        self.body.truncate(upto) == other.body.truncate(upto)
    }

    fn check(&self, other: &Series) -> Result<(), AlgebraError> {
        if self.cap != other.cap {
            return Err(AlgebraError::CapMismatch { expected: self.cap, found: other.cap });
        }
        if self.nvars() != other.nvars() {
            return Err(AlgebraError::DimensionMismatch { expected: self.nvars(), found: other.nvars() });
        }
        Ok(())
    }

    pub fn add(&self, other: &Series) -> Result<Series, AlgebraError> {
        self.check(other)?;
        Ok(Series { body: self.body.checked_add(&other.body)?, cap: self.cap })
    }

    pub fn sub(&self, other: &Series) -> Result<Series, AlgebraError> {
        self.check(other)?;
        Ok(Series { body: self.body.checked_sub(&other.body)?, cap: self.cap })
    }

    pub fn mul(&self, other: &Series) -> Result<Series, AlgebraError> {
        self.check(other)?;
        Ok(Series { body: self.body.mul_truncated(&other.body, self.cap)?, cap: self.cap })
    }

    pub fn scale(&self, c: &Rational) -> Series {
        Series { body: self.body.scale(c), cap: self.cap }
    }

    /// `exp(self)` for a series with zero constant term.
    ///
    /// Uses the degree operator `E = sum_k y_k d/dy_k`: `E(exp f) = E(f) exp f`
    /// gives `e_k = (1/k) sum_{m=1..k} m f_m e_{k-m}` on homogeneous parts.
    pub fn exp(&self) -> Result<Series, AlgebraError> {
        if !self.body.constant_term().is_zero() {
            return Err(AlgebraError::ConstantTerm { expected: 0 });
        }
        let n = self.nvars();
        let f: Vec<Poly> = (0..=self.cap).map(|k| self.component(k)).collect();
        let mut e: Vec<Poly> = vec![Poly::one(n)];
        for k in 1..=self.cap {
            let mut acc = Poly::zero(n);
            for m in 1..=k {
                if f[m as usize].is_zero() {
                    continue;
                }
                let t = f[m as usize].checked_mul(&e[(k - m) as usize])?.scale(&rat_int(m as i64));
                acc = acc.checked_add(&t)?;
            }
            e.push(acc.scale(&Rational::new(1.into(), (k as i64).into())));
        }
        let mut body = Poly::zero(n);
        for part in e {
            body = body.checked_add(&part)?;
        }
        Ok(Series { body, cap: self.cap })
    }

    /// `log(self)` for a series with constant term 1.
    ///
    /// From `E(g) = g E(log g)`: `l_k = g_k - (1/k) sum_{m=1..k-1} m l_m g_{k-m}`.
    pub fn log(&self) -> Result<Series, AlgebraError> {
        if !self.body.constant_term().is_one() {
            return Err(AlgebraError::ConstantTerm { expected: 1 });
        }
        let n = self.nvars();
        let g: Vec<Poly> = (0..=self.cap).map(|k| self.component(k)).collect();
        let mut l: Vec<Poly> = vec![Poly::zero(n)];
        for k in 1..=self.cap {
            let mut acc = Poly::zero(n);
            for m in 1..k {
                if l[m as usize].is_zero() {
                    continue;
                }
                let t = l[m as usize].checked_mul(&g[(k - m) as usize])?.scale(&rat_int(m as i64));
                acc = acc.checked_add(&t)?;
            }
            let lk = g[k as usize].checked_sub(&acc.scale(&Rational::new(1.into(), (k as i64).into())))?;
            l.push(lk);
        }
        let mut body = Poly::zero(n);
        for part in l {
            body = body.checked_add(&part)?;
        }
        Ok(Series { body, cap: self.cap })
    }
}

/// `f(g_1, ..., g_n)` truncated at the common cap of the `g_i`.
pub fn series_compose(f: &Poly, g: &[Series]) -> Result<Series, AlgebraError> {
    if g.len() != f.nvars() {
        return Err(AlgebraError::DimensionMismatch { expected: f.nvars(), found: g.len() });
    }
    let Some(first) = g.first() else {
        // f has no variables: it is a constant.
        return Ok(Series::new(f.clone(), 0));
    };
    let (cap, target) = (first.cap, first.nvars());
    for gi in g {
        if gi.cap != cap {
            return Err(AlgebraError::CapMismatch { expected: cap, found: gi.cap });
        }
        if gi.nvars() != target {
            return Err(AlgebraError::DimensionMismatch { expected: target, found: gi.nvars() });
        }
    }

    // powers[j][e] = g_j^e truncated, built lazily
    let max_exp: Vec<u32> = (0..f.nvars())
        .map(|j| f.terms().map(|(m, _)| m.exponents()[j]).max().unwrap_or(0))
        .collect();
    let mut powers: Vec<Vec<Poly>> = Vec::with_capacity(g.len());
    for (j, gj) in g.iter().enumerate() {
        let mut row = vec![Poly::one(target)];
        for e in 1..=max_exp[j] as usize {
            let next = row[e - 1].mul_truncated(&gj.body, cap)?;
            row.push(next);
        }
        powers.push(row);
    }

    let mut out = Poly::zero(target);
    for (m, c) in f.terms() {
        let mut t = Poly::constant(target, c.clone());
        for (j, &e) in m.exponents().iter().enumerate() {
            if e > 0 {
                t = t.mul_truncated(&powers[j][e as usize], cap)?;
            }
            if t.is_zero() {
                break;
            }
        }
        for (mm, cc) in t.terms() {
            out.add_term(mm.clone(), cc.clone());
        }
    }
    Ok(Series { body: out, cap })
}

#[cfg(test)]
mod tests {
    use super::super::rat;
    use super::*;

    fn y(cap: u32) -> Series {
        Series::var(1, 0, cap)
    }

    fn univariate(coeffs: &[Rational]) -> Poly {
        Poly::from_terms(
            1,
            coeffs.iter().enumerate().map(|(k, c)| (Monomial::new(vec![k as u32]), c.clone())),
        )
    }

    #[test]
    fn compose_square_of_binomial() {
        let f = Poly::var(1, 0).pow(2);
        let g = Series::new(univariate(&[rat(0, 1), rat(1, 1), rat(1, 1)]), 4);
        let got = series_compose(&f, &[g]).unwrap();
        assert_eq!(got.body(), &univariate(&[rat(0, 1), rat(0, 1), rat(1, 1), rat(2, 1), rat(1, 1)]));
    }

    #[test]
    fn compose_identity_substitution() {
        let f = &Poly::var(2, 0) * &Poly::var(2, 1);
        let got = series_compose(&f, &Series::identity(2, 2)).unwrap();
        assert_eq!(got.body(), &f);
    }

    #[test]
    fn compose_truncates() {
        let f = Poly::var(1, 0).pow(3);
        let g = Series::new(univariate(&[rat(0, 1), rat(1, 1), rat(1, 1)]), 3);
        let got = series_compose(&f, &[g]).unwrap();
        assert_eq!(got.body(), &Poly::var(1, 0).pow(3));
    }

    #[test]
    fn compose_rejects_mixed_caps() {
        let f = &Poly::var(2, 0) * &Poly::var(2, 1);
        let g = vec![Series::var(2, 0, 3), Series::var(2, 1, 4)];
        assert_eq!(series_compose(&f, &g), Err(AlgebraError::CapMismatch { expected: 3, found: 4 }));
        assert!(series_compose(&f, &g[..1]).is_err());
    }

    #[test]
    fn exp_of_y_is_factorial_series() {
        let e = y(5).exp().unwrap();
        let want = univariate(&[rat(1, 1), rat(1, 1), rat(1, 2), rat(1, 6), rat(1, 24), rat(1, 120)]);
        assert_eq!(e.body(), &want);
    }

    #[test]
    fn log_of_one_plus_y() {
        let g = Series::new(univariate(&[rat(1, 1), rat(1, 1)]), 4);
        let want = univariate(&[rat(0, 1), rat(1, 1), rat(-1, 2), rat(1, 3), rat(-1, 4)]);
        assert_eq!(g.log().unwrap().body(), &want);
    }

    #[test]
    fn exp_and_log_need_the_right_constant() {
        assert!(Series::one(1, 3).exp().is_err());
        assert!(y(3).log().is_err());
    }

    #[test]
    fn exp_log_round_trip_bivariate() {
        let f = Series::new(
            &(&Poly::var(2, 0) + &Poly::var(2, 1).pow(2).scale(&rat(3, 2))) + &(&Poly::var(2, 0) * &Poly::var(2, 1)),
            6,
        );
        assert_eq!(f.exp().unwrap().log().unwrap(), f);
    }
}
