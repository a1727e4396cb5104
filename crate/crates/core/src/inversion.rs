//! The formal inverse `G = F^{-1}` through the recursion `G = y + H(G)`,
//! together with the checks built on it.

use num_traits::Zero;
use thiserror::Error;

use crate::algebra::{
    binomial, factorial, series_compose, uint_to_rat, AlgebraError, Monomial, Poly, Rational, Series,
};
use crate::tensor::PolyMap;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InversionError {
    #[error("cap {cap} must exceed the degree bound {bound}")]
    CapTooSmall { cap: u32, bound: u32 },
    #[error("series cap {cap} is below the requested degree {degree}")]
    SeriesTooShort { cap: u32, degree: u32 },
    #[error("leaf index {index} out of range for n = {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("M(x)^2 is not identically zero")]
    NotSquareNilpotent,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Default truncation: room past `d^(n-1)` so a saturated bound is visible.
pub fn default_cap(map: &PolyMap) -> u32 {
    10u32.max(map.gabber_bound().saturating_add(map.d() as u32))
}

/// Iterates `G^{m+1} = y + trunc_cap(H(G^m))` from `G^0 = y` until it stops
/// changing. Each pass fixes at least one more degree, so at most `cap`
/// passes are needed.
pub fn fixed_point_inverse(map: &PolyMap, cap: u32) -> Result<Vec<Series>, InversionError> {
    let h = map.build_h();
    let y = Series::identity(map.n(), cap);
    let mut g = y.clone();
    for _ in 0..cap.max(1) {
        let next = y
            .iter()
            .zip(&h)
            .map(|(yi, hi)| yi.add(&series_compose(hi, &g)?))
            .collect::<Result<Vec<_>, _>>()?;
        if next == g {
            break;
        }
        g = next;
    }
    Ok(g)
}

/// Reversion of `y = x - a x^d` by Lagrange inversion:
/// `x = sum_k binom(dk, k) / ((d-1)k + 1) a^k y^{(d-1)k+1}`.
pub fn lagrange_oracle_1d(d: u32, a: &Rational, cap: u32) -> Series {
    let mut body = Poly::zero(1);
    let mut k = 0u32;
    let mut a_pow = Rational::from_integer(1.into());
    while (d - 1) * k < cap {
        let deg = (d - 1) * k + 1;
        let c = uint_to_rat(binomial((d * k) as u64, k as u64)) / Rational::from_integer(deg.into()) * &a_pow;
        body.add_term(Monomial::new(vec![deg]), c);
        a_pow *= a;
        k += 1;
    }
    Series::new(body, cap)
}

/// `F(G(y)) - y` truncated at `degree`.
pub fn inverse_residual(map: &PolyMap, g: &[Series], degree: u32) -> Result<Vec<Series>, InversionError> {
    if let Some(short) = g.iter().find(|s| s.cap() < degree) {
        return Err(InversionError::SeriesTooShort { cap: short.cap(), degree });
    }
    let g: Vec<Series> = g.iter().map(|s| s.with_cap(degree)).collect();
    let y = Series::identity(map.n(), degree);
    map.build_h()
        .iter()
        .zip(g.iter().zip(&y))
        .map(|(hi, (gi, yi))| Ok(gi.sub(&series_compose(hi, &g)?)?.sub(yi)?))
        .collect()
}

/// True iff `F(G(y)) = y` modulo terms of degree `degree + 1`.
pub fn verify_inverse(map: &PolyMap, g: &[Series], degree: u32) -> Result<bool, InversionError> {
    Ok(inverse_residual(map, g, degree)?.iter().all(Series::is_zero))
}

/// `d^N G_i / dy_{j1} ... dy_{jN}` at `y = 0` (0-based indices): the
/// coefficient of `y^alpha` times `prod_k alpha_k!`.
pub fn correlation_tensor(map: &PolyMap, i: usize, leaves: &[usize]) -> Result<Rational, InversionError> {
    let g = fixed_point_inverse(map, leaves.len().max(1) as u32)?;
    correlation_from_series(&g, i, leaves)
}

pub fn correlation_from_series(g: &[Series], i: usize, leaves: &[usize]) -> Result<Rational, InversionError> {
    let n = g.len();
    if let Some(&bad) = std::iter::once(&i).chain(leaves).find(|&&ix| ix >= n) {
        return Err(InversionError::IndexOutOfRange { index: bad, n });
    }
    let cap = g[i].cap();
    if leaves.len() as u32 > cap {
        return Err(InversionError::SeriesTooShort { cap, degree: leaves.len() as u32 });
    }
    let mono = Monomial::from_indices(n, leaves);
    let weight = mono
        .exponents()
        .iter()
        .fold(Rational::from_integer(1.into()), |acc, &e| acc * uint_to_rat(factorial(e as u64)));
    Ok(g[i].coeff(&mono) * weight)
}

/// Degree of the truncated inverse if nothing survives above `d^(n-1)`.
///
/// A `Some` is only evidence that the inverse is polynomial: terms above
/// `cap` are never inspected.
pub fn polynomial_inverse_degree(map: &PolyMap, cap: u32) -> Result<Option<u32>, InversionError> {
    let bound = map.gabber_bound();
    if cap <= bound {
        return Err(InversionError::CapTooSmall { cap, bound });
    }
    let g = fixed_point_inverse(map, cap)?;
    Ok(degree_within_bound(&g, bound))
}

fn degree_within_bound(g: &[Series], bound: u32) -> Option<u32> {
    let top = g.iter().filter_map(|s| s.body().degree()).max().unwrap_or(0);
    (top <= bound).then_some(top)
}

/// For `M(x)^2 = 0` the inverse is exactly `y + H(y)`. Returns whether the
/// fixed-point inverse at `cap` agrees with that.
pub fn check_quadratic_nilpotent_theorem(map: &PolyMap, cap: u32) -> Result<bool, InversionError> {
    let m = map.jacobian_matrix();
    if !m.pow(2)?.is_zero() {
        return Err(InversionError::NotSquareNilpotent);
    }
    let g = fixed_point_inverse(map, cap)?;
    let h = map.build_h();
    Ok(g.iter().enumerate().all(|(i, gi)| {
        let expected = Series::new(&Poly::var(map.n(), i) + &h[i], cap);
        *gi == expected
    }))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InverseReport {
    pub series: Vec<Series>,
    /// Degree up to which `F(G(y)) = y` was checked exactly.
    pub verified_to: Option<u32>,
    pub polynomial_degree: Option<u32>,
    pub gabber_bound: u32,
}

pub fn inverse_report(map: &PolyMap, cap: u32) -> Result<InverseReport, InversionError> {
    let series = fixed_point_inverse(map, cap)?;
    let verified_to = verify_inverse(map, &series, cap)?.then_some(cap);
    let gabber_bound = map.gabber_bound();
    let polynomial_degree = if cap > gabber_bound { degree_within_bound(&series, gabber_bound) } else { None };
    Ok(InverseReport { series, verified_to, polynomial_degree, gabber_bound })
}

/// Coefficients of the univariate inverse as `(degree, value)` pairs.
pub fn univariate_coefficients(s: &Series) -> Vec<(u32, Rational)> {
    s.body()
        .terms()
        .map(|(m, c)| (m.exponents()[0], c.clone()))
        .filter(|(_, c)| !c.is_zero())
        .collect()
}
