//! Floating-point checks of the convergence statement for the tree series:
//! the radius `R`, numeric evaluation of the truncated inverse, the inverse
//! property at sample points and the bound `|G(y)| <= |y| / (1 - |y|/R)`.
//!
//! Floats are confined to this module.

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::algebra::{factorial, Poly, Series};
use crate::inversion::{fixed_point_inverse, InversionError};
use crate::tensor::PolyMap;
use crate::trees::tree_count;

pub const DEFAULT_RHO: f64 = 0.8;
pub const MAX_RHO: f64 = 0.9;
pub const DEFAULT_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericError {
    #[error("point has {found} coordinates, expected {expected}")]
    Dimension { expected: usize, found: usize },
    #[error("sample point with |y| = {norm} lies outside rho * R = {limit}")]
    OutsideRadius { norm: f64, limit: f64 },
    #[error("rho = {0} must lie in (0, 0.9]")]
    BadRho(f64),
    #[error(transparent)]
    Inversion(#[from] InversionError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleCheck {
    pub point: Vec<f64>,
    pub value: Vec<f64>,
    pub residual: f64,
    pub residual_ok: bool,
    pub bound: f64,
    pub bound_ok: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadiusReport {
    pub norm_w: f64,
    pub radius: f64,
    pub samples: Vec<SampleCheck>,
}

impl RadiusReport {
    pub fn all_ok(&self) -> bool {
        self.samples.iter().all(|s| s.residual_ok && s.bound_ok)
    }
}

pub fn sup_norm(y: &[f64]) -> f64 {
    y.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// `R = (d! / (2^d |w|))^(1/(d-1))`, infinite for the zero tensor.
pub fn convergence_radius(map: &PolyMap) -> f64 {
    let norm = map.norm_w().to_f64().unwrap_or(f64::INFINITY);
    if norm == 0.0 {
        return f64::INFINITY;
    }
    let d = map.d() as i32;
    let d_fact = factorial(map.d() as u64).to_f64().unwrap_or(f64::INFINITY);
    (d_fact / (2f64.powi(d) * norm)).powf(1.0 / (d - 1) as f64)
}

/// Direct monomial evaluation, summed in the polynomial's term order.
pub fn eval_poly_numeric(p: &Poly, y: &[f64]) -> Result<f64, NumericError> {
    if y.len() != p.nvars() {
        return Err(NumericError::Dimension { expected: p.nvars(), found: y.len() });
    }
    let mut acc = 0.0;
    for (m, c) in p.terms() {
        let mut t = c.to_f64().unwrap_or(f64::NAN);
        for (&x, &e) in y.iter().zip(m.exponents()) {
            t *= x.powi(e as i32);
        }
        acc += t;
    }
    Ok(acc)
}

pub fn eval_series_numeric(s: &Series, y: &[f64]) -> Result<f64, NumericError> {
    eval_poly_numeric(s.body(), y)
}

/// Evaluates the degree-`cap` inverse at each point and checks
/// `|F(G(y)) - y| <= tol` and the norm bound (with `tol` slack).
pub fn theorem1_check(
    map: &PolyMap,
    cap: u32,
    points: &[Vec<f64>],
    rho: f64,
    tol: f64,
) -> Result<RadiusReport, NumericError> {
    if !(rho > 0.0 && rho <= MAX_RHO) {
        return Err(NumericError::BadRho(rho));
    }
    let radius = convergence_radius(map);
    let limit = rho * radius;
    for p in points {
        if p.len() != map.n() {
            return Err(NumericError::Dimension { expected: map.n(), found: p.len() });
        }
        let norm = sup_norm(p);
        if norm > limit {
            return Err(NumericError::OutsideRadius { norm, limit });
        }
    }
    let g = fixed_point_inverse(map, cap)?;
    let f = map.build_f();
    let mut samples = Vec::with_capacity(points.len());
    for p in points {
        let value = g.iter().map(|gi| eval_series_numeric(gi, p)).collect::<Result<Vec<_>, _>>()?;
        let image = f.iter().map(|fi| eval_poly_numeric(fi, &value)).collect::<Result<Vec<_>, _>>()?;
        let residual = image.iter().zip(p).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        let norm = sup_norm(p);
        let bound = if radius.is_infinite() { norm } else { norm / (1.0 - norm / radius) };
        samples.push(SampleCheck {
            residual_ok: residual <= tol,
            bound_ok: sup_norm(&value) <= bound + tol,
            point: p.clone(),
            value,
            residual,
            bound,
        });
    }
    Ok(RadiusReport { norm_w: map.norm_w().to_f64().unwrap_or(f64::NAN), radius, samples })
}

/// Axis-aligned and seeded random-direction points at `{0.25, 0.5, 0.8}`
/// times `R` (unit scale when `R` is infinite). Returns `count` points.
pub fn default_sample_points(map: &PolyMap, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let n = map.n();
    let radius = convergence_radius(map);
    let scale = if radius.is_finite() { radius } else { 1.0 };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(count);
    let radii = [0.25, 0.5, DEFAULT_RHO];
    let mut k = 0usize;
    while points.len() < count {
        let r = radii[k % radii.len()] * scale;
        let round = k / radii.len();
        let mut p = vec![0.0; n];
        if round < n {
            p[round] = r;
        } else {
            for x in p.iter_mut() {
                *x = rng.gen_range(-1.0..=1.0);
            }
            let norm = sup_norm(&p).max(f64::MIN_POSITIVE);
            for x in p.iter_mut() {
                *x *= r / norm;
            }
        }
        points.push(p);
        k += 1;
    }
    points
}

/// Per-stratum terms of the convergence majorant:
/// `(count(V)/(V! N!)) |w|^V |y|^N` against `|y| (2^d |w| |y|^{d-1} / d!)^V`.
pub fn majorant_terms(d: usize, norm_w: f64, y: f64, max_internal: usize) -> Vec<(f64, f64)> {
    let d_fact = factorial(d as u64).to_f64().unwrap_or(f64::INFINITY);
    (0..=max_internal)
        .map(|v| {
            let n_leaves = (d - 1) * v + 1;
            let weight = tree_count(v, d).to_f64().unwrap_or(f64::INFINITY)
                / (factorial(v as u64).to_f64().unwrap_or(f64::INFINITY)
                    * factorial(n_leaves as u64).to_f64().unwrap_or(f64::INFINITY));
            let lhs = weight * norm_w.powi(v as i32) * y.powi(n_leaves as i32);
            let ratio = 2f64.powi(d as i32) * norm_w * y.powi(d as i32 - 1) / d_fact;
            (lhs, y * ratio.powi(v as i32))
        })
        .collect()
}
