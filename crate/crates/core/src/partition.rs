//! Partition-function series `Z(y)` computed from the trace formula
//! `log Z = sum_k (1/k) tr[M(G(y))^k]`, and the identities it satisfies.

use thiserror::Error;

use crate::algebra::{series_compose, AlgebraError, Poly, PolyMatrix, Rational, Series};
use crate::inversion::{fixed_point_inverse, InversionError};
use crate::jacobian::{is_unit_jacobian, JacobianError};
use crate::tensor::PolyMap;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("self-normalization needs a unit Jacobian, but det(I - M(x)) is not 1")]
    NotUnitJacobian,
    #[error(transparent)]
    Inversion(#[from] InversionError),
    #[error(transparent)]
    Jacobian(#[from] JacobianError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionReport {
    pub log_z: Series,
    pub z: Series,
    /// `Z = 1` up to the cap.
    pub self_normalized: bool,
    /// `Z * JF(G(y)) = 1` up to the cap.
    pub z_identity: bool,
}

/// `M(G(y))` with entries truncated at `cap`.
fn jacobian_at_inverse(map: &PolyMap, g: &[Series]) -> Result<PolyMatrix, AlgebraError> {
    let m = map.jacobian_matrix();
    let entries = m.entries().iter().map(|p| series_compose(p, g).map(Series::into_body)).collect::<Result<Vec<_>, _>>()?;
    let n = map.n();
    let rows = entries.chunks(n).map(<[Poly]>::to_vec).collect();
    PolyMatrix::from_rows(rows)
}

fn log_z_from_inverse(map: &PolyMap, g: &[Series], cap: u32) -> Result<Series, PartitionError> {
    let n = map.n();
    let p = jacobian_at_inverse(map, g)?;
    // entries of M(G) start at degree d - 1, so k(d-1) > cap adds nothing
    let k_max = cap / (map.d() as u32 - 1);
    let mut total = Poly::zero(n);
    let mut power = p.clone();
    for k in 1..=k_max {
        if k > 1 {
            power = power.mul_truncated(&p, cap)?;
        }
        let weight = Rational::new(1.into(), (k as i64).into());
        total = &total + &power.trace().scale(&weight);
    }
    Ok(Series::new(total, cap))
}

pub fn log_z_series(map: &PolyMap, cap: u32) -> Result<Series, PartitionError> {
    let g = fixed_point_inverse(map, cap)?;
    log_z_from_inverse(map, &g, cap)
}

pub fn z_series(map: &PolyMap, cap: u32) -> Result<Series, PartitionError> {
    Ok(log_z_series(map, cap)?.exp()?)
}

/// `JF(G(y))` truncated at the cap of `g`.
pub fn jacobian_det_at_inverse(map: &PolyMap, g: &[Series]) -> Result<Series, PartitionError> {
    Ok(series_compose(&map.jacobian_det()?, g)?)
}

/// True iff `Z(y) * JF(G(y)) = 1` modulo degree `cap + 1`.
pub fn verify_z_identity(map: &PolyMap, cap: u32) -> Result<bool, PartitionError> {
    Ok(partition_report(map, cap)?.z_identity)
}

/// True iff `Z = 1` up to the cap; only meaningful for unit-Jacobian maps.
/// Checks the truncation only, never all orders.
pub fn check_self_normalization(map: &PolyMap, cap: u32) -> Result<bool, PartitionError> {
    if !is_unit_jacobian(map)? {
        return Err(PartitionError::NotUnitJacobian);
    }
    Ok(z_series(map, cap)?.is_one())
}

pub fn partition_report(map: &PolyMap, cap: u32) -> Result<PartitionReport, PartitionError> {
    let g = fixed_point_inverse(map, cap)?;
    let log_z = log_z_from_inverse(map, &g, cap)?;
    let z = log_z.exp()?;
    let jf = jacobian_det_at_inverse(map, &g)?;
    let z_identity = z.mul(&jf)?.is_one();
    let self_normalized = z.is_one();
    Ok(PartitionReport { log_z, z, self_normalized, z_identity })
}
