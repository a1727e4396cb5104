//! Exact formal inverses of polynomial maps `F(x) = x - H(x)` with `H`
//! homogeneous of degree `d >= 2`.
//!
//! The inverse is computed two independent ways, by the fixed-point
//! recursion [`inversion::fixed_point_inverse`] and by the labeled tree
//! expansion [`trees::tree_sum_inverse`]. Around them sit the Jacobian
//! criteria ([`jacobian`]), the partition-function series ([`partition`])
//! and a floating-point convergence check ([`numeric`]).
//!
//! Library indices are 0-based; map files and rendered output are 1-based.

pub mod algebra;
pub mod cli;
pub mod inversion;
pub mod jacobian;
pub mod numeric;
pub mod partition;
pub mod tensor;
pub mod trees;
