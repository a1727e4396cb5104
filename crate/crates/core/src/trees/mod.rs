//! Labeled Cayley trees with prescribed valences and their amplitudes.
//!
//! A tree on `1 + V + N` vertices has the root (label 0) and the `N` leaves
//! (labels `V+1..=V+N`) of valence 1, and the `V` internal vertices (labels
//! `1..=V`) of valence `d + 1`. Counting half-lines forces `(d-1)V = N-1`.

mod amplitude;
mod prufer;
mod shapes;
mod sum;

pub use amplitude::{amplitude, amplitude_vector, ContractionCache};
pub use prufer::{enumerate_trees, PruferTrees};
pub use shapes::{Shape, ShapeCatalog};
pub use sum::{tree_sum_inverse, tree_sum_inverse_with, TreeSumMethod, TreeSumOptions};

use std::collections::VecDeque;

use num_bigint::BigUint;
use num_traits::One;
use thiserror::Error;

use crate::algebra::{factorial, AlgebraError};

/// Largest stratum the labeled enumerator will walk.
pub const DEFAULT_TREE_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("stratum V={internal} has {count} labeled trees, over the budget of {budget}")]
    BudgetExceeded { internal: usize, count: BigUint, budget: u64 },
    #[error("tree has internal valence {} but the map has degree {map_d} (valence {})", tree_d + 1, map_d + 1)]
    ValenceMismatch { tree_d: usize, map_d: usize },
    #[error("degree must be at least 2, found {0}")]
    InvalidDegree(usize),
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Label layout for one `(V, N)` stratum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct VertexSet {
    internal: usize,
    leaves: usize,
}

impl VertexSet {
    /// The stratum with `internal` vertices of valence `d + 1`.
    pub fn for_degree(internal: usize, d: usize) -> Self {
        VertexSet { internal, leaves: (d - 1) * internal + 1 }
    }

    pub fn internal(&self) -> usize {
        self.internal
    }

    pub fn leaves(&self) -> usize {
        self.leaves
    }

    pub fn len(&self) -> usize {
        1 + self.internal + self.leaves
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub const ROOT: usize = 0;

    pub fn is_internal(&self, v: usize) -> bool {
        (1..=self.internal).contains(&v)
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        v > self.internal && v < self.len()
    }
}

/// Labeled tree stored as unordered edges; orientation toward the root is
/// recomputed on demand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValencedTree {
    vertices: VertexSet,
    d: usize,
    edges: Vec<(usize, usize)>,
}

impl ValencedTree {
    /// Checks connectivity and every valence.
    pub fn new(internal: usize, d: usize, edges: Vec<(usize, usize)>) -> Result<Self, TreeError> {
        if d < 2 {
            return Err(TreeError::InvalidDegree(d));
        }
        let t = ValencedTree { vertices: VertexSet::for_degree(internal, d), d, edges };
        t.validate()?;
        Ok(t)
    }

    pub(crate) fn new_unchecked(vertices: VertexSet, d: usize, edges: Vec<(usize, usize)>) -> Self {
        ValencedTree { vertices, d, edges }
    }

    pub fn vertices(&self) -> VertexSet {
        self.vertices
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn valence(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    pub fn validate(&self) -> Result<(), TreeError> {
        let vs = self.vertices;
        let size = vs.len();
        if self.edges.len() != size - 1 {
            return Err(TreeError::InvalidTree(format!("{} edges on {} vertices", self.edges.len(), size)));
        }
        let mut degree = vec![0usize; size];
        for &(a, b) in &self.edges {
            if a >= size || b >= size || a == b {
                return Err(TreeError::InvalidTree(format!("bad edge ({a}, {b})")));
            }
            degree[a] += 1;
            degree[b] += 1;
        }
        for (v, &deg) in degree.iter().enumerate() {
            let want = if vs.is_internal(v) { self.d + 1 } else { 1 };
            if deg != want {
                return Err(TreeError::InvalidTree(format!("vertex {v} has valence {deg}, expected {want}")));
            }
        }
        if self.parents().iter().skip(1).any(Option::is_none) {
            return Err(TreeError::InvalidTree("not connected".into()));
        }
        Ok(())
    }

    /// `parents[v]` is the next vertex on the path from `v` to the root.
    pub fn parents(&self) -> Vec<Option<usize>> {
        let size = self.vertices.len();
        let adj = self.adjacency();
        let mut parent = vec![None; size];
        let mut seen = vec![false; size];
        let mut queue = VecDeque::from([VertexSet::ROOT]);
        seen[VertexSet::ROOT] = true;
        while let Some(v) = queue.pop_front() {
            for &u in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    parent[u] = Some(v);
                    queue.push_back(u);
                }
            }
        }
        parent
    }

    /// Children of each vertex under the root orientation, sorted by label.
    pub fn children(&self) -> Vec<Vec<usize>> {
        let mut children = vec![Vec::new(); self.vertices.len()];
        for (v, p) in self.parents().into_iter().enumerate() {
            if let Some(p) = p {
                children[p].push(v);
            }
        }
        children
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    /// Label-free encoding of the rooted shape: `l` for a leaf, `(..)` around
    /// the sorted encodings of an internal vertex's children.
    pub fn shape_code(&self) -> String {
        let children = self.children();
        let root_child = children[VertexSet::ROOT][0];
        subtree_code(root_child, &children)
    }
}

pub(crate) fn subtree_code(v: usize, children: &[Vec<usize>]) -> String {
    if children[v].is_empty() {
        return "l".to_string();
    }
    let mut parts: Vec<String> = children[v].iter().map(|&c| subtree_code(c, children)).collect();
    parts.sort_unstable();
    format!("({})", parts.concat())
}

/// `(V + N - 1)! / d!^V` with `N = (d-1)V + 1`.
pub fn tree_count(internal: usize, d: usize) -> BigUint {
    let leaves = (d - 1) * internal + 1;
    let denom = (0..internal).fold(BigUint::one(), |acc, _| acc * factorial(d as u64));
    factorial((internal + leaves - 1) as u64) / denom
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(tree_count(0, 2), BigUint::from(1u32));
        assert_eq!(tree_count(1, 2), BigUint::from(1u32));
        assert_eq!(tree_count(2, 2), BigUint::from(6u32));
        assert_eq!(tree_count(4, 3), BigUint::from(369_600u32));
    }

    #[test]
    fn valence_relation_holds() {
        for d in 2..5 {
            for v in 0..6 {
                let vs = VertexSet::for_degree(v, d);
                assert_eq!((d - 1) * vs.internal(), vs.leaves() - 1);
            }
        }
    }

    #[test]
    fn validation_rejects_bad_trees() {
        assert!(ValencedTree::new(1, 2, vec![(0, 1), (1, 2), (1, 3)]).is_ok());
        // root of valence 2
        assert!(ValencedTree::new(1, 2, vec![(0, 1), (0, 2), (1, 3)]).is_err());
        // wrong edge count
        assert!(ValencedTree::new(1, 2, vec![(0, 1), (1, 2)]).is_err());
        assert_eq!(ValencedTree::new(0, 1, vec![(0, 1)]), Err(TreeError::InvalidDegree(1)));
    }

    #[test]
    fn orientation_and_shape() {
        let t = ValencedTree::new(2, 2, vec![(0, 2), (2, 1), (2, 3), (1, 4), (1, 5)]).unwrap();
        let p = t.parents();
        assert_eq!(p[2], Some(0));
        assert_eq!(p[1], Some(2));
        assert_eq!(p[4], Some(1));
        assert_eq!(t.shape_code(), "((ll)l)");
    }
}
