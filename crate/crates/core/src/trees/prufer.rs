use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_bigint::BigUint;

use super::{tree_count, TreeError, ValencedTree, VertexSet};
use crate::tensor::next_permutation;

/// Every labeled tree of one stratum, each exactly once.
///
/// A labeled tree on `L` vertices is a Prüfer word of length `L - 2` in
/// which vertex `v` occurs `valence(v) - 1` times. Here the root and the
/// leaves never occur and each internal label occurs `d` times, so the
/// stream walks the distinct permutations of `1^d 2^d ... V^d` in
/// lexicographic order.
#[derive(Debug, Clone)]
pub struct PruferTrees {
    vertices: VertexSet,
    d: usize,
    word: Vec<usize>,
    done: bool,
}

/// Fails with [`TreeError::BudgetExceeded`] before yielding anything when the
/// stratum is larger than `budget`.
pub fn enumerate_trees(internal: usize, d: usize, budget: u64) -> Result<PruferTrees, TreeError> {
    if d < 2 {
        return Err(TreeError::InvalidDegree(d));
    }
    let count = tree_count(internal, d);
    if count > BigUint::from(budget) {
        return Err(TreeError::BudgetExceeded { internal, count, budget });
    }
    let word = (1..=internal).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    Ok(PruferTrees { vertices: VertexSet::for_degree(internal, d), d, word, done: false })
}

impl PruferTrees {
    fn decode(&self) -> ValencedTree {
        let size = self.vertices.len();
        let mut degree = vec![1usize; size];
        for &v in &self.word {
            degree[v] += 1;
        }
        let mut leaves: BinaryHeap<Reverse<usize>> =
            (0..size).filter(|&v| degree[v] == 1).map(Reverse).collect();
        let mut edges = Vec::with_capacity(size - 1);
        for &v in &self.word {
            let Reverse(leaf) = leaves.pop().expect("a Prüfer word always leaves a leaf");
            edges.push((leaf, v));
            degree[v] -= 1;
            if degree[v] == 1 {
                leaves.push(Reverse(v));
            }
        }
        let Reverse(a) = leaves.pop().expect("two vertices remain");
        let Reverse(b) = leaves.pop().expect("two vertices remain");
        edges.push((a, b));
        ValencedTree::new_unchecked(self.vertices, self.d, edges)
    }
}

impl Iterator for PruferTrees {
    type Item = ValencedTree;

    fn next(&mut self) -> Option<ValencedTree> {
        if self.done {
            return None;
        }
        let tree = self.decode();
        if !next_permutation(&mut self.word) {
            self.done = true;
        }
        Some(tree)
    }
}
