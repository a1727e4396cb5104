use std::collections::HashMap;

use super::{subtree_code, TreeError, ValencedTree, VertexSet};
use crate::algebra::{Poly, Rational};
use crate::tensor::PolyMap;

/// Nonzero `w[a; j1..jd]` for each upper index `a`, one row per ordered
/// lower tuple.
#[derive(Debug, Clone)]
pub(crate) struct OrderedTensor {
    rows: Vec<Vec<(Vec<usize>, Rational)>>,
}

impl OrderedTensor {
    pub(crate) fn new(map: &PolyMap) -> Self {
        OrderedTensor { rows: (0..map.n()).map(|a| map.tensor().ordered_entries(a)).collect() }
    }

    /// Contracts one internal vertex: entry `a` of the result is the sum over
    /// ordered `(j1..jd)` of `w[a; j1..jd] * prod_k incoming[k][j_k]`.
    pub(crate) fn contract(&self, nvars: usize, incoming: &[&[Poly]]) -> Vec<Poly> {
        self.rows
            .iter()
            .map(|row| {
                let mut acc = Poly::zero(nvars);
                for (js, w) in row {
                    let mut term = Poly::constant(nvars, w.clone());
                    for (child, &j) in incoming.iter().zip(js) {
                        term = &term * &child[j];
                        if term.is_zero() {
                            break;
                        }
                    }
                    acc = &acc + &term;
                }
                acc
            })
            .collect()
    }
}

/// Per-map memo of subtree contractions keyed by rooted shape. Amplitudes
/// only depend on the shape, so labeled trees sharing a shape share work.
#[derive(Debug, Clone)]
pub struct ContractionCache {
    n: usize,
    d: usize,
    tensor: OrderedTensor,
    by_shape: HashMap<String, Vec<Poly>>,
}

impl ContractionCache {
    pub fn new(map: &PolyMap) -> Self {
        ContractionCache { n: map.n(), d: map.d(), tensor: OrderedTensor::new(map), by_shape: HashMap::new() }
    }

    pub fn len(&self) -> usize {
        self.by_shape.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_shape.is_empty()
    }

    fn subtree(&mut self, v: usize, children: &[Vec<usize>]) -> (String, Vec<Poly>) {
        let code = subtree_code(v, children);
        if let Some(hit) = self.by_shape.get(&code) {
            return (code, hit.clone());
        }
        let out = if children[v].is_empty() {
            (0..self.n).map(|a| Poly::var(self.n, a)).collect()
        } else {
            let parts: Vec<Vec<Poly>> = children[v].iter().map(|&c| self.subtree(c, children).1).collect();
            let refs: Vec<&[Poly]> = parts.iter().map(Vec::as_slice).collect();
            self.tensor.contract(self.n, &refs)
        };
        self.by_shape.insert(code.clone(), out.clone());
        (code, out)
    }
}

/// `A_i(T)` for every root index `i` at once.
///
/// Edges are directed toward the root and summed bottom-up: every subtree
/// reduces to an `n`-vector indexed by the line leaving it. A leaf gives
/// `y_a`; an internal vertex carries a `w` factor with its outgoing line as
/// the upper index.
pub fn amplitude_vector(
    tree: &ValencedTree,
    map: &PolyMap,
    cache: &mut ContractionCache,
) -> Result<Vec<Poly>, TreeError> {
    if tree.d() != map.d() {
        return Err(TreeError::ValenceMismatch { tree_d: tree.d(), map_d: map.d() });
    }
    assert_eq!((cache.n, cache.d), (map.n(), map.d()), "cache built for another map");
    let children = tree.children();
    let root_child = children[VertexSet::ROOT][0];
    Ok(cache.subtree(root_child, &children).1)
}

/// `A_i(T)` with the root line fixed at index `i` (0-based).
pub fn amplitude(tree: &ValencedTree, map: &PolyMap, i: usize) -> Result<Poly, TreeError> {
    let mut cache = ContractionCache::new(map);
    let mut all = amplitude_vector(tree, map, &mut cache)?;
    Ok(all.swap_remove(i))
}
