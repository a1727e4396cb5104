use num_bigint::BigUint;
use num_traits::One;

use crate::algebra::factorial;

/// Unlabeled rooted tree in which every internal vertex has `d` children.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shape {
    /// Ids of the children in a [`ShapeCatalog`], nondecreasing; empty for
    /// a leaf.
    pub children: Vec<usize>,
    pub internal: usize,
    /// Order of the automorphism group fixing the root.
    pub automorphisms: BigUint,
}

/// All shapes with at most `max_internal` internal vertices. A child always
/// has a smaller id than its parent.
///
/// Labeling the internal and leaf vertices of a shape in every possible way
/// gives `V! N! / |Aut|` distinct labeled trees, so summing amplitudes over
/// shapes with weight `1/|Aut|` reproduces the labeled `1/(V! N!)` sum.
#[derive(Debug, Clone)]
pub struct ShapeCatalog {
    d: usize,
    shapes: Vec<Shape>,
    by_internal: Vec<Vec<usize>>,
}

impl ShapeCatalog {
    pub fn new(d: usize, max_internal: usize) -> Self {
        let leaf = Shape { children: Vec::new(), internal: 0, automorphisms: BigUint::one() };
        let mut cat = ShapeCatalog { d, shapes: vec![leaf], by_internal: vec![vec![0]] };
        for v in 1..=max_internal {
            let mut found = Vec::new();
            let mut current = Vec::with_capacity(d);
            cat.choose(0, v - 1, &mut current, &mut found);
            let mut ids = Vec::with_capacity(found.len());
            for children in found {
                let automorphisms = cat.automorphisms_of(&children);
                ids.push(cat.shapes.len());
                cat.shapes.push(Shape { children, internal: v, automorphisms });
            }
            cat.by_internal.push(ids);
        }
        cat
    }

    /// Nondecreasing `d`-multisets of existing ids whose internal counts sum
    /// to `remaining`.
    fn choose(&self, min_id: usize, remaining: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let slots_left = self.d - current.len();
        if slots_left == 0 {
            if remaining == 0 {
                out.push(current.clone());
            }
            return;
        }
        for id in min_id..self.shapes.len() {
            let size = self.shapes[id].internal;
            if size > remaining {
                continue;
            }
            // later slots take ids >= this one, hence at least `size` each
            if size * slots_left > remaining {
                continue;
            }
            current.push(id);
            self.choose(id, remaining - size, current, out);
            current.pop();
        }
    }

    fn automorphisms_of(&self, children: &[usize]) -> BigUint {
        let mut aut = BigUint::one();
        let mut run = 1u64;
        for (k, &c) in children.iter().enumerate() {
            aut *= &self.shapes[c].automorphisms;
            if k > 0 && children[k - 1] == c {
                run += 1;
            } else {
                run = 1;
            }
            if k + 1 == children.len() || children[k + 1] != c {
                aut *= factorial(run);
            }
        }
        aut
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn shapes(&self) -> &[Shape] {
        &self.shapes
    }

    pub fn get(&self, id: usize) -> &Shape {
        &self.shapes[id]
    }

    /// Ids of the shapes with exactly `v` internal vertices.
    pub fn with_internal(&self, v: usize) -> &[usize] {
        &self.by_internal[v]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trees::tree_count;

    #[test]
    fn labeled_counts_are_recovered() {
        for d in 2..=4 {
            let cat = ShapeCatalog::new(d, 6);
            for v in 0..=6 {
                let n = (d - 1) * v + 1;
                let labelings = factorial(v as u64) * factorial(n as u64);
                let total: BigUint = cat.with_internal(v).iter().map(|&id| &labelings / &cat.get(id).automorphisms).sum();
                assert_eq!(total, tree_count(v, d), "d={d}, V={v}");
            }
        }
    }

    #[test]
    fn binary_shape_counts() {
        // Wedderburn-Etherington numbers W(V+1)
        let cat = ShapeCatalog::new(2, 6);
        let counts: Vec<usize> = (0..=6).map(|v| cat.with_internal(v).len()).collect();
        assert_eq!(counts, vec![1, 1, 1, 2, 3, 6, 11]);
    }

    #[test]
    fn star_automorphisms() {
        let cat = ShapeCatalog::new(3, 1);
        assert_eq!(cat.get(cat.with_internal(1)[0]).automorphisms, BigUint::from(6u32));
    }
}
