use num_bigint::{BigInt, BigUint};

use super::amplitude::OrderedTensor;
use super::{
    amplitude_vector, enumerate_trees, tree_count, ContractionCache, ShapeCatalog, TreeError, VertexSet,
    DEFAULT_TREE_BUDGET,
};
use crate::algebra::{factorial, Poly, Rational, Series};
use crate::tensor::PolyMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeSumMethod {
    /// Walk every labeled tree with weight `1/(V! N!)`; a stratum over the
    /// budget is an error.
    Labeled,
    /// One term per unlabeled shape with weight `1/|Aut|`.
    Shapes,
    /// Labeled where the stratum fits the budget, shapes above it.
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeSumOptions {
    pub method: TreeSumMethod,
    pub budget: u64,
}

impl Default for TreeSumOptions {
    fn default() -> Self {
        TreeSumOptions { method: TreeSumMethod::Auto, budget: DEFAULT_TREE_BUDGET }
    }
}

/// `G_i(y) = sum_V 1/(V! N!) sum_T A_i(T)` over all strata with `N <= cap`,
/// using [`TreeSumOptions::default`].
pub fn tree_sum_inverse(map: &PolyMap, cap: u32) -> Result<Vec<Series>, TreeError> {
    tree_sum_inverse_with(map, cap, TreeSumOptions::default())
}

pub fn tree_sum_inverse_with(map: &PolyMap, cap: u32, opts: TreeSumOptions) -> Result<Vec<Series>, TreeError> {
    let (n, d) = (map.n(), map.d());
    let max_internal = if cap == 0 { 0 } else { (cap as usize - 1) / (d - 1) };
    let budget = BigUint::from(opts.budget);

    let use_labeled: Vec<bool> = (0..=max_internal)
        .map(|v| {
            let fits = tree_count(v, d) <= budget;
            match opts.method {
                TreeSumMethod::Labeled if !fits => Err(TreeError::BudgetExceeded {
                    internal: v,
                    count: tree_count(v, d),
                    budget: opts.budget,
                }),
                TreeSumMethod::Labeled => Ok(true),
                TreeSumMethod::Shapes => Ok(false),
                TreeSumMethod::Auto => Ok(fits),
            }
        })
        .collect::<Result<_, _>>()?;

    let mut totals = vec![Poly::zero(n); n];
    if cap == 0 {
        return Ok(totals.into_iter().map(|p| Series::new(p, 0)).collect());
    }

    let mut cache = ContractionCache::new(map);
    let catalog = (!use_labeled.iter().all(|&b| b)).then(|| ShapeCatalog::new(d, max_internal));
    let shape_vectors = catalog.as_ref().map(|c| shape_amplitudes(map, c)).unwrap_or_default();

    for (v, &labeled) in use_labeled.iter().enumerate() {
        if labeled {
            let vs = VertexSet::for_degree(v, d);
            let mut stratum = vec![Poly::zero(n); n];
            for tree in enumerate_trees(v, d, opts.budget)? {
                let amp = amplitude_vector(&tree, map, &mut cache)?;
                for (acc, a) in stratum.iter_mut().zip(&amp) {
                    *acc = &*acc + a;
                }
            }
            let labelings = factorial(v as u64) * factorial(vs.leaves() as u64);
            let weight = Rational::new(1.into(), BigInt::from(labelings));
            for (t, s) in totals.iter_mut().zip(&stratum) {
                *t = &*t + &s.scale(&weight);
            }
        } else {
            let catalog = catalog.as_ref().expect("built whenever a stratum uses shapes");
            for &id in catalog.with_internal(v) {
                let weight = Rational::new(1.into(), BigInt::from(catalog.get(id).automorphisms.clone()));
                for (t, a) in totals.iter_mut().zip(&shape_vectors[id]) {
                    *t = &*t + &a.scale(&weight);
                }
            }
        }
    }
    Ok(totals.into_iter().map(|p| Series::new(p, cap)).collect())
}

/// Amplitude vectors for every shape in the catalog, children first.
fn shape_amplitudes(map: &PolyMap, catalog: &ShapeCatalog) -> Vec<Vec<Poly>> {
    let n = map.n();
    let tensor = OrderedTensor::new(map);
    let mut out: Vec<Vec<Poly>> = Vec::with_capacity(catalog.shapes().len());
    for shape in catalog.shapes() {
        let vector = if shape.children.is_empty() {
            (0..n).map(|a| Poly::var(n, a)).collect()
        } else {
            let refs: Vec<&[Poly]> = shape.children.iter().map(|&c| out[c].as_slice()).collect();
            tensor.contract(n, &refs)
        };
        out.push(vector);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, Monomial};
    use crate::tensor::lookup;

    fn univariate(coeffs: &[(u32, Rational)]) -> Poly {
        Poly::from_terms(1, coeffs.iter().map(|(k, c)| (Monomial::new(vec![*k]), c.clone())))
    }

    #[test]
    fn univar_2_catalan() {
        let g = tree_sum_inverse(&lookup("univar-2").unwrap(), 4).unwrap();
        let want = univariate(&[(1, rat(1, 1)), (2, rat(1, 2)), (3, rat(1, 2)), (4, rat(5, 8))]);
        assert_eq!(g[0].body(), &want);
    }

    #[test]
    fn zero_tensor_is_identity() {
        let g = tree_sum_inverse(&lookup("zero-2-3").unwrap(), 5).unwrap();
        assert_eq!(g, Series::identity(2, 5));
    }

    #[test]
    fn triangular_2_3() {
        let g = tree_sum_inverse(&lookup("triangular-2-3").unwrap(), 3).unwrap();
        assert_eq!(g[0].body(), &(&Poly::var(2, 0) + &Poly::var(2, 1).pow(3)));
        assert_eq!(g[1].body(), &Poly::var(2, 1));
    }

    #[test]
    fn methods_agree() {
        for name in ["random-3-2", "nilsq-2-2", "random-2-3"] {
            let m = lookup(name).unwrap();
            let labeled = tree_sum_inverse_with(&m, 5, TreeSumOptions { method: TreeSumMethod::Labeled, budget: 1_000_000 }).unwrap();
            let shapes = tree_sum_inverse_with(&m, 5, TreeSumOptions { method: TreeSumMethod::Shapes, budget: 0 }).unwrap();
            assert_eq!(labeled, shapes, "{name}");
        }
    }

    #[test]
    fn labeled_budget_is_an_error_not_a_truncation() {
        let m = lookup("univar-2").unwrap();
        let opts = TreeSumOptions { method: TreeSumMethod::Labeled, budget: 100 };
        assert!(matches!(tree_sum_inverse_with(&m, 5, opts), Err(TreeError::BudgetExceeded { internal: 4, .. })));
        // Auto falls back to shapes for the same stratum
        let auto = tree_sum_inverse_with(&m, 5, TreeSumOptions { method: TreeSumMethod::Auto, budget: 100 }).unwrap();
        assert_eq!(auto[0].coeff(&Monomial::new(vec![5])), rat(7, 8));
    }

    #[test]
    fn degrees_are_one_mod_d_minus_one() {
        let m = lookup("random-2-3").unwrap();
        for g in tree_sum_inverse(&m, 7).unwrap() {
            for (mono, _) in g.body().terms() {
                assert_eq!(mono.degree() % 2, 1);
            }
        }
    }
}
