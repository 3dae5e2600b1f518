//! Planted-partition graphs with a target homophily ratio and Gaussian class
//! features, plus plain random connected graphs for the spectral checks.

use ndarray::Array2;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{FeatureMatrix, Graph};

const MAX_RESAMPLES: usize = 20;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub n: usize,
    pub num_classes: usize,
    /// Target fraction of intra-class edges.
    pub homophily: f64,
    pub mean_degree: f64,
    /// Feature dimension; must be at least `num_classes`.
    pub d: usize,
    /// Distance between any two class means.
    pub separation: f64,
    /// Per-coordinate standard deviation of the feature noise.
    pub noise: f64,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        SyntheticSpec {
            n: 600,
            num_classes: 2,
            homophily: 0.9,
            mean_degree: 10.0,
            d: 16,
            separation: 1.0,
            noise: 1.0,
            seed: 0,
        }
    }
}

/// Edge probabilities `(p_in, p_out)` giving `n * mean_degree / 2` expected
/// edges, a fraction `homophily` of them inside classes.
pub fn edge_probabilities(spec: &SyntheticSpec) -> Result<(f64, f64)> {
    let sizes = class_sizes(spec.n, spec.num_classes);
    let pairs_in: f64 = sizes.iter().map(|&s| (s * s.saturating_sub(1) / 2) as f64).sum();
    let total = (spec.n * spec.n.saturating_sub(1) / 2) as f64;
    let pairs_out = total - pairs_in;
    let m = spec.n as f64 * spec.mean_degree / 2.0;
    let p_in = if pairs_in > 0.0 { spec.homophily * m / pairs_in } else { 0.0 };
    let p_out = if pairs_out > 0.0 { (1.0 - spec.homophily) * m / pairs_out } else { 0.0 };
    for (name, p) in [("p_in", p_in), ("p_out", p_out)] {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Infeasible(format!(
                "{name} = {p:.4} for n={}, C={}, h={}, mean degree {}",
                spec.n, spec.num_classes, spec.homophily, spec.mean_degree
            )));
        }
    }
    Ok((p_in, p_out))
}

fn class_sizes(n: usize, c: usize) -> Vec<usize> {
    (0..c).map(|k| n / c + usize::from(k < n % c)).collect()
}

/// Samples a graph and features; the result is restricted to its largest
/// connected component and is never bipartite.
pub fn generate(spec: &SyntheticSpec) -> Result<(Graph, FeatureMatrix)> {
    if spec.num_classes < 2 {
        return Err(Error::InvalidArgument("need at least two classes".into()));
    }
    if spec.n < spec.num_classes {
        return Err(Error::InvalidArgument(format!(
            "{} nodes cannot hold {} classes",
            spec.n, spec.num_classes
        )));
    }
    if !(0.0..=1.0).contains(&spec.homophily) {
        return Err(Error::InvalidArgument(format!(
            "homophily must lie in [0, 1], got {}",
            spec.homophily
        )));
    }
    if spec.d < spec.num_classes {
        return Err(Error::InvalidArgument(format!(
            "feature dimension {} is smaller than the class count {}",
            spec.d, spec.num_classes
        )));
    }
    if !(spec.noise >= 0.0 && spec.separation >= 0.0) {
        return Err(Error::InvalidArgument("noise and separation must be non-negative".into()));
    }
    let (p_in, p_out) = edge_probabilities(spec)?;
    let n = spec.n;
    let labels: Vec<usize> = (0..n).map(|i| i % spec.num_classes).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    for _ in 0..MAX_RESAMPLES {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                let p = if labels[u] == labels[v] { p_in } else { p_out };
                if rng.random::<f64>() < p {
                    edges.push((u, v));
                }
            }
        }
        let full = Graph::from_edges(n, &edges, labels.clone())?;
        let keep = full.largest_component();
        let g = full.induced_subgraph(&keep)?;
        if g.m() == 0 || g.is_bipartite() {
            continue;
        }

        let mean_scale = spec.separation / std::f64::consts::SQRT_2;
        let mut x = Array2::<f64>::zeros((g.n(), spec.d));
        for (i, &c) in g.labels().iter().enumerate() {
            for j in 0..spec.d {
                let z: f64 = StandardNormal.sample(&mut rng);
                x[[i, j]] = spec.noise * z + if j == c { mean_scale } else { 0.0 };
            }
        }
        return Ok((g, FeatureMatrix::new(x)?));
    }
    Err(Error::Infeasible(format!(
        "no non-bipartite sample after {MAX_RESAMPLES} attempts"
    )))
}

/// Connected, non-bipartite graph on `n >= 3` nodes: a random spanning tree
/// plus independent extra edges with probability `p`, plus one edge closing
/// an odd cycle if the draw happened to be bipartite. Labels are all 0.
pub fn random_connected_graph<R: Rng>(n: usize, p: f64, rng: &mut R) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "need at least 3 nodes for a non-bipartite graph, got {n}"
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges = Vec::new();
    for i in 1..n {
        let parent = order[rng.random_range(0..i)];
        edges.push((parent, order[i]));
    }
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    let g = Graph::from_edges(n, &edges, vec![0; n])?;
    if !g.is_bipartite() {
        return Ok(g);
    }
    // In a bipartite tree-plus-edges graph, joining two nodes on the same side
    // closes an odd cycle. A node two steps from order[0] is on its side.
    let root = order[0];
    let same_side = (0..n).find(|&w| {
        w != root
            && !g.neighbors(root).contains(&w)
            && g.neighbors(w).iter().any(|&m| g.neighbors(root).contains(&m))
    });
    match same_side {
        Some(w) => {
            edges.push((root, w));
            Graph::from_edges(n, &edges, vec![0; n])
        }
        None => {
            // Star-like: the root's neighbors share a side with each other.
            let nb = g.neighbors(root);
            edges.push((nb[0], nb[1]));
            Graph::from_edges(n, &edges, vec![0; n])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn homophilous_sample_hits_target() {
        let spec = SyntheticSpec {
            n: 600,
            homophily: 0.9,
            ..SyntheticSpec::default()
        };
        let (g, x) = generate(&spec).unwrap();
        let h = g.homophily_ratio().unwrap();
        assert!((0.85..=0.95).contains(&h), "h = {h}");
        assert_eq!(x.n(), g.n());
        assert!(g.validate().is_ok());
    }

    #[test]
    fn heterophilous_sample_hits_target() {
        let spec = SyntheticSpec {
            n: 600,
            homophily: 0.1,
            seed: 3,
            ..SyntheticSpec::default()
        };
        let (g, _) = generate(&spec).unwrap();
        let h = g.homophily_ratio().unwrap();
        assert!((0.05..=0.15).contains(&h), "h = {h}");
        assert!(!g.is_bipartite());
    }

    #[test]
    fn pure_homophily_has_no_cross_edges() {
        let spec = SyntheticSpec {
            n: 200,
            homophily: 1.0,
            ..SyntheticSpec::default()
        };
        let (g, _) = generate(&spec).unwrap();
        assert_eq!(g.homophily_ratio().unwrap(), 1.0);
    }

    #[test]
    fn seeded_determinism() {
        let spec = SyntheticSpec {
            n: 120,
            seed: 42,
            ..SyntheticSpec::default()
        };
        assert_eq!(generate(&spec).unwrap(), generate(&spec).unwrap());
    }

    #[test]
    fn infeasible_degree_is_rejected() {
        let spec = SyntheticSpec {
            n: 20,
            mean_degree: 30.0,
            ..SyntheticSpec::default()
        };
        assert!(matches!(generate(&spec), Err(Error::Infeasible(_))));
    }

    #[test]
    fn class_means_are_separated_by_s() {
        let spec = SyntheticSpec {
            n: 4000,
            num_classes: 3,
            d: 3,
            separation: 2.0,
            noise: 0.0,
            mean_degree: 6.0,
            ..SyntheticSpec::default()
        };
        let (g, x) = generate(&spec).unwrap();
        let rows: Vec<usize> = (0..3)
            .map(|c| g.labels().iter().position(|&l| l == c).unwrap())
            .collect();
        for a in 0..3 {
            for b in (a + 1)..3 {
                let diff = &x.values().row(rows[a]) - &x.values().row(rows[b]);
                assert!((diff.dot(&diff).sqrt() - 2.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn random_graphs_are_connected_and_not_bipartite() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in [3, 4, 5, 10, 30] {
            for p in [0.0, 0.05, 0.3] {
                let g = random_connected_graph(n, p, &mut rng).unwrap();
                assert!(g.validate().is_ok(), "n={n} p={p}");
            }
        }
    }
}
