//! Undirected graphs in CSR form, the plain-text file formats they are read
//! from, and label statistics (homophily, label-difference energy, splits).
//!
//! Edge files hold one `u<TAB>v` pair per line (any whitespace separates the
//! two ids, `#` starts a comment line). Feature files are header-less CSV with
//! one row per node. Label files hold one non-negative integer per line.

use std::collections::VecDeque;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use ndarray::Array2;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Immutable, simple, undirected graph with per-node class labels.
///
/// Every undirected edge is stored as two arcs. The stored adjacency never
/// contains self-loops.
#[derive(Clone, Debug, PartialEq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<usize>,
    labels: Vec<usize>,
    num_classes: usize,
}

impl Graph {
    /// Builds a graph from an arbitrary edge list: edges are symmetrized and
    /// deduplicated, self-loops are dropped with a warning.
    pub fn from_edges(n: usize, edges: &[(usize, usize)], labels: Vec<usize>) -> Result<Self> {
        if labels.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "{} labels for {} nodes",
                labels.len(),
                n
            )));
        }
        let mut arcs = Vec::with_capacity(2 * edges.len());
        let mut self_loops = 0usize;
        for &(u, v) in edges {
            for id in [u, v] {
                if id >= n {
                    return Err(Error::NodeOutOfRange { id, n });
                }
            }
            if u == v {
                self_loops += 1;
                continue;
            }
            arcs.push((u, v));
            arcs.push((v, u));
        }
        if self_loops > 0 {
            log::warn!("dropped {self_loops} self-loop(s) from the input edge list");
        }
        arcs.sort_unstable();
        arcs.dedup();

        let mut offsets = vec![0usize; n + 1];
        for &(u, _) in &arcs {
            offsets[u + 1] += 1;
        }
        for u in 0..n {
            offsets[u + 1] += offsets[u];
        }
        let targets = arcs.into_iter().map(|(_, v)| v).collect();
        let num_classes = labels.iter().max().map_or(0, |&c| c + 1);
        Ok(Graph {
            offsets,
            targets,
            labels,
            num_classes,
        })
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    /// Number of undirected edges.
    pub fn m(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn degree(&self, u: usize) -> usize {
        self.offsets[u + 1] - self.offsets[u]
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n()).map(|u| self.degree(u)).collect()
    }

    /// Sorted neighbor list of `u`.
    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.targets[self.offsets[u]..self.offsets[u + 1]]
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    /// Each undirected edge once, as `(u, v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    /// Same topology, new labels.
    pub fn with_labels(&self, labels: Vec<usize>) -> Result<Self> {
        if labels.len() != self.n() {
            return Err(Error::DimensionMismatch(format!(
                "{} labels for {} nodes",
                labels.len(),
                self.n()
            )));
        }
        let num_classes = labels.iter().max().map_or(0, |&c| c + 1);
        Ok(Graph {
            offsets: self.offsets.clone(),
            targets: self.targets.clone(),
            labels,
            num_classes,
        })
    }

    /// Component id for every node, numbered in order of first appearance.
    pub fn components(&self) -> (usize, Vec<usize>) {
        let n = self.n();
        let mut comp = vec![usize::MAX; n];
        let mut count = 0;
        let mut queue = VecDeque::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = count;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for &v in self.neighbors(u) {
                    if comp[v] == usize::MAX {
                        comp[v] = count;
                        queue.push_back(v);
                    }
                }
            }
            count += 1;
        }
        (count, comp)
    }

    pub fn is_connected(&self) -> bool {
        self.n() > 0 && self.components().0 == 1
    }

    /// Two-coloring by BFS; true when every component admits a proper coloring.
    pub fn is_bipartite(&self) -> bool {
        let n = self.n();
        let mut color = vec![u8::MAX; n];
        let mut queue = VecDeque::new();
        for s in 0..n {
            if color[s] != u8::MAX {
                continue;
            }
            color[s] = 0;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for &v in self.neighbors(u) {
                    if color[v] == u8::MAX {
                        color[v] = 1 - color[u];
                        queue.push_back(v);
                    } else if color[v] == color[u] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Checks the standing assumptions of the spectral results: connected and
    /// non-bipartite.
    pub fn validate(&self) -> Result<()> {
        let (components, _) = self.components();
        if components != 1 {
            return Err(Error::Disconnected { components });
        }
        if self.is_bipartite() {
            return Err(Error::Bipartite);
        }
        Ok(())
    }

    /// Nodes of the largest connected component, ascending. Ties go to the
    /// component containing the smallest node id.
    pub fn largest_component(&self) -> Vec<usize> {
        let (count, comp) = self.components();
        let mut sizes = vec![0usize; count];
        for &c in &comp {
            sizes[c] += 1;
        }
        let best = (0..count).max_by_key(|&c| (sizes[c], std::cmp::Reverse(c)));
        match best {
            Some(best) => (0..self.n()).filter(|&u| comp[u] == best).collect(),
            None => Vec::new(),
        }
    }

    /// Subgraph induced by `nodes` (which must be distinct), relabelled to
    /// `0..nodes.len()` in the given order.
    pub fn induced_subgraph(&self, nodes: &[usize]) -> Result<Self> {
        let mut index = vec![usize::MAX; self.n()];
        for (new, &old) in nodes.iter().enumerate() {
            if old >= self.n() {
                return Err(Error::NodeOutOfRange {
                    id: old,
                    n: self.n(),
                });
            }
            index[old] = new;
        }
        let mut edges = Vec::new();
        for (new_u, &old_u) in nodes.iter().enumerate() {
            for &old_v in self.neighbors(old_u) {
                let new_v = index[old_v];
                if new_v != usize::MAX && new_u < new_v {
                    edges.push((new_u, new_v));
                }
            }
        }
        let labels = nodes.iter().map(|&u| self.labels[u]).collect();
        Graph::from_edges(nodes.len(), &edges, labels)
    }

    /// Fraction of edges whose endpoints share a class.
    pub fn homophily_ratio(&self) -> Result<f64> {
        let m = self.m();
        if m == 0 {
            return Err(Error::InvalidArgument(
                "homophily ratio is undefined for a graph without edges".into(),
            ));
        }
        let same = self
            .edges()
            .filter(|&(u, v)| self.labels[u] == self.labels[v])
            .count();
        Ok(same as f64 / m as f64)
    }

    /// `sum (y_i - y_j)^2` over edges with both endpoints in `class_a` or
    /// `class_b`, where `y = +1` on `class_a` and `-1` on `class_b`.
    ///
    /// On a graph labelled only with these two classes this is `4 (1 - h) m`.
    /// The sum is accumulated in integers.
    pub fn label_difference_energy(&self, class_a: usize, class_b: usize) -> Result<f64> {
        if class_a == class_b {
            return Err(Error::InvalidArgument(
                "label difference energy needs two distinct classes".into(),
            ));
        }
        for class in [class_a, class_b] {
            if !self.labels.contains(&class) {
                return Err(Error::InvalidArgument(format!(
                    "class {class} has no nodes"
                )));
            }
        }
        let sign = |c: usize| -> Option<i64> {
            if c == class_a {
                Some(1)
            } else if c == class_b {
                Some(-1)
            } else {
                None
            }
        };
        let mut energy: i64 = 0;
        for (u, v) in self.edges() {
            if let (Some(yu), Some(yv)) = (sign(self.labels[u]), sign(self.labels[v])) {
                energy += (yu - yv) * (yu - yv);
            }
        }
        Ok(energy as f64)
    }
}

/// Dense node features, one row per node.
#[derive(Clone, Debug, PartialEq)]
pub struct FeatureMatrix(Array2<f64>);

impl FeatureMatrix {
    pub fn new(values: Array2<f64>) -> Result<Self> {
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            let d = values.ncols().max(1);
            return Err(Error::NonFinite(format!(
                "feature ({}, {}) is not finite",
                pos / d,
                pos % d
            )));
        }
        Ok(FeatureMatrix(values))
    }

    pub fn n(&self) -> usize {
        self.0.nrows()
    }

    pub fn d(&self) -> usize {
        self.0.ncols()
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.0
    }

    pub fn into_inner(self) -> Array2<f64> {
        self.0
    }

    /// Rows `nodes` in order.
    pub fn select_rows(&self, nodes: &[usize]) -> Self {
        FeatureMatrix(self.0.select(ndarray::Axis(0), nodes))
    }
}

/// One train/validation/test partition of the nodes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitSet {
    pub seed: u64,
    pub train: Vec<usize>,
    pub val: Vec<usize>,
    pub test: Vec<usize>,
}

impl SplitSet {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("split sets always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format(format!("split set: {e}")))
    }
}

/// Sizes `(floor(0.6 n), floor(0.2 n), rest)`.
pub fn split_sizes(n: usize) -> (usize, usize, usize) {
    let train = n * 3 / 5;
    let val = n / 5;
    (train, val, n - train - val)
}

/// `count` random 60/20/20 splits. One generator seeded from `seed` drives
/// all of them, so the whole list is reproducible.
pub fn make_splits(g: &Graph, seed: u64, count: usize) -> Result<Vec<SplitSet>> {
    let n = g.n();
    if n < 5 {
        return Err(Error::InvalidArgument(format!(
            "need at least 5 nodes to split, got {n}"
        )));
    }
    let (n_train, n_val, _) = split_sizes(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut splits = Vec::with_capacity(count);
    for _ in 0..count {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        let mut train = order[..n_train].to_vec();
        let mut val = order[n_train..n_train + n_val].to_vec();
        let mut test = order[n_train + n_val..].to_vec();
        train.sort_unstable();
        val.sort_unstable();
        test.sort_unstable();
        splits.push(SplitSet {
            seed,
            train,
            val,
            test,
        });
    }
    Ok(splits)
}

fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// Reads a label file: one non-negative integer per non-empty line.
pub fn read_labels(path: &Path) -> Result<Vec<usize>> {
    let text = read_to_string(path)?;
    content_lines(&text)
        .map(|(line, l)| {
            l.parse::<usize>().map_err(|_| Error::Parse {
                path: path.to_path_buf(),
                line,
                message: format!("expected a non-negative integer label, got {l:?}"),
            })
        })
        .collect()
}

/// Reads an edge file as raw pairs without range checks.
pub fn read_edges(path: &Path) -> Result<Vec<(usize, usize)>> {
    let text = read_to_string(path)?;
    let mut edges = Vec::new();
    for (line, l) in content_lines(&text) {
        let mut parts = l.split_whitespace();
        let parse = |tok: Option<&str>| -> Result<usize> {
            tok.and_then(|t| t.parse::<usize>().ok())
                .ok_or_else(|| Error::Parse {
                    path: path.to_path_buf(),
                    line,
                    message: format!("expected two node ids, got {l:?}"),
                })
        };
        let u = parse(parts.next())?;
        let v = parse(parts.next())?;
        if parts.next().is_some() {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line,
                message: format!("expected exactly two node ids, got {l:?}"),
            });
        }
        edges.push((u, v));
    }
    Ok(edges)
}

/// Reads a header-less CSV feature file.
pub fn read_features(path: &Path) -> Result<FeatureMatrix> {
    let text = read_to_string(path)?;
    let mut values = Vec::new();
    let mut rows = 0usize;
    let mut width = None;
    for (line, l) in content_lines(&text) {
        let before = values.len();
        for tok in l.split(',') {
            let tok = tok.trim();
            let v: f64 = tok.parse().map_err(|_| Error::Parse {
                path: path.to_path_buf(),
                line,
                message: format!("non-numeric feature {tok:?}"),
            })?;
            values.push(v);
        }
        let w = values.len() - before;
        match width {
            None => width = Some(w),
            Some(expected) if expected != w => {
                return Err(Error::Parse {
                    path: path.to_path_buf(),
                    line,
                    message: format!("row has {w} columns, expected {expected}"),
                })
            }
            _ => {}
        }
        rows += 1;
    }
    let d = width.unwrap_or(0);
    let array = Array2::from_shape_vec((rows, d), values)
        .map_err(|e| Error::DimensionMismatch(e.to_string()))?;
    FeatureMatrix::new(array)
}

/// Loads a labelled graph with features. The node count comes from the label
/// file; the feature file must have exactly that many rows.
pub fn load_graph(
    edge_path: &Path,
    feature_path: &Path,
    label_path: &Path,
) -> Result<(Graph, FeatureMatrix)> {
    let labels = read_labels(label_path)?;
    let n = labels.len();
    let features = read_features(feature_path)?;
    if features.n() != n {
        return Err(Error::DimensionMismatch(format!(
            "{} has {} rows but {} lists {} labels",
            feature_path.display(),
            features.n(),
            label_path.display(),
            n
        )));
    }
    let edges = read_edges(edge_path)?;
    let graph = Graph::from_edges(n, &edges, labels)?;
    Ok((graph, features))
}

/// Loads topology only; `n` is one past the largest id and all labels are 0.
pub fn load_edges(edge_path: &Path) -> Result<Graph> {
    let edges = read_edges(edge_path)?;
    let n = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
    Graph::from_edges(n, &edges, vec![0; n])
}

fn create(path: &Path) -> Result<BufWriter<fs::File>> {
    fs::File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

/// Writes the three files read by [`load_graph`].
pub fn write_graph_files(
    g: &Graph,
    x: &FeatureMatrix,
    edge_path: &Path,
    feature_path: &Path,
    label_path: &Path,
) -> Result<()> {
    let mut out = create(edge_path)?;
    for (u, v) in g.edges() {
        writeln!(out, "{u}\t{v}").map_err(|e| Error::io(edge_path, e))?;
    }
    out.flush().map_err(|e| Error::io(edge_path, e))?;

    let mut out = create(feature_path)?;
    for row in x.values().rows() {
        let line: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
        writeln!(out, "{}", line.join(",")).map_err(|e| Error::io(feature_path, e))?;
    }
    out.flush().map_err(|e| Error::io(feature_path, e))?;

    let mut out = create(label_path)?;
    for &c in g.labels() {
        writeln!(out, "{c}").map_err(|e| Error::io(label_path, e))?;
    }
    out.flush().map_err(|e| Error::io(label_path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn triangle() -> Graph {
        Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)], vec![0, 0, 1]).unwrap()
    }

    #[test]
    fn triangle_has_three_edges_of_degree_two() {
        let g = triangle();
        assert_eq!(g.n(), 3);
        assert_eq!(g.m(), 3);
        assert_eq!(g.degrees(), vec![2, 2, 2]);
    }

    #[test]
    fn duplicates_and_reversed_pairs_count_once() {
        let g = Graph::from_edges(2, &[(0, 1), (0, 1), (1, 0)], vec![0, 1]).unwrap();
        assert_eq!(g.m(), 1);
        assert_eq!(g.degrees().iter().sum::<usize>(), 2 * g.m());
    }

    #[test]
    fn self_loops_are_dropped() {
        let g = Graph::from_edges(2, &[(0, 0), (0, 1)], vec![0, 0]).unwrap();
        assert_eq!(g.m(), 1);
        assert!(g.neighbors(0).iter().all(|&v| v != 0));
    }

    #[test]
    fn out_of_range_id_is_rejected() {
        let err = Graph::from_edges(2, &[(0, 5)], vec![0, 0]).unwrap_err();
        assert!(matches!(err, Error::NodeOutOfRange { id: 5, n: 2 }));
    }

    #[test]
    fn homophily_edge_cases() {
        let same = Graph::from_edges(3, &[(0, 1), (1, 2)], vec![4, 4, 4]).unwrap();
        assert_eq!(same.homophily_ratio().unwrap(), 1.0);
        let path = Graph::from_edges(2, &[(0, 1)], vec![0, 1]).unwrap();
        assert_eq!(path.homophily_ratio().unwrap(), 0.0);
        let empty = Graph::from_edges(2, &[], vec![0, 1]).unwrap();
        assert!(empty.homophily_ratio().is_err());
    }

    #[test]
    fn label_energy_small_cases() {
        let path = Graph::from_edges(2, &[(0, 1)], vec![0, 1]).unwrap();
        assert_eq!(path.label_difference_energy(0, 1).unwrap(), 4.0);
        let pure = Graph::from_edges(3, &[(0, 1), (1, 2)], vec![0, 0, 0]).unwrap();
        assert!(pure.label_difference_energy(0, 1).is_err());
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)], vec![0, 0, 1, 1]).unwrap();
        // h = 2/3: 4 (1 - h) m = 4
        assert_eq!(g.label_difference_energy(0, 1).unwrap(), 4.0);
    }

    #[test]
    fn label_energy_matches_edge_scan_on_random_binary_graph() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 30;
        let mut edges = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                if rng.random_bool(0.2) {
                    edges.push((u, v));
                }
            }
        }
        let labels: Vec<usize> = (0..n).map(|_| rng.random_range(0..2)).collect();
        let g = Graph::from_edges(n, &edges, labels.clone()).unwrap();

        // brute force over the raw edge list, deduplicated by construction
        let cross = edges.iter().filter(|&&(u, v)| labels[u] != labels[v]).count();
        let m = edges.len();
        assert_eq!(g.m(), m);
        let h = g.homophily_ratio().unwrap();
        assert_eq!(g.label_difference_energy(0, 1).unwrap(), (4 * cross) as f64);
        assert!((4.0 * (1.0 - h) * m as f64 - (4 * cross) as f64).abs() < 1e-9);
    }

    #[test]
    fn splits_follow_rounding_policy() {
        let g = Graph::from_edges(10, &[], vec![0; 10]).unwrap();
        let s = make_splits(&g, 0, 1).unwrap();
        assert_eq!((s[0].train.len(), s[0].val.len(), s[0].test.len()), (6, 2, 2));
        assert_eq!(split_sizes(2708), (1624, 541, 543));
        let tiny = Graph::from_edges(4, &[], vec![0; 4]).unwrap();
        assert!(make_splits(&tiny, 0, 1).is_err());
    }

    #[test]
    fn splits_are_disjoint_and_deterministic() {
        let g = Graph::from_edges(57, &[], vec![0; 57]).unwrap();
        let a = make_splits(&g, 3, 4).unwrap();
        let b = make_splits(&g, 3, 4).unwrap();
        assert_eq!(a, b);
        assert_ne!(a[0], a[1]);
        for s in &a {
            let mut all: Vec<usize> = s.train.iter().chain(&s.val).chain(&s.test).copied().collect();
            all.sort_unstable();
            assert_eq!(all, (0..57).collect::<Vec<_>>());
        }
    }

    #[test]
    fn split_json_round_trip() {
        let s = SplitSet {
            seed: 9,
            train: vec![0, 2],
            val: vec![1],
            test: vec![3],
        };
        let json = s.to_json();
        assert_eq!(json, r#"{"seed":9,"train":[0,2],"val":[1],"test":[3]}"#);
        assert_eq!(SplitSet::from_json(&json).unwrap(), s);
    }

    #[test]
    fn bipartite_and_connectivity_checks() {
        let star = Graph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)], vec![0; 5]).unwrap();
        assert!(star.is_bipartite());
        assert!(matches!(star.validate(), Err(Error::Bipartite)));
        assert!(triangle().validate().is_ok());
        let split = Graph::from_edges(4, &[(0, 1)], vec![0; 4]).unwrap();
        assert!(matches!(split.validate(), Err(Error::Disconnected { components: 3 })));
        assert_eq!(split.largest_component(), vec![0, 1]);
    }

    #[test]
    fn induced_subgraph_relabels() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)], vec![0, 1, 2, 3]).unwrap();
        let sub = g.induced_subgraph(&[3, 2, 1]).unwrap();
        assert_eq!(sub.m(), 2);
        assert_eq!(sub.labels(), &[3, 2, 1]);
        assert_eq!(sub.neighbors(1), &[0, 2]);
    }

    #[test]
    fn file_round_trip_and_errors() {
        let dir = tempfile::tempdir().unwrap();
        let (e, f, l) = (
            dir.path().join("g.tsv"),
            dir.path().join("x.csv"),
            dir.path().join("y.txt"),
        );
        fs::write(&e, "# comment\n0\t1\n1 2\n0\t1\n0\t2\n").unwrap();
        fs::write(&f, "1,2\n3,4\n5,6\n").unwrap();
        fs::write(&l, "0\n1\n1\n").unwrap();
        let (g, x) = load_graph(&e, &f, &l).unwrap();
        assert_eq!((g.n(), g.m(), x.d()), (3, 3, 2));

        let dir2 = tempfile::tempdir().unwrap();
        let (e2, f2, l2) = (
            dir2.path().join("g.tsv"),
            dir2.path().join("x.csv"),
            dir2.path().join("y.txt"),
        );
        write_graph_files(&g, &x, &e2, &f2, &l2).unwrap();
        let (g2, x2) = load_graph(&e2, &f2, &l2).unwrap();
        assert_eq!(g, g2);
        assert_eq!(x, x2);

        fs::write(&e, "0\t7\n").unwrap();
        assert!(matches!(load_graph(&e, &f, &l), Err(Error::NodeOutOfRange { .. })));
        fs::write(&e, "0\t1\n").unwrap();
        fs::write(&f, "1,2\n3,abc\n5,6\n").unwrap();
        assert!(matches!(load_graph(&e, &f, &l), Err(Error::Parse { line: 2, .. })));
        fs::write(&f, "1,2\n3,4\n").unwrap();
        assert!(matches!(load_graph(&e, &f, &l), Err(Error::DimensionMismatch(_))));
        fs::write(&f, "1,2\n3,4\n5,6\n").unwrap();
        assert!(matches!(
            load_graph(&dir.path().join("missing"), &f, &l),
            Err(Error::Io { .. })
        ));
    }
}
