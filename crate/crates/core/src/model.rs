//! Decoupled filter model: per-hop weights on fixed Krylov blocks, followed by
//! a two-layer ReLU MLP, trained with Adam and early stopping.
//!
//! The first layer is evaluated hop by hop,
//! `H = sum_l (F^(l) * w_l) W1_l + b1`, where `W1_l` is the slice of rows of
//! `W1` facing hop `l`, so the concatenated `n x (K+1)d` input is never
//! materialized.

use std::fs;
use std::io::Write;
use std::path::Path;

use ndarray::{s, Array1, Array2, ArrayView2, Axis};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::container;
use crate::error::{Error, Result};
use crate::graph::{FeatureMatrix, Graph, SplitSet};
use crate::propagation::{build_merged_basis, KrylovBasis};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    pub lr: f64,
    /// L2 penalty on the MLP parameters (not on the hop weights).
    pub weight_decay: f64,
    pub epochs: usize,
    /// Stop after this many epochs without a new best validation accuracy.
    pub patience: usize,
    pub hidden: usize,
    /// Drop probability on the hidden layer.
    pub dropout: f64,
    pub seed: u64,
    /// One weight per (hop, column) instead of one per hop.
    pub per_column_weights: bool,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            lr: 0.01,
            weight_decay: 5e-4,
            epochs: 1000,
            patience: 200,
            hidden: 64,
            dropout: 0.5,
            seed: 0,
            per_column_weights: false,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.lr > 0.0 && self.lr.is_finite()) {
            return Err(Error::InvalidArgument(format!("learning rate must be positive, got {}", self.lr)));
        }
        if self.epochs < 1 {
            return Err(Error::InvalidArgument("epochs must be at least 1".into()));
        }
        if self.hidden < 1 {
            return Err(Error::InvalidArgument("hidden dimension must be at least 1".into()));
        }
        if !(0.0..1.0).contains(&self.dropout) {
            return Err(Error::InvalidArgument(format!("dropout must lie in [0, 1), got {}", self.dropout)));
        }
        if !(self.weight_decay >= 0.0 && self.weight_decay.is_finite()) {
            return Err(Error::InvalidArgument("weight decay must be non-negative".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Mlp {
    /// `(K+1)d x hidden`.
    pub w1: Array2<f64>,
    pub b1: Array1<f64>,
    /// `hidden x C`.
    pub w2: Array2<f64>,
    pub b2: Array1<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FilterModel {
    k: usize,
    d: usize,
    classes: usize,
    per_column: bool,
    dropout: f64,
    seed: u64,
    /// Hop weights: `K+1` scalars, or `(K+1) x d` row-major when per-column.
    pub w: Array1<f64>,
    pub mlp: Mlp,
}

/// Gradients with the same layout as the parameters.
#[derive(Clone, Debug)]
pub struct Gradients {
    pub w: Array1<f64>,
    pub w1: Array2<f64>,
    pub b1: Array1<f64>,
    pub w2: Array2<f64>,
    pub b2: Array1<f64>,
}

#[derive(Serialize, Deserialize)]
struct CheckpointHeader {
    #[serde(rename = "K")]
    k: usize,
    d: usize,
    classes: usize,
    hidden: usize,
    per_column: bool,
    dropout: f64,
    seed: u64,
    config: Option<TrainConfig>,
}

fn uniform(rng: &mut ChaCha8Rng, shape: (usize, usize), bound: f64) -> Array2<f64> {
    Array2::from_shape_fn(shape, |_| rng.random_range(-bound..=bound))
}

impl FilterModel {
    /// Fresh model: hop weights `1/(K+1)`, MLP weights and biases uniform in
    /// `+-1/sqrt(fan_in)`, all drawn from `cfg.seed`.
    pub fn new(k: usize, d: usize, classes: usize, cfg: &TrainConfig) -> Result<Self> {
        cfg.validate()?;
        if d == 0 || classes == 0 {
            return Err(Error::InvalidArgument("feature dimension and class count must be positive".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let fan_in = (k + 1) * d;
        let b = 1.0 / (fan_in as f64).sqrt();
        let w1 = uniform(&mut rng, (fan_in, cfg.hidden), b);
        let b1 = uniform(&mut rng, (1, cfg.hidden), b).remove_axis(Axis(0));
        let b = 1.0 / (cfg.hidden as f64).sqrt();
        let w2 = uniform(&mut rng, (cfg.hidden, classes), b);
        let b2 = uniform(&mut rng, (1, classes), b).remove_axis(Axis(0));
        let len = if cfg.per_column_weights { (k + 1) * d } else { k + 1 };
        Ok(FilterModel {
            k,
            d,
            classes,
            per_column: cfg.per_column_weights,
            dropout: cfg.dropout,
            seed: cfg.seed,
            w: Array1::from_elem(len, 1.0 / (k + 1) as f64),
            mlp: Mlp { w1, b1, w2, b2 },
        })
    }

    pub fn hops(&self) -> usize {
        self.k
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn classes(&self) -> usize {
        self.classes
    }

    pub fn hidden(&self) -> usize {
        self.mlp.b1.len()
    }

    pub fn per_column(&self) -> bool {
        self.per_column
    }

    /// One scalar per hop (the column mean for per-column weights), for
    /// reading the model as a polynomial filter.
    pub fn hop_weights(&self) -> Vec<f64> {
        if self.per_column {
            self.w
                .view()
                .into_shape_with_order((self.k + 1, self.d))
                .expect("per-column weights are (K+1) x d")
                .mean_axis(Axis(1))
                .expect("d > 0")
                .to_vec()
        } else {
            self.w.to_vec()
        }
    }

    fn check_basis(&self, basis: &KrylovBasis) -> Result<()> {
        if basis.hops() != self.k || basis.d() != self.d {
            return Err(Error::DimensionMismatch(format!(
                "model expects K={}, d={}; basis has K={}, d={}",
                self.k,
                self.d,
                basis.hops(),
                basis.d()
            )));
        }
        Ok(())
    }

    fn check_nodes(&self, basis: &KrylovBasis, nodes: &[usize]) -> Result<()> {
        if let Some(&bad) = nodes.iter().find(|&&u| u >= basis.n()) {
            return Err(Error::NodeOutOfRange { id: bad, n: basis.n() });
        }
        Ok(())
    }

    /// Hop `l` rows after the element-wise weight.
    fn weighted(&self, f: &Array2<f64>, l: usize) -> Array2<f64> {
        if self.per_column {
            let wl = self.w.slice(s![l * self.d..(l + 1) * self.d]);
            f * &wl.insert_axis(Axis(0))
        } else {
            f * self.w[l]
        }
    }

    fn w1_slice(&self, l: usize) -> ArrayView2<'_, f64> {
        self.mlp.w1.slice(s![l * self.d..(l + 1) * self.d, ..])
    }

    fn pre_activation(&self, gathered: &[Array2<f64>]) -> Array2<f64> {
        let mut h = Array2::zeros((gathered[0].nrows(), self.hidden()));
        for (l, f) in gathered.iter().enumerate() {
            h += &self.weighted(f, l).dot(&self.w1_slice(l));
        }
        h + self.mlp.b1.view().insert_axis(Axis(0))
    }

    fn head(&self, pre: Array2<f64>) -> Array2<f64> {
        let h = pre.mapv(|v| v.max(0.0));
        h.dot(&self.mlp.w2) + self.mlp.b2.view().insert_axis(Axis(0))
    }

    /// Class scores (logits) for `nodes`, without dropout.
    pub fn forward(&self, basis: &KrylovBasis, nodes: &[usize]) -> Result<Array2<f64>> {
        self.check_basis(basis)?;
        self.check_nodes(basis, nodes)?;
        if nodes.is_empty() {
            return Ok(Array2::zeros((0, self.classes)));
        }
        let gathered = gather(basis, nodes);
        let scores = self.head(self.pre_activation(&gathered));
        if scores.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("class scores".into()));
        }
        Ok(scores)
    }

    /// Forward pass over several single-tau bases whose weighted hop inputs
    /// are summed at the first layer: `MLP(sum_i Z_i * w)`. Equals
    /// [`forward`](Self::forward) on the merged basis up to roundoff.
    pub fn forward_multi(&self, bases: &[&KrylovBasis], nodes: &[usize]) -> Result<Array2<f64>> {
        if bases.is_empty() {
            return Err(Error::InvalidArgument("no bases given".into()));
        }
        for b in bases {
            self.check_basis(b)?;
            self.check_nodes(b, nodes)?;
        }
        if nodes.is_empty() {
            return Ok(Array2::zeros((0, self.classes)));
        }
        let mut pre = Array2::zeros((nodes.len(), self.hidden()));
        for b in bases {
            let gathered = gather(b, nodes);
            for (l, f) in gathered.iter().enumerate() {
                pre += &self.weighted(f, l).dot(&self.w1_slice(l));
            }
        }
        pre += &self.mlp.b1.view().insert_axis(Axis(0));
        Ok(self.head(pre))
    }

    /// Mean cross-entropy on `nodes` plus `weight_decay / 2` times the squared
    /// norm of the MLP parameters, and its gradient. No dropout.
    pub fn loss_and_grad(
        &self,
        basis: &KrylovBasis,
        nodes: &[usize],
        labels: &[usize],
        weight_decay: f64,
    ) -> Result<(f64, Gradients)> {
        self.check_basis(basis)?;
        self.check_nodes(basis, nodes)?;
        if nodes.is_empty() || labels.len() != nodes.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} nodes with {} labels",
                nodes.len(),
                labels.len()
            )));
        }
        let gathered = gather(basis, nodes);
        let (ce, mut grads) = self.backprop(&gathered, labels, None)?;
        let penalty = self.add_weight_decay(&mut grads, weight_decay);
        Ok((ce + penalty, grads))
    }

    fn add_weight_decay(&self, g: &mut Gradients, wd: f64) -> f64 {
        if wd == 0.0 {
            return 0.0;
        }
        g.w1.scaled_add(wd, &self.mlp.w1);
        g.b1.scaled_add(wd, &self.mlp.b1);
        g.w2.scaled_add(wd, &self.mlp.w2);
        g.b2.scaled_add(wd, &self.mlp.b2);
        let sq = |a: &[f64]| a.iter().map(|v| v * v).sum::<f64>();
        0.5 * wd
            * (sq(self.mlp.w1.as_slice().unwrap())
                + sq(self.mlp.b1.as_slice().unwrap())
                + sq(self.mlp.w2.as_slice().unwrap())
                + sq(self.mlp.b2.as_slice().unwrap()))
    }

    /// Cross-entropy and gradients; `mask` (already scaled by `1/(1-p)`)
    /// multiplies the hidden activations when given.
    fn backprop(
        &self,
        gathered: &[Array2<f64>],
        labels: &[usize],
        mask: Option<&Array2<f64>>,
    ) -> Result<(f64, Gradients)> {
        let b = labels.len();
        let pre = self.pre_activation(gathered);
        let mut h = pre.mapv(|v| v.max(0.0));
        if let Some(m) = mask {
            h *= m;
        }
        let scores = h.dot(&self.mlp.w2) + self.mlp.b2.view().insert_axis(Axis(0));

        let mut ds = Array2::zeros(scores.raw_dim());
        let mut ce = 0.0;
        for (i, (row, &y)) in scores.rows().into_iter().zip(labels).enumerate() {
            if y >= self.classes {
                return Err(Error::InvalidArgument(format!(
                    "label {y} out of range for {} classes",
                    self.classes
                )));
            }
            let max = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let sum: f64 = row.iter().map(|v| (v - max).exp()).sum();
            let log_z = max + sum.ln();
            ce += log_z - row[y];
            for c in 0..self.classes {
                ds[[i, c]] = (row[c] - log_z).exp() / b as f64;
            }
            ds[[i, y]] -= 1.0 / b as f64;
        }
        ce /= b as f64;

        let gw2 = h.t().dot(&ds);
        let gb2 = ds.sum_axis(Axis(0));
        let mut dh = ds.dot(&self.mlp.w2.t());
        if let Some(m) = mask {
            dh *= m;
        }
        ndarray::Zip::from(&mut dh).and(&pre).for_each(|g, &p| {
            if p <= 0.0 {
                *g = 0.0;
            }
        });
        let gb1 = dh.sum_axis(Axis(0));
        let mut gw1 = Array2::zeros(self.mlp.w1.raw_dim());
        let mut gw = Array1::zeros(self.w.len());
        for (l, f) in gathered.iter().enumerate() {
            let z = self.weighted(f, l);
            gw1.slice_mut(s![l * self.d..(l + 1) * self.d, ..])
                .assign(&z.t().dot(&dh));
            let dz = dh.dot(&self.w1_slice(l).t());
            let prod = &dz * f;
            if self.per_column {
                gw.slice_mut(s![l * self.d..(l + 1) * self.d])
                    .assign(&prod.sum_axis(Axis(0)));
            } else {
                gw[l] = prod.sum();
            }
        }
        Ok((
            ce,
            Gradients {
                w: gw,
                w1: gw1,
                b1: gb1,
                w2: gw2,
                b2: gb2,
            },
        ))
    }

    fn params_mut(&mut self) -> [&mut [f64]; 5] {
        [
            self.w.as_slice_mut().unwrap(),
            self.mlp.w1.as_slice_mut().unwrap(),
            self.mlp.b1.as_slice_mut().unwrap(),
            self.mlp.w2.as_slice_mut().unwrap(),
            self.mlp.b2.as_slice_mut().unwrap(),
        ]
    }

    pub fn save(&self, path: &Path, config: Option<&TrainConfig>) -> Result<()> {
        let header = CheckpointHeader {
            k: self.k,
            d: self.d,
            classes: self.classes,
            hidden: self.hidden(),
            per_column: self.per_column,
            dropout: self.dropout,
            seed: self.seed,
            config: config.cloned(),
        };
        container::write(
            path,
            &header,
            &[
                self.w.as_slice().unwrap(),
                self.mlp.w1.as_slice().unwrap(),
                self.mlp.b1.as_slice().unwrap(),
                self.mlp.w2.as_slice().unwrap(),
                self.mlp.b2.as_slice().unwrap(),
            ],
        )
    }

    pub fn load(path: &Path) -> Result<Self> {
        let (h, v): (CheckpointHeader, Vec<f64>) = container::read(path)?;
        let wl = if h.per_column { (h.k + 1) * h.d } else { h.k + 1 };
        let sizes = [wl, (h.k + 1) * h.d * h.hidden, h.hidden, h.hidden * h.classes, h.classes];
        if v.len() != sizes.iter().sum::<usize>() {
            return Err(Error::Format(format!(
                "{}: checkpoint holds {} values, header implies {}",
                path.display(),
                v.len(),
                sizes.iter().sum::<usize>()
            )));
        }
        let mut parts = Vec::new();
        let mut at = 0;
        for s in sizes {
            parts.push(v[at..at + s].to_vec());
            at += s;
        }
        let fan_in = (h.k + 1) * h.d;
        let shape = |r, c, data: Vec<f64>| Array2::from_shape_vec((r, c), data).expect("size checked");
        let mut it = parts.into_iter();
        let w = Array1::from(it.next().unwrap());
        let w1 = shape(fan_in, h.hidden, it.next().unwrap());
        let b1 = Array1::from(it.next().unwrap());
        let w2 = shape(h.hidden, h.classes, it.next().unwrap());
        let b2 = Array1::from(it.next().unwrap());
        Ok(FilterModel {
            k: h.k,
            d: h.d,
            classes: h.classes,
            per_column: h.per_column,
            dropout: h.dropout,
            seed: h.seed,
            w,
            mlp: Mlp { w1, b1, w2, b2 },
        })
    }
}

fn gather(basis: &KrylovBasis, nodes: &[usize]) -> Vec<Array2<f64>> {
    basis.blocks().iter().map(|b| b.select(Axis(0), nodes)).collect()
}

/// Adam with bias correction and L2 weight decay folded into the gradient.
struct Adam {
    lr: f64,
    t: i32,
    m: Vec<Vec<f64>>,
    v: Vec<Vec<f64>>,
}

const BETA1: f64 = 0.9;
const BETA2: f64 = 0.999;
const ADAM_EPS: f64 = 1e-8;

impl Adam {
    fn new(lr: f64, sizes: &[usize]) -> Self {
        Adam {
            lr,
            t: 0,
            m: sizes.iter().map(|&s| vec![0.0; s]).collect(),
            v: sizes.iter().map(|&s| vec![0.0; s]).collect(),
        }
    }

    fn step(&mut self, params: [&mut [f64]; 5], grads: [&[f64]; 5]) {
        self.t += 1;
        let c1 = 1.0 - BETA1.powi(self.t);
        let c2 = 1.0 - BETA2.powi(self.t);
        for (i, (p, g)) in params.into_iter().zip(grads).enumerate() {
            for j in 0..p.len() {
                let m = &mut self.m[i][j];
                let v = &mut self.v[i][j];
                *m = BETA1 * *m + (1.0 - BETA1) * g[j];
                *v = BETA2 * *v + (1.0 - BETA2) * g[j] * g[j];
                p[j] -= self.lr * (*m / c1) / ((*v / c2).sqrt() + ADAM_EPS);
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EpochRecord {
    pub epoch: usize,
    pub train_loss: f64,
    pub val_acc: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct History {
    pub epochs: Vec<EpochRecord>,
    pub best_epoch: usize,
    pub best_val_acc: f64,
}

impl History {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("epoch,train_loss,val_acc\n");
        for r in &self.epochs {
            out.push_str(&format!("{},{:?},{:?}\n", r.epoch, r.train_loss, r.val_acc));
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut f = fs::File::create(path).map_err(|e| Error::io(path, e))?;
        f.write_all(self.to_csv().as_bytes()).map_err(|e| Error::io(path, e))
    }
}

fn labels_of(g: &Graph, nodes: &[usize]) -> Vec<usize> {
    nodes.iter().map(|&u| g.labels()[u]).collect()
}

/// Full-batch training on `split.train`, early-stopped on `split.val`.
/// Returns the parameters from the epoch with the best validation accuracy
/// (earliest on ties).
pub fn train(
    mut model: FilterModel,
    basis: &KrylovBasis,
    g: &Graph,
    split: &SplitSet,
    cfg: &TrainConfig,
) -> Result<(FilterModel, History)> {
    cfg.validate()?;
    model.check_basis(basis)?;
    if basis.n() != g.n() {
        return Err(Error::DimensionMismatch(format!(
            "basis has {} rows, graph has {} nodes",
            basis.n(),
            g.n()
        )));
    }
    if split.train.is_empty() || split.val.is_empty() {
        return Err(Error::InvalidArgument("train and validation sets must be non-empty".into()));
    }
    model.check_nodes(basis, &split.train)?;
    model.check_nodes(basis, &split.val)?;
    let train_labels = labels_of(g, &split.train);
    let val_labels = labels_of(g, &split.val);
    let train_blocks = gather(basis, &split.train);
    let val_blocks = gather(basis, &split.val);

    let mut dropout_rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    dropout_rng.set_stream(1);
    let keep = 1.0 - cfg.dropout;

    let sizes = [
        model.w.len(),
        model.mlp.w1.len(),
        model.mlp.b1.len(),
        model.mlp.w2.len(),
        model.mlp.b2.len(),
    ];
    let mut adam = Adam::new(cfg.lr, &sizes);
    let mut history = History {
        best_val_acc: -1.0,
        ..History::default()
    };
    let mut best = model.clone();
    let mut since_best = 0;

    for epoch in 0..cfg.epochs {
        let mask = (cfg.dropout > 0.0).then(|| {
            Array2::from_shape_fn((split.train.len(), model.hidden()), |_| {
                if dropout_rng.random::<f64>() < keep {
                    1.0 / keep
                } else {
                    0.0
                }
            })
        });
        let (ce, mut grads) = model.backprop(&train_blocks, &train_labels, mask.as_ref())?;
        if !ce.is_finite() {
            return Err(Error::NonFiniteLoss { epoch });
        }
        model.add_weight_decay(&mut grads, cfg.weight_decay);
        adam.step(
            model.params_mut(),
            [
                grads.w.as_slice().unwrap(),
                grads.w1.as_slice().unwrap(),
                grads.b1.as_slice().unwrap(),
                grads.w2.as_slice().unwrap(),
                grads.b2.as_slice().unwrap(),
            ],
        );

        let scores = model.head(model.pre_activation(&val_blocks));
        if scores.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteLoss { epoch });
        }
        let val_acc = accuracy(&scores, &val_labels);
        history.epochs.push(EpochRecord {
            epoch,
            train_loss: ce,
            val_acc,
        });
        if val_acc > history.best_val_acc {
            history.best_val_acc = val_acc;
            history.best_epoch = epoch;
            best = model.clone();
            since_best = 0;
        } else {
            since_best += 1;
            if since_best >= cfg.patience {
                break;
            }
        }
    }
    Ok((best, history))
}

/// Row-wise argmax (lowest index on ties) compared with `labels`.
pub fn accuracy(scores: &Array2<f64>, labels: &[usize]) -> f64 {
    let correct = scores
        .rows()
        .into_iter()
        .zip(labels)
        .filter(|(row, &y)| {
            let mut best = 0;
            for c in 1..row.len() {
                if row[c] > row[best] {
                    best = c;
                }
            }
            best == y
        })
        .count();
    correct as f64 / labels.len() as f64
}

pub fn evaluate(model: &FilterModel, basis: &KrylovBasis, nodes: &[usize], labels: &[usize]) -> Result<f64> {
    if nodes.is_empty() {
        return Err(Error::InvalidArgument("cannot evaluate on an empty node list".into()));
    }
    if labels.len() != nodes.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} nodes with {} labels",
            nodes.len(),
            labels.len()
        )));
    }
    let scores = model.forward(basis, nodes)?;
    Ok(accuracy(&scores, labels))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SplitOutcome {
    pub split: usize,
    pub seed: u64,
    pub test_acc: f64,
    pub best_val_acc: f64,
    pub best_epoch: usize,
}

/// Trains one fresh model per split (seed `cfg.seed + index`) and reports
/// test accuracy. Runs may execute in parallel; output is in split order.
pub fn run_splits(
    basis: &KrylovBasis,
    g: &Graph,
    splits: &[SplitSet],
    cfg: &TrainConfig,
) -> Result<Vec<(SplitOutcome, FilterModel, History)>> {
    splits
        .par_iter()
        .enumerate()
        .map(|(i, split)| {
            let run_cfg = TrainConfig {
                seed: cfg.seed + i as u64,
                ..cfg.clone()
            };
            let model = FilterModel::new(basis.hops(), basis.d(), g.num_classes(), &run_cfg)?;
            let (model, history) = train(model, basis, g, split, &run_cfg)?;
            let test_acc = evaluate(&model, basis, &split.test, &labels_of(g, &split.test))?;
            Ok((
                SplitOutcome {
                    split: i,
                    seed: run_cfg.seed,
                    test_acc,
                    best_val_acc: history.best_val_acc,
                    best_epoch: history.best_epoch,
                },
                model,
                history,
            ))
        })
        .collect()
}

/// Mean and sample standard deviation.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub tau: f64,
    pub mean: f64,
    pub std: f64,
    pub accuracies: Vec<f64>,
}

/// Test accuracy per `tau`, rebuilding the basis each time and reusing the
/// same splits and seeds.
pub fn tau_sweep(
    g: &Graph,
    x: &FeatureMatrix,
    k: usize,
    tau_grid: &[f64],
    cfg: &TrainConfig,
    splits: &[SplitSet],
) -> Result<Vec<SweepRow>> {
    if tau_grid.is_empty() {
        return Err(Error::InvalidArgument("empty tau grid".into()));
    }
    if splits.is_empty() {
        return Err(Error::InvalidArgument("no splits given".into()));
    }
    let mut rows = Vec::with_capacity(tau_grid.len());
    for &tau in tau_grid {
        let basis = build_merged_basis(g, &[tau], x, k)?;
        let accuracies: Vec<f64> = run_splits(&basis, g, splits, cfg)?
            .into_iter()
            .map(|(o, _, _)| o.test_acc)
            .collect();
        let (mean, std) = mean_std(&accuracies);
        log::info!("tau {tau}: {:.4} +- {:.4}", mean, std);
        rows.push(SweepRow {
            tau,
            mean,
            std,
            accuracies,
        });
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AngleReport {
    /// Mean angle in degrees between hop `l-1` and hop `l`, for `l = 1..=K`.
    pub angles: Vec<f64>,
    /// Number of zero-norm columns skipped at each hop.
    pub skipped: Vec<usize>,
}

pub fn basis_angles(basis: &KrylovBasis) -> Result<AngleReport> {
    let mut angles = Vec::with_capacity(basis.hops());
    let mut skipped = Vec::with_capacity(basis.hops());
    for l in 1..=basis.hops() {
        let (a, b) = (basis.block(l - 1), basis.block(l));
        let mut sum = 0.0;
        let mut used = 0usize;
        for j in 0..basis.d() {
            let (ca, cb) = (a.column(j), b.column(j));
            let na = ca.dot(&ca).sqrt();
            let nb = cb.dot(&cb).sqrt();
            if na == 0.0 || nb == 0.0 {
                continue;
            }
            let cos = (ca.dot(&cb) / (na * nb)).clamp(-1.0, 1.0);
            sum += cos.acos().to_degrees();
            used += 1;
        }
        if used == 0 {
            return Err(Error::InvalidArgument(format!("every column is zero at hop {l}")));
        }
        angles.push(sum / used as f64);
        skipped.push(basis.d() - used);
    }
    Ok(AngleReport { angles, skipped })
}

pub fn angles_csv(report: &AngleReport) -> String {
    let mut out = String::from("hop,angle_deg,skipped\n");
    for (i, (a, s)) in report.angles.iter().zip(&report.skipped).enumerate() {
        out.push_str(&format!("{},{:?},{}\n", i + 1, a, s));
    }
    out
}
