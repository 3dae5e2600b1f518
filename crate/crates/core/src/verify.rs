//! Randomized suites that check the spectral claims against the dense
//! oracle. Each suite returns a [`TheoremReport`]; a report with no
//! violations is a pass.

use std::fmt;
use std::str::FromStr;

use ndarray::{Array1, Array2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::datagen::{generate, random_connected_graph, SyntheticSpec};
use crate::error::{Error, Result};
use crate::graph::{FeatureMatrix, Graph};
use crate::linalg::{norm, span_residual};
use crate::model::{FilterModel, TrainConfig};
use crate::polybases::{coeffs_for, filter_by_recurrence, monomial_signal, BasisKind};
use crate::propagation::{
    build_krylov_basis, build_merged_basis, build_propagator, column_sequence, estimate_grade,
    KrylovBasis, TauPropagator,
};
use crate::spectral::{
    check_spectrum_monotonicity, information_loss, label_rayleigh_quotient, mixing_bound,
    verify_convergence,
};

/// Tolerance for the basis conversion and Krylov-span residuals.
pub const UNIFICATION_TOL: f64 = 1e-8;
/// Tolerance for merged vs. explicit multi-basis forward passes.
pub const MERGE_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Theorem {
    Spectrum,
    Convergence,
    InformationLoss,
    Unification,
    Merge,
}

impl Theorem {
    pub const ALL: [Theorem; 5] = [
        Theorem::Spectrum,
        Theorem::Convergence,
        Theorem::InformationLoss,
        Theorem::Unification,
        Theorem::Merge,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Theorem::Spectrum => "spectrum",
            Theorem::Convergence => "convergence",
            Theorem::InformationLoss => "information_loss",
            Theorem::Unification => "unification",
            Theorem::Merge => "merge",
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Theorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase().replace('-', "_");
        Theorem::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown theorem {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct VerifyConfig {
    /// Random graphs per suite (signals for the information-loss suite).
    pub graphs: usize,
    /// Graph sizes are drawn from `5..=max_n`.
    pub max_n: usize,
    pub seed: u64,
    pub tau_grid: Vec<f64>,
    pub eps: Vec<f64>,
    /// Polynomial degree for the unification suite and hops for the merge
    /// suite.
    pub hops: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            graphs: 20,
            max_n: 40,
            seed: 0,
            tau_grid: vec![0.25, 0.5, 0.75, 1.0, 1.25, 1.5],
            eps: vec![0.1, 0.01],
            hops: 8,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TheoremReport {
    pub theorem: String,
    pub graphs_tested: usize,
    pub violations: Vec<serde_json::Value>,
    pub max_residual: f64,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Random connected non-bipartite graph number `index` of a suite.
pub fn suite_graph(seed: u64, index: usize, max_n: usize) -> Result<(Graph, ChaCha8Rng)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(index as u64));
    let n = rng.random_range(5..=max_n.max(5));
    let p = rng.random_range(0.05..0.3);
    let g = random_connected_graph(n, p, &mut rng)?;
    Ok((g, rng))
}

fn random_signal(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

pub fn run_suite(theorem: Theorem, cfg: &VerifyConfig) -> Result<TheoremReport> {
    if cfg.graphs == 0 {
        return Err(Error::InvalidArgument("need at least one graph".into()));
    }
    let per_graph: Vec<(Vec<serde_json::Value>, f64)> = (0..cfg.graphs)
        .into_par_iter()
        .map(|i| match theorem {
            Theorem::Spectrum => spectrum_case(cfg, i),
            Theorem::Convergence => convergence_case(cfg, i),
            Theorem::InformationLoss => information_loss_case(cfg, i),
            Theorem::Unification => unification_case(cfg, i),
            Theorem::Merge => merge_case(cfg, i),
        })
        .collect::<Result<_>>()?;
    let mut violations = Vec::new();
    let mut max_residual: f64 = 0.0;
    for (v, r) in per_graph {
        violations.extend(v);
        max_residual = max_residual.max(r);
    }
    Ok(TheoremReport {
        theorem: theorem.name().to_string(),
        graphs_tested: cfg.graphs,
        violations,
        max_residual,
    })
}

pub fn run_all(cfg: &VerifyConfig) -> Result<Vec<TheoremReport>> {
    Theorem::ALL.iter().map(|&t| run_suite(t, cfg)).collect()
}

fn spectrum_case(cfg: &VerifyConfig, i: usize) -> Result<(Vec<serde_json::Value>, f64)> {
    let (g, _) = suite_graph(cfg.seed, i, cfg.max_n)?;
    let rep = check_spectrum_monotonicity(&g, &cfg.tau_grid)?;
    let v = rep
        .violations
        .iter()
        .map(|x| json!({"graph": i, "n": g.n(), "violation": x}))
        .collect();
    Ok((v, rep.max_excess))
}

/// Residual: distance / eps, so anything above 1 is a failure.
fn convergence_case(cfg: &VerifyConfig, i: usize) -> Result<(Vec<serde_json::Value>, f64)> {
    let (g, _) = suite_graph(cfg.seed, i, cfg.max_n)?;
    let mut v = Vec::new();
    let mut worst: f64 = 0.0;
    for &eps in &cfg.eps {
        let bound = mixing_bound(&g, 1.0, eps)?;
        let rep = verify_convergence(&g, 1.0, bound.k, eps)?;
        worst = worst.max(rep.max_relative_distance / eps);
        if !rep.passed {
            v.push(json!({
                "graph": i, "n": g.n(), "eps": eps, "k": bound.k,
                "lambda_star": bound.lambda_star,
                "max_relative_distance": rep.max_relative_distance,
            }));
        }
    }
    Ok((v, worst))
}

/// Residual: loss - bound (non-positive when the bound holds).
fn information_loss_case(cfg: &VerifyConfig, i: usize) -> Result<(Vec<serde_json::Value>, f64)> {
    let (g, mut rng) = suite_graph(cfg.seed, i, cfg.max_n)?;
    let tau = rng.random_range(0.05..=1.0);
    let p = build_propagator(&g, tau)?;
    let x = random_signal(&mut rng, g.n());
    let t = estimate_grade(&p, &x, g.n())?.min(g.n());
    let k = rng.random_range(1..=t);
    let xm = FeatureMatrix::new(Array2::from_shape_vec((g.n(), 1), x).expect("n x 1"))?;
    let basis = build_krylov_basis(&p, &xm, t)?;
    let rep = information_loss(&basis, t, k)?;
    let mut v = Vec::new();
    if !rep.passed {
        v.push(json!({"graph": i, "n": g.n(), "tau": tau, "t": t, "k": k,
                      "loss": rep.loss, "bound": rep.bound}));
    }
    Ok((v, rep.loss - rep.bound))
}

/// Operator standing in for each basis's variable: `L = I - P` for the
/// bases on `[0, 2]`, and `L - I = -P` for Chebyshev on `[-1, 1]`.
pub fn variable_operator(kind: BasisKind, p: &TauPropagator) -> impl Fn(&[f64]) -> Vec<f64> + '_ {
    move |v: &[f64]| {
        let pv = p.apply_vec(v);
        match kind {
            BasisKind::Chebyshev => pv.into_iter().map(|x| -x).collect(),
            _ => v.iter().zip(pv).map(|(a, b)| a - b).collect(),
        }
    }
}

/// `(span residual, conversion residual)` of one filtered signal, both
/// relative to the signal norm.
pub fn unification_residuals(
    kind: BasisKind,
    p: &TauPropagator,
    basis: &KrylovBasis,
    w: &[f64],
) -> Result<(f64, f64)> {
    let x = basis.block(0).column(0).to_vec();
    let coeffs = coeffs_for(kind, w.len() - 1)?;
    let op = variable_operator(kind, p);
    let filtered = filter_by_recurrence(kind, w, &op, &x)?;
    let theta = coeffs.monomial_weights(w)?;
    let via_theta = monomial_signal(&theta, &op, &x);
    let f = Array1::from(filtered);
    let scale = norm(f.view()).max(f64::MIN_POSITIVE);
    let conv = norm((&f - &Array1::from(via_theta)).view()) / scale;
    let krylov = column_sequence(basis, 0).reversed_axes();
    let span = span_residual(&krylov, f.view());
    Ok((span, conv))
}

fn unification_case(cfg: &VerifyConfig, i: usize) -> Result<(Vec<serde_json::Value>, f64)> {
    let (g, mut rng) = suite_graph(cfg.seed, i, cfg.max_n)?;
    let p = build_propagator(&g, 1.0)?;
    let x = random_signal(&mut rng, g.n());
    let xm = FeatureMatrix::new(Array2::from_shape_vec((g.n(), 1), x).expect("n x 1"))?;
    let basis = build_krylov_basis(&p, &xm, cfg.hops)?;
    let mut v = Vec::new();
    let mut worst: f64 = 0.0;
    for kind in [BasisKind::Chebyshev, BasisKind::Bernstein, BasisKind::Jacobi { a: 0.0, b: 0.0 }] {
        let w = random_signal(&mut rng, cfg.hops + 1);
        let (span, conv) = unification_residuals(kind, &p, &basis, &w)?;
        worst = worst.max(span).max(conv);
        if span >= UNIFICATION_TOL || conv >= UNIFICATION_TOL {
            v.push(json!({"graph": i, "n": g.n(), "basis": kind.to_string(),
                          "span_residual": span, "conversion_residual": conv}));
        }
    }
    Ok((v, worst))
}

/// Max absolute difference between the merged forward pass and the explicit
/// sum over `r` single-tau bases, for a random model.
pub fn merge_residual(g: &Graph, taus: &[f64], hops: usize, rng: &mut ChaCha8Rng) -> Result<f64> {
    let d = 3;
    let x = FeatureMatrix::new(Array2::from_shape_fn((g.n(), d), |_| rng.random_range(-1.0..1.0)))?;
    let merged = build_merged_basis(g, taus, &x, hops)?;
    let singles: Vec<KrylovBasis> = taus
        .iter()
        .map(|&t| build_krylov_basis(&build_propagator(g, t)?, &x, hops))
        .collect::<Result<_>>()?;
    let refs: Vec<&KrylovBasis> = singles.iter().collect();
    let cfg = TrainConfig {
        hidden: 16,
        seed: rng.random(),
        ..TrainConfig::default()
    };
    let mut model = FilterModel::new(hops, d, 3, &cfg)?;
    model.w = Array1::from_shape_fn(hops + 1, |_| rng.random_range(-1.0..1.0));
    let nodes: Vec<usize> = (0..g.n()).collect();
    let a = model.forward(&merged, &nodes)?;
    let b = model.forward_multi(&refs, &nodes)?;
    Ok((a - b).iter().fold(0.0f64, |m, v| m.max(v.abs())))
}

fn merge_case(cfg: &VerifyConfig, i: usize) -> Result<(Vec<serde_json::Value>, f64)> {
    let (g, mut rng) = suite_graph(cfg.seed, i, cfg.max_n)?;
    let mut v = Vec::new();
    let mut worst: f64 = 0.0;
    for r in [2usize, 3] {
        let taus: Vec<f64> = (0..r).map(|_| rng.random_range(0.2..1.1)).collect();
        let res = merge_residual(&g, &taus, cfg.hops, &mut rng)?;
        worst = worst.max(res);
        if res > MERGE_TOL {
            v.push(json!({"graph": i, "n": g.n(), "taus": taus, "residual": res}));
        }
    }
    Ok((v, worst))
}

/// Measured label Rayleigh quotient `sum (y_u - y_v)^2 / sum d_u y_u^2` on
/// binary planted-partition graphs, next to `2(1-h)` and `4(1-h)`. Reported,
/// not asserted.
pub fn rayleigh_diagnostic(seed: u64) -> Result<serde_json::Value> {
    let mut rows = Vec::new();
    for (i, h) in [0.1, 0.5, 0.9].into_iter().enumerate() {
        let spec = SyntheticSpec {
            n: 300,
            homophily: h,
            seed: seed.wrapping_add(i as u64),
            ..SyntheticSpec::default()
        };
        let (g, _) = generate(&spec)?;
        let h = g.homophily_ratio()?;
        let q = label_rayleigh_quotient(&g, 0, 1)?;
        rows.push(json!({"homophily": h, "quotient": q,
                         "two_one_minus_h": 2.0 * (1.0 - h), "four_one_minus_h": 4.0 * (1.0 - h)}));
    }
    Ok(json!({"diagnostic": "label_rayleigh_quotient", "samples": rows}))
}
