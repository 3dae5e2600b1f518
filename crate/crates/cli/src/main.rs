mod manifest;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use adaptkry::datagen::{generate, SyntheticSpec};
use adaptkry::graph::{load_edges, write_graph_files};
use adaptkry::model::{angles_csv, basis_angles, mean_std, run_splits, tau_sweep};
use adaptkry::polybases::coeffs_for;
use adaptkry::spectral::{eig_oracle, frequency_response_export, mixing_bound, response_csv};
use adaptkry::verify::{rayleigh_diagnostic, run_all, run_suite, Theorem, VerifyConfig};
use adaptkry::{
    build_merged_basis, load_graph, make_splits, BasisKind, FilterModel, KrylovBasis, SplitSet,
    TrainConfig,
};
use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use manifest::{manifest_path_for, RunManifest};

#[derive(Parser)]
#[command(name = "adaptkry", version, about = "Adaptive Krylov graph filters")]
struct Cli {
    /// Log filter (error, warn, info, debug, trace).
    #[arg(long, global = true, default_value = "warn")]
    log_level: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a planted-partition graph with Gaussian class features.
    Generate(GenerateArgs),
    /// Build and persist a (possibly multi-tau) Krylov basis.
    Prep(PrepArgs),
    /// Train filter models over random splits.
    Train(TrainArgs),
    /// Run the randomized spectral verification suites.
    Verify(VerifyArgs),
    /// Export eigenvalues, filter responses, basis angles or coefficients.
    Spectrum {
        #[command(subcommand)]
        what: SpectrumCommand,
    },
    /// Test accuracy across a grid of tau values.
    Sweep(SweepArgs),
}

#[derive(Subcommand)]
enum SpectrumCommand {
    Eigen(EigenArgs),
    Response(ResponseArgs),
    Angles(AnglesArgs),
    Coeffs(CoeffsArgs),
}

// Every argument struct serializes only the flags actually given, so it can
// be laid over a `--config` file and then over the defaults.

#[derive(Args, Serialize)]
struct GraphFiles {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    edges: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    features: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    labels: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct TrainOpts {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    lr: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    weight_decay: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    epochs: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    patience: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    hidden: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    dropout: Option<f64>,
    /// One weight per (hop, feature column) instead of one per hop.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    per_column_weights: Option<bool>,
}

#[derive(Args, Serialize)]
struct GenerateArgs {
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    num_classes: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    homophily: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    mean_degree: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    d: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    separation: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    noise: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    /// Directory receiving edges.tsv, features.csv, labels.txt.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    out_dir: Option<PathBuf>,
}

#[derive(Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
struct GenerateSettings {
    n: usize,
    num_classes: usize,
    homophily: f64,
    mean_degree: f64,
    d: usize,
    separation: f64,
    noise: f64,
    seed: Option<u64>,
    out_dir: Option<PathBuf>,
}

impl Default for GenerateSettings {
    fn default() -> Self {
        let s = SyntheticSpec::default();
        GenerateSettings {
            n: s.n,
            num_classes: s.num_classes,
            homophily: s.homophily,
            mean_degree: s.mean_degree,
            d: s.d,
            separation: s.separation,
            noise: s.noise,
            seed: None,
            out_dir: None,
        }
    }
}

#[derive(Args, Serialize)]
struct PrepArgs {
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    files: GraphFiles,
    /// Repeat to merge several propagation matrices into one basis.
    #[arg(long = "tau")]
    #[serde(skip_serializing_if = "Vec::is_empty")]
    tau: Vec<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    hops: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    out: Option<PathBuf>,
    /// Also print lambda* and the mixing bound for each tau.
    #[arg(long)]
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    spectral: bool,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    eps: Option<f64>,
}

#[derive(Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
struct PrepSettings {
    edges: Option<PathBuf>,
    features: Option<PathBuf>,
    labels: Option<PathBuf>,
    tau: Vec<f64>,
    hops: usize,
    out: Option<PathBuf>,
    spectral: bool,
    eps: f64,
}

impl Default for PrepSettings {
    fn default() -> Self {
        PrepSettings {
            edges: None,
            features: None,
            labels: None,
            tau: vec![1.0],
            hops: 10,
            out: None,
            spectral: false,
            eps: 0.1,
        }
    }
}

#[derive(Args, Serialize)]
struct TrainArgs {
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    files: GraphFiles,
    /// Basis file from `prep`; built on the fly from --tau/--hops if absent.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    basis: Option<PathBuf>,
    #[arg(long = "tau")]
    #[serde(skip_serializing_if = "Vec::is_empty")]
    tau: Vec<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    hops: Option<usize>,
    /// Number of random 60/20/20 splits.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    splits: Option<usize>,
    /// JSON list of split sets to use instead of random ones.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    splits_file: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[command(flatten)]
    #[serde(flatten)]
    train: TrainOpts,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    out_dir: Option<PathBuf>,
}

#[derive(Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
struct TrainSettings {
    edges: Option<PathBuf>,
    features: Option<PathBuf>,
    labels: Option<PathBuf>,
    basis: Option<PathBuf>,
    tau: Vec<f64>,
    hops: Option<usize>,
    splits: usize,
    splits_file: Option<PathBuf>,
    seed: Option<u64>,
    lr: f64,
    weight_decay: f64,
    epochs: usize,
    patience: usize,
    hidden: usize,
    dropout: f64,
    per_column_weights: bool,
    out_dir: Option<PathBuf>,
}

impl Default for TrainSettings {
    fn default() -> Self {
        let c = TrainConfig::default();
        TrainSettings {
            edges: None,
            features: None,
            labels: None,
            basis: None,
            tau: vec![1.0],
            hops: None,
            splits: 10,
            splits_file: None,
            seed: None,
            lr: c.lr,
            weight_decay: c.weight_decay,
            epochs: c.epochs,
            patience: c.patience,
            hidden: c.hidden,
            dropout: c.dropout,
            per_column_weights: c.per_column_weights,
            out_dir: None,
        }
    }
}

impl TrainSettings {
    fn config(&self, seed: u64) -> TrainConfig {
        TrainConfig {
            lr: self.lr,
            weight_decay: self.weight_decay,
            epochs: self.epochs,
            patience: self.patience,
            hidden: self.hidden,
            dropout: self.dropout,
            seed,
            per_column_weights: self.per_column_weights,
        }
    }
}

#[derive(Args, Serialize)]
struct VerifyArgs {
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    graphs: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    max_n: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    /// Run one suite: spectrum, convergence, information_loss, unification, merge.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    theorem: Option<String>,
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Vec::is_empty")]
    tau_grid: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Vec::is_empty")]
    eps: Vec<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    hops: Option<usize>,
    /// JSON report path.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    out: Option<PathBuf>,
}

#[derive(Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
struct VerifySettings {
    #[serde(flatten)]
    suite: VerifyConfig,
    seed: Option<u64>,
    theorem: Option<String>,
    out: PathBuf,
}

impl Default for VerifySettings {
    fn default() -> Self {
        VerifySettings {
            suite: VerifyConfig::default(),
            seed: None,
            theorem: None,
            out: PathBuf::from("verify_report.json"),
        }
    }
}

#[derive(Args, Serialize)]
struct EigenArgs {
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    edges: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Vec::is_empty")]
    tau_grid: Vec<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    out: Option<PathBuf>,
}

#[derive(Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
struct EigenSettings {
    edges: Option<PathBuf>,
    tau_grid: Vec<f64>,
    out: Option<PathBuf>,
}

impl Default for EigenSettings {
    fn default() -> Self {
        EigenSettings {
            edges: None,
            tau_grid: vec![0.25, 0.5, 0.75, 1.0],
            out: None,
        }
    }
}

#[derive(Args, Serialize)]
struct ResponseArgs {
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
    /// Model checkpoint; its hop weights define the filter.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    checkpoint: Option<PathBuf>,
    /// Explicit basis weights, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Vec::is_empty")]
    weights: Vec<f64>,
    /// monomial (gpr), chebyshev, bernstein, jacobi(a,b) or propagation.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    basis_kind: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    samples: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    out: Option<PathBuf>,
}

#[derive(Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
struct ResponseSettings {
    checkpoint: Option<PathBuf>,
    weights: Vec<f64>,
    basis_kind: Option<String>,
    samples: usize,
    out: Option<PathBuf>,
}

impl Default for ResponseSettings {
    fn default() -> Self {
        ResponseSettings {
            checkpoint: None,
            weights: Vec::new(),
            basis_kind: None,
            samples: 201,
            out: None,
        }
    }
}

#[derive(Args, Serialize)]
struct AnglesArgs {
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    basis: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    out: Option<PathBuf>,
}

#[derive(Deserialize, Serialize, Default)]
#[serde(default, deny_unknown_fields)]
struct AnglesSettings {
    basis: Option<PathBuf>,
    out: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct CoeffsArgs {
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    basis_kind: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    degree: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    out: Option<PathBuf>,
}

#[derive(Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
struct CoeffsSettings {
    basis_kind: String,
    degree: usize,
    out: Option<PathBuf>,
}

impl Default for CoeffsSettings {
    fn default() -> Self {
        CoeffsSettings {
            basis_kind: "chebyshev".into(),
            degree: 10,
            out: None,
        }
    }
}

#[derive(Args, Serialize)]
struct SweepArgs {
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    files: GraphFiles,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    hops: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Vec::is_empty")]
    tau_grid: Vec<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    splits: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[command(flatten)]
    #[serde(flatten)]
    train: TrainOpts,
    /// CSV "tau,mean,std".
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    out: Option<PathBuf>,
}

#[derive(Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
struct SweepSettings {
    edges: Option<PathBuf>,
    features: Option<PathBuf>,
    labels: Option<PathBuf>,
    hops: usize,
    tau_grid: Vec<f64>,
    splits: usize,
    seed: Option<u64>,
    lr: f64,
    weight_decay: f64,
    epochs: usize,
    patience: usize,
    hidden: usize,
    dropout: f64,
    per_column_weights: bool,
    out: Option<PathBuf>,
}

impl Default for SweepSettings {
    fn default() -> Self {
        let c = TrainConfig::default();
        SweepSettings {
            edges: None,
            features: None,
            labels: None,
            hops: 10,
            tau_grid: vec![0.1, 0.3, 0.5, 0.7, 0.9, 1.0],
            splits: 5,
            seed: None,
            lr: c.lr,
            weight_decay: c.weight_decay,
            epochs: c.epochs,
            patience: c.patience,
            hidden: c.hidden,
            dropout: c.dropout,
            per_column_weights: c.per_column_weights,
            out: None,
        }
    }
}

#[derive(Debug)]
enum CliError {
    Core(adaptkry::Error),
    Usage(String),
    Theorem(String),
}

impl From<adaptkry::Error> for CliError {
    fn from(e: adaptkry::Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(adaptkry::Error::Io { .. }) => 2,
            CliError::Core(e) if e.is_numeric() => 4,
            CliError::Core(_) | CliError::Usage(_) => 3,
            CliError::Theorem(_) => 5,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Theorem(t) => write!(f, "theorem violated: {t}"),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Defaults, overlaid by the `--config` file, overlaid by explicit flags.
fn resolve<S: DeserializeOwned + Serialize + Default>(
    flags: &impl Serialize,
    config: Option<&Path>,
) -> CliResult<(S, serde_json::Value)> {
    let mut merged = serde_json::to_value(S::default()).expect("settings serialize");
    let mut overlay = |layer: serde_json::Value| {
        if let (Some(base), serde_json::Value::Object(top)) = (merged.as_object_mut(), layer) {
            for (k, v) in top {
                base.insert(k, v);
            }
        }
    };
    if let Some(path) = config {
        let text = fs::read_to_string(path).map_err(|e| adaptkry::Error::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
        let layer: serde_json::Value = serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        if !layer.is_object() {
            return Err(CliError::Usage(format!("{}: expected a JSON object", path.display())));
        }
        overlay(layer);
    }
    overlay(serde_json::to_value(flags).expect("flags serialize"));
    let settings: S = serde_json::from_value(merged.clone())
        .map_err(|e| CliError::Usage(format!("configuration: {e}")))?;
    Ok((settings, merged))
}

fn need<T: Clone>(value: &Option<T>, flag: &str) -> CliResult<T> {
    value
        .clone()
        .ok_or_else(|| CliError::Usage(format!("missing required option --{flag}")))
}

fn write_text(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| {
        CliError::Core(adaptkry::Error::Io {
            path: path.to_path_buf(),
            source: e,
        })
    })
}

fn create_dir(path: &Path) -> CliResult<()> {
    fs::create_dir_all(path).map_err(|e| {
        CliError::Core(adaptkry::Error::Io {
            path: path.to_path_buf(),
            source: e,
        })
    })
}

fn warn_large_tau(taus: &[f64]) {
    for &t in taus.iter().filter(|&&t| t > 1.0) {
        log::warn!("tau = {t} > 1: propagated blocks may grow with the hop count");
        eprintln!("warning: tau = {t} > 1; propagated blocks may grow with the hop count");
    }
}

fn cmd_generate(args: GenerateArgs) -> CliResult<()> {
    let (s, snapshot) = resolve::<GenerateSettings>(&args, args.config.as_deref())?;
    let seed = need(&s.seed, "seed")?;
    let out_dir = need(&s.out_dir, "out-dir")?;
    let mut manifest = RunManifest::new("generate", snapshot, Some(seed));
    let spec = SyntheticSpec {
        n: s.n,
        num_classes: s.num_classes,
        homophily: s.homophily,
        mean_degree: s.mean_degree,
        d: s.d,
        separation: s.separation,
        noise: s.noise,
        seed,
    };
    let t = Instant::now();
    let (g, x) = generate(&spec)?;
    manifest.time("generate_seconds", t);
    create_dir(&out_dir)?;
    let (e, f, l) = (
        out_dir.join("edges.tsv"),
        out_dir.join("features.csv"),
        out_dir.join("labels.txt"),
    );
    write_graph_files(&g, &x, &e, &f, &l)?;
    for p in [&e, &f, &l] {
        manifest.output(p);
    }
    manifest.write(&out_dir.join("manifest.json"))?;
    println!(
        "generated n={} m={} d={} classes={} homophily={:.4}",
        g.n(),
        g.m(),
        x.d(),
        g.num_classes(),
        g.homophily_ratio()?
    );
    Ok(())
}

fn load_files(
    edges: &Option<PathBuf>,
    features: &Option<PathBuf>,
    labels: &Option<PathBuf>,
    manifest: &mut RunManifest,
) -> CliResult<(adaptkry::Graph, adaptkry::FeatureMatrix)> {
    let (e, f, l) = (need(edges, "edges")?, need(features, "features")?, need(labels, "labels")?);
    let t = Instant::now();
    let loaded = load_graph(&e, &f, &l)?;
    manifest.time("load_seconds", t);
    for p in [&e, &f, &l] {
        manifest.input(p)?;
    }
    Ok(loaded)
}

fn cmd_prep(args: PrepArgs) -> CliResult<()> {
    let (s, snapshot) = resolve::<PrepSettings>(&args, args.config.as_deref())?;
    let out = need(&s.out, "out")?;
    if s.tau.is_empty() {
        return Err(CliError::Usage("at least one --tau is required".into()));
    }
    let mut manifest = RunManifest::new("prep", snapshot, None);
    let (g, x) = load_files(&s.edges, &s.features, &s.labels, &mut manifest)?;
    warn_large_tau(&s.tau);
    let t = Instant::now();
    let basis = build_merged_basis(&g, &s.tau, &x, s.hops)?;
    manifest.time("propagate_seconds", t);
    basis.save(&out)?;
    manifest.output(&out);
    manifest.config["r"] = serde_json::json!(s.tau.len());
    println!(
        "basis n={} d={} K={} taus={:?} merged={}",
        basis.n(),
        basis.d(),
        basis.hops(),
        basis.taus(),
        basis.is_merged()
    );
    if s.spectral {
        for &tau in &s.tau {
            let b = mixing_bound(&g, tau, s.eps)?;
            println!(
                "tau={tau} lambda*={:.6} mixing_bound(eps={})={} (tau-degree variant {})",
                b.lambda_star, s.eps, b.k, b.k_tau_degrees
            );
        }
    }
    manifest.write(&manifest_path_for(&out))?;
    Ok(())
}

fn cmd_train(args: TrainArgs) -> CliResult<()> {
    let (s, snapshot) = resolve::<TrainSettings>(&args, args.config.as_deref())?;
    let seed = need(&s.seed, "seed")?;
    let out_dir = need(&s.out_dir, "out-dir")?;
    let mut manifest = RunManifest::new("train", snapshot, Some(seed));
    let (g, x) = load_files(&s.edges, &s.features, &s.labels, &mut manifest)?;

    let basis = match &s.basis {
        Some(path) => {
            manifest.input(path)?;
            let b = KrylovBasis::load(path)?;
            if let Some(k) = s.hops.filter(|&k| k != b.hops()) {
                return Err(CliError::Usage(format!(
                    "--hops {k} does not match the basis file (K = {})",
                    b.hops()
                )));
            }
            if b.n() != g.n() || b.d() != x.d() {
                return Err(adaptkry::Error::DimensionMismatch(format!(
                    "basis is {}x{}, graph files give {}x{}",
                    b.n(),
                    b.d(),
                    g.n(),
                    x.d()
                ))
                .into());
            }
            b
        }
        None => {
            warn_large_tau(&s.tau);
            build_merged_basis(&g, &s.tau, &x, s.hops.unwrap_or(10))?
        }
    };

    let splits: Vec<SplitSet> = match &s.splits_file {
        Some(path) => {
            manifest.input(path)?;
            let text = fs::read_to_string(path).map_err(|e| adaptkry::Error::Io {
                path: path.clone(),
                source: e,
            })?;
            serde_json::from_str(&text)
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
        }
        None => make_splits(&g, seed, s.splits)?,
    };
    if splits.is_empty() {
        return Err(CliError::Usage("no splits to train on".into()));
    }
    let cfg = s.config(seed);
    let t = Instant::now();
    let runs = run_splits(&basis, &g, &splits, &cfg)?;
    manifest.time("train_seconds", t);

    create_dir(&out_dir)?;
    let mut accs = Vec::new();
    for (outcome, model, history) in &runs {
        let m = out_dir.join(format!("model_split{}.bin", outcome.split));
        let h = out_dir.join(format!("history_split{}.csv", outcome.split));
        model.save(&m, Some(&TrainConfig { seed: outcome.seed, ..cfg.clone() }))?;
        history.write_csv(&h)?;
        manifest.output(&m);
        manifest.output(&h);
        println!(
            "split {} seed {}: test {:.4} (best val {:.4} at epoch {})",
            outcome.split, outcome.seed, outcome.test_acc, outcome.best_val_acc, outcome.best_epoch
        );
        accs.push(outcome.test_acc);
    }
    let (mean, std) = mean_std(&accs);
    let outcomes: Vec<_> = runs.iter().map(|(o, _, _)| o).collect();
    let summary = out_dir.join("summary.json");
    write_text(
        &summary,
        &serde_json::to_string_pretty(&serde_json::json!({
            "mean_test_acc": mean, "std_test_acc": std, "splits": outcomes,
            "taus": basis.taus(), "K": basis.hops(),
        }))
        .expect("summary serializes"),
    )?;
    manifest.output(&summary);
    manifest.write(&out_dir.join("manifest.json"))?;
    println!("test accuracy: {:.4} ± {:.4} over {} splits", mean, std, accs.len());
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> CliResult<()> {
    let (s, snapshot) = resolve::<VerifySettings>(&args, args.config.as_deref())?;
    let seed = need(&s.seed, "seed")?;
    let mut manifest = RunManifest::new("verify", snapshot, Some(seed));
    let cfg = VerifyConfig {
        seed,
        ..s.suite.clone()
    };
    let t = Instant::now();
    let reports = match &s.theorem {
        Some(name) => vec![run_suite(name.parse::<Theorem>()?, &cfg)?],
        None => run_all(&cfg)?,
    };
    manifest.time("verify_seconds", t);
    for r in &reports {
        println!("{}", serde_json::to_string(r).expect("report serializes"));
    }
    let diagnostic = if s.theorem.is_none() {
        let d = rayleigh_diagnostic(seed)?;
        println!("{d}");
        Some(d)
    } else {
        None
    };
    write_text(
        &s.out,
        &serde_json::to_string_pretty(&serde_json::json!({
            "reports": reports, "diagnostic": diagnostic,
        }))
        .expect("report serializes"),
    )?;
    manifest.output(&s.out);
    manifest.write(&manifest_path_for(&s.out))?;
    if let Some(failed) = reports.iter().find(|r| !r.passed()) {
        return Err(CliError::Theorem(failed.theorem.clone()));
    }
    Ok(())
}

fn cmd_eigen(args: EigenArgs) -> CliResult<()> {
    let (s, snapshot) = resolve::<EigenSettings>(&args, args.config.as_deref())?;
    let edges = need(&s.edges, "edges")?;
    let out = need(&s.out, "out")?;
    let mut manifest = RunManifest::new("spectrum eigen", snapshot, None);
    manifest.input(&edges)?;
    let g = load_edges(&edges)?;
    let mut csv = String::from("tau");
    for i in 1..=g.n() {
        csv.push_str(&format!(",lambda_{i}"));
    }
    csv.push('\n');
    for &tau in &s.tau_grid {
        let r = eig_oracle(&g, tau)?;
        csv.push_str(&format!("{tau:?}"));
        for v in r.eigenvalues.iter() {
            csv.push_str(&format!(",{v:?}"));
        }
        csv.push('\n');
    }
    write_text(&out, &csv)?;
    manifest.output(&out);
    manifest.write(&manifest_path_for(&out))?;
    Ok(())
}

fn cmd_response(args: ResponseArgs) -> CliResult<()> {
    let (s, snapshot) = resolve::<ResponseSettings>(&args, args.config.as_deref())?;
    let out = need(&s.out, "out")?;
    let mut manifest = RunManifest::new("spectrum response", snapshot, None);
    let (weights, default_kind) = match (&s.checkpoint, s.weights.is_empty()) {
        (Some(path), true) => {
            manifest.input(path)?;
            (FilterModel::load(path)?.hop_weights(), "propagation")
        }
        (None, false) => (s.weights.clone(), "monomial"),
        _ => {
            return Err(CliError::Usage(
                "give exactly one of --checkpoint or --weights".into(),
            ))
        }
    };
    let kind: BasisKind = s.basis_kind.as_deref().unwrap_or(default_kind).parse()?;
    let coeffs = coeffs_for(kind, weights.len() - 1)?;
    let rows = frequency_response_export(&weights, &coeffs, s.samples)?;
    write_text(&out, &response_csv(&rows))?;
    manifest.output(&out);
    manifest.write(&manifest_path_for(&out))?;
    Ok(())
}

fn cmd_angles(args: AnglesArgs) -> CliResult<()> {
    let (s, snapshot) = resolve::<AnglesSettings>(&args, args.config.as_deref())?;
    let basis_path = need(&s.basis, "basis")?;
    let out = need(&s.out, "out")?;
    let mut manifest = RunManifest::new("spectrum angles", snapshot, None);
    manifest.input(&basis_path)?;
    let basis = KrylovBasis::load(&basis_path)?;
    write_text(&out, &angles_csv(&basis_angles(&basis)?))?;
    manifest.output(&out);
    manifest.write(&manifest_path_for(&out))?;
    Ok(())
}

fn cmd_coeffs(args: CoeffsArgs) -> CliResult<()> {
    let (s, snapshot) = resolve::<CoeffsSettings>(&args, args.config.as_deref())?;
    let out = need(&s.out, "out")?;
    let mut manifest = RunManifest::new("spectrum coeffs", snapshot, None);
    let kind: BasisKind = s.basis_kind.parse()?;
    write_text(&out, &coeffs_for(kind, s.degree)?.to_csv())?;
    manifest.output(&out);
    manifest.write(&manifest_path_for(&out))?;
    Ok(())
}

fn cmd_sweep(args: SweepArgs) -> CliResult<()> {
    let (s, snapshot) = resolve::<SweepSettings>(&args, args.config.as_deref())?;
    let seed = need(&s.seed, "seed")?;
    let out = need(&s.out, "out")?;
    let mut manifest = RunManifest::new("sweep", snapshot, Some(seed));
    let (g, x) = load_files(&s.edges, &s.features, &s.labels, &mut manifest)?;
    warn_large_tau(&s.tau_grid);
    let splits = make_splits(&g, seed, s.splits)?;
    let cfg = TrainConfig {
        lr: s.lr,
        weight_decay: s.weight_decay,
        epochs: s.epochs,
        patience: s.patience,
        hidden: s.hidden,
        dropout: s.dropout,
        seed,
        per_column_weights: s.per_column_weights,
    };
    let t = Instant::now();
    let rows = tau_sweep(&g, &x, s.hops, &s.tau_grid, &cfg, &splits)?;
    manifest.time("sweep_seconds", t);
    let mut csv = String::from("tau,mean,std\n");
    for r in &rows {
        csv.push_str(&format!("{:?},{:?},{:?}\n", r.tau, r.mean, r.std));
        println!("tau {:.3}: {:.4} ± {:.4}", r.tau, r.mean, r.std);
    }
    write_text(&out, &csv)?;
    manifest.output(&out);
    manifest.write(&manifest_path_for(&out))?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    env_logger::Builder::new()
        .parse_filters(&cli.log_level)
        .init();
    let result = match cli.command {
        Command::Generate(a) => cmd_generate(a),
        Command::Prep(a) => cmd_prep(a),
        Command::Train(a) => cmd_train(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Spectrum { what } => match what {
            SpectrumCommand::Eigen(a) => cmd_eigen(a),
            SpectrumCommand::Response(a) => cmd_response(a),
            SpectrumCommand::Angles(a) => cmd_angles(a),
            SpectrumCommand::Coeffs(a) => cmd_coeffs(a),
        },
        Command::Sweep(a) => cmd_sweep(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_classes_map_to_exit_codes() {
        let io = adaptkry::Error::Io {
            path: "x".into(),
            source: std::io::Error::other("boom"),
        };
        assert_eq!(CliError::from(io).exit_code(), 2);
        assert_eq!(CliError::Usage("bad".into()).exit_code(), 3);
        assert_eq!(CliError::from(adaptkry::Error::Bipartite).exit_code(), 3);
        assert_eq!(CliError::from(adaptkry::Error::NonFiniteLoss { epoch: 3 }).exit_code(), 4);
        assert_eq!(CliError::Theorem("merge".into()).exit_code(), 5);
        assert_eq!(CliError::Theorem("merge".into()).to_string(), "theorem violated: merge");
    }

    #[test]
    fn flags_override_defaults() {
        let flags = CoeffsArgs {
            config: None,
            basis_kind: None,
            degree: Some(4),
            out: None,
        };
        let (s, _) = resolve::<CoeffsSettings>(&flags, None).unwrap();
        assert_eq!((s.basis_kind.as_str(), s.degree), ("chebyshev", 4));
    }
}
