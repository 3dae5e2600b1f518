//! Dense spectral ground truth for `L_tau = I - P_tau` and the quantitative
//! checks built on it: eigenvalue monotonicity in `tau`, the mixing-time
//! bound, the information-loss bound and filter response export.

use ndarray::{Array1, Array2};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::{frobenius, matrix_power, symmetric_eigen};
use crate::polybases::{eval_filter_response, PolyCoeffMatrix};
use crate::propagation::{build_propagator, KrylovBasis};

/// Largest graph the dense oracle accepts.
pub const ORACLE_LIMIT: usize = 2000;

const MONOTONE_TOL: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct SpectrumReport {
    pub tau: f64,
    /// Eigenvalues of `L_tau`, ascending.
    pub eigenvalues: Array1<f64>,
    /// Matching eigenvectors as columns.
    pub eigenvectors: Array2<f64>,
    /// Largest non-trivial eigenvalue magnitude of `P_tau`:
    /// `max(lambda_n(L) - 1, 1 - lambda_2(L))`.
    pub lambda_star: f64,
    /// `||U diag(lambda) U^T - L_tau||_F / ||L_tau||_F`.
    pub reconstruction_error: f64,
}

impl SpectrumReport {
    /// Eigenvalues of `P_tau` ascending, `1 - lambda` reversed.
    pub fn propagation_eigenvalues(&self) -> Vec<f64> {
        self.eigenvalues.iter().rev().map(|l| 1.0 - l).collect()
    }
}

pub fn eig_oracle(g: &Graph, tau: f64) -> Result<SpectrumReport> {
    let n = g.n();
    if n > ORACLE_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: ORACLE_LIMIT,
        });
    }
    if n < 2 {
        return Err(Error::InvalidArgument("spectrum needs at least two nodes".into()));
    }
    let l = build_propagator(g, tau)?.laplacian_dense();
    if l.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite(format!("L_tau at tau = {tau}")));
    }
    let eig = symmetric_eigen(&l)?;
    let scale = frobenius(&l).max(f64::MIN_POSITIVE);
    let reconstruction_error = frobenius(&(eig.reconstruct() - &l)) / scale;
    let lambda_star = (eig.values[n - 1] - 1.0).max(1.0 - eig.values[1]);
    Ok(SpectrumReport {
        tau,
        eigenvalues: eig.values,
        eigenvectors: eig.vectors,
        lambda_star,
        reconstruction_error,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonotonicityViolation {
    /// 1-based eigenvalue index.
    pub index: usize,
    pub tau_a: f64,
    pub tau_b: f64,
    pub value_a: f64,
    pub value_b: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct MonotonicityReport {
    pub taus: Vec<f64>,
    /// One ascending spectrum per grid point.
    pub spectra: Vec<Vec<f64>>,
    /// Spectrum at `tau = 1`, the reference for the `<=` / `>=` relations.
    pub reference: Vec<f64>,
    pub violations: Vec<MonotonicityViolation>,
    /// Largest amount by which any relation was exceeded (0 if none was).
    pub max_excess: f64,
}

impl MonotonicityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks, for every eigenvalue index `i`:
/// `lambda_i(tau_a) <= lambda_i(tau_b)` for `tau_a < tau_b`,
/// `lambda_i(tau) <= lambda_i(1)` for `tau <= 1` and
/// `lambda_i(tau) >= lambda_i(1)` for `tau > 1`, each with slack 1e-8.
///
/// A violation of the `tau = 1` relations is reported with `tau_b = 1`.
pub fn check_spectrum_monotonicity(g: &Graph, tau_grid: &[f64]) -> Result<MonotonicityReport> {
    if tau_grid.is_empty() {
        return Err(Error::InvalidArgument("empty tau grid".into()));
    }
    if tau_grid.windows(2).any(|w| w[0] >= w[1]) || tau_grid[0] <= 0.0 {
        return Err(Error::InvalidArgument(
            "tau grid must be positive and strictly ascending".into(),
        ));
    }
    let spectra: Vec<Vec<f64>> = tau_grid
        .iter()
        .map(|&t| eig_oracle(g, t).map(|r| r.eigenvalues.to_vec()))
        .collect::<Result<_>>()?;
    let reference = eig_oracle(g, 1.0)?.eigenvalues.to_vec();

    let mut violations = Vec::new();
    let mut max_excess: f64 = 0.0;
    let mut check = |index: usize, tau_a: f64, tau_b: f64, lo: f64, hi: f64| {
        let excess = lo - hi;
        if excess > 0.0 {
            max_excess = max_excess.max(excess);
        }
        if excess > MONOTONE_TOL {
            violations.push(MonotonicityViolation {
                index: index + 1,
                tau_a,
                tau_b,
                value_a: lo,
                value_b: hi,
            });
        }
    };
    for a in 0..tau_grid.len() {
        for i in 0..reference.len() {
            for b in (a + 1)..tau_grid.len() {
                check(i, tau_grid[a], tau_grid[b], spectra[a][i], spectra[b][i]);
            }
            if tau_grid[a] <= 1.0 {
                check(i, tau_grid[a], 1.0, spectra[a][i], reference[i]);
            } else {
                check(i, 1.0, tau_grid[a], reference[i], spectra[a][i]);
            }
        }
    }
    Ok(MonotonicityReport {
        taus: tau_grid.to_vec(),
        spectra,
        reference,
        violations,
        max_excess,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct MixingBound {
    pub tau: f64,
    pub eps: f64,
    pub lambda_star: f64,
    /// Bound computed from the graph degrees: `d_min` and `2m`.
    pub k: usize,
    pub d_min: f64,
    pub two_m: f64,
    /// Same bound with `s_u = tau d_u + 1 - tau` in place of `d_u`
    /// (identical to `k` at `tau = 1`).
    pub k_tau_degrees: usize,
    pub s_min: f64,
    pub s_total: f64,
}

impl MixingBound {
    /// The variant whose stationary matrix matches `P_tau`.
    pub fn effective_k(&self) -> usize {
        self.k_tau_degrees
    }
}

fn ceil_bound(eps: f64, lo: f64, total: f64, lambda_star: f64) -> usize {
    if lambda_star <= 0.0 {
        return 0;
    }
    let k = ((eps * lo / total).ln() / lambda_star.ln()).ceil();
    if k.is_finite() && k > 0.0 {
        k as usize
    } else {
        0
    }
}

/// Smallest integer `K >= ln(eps d_min / 2m) / ln lambda*`, clamped at 0.
pub fn mixing_bound(g: &Graph, tau: f64, eps: f64) -> Result<MixingBound> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidArgument(format!("eps must lie in (0, 1), got {eps}")));
    }
    let (components, _) = g.components();
    if components != 1 {
        return Err(Error::Disconnected { components });
    }
    let report = eig_oracle(g, tau)?;
    let n = g.n();
    let ls = report.lambda_star;
    if ls >= 1.0 - 1e-12 {
        // Which end of the spectrum of P_tau is responsible.
        let index = if report.eigenvalues[n - 1] - 1.0 >= 1.0 - report.eigenvalues[1] {
            1
        } else {
            n - 1
        };
        return Err(Error::MixingUndefined {
            lambda_star: ls,
            index,
        });
    }
    let degrees = g.degrees();
    let d_min = *degrees.iter().min().unwrap() as f64;
    let two_m = 2.0 * g.m() as f64;
    let s: Vec<f64> = degrees.iter().map(|&d| tau * d as f64 + 1.0 - tau).collect();
    let s_min = s.iter().cloned().fold(f64::INFINITY, f64::min);
    let s_total: f64 = s.iter().sum();
    Ok(MixingBound {
        tau,
        eps,
        lambda_star: ls,
        k: ceil_bound(eps, d_min, two_m, ls),
        d_min,
        two_m,
        k_tau_degrees: ceil_bound(eps, s_min, s_total, ls),
        s_min,
        s_total,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceReport {
    pub tau: f64,
    pub k: usize,
    pub eps: f64,
    /// `max_{u,v} |P^K[u,v] - P_pi[u,v]| / P_pi[u,v]`.
    pub max_relative_distance: f64,
    /// `closed_form` (degree formula, tau = 1) or `eigenvector` (top
    /// eigenvector of the dense oracle).
    pub stationary: &'static str,
    pub passed: bool,
}

/// Stationary matrix of `P_tau`. At `tau = 1` this is
/// `sqrt(d_u d_v) / 2m`; otherwise the outer product of the top eigenvector.
pub fn stationary_matrix(g: &Graph, tau: f64) -> Result<(Array2<f64>, &'static str)> {
    let n = g.n();
    if tau == 1.0 {
        let two_m = 2.0 * g.m() as f64;
        let d = g.degrees();
        let pi = Array2::from_shape_fn((n, n), |(u, v)| ((d[u] * d[v]) as f64).sqrt() / two_m);
        return Ok((pi, "closed_form"));
    }
    let report = eig_oracle(g, tau)?;
    let mut phi = report.eigenvectors.column(0).to_owned();
    if phi.sum() < 0.0 {
        phi.mapv_inplace(|v| -v);
    }
    let col = phi.view().insert_axis(ndarray::Axis(1));
    Ok((col.dot(&col.t()), "eigenvector"))
}

/// Measures how close `P_tau^K` is to its limit, relative to the limit.
pub fn verify_convergence(g: &Graph, tau: f64, k: usize, eps: f64) -> Result<ConvergenceReport> {
    g.validate()?;
    let p = build_propagator(g, tau)?.to_dense();
    let pk = matrix_power(&p, k);
    let (pi, stationary) = stationary_matrix(g, tau)?;
    let mut worst: f64 = 0.0;
    for (a, b) in pk.iter().zip(pi.iter()) {
        worst = worst.max((a - b).abs() / b);
    }
    if !worst.is_finite() {
        return Err(Error::NonFinite("relative distance to the stationary matrix".into()));
    }
    Ok(ConvergenceReport {
        tau,
        k,
        eps,
        max_relative_distance: worst,
        stationary,
        passed: worst <= eps,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InformationLoss {
    /// `(||B*||_F - ||B||_F) / ||B*||_F`.
    pub loss: f64,
    /// `sqrt((t - K) / t)`.
    pub bound: f64,
    pub passed: bool,
}

/// Relative Frobenius mass lost by keeping the first `K` hops
/// (`x .. P^{K-1} x`) of the first `t` (`x .. P^{t-1} x`).
pub fn information_loss(basis: &KrylovBasis, grade_t: usize, k: usize) -> Result<InformationLoss> {
    if grade_t == 0 {
        return Err(Error::InvalidArgument("grade t must be positive".into()));
    }
    if k == 0 || k > grade_t {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= K <= t, got K = {k}, t = {grade_t}"
        )));
    }
    if basis.hops() + 1 < grade_t {
        return Err(Error::InvalidArgument(format!(
            "basis holds {} blocks but t = {grade_t}",
            basis.hops() + 1
        )));
    }
    let sq: Vec<f64> = basis
        .blocks()
        .iter()
        .take(grade_t)
        .map(|b| b.iter().map(|v| v * v).sum())
        .collect();
    let full: f64 = sq.iter().sum::<f64>().sqrt();
    let kept: f64 = sq[..k].iter().sum::<f64>().sqrt();
    if full == 0.0 {
        return Err(Error::InvalidArgument("basis is identically zero".into()));
    }
    let loss = (full - kept) / full;
    let bound = ((grade_t - k) as f64 / grade_t as f64).sqrt();
    Ok(InformationLoss {
        loss,
        bound,
        passed: loss <= bound + 1e-10,
    })
}

/// `(lambda, g_w(lambda))` on a uniform grid of `samples` points over `[0, 2]`.
pub fn frequency_response_export(
    w: &[f64],
    coeffs: &PolyCoeffMatrix,
    samples: usize,
) -> Result<Vec<(f64, f64)>> {
    if samples < 2 {
        return Err(Error::InvalidArgument("need at least two samples".into()));
    }
    let grid: Vec<f64> = (0..samples)
        .map(|i| 2.0 * i as f64 / (samples - 1) as f64)
        .collect();
    let values = eval_filter_response(coeffs, w, &grid)?;
    Ok(grid.into_iter().zip(values).collect())
}

pub fn response_csv(rows: &[(f64, f64)]) -> String {
    let mut out = String::from("lambda,value\n");
    for (l, v) in rows {
        out.push_str(&format!("{l:?},{v:?}\n"));
    }
    out
}

/// `sum_edges (y_u - y_v)^2 / sum_u d_u y_u^2` for `y = +1` on `class_a`,
/// `-1` on `class_b`, 0 elsewhere: the Rayleigh quotient of the unnormalized
/// Laplacian in the degree metric.
pub fn label_rayleigh_quotient(g: &Graph, class_a: usize, class_b: usize) -> Result<f64> {
    let energy = g.label_difference_energy(class_a, class_b)?;
    let denom: usize = (0..g.n())
        .filter(|&u| g.labels()[u] == class_a || g.labels()[u] == class_b)
        .map(|u| g.degree(u))
        .sum();
    if denom == 0 {
        return Err(Error::InvalidArgument("classes have no incident edges".into()));
    }
    Ok(energy / denom as f64)
}
