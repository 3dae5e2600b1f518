//! Classical polynomial filter bases and their monomial coefficient matrices.
//!
//! Row `k` of a [`PolyCoeffMatrix`] holds the power-series coefficients of
//! basis polynomial `k`, so a filter with basis weights `w` has monomial
//! weights `theta = Phi^T w`. Every basis is written in the variable it is
//! naturally evaluated in:
//!
//! | kind        | basis polynomial `k`                      | variable domain |
//! |-------------|-------------------------------------------|-----------------|
//! | monomial    | `lambda^k`                                | `[0, 2]`        |
//! | chebyshev   | `T_k(lambda)`                             | `[-1, 1]`       |
//! | bernstein   | `C(K,k) (2 - lambda)^(K-k) lambda^k / 2^K` | `[0, 2]`        |
//! | jacobi      | `P^{a,b}_k(1 - lambda)`                   | `[0, 2]`        |
//! | propagation | `(1 - lambda)^k`                          | `[0, 2]`        |
//!
//! `propagation` is the form the trained hop weights take: hop `k` of the
//! basis is `P^k x = (I - L)^k x`.

use std::fmt;
use std::str::FromStr;

use ndarray::Array2;

use crate::error::{Error, Result};

/// Largest degree for which the binomials are exact in `i128`.
pub const MAX_DEGREE: usize = 30;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BasisKind {
    Monomial,
    Chebyshev,
    Bernstein,
    Jacobi { a: f64, b: f64 },
    Propagation,
}

impl BasisKind {
    /// Interval the variable is meant to range over.
    pub fn domain(&self) -> (f64, f64) {
        match self {
            BasisKind::Chebyshev => (-1.0, 1.0),
            _ => (0.0, 2.0),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            BasisKind::Monomial => "monomial",
            BasisKind::Chebyshev => "chebyshev",
            BasisKind::Bernstein => "bernstein",
            BasisKind::Jacobi { .. } => "jacobi",
            BasisKind::Propagation => "propagation",
        }
    }
}

impl fmt::Display for BasisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisKind::Jacobi { a, b } => write!(f, "jacobi({a},{b})"),
            other => f.write_str(other.name()),
        }
    }
}

impl FromStr for BasisKind {
    type Err = Error;

    /// Accepts `monomial` (alias `gpr`), `chebyshev`, `bernstein`,
    /// `propagation`, `jacobi` (a = b = 0) and `jacobi(a,b)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        match s.as_str() {
            "monomial" | "gpr" => return Ok(BasisKind::Monomial),
            "chebyshev" => return Ok(BasisKind::Chebyshev),
            "bernstein" => return Ok(BasisKind::Bernstein),
            "propagation" => return Ok(BasisKind::Propagation),
            "jacobi" => return Ok(BasisKind::Jacobi { a: 0.0, b: 0.0 }),
            _ => {}
        }
        let bad = || Error::InvalidArgument(format!("unknown basis kind {s:?}"));
        let inner = s
            .strip_prefix("jacobi(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(bad)?;
        let (a, b) = inner.split_once(',').ok_or_else(bad)?;
        let a: f64 = a.trim().parse().map_err(|_| bad())?;
        let b: f64 = b.trim().parse().map_err(|_| bad())?;
        Ok(BasisKind::Jacobi { a, b })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PolyCoeffMatrix {
    kind: BasisKind,
    phi: Array2<f64>,
}

impl PolyCoeffMatrix {
    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn degree(&self) -> usize {
        self.phi.nrows() - 1
    }

    pub fn phi(&self) -> &Array2<f64> {
        &self.phi
    }

    /// `theta = Phi^T w`.
    pub fn monomial_weights(&self, w: &[f64]) -> Result<Vec<f64>> {
        if w.len() != self.phi.nrows() {
            return Err(Error::DimensionMismatch(format!(
                "{} weights for a degree-{} basis",
                w.len(),
                self.degree()
            )));
        }
        let w = ndarray::ArrayView1::from(w);
        Ok(self.phi.t().dot(&w).to_vec())
    }

    /// Header `k,c0,c1,...` then one row per basis polynomial.
    pub fn to_csv(&self) -> String {
        let k = self.degree();
        let mut out = String::from("k");
        for i in 0..=k {
            out.push_str(&format!(",c{i}"));
        }
        out.push('\n');
        for (i, row) in self.phi.rows().into_iter().enumerate() {
            out.push_str(&i.to_string());
            for v in row {
                out.push_str(&format!(",{v:?}"));
            }
            out.push('\n');
        }
        out
    }
}

fn check_degree(k: usize) -> Result<()> {
    if k > MAX_DEGREE {
        return Err(Error::InvalidArgument(format!(
            "degree {k} exceeds the supported maximum {MAX_DEGREE}"
        )));
    }
    Ok(())
}

fn binomial(n: usize, k: usize) -> i128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut c: i128 = 1;
    for i in 0..k {
        c = c * (n - i) as i128 / (i + 1) as i128;
    }
    c
}

pub fn monomial_coeffs(k: usize) -> Result<PolyCoeffMatrix> {
    check_degree(k)?;
    Ok(PolyCoeffMatrix {
        kind: BasisKind::Monomial,
        phi: Array2::eye(k + 1),
    })
}

pub fn chebyshev_coeffs(k: usize) -> Result<PolyCoeffMatrix> {
    check_degree(k)?;
    let mut phi = Array2::<f64>::zeros((k + 1, k + 1));
    phi[[0, 0]] = 1.0;
    if k >= 1 {
        phi[[1, 1]] = 1.0;
    }
    for r in 2..=k {
        for c in 0..=r {
            let shifted = if c > 0 { 2.0 * phi[[r - 1, c - 1]] } else { 0.0 };
            phi[[r, c]] = shifted - phi[[r - 2, c]];
        }
    }
    Ok(PolyCoeffMatrix {
        kind: BasisKind::Chebyshev,
        phi,
    })
}

pub fn bernstein_coeffs(k: usize) -> Result<PolyCoeffMatrix> {
    check_degree(k)?;
    let denom = (1u64 << k) as f64;
    let mut phi = Array2::<f64>::zeros((k + 1, k + 1));
    for r in 0..=k {
        // C(K,r) (2 - l)^(K-r) l^r: the l^(r+j) term is
        // C(K,r) C(K-r,j) 2^(K-r-j) (-1)^j.
        for j in 0..=(k - r) {
            let mut c = binomial(k, r) * binomial(k - r, j) * (1i128 << (k - r - j));
            if j % 2 == 1 {
                c = -c;
            }
            phi[[r, r + j]] = c as f64 / denom;
        }
    }
    Ok(PolyCoeffMatrix {
        kind: BasisKind::Bernstein,
        phi,
    })
}

/// Composes a polynomial in `x` with `x = 1 - lambda`.
fn compose_one_minus(coeffs_x: &[f64]) -> Vec<f64> {
    let n = coeffs_x.len();
    let mut out = vec![0.0; n];
    for (i, &c) in coeffs_x.iter().enumerate() {
        if c == 0.0 {
            continue;
        }
        for (j, o) in out.iter_mut().enumerate().take(i + 1) {
            let sign = if j % 2 == 1 { -1.0 } else { 1.0 };
            *o += c * sign * binomial(i, j) as f64;
        }
    }
    out
}

/// Coefficients of `P^{a,b}_k(x)` in `x`, rows `0..=k`.
fn jacobi_in_x(k: usize, a: f64, b: f64) -> Array2<f64> {
    let mut p = Array2::<f64>::zeros((k + 1, k + 1));
    p[[0, 0]] = 1.0;
    if k >= 1 {
        p[[1, 0]] = (a - b) / 2.0;
        p[[1, 1]] = (a + b + 2.0) / 2.0;
    }
    for n in 2..=k {
        let nf = n as f64;
        let s = 2.0 * nf + a + b;
        let c0 = 2.0 * nf * (nf + a + b) * (s - 2.0);
        let c1 = (s - 1.0) * s * (s - 2.0);
        let c2 = (s - 1.0) * (a * a - b * b);
        let c3 = 2.0 * (nf + a - 1.0) * (nf + b - 1.0) * s;
        for c in 0..=n {
            let shifted = if c > 0 { p[[n - 1, c - 1]] } else { 0.0 };
            p[[n, c]] = (c1 * shifted + c2 * p[[n - 1, c]] - c3 * p[[n - 2, c]]) / c0;
        }
    }
    p
}

pub fn jacobi_coeffs(k: usize, a: f64, b: f64) -> Result<PolyCoeffMatrix> {
    check_degree(k)?;
    if !(a > -1.0 && b > -1.0) {
        return Err(Error::InvalidArgument(format!(
            "jacobi parameters must exceed -1, got a={a}, b={b}"
        )));
    }
    let px = jacobi_in_x(k, a, b);
    let mut phi = Array2::<f64>::zeros((k + 1, k + 1));
    for r in 0..=k {
        let row = compose_one_minus(px.row(r).as_slice().unwrap());
        phi.row_mut(r).assign(&ndarray::ArrayView1::from(&row));
    }
    Ok(PolyCoeffMatrix {
        kind: BasisKind::Jacobi { a, b },
        phi,
    })
}

pub fn propagation_coeffs(k: usize) -> Result<PolyCoeffMatrix> {
    check_degree(k)?;
    let mut phi = Array2::<f64>::zeros((k + 1, k + 1));
    for r in 0..=k {
        let mut unit = vec![0.0; k + 1];
        unit[r] = 1.0;
        phi.row_mut(r)
            .assign(&ndarray::ArrayView1::from(&compose_one_minus(&unit)));
    }
    Ok(PolyCoeffMatrix {
        kind: BasisKind::Propagation,
        phi,
    })
}

pub fn coeffs_for(kind: BasisKind, k: usize) -> Result<PolyCoeffMatrix> {
    match kind {
        BasisKind::Monomial => monomial_coeffs(k),
        BasisKind::Chebyshev => chebyshev_coeffs(k),
        BasisKind::Bernstein => bernstein_coeffs(k),
        BasisKind::Jacobi { a, b } => jacobi_coeffs(k, a, b),
        BasisKind::Propagation => propagation_coeffs(k),
    }
}

/// Horner evaluation of `sum theta_i x^i`.
pub fn horner(theta: &[f64], x: f64) -> f64 {
    theta.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// `g_w(lambda)` at each point, through `theta = Phi^T w`.
pub fn eval_filter_response(coeffs: &PolyCoeffMatrix, w: &[f64], lambdas: &[f64]) -> Result<Vec<f64>> {
    let theta = coeffs.monomial_weights(w)?;
    Ok(lambdas.iter().map(|&l| horner(&theta, l)).collect())
}

fn axpy(acc: &mut [f64], c: f64, v: &[f64]) {
    for (a, x) in acc.iter_mut().zip(v) {
        *a += c * x;
    }
}

/// `sum_k w_k B_k(V) x`, computed with each basis's own recurrence.
///
/// `apply` multiplies by the operator `V` that stands in for the basis
/// variable (for a graph filter: `L` or a shifted `L`). Independent of the
/// coefficient matrices, so it can check them.
pub fn filter_by_recurrence<F>(kind: BasisKind, w: &[f64], apply: F, x: &[f64]) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    if w.is_empty() {
        return Err(Error::InvalidArgument("empty weight vector".into()));
    }
    let k = w.len() - 1;
    check_degree(k)?;
    let n = x.len();
    let mut out = vec![0.0; n];
    // Y = I - V, the variable of the Jacobi and propagation forms.
    let apply_y = |v: &[f64]| -> Vec<f64> {
        let av = apply(v);
        v.iter().zip(av).map(|(a, b)| a - b).collect()
    };
    match kind {
        BasisKind::Monomial => {
            let mut b = x.to_vec();
            axpy(&mut out, w[0], &b);
            for wk in &w[1..] {
                b = apply(&b);
                axpy(&mut out, *wk, &b);
            }
        }
        BasisKind::Propagation => {
            let mut b = x.to_vec();
            axpy(&mut out, w[0], &b);
            for wk in &w[1..] {
                b = apply_y(&b);
                axpy(&mut out, *wk, &b);
            }
        }
        BasisKind::Chebyshev => {
            let mut prev = x.to_vec();
            axpy(&mut out, w[0], &prev);
            if k >= 1 {
                let mut cur = apply(x);
                axpy(&mut out, w[1], &cur);
                for wk in &w[2..] {
                    let vc = apply(&cur);
                    let next: Vec<f64> = vc.iter().zip(&prev).map(|(a, b)| 2.0 * a - b).collect();
                    axpy(&mut out, *wk, &next);
                    prev = cur;
                    cur = next;
                }
            }
        }
        BasisKind::Bernstein => {
            // V^r x for every r, then (2I - V)^(K - r) applied to each.
            let mut powers = vec![x.to_vec()];
            for r in 1..=k {
                let next = apply(&powers[r - 1]);
                powers.push(next);
            }
            let denom = (1u64 << k) as f64;
            for (r, mut b) in powers.into_iter().enumerate() {
                for _ in 0..(k - r) {
                    let vb = apply(&b);
                    b = b.iter().zip(vb).map(|(a, c)| 2.0 * a - c).collect();
                }
                axpy(&mut out, w[r] * binomial(k, r) as f64 / denom, &b);
            }
        }
        BasisKind::Jacobi { a, b: bb } => {
            if !(a > -1.0 && bb > -1.0) {
                return Err(Error::InvalidArgument(format!(
                    "jacobi parameters must exceed -1, got a={a}, b={bb}"
                )));
            }
            let mut prev = x.to_vec();
            axpy(&mut out, w[0], &prev);
            if k >= 1 {
                let yx = apply_y(x);
                let mut cur: Vec<f64> = x
                    .iter()
                    .zip(&yx)
                    .map(|(xi, yi)| (a - bb) / 2.0 * xi + (a + bb + 2.0) / 2.0 * yi)
                    .collect();
                axpy(&mut out, w[1], &cur);
                for (n, wk) in w.iter().enumerate().skip(2) {
                    let nf = n as f64;
                    let s = 2.0 * nf + a + bb;
                    let c0 = 2.0 * nf * (nf + a + bb) * (s - 2.0);
                    let c1 = (s - 1.0) * s * (s - 2.0);
                    let c2 = (s - 1.0) * (a * a - bb * bb);
                    let c3 = 2.0 * (nf + a - 1.0) * (nf + bb - 1.0) * s;
                    let ycur = apply_y(&cur);
                    let next: Vec<f64> = (0..cur.len())
                        .map(|i| (c1 * ycur[i] + c2 * cur[i] - c3 * prev[i]) / c0)
                        .collect();
                    axpy(&mut out, *wk, &next);
                    prev = cur;
                    cur = next;
                }
            }
        }
    }
    debug_assert_eq!(out.len(), n);
    Ok(out)
}

/// `sum_i theta_i V^i x`: the filtered signal through monomial weights.
pub fn monomial_signal<F>(theta: &[f64], apply: F, x: &[f64]) -> Vec<f64>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    let mut out = vec![0.0; x.len()];
    let mut b = x.to_vec();
    for (i, &t) in theta.iter().enumerate() {
        if i > 0 {
            b = apply(&b);
        }
        axpy(&mut out, t, &b);
    }
    out
}
