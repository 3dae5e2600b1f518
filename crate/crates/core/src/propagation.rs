//! The tunable propagation matrix and the Krylov feature blocks built from it.
//!
//! `P_tau[u, v] = (tau A + (1 - tau) I)[u, v] / sqrt(s_u s_v)` with
//! `s_u = tau d_u + 1 - tau`. Small `tau` pulls `P_tau` toward the identity
//! (slow, smooth propagation); `tau > 1` pushes weight off the diagonal.

use std::path::Path;

use ndarray::{Array1, Array2, ArrayView2, Axis};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::container;
use crate::error::{Error, Result};
use crate::graph::{FeatureMatrix, Graph};
use crate::linalg::{norm, project_out};

/// Square sparse matrix in compressed-row form.
#[derive(Clone, Debug, PartialEq)]
pub struct CsrMatrix {
    offsets: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl CsrMatrix {
    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// Column indices and values of row `u`.
    pub fn row(&self, u: usize) -> (&[usize], &[f64]) {
        let r = self.offsets[u]..self.offsets[u + 1];
        (&self.cols[r.clone()], &self.vals[r])
    }

    pub fn get(&self, u: usize, v: usize) -> f64 {
        let (cols, vals) = self.row(u);
        cols.binary_search(&v).map_or(0.0, |i| vals[i])
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n())
            .map(|u| {
                let (cols, vals) = self.row(u);
                cols.iter().zip(vals).map(|(&v, &a)| a * x[v]).sum()
            })
            .collect()
    }

    /// Sparse times dense. Rows are computed in parallel, but each output row
    /// accumulates its terms in a fixed order, so the result does not depend
    /// on the thread count.
    pub fn spmm(&self, x: ArrayView2<f64>) -> Array2<f64> {
        let d = x.ncols();
        let mut out = vec![0.0; self.n() * d];
        if d > 0 {
            out.par_chunks_mut(d).enumerate().for_each(|(u, row)| {
                let (cols, vals) = self.row(u);
                for (&v, &a) in cols.iter().zip(vals) {
                    for (o, &xv) in row.iter_mut().zip(x.row(v)) {
                        *o += a * xv;
                    }
                }
            });
        }
        Array2::from_shape_vec((self.n(), d), out).expect("shape matches buffer")
    }

    pub fn to_dense(&self) -> Array2<f64> {
        let n = self.n();
        let mut a = Array2::zeros((n, n));
        for u in 0..n {
            let (cols, vals) = self.row(u);
            for (&v, &x) in cols.iter().zip(vals) {
                a[[u, v]] = x;
            }
        }
        a
    }
}

/// `P_tau` for one graph, stored with the full diagonal even where it is zero.
#[derive(Clone, Debug)]
pub struct TauPropagator {
    tau: f64,
    matrix: CsrMatrix,
    scale: Vec<f64>,
    inv_sqrt_scale: Vec<f64>,
}

impl TauPropagator {
    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn matrix(&self) -> &CsrMatrix {
        &self.matrix
    }

    pub fn n(&self) -> usize {
        self.matrix.n()
    }

    /// `s_u = tau d_u + 1 - tau`, the diagonal of `D_tau`.
    pub fn scale(&self) -> &[f64] {
        &self.scale
    }

    pub fn inv_sqrt_scale(&self) -> &[f64] {
        &self.inv_sqrt_scale
    }

    pub fn apply(&self, x: ArrayView2<f64>) -> Array2<f64> {
        self.matrix.spmm(x)
    }

    pub fn apply_vec(&self, x: &[f64]) -> Vec<f64> {
        self.matrix.matvec(x)
    }

    pub fn to_dense(&self) -> Array2<f64> {
        self.matrix.to_dense()
    }

    /// Dense `L_tau = I - P_tau`.
    pub fn laplacian_dense(&self) -> Array2<f64> {
        Array2::eye(self.n()) - self.to_dense()
    }
}

pub fn build_propagator(g: &Graph, tau: f64) -> Result<TauPropagator> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::InvalidArgument(format!("tau must be positive, got {tau}")));
    }
    let n = g.n();
    let mut scale = Vec::with_capacity(n);
    for u in 0..n {
        let s = tau * g.degree(u) as f64 + 1.0 - tau;
        if s <= 0.0 {
            return Err(Error::NonPositiveNormalization { node: u, value: s });
        }
        scale.push(s);
    }
    let inv_sqrt_scale: Vec<f64> = scale.iter().map(|s| 1.0 / s.sqrt()).collect();

    let mut offsets = Vec::with_capacity(n + 1);
    let mut cols = Vec::with_capacity(2 * g.m() + n);
    let mut vals = Vec::with_capacity(2 * g.m() + n);
    offsets.push(0);
    for u in 0..n {
        let diag = (1.0 - tau) / scale[u];
        let mut diag_done = false;
        for &v in g.neighbors(u) {
            if !diag_done && v > u {
                cols.push(u);
                vals.push(diag);
                diag_done = true;
            }
            cols.push(v);
            // s_u s_v commutes exactly, so the stored matrix is bitwise symmetric
            vals.push(tau / (scale[u] * scale[v]).sqrt());
        }
        if !diag_done {
            cols.push(u);
            vals.push(diag);
        }
        offsets.push(cols.len());
    }
    Ok(TauPropagator {
        tau,
        matrix: CsrMatrix {
            offsets,
            cols,
            vals,
        },
        scale,
        inv_sqrt_scale,
    })
}

/// Stacked propagation blocks `F^(0..=K)`, each `n x d`.
#[derive(Clone, Debug, PartialEq)]
pub struct KrylovBasis {
    taus: Vec<f64>,
    merged: bool,
    blocks: Vec<Array2<f64>>,
}

#[derive(Serialize, Deserialize)]
struct BasisHeader {
    n: usize,
    d: usize,
    #[serde(rename = "K")]
    k: usize,
    taus: Vec<f64>,
    merged: bool,
}

impl KrylovBasis {
    /// Hop count `K`; there are `K + 1` blocks.
    pub fn hops(&self) -> usize {
        self.blocks.len() - 1
    }

    pub fn n(&self) -> usize {
        self.blocks[0].nrows()
    }

    pub fn d(&self) -> usize {
        self.blocks[0].ncols()
    }

    pub fn taus(&self) -> &[f64] {
        &self.taus
    }

    pub fn is_merged(&self) -> bool {
        self.merged
    }

    pub fn block(&self, l: usize) -> &Array2<f64> {
        &self.blocks[l]
    }

    pub fn blocks(&self) -> &[Array2<f64>] {
        &self.blocks
    }

    /// FNV-1a over the bit patterns of every entry; used to confirm that
    /// training leaves the basis untouched.
    pub fn checksum(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in &self.blocks {
            for v in b.iter() {
                for byte in v.to_bits().to_le_bytes() {
                    h ^= byte as u64;
                    h = h.wrapping_mul(0x0100_0000_01b3);
                }
            }
        }
        h
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let header = BasisHeader {
            n: self.n(),
            d: self.d(),
            k: self.hops(),
            taus: self.taus.clone(),
            merged: self.merged,
        };
        let chunks: Vec<&[f64]> = self
            .blocks
            .iter()
            .map(|b| b.as_slice().expect("blocks are row-major"))
            .collect();
        container::write(path, &header, &chunks)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let (h, values): (BasisHeader, Vec<f64>) = container::read(path)?;
        let per_block = h.n * h.d;
        if values.len() != per_block * (h.k + 1) {
            return Err(Error::Format(format!(
                "{}: expected {} values for n={}, d={}, K={}, found {}",
                path.display(),
                per_block * (h.k + 1),
                h.n,
                h.d,
                h.k,
                values.len()
            )));
        }
        if h.taus.is_empty() {
            return Err(Error::Format(format!("{}: empty tau list", path.display())));
        }
        let blocks = (0..=h.k)
            .map(|l| {
                Array2::from_shape_vec(
                    (h.n, h.d),
                    values[l * per_block..(l + 1) * per_block].to_vec(),
                )
                .expect("length checked above")
            })
            .collect();
        Ok(KrylovBasis {
            taus: h.taus,
            merged: h.merged,
            blocks,
        })
    }
}

pub fn build_krylov_basis(p: &TauPropagator, x: &FeatureMatrix, k: usize) -> Result<KrylovBasis> {
    if x.n() != p.n() {
        return Err(Error::DimensionMismatch(format!(
            "features have {} rows, propagator has {} nodes",
            x.n(),
            p.n()
        )));
    }
    let mut blocks = Vec::with_capacity(k + 1);
    blocks.push(x.values().to_owned());
    for l in 1..=k {
        let next = p.apply(blocks[l - 1].view());
        blocks.push(next);
    }
    Ok(KrylovBasis {
        taus: vec![p.tau()],
        merged: false,
        blocks,
    })
}

/// Block `l` is `sum_i P_{tau_i}^l X`, summed in the order of `taus`.
pub fn build_merged_basis(
    g: &Graph,
    taus: &[f64],
    x: &FeatureMatrix,
    k: usize,
) -> Result<KrylovBasis> {
    let Some((&first, rest)) = taus.split_first() else {
        return Err(Error::InvalidArgument("merged basis needs at least one tau".into()));
    };
    let mut sum = build_krylov_basis(&build_propagator(g, first)?, x, k)?;
    for &tau in rest {
        let b = build_krylov_basis(&build_propagator(g, tau)?, x, k)?;
        for (acc, blk) in sum.blocks.iter_mut().zip(b.blocks) {
            *acc += &blk;
        }
    }
    sum.taus = taus.to_vec();
    sum.merged = taus.len() > 1;
    Ok(sum)
}

/// Orthonormal Krylov vectors from the three-term recurrence.
#[derive(Clone, Debug)]
pub struct LanczosResult {
    /// `q_0 .. q_{dim-1}` as columns of an `n x dim` matrix.
    pub q: Array2<f64>,
    pub alphas: Vec<f64>,
    /// `betas[j]` is the norm of the residual that produced `q_{j+1}`.
    pub betas: Vec<f64>,
    /// True when the recurrence stopped early because the residual vanished.
    pub breakdown: bool,
}

impl LanczosResult {
    /// Dimension reached; equals the numerical grade on breakdown.
    pub fn dimension(&self) -> usize {
        self.q.ncols()
    }
}

const LANCZOS_BREAKDOWN: f64 = 1e-12;
const GRADE_TOLERANCE: f64 = 1e-10;

/// Lanczos on column `column` of the hop-0 block, up to `K + 1` vectors.
///
/// The three-term recurrence alone loses orthogonality once Ritz values
/// converge, so every new vector is also reorthogonalized against all
/// previous ones.
pub fn orthogonalize_basis(
    p: &TauPropagator,
    basis: &KrylovBasis,
    column: usize,
) -> Result<LanczosResult> {
    if basis.is_merged() || basis.taus() != [p.tau()] {
        return Err(Error::InvalidArgument(
            "orthogonalization needs a single-tau basis built from the same propagator".into(),
        ));
    }
    if column >= basis.d() {
        return Err(Error::InvalidArgument(format!(
            "column {column} out of range for d = {}",
            basis.d()
        )));
    }
    if basis.n() != p.n() {
        return Err(Error::DimensionMismatch("basis and propagator sizes differ".into()));
    }
    let x = basis.block(0).column(column).to_owned();
    let xn = norm(x.view());
    if xn == 0.0 {
        return Err(Error::InvalidArgument(format!("column {column} is zero")));
    }
    let k = basis.hops();
    let mut q: Vec<Array1<f64>> = vec![x / xn];
    let mut alphas = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut breakdown = false;
    for j in 0..k {
        let qj = &q[j];
        let mut w = Array1::from(p.apply_vec(qj.as_slice().unwrap()));
        let alpha = qj.dot(&w);
        w.scaled_add(-alpha, qj);
        if j > 0 {
            w.scaled_add(-betas[j - 1], &q[j - 1]);
        }
        alphas.push(alpha);
        project_out(&q, &mut w);
        let beta = norm(w.view());
        if beta < LANCZOS_BREAKDOWN {
            breakdown = true;
            break;
        }
        betas.push(beta);
        q.push(w / beta);
    }
    let n = basis.n();
    let mut qm = Array2::zeros((n, q.len()));
    for (j, v) in q.iter().enumerate() {
        qm.column_mut(j).assign(v);
    }
    Ok(LanczosResult {
        q: qm,
        alphas,
        betas,
        breakdown,
    })
}

/// Smallest `t <= max_k` such that `P^t x` is numerically dependent on
/// `x, ..., P^{t-1} x`, or `max_k + 1` if no dependence shows up.
pub fn estimate_grade(p: &TauPropagator, x: &[f64], max_k: usize) -> Result<usize> {
    if max_k < 1 {
        return Err(Error::InvalidArgument("max_k must be at least 1".into()));
    }
    if x.len() != p.n() {
        return Err(Error::DimensionMismatch(format!(
            "vector has length {}, propagator has {} nodes",
            x.len(),
            p.n()
        )));
    }
    let x = Array1::from(x.to_vec());
    let xn = norm(x.view());
    if xn == 0.0 {
        return Err(Error::InvalidArgument("grade of the zero vector".into()));
    }
    let mut q = vec![x / xn];
    for t in 1..=max_k {
        let v = Array1::from(p.apply_vec(q[t - 1].as_slice().unwrap()));
        let vn = norm(v.view());
        if vn == 0.0 {
            return Ok(t);
        }
        let mut w = v;
        project_out(&q, &mut w);
        let wn = norm(w.view());
        if wn / vn < GRADE_TOLERANCE {
            return Ok(t);
        }
        q.push(w / wn);
    }
    Ok(max_k + 1)
}

/// Column `j` of every block, as rows of a `(K + 1) x n` matrix.
pub fn column_sequence(basis: &KrylovBasis, j: usize) -> Array2<f64> {
    let mut out = Array2::zeros((basis.hops() + 1, basis.n()));
    for (l, b) in basis.blocks().iter().enumerate() {
        out.row_mut(l).assign(&b.column(j));
    }
    out
}

/// Same as [`KrylovBasis`] blocks but stacked horizontally, `n x (K+1)d`.
/// Only meant for small inspection and test cases.
pub fn concat_blocks(basis: &KrylovBasis) -> Array2<f64> {
    let views: Vec<_> = basis.blocks().iter().map(|b| b.view()).collect();
    ndarray::concatenate(Axis(1), &views).expect("blocks share row count")
}
