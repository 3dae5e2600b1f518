//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any gating criterion fails. Criterion 9 needs the Cora files
//! (`edges.tsv`, `features.csv`, `labels.txt`) under `$ADAPTKRY_CORA_DIR`.

use std::path::PathBuf;
use std::time::Instant;

use adaptkry::datagen::{generate, random_connected_graph, SyntheticSpec};
use adaptkry::linalg::span_residual;
use adaptkry::model::{mean_std, run_splits, tau_sweep};
use adaptkry::polybases::filter_by_recurrence;
use adaptkry::propagation::{column_sequence, estimate_grade, orthogonalize_basis};
use adaptkry::spectral::{
    check_spectrum_monotonicity, eig_oracle, information_loss, mixing_bound, verify_convergence,
};
use adaptkry::verify::{merge_residual, suite_graph, unification_residuals, variable_operator};
use adaptkry::{
    build_krylov_basis, build_merged_basis, build_propagator, load_graph, make_splits, BasisKind,
    FeatureMatrix, FilterModel, Graph, TrainConfig,
};
use ndarray::{Array1, Array2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = std::result::Result<(bool, String), String>;
type Criterion = (&'static str, fn() -> Check);

fn err(e: adaptkry::Error) -> String {
    e.to_string()
}

// ---- independent dense oracles, built straight from the edge list ----

fn dense_propagation(g: &Graph, tau: f64) -> Array2<f64> {
    let n = g.n();
    let s: Vec<f64> = (0..n).map(|u| tau * g.degree(u) as f64 + 1.0 - tau).collect();
    let mut p = Array2::zeros((n, n));
    for u in 0..n {
        p[[u, u]] = (1.0 - tau) / s[u];
        for &v in g.neighbors(u) {
            p[[u, v]] = tau / (s[u] * s[v]).sqrt();
        }
    }
    p
}

fn mat_pow(a: &Array2<f64>, mut k: usize) -> Array2<f64> {
    let mut result = Array2::eye(a.nrows());
    let mut base = a.clone();
    while k > 0 {
        if k & 1 == 1 {
            result = result.dot(&base);
        }
        base = base.dot(&base);
        k >>= 1;
    }
    result
}

fn rel_diff(a: &[f64], b: &[f64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    let den: f64 = b.iter().map(|y| y * y).sum::<f64>().sqrt();
    num / den.max(f64::MIN_POSITIVE)
}

fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

fn column(x: Vec<f64>) -> FeatureMatrix {
    let n = x.len();
    FeatureMatrix::new(Array2::from_shape_vec((n, 1), x).unwrap()).unwrap()
}

// ---- criteria ----

fn spectrum_monotonicity() -> Check {
    let grid = [0.25, 0.5, 0.75, 1.0, 1.25, 1.5];
    let start = Instant::now();
    let (mut lib_violations, mut own_violations) = (0usize, 0usize);
    let mut worst_moment: f64 = 0.0;
    for i in 0..50 {
        let (g, _) = suite_graph(101, i, 50).map_err(err)?;
        if !g.is_connected() || g.is_bipartite() || g.n() > 50 {
            return Err(format!("graph {i} is not a connected non-bipartite graph with n <= 50"));
        }
        let rep = check_spectrum_monotonicity(&g, &grid).map_err(err)?;
        lib_violations += rep.violations.len();
        // Recount from the raw spectra.
        for (a, sa) in rep.spectra.iter().enumerate() {
            for (idx, &la) in sa.iter().enumerate() {
                for sb in &rep.spectra[a + 1..] {
                    own_violations += (la > sb[idx] + 1e-8) as usize;
                }
                let r = rep.reference[idx];
                let bad = if grid[a] <= 1.0 { la > r + 1e-8 } else { la < r - 1e-8 };
                own_violations += bad as usize;
            }
        }
        // Spectra against trace and Frobenius norm of an independently built L_tau.
        for (&tau, spec) in grid.iter().zip(&rep.spectra) {
            let l = Array2::<f64>::eye(g.n()) - dense_propagation(&g, tau);
            let trace: f64 = l.diag().sum();
            let fro2: f64 = l.iter().map(|v| v * v).sum();
            let s1: f64 = spec.iter().sum();
            let s2: f64 = spec.iter().map(|v| v * v).sum();
            worst_moment = worst_moment.max((s1 - trace).abs()).max((s2 - fro2).abs());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let ok = lib_violations == 0 && own_violations == 0 && worst_moment < 1e-8 && secs < 60.0;
    Ok((
        ok,
        format!(
            "50 graphs, violations {lib_violations} (recount {own_violations}), tol 1e-8; \
             spectral moment error {worst_moment:.1e} (< 1e-8); {secs:.2} s (< 60 s)"
        ),
    ))
}

fn mixing_bound_convergence() -> Check {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut worst_route_gap: f64 = 0.0;
    let mut failures = 0;
    let mut max_k = 0;
    for i in 0..20 {
        let (g, _) = suite_graph(202, i, 50).map_err(err)?;
        let d = g.degrees();
        let two_m = 2.0 * g.m() as f64;
        let p = dense_propagation(&g, 1.0);
        for eps in [0.1, 0.01] {
            let bound = mixing_bound(&g, 1.0, eps).map_err(err)?;
            max_k = max_k.max(bound.k);
            let lib = verify_convergence(&g, 1.0, bound.k, eps).map_err(err)?;
            let pk = mat_pow(&p, bound.k);
            let mut own: f64 = 0.0;
            for u in 0..g.n() {
                for v in 0..g.n() {
                    let pi = ((d[u] * d[v]) as f64).sqrt() / two_m;
                    own = own.max((pk[[u, v]] - pi).abs() / pi);
                }
            }
            worst = worst.max(own / eps);
            worst_route_gap = worst_route_gap.max((own - lib.max_relative_distance).abs());
            if own > eps || !lib.passed {
                failures += 1;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let ok = failures == 0 && worst_route_gap < 1e-9 && secs < 60.0;
    Ok((
        ok,
        format!(
            "20 graphs x eps {{0.1, 0.01}}, {failures} cases above eps, worst distance/eps {worst:.3}, \
             max K {max_k}, route gap {worst_route_gap:.1e}; {secs:.2} s (< 60 s)"
        ),
    ))
}

fn information_loss_bound() -> Check {
    let mut failures = 0;
    let mut worst_margin = f64::NEG_INFINITY;
    let mut worst_route_gap: f64 = 0.0;
    for i in 0..100 {
        let (g, mut rng) = suite_graph(303, i, 40).map_err(err)?;
        let n = g.n();
        let tau = rng.random_range(0.05..=1.0);
        let p = build_propagator(&g, tau).map_err(err)?;
        let x = random_vec(&mut rng, n);
        let t = estimate_grade(&p, &x, n).map_err(err)?.min(n);
        let k = rng.random_range(1..=t);
        let basis = build_krylov_basis(&p, &column(x.clone()), t).map_err(err)?;
        let rep = information_loss(&basis, t, k).map_err(err)?;

        let pd = dense_propagation(&g, tau);
        let mut v = Array1::from(x);
        let mut sq = Vec::with_capacity(t);
        for _ in 0..t {
            sq.push(v.dot(&v));
            v = pd.dot(&v);
        }
        let full = sq.iter().sum::<f64>().sqrt();
        let kept = sq[..k].iter().sum::<f64>().sqrt();
        let own = (full - kept) / full;
        let bound = ((t - k) as f64 / t as f64).sqrt();
        worst_route_gap = worst_route_gap.max((own - rep.loss).abs());
        worst_margin = worst_margin.max(own - bound);
        if own > bound + 1e-10 || !rep.passed {
            failures += 1;
        }
    }
    let ok = failures == 0 && worst_route_gap < 1e-9;
    Ok((
        ok,
        format!(
            "100 (graph, signal, K <= t) triples, {failures} above sqrt((t-K)/t) + 1e-10, \
             max loss - bound {worst_margin:.3e}, route gap {worst_route_gap:.1e}"
        ),
    ))
}

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * i as f64)
}

/// `sum_k w_k B_k(L) x` from closed-form expansions, with dense matrices.
fn closed_form_filter(kind: BasisKind, pd: &Array2<f64>, w: &[f64], x: &Array1<f64>) -> Array1<f64> {
    let n = x.len();
    let eye = Array2::<f64>::eye(n);
    let l = &eye - pd;
    let k_max = w.len() - 1;
    let apply = |m: &Array2<f64>, times: usize, v: Array1<f64>| (0..times).fold(v, |acc, _| m.dot(&acc));
    let mut y = Array1::zeros(n);
    match kind {
        BasisKind::Chebyshev => {
            // T_k(z) = (k/2) sum_j (-1)^j (k-j-1)! / (j! (k-2j)!) (2z)^(k-2j), z = -P.
            let z = pd.mapv(|v| -v);
            for (k, &wk) in w.iter().enumerate() {
                if k == 0 {
                    y.scaled_add(wk, x);
                    continue;
                }
                for j in 0..=k / 2 {
                    let c = (k as f64 / 2.0) * (-1f64).powi(j as i32) * factorial(k - j - 1)
                        / (factorial(j) * factorial(k - 2 * j))
                        * 2f64.powi((k - 2 * j) as i32);
                    y.scaled_add(wk * c, &apply(&z, k - 2 * j, x.clone()));
                }
            }
        }
        BasisKind::Bernstein => {
            let two_minus_l = &eye * 2.0 - &l;
            for (r, &wr) in w.iter().enumerate() {
                let v = apply(&two_minus_l, k_max - r, apply(&l, r, x.clone()));
                y.scaled_add(wr * binom(k_max, r) / 2f64.powi(k_max as i32), &v);
            }
        }
        BasisKind::Jacobi { a, b } if a == 0.0 && b == 0.0 => {
            // Legendre at P = I - L: 2^-k sum_j C(k,j)^2 (P - I)^(k-j) (P + I)^j.
            let pm = pd - &eye;
            let pp = pd + &eye;
            for (k, &wk) in w.iter().enumerate() {
                for j in 0..=k {
                    let v = apply(&pm, k - j, apply(&pp, j, x.clone()));
                    y.scaled_add(wk * binom(k, j).powi(2) / 2f64.powi(k as i32), &v);
                }
            }
        }
        _ => unreachable!("no closed form wired up for {kind}"),
    }
    y
}

fn basis_unification() -> Check {
    const K: usize = 8;
    let mut worst_span: f64 = 0.0;
    let mut worst_conv: f64 = 0.0;
    let mut worst_oracle: f64 = 0.0;
    let kinds = [BasisKind::Chebyshev, BasisKind::Bernstein, BasisKind::Jacobi { a: 0.0, b: 0.0 }];
    for (ki, kind) in kinds.into_iter().enumerate() {
        for trial in 0..20 {
            let (g, mut rng) = suite_graph(404 + 100 * ki as u64, trial, 40).map_err(err)?;
            let tau = rng.random_range(0.1..=1.0);
            let p = build_propagator(&g, tau).map_err(err)?;
            let x = random_vec(&mut rng, g.n());
            let basis = build_krylov_basis(&p, &column(x.clone()), K).map_err(err)?;
            let w = random_vec(&mut rng, K + 1);
            let (span, conv) = unification_residuals(kind, &p, &basis, &w).map_err(err)?;
            worst_span = worst_span.max(span);
            worst_conv = worst_conv.max(conv);

            let op = variable_operator(kind, &p);
            let filtered = filter_by_recurrence(kind, &w, &op, &x).map_err(err)?;
            let oracle = closed_form_filter(kind, &dense_propagation(&g, tau), &w, &Array1::from(x));
            worst_oracle = worst_oracle.max(rel_diff(&filtered, oracle.as_slice().unwrap()));
        }
    }
    let ok = worst_span < 1e-8 && worst_conv < 1e-8 && worst_oracle < 1e-8;
    Ok((
        ok,
        format!(
            "chebyshev/bernstein/jacobi(0,0), K=8, 20 weights each: span residual {worst_span:.1e}, \
             conversion residual {worst_conv:.1e}, closed-form gap {worst_oracle:.1e} (all < 1e-8)"
        ),
    ))
}

fn merge_identity() -> Check {
    let mut worst: f64 = 0.0;
    let mut worst_blocks: f64 = 0.0;
    for seed in 0..10u64 {
        for r in [2usize, 3] {
            let (g, mut rng) = suite_graph(505, seed as usize, 40).map_err(err)?;
            let taus: Vec<f64> = (0..r).map(|_| rng.random_range(0.2..1.2)).collect();
            worst = worst.max(merge_residual(&g, &taus, 8, &mut rng).map_err(err)?);

            // Merged blocks against explicit dense sums of matrix powers.
            let xv = Array2::from_shape_fn((g.n(), 2), |_| rng.random_range(-1.0..1.0));
            let merged =
                build_merged_basis(&g, &taus, &FeatureMatrix::new(xv.clone()).unwrap(), 4).map_err(err)?;
            for l in 0..=4 {
                let mut expect = Array2::<f64>::zeros(xv.dim());
                for &t in &taus {
                    expect += &mat_pow(&dense_propagation(&g, t), l).dot(&xv);
                }
                let gap = (merged.block(l) - &expect).iter().fold(0.0f64, |m, v| m.max(v.abs()));
                worst_blocks = worst_blocks.max(gap);
            }
        }
    }
    let ok = worst <= 1e-10 && worst_blocks <= 1e-10;
    Ok((
        ok,
        format!(
            "r in {{2,3}} x 10 seeds: max |merged - sum of r bases| {worst:.1e}, \
             merged blocks vs dense powers {worst_blocks:.1e} (<= 1e-10)"
        ),
    ))
}

fn lanczos_orthogonalization() -> Check {
    const K: usize = 8;
    let mut worst_gram: f64 = 0.0;
    let mut worst_span: f64 = 0.0;
    for i in 0..20 {
        let (g, mut rng) = suite_graph(606, i, 40).map_err(err)?;
        let tau = rng.random_range(0.1..=1.5);
        let p = build_propagator(&g, tau).map_err(err)?;
        let basis = build_krylov_basis(&p, &column(random_vec(&mut rng, g.n())), K).map_err(err)?;
        let lr = orthogonalize_basis(&p, &basis, 0).map_err(err)?;
        let dim = lr.dimension();
        let gram = lr.q.t().dot(&lr.q) - Array2::<f64>::eye(dim);
        worst_gram = worst_gram.max(gram.iter().fold(0.0f64, |m, v| m.max(v.abs())));
        // span{q_0..q_{dim-1}} == span{x .. P^{dim-1} x}, both directions.
        let krylov = column_sequence(&basis, 0).reversed_axes();
        let krylov = krylov.slice(ndarray::s![.., ..dim]).to_owned();
        for j in 0..dim {
            worst_span = worst_span.max(span_residual(&krylov, lr.q.column(j)));
            worst_span = worst_span.max(span_residual(&lr.q, krylov.column(j)));
        }
    }

    // Breakdown exactly at the grade: an eigenvector (grade 1) and a sum of
    // two eigenvectors with distinct eigenvalues (grade 2).
    let (g, _) = suite_graph(607, 0, 30).map_err(err)?;
    let tau = 0.8;
    let p = build_propagator(&g, tau).map_err(err)?;
    let spec = eig_oracle(&g, tau).map_err(err)?;
    let n = g.n();
    let v0 = spec.eigenvectors.column(0).to_vec();
    let vn = spec.eigenvectors.column(n - 1).to_vec();
    let mut grade_ok = true;
    let mut grade_notes = Vec::new();
    for (x, expect) in [(v0.clone(), 1usize), (v0.iter().zip(&vn).map(|(a, b)| a + b).collect(), 2)] {
        let basis = build_krylov_basis(&p, &column(x.clone()), K).map_err(err)?;
        let lr = orthogonalize_basis(&p, &basis, 0).map_err(err)?;
        let grade = estimate_grade(&p, &x, K).map_err(err)?;
        grade_ok &= lr.breakdown && lr.dimension() == expect && grade == expect;
        grade_notes.push(format!("grade {grade}, dim {}, breakdown {}", lr.dimension(), lr.breakdown));
    }
    let ok = worst_gram <= 1e-6 && worst_span < 1e-8 && grade_ok;
    Ok((
        ok,
        format!(
            "20 instances: |Q^T Q - I| {worst_gram:.1e} (<= 1e-6), span residual {worst_span:.1e} (< 1e-8); \
             eigenvector: {}; two eigenvectors: {}",
            grade_notes[0], grade_notes[1]
        ),
    ))
}

fn param(m: &mut FilterModel, group: usize) -> &mut [f64] {
    match group {
        0 => m.w.as_slice_mut(),
        1 => m.mlp.w1.as_slice_mut(),
        2 => m.mlp.b1.as_slice_mut(),
        3 => m.mlp.w2.as_slice_mut(),
        _ => m.mlp.b2.as_slice_mut(),
    }
    .expect("contiguous parameters")
}

fn gradient_check() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    let g = random_connected_graph(10, 0.3, &mut rng).map_err(err)?;
    let (k, d, classes) = (3, 4, 3);
    let x = FeatureMatrix::new(Array2::from_shape_fn((10, d), |_| rng.random_range(-1.0..1.0))).unwrap();
    let basis = build_krylov_basis(&build_propagator(&g, 0.7).map_err(err)?, &x, k).map_err(err)?;
    let nodes: Vec<usize> = (0..10).collect();
    let labels: Vec<usize> = (0..10).map(|_| rng.random_range(0..classes)).collect();
    let wd = 5e-4;
    let h = 1e-5;
    let mut notes = Vec::new();
    let mut ok = true;
    for per_column in [false, true] {
        let cfg = TrainConfig { hidden: 6, seed: 7, per_column_weights: per_column, ..TrainConfig::default() };
        let mut model = FilterModel::new(k, d, classes, &cfg).map_err(err)?;
        for v in model.w.iter_mut() {
            *v = rng.random_range(-1.0..1.0);
        }
        let (_, grads) = model.loss_and_grad(&basis, &nodes, &labels, wd).map_err(err)?;
        let analytic: Vec<f64> = [&grads.w.to_vec()[..], grads.w1.as_slice().unwrap(), grads.b1.as_slice().unwrap(),
            grads.w2.as_slice().unwrap(), grads.b2.as_slice().unwrap()]
            .concat();
        let mut numeric = Vec::with_capacity(analytic.len());
        for group in 0..5 {
            for i in 0..param(&mut model.clone(), group).len() {
                let mut plus = model.clone();
                param(&mut plus, group)[i] += h;
                let mut minus = model.clone();
                param(&mut minus, group)[i] -= h;
                let lp = plus.loss_and_grad(&basis, &nodes, &labels, wd).map_err(err)?.0;
                let lm = minus.loss_and_grad(&basis, &nodes, &labels, wd).map_err(err)?.0;
                numeric.push((lp - lm) / (2.0 * h));
            }
        }
        let diff: f64 = analytic.iter().zip(&numeric).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        let scale: f64 = analytic.iter().map(|a| a * a).sum::<f64>().sqrt()
            + numeric.iter().map(|a| a * a).sum::<f64>().sqrt();
        let rel = diff / scale;
        ok &= rel <= 1e-4;
        notes.push(format!("{} weights: rel err {rel:.1e} over {} params",
            if per_column { "per-column" } else { "per-hop" }, analytic.len()));
    }
    Ok((ok, format!("10 nodes, central differences h=1e-5; {} (<= 1e-4)", notes.join("; "))))
}

fn end_to_end_synthetic() -> Check {
    let start = Instant::now();
    let cfg = TrainConfig::default();
    let homophilous = SyntheticSpec { homophily: 0.9, seed: 1, ..SyntheticSpec::default() };
    let (g, x) = generate(&homophilous).map_err(err)?;
    let splits = make_splits(&g, 0, 5).map_err(err)?;
    let row = &tau_sweep(&g, &x, 10, &[0.9], &cfg, &splits).map_err(err)?[0];
    let homo_ok = row.mean >= 0.95;

    let heterophilous = SyntheticSpec { homophily: 0.1, seed: 1, ..SyntheticSpec::default() };
    let (gh, xh) = generate(&heterophilous).map_err(err)?;
    let splits_h = make_splits(&gh, 0, 5).map_err(err)?;
    let grid = [0.1, 0.3, 0.5, 0.7, 0.9, 1.0];
    let rows = tau_sweep(&gh, &xh, 10, &grid, &cfg, &splits_h).map_err(err)?;
    let at_low = rows[0].mean;
    let best = rows.iter().max_by(|a, b| a.mean.total_cmp(&b.mean)).unwrap();
    let gap = best.mean - at_low;
    let secs = start.elapsed().as_secs_f64();
    let ok = homo_ok && gap >= 0.05 && secs < 300.0;
    let curve: Vec<String> = rows.iter().map(|r| format!("{:.1}:{:.3}", r.tau, r.mean)).collect();
    Ok((
        ok,
        format!(
            "h={:.3} tau=0.9 K=10: {:.4} ± {:.4} (>= 0.95); h={:.3}: best tau {} {:.4} vs tau 0.1 {:.4}, \
             gap {:.1} pts (>= 5) [{}]; {secs:.1} s (< 300 s)",
            g.homophily_ratio().map_err(err)?,
            row.mean,
            row.std,
            gh.homophily_ratio().map_err(err)?,
            best.tau,
            best.mean,
            at_low,
            100.0 * gap,
            curve.join(" ")
        ),
    ))
}

fn cora_stretch(dir: PathBuf) -> Check {
    let (g, x) = load_graph(&dir.join("edges.tsv"), &dir.join("features.csv"), &dir.join("labels.txt"))
        .map_err(err)?;
    let basis = build_merged_basis(&g, &[0.5, 0.8, 1.1], &x, 10).map_err(err)?;
    let cfg = TrainConfig { lr: 0.10, hidden: 256, ..TrainConfig::default() };
    let splits = make_splits(&g, 0, 10).map_err(err)?;
    let accs: Vec<f64> = run_splits(&basis, &g, &splits, &cfg)
        .map_err(err)?
        .iter()
        .map(|(o, _, _)| o.test_acc)
        .collect();
    let (mean, std) = mean_std(&accs);
    let pct = 100.0 * mean;
    Ok((
        (88.0..=91.9).contains(&pct),
        format!("10 splits, taus {{0.5,0.8,1.1}}, K=10, lr 0.10, hidden 256: {pct:.2} ± {:.2} (band [88.0, 91.9])", 100.0 * std),
    ))
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("1 spectrum monotonicity", spectrum_monotonicity),
        ("2 mixing bound", mixing_bound_convergence),
        ("3 information loss", information_loss_bound),
        ("4 basis unification", basis_unification),
        ("5 merged-basis identity", merge_identity),
        ("6 lanczos orthogonalization", lanczos_orthogonalization),
        ("7 gradient correctness", gradient_check),
        ("8 end-to-end synthetic", end_to_end_synthetic),
    ];
    let mut failed = Vec::new();
    for (name, f) in criteria {
        let start = Instant::now();
        let (ok, detail) = match f() {
            Ok(v) => v,
            Err(e) => (false, format!("error: {e}")),
        };
        println!(
            "[{}] {name}: {detail} ({:.2} s)",
            if ok { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
        if !ok {
            failed.push(name);
        }
    }
    match std::env::var_os("ADAPTKRY_CORA_DIR") {
        None => println!("[SKIP] 9 cora stretch (non-gating): set ADAPTKRY_CORA_DIR to run"),
        Some(dir) => {
            let (ok, detail) = cora_stretch(PathBuf::from(dir)).unwrap_or_else(|e| (false, format!("error: {e}")));
            println!("[{}] 9 cora stretch (non-gating): {detail}", if ok { "PASS" } else { "FAIL" });
        }
    }
    if failed.is_empty() {
        println!("acceptance: all gating criteria passed");
    } else {
        println!("acceptance: {} failed: {}", failed.len(), failed.join(", "));
        std::process::exit(1);
    }
}
