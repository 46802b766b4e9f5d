//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails. Numeric arguments select criteria, e.g.
//! `cargo test --test acceptance -- 7 8`.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use common::*;
use rand::Rng;
use tubal::algebra::{conj_transpose, identity_tensor, t_product};
use tubal::metrics::psnr;
use tubal::operators::{generalized_soft_threshold, generalized_tsvt, WeightTensor};
use tubal::penalties::{
    gamma_norm, penalty_derivative, penalty_value, q_rank_value, q_sparsity_value,
    sparsity_measure, PenaltyKind, PenaltyParams,
};
use tubal::solvers::{
    convex_tc, convex_trpca, default_lambda, lrtc_mm, trpca_mm, RpcaConfig, SolveReport, TcConfig,
};
use tubal::synth::{add_gaussian_noise, normalize_peak, random_mask, synth_low_tubal_rank};
use tubal::tensor::DenseTensor3;
use tubal::tsvd::{spectral_singular_values, t_svd, tensor_nuclear_norm};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

const KINDS: [PenaltyKind; 2] = [PenaltyKind::Scad, PenaltyKind::Mcp];

fn c1_t_product() -> Outcome {
    let start = Instant::now();
    let mut r = rng(101);
    let mut worst = 0.0f64;
    for case in 0..100 {
        let (da, db) = conformable_dims(&mut r, 6);
        let a = random_tensor(da, &mut r);
        let b = random_tensor(db, &mut r);
        let err = rel_diff(&t_product(&a, &b).unwrap(), &bcirc_product(&a, &b));
        worst = worst.max(err);
        ensure!(err <= 1e-10, "case {case} {da:?}x{db:?}: relative error {err:e}");
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
    Ok(format!("worst relative error {worst:.1e}, {elapsed:.2?}"))
}

fn random_tsvd_dims(r: &mut rand_chacha::ChaCha8Rng) -> (usize, usize, usize) {
    (r.random_range(1..=12), r.random_range(1..=10), r.random_range(1..=7))
}

fn c2_tsvd_contract() -> Outcome {
    let start = Instant::now();
    let mut r = rng(202);
    let (mut rec_worst, mut orth_worst, mut imag_worst) = (0.0f64, 0.0f64, 0.0f64);
    for case in 0..100 {
        let dims = random_tsvd_dims(&mut r);
        let (n1, n2, n3) = dims;
        let a = random_tensor(dims, &mut r);
        let f = t_svd(&a).map_err(|e| format!("case {case} {dims:?}: {e}"))?;

        let us = bcirc_product(&f.u, &f.s);
        let rec = rel_diff(&bcirc_product(&us, &conj_transpose(&f.v)), &a);
        let orth_u = rel_diff(
            &bcirc_product(&conj_transpose(&f.u), &f.u),
            &identity_tensor(n1, n3).unwrap(),
        );
        let orth_v = rel_diff(
            &bcirc_product(&conj_transpose(&f.v), &f.v),
            &identity_tensor(n2, n3).unwrap(),
        );
        rec_worst = rec_worst.max(rec);
        orth_worst = orth_worst.max(orth_u).max(orth_v);
        ensure!(rec <= 1e-8, "case {case} {dims:?}: reconstruction {rec:e}");
        ensure!(orth_u.max(orth_v) <= 1e-8, "case {case} {dims:?}: orthogonality {orth_u:e}/{orth_v:e}");

        // The f-diagonal factor's spectrum, computed independently, must be
        // the real, sorted, nonnegative spectral diagonal.
        let s_hat = naive_dft(&f.s);
        let scale = f.spectrum.max().max(1.0);
        for (k, m) in s_hat.iter().enumerate() {
            let values = f.spectrum.slice(k);
            ensure!(values.windows(2).all(|w| w[0] >= w[1]), "case {case}: slice {k} unsorted");
            ensure!(values.iter().all(|&v| v >= 0.0), "case {case}: negative value");
            for i in 0..n1 {
                for j in 0..n2 {
                    let z = m[(i, j)];
                    let expected = if i == j { values[i] } else { 0.0 };
                    imag_worst = imag_worst.max(z.im.abs());
                    ensure!(
                        (z.re - expected).abs() <= 1e-9 * scale && z.im.abs() <= 1e-9 * scale,
                        "case {case} {dims:?}: S spectrum ({i},{j},{k}) = {z}, expected {expected}"
                    );
                }
            }
        }
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
    Ok(format!(
        "reconstruction {rec_worst:.1e}, orthogonality {orth_worst:.1e}, imaginary {imag_worst:.1e}, {elapsed:.2?}"
    ))
}

fn c3_tnn_formulas() -> Outcome {
    let mut r = rng(202);
    let mut worst = 0.0f64;
    for case in 0..100 {
        let dims = random_tsvd_dims(&mut r);
        let a = random_tensor(dims, &mut r);
        let f = t_svd(&a).map_err(|e| e.to_string())?;
        let original = f.nuclear_norm();
        let spectral = f.spectrum.nuclear_norm();
        let brute = brute_tnn(&a);
        let err = ((original - spectral).abs() / spectral)
            .max((spectral - brute).abs() / brute);
        worst = worst.max(err);
        ensure!(err <= 1e-9, "case {case} {dims:?}: {original} vs {spectral} vs {brute}");
    }
    Ok(format!("worst relative gap {worst:.1e} over 100 tensors"))
}

/// Grid covering every piece of the penalty plus 50 random points.
fn grid(p: &PenaltyParams, r: &mut rand_chacha::ChaCha8Rng) -> Vec<f64> {
    let (l, g) = (p.lambda(), p.gamma());
    let mut t = vec![0.0, l / 2.0, l, (l + g * l) / 2.0, g * l, 2.0 * g * l];
    t.extend((0..50).map(|_| r.random_range(0.0..3.0 * g * l)));
    t
}

fn c4_penalty_properties() -> Outcome {
    let mut r = rng(404);
    let mut failures: Vec<String> = Vec::new();
    let mut checks = 0usize;
    let mut check = |ok: bool, what: String| {
        checks += 1;
        if !ok && failures.len() < 5 {
            failures.push(what);
        }
    };
    let settings = [(1.0, 3.7), (0.5, 2.0), (2.0, 1.5), (1.0, 25.0), (0.1, 10.0)];
    for kind in KINDS {
        for &(lambda, gamma) in &settings {
            let p = PenaltyParams::new(kind, lambda, gamma).unwrap();
            let ts = grid(&p, &mut r);
            let bigger = PenaltyParams::new(kind, lambda, gamma * 1.7).unwrap();
            let limit = PenaltyParams::new(kind, lambda, 1e8).unwrap();
            for &t in &ts {
                let v = penalty_value(&p, t);
                check(v >= 0.0, format!("{p:?} nonnegative at {t}"));
                check((v == 0.0) == (t == 0.0), format!("{p:?} zero iff zero at {t}"));
                check(penalty_value(&bigger, t) >= v, format!("{p:?} gamma-monotone at {t}"));
                let lim = (penalty_value(&limit, t) - lambda * t).abs();
                check(lim <= 1e-6 * lambda * t, format!("{p:?} limit at {t}: {lim:e}"));
                check(v <= lambda * t + 1e-15, format!("{p:?} below l1 at {t}"));
                for &s in &ts {
                    let mid = penalty_value(&p, 0.5 * (s + t));
                    let avg = 0.5 * (penalty_value(&p, s) + penalty_value(&p, t));
                    check(mid >= avg - 1e-12, format!("{p:?} concave at ({s},{t})"));
                    let tangent = penalty_value(&p, s) + penalty_derivative(&p, s).unwrap() * (t - s);
                    check(v <= tangent + 1e-12, format!("{p:?} tangent at ({s},{t})"));
                }
            }
        }
    }

    for case in 0..50 {
        let kind = KINDS[case % 2];
        let lambda = r.random_range(0.1..2.0);
        let gamma = r.random_range(1.5..30.0);
        let p = PenaltyParams::new(kind, lambda, gamma).unwrap();
        let rank = PenaltyParams::rank(kind, gamma).unwrap();
        let dims = (r.random_range(2..=6), r.random_range(2..=6), r.random_range(1..=5));
        let a = random_tensor(dims, &mut r).scale(r.random_range(0.5..4.0) * gamma);
        let b = random_tensor(dims, &mut r).scale(r.random_range(0.5..4.0) * gamma);

        // Sparsity measure.
        let phi = sparsity_measure(&p, &a);
        check(phi <= lambda * a.l1_norm() + 1e-12, format!("Phi <= l1, case {case}"));
        let (abs_a, abs_b) = (a.map(f64::abs), b.map(f64::abs));
        let mid = abs_a.add(&abs_b).unwrap().scale(0.5);
        let lhs = sparsity_measure(&p, &mid);
        let rhs = 0.5 * (sparsity_measure(&p, &abs_a) + sparsity_measure(&p, &abs_b));
        check(lhs >= rhs - 1e-9, format!("Phi midpoint concavity, case {case}"));
        let q = q_sparsity_value(&p, &b, &a).unwrap();
        check(q >= sparsity_measure(&p, &b) - 1e-9, format!("Q_Phi majorizes, case {case}"));

        // Gamma-norm.
        let gn = gamma_norm(&rank, &a).unwrap();
        let tnn = tensor_nuclear_norm(&a).unwrap();
        check(gn <= tnn * (1.0 + 1e-12), format!("gamma-norm <= TNN, case {case}"));
        let qr = q_rank_value(&rank, &b, &a).unwrap();
        check(qr >= gamma_norm(&rank, &b).unwrap() - 1e-9, format!("Q_gamma majorizes, case {case}"));
        let (n1, n2, n3) = dims;
        let pu = random_orthogonal(n1, n3, 7000 + case as u64);
        let qv = random_orthogonal(n2, n3, 8000 + case as u64);
        let rotated = t_product(&t_product(&pu, &a).unwrap(), &qv).unwrap();
        let inv = (gamma_norm(&rank, &rotated).unwrap() - gn).abs();
        check(inv <= 1e-8 * gn.max(1.0), format!("orthogonal invariance {inv:e}, case {case}"));
        let unit = random_tensor(dims, &mut r);
        let unit_tnn = tensor_nuclear_norm(&unit).unwrap();
        let limit = PenaltyParams::rank(kind, 1e6).unwrap();
        let lim = (gamma_norm(&limit, &unit).unwrap() - unit_tnn).abs();
        check(lim <= 1e-4 * unit_tnn, format!("gamma-norm limit {lim:e}, case {case}"));

        // Concavity in the spectral values with U, V fixed.
        let spec_a = spectral_singular_values(&a).unwrap();
        let spec_b = spectral_singular_values(&b).unwrap();
        let unit = rank.with_unit_lambda();
        let f = |v: &[Vec<f64>]| -> f64 {
            v.iter().flatten().map(|&s| penalty_value(&unit, s)).sum::<f64>() / n3 as f64
        };
        let mid: Vec<Vec<f64>> = spec_a
            .slices()
            .iter()
            .zip(spec_b.slices())
            .map(|(x, y)| x.iter().zip(y).map(|(s, t)| 0.5 * (s + t)).collect())
            .collect();
        check(
            f(&mid) >= 0.5 * (f(spec_a.slices()) + f(spec_b.slices())) - 1e-9,
            format!("spectral concavity, case {case}"),
        );
    }
    let n = checks;
    if failures.is_empty() {
        Ok(format!("{n} checks, 0 failures"))
    } else {
        Err(format!("failures out of {n} checks: {}", failures.join("; ")))
    }
}

fn perturbation_check(
    objective: impl Fn(&DenseTensor3) -> f64,
    at: &DenseTensor3,
    r: &mut rand_chacha::ChaCha8Rng,
) -> Result<(), String> {
    let base = objective(at);
    for trial in 0..100 {
        let delta = random_tensor(at.dims(), r).scale(1e-3);
        let other = objective(&at.add(&delta).unwrap());
        if other < base - 1e-12 * (1.0 + base.abs()) {
            return Err(format!("perturbation {trial} lowers objective {base} -> {other}"));
        }
    }
    Ok(())
}

fn c5_proximal_optimality() -> Outcome {
    let mut r = rng(505);
    let half_sq = |a: &DenseTensor3, b: &DenseTensor3| {
        let d = a.sub(b).unwrap().frobenius_norm();
        0.5 * d * d
    };
    for kind in KINDS {
        for case in 0..100 {
            let gamma = r.random_range(1.5..8.0);
            let mu = r.random_range(0.2..5.0);

            // Generalized soft thresholding (sparsity surrogate).
            let lambda = r.random_range(0.2..2.0);
            let p = PenaltyParams::new(kind, lambda, gamma).unwrap();
            let y = random_tensor((4, 4, 3), &mut r).scale(2.0 * gamma * lambda);
            let x_old = random_tensor((4, 4, 3), &mut r).scale(2.0 * gamma * lambda);
            let w = WeightTensor::new(
                x_old.map(|v| penalty_derivative(&p, v.abs()).unwrap() / mu),
            )
            .unwrap();
            let out = generalized_soft_threshold(&y, &w).unwrap();
            perturbation_check(
                |x| q_sparsity_value(&p, x, &x_old).unwrap() + mu * half_sq(x, &y),
                &out,
                &mut r,
            )
            .map_err(|e| format!("soft threshold {kind} case {case}: {e}"))?;

            // Generalized t-SVT (rank surrogate).
            let rank = PenaltyParams::rank(kind, gamma).unwrap();
            let y = random_tensor((5, 5, 4), &mut r).scale(gamma);
            let x_old = random_tensor((5, 5, 4), &mut r).scale(gamma);
            let s_old = spectral_singular_values(&x_old).unwrap();
            let w = WeightTensor::diagonal((5, 5, 4), |i, k| {
                penalty_derivative(&rank, s_old.get(i, k)).unwrap() / mu
            })
            .unwrap();
            let out = generalized_tsvt(&y, &w).unwrap();
            perturbation_check(
                |x| q_rank_value(&rank, x, &x_old).unwrap() + mu * half_sq(x, &y),
                &out,
                &mut r,
            )
            .map_err(|e| format!("t-SVT {kind} case {case}: {e}"))?;
        }
    }

    // Constant weights against the brute-force full-spectrum oracle.
    let mut worst = 0.0f64;
    for case in 0..20 {
        let dims = (r.random_range(1..=6), r.random_range(1..=6), r.random_range(1..=6));
        let y = random_tensor(dims, &mut r).scale(3.0);
        let tau = r.random_range(0.0..2.0);
        let fast = generalized_tsvt(&y, &WeightTensor::diagonal(dims, |_, _| tau).unwrap()).unwrap();
        let (slow, _) = brute_tsvt(&y, |_, _| tau);
        let d = fast.max_abs_diff(&slow).unwrap();
        worst = worst.max(d);
        ensure!(d <= 1e-10, "constant t-SVT case {case} {dims:?}: {d:e}");
        let soft = generalized_soft_threshold(&y, &WeightTensor::constant(dims, tau).unwrap()).unwrap();
        let expected = y.map(|v| v.signum() * (v.abs() - tau).max(0.0));
        ensure!(soft.max_abs_diff(&expected).unwrap() <= 1e-15, "constant soft threshold case {case}");
    }
    Ok(format!(
        "2 operators x 2 penalties x 100 triples x 100 perturbations, constant-weight gap {worst:.1e}"
    ))
}

fn tc_config() -> TcConfig {
    TcConfig {
        admm: synthetic_admm(),
        ..TcConfig::default()
    }
}

fn rpca_config() -> RpcaConfig {
    RpcaConfig {
        admm: synthetic_admm(),
        ..RpcaConfig::default()
    }
}

fn max_increase(trace: &[f64]) -> f64 {
    trace.windows(2).map(|w| w[1] - w[0]).fold(f64::NEG_INFINITY, f64::max)
}

fn c6_mm_descent() -> Outcome {
    let mut worst = f64::NEG_INFINITY;
    let (mut accepted, mut rejected) = (0usize, 0usize);
    let mut tally = |report: &SolveReport, outer: usize| {
        accepted += report.outer_iterations;
        if report.outer_iterations < outer {
            rejected += 1;
        }
    };
    for seed in 0..20u64 {
        let truth = synth_low_tubal_rank((30, 30, 10), 3, seed).unwrap();
        let noisy = add_gaussian_noise(&truth, 0.5, 100 + seed).unwrap();
        let mask = random_mask(truth.dims(), 0.5, 200 + seed).unwrap();
        let o = mask.apply(&noisy).unwrap();
        let cfg = tc_config();
        let r = lrtc_mm(&o, &mask, &cfg).unwrap();
        let inc = max_increase(&r.objective_trace);
        worst = worst.max(inc);
        ensure!(inc <= 1e-8, "TC seed {seed}: objective rose by {inc:e}");
        tally(&r, cfg.outer_iters);

        let (_, x) = rpca_instance((30, 30, 10), 2, 0.1, 300 + seed);
        let x = add_gaussian_noise(&x, 0.5, 400 + seed).unwrap();
        let cfg = rpca_config();
        let r = trpca_mm(&x, &cfg).unwrap();
        let inc = max_increase(&r.objective_trace);
        worst = worst.max(inc);
        ensure!(inc <= 1e-8, "TRPCA seed {seed}: objective rose by {inc:e}");
        tally(&r, cfg.outer_iters);
    }
    Ok(format!(
        "largest step change {worst:.2e}; {accepted} outer steps accepted, {rejected} runs ended early on a rejected ascent step"
    ))
}

fn c7_limit_consistency() -> Outcome {
    let mut worst = 0.0f64;
    for seed in 0..3u64 {
        let truth = synth_low_tubal_rank((30, 30, 10), 3, 700 + seed).unwrap();
        let noisy = add_gaussian_noise(&truth, 0.3, 710 + seed).unwrap();
        let mask = random_mask(truth.dims(), 0.6, 720 + seed).unwrap();
        let o = mask.apply(&noisy).unwrap();
        let convex = convex_tc(&o, &mask, &tc_config()).unwrap();
        let (_, x) = rpca_instance((30, 30, 10), 2, 0.05, 730 + seed);
        let cfg = rpca_config();
        let convex_r = convex_trpca(&x, default_lambda(x.dims()), &cfg).unwrap();
        for kind in KINDS {
            let cfg = TcConfig { penalty: kind, gamma: 1e8, outer_iters: 1, ..tc_config() };
            let mm = lrtc_mm(&o, &mask, &cfg).unwrap();
            let d = mm.estimate.relative_error(&convex.estimate).unwrap();
            worst = worst.max(d);
            ensure!(d <= 1e-6, "TC seed {seed} {kind}: {d:e}");

            let cfg = RpcaConfig {
                penalty: kind,
                gamma_rank: 1e8,
                gamma_sparse: 1e8,
                outer_iters: 1,
                ..rpca_config()
            };
            let mm = trpca_mm(&x, &cfg).unwrap();
            let d = mm.estimate.relative_error(&convex_r.estimate).unwrap();
            worst = worst.max(d);
            ensure!(d <= 1e-6, "TRPCA seed {seed} {kind}: {d:e}");
        }
    }
    Ok(format!("worst relative gap {worst:.1e} (3 seeds x 2 penalties x 2 tasks)"))
}

fn c8_exact_recovery() -> Outcome {
    let start = Instant::now();
    let truth = synth_low_tubal_rank((30, 30, 10), 3, 808).unwrap();
    let mask = random_mask(truth.dims(), 0.8, 809).unwrap();
    let o = mask.apply(&truth).unwrap();
    let cfg = tc_config();
    let convex = convex_tc(&o, &mask, &cfg).unwrap();
    let ce = convex.estimate.relative_error(&truth).unwrap();
    let mm = lrtc_mm(&o, &mask, &cfg).unwrap();
    let me = mm.estimate.relative_error(&truth).unwrap();
    let tc_time = start.elapsed();
    ensure!(ce <= 1e-3, "convex TC error {ce:e}");
    ensure!(me <= ce, "MCP TC error {me:e} above convex {ce:e}");
    ensure!(tc_time < Duration::from_secs(60), "TC took {tc_time:?}");

    let start = Instant::now();
    let (low, x) = rpca_instance((30, 30, 10), 2, 0.05, 810);
    let cfg = rpca_config();
    let convex = convex_trpca(&x, default_lambda(x.dims()), &cfg).unwrap();
    let cre = convex.estimate.relative_error(&low).unwrap();
    let mm = trpca_mm(&x, &cfg).unwrap();
    let mre = mm.estimate.relative_error(&low).unwrap();
    let rpca_time = start.elapsed();
    ensure!(cre <= 1e-3, "convex TRPCA error {cre:e}");
    ensure!(mre <= 1e-3, "MCP TRPCA error {mre:e}");
    ensure!(mre <= cre, "MCP TRPCA error {mre:e} above convex {cre:e}");
    ensure!(rpca_time < Duration::from_secs(60), "TRPCA took {rpca_time:?}");
    Ok(format!(
        "TC convex {ce:.1e} / mcp {me:.1e} ({tc_time:.1?}); TRPCA convex {cre:.1e} / mcp {mre:.1e} ({rpca_time:.1?})"
    ))
}

fn c9_directional() -> Outcome {
    let (mut convex_sum, mut mcp_sum, mut scad_sum) = (0.0, 0.0, 0.0);
    let n = 10;
    for seed in 0..n as u64 {
        let truth = normalize_peak(&synth_low_tubal_rank((64, 64, 3), 5, 900 + seed).unwrap(), 1.0);
        let noisy = add_gaussian_noise(&truth, 0.01, 910 + seed).unwrap();
        let mask = random_mask(truth.dims(), 0.4, 920 + seed).unwrap();
        let o = mask.apply(&noisy).unwrap();
        let convex = convex_tc(&o, &mask, &tc_config()).unwrap();
        convex_sum += psnr(&truth, &convex.estimate, 1.0).unwrap();
        for (kind, sum) in [(PenaltyKind::Mcp, &mut mcp_sum), (PenaltyKind::Scad, &mut scad_sum)] {
            let cfg = TcConfig { admm: synthetic_admm(), ..TcConfig::one_step_lla(kind, 25.0) };
            let r = lrtc_mm(&o, &mask, &cfg).unwrap();
            *sum += psnr(&truth, &r.estimate, 1.0).unwrap();
        }
    }
    let (c, m, s) = (convex_sum / n as f64, mcp_sum / n as f64, scad_sum / n as f64);
    ensure!(m >= c, "mean PSNR mcp {m:.3} below convex {c:.3}");
    ensure!((m - s).abs() <= 0.1, "SCAD/MCP gap {:.3} dB", (m - s).abs());
    Ok(format!("mean PSNR convex {c:.3} dB, mcp {m:.3} dB, scad {s:.3} dB"))
}

fn run_cli(dir: &Path, args: &[&str]) -> Result<(), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_tubal"))
        .current_dir(dir)
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    ensure!(out.status.success(), "tubal {args:?}: {}", String::from_utf8_lossy(&out.stderr));
    Ok(())
}

fn c10_determinism() -> Outcome {
    const SPEC: &str = r#"{
  "task": "complete",
  "seed": 42,
  "source": {"synth": {"dims": [16, 14, 5], "rank": 2}},
  "degrade": {"gaussian_sigma": 0.05, "mask_rate": 0.6},
  "solver": {"penalty": "mcp", "mu0": 0.001, "outer_iters": 3},
  "outputs": {"estimate": "x.tns", "report": "report.txt"}
}"#;
    let pipeline: &[&[&str]] = &[
        &["synth", "--dims", "12,10,4", "--rank", "2", "--seed", "5", "--out", "t.tns"],
        &["degrade", "--in", "t.tns", "--mask-rate", "0.7", "--seed", "6", "--out", "o.tns", "--mask-out", "m.tns"],
        &["complete", "--in", "o.tns", "--mask", "m.tns", "--penalty", "scad", "--mu0", "1e-3", "--outer-iters", "2", "--out", "c.tns", "--report", "c.txt"],
        &["degrade", "--in", "t.tns", "--salt-pepper", "0.05", "--peak", "3", "--seed", "7", "--out", "s.tns"],
        &["rpca", "--in", "s.tns", "--penalty", "mcp", "--mu0", "1e-3", "--outer-iters", "2", "--out-l", "l.tns", "--out-e", "e.tns", "--report", "r.txt"],
        &["metrics", "--ref", "t.tns", "--est", "c.tns", "--peak", "1", "--report", "m.txt"],
        &["tsvd", "--in", "c.tns", "--dump-spectrum", "spec.tns"],
        &["run", "--spec", "spec.json"],
    ];
    let files = [
        "t.tns", "o.tns", "m.tns", "c.tns", "c.txt", "c.txt.json", "s.tns", "l.tns", "e.tns",
        "r.txt", "r.txt.json", "m.txt", "m.txt.json", "spec.tns", "x.tns", "report.txt",
        "report.txt.json",
    ];
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for dir in &dirs {
        std::fs::write(dir.path().join("spec.json"), SPEC).unwrap();
        for args in pipeline {
            run_cli(dir.path(), args)?;
        }
    }
    let mut bytes = 0;
    for f in files {
        let a = std::fs::read(dirs[0].path().join(f)).map_err(|e| format!("{f}: {e}"))?;
        let b = std::fs::read(dirs[1].path().join(f)).map_err(|e| format!("{f}: {e}"))?;
        ensure!(a == b, "{f} differs between runs");
        bytes += a.len();
    }
    Ok(format!("{} commands twice, {} files ({bytes} bytes) identical", pipeline.len(), files.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("t-product oracle equivalence", c1_t_product),
        ("t-SVD contract", c2_tsvd_contract),
        ("TNN dual formula agreement", c3_tnn_formulas),
        ("penalty property suite", c4_penalty_properties),
        ("proximal optimality", c5_proximal_optimality),
        ("MM descent", c6_mm_descent),
        ("gamma -> infinity solver consistency", c7_limit_consistency),
        ("synthetic exact recovery", c8_exact_recovery),
        ("directional improvement", c9_directional),
        ("determinism", c10_determinism),
    ];
    let selected: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (idx, (name, run)) in criteria.iter().enumerate() {
        let number = idx + 1;
        if !selected.is_empty() && !selected.contains(&number) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|panic| {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {number:>2} PASS  {name}: {detail} [{secs:.1}s]"),
            Err(detail) => {
                failed += 1;
                println!("criterion {number:>2} FAIL  {name}: {detail} [{secs:.1}s]");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
