mod common;

use common::{rpca_instance, synthetic_admm};
use tubal::penalties::{gamma_norm, PenaltyKind, PenaltyParams};
use tubal::solvers::{
    admm_tc_inner, convex_tc, convex_trpca, default_lambda, lrtc_mm, trpca_mm, AdmmSettings,
    DualInit, RpcaConfig, SpectralWeights, TcConfig, TcInit, WeightScaling,
};
use tubal::synth::{add_gaussian_noise, random_mask, synth_low_tubal_rank};
use tubal::tensor::{inverse_perm, permute_modes};

fn tc_instance(rank: usize, rate: f64, seed: u64) -> (tubal::DenseTensor3, tubal::ObservationMask, tubal::DenseTensor3) {
    let truth = synth_low_tubal_rank((30, 30, 10), rank, seed).unwrap();
    let mask = random_mask(truth.dims(), rate, seed + 500).unwrap();
    let o = mask.apply(&truth).unwrap();
    (truth, mask, o)
}

#[test]
fn feasibility_driven_below_tolerance() {
    for seed in 0..20 {
        let (_, mask, o) = tc_instance(3, 0.7, seed);
        let w = SpectralWeights::constant(10, 30, 1.0);
        let (x, _, trace) = admm_tc_inner(&o, &mask, &mask.apply(&o).unwrap(), &w, &synthetic_admm()).unwrap();
        assert!(trace.converged);
        assert!(trace.final_residual() <= 1e-7);
        assert!(trace.final_residual() <= 1e-6 * trace.residuals[0], "seed {seed}");
        for (idx, &obs) in mask.as_slice().iter().enumerate() {
            if obs {
                assert_eq!(x.as_slice()[idx], o.as_slice()[idx]);
            }
        }
    }
}

#[test]
fn nonconvex_completion_not_worse_than_convex() {
    for seed in 0..3 {
        let (truth, mask, o) = tc_instance(3, 0.6, seed);
        let cfg = TcConfig { admm: synthetic_admm(), ..TcConfig::default() };
        let convex = convex_tc(&o, &mask, &cfg).unwrap();
        let mm = lrtc_mm(&o, &mask, &cfg).unwrap();
        let ce = convex.estimate.relative_error(&truth).unwrap();
        let me = mm.estimate.relative_error(&truth).unwrap();
        assert!(me <= ce, "seed {seed}: {me} > {ce}");
    }
}

#[test]
fn one_step_never_raises_gamma_norm() {
    for seed in 0..20 {
        let (truth, mask, _) = tc_instance(3, 0.5, seed);
        let noisy = add_gaussian_noise(&truth, 0.5, seed + 7).unwrap();
        let o = mask.apply(&noisy).unwrap();
        for kind in [PenaltyKind::Mcp, PenaltyKind::Scad] {
            let cfg = TcConfig { admm: synthetic_admm(), ..TcConfig::one_step_lla(kind, 25.0) };
            let r = lrtc_mm(&o, &mask, &cfg).unwrap();
            let p = PenaltyParams::rank(kind, 25.0).unwrap();
            let start = r.objective_trace[0];
            let end = gamma_norm(&p, &r.estimate).unwrap();
            assert!(end <= start + 1e-8, "seed {seed} {kind}: {start} -> {end}");
        }
    }
}

#[test]
fn twist_is_a_permuted_solve() {
    let (_, mask, o) = tc_instance(2, 0.6, 4);
    let perm = [2, 0, 1];
    let base = TcConfig { admm: synthetic_admm(), outer_iters: 2, ..TcConfig::default() };
    let twisted = lrtc_mm(&o, &mask, &TcConfig { twist: Some(perm), ..base.clone() }).unwrap();
    let direct = lrtc_mm(
        &permute_modes(&o, perm).unwrap(),
        &mask.permute(perm).unwrap(),
        &base,
    )
    .unwrap();
    let back = permute_modes(&direct.estimate, inverse_perm(perm).unwrap()).unwrap();
    assert_eq!(twisted.estimate, back);
    assert_eq!(twisted.objective_trace, direct.objective_trace);

    let (_, x) = rpca_instance((12, 10, 6), 2, 0.05, 9);
    let rcfg = RpcaConfig { admm: synthetic_admm(), outer_iters: 2, ..RpcaConfig::default() };
    let twisted = trpca_mm(&x, &RpcaConfig { twist: Some(perm), ..rcfg.clone() }).unwrap();
    let direct = trpca_mm(&permute_modes(&x, perm).unwrap(), &rcfg).unwrap();
    let inv = inverse_perm(perm).unwrap();
    assert_eq!(twisted.estimate, permute_modes(&direct.estimate, inv).unwrap());
    assert_eq!(
        twisted.sparse.unwrap(),
        permute_modes(&direct.sparse.unwrap(), inv).unwrap()
    );
}

#[test]
fn solves_are_deterministic() {
    let (_, mask, o) = tc_instance(3, 0.5, 11);
    let cfg = TcConfig { admm: synthetic_admm(), outer_iters: 3, ..TcConfig::default() };
    let a = lrtc_mm(&o, &mask, &cfg).unwrap();
    let b = lrtc_mm(&o, &mask, &cfg).unwrap();
    assert_eq!(a.estimate, b.estimate);
    assert_eq!(a.objective_trace, b.objective_trace);
    assert_eq!(a.feasibility_trace, b.feasibility_trace);

    let (_, x) = rpca_instance((15, 12, 5), 2, 0.05, 3);
    let rcfg = RpcaConfig {
        admm: synthetic_admm(),
        outer_iters: 2,
        dual_init: DualInit::Random { seed: 4, scale: 0.01 },
        ..RpcaConfig::default()
    };
    let a = trpca_mm(&x, &rcfg).unwrap();
    let b = trpca_mm(&x, &rcfg).unwrap();
    assert_eq!(a.estimate, b.estimate);
    assert_eq!(a.feasibility_trace, b.feasibility_trace);
}

#[test]
fn convex_rpca_separates_spikes() {
    for seed in 0..3 {
        let (low, x) = rpca_instance((30, 30, 10), 2, 0.05, seed);
        let cfg = RpcaConfig { admm: synthetic_admm(), ..RpcaConfig::default() };
        let r = convex_trpca(&x, default_lambda(x.dims()), &cfg).unwrap();
        assert!(r.estimate.relative_error(&low).unwrap() <= 1e-3);
        assert!(r.final_residual() <= 1e-6);
    }
}

#[test]
fn provided_init_is_used() {
    let (truth, mask, o) = tc_instance(2, 0.8, 21);
    let cfg = TcConfig {
        admm: synthetic_admm(),
        outer_iters: 0,
        init: TcInit::Provided(truth.clone()),
        ..TcConfig::default()
    };
    let r = lrtc_mm(&o, &mask, &cfg).unwrap();
    assert_eq!(r.estimate, truth);
    assert_eq!(r.objective_trace.len(), 1);
}

#[test]
fn frozen_weights_still_complete() {
    let (truth, mask, o) = tc_instance(3, 0.8, 5);
    let admm = AdmmSettings { weight_scaling: WeightScaling::Frozen, ..synthetic_admm() };
    let cfg = TcConfig { admm, outer_iters: 2, ..TcConfig::default() };
    let r = lrtc_mm(&o, &mask, &cfg).unwrap();
    assert!(r.estimate.relative_error(&truth).unwrap() <= 1e-3);
}

#[test]
fn default_mu0_stalls_on_large_scale_data() {
    // Recorded behaviour, not a requirement: with mu0 = 1 the thresholds
    // are tiny next to spectral values in the hundreds and ADMM stops at a
    // feasible point far from the low-rank solution.
    let (truth, mask, o) = tc_instance(3, 0.8, 0);
    let r = convex_tc(&o, &mask, &TcConfig::default()).unwrap();
    assert!(r.converged);
    assert!(r.estimate.relative_error(&truth).unwrap() > 1e-2);
    let scaled = mask.apply(&o.scale(1e-3)).unwrap();
    let r = convex_tc(&scaled, &mask, &TcConfig::default()).unwrap();
    assert!(r.estimate.relative_error(&truth.scale(1e-3)).unwrap() <= 1e-3);
}
