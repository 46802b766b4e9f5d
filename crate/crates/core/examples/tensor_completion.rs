//! Recover a low-tubal-rank tensor from 50% of its entries with the convex
//! TNN solver and the SCAD/MCP majorization-minimization solver.

use tubal::solvers::{convex_tc, lrtc_mm, AdmmSettings, TcConfig};
use tubal::penalties::PenaltyKind;
use tubal::synth::{random_mask, synth_low_tubal_rank};

fn main() -> tubal::Result<()> {
    let truth = synth_low_tubal_rank((30, 30, 8), 4, 1)?;
    let mask = random_mask(truth.dims(), 0.5, 2)?;
    let observed = mask.apply(&truth)?;
    println!("observed {} of {} entries", mask.count_observed(), truth.len());

    // Spectral singular values here are in the hundreds, so start the
    // penalty parameter small.
    let admm = AdmmSettings { mu0: 1e-3, ..AdmmSettings::default() };
    let base = TcConfig { admm, ..TcConfig::default() };

    let convex = convex_tc(&observed, &mask, &base)?;
    println!("TNN      relative error {:.3e}", convex.estimate.relative_error(&truth)?);

    for penalty in [PenaltyKind::Scad, PenaltyKind::Mcp] {
        let cfg = TcConfig { penalty, ..base.clone() };
        let r = lrtc_mm(&observed, &mask, &cfg)?;
        println!(
            "{:<8} relative error {:.3e} after {} outer steps, objective {:.4} -> {:.4}",
            penalty.to_string(),
            r.estimate.relative_error(&truth)?,
            r.outer_iterations,
            r.objective_trace[0],
            r.final_objective()
        );
    }
    Ok(())
}
