//! Separate a low-rank tensor from sparse gross corruption.

use tubal::solvers::{convex_trpca, default_lambda, trpca_mm, AdmmSettings, RpcaConfig};
use tubal::synth::{add_salt_pepper, synth_low_tubal_rank};

fn main() -> tubal::Result<()> {
    let low = synth_low_tubal_rank((30, 30, 8), 2, 4)?;
    let peak = low.max_abs();
    let x = add_salt_pepper(&low, 0.1, peak, 5)?;
    let corrupted = x.as_slice().iter().zip(low.as_slice()).filter(|(a, b)| a != b).count();
    println!("{corrupted} of {} entries corrupted", x.len());

    let cfg = RpcaConfig {
        admm: AdmmSettings { mu0: 1e-3, ..AdmmSettings::default() },
        ..RpcaConfig::default()
    };
    let convex = convex_trpca(&x, default_lambda(x.dims()), &cfg)?;
    println!("convex   low-rank error {:.3e}", convex.estimate.relative_error(&low)?);

    let r = trpca_mm(&x, &cfg)?;
    let sparse = r.sparse.as_ref().expect("rpca returns a sparse part");
    let support = sparse.as_slice().iter().filter(|v| v.abs() > 1e-6).count();
    println!("mcp      low-rank error {:.3e}, sparse support {support}", r.estimate.relative_error(&low)?);
    Ok(())
}
