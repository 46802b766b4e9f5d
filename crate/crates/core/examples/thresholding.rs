//! Weighted soft thresholding and weighted t-SVT, the two proximal steps
//! of the solvers.

use tubal::operators::{generalized_soft_threshold, generalized_tsvt, WeightTensor};
use tubal::penalties::{PenaltyKind, PenaltyParams};
use tubal::random::standard_normal_tensor;
use tubal::tsvd::{spectral_singular_values, tubal_rank};

fn main() -> tubal::Result<()> {
    let y = standard_normal_tensor((6, 6, 4), 3)?.scale(2.0);

    let soft = generalized_soft_threshold(&y, &WeightTensor::constant(y.dims(), 1.0)?)?;
    let zeros = soft.as_slice().iter().filter(|v| **v == 0.0).count();
    println!("soft threshold at 1: {zeros} of {} entries zeroed", soft.len());

    // Weights from the MCP derivative at the current spectrum: large
    // singular values are left alone, small ones shrink.
    let mcp = PenaltyParams::rank(PenaltyKind::Mcp, 4.0)?;
    let s = spectral_singular_values(&y)?;
    let w = WeightTensor::diagonal(y.dims(), |i, k| mcp.derivative(s.get(i, k)).unwrap_or(0.0) * 3.0)?;
    let x = generalized_tsvt(&y, &w)?;
    let s_x = spectral_singular_values(&x)?;
    println!("slice 0 before: {:?}", rounded(s.slice(0)));
    println!("slice 0 after:  {:?}", rounded(s_x.slice(0)));
    let nonzero = |v: &[Vec<f64>]| v.iter().flatten().filter(|s| **s > 1e-9).count();
    println!("nonzero spectral values {} -> {}", nonzero(s.slices()), nonzero(s_x.slices()));
    println!("tubal rank {}", tubal_rank(&x, 1e-9)?);
    Ok(())
}

fn rounded(v: &[f64]) -> Vec<f64> {
    v.iter().map(|x| (x * 1000.0).round() / 1000.0).collect()
}
