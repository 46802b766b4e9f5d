//! SCAD and MCP, their derivatives, and the gamma-norm as gamma grows.

use tubal::penalties::{gamma_norm, PenaltyKind, PenaltyParams};
use tubal::random::standard_normal_tensor;
use tubal::tsvd::tensor_nuclear_norm;

fn main() -> tubal::Result<()> {
    let scad = PenaltyParams::scad(1.0, 3.7)?;
    let mcp = PenaltyParams::mcp(1.0, 3.7)?;
    println!("{:>6} {:>10} {:>10} {:>10} {:>10}", "t", "scad", "scad'", "mcp", "mcp'");
    for t in [0.0, 0.5, 1.0, 2.0, 3.0, 3.7, 5.0] {
        println!(
            "{t:>6.2} {:>10.4} {:>10.4} {:>10.4} {:>10.4}",
            scad.value(t),
            scad.derivative(t)?,
            mcp.value(t),
            mcp.derivative(t)?
        );
    }

    let a = standard_normal_tensor((8, 8, 5), 1)?;
    let tnn = tensor_nuclear_norm(&a)?;
    println!("\nTNN = {tnn:.6}");
    for gamma in [1.5, 10.0, 100.0, 1e4, 1e6] {
        let s = gamma_norm(&PenaltyParams::rank(PenaltyKind::Scad, gamma)?, &a)?;
        let m = gamma_norm(&PenaltyParams::rank(PenaltyKind::Mcp, gamma)?, &a)?;
        println!("gamma {gamma:>8}: scad {s:.6}  mcp {m:.6}");
    }
    Ok(())
}
