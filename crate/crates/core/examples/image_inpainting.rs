//! Inpaint a colour image with 60% of its pixels missing.
//!
//!     cargo run --release --example image_inpainting [image.ppm] [out-dir]
//!
//! Without arguments a smooth synthetic 64x64 picture is used.

use std::path::PathBuf;

use tubal::io::{image_to_tensor, tensor_to_image};
use tubal::metrics::MetricsReport;
use tubal::penalties::PenaltyKind;
use tubal::solvers::{convex_tc, lrtc_mm, AdmmSettings, TcConfig};
use tubal::synth::random_mask;
use tubal::DenseTensor3;

fn synthetic_picture() -> tubal::Result<DenseTensor3> {
    DenseTensor3::from_fn((64, 64, 3), |i, j, k| {
        let (x, y) = (i as f64 / 63.0, j as f64 / 63.0);
        let wave = (6.0 * x + 2.0 * k as f64).sin() * (4.0 * y).cos();
        let disc = if (x - 0.6).powi(2) + (y - 0.4).powi(2) < 0.06 { 0.25 } else { 0.0 };
        let grain = 0.03 * ((i * 7 + j * 13 + k * 5) % 11) as f64 / 10.0;
        (0.45 + 0.3 * wave + 0.15 * (x - y) * (k as f64 - 1.0) + disc + grain).clamp(0.0, 1.0)
    })
}

fn main() -> tubal::Result<()> {
    let mut args = std::env::args().skip(1);
    let image = match args.next() {
        Some(path) => image_to_tensor(path)?,
        None => synthetic_picture()?,
    };
    let out_dir = args.next().map(PathBuf::from).unwrap_or_else(std::env::temp_dir);

    let mask = random_mask(image.dims(), 0.4, 11)?;
    let observed = mask.apply(&image)?;
    tensor_to_image(out_dir.join("inpaint_observed.ppm"), &observed)?;

    let cfg = TcConfig {
        admm: AdmmSettings { mu0: 1e-3, ..AdmmSettings::default() },
        ..TcConfig::one_step_lla(PenaltyKind::Mcp, 25.0)
    };
    let convex = convex_tc(&observed, &mask, &cfg)?;
    let mcp = lrtc_mm(&observed, &mask, &cfg)?;

    for (name, est) in [("tnn", &convex.estimate), ("mcp", &mcp.estimate)] {
        let m = MetricsReport::compute(&image, est, 1.0)?;
        println!("{name}: psnr {:.2} dB, ssim {:.4}", m.psnr, m.ssim);
        tensor_to_image(out_dir.join(format!("inpaint_{name}.ppm")), est)?;
    }
    println!("images written to {}", out_dir.display());
    Ok(())
}
