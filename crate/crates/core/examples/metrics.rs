//! MSE, PSNR, SSIM, ERGAS and SAM of a noisy image against its reference.

use tubal::metrics::{ergas, mse, psnr, sam, ssim, MetricsReport, SsimParams};
use tubal::synth::add_gaussian_noise;
use tubal::DenseTensor3;

fn main() -> tubal::Result<()> {
    let reference = DenseTensor3::from_fn((32, 32, 3), |i, j, k| {
        0.2 + 0.6 * ((i * (k + 1) + j) % 32) as f64 / 31.0
    })?;
    for sigma in [0.01, 0.05, 0.1] {
        let noisy = add_gaussian_noise(&reference, sigma, 3)?;
        println!(
            "sigma {sigma:<5} mse {:.2e}  psnr {:6.2}  ssim {:.4}  ergas {:7.3}  sam {:.4}",
            mse(&reference, &noisy)?,
            psnr(&reference, &noisy, 1.0)?,
            ssim(&reference, &noisy, &SsimParams::with_peak(1.0))?,
            ergas(&reference, &noisy, 1.0)?,
            sam(&reference, &noisy)?
        );
    }
    let same = MetricsReport::compute(&reference, &reference, 1.0)?;
    println!("identical inputs: psnr {}, ssim {}", same.psnr, same.ssim);
    Ok(())
}
