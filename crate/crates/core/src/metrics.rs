//! Image and tensor quality indexes: MSE, PSNR, SSIM, ERGAS and SAM.
//!
//! Frontal slices are treated as image bands/channels and mode-3 tubes as
//! per-pixel spectra.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::DenseTensor3;

pub fn mse(reference: &DenseTensor3, estimate: &DenseTensor3) -> Result<f64> {
    reference.same_dims(estimate)?;
    let sum: f64 = reference
        .as_slice()
        .iter()
        .zip(estimate.as_slice())
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    Ok(sum / reference.len() as f64)
}

/// `10 log10(peak^2 / mse)`; `+inf` for identical inputs.
pub fn psnr(reference: &DenseTensor3, estimate: &DenseTensor3, peak: f64) -> Result<f64> {
    check_peak(peak)?;
    Ok(psnr_from_mse(mse(reference, estimate)?, peak))
}

pub fn psnr_from_mse(mse: f64, peak: f64) -> f64 {
    if mse == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (peak * peak / mse).log10()
    }
}

fn check_peak(peak: f64) -> Result<()> {
    if !(peak > 0.0 && peak.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "peak must be positive, got {peak}"
        )));
    }
    Ok(())
}

/// Single-scale SSIM constants.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SsimParams {
    pub window: usize,
    pub sigma: f64,
    pub k1: f64,
    pub k2: f64,
    /// Dynamic range of the pixel values.
    pub peak: f64,
}

impl SsimParams {
    pub fn with_peak(peak: f64) -> Self {
        Self {
            window: 11,
            sigma: 1.5,
            k1: 0.01,
            k2: 0.03,
            peak,
        }
    }
}

fn gaussian_window(size: usize, sigma: f64) -> Vec<f64> {
    let c = (size as f64 - 1.0) / 2.0;
    let g: Vec<f64> = (0..size)
        .map(|i| (-((i as f64 - c).powi(2)) / (2.0 * sigma * sigma)).exp())
        .collect();
    let total: f64 = g.iter().sum();
    g.into_iter().map(|v| v / total).collect()
}

/// Mean SSIM over all fully contained Gaussian windows of every frontal
/// slice. Slices smaller than the window use a window of the slice's
/// smaller side.
pub fn ssim(reference: &DenseTensor3, estimate: &DenseTensor3, params: &SsimParams) -> Result<f64> {
    reference.same_dims(estimate)?;
    check_peak(params.peak)?;
    if params.window == 0 || !(params.sigma > 0.0) {
        return Err(Error::InvalidParameter(
            "SSIM window and sigma must be positive".into(),
        ));
    }
    let (n1, n2, n3) = reference.dims();
    let w = params.window.min(n1).min(n2);
    let g = gaussian_window(w, params.sigma);
    let c1 = (params.k1 * params.peak).powi(2);
    let c2 = (params.k2 * params.peak).powi(2);

    let mut total = 0.0;
    let mut count = 0usize;
    for k in 0..n3 {
        for i0 in 0..=(n1 - w) {
            for j0 in 0..=(n2 - w) {
                let (mut mx, mut my, mut xx, mut yy, mut xy) = (0.0, 0.0, 0.0, 0.0, 0.0);
                for (dj, gj) in g.iter().enumerate() {
                    for (di, gi) in g.iter().enumerate() {
                        let wgt = gi * gj;
                        let x = reference.get(i0 + di, j0 + dj, k);
                        let y = estimate.get(i0 + di, j0 + dj, k);
                        mx += wgt * x;
                        my += wgt * y;
                        xx += wgt * x * x;
                        yy += wgt * y * y;
                        xy += wgt * x * y;
                    }
                }
                let vx = xx - mx * mx;
                let vy = yy - my * my;
                let cov = xy - mx * my;
                total += ((2.0 * mx * my + c1) * (2.0 * cov + c2))
                    / ((mx * mx + my * my + c1) * (vx + vy + c2));
                count += 1;
            }
        }
    }
    Ok(total / count as f64)
}

/// `100 * ratio * sqrt(mean_b(mse_b / mean_b^2))` over frontal-slice bands.
pub fn ergas(reference: &DenseTensor3, estimate: &DenseTensor3, ratio: f64) -> Result<f64> {
    reference.same_dims(estimate)?;
    let (n1, n2, n3) = reference.dims();
    let plane = n1 * n2;
    let mut acc = 0.0;
    for b in 0..n3 {
        let r = &reference.as_slice()[b * plane..(b + 1) * plane];
        let e = &estimate.as_slice()[b * plane..(b + 1) * plane];
        let mean = r.iter().sum::<f64>() / plane as f64;
        if mean == 0.0 {
            return Err(Error::MetricUndefined(format!(
                "ERGAS: reference band {b} has zero mean"
            )));
        }
        let band_mse = r.iter().zip(e).map(|(a, b)| (a - b) * (a - b)).sum::<f64>() / plane as f64;
        acc += band_mse / (mean * mean);
    }
    Ok(100.0 * ratio * (acc / n3 as f64).sqrt())
}

/// Tubes with norm below this are excluded from SAM.
pub const SAM_DEGENERATE_NORM: f64 = 1e-12;

/// Mean spectral angle (radians) and the number of skipped pixels.
pub fn sam_with_skipped(reference: &DenseTensor3, estimate: &DenseTensor3) -> Result<(f64, usize)> {
    reference.same_dims(estimate)?;
    let (n1, n2, n3) = reference.dims();
    let mut total = 0.0;
    let mut used = 0usize;
    let mut skipped = 0usize;
    for j in 0..n2 {
        for i in 0..n1 {
            let (mut dot, mut nr, mut ne) = (0.0, 0.0, 0.0);
            for k in 0..n3 {
                let a = reference.get(i, j, k);
                let b = estimate.get(i, j, k);
                dot += a * b;
                nr += a * a;
                ne += b * b;
            }
            let (nr, ne) = (nr.sqrt(), ne.sqrt());
            if nr < SAM_DEGENERATE_NORM || ne < SAM_DEGENERATE_NORM {
                skipped += 1;
                continue;
            }
            total += (dot / (nr * ne)).clamp(-1.0, 1.0).acos();
            used += 1;
        }
    }
    if used == 0 {
        return Err(Error::MetricUndefined(
            "SAM: every pixel spectrum is degenerate".into(),
        ));
    }
    Ok((total / used as f64, skipped))
}

pub fn sam(reference: &DenseTensor3, estimate: &DenseTensor3) -> Result<f64> {
    Ok(sam_with_skipped(reference, estimate)?.0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub mse: f64,
    /// `+inf` when the inputs are identical.
    pub psnr: f64,
    pub ssim: f64,
    /// `None` when a reference band has zero mean.
    pub ergas: Option<f64>,
    /// `None` when every pixel spectrum is degenerate.
    pub sam: Option<f64>,
    pub sam_skipped: usize,
}

impl MetricsReport {
    pub fn compute(reference: &DenseTensor3, estimate: &DenseTensor3, peak: f64) -> Result<Self> {
        let mse = mse(reference, estimate)?;
        check_peak(peak)?;
        let ergas = match ergas(reference, estimate, 1.0) {
            Ok(v) => Some(v),
            Err(Error::MetricUndefined(_)) => None,
            Err(e) => return Err(e),
        };
        let (sam, sam_skipped) = match sam_with_skipped(reference, estimate) {
            Ok((v, s)) => (Some(v), s),
            Err(Error::MetricUndefined(_)) => (None, reference.dims().0 * reference.dims().1),
            Err(e) => return Err(e),
        };
        Ok(Self {
            mse,
            psnr: psnr_from_mse(mse, peak),
            ssim: ssim(reference, estimate, &SsimParams::with_peak(peak))?,
            ergas,
            sam,
            sam_skipped,
        })
    }
}
