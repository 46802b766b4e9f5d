//! Proximal operators: scalar and weighted soft thresholding, weighted
//! tensor singular value thresholding, and projection onto observations.

use crate::error::{Error, Result};
use crate::spectral::half_spectrum_len;
use crate::tensor::{DenseTensor3, ObservationMask};
use crate::tsvd::shrink_spectrum;

/// `sgn(z) * max(|z| - tau, 0)`.
#[inline]
pub fn soft_threshold(z: f64, tau: f64) -> f64 {
    let m = z.abs() - tau;
    if m > 0.0 {
        m.copysign(z)
    } else {
        0.0
    }
}

/// Nonnegative finite per-entry thresholds.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightTensor(DenseTensor3);

impl WeightTensor {
    pub fn new(weights: DenseTensor3) -> Result<Self> {
        if let Some(pos) = weights.as_slice().iter().position(|&w| w < 0.0) {
            return Err(Error::InvalidWeights(format!(
                "weight at linear index {pos} is negative"
            )));
        }
        Ok(Self(weights))
    }

    pub fn constant(dims: (usize, usize, usize), value: f64) -> Result<Self> {
        Self::new(DenseTensor3::zeros(dims)?.map(|_| value))
    }

    /// Weights on the diagonal `W(i, i, k) = f(i, k)`, zero elsewhere.
    pub fn diagonal(
        dims: (usize, usize, usize),
        mut f: impl FnMut(usize, usize) -> f64,
    ) -> Result<Self> {
        Self::new(DenseTensor3::from_fn(dims, |i, j, k| {
            if i == j {
                f(i, k)
            } else {
                0.0
            }
        })?)
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        self.0.dims()
    }

    pub fn as_tensor(&self) -> &DenseTensor3 {
        &self.0
    }
}

/// Entrywise `T_{W_ijk}(X_ijk)`.
pub fn generalized_soft_threshold(x: &DenseTensor3, w: &WeightTensor) -> Result<DenseTensor3> {
    x.zip_map(&w.0, soft_threshold)
}

/// Entrywise soft thresholding with thresholds `raw * scale`.
pub(crate) fn soft_threshold_scaled(
    x: &DenseTensor3,
    raw: &DenseTensor3,
    scale: f64,
) -> Result<DenseTensor3> {
    x.zip_map(raw, |v, w| soft_threshold(v, w * scale))
}

/// Weighted tensor singular value thresholding.
///
/// `W(i, i, k)` is the threshold applied to the spectral singular value
/// `S̄(i, i, k)` of `Y`; off-diagonal weights must be zero and the weights
/// must be symmetric under `k <-> n3 - k` so the result stays real.
pub fn generalized_tsvt(y: &DenseTensor3, w: &WeightTensor) -> Result<DenseTensor3> {
    y.same_dims(&w.0)?;
    let (n1, n2, n3) = y.dims();
    let tol = 1e-12 * w.0.max_abs().max(1.0);
    for k in 0..n3 {
        for j in 0..n2 {
            for i in 0..n1 {
                let v = w.0.get(i, j, k);
                if i != j && v != 0.0 {
                    return Err(Error::InvalidWeights(format!(
                        "off-diagonal weight at ({i}, {j}, {k})"
                    )));
                }
                if i == j && k > 0 {
                    let mirror = w.0.get(i, i, n3 - k);
                    if (v - mirror).abs() > tol {
                        return Err(Error::InvalidWeights(format!(
                            "weights at slices {k} and {} differ for index {i}",
                            n3 - k
                        )));
                    }
                }
            }
        }
    }
    let p = n1.min(n2);
    let table: Vec<Vec<f64>> = (0..half_spectrum_len(n3))
        .map(|k| (0..p).map(|i| w.0.get(i, i, k)).collect())
        .collect();
    shrink_spectrum(y, |k, i, s| soft_threshold(s, table[k][i]))
}

/// Spectral weights `raw[k][i]` applied as `raw * scale`; no validation.
pub(crate) fn tsvt_scaled(y: &DenseTensor3, raw: &[Vec<f64>], scale: f64) -> Result<DenseTensor3> {
    shrink_spectrum(y, |k, i, s| soft_threshold(s, raw[k][i] * scale))
}

/// Takes `observed` on the mask and `estimate` elsewhere.
pub fn project_observed(
    estimate: &DenseTensor3,
    observed: &DenseTensor3,
    mask: &ObservationMask,
) -> Result<DenseTensor3> {
    estimate.same_dims(observed)?;
    mask.check(estimate)?;
    let data = estimate
        .as_slice()
        .iter()
        .zip(observed.as_slice())
        .zip(mask.as_slice())
        .map(|((&m, &o), &obs)| if obs { o } else { m })
        .collect();
    DenseTensor3::from_vec(estimate.dims(), data)
}
