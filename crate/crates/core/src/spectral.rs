//! Mode-3 discrete Fourier transform.
//!
//! The forward transform is unnormalized and the inverse carries the `1/n3`
//! factor, so a constant tube `[c; n3]` maps to `[n3 * c, 0, ..., 0]`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::tensor::{DenseTensor3, Dims};

/// Relative tolerance for discarding imaginary residue on the way back.
pub const IMAG_RESIDUE_TOL: f64 = 1e-9;

/// Frontal slices of a tensor after the mode-3 DFT.
#[derive(Clone, Debug)]
pub struct SpectralTensor3 {
    dims: Dims,
    slices: Vec<DMatrix<Complex64>>,
}

impl SpectralTensor3 {
    pub fn from_slices(slices: Vec<DMatrix<Complex64>>) -> Result<Self> {
        let first = slices
            .first()
            .ok_or_else(|| Error::DimensionMismatch("no spectral slices".into()))?;
        let (n1, n2) = first.shape();
        if n1 == 0 || n2 == 0 {
            return Err(Error::InvalidDims((n1, n2, slices.len())));
        }
        if slices.iter().any(|s| s.shape() != (n1, n2)) {
            return Err(Error::DimensionMismatch(
                "spectral slices differ in shape".into(),
            ));
        }
        Ok(Self {
            dims: (n1, n2, slices.len()),
            slices,
        })
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn slice(&self, k: usize) -> &DMatrix<Complex64> {
        &self.slices[k]
    }

    pub fn slices(&self) -> &[DMatrix<Complex64>] {
        &self.slices
    }

    pub fn into_slices(self) -> Vec<DMatrix<Complex64>> {
        self.slices
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.slices
            .iter()
            .map(|s| s.iter().map(|z| z.norm_sqr()).sum::<f64>())
            .sum::<f64>()
            .sqrt()
    }

    /// Largest deviation from `slice(k) == conj(slice(n3 - k))` (0-based),
    /// including the imaginary part of slice 0.
    pub fn conjugate_symmetry_defect(&self) -> f64 {
        let n3 = self.dims.2;
        let mut worst = self.slices[0].iter().fold(0.0f64, |m, z| m.max(z.im.abs()));
        for k in 1..n3 {
            let mirror = &self.slices[n3 - k];
            for (a, b) in self.slices[k].iter().zip(mirror.iter()) {
                worst = worst.max((a - b.conj()).norm());
            }
        }
        worst
    }
}

/// Number of spectral slices that determine the rest by conjugate symmetry.
pub fn half_spectrum_len(n3: usize) -> usize {
    n3 / 2 + 1
}

/// Whether spectral slice `k` of a real tensor is itself real (DC, and Nyquist for even n3).
pub fn is_self_conjugate(k: usize, n3: usize) -> bool {
    k == 0 || 2 * k == n3
}

pub fn dft_mode3(a: &DenseTensor3) -> SpectralTensor3 {
    let (n1, n2, n3) = a.dims();
    let plane = n1 * n2;
    let fft = FftPlanner::<f64>::new().plan_fft_forward(n3);
    let mut out = vec![Complex64::new(0.0, 0.0); plane * n3];
    let mut tube = vec![Complex64::new(0.0, 0.0); n3];
    let data = a.as_slice();
    for p in 0..plane {
        for (t, z) in tube.iter_mut().enumerate() {
            *z = Complex64::new(data[p + plane * t], 0.0);
        }
        fft.process(&mut tube);
        for (k, z) in tube.iter().enumerate() {
            out[p + plane * k] = *z;
        }
    }
    let slices = out
        .chunks_exact(plane)
        .map(|c| DMatrix::from_column_slice(n1, n2, c))
        .collect();
    SpectralTensor3 {
        dims: (n1, n2, n3),
        slices,
    }
}

/// Inverse transform; fails when the result is not real to within
/// [`IMAG_RESIDUE_TOL`] relative to the spectral norm.
pub fn idft_mode3(s: &SpectralTensor3) -> Result<DenseTensor3> {
    let (n1, n2, n3) = s.dims();
    let plane = n1 * n2;
    let ifft = FftPlanner::<f64>::new().plan_fft_inverse(n3);
    let scale = 1.0 / n3 as f64;
    let mut data = vec![0.0; plane * n3];
    let mut tube = vec![Complex64::new(0.0, 0.0); n3];
    let mut residue = 0.0f64;
    for p in 0..plane {
        for (k, z) in tube.iter_mut().enumerate() {
            *z = s.slices[k].as_slice()[p];
        }
        ifft.process(&mut tube);
        for (t, z) in tube.iter().enumerate() {
            data[p + plane * t] = z.re * scale;
            residue = residue.max((z.im * scale).abs());
        }
    }
    let tolerance = IMAG_RESIDUE_TOL * s.frobenius_norm();
    if residue > tolerance {
        return Err(Error::ImagResidueTooLarge { residue, tolerance });
    }
    DenseTensor3::from_vec((n1, n2, n3), data)
}

/// Fills slices `k > n3/2` by conjugating their mirrors.
pub(crate) fn conjugate_fill<T: Clone>(
    half: Vec<T>,
    n3: usize,
    conj: impl Fn(&T) -> T,
) -> Vec<T> {
    debug_assert_eq!(half.len(), half_spectrum_len(n3));
    let mut full = half;
    for k in full.len()..n3 {
        let mirrored = conj(&full[n3 - k]);
        full.push(mirrored);
    }
    full
}
