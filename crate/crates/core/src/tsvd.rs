//! Tensor SVD, tensor nuclear norm and tubal rank.
//!
//! Spectral slices `0..=n3/2` are decomposed directly; the remaining slices
//! are the complex conjugates of their mirrors, which keeps every factor
//! real after the inverse transform. The DC slice (and the Nyquist slice
//! when `n3` is even) is real and gets a real SVD.

use nalgebra::{ComplexField, DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::algebra::conj_transpose;
use crate::error::{Error, Result};
use crate::spectral::{
    conjugate_fill, dft_mode3, half_spectrum_len, idft_mode3, is_self_conjugate, SpectralTensor3,
};
use crate::tensor::DenseTensor3;

/// Diagonals `S̄(i, i, k)` of the f-diagonal factor in the Fourier domain.
///
/// `values[k]` holds the `min(n1, n2)` singular values of spectral slice `k`,
/// nonincreasing. Slices `k` and `n3 - k` carry identical values.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralDiagonal {
    values: Vec<Vec<f64>>,
}

impl SpectralDiagonal {
    pub fn from_values(values: Vec<Vec<f64>>) -> Result<Self> {
        let p = values.first().map(Vec::len).unwrap_or(0);
        if values.is_empty() || values.iter().any(|v| v.len() != p) {
            return Err(Error::DimensionMismatch(
                "spectral diagonal must be a non-empty rectangular table".into(),
            ));
        }
        Ok(Self { values })
    }

    pub fn n3(&self) -> usize {
        self.values.len()
    }

    /// `min(n1, n2)`.
    pub fn rank_bound(&self) -> usize {
        self.values[0].len()
    }

    pub fn slice(&self, k: usize) -> &[f64] {
        &self.values[k]
    }

    pub fn get(&self, i: usize, k: usize) -> f64 {
        self.values[k][i]
    }

    pub fn slices(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn max(&self) -> f64 {
        self.values.iter().flatten().fold(0.0, |m, &v| m.max(v))
    }

    /// `(1/n3) * sum_{i,k} S̄(i, i, k)`.
    pub fn nuclear_norm(&self) -> f64 {
        let total: f64 = self.values.iter().map(|s| s.iter().sum::<f64>()).sum();
        total / self.n3() as f64
    }
}

/// Factors of `A = U * S * V^T` under the t-product.
#[derive(Clone, Debug)]
pub struct TSVDFactors {
    pub u: DenseTensor3,
    pub s: DenseTensor3,
    pub v: DenseTensor3,
    pub spectrum: SpectralDiagonal,
}

impl TSVDFactors {
    /// `sum_i S(i, i, 1)`, read from the original-domain f-diagonal factor.
    pub fn nuclear_norm(&self) -> f64 {
        let (n1, n2, _) = self.s.dims();
        (0..n1.min(n2)).map(|i| self.s.get(i, i, 0)).sum()
    }

    pub fn reconstruct(&self) -> Result<DenseTensor3> {
        let us = crate::algebra::t_product(&self.u, &self.s)?;
        crate::algebra::t_product(&us, &conj_transpose(&self.v))
    }
}

struct SliceSvd {
    u: DMatrix<Complex64>,
    sigma: Vec<f64>,
    v_t: DMatrix<Complex64>,
}

fn svd_iteration_cap(rows: usize, cols: usize) -> usize {
    1000 + 200 * rows.max(cols)
}

fn to_complex(m: &DMatrix<f64>) -> DMatrix<Complex64> {
    m.map(|v| Complex64::new(v, 0.0))
}

fn slice_svd(m: &DMatrix<Complex64>, k: usize, n3: usize, vectors: bool) -> Result<SliceSvd> {
    let (r, c) = m.shape();
    let cap = svd_iteration_cap(r, c);
    if is_self_conjugate(k, n3) {
        let real = m.map(|z| z.re);
        let svd = real
            .try_svd(vectors, vectors, f64::EPSILON, cap)
            .ok_or(Error::SvdNonConvergence { slice: k })?;
        Ok(SliceSvd {
            sigma: svd.singular_values.iter().copied().collect(),
            u: svd.u.as_ref().map(to_complex).unwrap_or_else(|| DMatrix::zeros(0, 0)),
            v_t: svd.v_t.as_ref().map(to_complex).unwrap_or_else(|| DMatrix::zeros(0, 0)),
        })
    } else {
        let svd = m
            .clone()
            .try_svd(vectors, vectors, f64::EPSILON, cap)
            .ok_or(Error::SvdNonConvergence { slice: k })?;
        Ok(SliceSvd {
            sigma: svd.singular_values.iter().copied().collect(),
            u: svd.u.unwrap_or_else(|| DMatrix::zeros(0, 0)),
            v_t: svd.v_t.unwrap_or_else(|| DMatrix::zeros(0, 0)),
        })
    }
}

fn half_spectrum_svds(spec: &SpectralTensor3, vectors: bool) -> Result<Vec<SliceSvd>> {
    let n3 = spec.dims().2;
    (0..half_spectrum_len(n3))
        .into_par_iter()
        .map(|k| slice_svd(spec.slice(k), k, n3, vectors))
        .collect()
}

/// Extends orthonormal columns to a full `n x n` unitary basis by
/// Gram-Schmidt against the standard basis vectors.
fn complete_basis<T>(thin: &DMatrix<T>, n: usize) -> DMatrix<T>
where
    T: ComplexField<RealField = f64>,
{
    let mut cols: Vec<DVector<T>> = thin.column_iter().map(|c| c.into_owned()).collect();
    let mut e = 0;
    while cols.len() < n && e < n {
        let mut v = DVector::<T>::zeros(n);
        v[e] = T::one();
        e += 1;
        for _ in 0..2 {
            for c in &cols {
                let proj = c.dotc(&v);
                v -= c * proj;
            }
        }
        let norm = v.norm();
        if norm > 1e-6 {
            cols.push(v.unscale(norm));
        }
    }
    DMatrix::from_columns(&cols)
}

fn complete_slice_basis(thin: &DMatrix<Complex64>, n: usize, real: bool) -> DMatrix<Complex64> {
    if real {
        to_complex(&complete_basis(&thin.map(|z| z.re), n))
    } else {
        complete_basis(thin, n)
    }
}

/// Singular values of every spectral slice, without the singular vectors.
pub fn spectral_singular_values(a: &DenseTensor3) -> Result<SpectralDiagonal> {
    let spec = dft_mode3(a);
    spectral_diagonal_of(&spec)
}

pub(crate) fn spectral_diagonal_of(spec: &SpectralTensor3) -> Result<SpectralDiagonal> {
    let n3 = spec.dims().2;
    let half: Vec<Vec<f64>> = half_spectrum_svds(spec, false)?
        .into_iter()
        .map(|s| s.sigma)
        .collect();
    Ok(SpectralDiagonal {
        values: conjugate_fill(half, n3, Clone::clone),
    })
}

pub fn t_svd(a: &DenseTensor3) -> Result<TSVDFactors> {
    let (n1, n2, n3) = a.dims();
    let spec = dft_mode3(a);
    let svds = half_spectrum_svds(&spec, true)?;

    let mut u_half = Vec::with_capacity(svds.len());
    let mut s_half = Vec::with_capacity(svds.len());
    let mut v_half = Vec::with_capacity(svds.len());
    let mut sigma_half = Vec::with_capacity(svds.len());
    for (k, svd) in svds.into_iter().enumerate() {
        let real = is_self_conjugate(k, n3);
        u_half.push(complete_slice_basis(&svd.u, n1, real));
        v_half.push(complete_slice_basis(&svd.v_t.adjoint(), n2, real));
        let mut s = DMatrix::<Complex64>::zeros(n1, n2);
        for (i, &sv) in svd.sigma.iter().enumerate() {
            s[(i, i)] = Complex64::new(sv, 0.0);
        }
        s_half.push(s);
        sigma_half.push(svd.sigma);
    }

    let conj = |m: &DMatrix<Complex64>| m.conjugate();
    let u = idft_mode3(&SpectralTensor3::from_slices(conjugate_fill(u_half, n3, conj))?)?;
    let s = idft_mode3(&SpectralTensor3::from_slices(conjugate_fill(s_half, n3, conj))?)?;
    let v = idft_mode3(&SpectralTensor3::from_slices(conjugate_fill(v_half, n3, conj))?)?;
    Ok(TSVDFactors {
        u,
        s,
        v,
        spectrum: SpectralDiagonal {
            values: conjugate_fill(sigma_half, n3, Clone::clone),
        },
    })
}

/// `(1/n3) * sum_{i,k} S̄(i, i, k)`; equals `sum_i S(i, i, 1)` of the t-SVD.
pub fn tensor_nuclear_norm(a: &DenseTensor3) -> Result<f64> {
    Ok(spectral_singular_values(a)?.nuclear_norm())
}

/// Largest per-slice count of spectral singular values above
/// `tol * (largest spectral singular value)`.
pub fn tubal_rank(a: &DenseTensor3, tol: f64) -> Result<usize> {
    let spectrum = spectral_singular_values(a)?;
    let top = spectrum.max();
    if top == 0.0 {
        return Ok(0);
    }
    Ok(spectrum
        .slices()
        .iter()
        .map(|s| s.iter().filter(|&&v| v > tol * top).count())
        .max()
        .unwrap_or(0))
}

/// Rebuilds a tensor after replacing every spectral singular value
/// `S̄(i, i, k)` by `shrink(k, i, S̄(i, i, k))`.
///
/// Works on thin slice SVDs, so it equals `U * S̃ * V^T` with `S̃` the
/// inverse transform of the shrunk f-diagonal. `shrink` must give equal
/// results for `k` and `n3 - k`; only `k <= n3/2` is evaluated.
pub(crate) fn shrink_spectrum<F>(y: &DenseTensor3, shrink: F) -> Result<DenseTensor3>
where
    F: Fn(usize, usize, f64) -> f64 + Sync,
{
    let (n1, n2, n3) = y.dims();
    let spec = dft_mode3(y);
    let half: Vec<DMatrix<Complex64>> = (0..half_spectrum_len(n3))
        .into_par_iter()
        .map(|k| -> Result<DMatrix<Complex64>> {
            let svd = slice_svd(spec.slice(k), k, n3, true)?;
            let mut out = DMatrix::<Complex64>::zeros(n1, n2);
            for (i, &sv) in svd.sigma.iter().enumerate() {
                let shrunk = shrink(k, i, sv);
                if shrunk > 0.0 {
                    let ui = svd.u.column(i);
                    let vi = svd.v_t.row(i);
                    out += (ui * vi) * Complex64::new(shrunk, 0.0);
                }
            }
            if is_self_conjugate(k, n3) {
                out.iter_mut().for_each(|z| z.im = 0.0);
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let full = conjugate_fill(half, n3, |m| m.conjugate());
    idft_mode3(&SpectralTensor3::from_slices(full)?)
}
