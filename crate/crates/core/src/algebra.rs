//! t-product calculus: products, transposes and identities of third-order tensors.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::{conjugate_fill, dft_mode3, half_spectrum_len, idft_mode3, SpectralTensor3};
use crate::tensor::DenseTensor3;

/// `A * B` for `A: n1 x m x n3` and `B: m x n2 x n3`.
///
/// Frontal slices are multiplied pairwise in the Fourier domain; only the
/// first `n3/2 + 1` products are formed, the rest follow by conjugation.
pub fn t_product(a: &DenseTensor3, b: &DenseTensor3) -> Result<DenseTensor3> {
    let (n1, m, n3) = a.dims();
    let (mb, n2, n3b) = b.dims();
    if m != mb || n3 != n3b {
        return Err(Error::DimensionMismatch(format!(
            "t-product of {:?} and {:?}",
            a.dims(),
            b.dims()
        )));
    }
    let fa = dft_mode3(a);
    let fb = dft_mode3(b);
    let half: Vec<DMatrix<Complex64>> = (0..half_spectrum_len(n3))
        .map(|k| fa.slice(k) * fb.slice(k))
        .collect();
    let full = conjugate_fill(half, n3, |s| s.conjugate());
    let c = idft_mode3(&SpectralTensor3::from_slices(full)?)?;
    debug_assert_eq!(c.dims(), (n1, n2, n3));
    Ok(c)
}

/// Transpose under the t-product: slice 0 is transposed in place, slice `k`
/// receives the transpose of slice `n3 - k`.
pub fn conj_transpose(a: &DenseTensor3) -> DenseTensor3 {
    let (n1, n2, n3) = a.dims();
    let data = (0..n3)
        .flat_map(|k| {
            let src = (n3 - k) % n3;
            (0..n1).flat_map(move |i| (0..n2).map(move |j| (i, j, src)))
        })
        .map(|(i, j, src)| a.get(i, j, src))
        .collect();
    DenseTensor3::from_raw((n2, n1, n3), data)
}

/// `n x n x n3` tensor whose first frontal slice is the identity matrix.
pub fn identity_tensor(n: usize, n3: usize) -> Result<DenseTensor3> {
    DenseTensor3::from_fn((n, n, n3), |i, j, k| {
        if k == 0 && i == j {
            1.0
        } else {
            0.0
        }
    })
}
