//! Dense third-order tensors and observation masks.
//!
//! Storage is column-major in the first two modes with frontal slices laid
//! out one after another: entry `(i, j, k)` lives at `i + n1 * (j + n2 * k)`.
//! A frontal slice is therefore a contiguous column-major `n1 x n2` block.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

pub type Dims = (usize, usize, usize);

fn check_dims(dims: Dims) -> Result<usize> {
    let (n1, n2, n3) = dims;
    if n1 == 0 || n2 == 0 || n3 == 0 {
        return Err(Error::InvalidDims(dims));
    }
    n1.checked_mul(n2)
        .and_then(|v| v.checked_mul(n3))
        .ok_or(Error::InvalidDims(dims))
}

/// Real-valued `n1 x n2 x n3` tensor with finite entries.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseTensor3 {
    dims: Dims,
    data: Vec<f64>,
}

impl DenseTensor3 {
    pub fn from_vec(dims: Dims, data: Vec<f64>) -> Result<Self> {
        let len = check_dims(dims)?;
        if data.len() != len {
            return Err(Error::DimensionMismatch(format!(
                "{dims:?} needs {len} entries, got {}",
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(pos));
        }
        Ok(Self { dims, data })
    }

    pub fn zeros(dims: Dims) -> Result<Self> {
        let len = check_dims(dims)?;
        Ok(Self {
            dims,
            data: vec![0.0; len],
        })
    }

    pub fn from_fn(dims: Dims, mut f: impl FnMut(usize, usize, usize) -> f64) -> Result<Self> {
        let (n1, n2, n3) = dims;
        let mut data = Vec::with_capacity(check_dims(dims)?);
        for k in 0..n3 {
            for j in 0..n2 {
                for i in 0..n1 {
                    data.push(f(i, j, k));
                }
            }
        }
        Self::from_vec(dims, data)
    }

    /// Builds a tensor from frontal slices, each `n1 x n2`.
    pub fn from_slices(slices: &[DMatrix<f64>]) -> Result<Self> {
        let first = slices
            .first()
            .ok_or_else(|| Error::DimensionMismatch("no frontal slices".into()))?;
        let (n1, n2) = first.shape();
        let mut data = Vec::with_capacity(n1 * n2 * slices.len());
        for s in slices {
            if s.shape() != (n1, n2) {
                return Err(Error::DimensionMismatch(format!(
                    "slice shape {:?} differs from {:?}",
                    s.shape(),
                    (n1, n2)
                )));
            }
            data.extend_from_slice(s.as_slice());
        }
        Self::from_vec((n1, n2, slices.len()), data)
    }

    /// Internal constructor for values produced by arithmetic on finite tensors.
    pub(crate) fn from_raw(dims: Dims, data: Vec<f64>) -> Self {
        debug_assert_eq!(dims.0 * dims.1 * dims.2, data.len());
        Self { dims, data }
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        let (n1, n2, _) = self.dims;
        i + n1 * (j + n2 * k)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.data[self.index(i, j, k)]
    }

    pub fn frontal_slice(&self, k: usize) -> DMatrix<f64> {
        let (n1, n2, _) = self.dims;
        let start = k * n1 * n2;
        DMatrix::from_column_slice(n1, n2, &self.data[start..start + n1 * n2])
    }

    pub fn frontal_slices(&self) -> Vec<DMatrix<f64>> {
        (0..self.dims.2).map(|k| self.frontal_slice(k)).collect()
    }

    pub fn tube(&self, i: usize, j: usize) -> Vec<f64> {
        (0..self.dims.2).map(|k| self.get(i, j, k)).collect()
    }

    pub fn map(&self, mut f: impl FnMut(f64) -> f64) -> Self {
        Self::from_raw(self.dims, self.data.iter().map(|&v| f(v)).collect())
    }

    pub fn zip_map(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.same_dims(other)?;
        Ok(Self::from_raw(
            self.dims,
            self.data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        ))
    }

    pub fn same_dims(&self, other: &Self) -> Result<()> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch(format!(
                "{:?} vs {:?}",
                self.dims, other.dims
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_map(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_map(other, |a, b| a - b)
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|v| c * v)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn l1_norm(&self) -> f64 {
        self.data.iter().map(|v| v.abs()).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `||self - other||_F / ||other||_F`, falling back to the absolute
    /// error when `other` is zero.
    pub fn relative_error(&self, reference: &Self) -> Result<f64> {
        let diff = self.sub(reference)?.frobenius_norm();
        let base = reference.frobenius_norm();
        Ok(if base > 0.0 { diff / base } else { diff })
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.max_abs())
    }
}

/// Stacks frontal slices vertically into an `(n1 * n3) x n2` matrix.
pub fn unfold(a: &DenseTensor3) -> DMatrix<f64> {
    let (n1, n2, n3) = a.dims();
    DMatrix::from_fn(n1 * n3, n2, |row, j| a.get(row % n1, j, row / n1))
}

/// Inverse of [`unfold`].
pub fn fold(m: &DMatrix<f64>, dims: Dims) -> Result<DenseTensor3> {
    let (n1, n2, n3) = dims;
    check_dims(dims)?;
    if m.nrows() != n1 * n3 || m.ncols() != n2 {
        return Err(Error::DimensionMismatch(format!(
            "cannot fold {}x{} matrix into {dims:?}",
            m.nrows(),
            m.ncols()
        )));
    }
    DenseTensor3::from_fn(dims, |i, j, k| m[(k * n1 + i, j)])
}

/// Reorders the axes: output axis `d` is input axis `perm[d]`.
///
/// With `perm = [2, 0, 1]` a `2x3x4` tensor becomes `4x2x3` and
/// `out(k, i, j) = a(i, j, k)`.
pub fn permute_modes(a: &DenseTensor3, perm: [usize; 3]) -> Result<DenseTensor3> {
    validate_perm(perm)?;
    let d = [a.dims().0, a.dims().1, a.dims().2];
    let out_dims = (d[perm[0]], d[perm[1]], d[perm[2]]);
    DenseTensor3::from_fn(out_dims, |p, q, r| {
        let mut src = [0usize; 3];
        src[perm[0]] = p;
        src[perm[1]] = q;
        src[perm[2]] = r;
        a.get(src[0], src[1], src[2])
    })
}

pub fn inverse_perm(perm: [usize; 3]) -> Result<[usize; 3]> {
    validate_perm(perm)?;
    let mut inv = [0usize; 3];
    for (d, &p) in perm.iter().enumerate() {
        inv[p] = d;
    }
    Ok(inv)
}

fn validate_perm(perm: [usize; 3]) -> Result<()> {
    let mut seen = [false; 3];
    for &p in &perm {
        if p > 2 || seen[p] {
            return Err(Error::InvalidParameter(format!(
                "{perm:?} is not a permutation of (0, 1, 2)"
            )));
        }
        seen[p] = true;
    }
    Ok(())
}

/// Binary indicator of observed entries, same layout as [`DenseTensor3`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObservationMask {
    dims: Dims,
    observed: Vec<bool>,
}

impl ObservationMask {
    pub fn from_bools(dims: Dims, observed: Vec<bool>) -> Result<Self> {
        let len = check_dims(dims)?;
        if observed.len() != len {
            return Err(Error::DimensionMismatch(format!(
                "mask {dims:?} needs {len} entries, got {}",
                observed.len()
            )));
        }
        Ok(Self { dims, observed })
    }

    /// Accepts only the values 0 and 1.
    pub fn from_indicator(dims: Dims, values: &[u8]) -> Result<Self> {
        if let Some(pos) = values.iter().position(|&v| v > 1) {
            return Err(Error::InvalidParameter(format!(
                "mask entry {pos} is {}, expected 0 or 1",
                values[pos]
            )));
        }
        Self::from_bools(dims, values.iter().map(|&v| v == 1).collect())
    }

    pub fn full(dims: Dims) -> Result<Self> {
        Ok(Self {
            dims,
            observed: vec![true; check_dims(dims)?],
        })
    }

    pub fn empty(dims: Dims) -> Result<Self> {
        Ok(Self {
            dims,
            observed: vec![false; check_dims(dims)?],
        })
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.observed
    }

    pub fn is_observed(&self, idx: usize) -> bool {
        self.observed[idx]
    }

    pub fn count_observed(&self) -> usize {
        self.observed.iter().filter(|&&b| b).count()
    }

    pub fn is_full(&self) -> bool {
        self.observed.iter().all(|&b| b)
    }

    pub fn to_indicator(&self) -> Vec<u8> {
        self.observed.iter().map(|&b| b as u8).collect()
    }

    pub fn to_tensor(&self) -> DenseTensor3 {
        DenseTensor3::from_raw(
            self.dims,
            self.observed.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect(),
        )
    }

    /// Zeroes the unobserved entries of `a`.
    pub fn apply(&self, a: &DenseTensor3) -> Result<DenseTensor3> {
        self.check(a)?;
        Ok(DenseTensor3::from_raw(
            self.dims,
            a.as_slice()
                .iter()
                .zip(&self.observed)
                .map(|(&v, &o)| if o { v } else { 0.0 })
                .collect(),
        ))
    }

    pub fn permute(&self, perm: [usize; 3]) -> Result<Self> {
        let permuted = permute_modes(&self.to_tensor(), perm)?;
        Self::from_bools(
            permuted.dims(),
            permuted.as_slice().iter().map(|&v| v == 1.0).collect(),
        )
    }

    pub(crate) fn check(&self, a: &DenseTensor3) -> Result<()> {
        if self.dims != a.dims() {
            return Err(Error::DimensionMismatch(format!(
                "mask {:?} vs tensor {:?}",
                self.dims,
                a.dims()
            )));
        }
        Ok(())
    }
}
