//! Independent reference implementations. Nothing here goes through the
//! library's FFT, half-spectrum or t-SVD code paths.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tubal::tensor::DenseTensor3;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Entries uniform in [-1, 1), drawn with the test's own generator.
pub fn random_tensor(dims: (usize, usize, usize), r: &mut ChaCha8Rng) -> DenseTensor3 {
    DenseTensor3::from_fn(dims, |_, _, _| r.random_range(-1.0..1.0)).unwrap()
}

/// `sum_t A(:,:,t) w^{k t}` with `w = exp(-2 pi i / n3)`, one term at a time.
pub fn naive_dft(a: &DenseTensor3) -> Vec<DMatrix<Complex64>> {
    let (n1, n2, n3) = a.dims();
    (0..n3)
        .map(|k| {
            DMatrix::from_fn(n1, n2, |i, j| {
                (0..n3)
                    .map(|t| {
                        let angle = -2.0 * std::f64::consts::PI * ((k * t) % n3) as f64 / n3 as f64;
                        Complex64::from_polar(a.get(i, j, t), angle)
                    })
                    .sum()
            })
        })
        .collect()
}

/// Inverse of [`naive_dft`]; returns the real part and the largest
/// imaginary magnitude seen.
pub fn naive_idft(slices: &[DMatrix<Complex64>]) -> (DenseTensor3, f64) {
    let n3 = slices.len();
    let (n1, n2) = slices[0].shape();
    let mut imag = 0.0f64;
    let mut data = vec![0.0; n1 * n2 * n3];
    for t in 0..n3 {
        for j in 0..n2 {
            for i in 0..n1 {
                let v: Complex64 = (0..n3)
                    .map(|k| {
                        let angle = 2.0 * std::f64::consts::PI * ((k * t) % n3) as f64 / n3 as f64;
                        slices[k][(i, j)] * Complex64::from_polar(1.0, angle)
                    })
                    .sum::<Complex64>()
                    / n3 as f64;
                imag = imag.max(v.im.abs());
                data[i + n1 * (j + n2 * t)] = v.re;
            }
        }
    }
    (DenseTensor3::from_vec((n1, n2, n3), data).unwrap(), imag)
}

/// `fold(bcirc(A) * unfold(B))`.
pub fn bcirc_product(a: &DenseTensor3, b: &DenseTensor3) -> DenseTensor3 {
    let (n1, n2, n3) = a.dims();
    let (m2, n4, m3) = b.dims();
    assert_eq!((n2, n3), (m2, m3));
    let bcirc = DMatrix::from_fn(n1 * n3, n2 * n3, |r, c| {
        let (p, i) = (r / n1, r % n1);
        let (q, j) = (c / n2, c % n2);
        a.get(i, j, (p + n3 - q) % n3)
    });
    let unfolded = DMatrix::from_fn(n2 * n3, n4, |r, c| b.get(r % n2, c, r / n2));
    let prod = bcirc * unfolded;
    DenseTensor3::from_fn((n1, n4, n3), |i, j, k| prod[(k * n1 + i, j)]).unwrap()
}

/// Singular values of every spectral slice (all n3, no symmetry shortcut),
/// sorted in decreasing order.
pub fn brute_spectral_values(a: &DenseTensor3) -> Vec<Vec<f64>> {
    naive_dft(a)
        .into_iter()
        .map(|m| {
            let mut s: Vec<f64> = m.svd(false, false).singular_values.iter().copied().collect();
            s.sort_by(|x, y| y.partial_cmp(x).unwrap());
            s
        })
        .collect()
}

/// `(1/n3) sum` of all spectral singular values.
pub fn brute_tnn(a: &DenseTensor3) -> f64 {
    let n3 = a.dims().2 as f64;
    brute_spectral_values(a).iter().flatten().sum::<f64>() / n3
}

/// Full-spectrum singular value soft thresholding: naive DFT, a complex SVD
/// of every slice, `sigma_i(k) <- max(sigma_i(k) - tau(i, k), 0)`, naive
/// inverse DFT.
pub fn brute_tsvt(y: &DenseTensor3, tau: impl Fn(usize, usize) -> f64) -> (DenseTensor3, f64) {
    let slices: Vec<DMatrix<Complex64>> = naive_dft(y)
        .into_iter()
        .enumerate()
        .map(|(k, m)| {
            let (rows, cols) = m.shape();
            let svd = m.svd(true, true);
            let u = svd.u.unwrap();
            let vt = svd.v_t.unwrap();
            let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
            order.sort_by(|&p, &q| {
                svd.singular_values[q]
                    .partial_cmp(&svd.singular_values[p])
                    .unwrap()
            });
            let mut out = DMatrix::<Complex64>::zeros(rows, cols);
            for (rank, &idx) in order.iter().enumerate() {
                let s = (svd.singular_values[idx] - tau(rank, k)).max(0.0);
                if s > 0.0 {
                    out += (u.column(idx) * vt.row(idx)) * Complex64::new(s, 0.0);
                }
            }
            out
        })
        .collect();
    naive_idft(&slices)
}

/// Central difference.
pub fn central_difference(f: impl Fn(f64) -> f64, t: f64, h: f64) -> f64 {
    (f(t + h) - f(t - h)) / (2.0 * h)
}

/// Relative error with an absolute floor for near-zero references.
pub fn rel_diff(a: &DenseTensor3, reference: &DenseTensor3) -> f64 {
    let diff = a.sub(reference).unwrap().frobenius_norm();
    diff / reference.frobenius_norm().max(f64::MIN_POSITIVE)
}

/// Random conformable dims for a t-product with every size in `1..=max`.
pub fn conformable_dims(
    r: &mut ChaCha8Rng,
    max: usize,
) -> ((usize, usize, usize), (usize, usize, usize)) {
    let n1 = r.random_range(1..=max);
    let n2 = r.random_range(1..=max);
    let n4 = r.random_range(1..=max);
    let n3 = r.random_range(1..=max);
    ((n1, n2, n3), (n2, n4, n3))
}

/// Orthogonal tensor taken from the `U` factor of a random tensor.
pub fn random_orthogonal(n: usize, n3: usize, seed: u64) -> DenseTensor3 {
    let a = random_tensor((n, n, n3), &mut rng(seed));
    tubal::tsvd::t_svd(&a).unwrap().u
}

/// ADMM settings used for the synthetic solver checks. The default
/// `mu0 = 1` is too large for data whose spectral singular values are in
/// the hundreds: early thresholds are negligible and ADMM settles on a
/// feasible but non-optimal point.
pub fn synthetic_admm() -> tubal::solvers::AdmmSettings {
    tubal::solvers::AdmmSettings {
        mu0: 1e-3,
        ..Default::default()
    }
}

/// Rank-`r` tensor plus salt noise on `rate` of the entries, with spike
/// magnitude up to `max|L|`.
pub fn rpca_instance(
    dims: (usize, usize, usize),
    rank: usize,
    rate: f64,
    seed: u64,
) -> (DenseTensor3, DenseTensor3) {
    let low = tubal::synth::synth_low_tubal_rank(dims, rank, seed).unwrap();
    let support = tubal::synth::random_mask(dims, rate, seed + 1000).unwrap();
    let m = low.max_abs();
    let spikes = tubal::random::uniform_tensor(dims, -m, m, seed + 2000).unwrap();
    let x = low.add(&support.apply(&spikes).unwrap()).unwrap();
    (low, x)
}
