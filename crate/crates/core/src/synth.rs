//! Synthetic data and degradation operators. All outputs are pure functions
//! of their arguments and the seed.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::algebra::t_product;
use crate::error::{Error, Result};
use crate::random::rng;
use crate::tensor::{DenseTensor3, Dims, ObservationMask};

fn check_probability(name: &str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!(
            "{name} must lie in [0, 1], got {p}"
        )));
    }
    Ok(())
}

/// `P * Q` with standard normal `P: n1 x r x n3` and `Q: r x n2 x n3`.
///
/// Tubal rank is `r` almost surely when `r <= min(n1, n2)`; `r = 0` gives zeros.
pub fn synth_low_tubal_rank(dims: Dims, rank: usize, seed: u64) -> Result<DenseTensor3> {
    let (n1, n2, n3) = dims;
    if rank == 0 {
        return DenseTensor3::zeros(dims);
    }
    let mut r = rng(seed);
    let p = DenseTensor3::from_fn((n1, rank, n3), |_, _, _| r.sample(StandardNormal))?;
    let q = DenseTensor3::from_fn((rank, n2, n3), |_, _, _| r.sample(StandardNormal))?;
    t_product(&p, &q)
}

/// Each entry observed independently with probability `rate`.
pub fn random_mask(dims: Dims, rate: f64, seed: u64) -> Result<ObservationMask> {
    check_probability("sampling rate", rate)?;
    let mut r = rng(seed);
    let len = dims.0 * dims.1 * dims.2;
    ObservationMask::from_bools(dims, (0..len).map(|_| r.random::<f64>() < rate).collect())
}

/// Replaces each entry with probability `p_noise` by `0` or `peak` (fair coin).
pub fn add_salt_pepper(a: &DenseTensor3, p_noise: f64, peak: f64, seed: u64) -> Result<DenseTensor3> {
    check_probability("noise probability", p_noise)?;
    if !peak.is_finite() {
        return Err(Error::InvalidParameter(format!("peak must be finite, got {peak}")));
    }
    let mut r = rng(seed);
    Ok(a.map(|v| {
        let hit = r.random::<f64>() < p_noise;
        let salt = r.random::<bool>();
        match (hit, salt) {
            (false, _) => v,
            (true, true) => peak,
            (true, false) => 0.0,
        }
    }))
}

/// With probability `p_noise` per entry adds a draw from
/// `Uniform[0, 0.1 * max|A|)`.
pub fn add_uniform_noise(a: &DenseTensor3, p_noise: f64, seed: u64) -> Result<DenseTensor3> {
    check_probability("noise probability", p_noise)?;
    let bound = 0.1 * a.max_abs();
    let mut r = rng(seed);
    Ok(a.map(|v| {
        let hit = r.random::<f64>() < p_noise;
        let u = r.random::<f64>();
        if hit {
            v + u * bound
        } else {
            v
        }
    }))
}

/// Adds i.i.d. `N(0, sigma^2)` to every entry.
pub fn add_gaussian_noise(a: &DenseTensor3, sigma: f64, seed: u64) -> Result<DenseTensor3> {
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "noise level must be nonnegative, got {sigma}"
        )));
    }
    let mut r = rng(seed);
    Ok(a.map(|v| v + sigma * r.sample::<f64, _>(StandardNormal)))
}

/// Rescales so the largest absolute entry is `peak` (zero stays zero).
pub fn normalize_peak(a: &DenseTensor3, peak: f64) -> DenseTensor3 {
    let m = a.max_abs();
    if m == 0.0 {
        a.clone()
    } else {
        a.scale(peak / m)
    }
}
