//! Seeded randomness.
//!
//! Every stochastic routine draws from ChaCha8 seeded through
//! `SeedableRng::seed_from_u64`, so results are a pure function of the seed
//! on every platform. Normal variates use the `rand_distr` ziggurat sampler.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::tensor::{DenseTensor3, Dims};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn standard_normal_tensor(dims: Dims, seed: u64) -> Result<DenseTensor3> {
    let mut r = rng(seed);
    DenseTensor3::from_fn(dims, |_, _, _| r.sample(StandardNormal))
}

pub fn uniform_tensor(dims: Dims, low: f64, high: f64, seed: u64) -> Result<DenseTensor3> {
    let mut r = rng(seed);
    DenseTensor3::from_fn(dims, |_, _, _| r.random_range(low..high))
}
