//! Majorization-minimization solvers with ADMM inner loops.
//!
//! Each outer iteration linearizes the concave penalty at the current
//! iterate, which turns the problem into a weighted convex one solved by
//! ADMM. The convex solvers are the same inner loops with constant weights.

mod completion;
mod rpca;

pub use completion::{admm_tc_inner, convex_tc, lrtc_mm, TcConfig, TcInit};
pub use rpca::{admm_rpca_inner, convex_trpca, default_lambda, trpca_mm, RpcaConfig, RpcaInit};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::penalties::{derivative_unchecked, PenaltyParams};
use crate::spectral::half_spectrum_len;
use crate::tensor::{inverse_perm, permute_modes, DenseTensor3};
use crate::tsvd::SpectralDiagonal;

/// Which `mu` divides the raw penalty derivatives inside an inner loop.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightScaling {
    /// Divide by the current `mu_k` at every inner step.
    #[default]
    Tracking,
    /// Divide by `mu0` for the whole inner loop.
    Frozen,
}

/// Starting dual variable for the RPCA inner loop.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub enum DualInit {
    #[default]
    Zero,
    /// Standard normal entries times `scale`, drawn from `seed`.
    Random { seed: u64, scale: f64 },
}

/// Penalty-parameter schedule and stopping rule of the inner ADMM loop.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdmmSettings {
    pub mu0: f64,
    pub rho: f64,
    pub mu_max: f64,
    pub inner_tol: f64,
    pub inner_max_iters: usize,
    pub weight_scaling: WeightScaling,
}

impl Default for AdmmSettings {
    fn default() -> Self {
        Self {
            mu0: 1.0,
            rho: 1.1,
            mu_max: 1e10,
            inner_tol: 1e-7,
            inner_max_iters: 500,
            weight_scaling: WeightScaling::Tracking,
        }
    }
}

impl AdmmSettings {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if !(self.mu0 > 0.0 && self.mu0.is_finite()) {
            return bad(format!("mu0 must be positive, got {}", self.mu0));
        }
        if !(self.rho >= 1.0 && self.rho.is_finite()) {
            return bad(format!("rho must be at least 1, got {}", self.rho));
        }
        if !(self.mu_max >= self.mu0) {
            return bad(format!(
                "mu_max ({}) must be at least mu0 ({})",
                self.mu_max, self.mu0
            ));
        }
        if !(self.inner_tol > 0.0) {
            return bad(format!("inner_tol must be positive, got {}", self.inner_tol));
        }
        if self.inner_max_iters == 0 {
            return bad("inner_max_iters must be at least 1".into());
        }
        Ok(())
    }

    pub(crate) fn weight_scale(&self, mu: f64) -> f64 {
        match self.weight_scaling {
            WeightScaling::Tracking => 1.0 / mu,
            WeightScaling::Frozen => 1.0 / self.mu0,
        }
    }

    pub(crate) fn next_mu(&self, mu: f64) -> f64 {
        (self.rho * mu).min(self.mu_max)
    }
}

/// Unscaled thresholds for the spectral singular values, indexed
/// `[k][i]` over the half spectrum `k <= n3/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralWeights {
    raw: Vec<Vec<f64>>,
}

impl SpectralWeights {
    pub fn constant(n3: usize, rank_bound: usize, value: f64) -> Self {
        Self {
            raw: vec![vec![value; rank_bound]; half_spectrum_len(n3)],
        }
    }

    /// `phi'_{1,gamma}(S̄_old(i, i, k))`.
    pub fn from_penalty(rank_penalty: &PenaltyParams, spectrum: &SpectralDiagonal) -> Self {
        let unit = rank_penalty.with_unit_lambda();
        Self {
            raw: spectrum.slices()[..half_spectrum_len(spectrum.n3())]
                .iter()
                .map(|s| s.iter().map(|&v| derivative_unchecked(&unit, v)).collect())
                .collect(),
        }
    }

    pub fn raw(&self) -> &[Vec<f64>] {
        &self.raw
    }
}

/// Per-iteration `||constraint residual||_inf` of one inner loop.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AdmmTrace {
    pub residuals: Vec<f64>,
    pub converged: bool,
}

impl AdmmTrace {
    pub fn iterations(&self) -> usize {
        self.residuals.len()
    }

    pub fn final_residual(&self) -> f64 {
        self.residuals.last().copied().unwrap_or(0.0)
    }
}

/// Result of a completion or RPCA solve.
#[derive(Clone, Debug)]
pub struct SolveReport {
    /// Completed tensor, or the low-rank part for RPCA.
    pub estimate: DenseTensor3,
    /// Sparse part (RPCA only).
    pub sparse: Option<DenseTensor3>,
    /// Objective at the initial point and after every accepted outer iteration.
    pub objective_trace: Vec<f64>,
    /// Inner residuals of all inner loops, concatenated.
    pub feasibility_trace: Vec<f64>,
    /// Inner iteration count per outer iteration.
    pub inner_iterations: Vec<usize>,
    /// Outer iterations accepted.
    pub outer_iterations: usize,
    /// Whether the last inner loop met its tolerance.
    pub converged: bool,
}

impl SolveReport {
    pub fn final_objective(&self) -> f64 {
        *self.objective_trace.last().expect("objective trace is never empty")
    }

    pub fn final_residual(&self) -> f64 {
        self.feasibility_trace.last().copied().unwrap_or(0.0)
    }

    fn absorb(&mut self, trace: AdmmTrace) {
        self.converged = trace.converged;
        self.inner_iterations.push(trace.residuals.len());
        self.feasibility_trace.extend(trace.residuals);
    }
}

fn twist_in(a: &DenseTensor3, twist: Option<[usize; 3]>) -> Result<DenseTensor3> {
    match twist {
        Some(p) => permute_modes(a, p),
        None => Ok(a.clone()),
    }
}

fn twist_out(a: DenseTensor3, twist: Option<[usize; 3]>) -> Result<DenseTensor3> {
    match twist {
        Some(p) => permute_modes(&a, inverse_perm(p)?),
        None => Ok(a),
    }
}
