//! SCAD and MCP folded-concave penalties, the entrywise sparsity measure
//! built from them, the spectral rank surrogate (gamma-norm), and the
//! tangent-line majorizers used by the MM solvers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::DenseTensor3;
use crate::tsvd::{spectral_singular_values, SpectralDiagonal};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PenaltyKind {
    Scad,
    Mcp,
}

impl std::fmt::Display for PenaltyKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PenaltyKind::Scad => "scad",
            PenaltyKind::Mcp => "mcp",
        })
    }
}

/// Penalty family with `lambda > 0` and `gamma > 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PenaltyParams {
    kind: PenaltyKind,
    lambda: f64,
    gamma: f64,
}

impl PenaltyParams {
    pub fn new(kind: PenaltyKind, lambda: f64, gamma: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "penalty lambda must be positive and finite, got {lambda}"
            )));
        }
        if !(gamma > 1.0 && gamma.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "penalty gamma must exceed 1, got {gamma}"
            )));
        }
        Ok(Self {
            kind,
            lambda,
            gamma,
        })
    }

    pub fn scad(lambda: f64, gamma: f64) -> Result<Self> {
        Self::new(PenaltyKind::Scad, lambda, gamma)
    }

    pub fn mcp(lambda: f64, gamma: f64) -> Result<Self> {
        Self::new(PenaltyKind::Mcp, lambda, gamma)
    }

    /// The `lambda = 1` member used by the rank surrogate.
    pub fn rank(kind: PenaltyKind, gamma: f64) -> Result<Self> {
        Self::new(kind, 1.0, gamma)
    }

    pub fn kind(&self) -> PenaltyKind {
        self.kind
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Same family and `gamma` with `lambda` forced to 1.
    pub fn with_unit_lambda(&self) -> Self {
        Self {
            lambda: 1.0,
            ..*self
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        penalty_value(self, t)
    }

    pub fn derivative(&self, t: f64) -> Result<f64> {
        penalty_derivative(self, t)
    }
}

/// `phi(t)`; even in `t`.
pub fn penalty_value(p: &PenaltyParams, t: f64) -> f64 {
    let (lambda, gamma) = (p.lambda, p.gamma);
    let a = t.abs();
    match p.kind {
        PenaltyKind::Scad => {
            if a <= lambda {
                lambda * a
            } else if a <= gamma * lambda {
                (gamma * lambda * a - 0.5 * (a * a + lambda * lambda)) / (gamma - 1.0)
            } else {
                0.5 * (gamma + 1.0) * lambda * lambda
            }
        }
        PenaltyKind::Mcp => {
            if a < gamma * lambda {
                lambda * a - a * a / (2.0 * gamma)
            } else {
                0.5 * gamma * lambda * lambda
            }
        }
    }
}

/// Right derivative of `phi` on `[0, inf)`. `phi'(0) = lambda`.
pub fn penalty_derivative(p: &PenaltyParams, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "penalty derivative needs t >= 0, got {t}"
        )));
    }
    Ok(derivative_unchecked(p, t))
}

#[inline]
pub(crate) fn derivative_unchecked(p: &PenaltyParams, t: f64) -> f64 {
    let (lambda, gamma) = (p.lambda, p.gamma);
    match p.kind {
        PenaltyKind::Scad => {
            if t <= lambda {
                lambda
            } else if t <= gamma * lambda {
                (gamma * lambda - t) / (gamma - 1.0)
            } else {
                0.0
            }
        }
        PenaltyKind::Mcp => {
            if t < gamma * lambda {
                lambda - t / gamma
            } else {
                0.0
            }
        }
    }
}

/// `Phi(A) = sum_{ijk} phi(A_ijk)`.
pub fn sparsity_measure(p: &PenaltyParams, a: &DenseTensor3) -> f64 {
    a.as_slice().iter().map(|&v| penalty_value(p, v)).sum()
}

/// `||A||_gamma = (1/n3) * sum_{i,k} phi_{1,gamma}(S̄(i, i, k))`.
///
/// `lambda` of `p` is ignored; the surrogate always uses `lambda = 1`.
pub fn gamma_norm(p: &PenaltyParams, a: &DenseTensor3) -> Result<f64> {
    Ok(gamma_norm_of_spectrum(p, &spectral_singular_values(a)?))
}

/// [`gamma_norm`] for an already computed spectral diagonal.
pub fn gamma_norm_of_spectrum(p: &PenaltyParams, spectrum: &SpectralDiagonal) -> f64 {
    let unit = p.with_unit_lambda();
    let total: f64 = spectrum
        .slices()
        .iter()
        .map(|s| s.iter().map(|&v| penalty_value(&unit, v)).sum::<f64>())
        .sum();
    total / spectrum.n3() as f64
}

/// Tangent-line majorizer of [`sparsity_measure`] at `x_old`:
/// `Phi(x_old) + sum phi'(|x_old|) * (|x| - |x_old|)`.
pub fn q_sparsity_value(p: &PenaltyParams, x: &DenseTensor3, x_old: &DenseTensor3) -> Result<f64> {
    x.same_dims(x_old)?;
    Ok(x
        .as_slice()
        .iter()
        .zip(x_old.as_slice())
        .map(|(&v, &o)| {
            let o = o.abs();
            penalty_value(p, o) + derivative_unchecked(p, o) * (v.abs() - o)
        })
        .sum())
}

/// Tangent-line majorizer of [`gamma_norm`] at `x_old`, linear in the
/// spectral singular values of `x`.
pub fn q_rank_value(p: &PenaltyParams, x: &DenseTensor3, x_old: &DenseTensor3) -> Result<f64> {
    x.same_dims(x_old)?;
    Ok(q_rank_of_spectra(
        p,
        &spectral_singular_values(x)?,
        &spectral_singular_values(x_old)?,
    ))
}

pub fn q_rank_of_spectra(p: &PenaltyParams, s: &SpectralDiagonal, s_old: &SpectralDiagonal) -> f64 {
    let unit = p.with_unit_lambda();
    let linear: f64 = s
        .slices()
        .iter()
        .zip(s_old.slices())
        .map(|(new, old)| {
            new.iter()
                .zip(old)
                .map(|(&v, &o)| derivative_unchecked(&unit, o) * (v - o))
                .sum::<f64>()
        })
        .sum();
    gamma_norm_of_spectrum(&unit, s_old) + linear / s.n3() as f64
}
