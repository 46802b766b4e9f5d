use super::{twist_in, twist_out, AdmmSettings, AdmmTrace, SolveReport, SpectralWeights};
use crate::error::Result;
use crate::operators::{project_observed, tsvt_scaled};
use crate::penalties::{gamma_norm_of_spectrum, PenaltyKind, PenaltyParams};
use crate::tensor::{DenseTensor3, ObservationMask};
use crate::tsvd::{spectral_singular_values, tensor_nuclear_norm};

#[derive(Clone, Debug, Default, PartialEq)]
pub enum TcInit {
    /// Start from the convex (tensor nuclear norm) completion.
    #[default]
    ConvexTnn,
    /// Start from a given tensor; its observed entries are overwritten.
    Provided(DenseTensor3),
}

#[derive(Clone, Debug, PartialEq)]
pub struct TcConfig {
    pub penalty: PenaltyKind,
    pub gamma: f64,
    pub admm: AdmmSettings,
    pub outer_iters: usize,
    pub init: TcInit,
    /// Solve on `permute_modes(O, perm)` and permute the result back.
    pub twist: Option<[usize; 3]>,
    /// Discard an outer step that raises the objective and stop there.
    pub reject_ascent: bool,
}

impl Default for TcConfig {
    fn default() -> Self {
        Self {
            penalty: PenaltyKind::Mcp,
            gamma: 25.0,
            admm: AdmmSettings::default(),
            outer_iters: 10,
            init: TcInit::ConvexTnn,
            twist: None,
            reject_ascent: true,
        }
    }
}

impl TcConfig {
    /// Single outer iteration from the convex solution.
    pub fn one_step_lla(penalty: PenaltyKind, gamma: f64) -> Self {
        Self {
            penalty,
            gamma,
            outer_iters: 1,
            ..Self::default()
        }
    }

    fn rank_penalty(&self) -> Result<PenaltyParams> {
        PenaltyParams::rank(self.penalty, self.gamma)
    }
}

/// One weighted ADMM solve of
/// `min_X sum_{i,k} w_ik S̄_X(i,i,k) / n3  s.t.  X = O on the mask`,
/// started from the feasible point `x_old` with zero dual.
pub fn admm_tc_inner(
    observed: &DenseTensor3,
    mask: &ObservationMask,
    x_old: &DenseTensor3,
    weights: &SpectralWeights,
    settings: &AdmmSettings,
) -> Result<(DenseTensor3, DenseTensor3, AdmmTrace)> {
    settings.validate()?;
    observed.same_dims(x_old)?;
    mask.check(observed)?;
    let dims = observed.dims();
    if mask.is_full() {
        return Ok((
            observed.clone(),
            DenseTensor3::zeros(dims)?,
            AdmmTrace {
                residuals: vec![0.0],
                converged: true,
            },
        ));
    }

    let mut x = project_observed(x_old, observed, mask)?;
    let mut y = DenseTensor3::zeros(dims)?;
    let mut mu = settings.mu0;
    let mut trace = AdmmTrace::default();
    for _ in 0..settings.inner_max_iters {
        let inv_mu = 1.0 / mu;
        let target = x.zip_map(&y, |xv, yv| xv - yv * inv_mu)?;
        let m = tsvt_scaled(&target, weights.raw(), settings.weight_scale(mu))?;
        let shifted = m.zip_map(&y, |mv, yv| mv + yv * inv_mu)?;
        x = project_observed(&shifted, observed, mask)?;
        let diff = m.sub(&x)?;
        y = y.zip_map(&diff, |yv, d| yv + mu * d)?;
        let residual = diff.max_abs();
        trace.residuals.push(residual);
        mu = settings.next_mu(mu);
        if residual <= settings.inner_tol {
            trace.converged = true;
            break;
        }
    }
    Ok((x, y, trace))
}

/// Tensor nuclear norm completion.
pub fn convex_tc(
    observed: &DenseTensor3,
    mask: &ObservationMask,
    cfg: &TcConfig,
) -> Result<SolveReport> {
    mask.check(observed)?;
    let o = twist_in(observed, cfg.twist)?;
    let m = match cfg.twist {
        Some(p) => mask.permute(p)?,
        None => mask.clone(),
    };
    let report = convex_tc_untwisted(&o, &m, &cfg.admm)?;
    Ok(SolveReport {
        estimate: twist_out(report.estimate, cfg.twist)?,
        ..report
    })
}

fn convex_tc_untwisted(
    observed: &DenseTensor3,
    mask: &ObservationMask,
    settings: &AdmmSettings,
) -> Result<SolveReport> {
    let (n1, n2, n3) = observed.dims();
    let start = mask.apply(observed)?;
    let weights = SpectralWeights::constant(n3, n1.min(n2), 1.0);
    let (x, _, trace) = admm_tc_inner(observed, mask, &start, &weights, settings)?;
    let mut report = SolveReport {
        objective_trace: vec![tensor_nuclear_norm(&x)?],
        estimate: x,
        sparse: None,
        feasibility_trace: Vec::new(),
        inner_iterations: Vec::new(),
        outer_iterations: 1,
        converged: false,
    };
    report.absorb(trace);
    Ok(report)
}

/// Non-convex low-rank completion with the gamma-norm surrogate.
///
/// Runs `cfg.outer_iters` MM steps. With `reject_ascent`, a step whose inner
/// solve fails to lower the gamma-norm is discarded and ends the outer loop,
/// since repeating it from the same point would reproduce it.
pub fn lrtc_mm(
    observed: &DenseTensor3,
    mask: &ObservationMask,
    cfg: &TcConfig,
) -> Result<SolveReport> {
    mask.check(observed)?;
    let penalty = cfg.rank_penalty()?;
    cfg.admm.validate()?;
    let o = twist_in(observed, cfg.twist)?;
    let m = match cfg.twist {
        Some(p) => mask.permute(p)?,
        None => mask.clone(),
    };

    let mut report = match &cfg.init {
        TcInit::ConvexTnn => convex_tc_untwisted(&o, &m, &cfg.admm)?,
        TcInit::Provided(x0) => {
            let x0 = project_observed(&twist_in(x0, cfg.twist)?, &o, &m)?;
            SolveReport {
                estimate: x0,
                sparse: None,
                objective_trace: Vec::new(),
                feasibility_trace: Vec::new(),
                inner_iterations: Vec::new(),
                outer_iterations: 0,
                converged: true,
            }
        }
    };
    report.outer_iterations = 0;

    let mut x_old = report.estimate.clone();
    let mut spectrum_old = spectral_singular_values(&x_old)?;
    let mut objective_old = gamma_norm_of_spectrum(&penalty, &spectrum_old);
    report.objective_trace = vec![objective_old];

    for _ in 0..cfg.outer_iters {
        let weights = SpectralWeights::from_penalty(&penalty, &spectrum_old);
        let (x, _, trace) = admm_tc_inner(&o, &m, &x_old, &weights, &cfg.admm)?;
        report.absorb(trace);
        let spectrum = spectral_singular_values(&x)?;
        let objective = gamma_norm_of_spectrum(&penalty, &spectrum);
        if cfg.reject_ascent && objective > objective_old {
            break;
        }
        report.outer_iterations += 1;
        report.objective_trace.push(objective);
        x_old = x;
        spectrum_old = spectrum;
        objective_old = objective;
    }
    report.estimate = twist_out(x_old, cfg.twist)?;
    Ok(report)
}
