use super::{twist_in, twist_out, AdmmSettings, AdmmTrace, DualInit, SolveReport, SpectralWeights};
use crate::error::{Error, Result};
use crate::operators::{soft_threshold_scaled, tsvt_scaled};
use crate::penalties::{
    derivative_unchecked, gamma_norm_of_spectrum, sparsity_measure, PenaltyKind, PenaltyParams,
};
use crate::random::standard_normal_tensor;
use crate::tensor::DenseTensor3;
use crate::tsvd::{spectral_singular_values, tensor_nuclear_norm, SpectralDiagonal};

#[derive(Clone, Debug, Default, PartialEq)]
pub enum RpcaInit {
    /// Start from the convex (TNN + l1) decomposition.
    #[default]
    ConvexTrpca,
    Provided {
        low_rank: DenseTensor3,
        sparse: DenseTensor3,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct RpcaConfig {
    pub penalty: PenaltyKind,
    /// `gamma` of the rank surrogate.
    pub gamma_rank: f64,
    /// `gamma` of the sparsity measure.
    pub gamma_sparse: f64,
    /// Sparsity weight; `None` means [`default_lambda`].
    pub lambda: Option<f64>,
    pub admm: AdmmSettings,
    pub outer_iters: usize,
    pub init: RpcaInit,
    pub dual_init: DualInit,
    pub twist: Option<[usize; 3]>,
    /// Discard an outer step that raises the objective and stop there.
    pub reject_ascent: bool,
}

impl Default for RpcaConfig {
    fn default() -> Self {
        Self {
            penalty: PenaltyKind::Mcp,
            gamma_rank: 20.0,
            gamma_sparse: 20.0,
            lambda: None,
            admm: AdmmSettings::default(),
            outer_iters: 10,
            init: RpcaInit::ConvexTrpca,
            dual_init: DualInit::Zero,
            twist: None,
            reject_ascent: true,
        }
    }
}

impl RpcaConfig {
    pub fn lambda_for(&self, dims: (usize, usize, usize)) -> Result<f64> {
        let lambda = self.lambda.unwrap_or_else(|| default_lambda(dims));
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "lambda must be positive, got {lambda}"
            )));
        }
        Ok(lambda)
    }
}

/// `1 / sqrt(max(n1, n2) * n3)`.
pub fn default_lambda(dims: (usize, usize, usize)) -> f64 {
    let (n1, n2, n3) = dims;
    1.0 / ((n1.max(n2) * n3) as f64).sqrt()
}

fn initial_dual(dims: (usize, usize, usize), init: DualInit) -> Result<DenseTensor3> {
    match init {
        DualInit::Zero => DenseTensor3::zeros(dims),
        DualInit::Random { seed, scale } => Ok(standard_normal_tensor(dims, seed)?.scale(scale)),
    }
}

/// One weighted ADMM solve of
/// `min_{L,E} sum z_ik S̄_L(i,i,k) / n3 + sum w_ijk |E_ijk|  s.t.  L + E = X`.
///
/// `sparse_weights` holds raw per-entry thresholds, scaled by `1/mu` like
/// the spectral ones.
pub fn admm_rpca_inner(
    x: &DenseTensor3,
    low_rank_old: &DenseTensor3,
    sparse_old: &DenseTensor3,
    rank_weights: &SpectralWeights,
    sparse_weights: &DenseTensor3,
    settings: &AdmmSettings,
    dual_init: DualInit,
) -> Result<(DenseTensor3, DenseTensor3, DenseTensor3, AdmmTrace)> {
    settings.validate()?;
    x.same_dims(low_rank_old)?;
    x.same_dims(sparse_old)?;
    x.same_dims(sparse_weights)?;
    let mut l = low_rank_old.clone();
    let mut e = sparse_old.clone();
    let mut y = initial_dual(x.dims(), dual_init)?;
    let mut mu = settings.mu0;
    let mut trace = AdmmTrace::default();
    for _ in 0..settings.inner_max_iters {
        let inv_mu = 1.0 / mu;
        let scale = settings.weight_scale(mu);
        let e_shift = e.zip_map(&y, |ev, yv| ev + yv * inv_mu)?;
        l = tsvt_scaled(&x.sub(&e_shift)?, rank_weights.raw(), scale)?;
        let l_shift = l.zip_map(&y, |lv, yv| lv + yv * inv_mu)?;
        e = soft_threshold_scaled(&x.sub(&l_shift)?, sparse_weights, scale)?;
        let r = l.add(&e)?.sub(x)?;
        y = y.zip_map(&r, |yv, rv| yv + mu * rv)?;
        let residual = r.max_abs();
        trace.residuals.push(residual);
        mu = settings.next_mu(mu);
        if residual <= settings.inner_tol {
            trace.converged = true;
            break;
        }
    }
    Ok((l, e, y, trace))
}

/// TNN + `lambda * ||E||_1` decomposition.
pub fn convex_trpca(x: &DenseTensor3, lambda: f64, cfg: &RpcaConfig) -> Result<SolveReport> {
    let xt = twist_in(x, cfg.twist)?;
    let mut report = convex_trpca_untwisted(&xt, lambda, cfg)?;
    report.estimate = twist_out(report.estimate, cfg.twist)?;
    report.sparse = report
        .sparse
        .map(|s| twist_out(s, cfg.twist))
        .transpose()?;
    Ok(report)
}

fn convex_trpca_untwisted(x: &DenseTensor3, lambda: f64, cfg: &RpcaConfig) -> Result<SolveReport> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "lambda must be positive, got {lambda}"
        )));
    }
    let dims = x.dims();
    let (n1, n2, n3) = dims;
    let zero = DenseTensor3::zeros(dims)?;
    let rank_weights = SpectralWeights::constant(n3, n1.min(n2), 1.0);
    let sparse_weights = zero.map(|_| lambda);
    let (l, e, _, trace) = admm_rpca_inner(
        x,
        &zero,
        &zero,
        &rank_weights,
        &sparse_weights,
        &cfg.admm,
        cfg.dual_init,
    )?;
    let mut report = SolveReport {
        objective_trace: vec![tensor_nuclear_norm(&l)? + lambda * e.l1_norm()],
        estimate: l,
        sparse: Some(e),
        feasibility_trace: Vec::new(),
        inner_iterations: Vec::new(),
        outer_iterations: 1,
        converged: false,
    };
    report.absorb(trace);
    Ok(report)
}

/// Non-convex tensor RPCA: gamma-norm on the low-rank part plus the
/// SCAD/MCP sparsity measure on the sparse part.
///
/// Outer steps follow [`super::lrtc_mm`], including `reject_ascent`.
pub fn trpca_mm(x: &DenseTensor3, cfg: &RpcaConfig) -> Result<SolveReport> {
    cfg.admm.validate()?;
    let xt = twist_in(x, cfg.twist)?;
    let lambda = cfg.lambda_for(xt.dims())?;
    let rank_penalty = PenaltyParams::rank(cfg.penalty, cfg.gamma_rank)?;
    let sparse_penalty = PenaltyParams::new(cfg.penalty, lambda, cfg.gamma_sparse)?;

    let mut report = match &cfg.init {
        RpcaInit::ConvexTrpca => convex_trpca_untwisted(&xt, lambda, cfg)?,
        RpcaInit::Provided { low_rank, sparse } => SolveReport {
            estimate: twist_in(low_rank, cfg.twist)?,
            sparse: Some(twist_in(sparse, cfg.twist)?),
            objective_trace: Vec::new(),
            feasibility_trace: Vec::new(),
            inner_iterations: Vec::new(),
            outer_iterations: 0,
            converged: true,
        },
    };
    report.outer_iterations = 0;

    let mut l_old = report.estimate.clone();
    let mut e_old = report.sparse.take().expect("rpca init carries a sparse part");
    l_old.same_dims(&xt)?;
    e_old.same_dims(&xt)?;
    let mut spectrum_old = spectral_singular_values(&l_old)?;
    let objective = |spectrum: &SpectralDiagonal, e: &DenseTensor3| {
        gamma_norm_of_spectrum(&rank_penalty, spectrum) + sparsity_measure(&sparse_penalty, e)
    };
    let mut objective_old = objective(&spectrum_old, &e_old);
    report.objective_trace = vec![objective_old];

    for _ in 0..cfg.outer_iters {
        let rank_weights = SpectralWeights::from_penalty(&rank_penalty, &spectrum_old);
        let sparse_weights = e_old.map(|v| derivative_unchecked(&sparse_penalty, v.abs()));
        let (l, e, _, trace) = admm_rpca_inner(
            &xt,
            &l_old,
            &e_old,
            &rank_weights,
            &sparse_weights,
            &cfg.admm,
            cfg.dual_init,
        )?;
        report.absorb(trace);
        let spectrum = spectral_singular_values(&l)?;
        let value = objective(&spectrum, &e);
        if cfg.reject_ascent && value > objective_old {
            break;
        }
        report.outer_iterations += 1;
        report.objective_trace.push(value);
        l_old = l;
        e_old = e;
        spectrum_old = spectrum;
        objective_old = value;
    }
    report.estimate = twist_out(l_old, cfg.twist)?;
    report.sparse = Some(twist_out(e_old, cfg.twist)?);
    Ok(report)
}
