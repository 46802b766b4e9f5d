//! Experiment plumbing shared by the `tubal` binary: solver options,
//! seeded experiment specs, tensor/image loading and deterministic reports.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io;
use crate::metrics::MetricsReport;
use crate::penalties::PenaltyKind;
use crate::solvers::{
    convex_tc, convex_trpca, lrtc_mm, trpca_mm, AdmmSettings, RpcaConfig, SolveReport, TcConfig,
    TcInit, WeightScaling,
};
use crate::synth::{
    add_gaussian_noise, add_salt_pepper, add_uniform_noise, random_mask, synth_low_tubal_rank,
};
use crate::tensor::{DenseTensor3, ObservationMask};

/// Solver family selected on the command line.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Scad,
    #[default]
    Mcp,
    /// Convex tensor nuclear norm (plus l1 for RPCA).
    Tnn,
}

impl Method {
    pub fn penalty(self) -> Option<PenaltyKind> {
        match self {
            Method::Scad => Some(PenaltyKind::Scad),
            Method::Mcp => Some(PenaltyKind::Mcp),
            Method::Tnn => None,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Scad => "scad",
            Method::Mcp => "mcp",
            Method::Tnn => "tnn",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "scad" => Ok(Method::Scad),
            "mcp" => Ok(Method::Mcp),
            "tnn" => Ok(Method::Tnn),
            other => Err(Error::InvalidParameter(format!(
                "unknown penalty {other:?} (expected scad, mcp or tnn)"
            ))),
        }
    }
}

/// Parses `i,j,k` into a mode permutation.
pub fn parse_twist(s: &str) -> Result<[usize; 3]> {
    let parts: Vec<usize> = s
        .split(',')
        .map(|p| p.trim().parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::InvalidParameter(format!("bad permutation {s:?}")))?;
    let perm: [usize; 3] = parts
        .try_into()
        .map_err(|_| Error::InvalidParameter(format!("permutation {s:?} needs three entries")))?;
    crate::tensor::inverse_perm(perm)?;
    Ok(perm)
}

/// Parses `n1,n2,n3`.
pub fn parse_dims(s: &str) -> Result<(usize, usize, usize)> {
    let parts: Vec<usize> = s
        .split(',')
        .map(|p| p.trim().parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::InvalidParameter(format!("bad dimensions {s:?}")))?;
    match parts[..] {
        [a, b, c] if a > 0 && b > 0 && c > 0 => Ok((a, b, c)),
        _ => Err(Error::InvalidParameter(format!("bad dimensions {s:?}"))),
    }
}

/// Solver knobs shared by completion and RPCA. Unset gammas fall back to
/// 25 for completion and 20 for both RPCA penalties.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverOptions {
    pub penalty: Method,
    pub gamma: Option<f64>,
    pub gamma1: Option<f64>,
    pub gamma2: Option<f64>,
    pub lambda: Option<f64>,
    pub mu0: f64,
    pub rho: f64,
    pub mu_max: f64,
    pub inner_tol: f64,
    pub inner_iters: usize,
    pub outer_iters: usize,
    pub twist: Option<[usize; 3]>,
    pub weight_scaling: WeightScaling,
}

impl Default for SolverOptions {
    fn default() -> Self {
        let admm = AdmmSettings::default();
        Self {
            penalty: Method::Mcp,
            gamma: None,
            gamma1: None,
            gamma2: None,
            lambda: None,
            mu0: admm.mu0,
            rho: admm.rho,
            mu_max: admm.mu_max,
            inner_tol: admm.inner_tol,
            inner_iters: admm.inner_max_iters,
            outer_iters: 10,
            twist: None,
            weight_scaling: admm.weight_scaling,
        }
    }
}

impl SolverOptions {
    pub fn admm(&self) -> AdmmSettings {
        AdmmSettings {
            mu0: self.mu0,
            rho: self.rho,
            mu_max: self.mu_max,
            inner_tol: self.inner_tol,
            inner_max_iters: self.inner_iters,
            weight_scaling: self.weight_scaling,
        }
    }

    pub fn tc_config(&self, init: TcInit) -> TcConfig {
        TcConfig {
            penalty: self.penalty.penalty().unwrap_or(PenaltyKind::Mcp),
            gamma: self.gamma.unwrap_or(25.0),
            admm: self.admm(),
            outer_iters: self.outer_iters,
            init,
            twist: self.twist,
            ..TcConfig::default()
        }
    }

    pub fn rpca_config(&self) -> RpcaConfig {
        RpcaConfig {
            penalty: self.penalty.penalty().unwrap_or(PenaltyKind::Mcp),
            gamma_rank: self.gamma1.or(self.gamma).unwrap_or(20.0),
            gamma_sparse: self.gamma2.or(self.gamma).unwrap_or(20.0),
            lambda: self.lambda,
            admm: self.admm(),
            outer_iters: self.outer_iters,
            twist: self.twist,
            ..RpcaConfig::default()
        }
    }
}

pub fn run_completion(
    observed: &DenseTensor3,
    mask: &ObservationMask,
    opts: &SolverOptions,
    init: TcInit,
) -> Result<SolveReport> {
    let cfg = opts.tc_config(init);
    match opts.penalty {
        Method::Tnn => convex_tc(observed, mask, &cfg),
        _ => lrtc_mm(observed, mask, &cfg),
    }
}

pub fn run_rpca(x: &DenseTensor3, opts: &SolverOptions) -> Result<SolveReport> {
    let cfg = opts.rpca_config();
    match opts.penalty {
        Method::Tnn => convex_trpca(x, cfg.lambda_for(x.dims())?, &cfg),
        _ => trpca_mm(x, &cfg),
    }
}

fn is_image_path(path: &Path) -> bool {
    matches!(
        path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref(),
        Some("pgm" | "ppm" | "pnm")
    )
}

/// Reads a dense tensor from a `TNS1` file or a binary PGM/PPM image
/// (detected from the leading bytes).
pub fn load_dense(path: impl AsRef<Path>) -> Result<DenseTensor3> {
    let bytes = fs::read(path)?;
    if bytes.starts_with(b"P5") || bytes.starts_with(b"P6") {
        io::decode_pnm(&bytes)
    } else {
        io::decode(&bytes)?.into_dense()
    }
}

pub fn load_mask(path: impl AsRef<Path>) -> Result<ObservationMask> {
    io::read_tensor(path)?.into_mask()
}

/// Writes a `TNS1` file, or an 8-bit image when the extension is
/// `.pgm`/`.ppm`.
pub fn save_dense(path: impl AsRef<Path>, a: &DenseTensor3) -> Result<()> {
    if is_image_path(path.as_ref()) {
        io::tensor_to_image(path, a)
    } else {
        io::write_tensor(path, a)
    }
}

/// A report value. Floats print in Rust's shortest round-trip form
/// (exponent notation for tiny or huge magnitudes).
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Int(u64),
    Float(f64),
    Bool(bool),
    Text(String),
    Floats(Vec<f64>),
    Ints(Vec<u64>),
}

fn fmt_float(v: f64) -> String {
    if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:?}")
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(v) => write!(f, "{v}"),
            Value::Float(v) => f.write_str(&fmt_float(*v)),
            Value::Bool(v) => write!(f, "{v}"),
            Value::Text(v) => f.write_str(v),
            Value::Floats(v) => {
                f.write_str(&v.iter().map(|x| fmt_float(*x)).collect::<Vec<_>>().join(","))
            }
            Value::Ints(v) => {
                f.write_str(&v.iter().map(u64::to_string).collect::<Vec<_>>().join(","))
            }
        }
    }
}

impl Value {
    fn to_json(&self) -> serde_json::Value {
        use serde_json::Value as J;
        let float = |v: f64| {
            serde_json::Number::from_f64(v)
                .map(J::Number)
                .unwrap_or_else(|| J::String(fmt_float(v)))
        };
        match self {
            Value::Int(v) => J::from(*v),
            Value::Float(v) => float(*v),
            Value::Bool(v) => J::Bool(*v),
            Value::Text(v) => J::String(v.clone()),
            Value::Floats(v) => J::Array(v.iter().map(|x| float(*x)).collect()),
            Value::Ints(v) => J::Array(v.iter().map(|x| J::from(*x)).collect()),
        }
    }
}

/// Ordered key/value report.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    entries: Vec<(String, Value)>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, key: impl Into<String>, value: Value) -> &mut Self {
        self.entries.push((key.into(), value));
        self
    }

    pub fn extend(&mut self, other: Report) -> &mut Self {
        self.entries.extend(other.entries);
        self
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn entries(&self) -> &[(String, Value)] {
        &self.entries
    }

    /// One `key=value` line per entry.
    pub fn to_key_value(&self) -> String {
        self.entries
            .iter()
            .map(|(k, v)| format!("{k}={v}\n"))
            .collect()
    }

    pub fn to_json(&self) -> String {
        let map: serde_json::Map<String, serde_json::Value> = self
            .entries
            .iter()
            .map(|(k, v)| (k.clone(), v.to_json()))
            .collect();
        let mut s = serde_json::to_string_pretty(&serde_json::Value::Object(map))
            .expect("report values are always serializable");
        s.push('\n');
        s
    }

    /// Writes `path` (key=value lines) and `path.json` (summary document).
    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_key_value())?;
        fs::write(summary_path(path), self.to_json())?;
        Ok(())
    }
}

pub fn summary_path(report: &Path) -> PathBuf {
    let mut name = report.as_os_str().to_owned();
    name.push(".json");
    PathBuf::from(name)
}

/// Metric entries; MSE is also given in units of 1e-4.
pub fn metrics_entries(m: &MetricsReport) -> Report {
    let mut r = Report::new();
    r.push("mse", Value::Float(m.mse))
        .push("mse_e-4", Value::Float(m.mse * 1e4))
        .push("psnr", Value::Float(m.psnr))
        .push("ssim", Value::Float(m.ssim));
    match m.ergas {
        Some(v) => r.push("ergas", Value::Float(v)),
        None => r.push("ergas", Value::Text("undefined".into())),
    };
    match m.sam {
        Some(v) => r.push("sam", Value::Float(v)),
        None => r.push("sam", Value::Text("undefined".into())),
    };
    r.push("sam_skipped", Value::Int(m.sam_skipped as u64));
    r
}

pub fn solve_entries(method: Method, s: &SolveReport) -> Report {
    let mut r = Report::new();
    r.push("method", Value::Text(method.to_string()))
        .push("outer_iterations", Value::Int(s.outer_iterations as u64))
        .push(
            "inner_iterations",
            Value::Ints(s.inner_iterations.iter().map(|&n| n as u64).collect()),
        )
        .push("converged", Value::Bool(s.converged))
        .push("final_objective", Value::Float(s.final_objective()))
        .push("final_residual", Value::Float(s.final_residual()))
        .push("objective_trace", Value::Floats(s.objective_trace.clone()));
    r
}

/// Where an experiment's clean tensor comes from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum Source {
    Synth { dims: [usize; 3], rank: usize },
    /// A `TNS1` tensor or PGM/PPM image; relative paths resolve against
    /// the spec file's directory.
    File(PathBuf),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Complete,
    Rpca,
}

/// Degradations applied to the clean tensor, in field order.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Degradation {
    pub gaussian_sigma: Option<f64>,
    pub salt_pepper: Option<f64>,
    pub uniform_noise: Option<f64>,
    /// Sampling rate of the observation mask (completion only).
    pub mask_rate: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Outputs {
    pub estimate: Option<PathBuf>,
    pub sparse: Option<PathBuf>,
    pub report: Option<PathBuf>,
}

/// A complete, seeded experiment: source, degradation, solver, outputs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub task: Task,
    pub seed: u64,
    pub source: Source,
    #[serde(default)]
    pub degrade: Degradation,
    #[serde(default = "default_peak")]
    pub peak: f64,
    #[serde(default)]
    pub solver: SolverOptions,
    #[serde(default)]
    pub outputs: Outputs,
}

fn default_peak() -> f64 {
    1.0
}

impl ExperimentSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format(format!("experiment spec: {e}")))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }
}

pub struct ExperimentOutcome {
    pub clean: DenseTensor3,
    pub estimate: DenseTensor3,
    pub sparse: Option<DenseTensor3>,
    pub report: Report,
}

fn resolve(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() { p.to_path_buf() } else { base.join(p) }
}

/// Runs an experiment. Each random stage draws from its own stream
/// derived from `spec.seed`, and outputs are written relative to `base`.
pub fn run_experiment(spec: &ExperimentSpec, base: &Path) -> Result<ExperimentOutcome> {
    let stream = |n: u64| spec.seed.wrapping_mul(8).wrapping_add(n);
    let clean = match &spec.source {
        Source::Synth { dims, rank } => {
            synth_low_tubal_rank((dims[0], dims[1], dims[2]), *rank, stream(0))?
        }
        Source::File(p) => load_dense(resolve(base, p))?,
    };
    let d = &spec.degrade;
    let mut x = clean.clone();
    if let Some(sigma) = d.gaussian_sigma {
        x = add_gaussian_noise(&x, sigma, stream(1))?;
    }
    if let Some(p) = d.salt_pepper {
        x = add_salt_pepper(&x, p, spec.peak, stream(2))?;
    }
    if let Some(p) = d.uniform_noise {
        x = add_uniform_noise(&x, p, stream(3))?;
    }

    let mut report = Report::new();
    report
        .push("task", Value::Text(format!("{:?}", spec.task).to_lowercase()))
        .push("seed", Value::Int(spec.seed));
    let solve = match spec.task {
        Task::Complete => {
            let rate = d.mask_rate.ok_or_else(|| {
                Error::InvalidParameter("completion experiments need degrade.mask_rate".into())
            })?;
            let mask = random_mask(x.dims(), rate, stream(4))?;
            let observed = mask.apply(&x)?;
            report.push("observed", Value::Int(mask.count_observed() as u64));
            run_completion(&observed, &mask, &spec.solver, TcInit::ConvexTnn)?
        }
        Task::Rpca => {
            if d.mask_rate.is_some() {
                return Err(Error::InvalidParameter(
                    "mask_rate applies to completion experiments only".into(),
                ));
            }
            run_rpca(&x, &spec.solver)?
        }
    };
    report.extend(solve_entries(spec.solver.penalty, &solve));
    report.push(
        "relative_error",
        Value::Float(solve.estimate.relative_error(&clean)?),
    );
    report.extend(metrics_entries(&MetricsReport::compute(
        &clean,
        &solve.estimate,
        spec.peak,
    )?));

    let out = &spec.outputs;
    if let Some(p) = &out.estimate {
        save_dense(resolve(base, p), &solve.estimate)?;
    }
    if let (Some(p), Some(e)) = (&out.sparse, &solve.sparse) {
        save_dense(resolve(base, p), e)?;
    }
    if let Some(p) = &out.report {
        report.write(resolve(base, p))?;
    }
    Ok(ExperimentOutcome {
        clean,
        estimate: solve.estimate,
        sparse: solve.sparse,
        report,
    })
}

/// Parses the `--init` flag: `tnn` or `file:<path>`.
pub fn parse_init(s: &str) -> Result<TcInit> {
    if s == "tnn" {
        return Ok(TcInit::ConvexTnn);
    }
    match s.strip_prefix("file:") {
        Some(path) if !path.is_empty() => Ok(TcInit::Provided(load_dense(path)?)),
        _ => Err(Error::InvalidParameter(format!(
            "bad init {s:?} (expected tnn or file:<path>)"
        ))),
    }
}
