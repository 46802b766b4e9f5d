use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use tubal::experiment::{
    load_dense, load_mask, metrics_entries, parse_dims, parse_init, parse_twist, run_completion,
    run_experiment, run_rpca, save_dense, solve_entries, ExperimentSpec, Method, Report,
    SolverOptions, Value,
};
use tubal::io::{write_mask, write_tensor};
use tubal::metrics::MetricsReport;
use tubal::solvers::{AdmmSettings, WeightScaling};
use tubal::synth::{add_salt_pepper, add_uniform_noise, random_mask, synth_low_tubal_rank};
use tubal::tsvd::{spectral_singular_values, tensor_nuclear_norm, tubal_rank};
use tubal::{DenseTensor3, Error};

#[derive(Parser)]
#[command(name = "tubal", version, about = "Non-convex low-tubal-rank tensor recovery")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Random tensor of given tubal rank.
    Synth {
        #[arg(long, value_parser = dims_arg)]
        dims: (usize, usize, usize),
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Subsample or corrupt a tensor.
    Degrade {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, group = "kind")]
        mask_rate: Option<f64>,
        #[arg(long, group = "kind", requires = "peak")]
        salt_pepper: Option<f64>,
        #[arg(long)]
        peak: Option<f64>,
        #[arg(long, group = "kind")]
        uniform_noise: Option<f64>,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        mask_out: Option<PathBuf>,
    },
    /// Tensor completion.
    Complete {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        mask: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        /// `tnn` or `file:<path>`.
        #[arg(long, default_value = "tnn")]
        init: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Tensor robust PCA.
    Rpca {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long)]
        gamma1: Option<f64>,
        #[arg(long)]
        gamma2: Option<f64>,
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long)]
        out_l: PathBuf,
        #[arg(long)]
        out_e: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Quality indexes of an estimate against a reference.
    Metrics {
        #[arg(long = "ref")]
        reference: PathBuf,
        #[arg(long)]
        est: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        peak: f64,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Spectral singular values, tubal rank and TNN.
    Tsvd {
        #[arg(long = "in")]
        input: PathBuf,
        /// Writes S̄(i, i, k) as a min(n1,n2) x 1 x n3 tensor.
        #[arg(long)]
        dump_spectrum: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-9)]
        rank_tol: f64,
    },
    /// Run a JSON experiment spec end to end.
    Run {
        #[arg(long)]
        spec: PathBuf,
    },
}

#[derive(Args)]
struct SolverArgs {
    #[arg(long, default_value = "mcp", value_parser = method_arg)]
    penalty: Method,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long, default_value_t = AdmmSettings::default().mu0)]
    mu0: f64,
    #[arg(long, default_value_t = AdmmSettings::default().rho)]
    rho: f64,
    #[arg(long, default_value_t = AdmmSettings::default().mu_max)]
    mu_max: f64,
    #[arg(long, default_value_t = AdmmSettings::default().inner_tol)]
    inner_tol: f64,
    #[arg(long, default_value_t = AdmmSettings::default().inner_max_iters)]
    inner_iters: usize,
    #[arg(long, default_value_t = 10)]
    outer_iters: usize,
    #[arg(long, value_parser = twist_arg)]
    twist: Option<[usize; 3]>,
    /// Divide penalty derivatives by mu0 for the whole inner loop.
    #[arg(long)]
    frozen_weights: bool,
}

impl SolverArgs {
    fn options(&self) -> SolverOptions {
        SolverOptions {
            penalty: self.penalty,
            gamma: self.gamma,
            mu0: self.mu0,
            rho: self.rho,
            mu_max: self.mu_max,
            inner_tol: self.inner_tol,
            inner_iters: self.inner_iters,
            outer_iters: self.outer_iters,
            twist: self.twist,
            weight_scaling: if self.frozen_weights {
                WeightScaling::Frozen
            } else {
                WeightScaling::Tracking
            },
            ..SolverOptions::default()
        }
    }
}

fn dims_arg(s: &str) -> Result<(usize, usize, usize), String> {
    parse_dims(s).map_err(|e| e.to_string())
}

fn twist_arg(s: &str) -> Result<[usize; 3], String> {
    parse_twist(s).map_err(|e| e.to_string())
}

fn method_arg(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn emit(report: &Report, path: Option<&Path>) -> tubal::Result<()> {
    print!("{}", report.to_key_value());
    if let Some(p) = path {
        report.write(p)?;
    }
    Ok(())
}

fn configure_threads() -> tubal::Result<()> {
    let Ok(raw) = std::env::var("TUBAL_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| Error::InvalidParameter(format!("TUBAL_THREADS={raw:?} is not a count")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))
}

fn run(cli: Cli) -> tubal::Result<()> {
    configure_threads()?;
    match cli.command {
        Command::Synth { dims, rank, seed, out } => {
            write_tensor(out, &synth_low_tubal_rank(dims, rank, seed)?)
        }
        Command::Degrade {
            input,
            mask_rate,
            salt_pepper,
            peak,
            uniform_noise,
            seed,
            out,
            mask_out,
        } => {
            let a = load_dense(input)?;
            let degraded = if let Some(rate) = mask_rate {
                let mask = random_mask(a.dims(), rate, seed)?;
                if let Some(p) = mask_out {
                    write_mask(p, &mask)?;
                }
                mask.apply(&a)?
            } else if let Some(p) = salt_pepper {
                add_salt_pepper(&a, p, peak.expect("clap enforces --peak"), seed)?
            } else if let Some(p) = uniform_noise {
                add_uniform_noise(&a, p, seed)?
            } else {
                return Err(Error::InvalidParameter(
                    "degrade needs --mask-rate, --salt-pepper or --uniform-noise".into(),
                ));
            };
            save_dense(out, &degraded)
        }
        Command::Complete {
            input,
            mask,
            solver,
            init,
            out,
            report,
        } => {
            let observed = load_dense(input)?;
            let mask = load_mask(mask)?;
            let opts = solver.options();
            let solve = run_completion(&observed, &mask, &opts, parse_init(&init)?)?;
            save_dense(out, &solve.estimate)?;
            emit(&solve_entries(opts.penalty, &solve), report.as_deref())
        }
        Command::Rpca {
            input,
            solver,
            gamma1,
            gamma2,
            lambda,
            out_l,
            out_e,
            report,
        } => {
            let x = load_dense(input)?;
            let opts = SolverOptions {
                gamma1,
                gamma2,
                lambda,
                ..solver.options()
            };
            let solve = run_rpca(&x, &opts)?;
            save_dense(out_l, &solve.estimate)?;
            if let (Some(p), Some(e)) = (out_e, &solve.sparse) {
                save_dense(p, e)?;
            }
            emit(&solve_entries(opts.penalty, &solve), report.as_deref())
        }
        Command::Metrics {
            reference,
            est,
            peak,
            report,
        } => {
            let m = MetricsReport::compute(&load_dense(reference)?, &load_dense(est)?, peak)?;
            emit(&metrics_entries(&m), report.as_deref())
        }
        Command::Tsvd {
            input,
            dump_spectrum,
            rank_tol,
        } => {
            let a = load_dense(input)?;
            let spectrum = spectral_singular_values(&a)?;
            let (n1, n2, n3) = a.dims();
            let mut r = Report::new();
            r.push("dims", Value::Ints(vec![n1 as u64, n2 as u64, n3 as u64]))
                .push("tubal_rank", Value::Int(tubal_rank(&a, rank_tol)? as u64))
                .push("tnn", Value::Float(tensor_nuclear_norm(&a)?))
                .push("tnn_spectral", Value::Float(spectrum.nuclear_norm()));
            if let Some(p) = dump_spectrum {
                let dump = DenseTensor3::from_fn((n1.min(n2), 1, n3), |i, _, k| spectrum.get(i, k))?;
                write_tensor(p, &dump)?;
            }
            emit(&r, None)
        }
        Command::Run { spec } => {
            let base = spec.parent().map(Path::to_path_buf).unwrap_or_default();
            let outcome = run_experiment(&ExperimentSpec::load(&spec)?, &base)?;
            print!("{}", outcome.report.to_key_value());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 3 } else { 2 })
        }
    }
}
