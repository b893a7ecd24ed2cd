//! `gspsa` command-line front end.
//!
//! Exit codes: 0 on success, 1 when a gradient check exceeds its tolerance,
//! 2 for an invalid config or missing dataset, 3 for a numeric fault during
//! training, 4 for any other failure.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::config::{DatasetConfig, RunConfig};
use crate::data::Task;
use crate::exec::{with_workers, Parallelism};
use crate::grad::{finite_diff_jacobian, param_shift_jacobian, spsa_jacobian, SpsaConfig};
use crate::sim::ExecutionMode;
use crate::train::{predict_counts, train, Counts, Estimator, Split, TrainReport};
use crate::{Error, Result, Seed};

pub const EXIT_OK: i32 = 0;
pub const EXIT_TOLERANCE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_OTHER: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "gspsa", version, about = "Guided-SPSA training lab for variational quantum circuits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Train a circuit and write per-epoch metrics and a run summary.
    Train(CommonArgs),
    /// Run the toy minimization and write its trajectory.
    Toy(CommonArgs),
    /// Compare parameter-shift against finite differences and SPSA.
    Gradcheck(CommonArgs),
    /// Print closed-form circuit-evaluation counts without simulating.
    Count(CommonArgs),
}

#[derive(Clone, Debug, Args)]
pub struct CommonArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory; overrides the config's `output_dir`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Master seed; overrides the config's `seed`.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads for batch-level parallelism. Results do not depend on it.
    #[arg(long)]
    pub workers: Option<usize>,
}

/// Run summary written next to the epoch CSV.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Summary {
    pub config: RunConfig,
    pub n_train: usize,
    pub n_val: usize,
    pub n_test: usize,
    pub n_params: usize,
    pub ps_evals_per_sample: u64,
    pub counts: Counts,
    pub convergence_epoch: usize,
    pub best_val_metric: f64,
    pub test_metric: Option<f64>,
    pub final_train_loss: f64,
    pub final_val_metric: f64,
    pub final_params: Vec<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CountSummary {
    pub name: String,
    pub n_train: usize,
    pub n_val: usize,
    pub n_params: usize,
    pub counts: Counts,
    pub param_shift_counts: Counts,
    /// Gradient evaluations relative to the parameter-shift baseline.
    pub ratio_vs_param_shift: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GradcheckSummary {
    pub samples: usize,
    pub max_ps_fd_deviation: f64,
    pub tolerance: f64,
    /// `(k, median relative Frobenius error vs parameter-shift)`.
    pub spsa_relative_error: Vec<(usize, f64)>,
}

pub enum GradcheckOutcome {
    Skipped(String),
    Checked(GradcheckSummary),
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config(_)
        | Error::Json(_)
        | Error::Ansatz(_)
        | Error::Capacity(_)
        | Error::Ingestion { .. }
        | Error::DegenerateFeature(_)
        | Error::Csv(_) => EXIT_CONFIG,
        Error::NumericFault(_) => EXIT_NUMERIC,
        _ => EXIT_OTHER,
    }
}

/// Parses the config and applies command-line overrides.
pub fn resolve_config(args: &CommonArgs) -> Result<RunConfig> {
    let mut cfg = RunConfig::load(&args.config)?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &args.out {
        cfg.output_dir = Some(out.clone());
    }
    if cfg.output_dir.is_none() {
        cfg.output_dir = Some(Path::new("runs").join(&cfg.name));
    }
    Ok(cfg)
}

fn ps_evals_per_sample(cfg: &RunConfig) -> Result<u64> {
    Ok(2 * cfg.circuit()?.param_slots().len() as u64)
}

/// Trains according to `cfg`, returning the report and the summary with the
/// config echo filled in. Nothing is written.
pub fn run_training(cfg: &RunConfig, parallelism: Parallelism) -> Result<(TrainReport, Summary, Split)> {
    let data = cfg.load_data()?;
    let circuit = cfg.circuit()?;
    let observables = cfg.resolved_observables(data.train.n_outputs())?;
    let expected = match cfg.task {
        Task::Regression => Some(data.train.n_outputs()),
        Task::Toy => Some(1),
        Task::Classification => None,
    };
    if let Some(n) = expected.filter(|&n| n != observables.len()) {
        return Err(Error::Config(format!("{} observables for {n} outputs", observables.len())));
    }
    let tcfg = cfg.train_config(parallelism);
    let report = train(&tcfg, &data, &circuit, &observables)?;
    let mut echo = cfg.clone();
    echo.observables = Some(observables);
    echo.estimator = cfg.estimator.resolve_epsilon(&cfg.mode);
    let last = report.epochs.last().expect("at least one epoch");
    let summary = Summary {
        config: echo,
        n_train: data.train.len(),
        n_val: data.val.len(),
        n_test: data.test.as_ref().map_or(0, |t| t.len()),
        n_params: report.n_params,
        ps_evals_per_sample: ps_evals_per_sample(cfg)?,
        counts: report.counts,
        convergence_epoch: report.convergence_epoch,
        best_val_metric: report.best_val_metric,
        test_metric: report.test_metric,
        final_train_loss: last.train_loss,
        final_val_metric: last.val_metric,
        final_params: report.final_params().to_vec(),
    };
    Ok((report, summary, data))
}

fn write_outputs(report: &TrainReport, summary: &Summary, out: &Path, trajectory: bool) -> Result<()> {
    std::fs::create_dir_all(out)?;
    report.write_epoch_csv(&out.join("epoch_metrics.csv"))?;
    for &epoch in report.histograms.keys() {
        report.write_histogram_csv(epoch, &out.join(format!("histogram_epoch_{epoch}.csv")))?;
    }
    if trajectory {
        report.write_trajectory_csv(&out.join("trajectory.csv"))?;
    }
    let mut text = serde_json::to_string_pretty(summary)?;
    text.push('\n');
    std::fs::write(out.join("summary.json"), text)?;
    Ok(())
}

pub fn cmd_train(args: &CommonArgs) -> Result<Summary> {
    let cfg = resolve_config(args)?;
    if cfg.task == Task::Toy {
        return Err(Error::Config("toy configs run with the `toy` command".into()));
    }
    let (report, summary, _) = with_workers(args.workers, || run_training(&cfg, Parallelism::Rayon))?;
    let out = cfg.output_dir.as_ref().expect("resolved");
    write_outputs(&report, &summary, out, false)?;
    println!(
        "{}: {} epochs, best val metric {:.6} at epoch {}, grad evals {}",
        cfg.name,
        report.epochs.len(),
        report.best_val_metric,
        report.convergence_epoch,
        report.counts.grad_evals
    );
    println!("wrote {}", out.display());
    Ok(summary)
}

pub fn cmd_toy(args: &CommonArgs) -> Result<(TrainReport, Summary)> {
    let cfg = resolve_config(args)?;
    if !matches!(cfg.dataset, DatasetConfig::Toy { .. }) {
        return Err(Error::Config("the `toy` command needs task = toy and dataset.kind = toy".into()));
    }
    let (report, summary, _) = with_workers(args.workers, || run_training(&cfg, Parallelism::Rayon))?;
    let out = cfg.output_dir.as_ref().expect("resolved");
    write_outputs(&report, &summary, out, true)?;
    if let (Some(first), Some(last)) = (report.trajectory.first(), report.trajectory.last()) {
        println!("{}: x {:.6} -> {:.6}, L(x) {:.6} -> {:.6}", cfg.name, first.x, last.x, first.loss, last.loss);
    }
    println!("wrote {}", out.display());
    Ok((report, summary))
}

pub fn count(cfg: &RunConfig) -> Result<CountSummary> {
    let data = cfg.load_data()?;
    let n_params = cfg.circuit()?.n_params();
    let per_sample = ps_evals_per_sample(cfg)?;
    let tcfg = cfg.train_config(Parallelism::Sequential);
    let counts = predict_counts(&tcfg, data.train.len(), data.val.len(), n_params, per_sample)?;
    let mut baseline = tcfg.clone();
    baseline.estimator = Estimator::ParamShift;
    let param_shift_counts = predict_counts(&baseline, data.train.len(), data.val.len(), n_params, per_sample)?;
    Ok(CountSummary {
        name: cfg.name.clone(),
        n_train: data.train.len(),
        n_val: data.val.len(),
        n_params,
        counts,
        param_shift_counts,
        ratio_vs_param_shift: counts.grad_evals as f64 / param_shift_counts.grad_evals as f64,
    })
}

pub fn cmd_count(args: &CommonArgs) -> Result<CountSummary> {
    let cfg = resolve_config(args)?;
    let summary = count(&cfg)?;
    println!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(summary)
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

const GRADCHECK_SPSA_SEEDS: u64 = 5;

pub fn gradcheck(cfg: &RunConfig) -> Result<GradcheckOutcome> {
    if !cfg.mode.is_ideal() {
        return Ok(GradcheckOutcome::Skipped(
            "gradient check skipped: execution mode is stochastic, set mode to ideal".into(),
        ));
    }
    let gc = &cfg.gradcheck;
    let circuit = cfg.circuit()?;
    let data = cfg.load_data()?;
    let observables = cfg.resolved_observables(data.train.n_outputs())?;
    let params = cfg.init.sample(circuit.n_params(), cfg.seed);
    let samples = gc.samples.clamp(1, data.train.len());
    let mut max_dev: f64 = 0.0;
    let mut reference = None;
    for x in data.train.features.iter().take(samples) {
        let (ps, _) = param_shift_jacobian(&circuit, x, &params, &observables, &ExecutionMode::Ideal, Seed(cfg.seed))?;
        let fd = finite_diff_jacobian(&circuit, x, &params, &observables, gc.h)?;
        max_dev = max_dev.max(ps.max_abs_diff(&fd));
        reference.get_or_insert((x.clone(), ps));
    }
    let (x0, ps0) = reference.expect("at least one sample");
    let mut spsa_relative_error = Vec::new();
    for &k in &gc.spsa_k {
        let spsa = SpsaConfig::new(k, gc.spsa_c);
        let errs = (0..GRADCHECK_SPSA_SEEDS)
            .map(|s| {
                let seed = Seed(cfg.seed).path(&[u64::MAX, k as u64, s]);
                spsa_jacobian(&circuit, &x0, &params, &observables, &spsa, &ExecutionMode::Ideal, seed)
                    .map(|(j, _)| j.relative_error(&ps0))
            })
            .collect::<Result<Vec<_>>>()?;
        spsa_relative_error.push((k, median(errs)));
    }
    Ok(GradcheckOutcome::Checked(GradcheckSummary {
        samples,
        max_ps_fd_deviation: max_dev,
        tolerance: gc.tolerance,
        spsa_relative_error,
    }))
}

pub fn cmd_gradcheck(args: &CommonArgs) -> Result<i32> {
    let cfg = resolve_config(args)?;
    match with_workers(args.workers, || gradcheck(&cfg))? {
        GradcheckOutcome::Skipped(notice) => {
            println!("{notice}");
            Ok(EXIT_OK)
        }
        GradcheckOutcome::Checked(s) => {
            println!("samples: {}", s.samples);
            println!("max |PS - FD|: {:.3e} (tolerance {:.1e})", s.max_ps_fd_deviation, s.tolerance);
            for (k, e) in &s.spsa_relative_error {
                println!("SPSA k={k}: median relative Frobenius error {e:.4}");
            }
            if s.max_ps_fd_deviation < s.tolerance {
                println!("gradcheck passed");
                Ok(EXIT_OK)
            } else {
                eprintln!("gradcheck failed: deviation exceeds tolerance");
                Ok(EXIT_TOLERANCE)
            }
        }
    }
}

/// Dispatches a parsed command line and maps failures to exit codes.
pub fn run(cli: Cli) -> i32 {
    let result = match &cli.command {
        Command::Train(a) => cmd_train(a).map(|_| EXIT_OK),
        Command::Toy(a) => cmd_toy(a).map(|_| EXIT_OK),
        Command::Gradcheck(a) => cmd_gradcheck(a),
        Command::Count(a) => cmd_count(a).map(|_| EXIT_OK),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
