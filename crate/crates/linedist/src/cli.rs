//! Command-line experiment driver.
//!
//! Runs `--repetitions` independent searches with seeds `seed`,
//! `seed + 1`, ..., prints a one-line summary per repetition, and writes
//! `solutions.csv`, `summary.json`, and (with `--plot`) one
//! `plot_rep<k>.svg` per repetition into the output directory.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser};

use crate::engine::{run, Config, RunReport};
use crate::error::Result;
use crate::linesearch::LineSearchParams;
use crate::objective::{make_benchmark, Bounds, ObjectiveSpec};
use crate::output::{emit_plot, write_csv, write_json_summary, ExperimentMeta};
use crate::verify::VerifyParams;

fn positive_f64(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err("must be positive and finite".into())
    }
}

fn finite_f64(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err("must be finite".into())
    }
}

/// One experiment: a function, its run parameters, and where to put the
/// results.
#[derive(Debug, Clone, Parser)]
#[command(
    name = "linedist",
    about = "Multimodal optimization by maximizing line-distance diversity",
    version
)]
pub struct ExperimentConfig {
    /// Objective function to optimize.
    #[arg(long, value_parser = ["rastrigin", "griewank"])]
    pub function: String,

    /// Decision-space dimension.
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..))]
    pub dim: u64,

    /// Offspring per solution per iteration.
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    pub m: u64,

    /// Suppression radius / expansion acceptance threshold.
    #[arg(long, value_parser = positive_f64)]
    pub sigma: f64,

    /// Iterations per repetition.
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    pub iterations: u64,

    /// Independent repetitions (seeds seed, seed+1, ...).
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    pub repetitions: u64,

    /// Seed of the first repetition.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,

    /// Uniform box override: lower bound on every axis (requires --upper).
    #[arg(long, requires = "upper", value_parser = finite_f64)]
    pub lower: Option<f64>,

    /// Uniform box override: upper bound on every axis (requires --lower).
    #[arg(long, requires = "lower", value_parser = finite_f64)]
    pub upper: Option<f64>,

    /// Coarse scan probes of each line search.
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(3..))]
    pub scan_points: u64,

    /// Golden-section refinement iterations of each line search.
    #[arg(long, default_value_t = 40, value_parser = clap::value_parser!(u64).range(1..))]
    pub refine_iters: u64,

    /// Hard cap on the active population.
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub pop_cap: u64,

    /// Disable suppression of active solutions near archived optima.
    #[arg(long)]
    pub no_cross_suppression: bool,

    /// Output directory for solutions.csv, summary.json, and plots.
    #[arg(long, default_value = ".")]
    pub output: PathBuf,

    /// Emit one plot_rep<k>.svg per repetition (2-D runs only).
    #[arg(long)]
    pub plot: bool,

    /// Heatmap resolution of the plot.
    #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(16..))]
    pub plot_grid: u64,
}

/// Parses and semantically validates the argument list. All failures are
/// usage errors (exit code 2 through [`clap::Error::exit`]).
pub fn parse_args<I, T>(argv: I) -> std::result::Result<ExperimentConfig, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = ExperimentConfig::try_parse_from(argv)?;
    if let (Some(lo), Some(hi)) = (cfg.lower, cfg.upper) {
        if lo >= hi {
            return Err(ExperimentConfig::command().error(
                ErrorKind::ValueValidation,
                format!("--lower must be below --upper, got {lo} and {hi}"),
            ));
        }
    }
    Ok(cfg)
}

impl ExperimentConfig {
    fn bounds(&self) -> Result<Option<Bounds>> {
        match (self.lower, self.upper) {
            (Some(lo), Some(hi)) => Ok(Some(Bounds::uniform(self.dim as usize, lo, hi)?)),
            _ => Ok(None),
        }
    }

    fn engine_config(&self, seed: u64) -> Config {
        Config {
            m: self.m as usize,
            sigma: self.sigma,
            iterations: self.iterations as usize,
            seed,
            pop_cap: self.pop_cap as usize,
            cross_suppression: !self.no_cross_suppression,
            linesearch: LineSearchParams {
                scan_points: self.scan_points as usize,
                refine_iters: self.refine_iters as usize,
                ..LineSearchParams::default()
            },
        }
    }

    fn spec(&self) -> Result<ObjectiveSpec> {
        make_benchmark(&self.function, self.dim as usize, self.bounds()?)
    }
}

/// Runs the whole experiment and writes its artifacts. Returns the
/// per-repetition reports (also useful to callers embedding the driver).
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<RunReport>> {
    std::fs::create_dir_all(&cfg.output)?;
    let verify = VerifyParams::default();

    if cfg.plot && cfg.dim != 2 {
        eprintln!("warning: --plot requires dim = 2, skipping plots");
    }

    let mut reports = Vec::with_capacity(cfg.repetitions as usize);
    for rep in 0..cfg.repetitions as usize {
        let spec = cfg.spec()?;
        let config = cfg.engine_config(cfg.seed.wrapping_add(rep as u64));
        let report = run(&config, &spec, rep, &verify)?;
        println!(
            "rep {rep}: |LP|={} distinct_optima={} global_found={} evals={}",
            report.final_archive.len(),
            report.distinct_optima,
            report.global_found,
            report.eval_count,
        );
        if cfg.plot && cfg.dim == 2 {
            let path = cfg.output.join(format!("plot_rep{rep}.svg"));
            emit_plot(&report, &spec, cfg.plot_grid as usize, &path)?;
        }
        reports.push(report);
    }

    write_csv(&reports, cfg.dim as usize, &cfg.output.join("solutions.csv"))?;
    let meta = ExperimentMeta {
        function: cfg.function.clone(),
        dim: cfg.dim as usize,
        m: cfg.m as usize,
        sigma: cfg.sigma,
        iterations: cfg.iterations as usize,
        repetitions: cfg.repetitions as usize,
        seed: cfg.seed,
    };
    write_json_summary(&meta, &reports, &cfg.output.join("summary.json"))?;
    Ok(reports)
}
