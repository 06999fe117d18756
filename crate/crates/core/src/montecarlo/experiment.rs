use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ecdf::Ecdf;
use super::ks::{ks_one_sample, ks_two_sample, KsResult};
use crate::asymptotics::{gumbel_normalize, limit_law_for, normalize, sample_limit_counted, LimitLaw};
use crate::error::{invalid, LfmoError, Result};
use crate::lfmo::{Dimension, LfmoModel};
use crate::rng::substream;
use crate::subordinator::{SubordinatorModel, TailRegime};

/// Draws per (n, batch) cell; fixed so results never depend on worker count.
pub const BATCH_SIZE: usize = 4096;
const REFERENCE_STREAM: u32 = u32::MAX;
pub const THREADS_ENV: &str = "LFMO_THREADS";

/// Which order statistic is studied: `T_{n:n}` or `T_{n-j:n}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MRule {
    #[default]
    Last,
    Offset { j: u64 },
}

impl MRule {
    /// Number of top order statistics needed.
    pub fn k_top(&self) -> usize {
        match self {
            MRule::Last => 1,
            MRule::Offset { j } => *j as usize + 1,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct OutputPaths {
    #[serde(default)]
    pub samples_csv: Option<PathBuf>,
    #[serde(default)]
    pub summary_csv: Option<PathBuf>,
    #[serde(default)]
    pub svg: Option<PathBuf>,
}

fn default_reference_multiplier() -> usize {
    10
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub subordinator: SubordinatorModel,
    pub log10_n: Vec<f64>,
    #[serde(default)]
    pub m_rule: MRule,
    pub samples_per_n: usize,
    pub seed: u64,
    /// Part-2 divisor exponent; the limit law's alpha when absent.
    #[serde(default)]
    pub part2_scaling_exponent: Option<f64>,
    /// Reference draws per experimental sample for two-sample comparisons.
    #[serde(default = "default_reference_multiplier")]
    pub reference_multiplier: usize,
    #[serde(default)]
    pub workers: Option<usize>,
    #[serde(default)]
    pub output: OutputPaths,
}

impl ExperimentConfig {
    pub fn new(subordinator: SubordinatorModel, log10_n: Vec<f64>, samples_per_n: usize, seed: u64) -> Self {
        ExperimentConfig {
            subordinator,
            log10_n,
            m_rule: MRule::Last,
            samples_per_n,
            seed,
            part2_scaling_exponent: None,
            reference_multiplier: default_reference_multiplier(),
            workers: None,
            output: OutputPaths::default(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let config: ExperimentConfig = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        self.subordinator.validate()?;
        if self.samples_per_n < 100 {
            return invalid(format!("samples_per_n must be at least 100, got {}", self.samples_per_n));
        }
        if self.log10_n.is_empty() {
            return invalid("log10_n schedule is empty");
        }
        if self.log10_n.iter().any(|l| !(*l > 0.0 && l.is_finite())) {
            return invalid("log10_n values must be positive and finite");
        }
        if self.log10_n.windows(2).any(|w| w[1] <= w[0]) {
            return invalid("log10_n values must be strictly increasing");
        }
        if self.reference_multiplier == 0 {
            return invalid("reference_multiplier must be positive");
        }
        if let Some(e) = self.part2_scaling_exponent {
            if !(e > 0.0 && e.is_finite()) {
                return invalid("part2_scaling_exponent must be positive");
            }
        }
        if self.workers == Some(0) {
            return invalid("workers must be positive");
        }
        if let MRule::Offset { j } = self.m_rule {
            if let Some(&first) = self.log10_n.first() {
                if (j + 1) as f64 > 10f64.powf(first) {
                    return invalid(format!("offset j = {j} needs n > j at log10_n = {first}"));
                }
            }
        }
        Ok(())
    }
}

/// Worker count: explicit value, else `LFMO_THREADS`, else machine parallelism.
pub fn resolve_workers(explicit: Option<usize>) -> Result<usize> {
    if let Some(w) = explicit {
        return Ok(w.max(1));
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|w| *w > 0)
            .ok_or_else(|| LfmoError::Config(format!("{THREADS_ENV} must be a positive integer, got {v:?}"))),
        Err(_) => Ok(std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)),
    }
}

/// The law the normalized samples are compared against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Target {
    /// Gumbel law of the `rank`-th largest point (zero-variance subordinator).
    Gumbel { rate: f64, rank: usize },
    Limit(LimitLaw),
}

impl Target {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Target::Gumbel { .. } => "gumbel",
            Target::Limit(law) => law.kind.name(),
        }
    }

    pub fn sigma(&self) -> f64 {
        match self {
            Target::Gumbel { .. } => 1.0,
            Target::Limit(law) => law.sigma,
        }
    }

    pub fn alpha(&self) -> f64 {
        match self {
            Target::Gumbel { .. } => f64::INFINITY,
            Target::Limit(law) => law.alpha,
        }
    }

    pub fn normalize(&self, raw: &[f64], log_n: f64) -> Vec<f64> {
        match self {
            Target::Gumbel { rate, .. } => gumbel_normalize(raw, log_n, *rate),
            Target::Limit(law) => normalize(raw, log_n, law),
        }
    }

    /// Analytic limit CDF, if any.
    pub fn cdf(&self) -> Option<Box<dyn Fn(f64) -> f64 + Send + Sync>> {
        match *self {
            Target::Gumbel { rank, .. } => Some(Box::new(move |x| gumbel_rank_cdf(x, rank))),
            Target::Limit(law) => law.analytic_cdf().map(|f| Box::new(f) as Box<dyn Fn(f64) -> f64 + Send + Sync>),
        }
    }
}

/// CDF of the `rank`-th largest point of a Poisson process with intensity `e^{-x} dx`.
pub fn gumbel_rank_cdf(x: f64, rank: usize) -> f64 {
    let e = (-x).exp();
    let mut term = 1.0;
    let mut sum = 1.0;
    for i in 1..rank {
        term *= e / i as f64;
        sum += term;
    }
    (-e).exp() * sum
}

pub fn target_for(config: &ExperimentConfig) -> Result<Target> {
    match config.subordinator.classify_regime()? {
        TailRegime::Trivial { slope } => Ok(Target::Gumbel { rate: slope, rank: config.m_rule.k_top() }),
        _ => {
            let law = limit_law_for(&config.subordinator)?;
            Ok(Target::Limit(match config.part2_scaling_exponent {
                Some(e) => law.with_part2_exponent(e),
                None => law,
            }))
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentRow {
    pub log10_n: f64,
    pub raw: Vec<f64>,
    pub normalized: Vec<f64>,
    pub ecdf: Ecdf,
    pub ks: KsResult,
}

#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub target: Target,
    pub rows: Vec<ExperimentRow>,
    /// Limit draws used for two-sample comparisons, when no analytic CDF exists.
    pub reference: Option<Ecdf>,
    pub limit_rejections: u64,
}

fn batches(total: usize) -> Vec<(u32, usize)> {
    (0..total.div_ceil(BATCH_SIZE))
        .map(|b| (b as u32, BATCH_SIZE.min(total - b * BATCH_SIZE)))
        .collect()
}

/// Order-statistic draws for schedule entry `index`.
pub fn sample_schedule_entry(config: &ExperimentConfig, index: usize) -> Result<Vec<f64>> {
    let dimension = Dimension::from_log10(config.log10_n[index]);
    let model = LfmoModel::new(dimension, config.subordinator)?;
    let k = config.m_rule.k_top();
    let chunks: Vec<Vec<f64>> = batches(config.samples_per_n)
        .into_par_iter()
        .map(|(b, size)| {
            let mut rng = substream(config.seed, index as u32, b);
            (0..size)
                .map(|_| model.sample_upper_order_statistics(k, &mut rng).map(|top| top[k - 1]))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;
    Ok(chunks.concat())
}

/// `count` limit draws from the reserved reference stream of `seed`.
pub fn reference_draws(law: &LimitLaw, count: usize, seed: u64) -> Result<(Vec<f64>, u64)> {
    let chunks: Vec<(Vec<f64>, u64)> = batches(count)
        .into_par_iter()
        .map(|(b, size)| {
            let mut rng = substream(seed, REFERENCE_STREAM, b);
            let mut rejections = 0;
            let xs = (0..size)
                .map(|_| sample_limit_counted(law, &mut rng, &mut rejections))
                .collect::<Result<Vec<f64>>>()?;
            Ok((xs, rejections))
        })
        .collect::<Result<_>>()?;
    let rejections = chunks.iter().map(|c| c.1).sum();
    Ok((chunks.into_iter().flat_map(|c| c.0).collect(), rejections))
}

fn run_inner(config: &ExperimentConfig) -> Result<ExperimentResult> {
    let target = target_for(config)?;
    let cdf = target.cdf();
    let (reference, limit_rejections) = match (&target, &cdf) {
        (Target::Limit(law), None) => {
            let (xs, rej) = reference_draws(law, config.samples_per_n * config.reference_multiplier, config.seed)?;
            if rej > 0 {
                log::info!("limit reference sampler rejected {rej} nonpositive draws");
            }
            (Some(Ecdf::new(xs)?), rej)
        }
        _ => (None, 0),
    };
    let mut rows = Vec::with_capacity(config.log10_n.len());
    for (index, &log10_n) in config.log10_n.iter().enumerate() {
        let raw = sample_schedule_entry(config, index)?;
        let log_n = Dimension::from_log10(log10_n).ln_n();
        let normalized = target.normalize(&raw, log_n);
        let ecdf = Ecdf::new(normalized.clone())?;
        let ks = match (&cdf, &reference) {
            (Some(f), _) => ks_one_sample(&ecdf, f)?,
            (None, Some(r)) => ks_two_sample(&ecdf, r)?,
            (None, None) => unreachable!("targets without a CDF carry a reference"),
        };
        log::info!("log10_n = {log10_n}: KS = {:.5} ({})", ks.statistic, ks.side());
        rows.push(ExperimentRow { log10_n, raw, normalized, ecdf, ks });
    }
    Ok(ExperimentResult { config: config.clone(), target, rows, reference, limit_rejections })
}

/// Runs the schedule. Output depends only on the config, never on the worker count.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResult> {
    config.validate()?;
    let workers = resolve_workers(config.workers)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| LfmoError::Config(format!("thread pool: {e}")))?;
    pool.install(|| run_inner(config))
}
