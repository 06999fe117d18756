use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use lfmo_core::asymptotics::limit_law_for;
use lfmo_core::lfmo::{exact_tail_probability, mean_last_order_statistic, shock_rates};
use lfmo_core::montecarlo::{gumbel_switch_error_bound, run_experiment, write_outputs, write_summary_csv, OutputPaths};
use lfmo_core::rng::seeded;
use lfmo_core::stable::{c_alpha, convert_convention};
use lfmo_core::verification::{run_verification, VerifyOptions};
use lfmo_core::{
    Convention, Dimension, ExactOptions, ExperimentConfig, LfmoModel, StableParams, SubordinatorModel, TailRegime,
};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::model::{dimension, exact_n, parse_model};
use crate::{Command, Format};

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)?;
            }
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn pretty<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankSummary {
    pub rank: usize,
    pub count: usize,
    pub mean: f64,
    pub std_dev: f64,
    pub min: f64,
    pub max: f64,
}

/// Per-rank summary of top-order-statistic draws (`samples[draw][rank]`).
pub fn summarize(samples: &[Vec<f64>]) -> Vec<RankSummary> {
    let ranks = samples.first().map_or(0, Vec::len);
    (0..ranks)
        .map(|r| {
            let xs: Vec<f64> = samples.iter().map(|s| s[r]).collect();
            let n = xs.len() as f64;
            let mean = xs.iter().sum::<f64>() / n;
            let var = if xs.len() > 1 { xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
            RankSummary {
                rank: r + 1,
                count: xs.len(),
                mean,
                std_dev: var.sqrt(),
                min: xs.iter().copied().fold(f64::INFINITY, f64::min),
                max: xs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            }
        })
        .collect()
}

#[derive(Debug, Serialize, Deserialize)]
struct SampleFile {
    model: SubordinatorModel,
    dimension: Dimension,
    top: usize,
    seed: u64,
    samples: Vec<Vec<f64>>,
    summary: Vec<RankSummary>,
}

fn law_json(model: &SubordinatorModel, part2_exponent: Option<f64>) -> Result<serde_json::Value> {
    if let TailRegime::Trivial { slope } = model.classify_regime()? {
        return Ok(json!({
            "kind": "gumbel",
            "rate": slope,
            "normalization": { "center": "log(n) / rate", "scale": "1 / rate" },
        }));
    }
    let mut law = limit_law_for(model)?;
    if let Some(e) = part2_exponent {
        law = law.with_part2_exponent(e);
    }
    let c = match law.c_alpha {
        Some(c) => Some(c),
        None if law.alpha < 2.0 => Some(c_alpha(law.alpha)?),
        None => None,
    };
    let nz = law.normalization;
    Ok(json!({
        "kind": law.kind.name(),
        "alpha": law.alpha,
        "sigma": law.sigma,
        "c_alpha": c,
        "mean_s1": law.mean_s1.is_finite().then_some(law.mean_s1),
        "normalization": {
            "center_coefficient": nz.center_coefficient,
            "scale_coefficient": nz.scale_coefficient,
            "scale_exponent": nz.scale_exponent,
            "center": format!("{} * log(n)", nz.center_coefficient),
            "scale": format!("{} * log(n)^{}", nz.scale_coefficient, nz.scale_exponent),
        },
    }))
}

fn experiment_paths(dir: &Path) -> OutputPaths {
    OutputPaths {
        samples_csv: Some(dir.join("samples.csv")),
        summary_csv: Some(dir.join("summary.csv")),
        svg: Some(dir.join("ecdf.svg")),
    }
}

pub fn dispatch(command: Command) -> Result<u8> {
    match command {
        Command::Sample { model, dim, top, count, common } => {
            let sub = parse_model(&model.model)?;
            let dimension = dimension(&dim)?;
            let lfmo = LfmoModel::new(dimension, sub)?;
            if count == 0 {
                anyhow::bail!("--count must be positive");
            }
            let mut rng = seeded(common.seed);
            let samples: Vec<Vec<f64>> = (0..count)
                .map(|_| lfmo.sample_upper_order_statistics(top, &mut rng))
                .collect::<lfmo_core::Result<_>>()?;
            let text = match common.format {
                Format::Csv => {
                    let mut s = String::from("draw,rank,value\n");
                    for (d, draw) in samples.iter().enumerate() {
                        for (r, v) in draw.iter().enumerate() {
                            let _ = writeln!(s, "{d},{},{v:e}", r + 1);
                        }
                    }
                    s
                }
                Format::Json => {
                    let summary = summarize(&samples);
                    pretty(&SampleFile { model: sub, dimension, top, seed: common.seed, samples, summary })?
                }
            };
            emit(common.out.as_deref(), &text)?;
        }
        Command::Summarize { input } => {
            let text = fs::read_to_string(&input).with_context(|| format!("reading {}", input.display()))?;
            let file: SampleFile = serde_json::from_str(&text).context("parsing sample JSON")?;
            println!("{}", serde_json::to_string_pretty(&summarize(&file.samples))?);
        }
        Command::Tail { model, dim, m, t_grid, common } => {
            let sub = parse_model(&model.model)?;
            let n = exact_n(&dim)?;
            let opts = ExactOptions::default();
            let values: Vec<f64> = t_grid
                .iter()
                .map(|&t| exact_tail_probability(n, m, t, &sub, &opts))
                .collect::<lfmo_core::Result<_>>()?;
            let text = match common.format {
                Format::Csv => {
                    let mut s = String::from("t,value\n");
                    for (t, v) in t_grid.iter().zip(&values) {
                        let _ = writeln!(s, "{t},{v:.12}");
                    }
                    s
                }
                Format::Json => pretty(&json!({
                    "n": n, "m": m,
                    "values": t_grid.iter().zip(&values).map(|(t, v)| json!({"t": t, "value": v})).collect::<Vec<_>>(),
                }))?,
            };
            emit(common.out.as_deref(), &text)?;
        }
        Command::MeanLast { model, dim, common } => {
            let sub = parse_model(&model.model)?;
            let n = exact_n(&dim)?;
            let v = mean_last_order_statistic(n, &sub, &ExactOptions::default())?;
            let text = match common.format {
                Format::Csv => format!("n,mean_last\n{n},{v:.12}\n"),
                Format::Json => pretty(&json!({"n": n, "mean_last": v}))?,
            };
            emit(common.out.as_deref(), &text)?;
        }
        Command::ShockRates { model, dim, common } => {
            let sub = parse_model(&model.model)?;
            let n = exact_n(&dim)?;
            let rates = shock_rates(n, &sub, &ExactOptions::default())?;
            let text = match common.format {
                Format::Csv => {
                    let mut s = String::from("v,rate\n");
                    for (v, r) in rates.iter().enumerate() {
                        let _ = writeln!(s, "{},{r:e}", v + 1);
                    }
                    s
                }
                Format::Json => pretty(&json!({"n": n, "rates": rates}))?,
            };
            emit(common.out.as_deref(), &text)?;
        }
        Command::Limit { model, part2_exponent, out } => {
            let sub = parse_model(&model.model)?;
            emit(out.as_deref(), &pretty(&law_json(&sub, part2_exponent)?)?)?;
        }
        Command::Experiment { config, out, workers, seed } => {
            let text = fs::read_to_string(&config).with_context(|| format!("reading {}", config.display()))?;
            let mut cfg = ExperimentConfig::from_json(&text)?;
            if let Some(dir) = out {
                cfg.output = experiment_paths(&dir);
            }
            if workers.is_some() {
                cfg.workers = workers;
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            let result = run_experiment(&cfg)?;
            for path in write_outputs(&result, &cfg.output)? {
                log::info!("wrote {path}");
            }
            let mut summary = Vec::new();
            write_summary_csv(&result, &mut summary)?;
            std::io::stdout().write_all(&summary)?;
        }
        Command::Verify { seed, paths, mo_runs, out } => {
            let report = run_verification(&VerifyOptions { seed, decomposition_paths: paths, mo_runs })?;
            emit(out.as_deref(), &pretty(&report)?)?;
            if !report.passed {
                eprintln!("verification failed");
                return Ok(2);
            }
        }
        Command::ConvertStableParams { alpha, sigma, beta, mu, from, to } => {
            let from: Convention = from.parse()?;
            let to: Convention = to.parse()?;
            let converted = convert_convention(StableParams::new(alpha, sigma, beta, mu, from)?, to)?;
            print!("{}", pretty(&converted)?);
        }
        Command::GumbelBound { n } => {
            println!("{:e}", gumbel_switch_error_bound(n)?);
        }
    }
    Ok(0)
}
