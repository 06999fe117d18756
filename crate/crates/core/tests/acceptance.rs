//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::f64::consts::{FRAC_2_PI, PI};
use std::time::Instant;

use lfmo_core::asymptotics::{decomposition_check, gumbel_normalize, lemma_suite};
use lfmo_core::lfmo::{exact_tail_probability, mean_last_order_statistic, shock_rates};
use lfmo_core::montecarlo::{
    gumbel_switch_error_bound, ks_one_sample, ks_two_sample, run_experiment, write_outputs, write_samples_csv,
    write_summary_csv, Ecdf, OutputPaths,
};
use lfmo_core::numeric::binomial_u128;
use lfmo_core::numeric::special::{gumbel_cdf, normal_cdf};
use lfmo_core::rng::{seeded, substream};
use lfmo_core::stable::{c_alpha, convert_convention, reference_sample};
use lfmo_core::verification::{conditional_tail_oracle, mc_mean_last, mo_equivalence};
use lfmo_core::{Convention, Dimension, ExactOptions, ExperimentConfig, LfmoModel, StableParams, SubordinatorModel};
use statrs::function::erf::erfc;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn strictly_decreasing(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[1] < w[0])
}

fn fmt_list(xs: &[f64]) -> String {
    xs.iter().map(|x| format!("{x:.4}")).collect::<Vec<_>>().join(", ")
}

fn pareto25() -> SubordinatorModel {
    SubordinatorModel::cpp_pareto(1.0, 2.5)
}

fn experiment(sub: SubordinatorModel, schedule: &[f64], samples: usize, seed: u64) -> ExperimentConfig {
    ExperimentConfig::new(sub, schedule.to_vec(), samples, seed)
}

fn criterion_1() -> Outcome {
    let opts = ExactOptions::default();
    let times = [0.25, 0.5, 1.0, 2.0];
    let mut worst: f64 = 0.0;
    let mut failures = Vec::new();
    for (label, model) in [("cpp-pareto-2.5", pareto25()), ("drift-1", SubordinatorModel::drift(1.0))] {
        for n in [3u64, 5, 10] {
            let ms = [1, n.div_ceil(2), n];
            let est = conditional_tail_oracle(&model, n, &ms, &times, 1_000_000, 100 + n).map_err(|e| e.to_string())?;
            for (mi, &m) in ms.iter().enumerate() {
                for (ti, &t) in times.iter().enumerate() {
                    let e = est[mi * times.len() + ti];
                    let exact = exact_tail_probability(n, m, t, &model, &opts).map_err(|e| e.to_string())?;
                    let z = (e.mean - exact).abs() / e.se.max(1e-12);
                    worst = worst.max(z);
                    if !e.within(exact, 3.0) {
                        failures.push(format!("{label} n={n} m={m} t={t}: {exact} vs {} +- {}", e.mean, e.se));
                    }
                }
            }
        }
    }
    let mut detail = format!("72 grid points, worst |z| = {worst:.2}");
    if !failures.is_empty() {
        detail = format!("{detail}; {}", failures.join("; "));
    }
    check(failures.is_empty(), detail)
}

fn criterion_2() -> Outcome {
    let model = pareto25();
    let lfmo = LfmoModel::new(Dimension::Exact(5), model).map_err(|e| e.to_string())?;
    let mut rng = seeded(202);
    let mut first = Vec::with_capacity(100_000);
    let mut minimum = Vec::with_capacity(100_000);
    for _ in 0..100_000 {
        let v = lfmo.sample_vector(&mut rng).map_err(|e| e.to_string())?;
        first.push(v[0]);
        minimum.push(v.iter().copied().fold(f64::INFINITY, f64::min));
    }
    let psi1 = model.laplace_exponent(1.0).unwrap();
    let psi5 = model.laplace_exponent(5.0).unwrap();
    let exp_cdf = |rate: f64| move |t: f64| if t <= 0.0 { 0.0 } else { -(-rate * t).exp_m1() };
    let a = ks_one_sample(&Ecdf::new(first).unwrap(), exp_cdf(psi1)).unwrap();
    let b = ks_one_sample(&Ecdf::new(minimum).unwrap(), exp_cdf(psi5)).unwrap();
    check(
        a.accepts(0.01) && b.accepts(0.01),
        format!("marginal p = {:.3}, minimum p = {:.3}", a.p_value(), b.p_value()),
    )
}

fn criterion_3() -> Outcome {
    let opts = ExactOptions::default();
    let drift = SubordinatorModel::drift(1.0);
    let mut worst: f64 = 0.0;
    for n in 1..=30u64 {
        let h: f64 = (1..=n).map(|k| 1.0 / k as f64).sum();
        let m = mean_last_order_statistic(n, &drift, &opts).map_err(|e| e.to_string())?;
        worst = worst.max((m - h).abs());
    }
    let exact = mean_last_order_statistic(10, &pareto25(), &opts).map_err(|e| e.to_string())?;
    let mc = mc_mean_last(&pareto25(), 10, 1_000_000, 303).map_err(|e| e.to_string())?;
    check(
        worst < 1e-10 && mc.within(exact, 3.0),
        format!("max |E - H_n| = {worst:.1e}; n=10 exact {exact:.6} vs MC {:.6} +- {:.6}", mc.mean, mc.se),
    )
}

fn criterion_4() -> Outcome {
    let model = pareto25();
    let n = 6u64;
    let rates = shock_rates(n, &model, &ExactOptions::default()).map_err(|e| e.to_string())?;
    let nonneg = rates.iter().all(|&r| r >= -1e-12);
    let marginal: f64 = (1..=n).map(|v| binomial_u128(n - 1, v - 1).unwrap() as f64 * rates[v as usize - 1]).sum();
    let total: f64 = (1..=n).map(|v| binomial_u128(n, v).unwrap() as f64 * rates[v as usize - 1]).sum();
    let e1 = (marginal - model.laplace_exponent(1.0).unwrap()).abs();
    let e2 = (total - model.laplace_exponent(n as f64).unwrap()).abs();
    let mo = mo_equivalence(&model, 1_000_000, 404).map_err(|e| e.to_string())?;
    let bad = mo.points.iter().filter(|p| !p.passed).count();
    check(
        nonneg && e1 < 1e-8 && e2 < 1e-8 && mo.passed,
        format!("identity errors {e1:.1e}, {e2:.1e}; MO vs LFMO: {bad}/27 grid points outside 3 SE"),
    )
}

const FIGURE_SCHEDULE: [f64; 4] = [10.0, 40.0, 90.0, 160.0];

fn criterion_5() -> Outcome {
    let r = run_experiment(&experiment(SubordinatorModel::cpp_pareto(1.0, 4.0), &FIGURE_SCHEDULE, 100_000, 505))
        .map_err(|e| e.to_string())?;
    let ks: Vec<f64> = r.rows.iter().map(|row| row.ks.statistic).collect();
    check(
        strictly_decreasing(&ks) && ks[3] < 0.05,
        format!("KS vs Normal(0, 1.5) = [{}]", fmt_list(&ks)),
    )
}

fn criterion_6() -> Outcome {
    let r = run_experiment(&experiment(pareto25(), &FIGURE_SCHEDULE, 100_000, 606)).map_err(|e| e.to_string())?;
    let ks: Vec<f64> = r.rows.iter().map(|row| row.ks.statistic).collect();
    let first = r.rows[0].ks;
    check(
        strictly_decreasing(&ks) && first.location < 0.0,
        format!(
            "KS vs Normal(0, 3) = [{}]; sup-deviation at log10 n = 10 located at {:.3} ({})",
            fmt_list(&ks),
            first.location,
            first.side()
        ),
    )
}

fn criterion_7() -> Outcome {
    let mut config = experiment(SubordinatorModel::cpp_pareto(1.0, 0.5), &[2.0, 4.0, 8.0], 100_000, 707);
    config.reference_multiplier = 10;
    let r = run_experiment(&config).map_err(|e| e.to_string())?;
    let reference = r.reference.as_ref().ok_or("missing reference sample")?;
    let ks: Vec<f64> = r.rows.iter().map(|row| row.ks.statistic).collect();
    let alt: Vec<f64> = r
        .rows
        .iter()
        .map(|row| {
            let log_n = Dimension::from_log10(row.log10_n).ln_n();
            let scaled: Vec<f64> = row.raw.iter().map(|t| t / log_n.powf(2.0)).collect();
            ks_two_sample(&Ecdf::new(scaled).unwrap(), reference).unwrap().statistic
        })
        .collect();
    let non_decreasing = alt.windows(2).all(|w| w[1] >= w[0]);
    check(
        reference.count() == 1_000_000 && strictly_decreasing(&ks) && non_decreasing,
        format!("divisor (log n)^alpha: [{}]; divisor (log n)^(1/alpha): [{}]", fmt_list(&ks), fmt_list(&alt)),
    )
}

fn criterion_8() -> Outcome {
    let lfmo = LfmoModel::new(Dimension::Exact(1_000_000), SubordinatorModel::drift(1.0)).map_err(|e| e.to_string())?;
    let mut rng = seeded(808);
    let xs: Vec<f64> = (0..100_000)
        .map(|_| lfmo.sample_upper_order_statistics(1, &mut rng).map(|v| v[0]))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let z = gumbel_normalize(&xs, 1e6f64.ln(), 1.0);
    let r = ks_one_sample(&Ecdf::new(z).unwrap(), gumbel_cdf).unwrap();
    check(r.accepts(0.01), format!("KS = {:.5}, p = {:.3}", r.statistic, r.p_value()))
}

fn criterion_9() -> Outcome {
    let bounds: Vec<f64> = [100u64, 1_000, 10_000, 100_000, 1_000_000]
        .iter()
        .map(|&n| gumbel_switch_error_bound(n).unwrap())
        .collect();
    let sub = pareto25();
    let exact = LfmoModel::new(Dimension::Exact(1_000_000), sub).map_err(|e| e.to_string())?;
    let approx = LfmoModel::new(Dimension::Log10(6.0), sub).map_err(|e| e.to_string())?;
    let mut r1 = substream(909, 0, 0);
    let mut r2 = substream(909, 1, 0);
    let a: Vec<f64> = (0..100_000).map(|_| exact.sample_upper_order_statistics(1, &mut r1).unwrap()[0]).collect();
    let b: Vec<f64> = (0..100_000).map(|_| approx.sample_upper_order_statistics(1, &mut r2).unwrap()[0]).collect();
    let ks = ks_two_sample(&Ecdf::new(a).unwrap(), &Ecdf::new(b).unwrap()).unwrap();
    check(
        bounds[4] <= 3e-7 && strictly_decreasing(&bounds) && ks.accepts(0.01),
        format!(
            "bound(1e6) = {:.3e}, bounds decreasing = {}; cross-regime KS p = {:.3}",
            bounds[4],
            strictly_decreasing(&bounds),
            ks.p_value()
        ),
    )
}

fn criterion_10() -> Outcome {
    let p = |alpha, sigma, beta| StableParams::new(alpha, sigma, beta, 0.0, Convention::Whitt451).unwrap();
    let ecdf = |params: &StableParams, seed| Ecdf::new(reference_sample(params, 100_000, seed).unwrap()).unwrap();
    let normal = ks_one_sample(&ecdf(&p(2.0, 1.0, 0.0), 1010), |x| normal_cdf(x / 2f64.sqrt())).unwrap();
    let cauchy = ks_one_sample(&ecdf(&p(1.0, 1.0, 0.0), 1011), |x| 0.5 + x.atan() / PI).unwrap();
    let levy = ks_one_sample(&ecdf(&p(0.5, 1.0, 1.0), 1012), |x| if x <= 0.0 { 0.0 } else { erfc((0.5 / x).sqrt()) }).unwrap();
    let conventions = [Convention::Whitt451, Convention::NolanNotation1, Convention::NolanNotation0];
    let mut round_trip: f64 = 0.0;
    for &alpha in &[0.3, 0.5, 0.999, 1.0, 1.001, 1.5, 1.9, 2.0] {
        for &beta in &[-1.0, -0.3, 0.0, 0.7, 1.0] {
            for &sigma in &[0.2, 1.0, 3.5] {
                for &from in &conventions {
                    for &to in &conventions {
                        let start = StableParams::new(alpha, sigma, beta, 0.4, from).unwrap();
                        let back = convert_convention(convert_convention(start, to).unwrap(), from).unwrap();
                        round_trip = round_trip
                            .max((back.mu - start.mu).abs())
                            .max((back.sigma - start.sigma).abs())
                            .max((back.beta - start.beta).abs());
                    }
                }
            }
        }
    }
    let c1 = (c_alpha(1.0).unwrap() - FRAC_2_PI).abs();
    check(
        normal.accepts(0.01) && cauchy.accepts(0.01) && levy.accepts(0.01) && round_trip <= 1e-12 && c1 < 1e-12,
        format!(
            "KS p: normal {:.3}, Cauchy {:.3}, Levy {:.3}; round-trip error {round_trip:.1e}; |c(1) - 2/pi| = {c1:.1e}",
            normal.p_value(),
            cauchy.p_value(),
            levy.p_value()
        ),
    )
}

fn criterion_11() -> Outcome {
    let model = SubordinatorModel::cpp_pareto(1.0, 4.0);
    let mut parts = Vec::new();
    let mut ok = true;
    for t in [-0.5, 0.0, 0.5] {
        let c = decomposition_check(&model, 10_000, t, 10_000, 1111).map_err(|e| e.to_string())?;
        ok &= c.passed;
        parts.push(format!("t={t}: {:.4} vs {:.4}", c.via_f_n, c.direct));
    }
    let lemmas = lemma_suite();
    let failed: Vec<&str> = lemmas.items.iter().filter(|i| !i.passed).map(|i| i.name.as_str()).collect();
    check(ok && lemmas.passed(), format!("{}; lemma failures: {:?}", parts.join(", "), failed))
}

type CsvOutputs = (Vec<u8>, Vec<u8>, Vec<u8>);

fn csv_bytes(config: &ExperimentConfig) -> Result<CsvOutputs, String> {
    let r = run_experiment(config).map_err(|e| e.to_string())?;
    let (mut samples, mut summary) = (Vec::new(), Vec::new());
    write_samples_csv(&r, &mut samples).map_err(|e| e.to_string())?;
    write_summary_csv(&r, &mut summary).map_err(|e| e.to_string())?;
    let dir = std::env::temp_dir().join(format!("lfmo-acceptance-{}-{}", std::process::id(), config.workers.unwrap_or(0)));
    let paths = OutputPaths { samples_csv: Some(dir.join("samples.csv")), summary_csv: None, svg: None };
    write_outputs(&r, &paths).map_err(|e| e.to_string())?;
    let file = std::fs::read(dir.join("samples.csv")).map_err(|e| e.to_string())?;
    let _ = std::fs::remove_dir_all(&dir);
    Ok((samples, summary, file))
}

fn criterion_12() -> Outcome {
    let mut checked = 0;
    for sub in [pareto25(), SubordinatorModel::cpp_pareto(1.0, 0.5), SubordinatorModel::drift(1.0)] {
        let mut config = experiment(sub, &[2.0, 6.0, 20.0], 20_000, 1212);
        config.workers = Some(8);
        let a = csv_bytes(&config)?;
        let b = csv_bytes(&config)?;
        config.workers = Some(1);
        let c = csv_bytes(&config)?;
        if a != b || a != c || a.0 != a.2 {
            return Err(format!("CSV output differs for {sub:?}"));
        }
        checked += 1;
    }
    Ok(format!("{checked} configurations bit-identical across repeat runs and worker counts 1 and 8"))
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 12] = [
        ("exact tail formula vs conditional-iid oracle", criterion_1),
        ("marginal and minimum exponential laws", criterion_2),
        ("mean of the last order statistic", criterion_3),
        ("shock-rate identities and MO equivalence", criterion_4),
        ("normal limit, Pareto(4) steps", criterion_5),
        ("normal limit and slow left tail, Pareto(2.5) steps", criterion_6),
        ("inverse-stable limit and divisor discrimination", criterion_7),
        ("Gumbel control for linear drift", criterion_8),
        ("Gumbel switch-over accuracy", criterion_9),
        ("stable distribution machinery", criterion_10),
        ("proof decomposition and lemma suite", criterion_11),
        ("bit-identical experiment output", criterion_12),
    ];
    let only: Option<usize> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let id = i + 1;
        if only.is_some_and(|o| o != id) {
            continue;
        }
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {id:>2}: PASS  {name} ({detail}) [{secs:.1}s]"),
            Err(detail) => {
                failed += 1;
                println!("criterion {id:>2}: FAIL  {name} ({detail}) [{secs:.1}s]");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
