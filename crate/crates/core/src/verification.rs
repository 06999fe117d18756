//! Self-checks that tie the samplers, the exact formulas and the proof objects together.

use serde::Serialize;

use crate::asymptotics::{decomposition_check, lemma_suite, DecompositionCheck, LemmaReport};
use crate::error::{invalid, Result};
use crate::lfmo::{shock_rates, Dimension, ExactOptions, ExchangeableMarshallOlkin, LfmoModel};
use crate::numeric::binomial_u128;
use crate::numeric::special::binomial_cdf_pair;
use crate::rng::substream;
use crate::subordinator::{LaplaceExponent, SubordinatorModel};

/// Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub se: f64,
}

impl Estimate {
    pub fn from_sums(sum: f64, sum_sq: f64, count: usize) -> Self {
        let n = count as f64;
        let mean = sum / n;
        let var = ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
        Estimate { mean, se: (var / n).sqrt() }
    }

    /// `|mean - value| <= k * SE`, with the SE floored at 1e-12 for degenerate estimators.
    pub fn within(&self, value: f64, k: f64) -> bool {
        (self.mean - value).abs() <= k * self.se.max(1e-12)
    }
}

/// Welford running mean and variance.
#[derive(Debug, Clone, Copy, Default)]
pub struct RunningStats {
    count: usize,
    mean: f64,
    m2: f64,
}

impl RunningStats {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn estimate(&self) -> Estimate {
        let n = self.count as f64;
        Estimate { mean: self.mean, se: (self.m2 / (n - 1.0) / n).max(0.0).sqrt() }
    }
}

/// `P(Bin(n, q) > k)`: positive-term pmf sum for small `n`, incomplete beta otherwise.
fn binomial_upper_tail(n: u64, k: u64, q: f64) -> f64 {
    if n > 60 {
        return binomial_cdf_pair(k as f64, n as f64, q).1;
    }
    let p = 1.0 - q;
    (k + 1..=n)
        .map(|j| binomial_u128(n, j).unwrap() as f64 * q.powi(j as i32) * p.powi((n - j) as i32))
        .sum()
}

/// `E[P(Bin(n, e^{-S_t}) > n - m)]` for every `(m, t)` pair, from `paths` sampled paths of `S`.
///
/// Returned in `m`-major order.
pub fn conditional_tail_oracle(
    model: &SubordinatorModel,
    n: u64,
    ms: &[u64],
    times: &[f64],
    paths: usize,
    seed: u64,
) -> Result<Vec<Estimate>> {
    if paths < 2 {
        return invalid("need at least two paths");
    }
    let mut order: Vec<usize> = (0..times.len()).collect();
    order.sort_by(|&a, &b| times[a].total_cmp(&times[b]));
    let sorted: Vec<f64> = order.iter().map(|&i| times[i]).collect();
    let cells = ms.len() * times.len();
    let mut stats = vec![RunningStats::default(); cells];
    let mut rng = substream(seed, 0, 0);
    for _ in 0..paths {
        let values = model.values_at(&sorted, &mut rng)?;
        for (rank, &ti) in order.iter().enumerate() {
            let q = (-values[rank]).exp();
            for (mi, &m) in ms.iter().enumerate() {
                let v = binomial_upper_tail(n, n - m, q);
                stats[mi * times.len() + ti].push(v);
            }
        }
    }
    Ok(stats.iter().map(RunningStats::estimate).collect())
}

/// MC mean of `T_{n:n}` from the top-order-statistic sampler.
pub fn mc_mean_last(model: &SubordinatorModel, n: u64, runs: usize, seed: u64) -> Result<Estimate> {
    let lfmo = LfmoModel::new(Dimension::Exact(n), *model)?;
    let mut rng = substream(seed, 0, 0);
    let mut stats = RunningStats::default();
    for _ in 0..runs {
        stats.push(lfmo.sample_upper_order_statistics(1, &mut rng)?[0]);
    }
    Ok(stats.estimate())
}

/// Closed-form survival `P(T_i > t_i for all i) = exp(-Σ_k Ψ(n-k+1)(t_(k) - t_(k-1)))`.
pub fn lfmo_joint_survival<P: LaplaceExponent + ?Sized>(psi: &P, t: &[f64]) -> Result<f64> {
    let mut sorted = t.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let mut exponent = 0.0;
    let mut prev = 0.0;
    for (k, &tk) in sorted.iter().enumerate() {
        exponent += psi.psi((n - k) as f64)? * (tk - prev);
        prev = tk;
    }
    Ok((-exponent).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SurvivalPoint {
    pub t: [f64; 3],
    pub lfmo: Estimate,
    pub marshall_olkin: Estimate,
    pub exact: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MoEquivalence {
    pub runs: usize,
    pub points: Vec<SurvivalPoint>,
    pub passed: bool,
}

pub const MO_GRID: [f64; 3] = [0.2, 0.6, 1.2];

/// Joint survival of the 3-dimensional LFMO sampler vs the subset-shock MO sampler
/// built from `shock_rates`, on the 27-point grid `MO_GRID^3`.
pub fn mo_equivalence(model: &SubordinatorModel, runs: usize, seed: u64) -> Result<MoEquivalence> {
    if runs < 2 {
        return invalid("need at least two runs");
    }
    let rates = shock_rates(3, model, &ExactOptions::default())?;
    let mo = ExchangeableMarshallOlkin::new(rates)?;
    let lfmo = LfmoModel::new(Dimension::Exact(3), *model)?;
    let grid: Vec<[f64; 3]> = MO_GRID
        .iter()
        .flat_map(|&a| MO_GRID.iter().flat_map(move |&b| MO_GRID.iter().map(move |&c| [a, b, c])))
        .collect();
    let mut hits_l = vec![0usize; grid.len()];
    let mut hits_m = vec![0usize; grid.len()];
    let mut rng_l = substream(seed, 1, 0);
    let mut rng_m = substream(seed, 2, 0);
    for _ in 0..runs {
        let x = lfmo.sample_vector(&mut rng_l)?;
        let y = mo.sample(&mut rng_m);
        for (g, t) in grid.iter().enumerate() {
            if (0..3).all(|i| x[i] > t[i]) {
                hits_l[g] += 1;
            }
            if (0..3).all(|i| y[i] > t[i]) {
                hits_m[g] += 1;
            }
        }
    }
    let bernoulli = |hits: usize| {
        let h = hits as f64;
        Estimate::from_sums(h, h, runs)
    };
    let points: Vec<SurvivalPoint> = grid
        .iter()
        .enumerate()
        .map(|(g, t)| {
            let l = bernoulli(hits_l[g]);
            let m = bernoulli(hits_m[g]);
            let se = (l.se * l.se + m.se * m.se).sqrt().max(1e-12);
            Ok(SurvivalPoint {
                t: *t,
                lfmo: l,
                marshall_olkin: m,
                exact: lfmo_joint_survival(model, t)?,
                passed: (l.mean - m.mean).abs() <= 3.0 * se,
            })
        })
        .collect::<Result<_>>()?;
    let passed = points.iter().all(|p| p.passed);
    Ok(MoEquivalence { runs, points, passed })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub seed: u64,
    pub decomposition_paths: usize,
    pub mo_runs: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { seed: 7, decomposition_paths: 10_000, mo_runs: 1_000_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub seed: u64,
    pub lemmas: LemmaReport,
    pub decomposition: Vec<DecompositionCheck>,
    pub mo_equivalence: MoEquivalence,
    pub passed: bool,
}

/// Lemma suite, the proof decomposition for CPP(1, Pareto(4)) at n = 10^4, and
/// MO equivalence at n = 3 for CPP(1, Pareto(2.5)).
pub fn run_verification(opts: &VerifyOptions) -> Result<VerificationReport> {
    let lemmas = lemma_suite();
    let pareto4 = SubordinatorModel::cpp_pareto(1.0, 4.0);
    let decomposition = [-0.5, 0.0, 0.5]
        .iter()
        .map(|&t| decomposition_check(&pareto4, 10_000, t, opts.decomposition_paths, opts.seed))
        .collect::<Result<Vec<_>>>()?;
    let mo = mo_equivalence(&SubordinatorModel::cpp_pareto(1.0, 2.5), opts.mo_runs, opts.seed)?;
    let passed = lemmas.passed() && decomposition.iter().all(|d| d.passed) && mo.passed;
    Ok(VerificationReport { seed: opts.seed, lemmas, decomposition, mo_equivalence: mo, passed })
}
