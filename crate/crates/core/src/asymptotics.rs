//! Large-n limit laws of the last order statistics, their normalizations,
//! and the finite-n objects used in the proof of the limit theorem.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, LfmoError, Result};
use crate::lfmo::{Dimension, LfmoModel};
use crate::numeric::special::{binomial_cdf, binomial_cdf_pair, normal_cdf};
use crate::rng::{substream, StreamRng};
use crate::stable::{c_alpha, sample_stable, Convention, StableParams};
use crate::subordinator::{SubordinatorModel, TailRegime};

/// Cap on rejected draws per variate for the alpha = 1 inverse-stable limit.
pub const MAX_LIMIT_REJECTIONS: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitKind {
    Part1Stable,
    Part1Normal,
    Part2InverseStable,
}

impl LimitKind {
    pub fn name(&self) -> &'static str {
        match self {
            LimitKind::Part1Stable => "part1_stable",
            LimitKind::Part1Normal => "part1_normal",
            LimitKind::Part2InverseStable => "part2_inverse_stable",
        }
    }
}

/// `center(L) = center_coefficient * L` and `scale(L) = scale_coefficient * L^scale_exponent`,
/// with `L = log n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Normalization {
    pub center_coefficient: f64,
    pub scale_coefficient: f64,
    pub scale_exponent: f64,
}

impl Normalization {
    pub fn center(&self, log_n: f64) -> f64 {
        self.center_coefficient * log_n
    }

    pub fn scale(&self, log_n: f64) -> f64 {
        self.scale_coefficient * log_n.powf(self.scale_exponent)
    }
}

/// Distributional limit of the normalized `T_{m_n:n}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitLaw {
    pub kind: LimitKind,
    pub alpha: f64,
    pub sigma: f64,
    /// `C_alpha`; absent in the Gaussian case.
    pub c_alpha: Option<f64>,
    /// `E S_1`, infinite in part 2.
    pub mean_s1: f64,
    pub normalization: Normalization,
}

/// Picks the limit law of the model's tail regime.
pub fn limit_law_for(model: &SubordinatorModel) -> Result<LimitLaw> {
    let regime = model.classify_regime()?;
    let mean = model.moments().mean;
    match regime {
        TailRegime::Trivial { .. } => Err(LfmoError::InvalidRegime(
            "zero-variance subordinator has a Gumbel limit; use gumbel_normalize".into(),
        )),
        TailRegime::HypB { variance } => Ok(LimitLaw {
            kind: LimitKind::Part1Normal,
            alpha: 2.0,
            sigma: (variance / mean).sqrt(),
            c_alpha: None,
            mean_s1: mean,
            normalization: Normalization { center_coefficient: 1.0 / mean, scale_coefficient: 1.0 / mean, scale_exponent: 0.5 },
        }),
        TailRegime::HypA { alpha, tail_coefficient } if alpha > 1.0 => {
            let c = c_alpha(alpha)?;
            Ok(LimitLaw {
                kind: LimitKind::Part1Stable,
                alpha,
                sigma: (tail_coefficient / (c * mean)).powf(1.0 / alpha),
                c_alpha: Some(c),
                mean_s1: mean,
                normalization: Normalization {
                    center_coefficient: 1.0 / mean,
                    scale_coefficient: 1.0 / mean,
                    scale_exponent: 1.0 / alpha,
                },
            })
        }
        TailRegime::HypA { alpha, tail_coefficient } => {
            let c = c_alpha(alpha)?;
            Ok(LimitLaw {
                kind: LimitKind::Part2InverseStable,
                alpha,
                sigma: (tail_coefficient / c).powf(1.0 / alpha),
                c_alpha: Some(c),
                mean_s1: f64::INFINITY,
                normalization: Normalization { center_coefficient: 0.0, scale_coefficient: 1.0, scale_exponent: alpha },
            })
        }
    }
}

impl LimitLaw {
    /// Same law with the part-2 divisor `(log n)^exponent` instead of `(log n)^alpha`.
    pub fn with_part2_exponent(mut self, exponent: f64) -> Self {
        if self.kind == LimitKind::Part2InverseStable {
            self.normalization.scale_exponent = exponent;
        }
        self
    }

    /// The stable law of `Σ` (part 1 stable or part 2).
    pub fn stable_component(&self) -> Option<StableParams> {
        match self.kind {
            LimitKind::Part1Normal => None,
            LimitKind::Part1Stable => Some(StableParams {
                alpha: self.alpha,
                sigma: self.sigma,
                beta: -1.0,
                mu: 0.0,
                convention: Convention::Whitt451,
            }),
            LimitKind::Part2InverseStable => Some(StableParams {
                alpha: self.alpha,
                sigma: self.sigma,
                beta: 1.0,
                mu: 0.0,
                convention: Convention::Whitt451,
            }),
        }
    }

    /// Closed-form CDF when one is available (Gaussian case).
    pub fn analytic_cdf(&self) -> Option<impl Fn(f64) -> f64> {
        let sigma = self.sigma;
        (self.kind == LimitKind::Part1Normal).then_some(move |x: f64| normal_cdf(x / sigma))
    }

    pub fn normalize_one(&self, x: f64, log_n: f64) -> f64 {
        (x - self.normalization.center(log_n)) / self.normalization.scale(log_n)
    }
}

/// `(x - center(log n)) / scale(log n)` elementwise.
pub fn normalize(samples: &[f64], log_n: f64, law: &LimitLaw) -> Vec<f64> {
    samples.iter().map(|&x| law.normalize_one(x, log_n)).collect()
}

/// One draw of the limit; rejected draws (alpha = 1, part 2) are added to `rejections`.
pub fn sample_limit_counted<R: Rng + ?Sized>(law: &LimitLaw, rng: &mut R, rejections: &mut u64) -> Result<f64> {
    match law.kind {
        LimitKind::Part1Normal => {
            let z: f64 = rng.sample(rand_distr::StandardNormal);
            Ok(law.sigma * z)
        }
        LimitKind::Part1Stable => sample_stable(&law.stable_component().expect("stable part"), rng),
        LimitKind::Part2InverseStable => {
            let params = law.stable_component().expect("stable part");
            for _ in 0..=MAX_LIMIT_REJECTIONS {
                let s = sample_stable(&params, rng)?;
                if s > 0.0 {
                    return Ok(s.powf(-law.alpha));
                }
                *rejections += 1;
            }
            Err(LfmoError::BudgetExceeded(MAX_LIMIT_REJECTIONS))
        }
    }
}

pub fn sample_limit<R: Rng + ?Sized>(law: &LimitLaw, rng: &mut R) -> Result<f64> {
    let mut rejections = 0;
    let x = sample_limit_counted(law, rng, &mut rejections)?;
    if rejections > 0 {
        log::debug!("limit sampler rejected {rejections} nonpositive stable draws");
    }
    Ok(x)
}

/// Gumbel normalization `rate * x - log n`.
pub fn gumbel_normalize(samples: &[f64], log_n: f64, rate: f64) -> Vec<f64> {
    samples.iter().map(|&x| rate * (x - log_n / rate)).collect()
}

/// `P(Bin(n, e^{-x (log n)^{1/alpha}} / n) <= n - m)`.
pub fn f_n(x: f64, n: u64, m: u64, alpha: f64) -> f64 {
    let l = (n as f64).ln();
    let ln_p = -x * l.powf(1.0 / alpha) - l;
    let p = if ln_p >= 0.0 { 1.0 } else { ln_p.exp() };
    binomial_cdf((n - m) as f64, n as f64, p)
}

/// `P(Bin(n, n^{-x}) <= n - m)`, with `p = 1` for negative `x`.
pub fn g_n(x: f64, n: u64, m: u64) -> f64 {
    let p = if x >= 0.0 { (n as f64).powf(-x) } else { 1.0 };
    binomial_cdf((n - m) as f64, n as f64, p)
}

/// `u_n(t) = (log n + t (log n)^{1/alpha}) / E S_1`.
pub fn u_n(t: f64, log_n: f64, alpha: f64, mean_s1: f64) -> Result<f64> {
    let u = (log_n + t * log_n.powf(1.0 / alpha)) / mean_s1;
    if u.is_nan() || u < 0.0 {
        return domain(format!("u_n = {u} is negative for t = {t}, log n = {log_n}"));
    }
    Ok(u)
}

/// `Σ_n = (s - u E S_1) / (σ (u E S_1)^{1/α}) * (1 + t (log n)^{-(α-1)/α})^{1/α}`.
pub fn zoom_out_statistic(s_value: f64, u_n: f64, t: f64, law: &LimitLaw, log_n: f64) -> Result<f64> {
    if u_n.is_nan() || u_n < 0.0 {
        return domain(format!("u_n must be nonnegative, got {u_n}"));
    }
    let a = law.alpha;
    let level = u_n * law.mean_s1;
    let stretch = (1.0 + t * log_n.powf(-(a - 1.0) / a)).powf(1.0 / a);
    Ok((s_value - level) / (law.sigma * level.powf(1.0 / a)) * stretch)
}

/// Two estimators of `P(T_{n:n} > u_n)` that should agree.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecompositionCheck {
    pub t: f64,
    pub u_n: f64,
    /// Mean of `1 - f_n(σ Σ_n + t)` over sampled `S_{u_n}`.
    pub via_f_n: f64,
    pub via_f_n_se: f64,
    /// Fraction of sampled `T_{n:n}` exceeding `u_n`.
    pub direct: f64,
    pub direct_se: f64,
    pub passed: bool,
}

fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Compares both sides of `P(T_{n:n} > u_n | S) = 1 - f_n(σ Σ_n + t)` with `paths` draws each.
pub fn decomposition_check(
    model: &SubordinatorModel,
    n: u64,
    t: f64,
    paths: usize,
    seed: u64,
) -> Result<DecompositionCheck> {
    let law = limit_law_for(model)?;
    if law.kind == LimitKind::Part2InverseStable {
        return Err(LfmoError::InvalidRegime("decomposition check needs a finite-mean subordinator".into()));
    }
    let log_n = (n as f64).ln();
    let u = u_n(t, log_n, law.alpha, law.mean_s1)?;
    let stream = (t.to_bits() & 0xffff_ffff) as u32;
    let mut rng: StreamRng = substream(seed, stream, 0);
    let conditional: Vec<f64> = (0..paths)
        .map(|_| {
            let s = model.values_at(&[u], &mut rng)?[0];
            let sigma_n = zoom_out_statistic(s, u, t, &law, log_n)?;
            Ok(1.0 - f_n(law.sigma * sigma_n + t, n, n, law.alpha))
        })
        .collect::<Result<_>>()?;
    let lfmo = LfmoModel::new(Dimension::Exact(n), *model)?;
    let mut rng: StreamRng = substream(seed, stream, 1);
    let indicators: Vec<f64> = (0..paths)
        .map(|_| Ok(if lfmo.sample_upper_order_statistics(1, &mut rng)?[0] > u { 1.0 } else { 0.0 }))
        .collect::<Result<_>>()?;
    let (via_f_n, via_f_n_se) = mean_and_se(&conditional);
    let (direct, direct_se) = mean_and_se(&indicators);
    let se = (via_f_n_se.powi(2) + direct_se.powi(2)).sqrt().max(1e-12);
    Ok(DecompositionCheck {
        t,
        u_n: u,
        via_f_n,
        via_f_n_se,
        direct,
        direct_se,
        passed: (via_f_n - direct).abs() <= 3.0 * se,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaItem {
    pub name: String,
    pub passed: bool,
    /// Grid of `n` and the evaluated quantity at each.
    pub n: Vec<f64>,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaReport {
    pub items: Vec<LemmaItem>,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.passed)
    }
}

/// `(1 + q/n)^n / e^q`.
pub fn lemma1_ratio(n: f64, q: f64) -> f64 {
    (n * (q / n).ln_1p() - q).exp()
}

/// Sup-distance between the standardized `Bin(n, p)` CDF and the standard normal CDF.
pub fn binomial_normal_distance(n: u64, p: f64) -> f64 {
    let nf = n as f64;
    let mean = nf * p;
    let sd = (mean * (1.0 - p)).sqrt();
    let lo = (mean - 12.0 * sd).floor().max(0.0) as u64;
    let hi = ((mean + 12.0 * sd).ceil() as u64).min(n);
    let mut sup: f64 = 0.0;
    let mut below = binomial_cdf_pair(lo as f64 - 1.0, nf, p).0;
    for k in lo..=hi {
        let at = binomial_cdf_pair(k as f64, nf, p).0;
        let z = normal_cdf((k as f64 - mean) / sd);
        sup = sup.max((at - z).abs()).max((below - z).abs());
        below = at;
    }
    sup
}

fn strictly_decreasing(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[1] < w[0])
}

/// Finite-n checks of the three appendix lemmas.
pub fn lemma_suite() -> LemmaReport {
    let mut items = Vec::new();

    let grid1 = [1e3, 1e4, 1e5, 1e6];
    let dev: Vec<f64> = grid1.iter().map(|&n: &f64| (lemma1_ratio(n, n.powf(0.4)) - 1.0).abs()).collect();
    let within = grid1.iter().zip(&dev).all(|(n, d)| *d < n.powf(-0.2));
    items.push(LemmaItem {
        name: "lemma1_ratio_deviation_decreasing".into(),
        passed: strictly_decreasing(&dev) && within && lemma1_ratio(1e4, 0.0) == 1.0,
        n: grid1.to_vec(),
        values: dev,
    });

    let grid2 = [100u64, 1_000, 10_000, 100_000];
    let ks: Vec<f64> = grid2.iter().map(|&n| binomial_normal_distance(n, (n as f64).powf(-0.5))).collect();
    items.push(LemmaItem {
        name: "lemma2_binomial_normal_distance_decreasing".into(),
        passed: strictly_decreasing(&ks),
        n: grid2.iter().map(|&n| n as f64).collect(),
        values: ks,
    });

    let grid3 = [100u64, 1_000, 10_000, 100_000, 1_000_000];
    let p1: Vec<f64> = grid3.iter().map(|&n| binomial_cdf(0.0, n as f64, (n as f64).powi(-2))).collect();
    let spot = binomial_cdf(0.0, 1e3, 1e-6);
    items.push(LemmaItem {
        name: "lemma3_part1_no_successes".into(),
        passed: grid3.iter().zip(&p1).all(|(&n, &v)| v >= 1.0 - 1.0 / n as f64)
            && (spot - (1e3 * (-1e-6f64).ln_1p()).exp()).abs() < 1e-12,
        n: grid3.iter().map(|&n| n as f64).collect(),
        values: p1,
    });

    let p2: Vec<f64> = grid3
        .iter()
        .map(|&n| {
            let nf = n as f64;
            let np = nf * nf.powf(-0.5);
            let k = (np - nf.ln() * np.sqrt()).floor().max(0.0);
            binomial_cdf(k, nf, nf.powf(-0.5))
        })
        .collect();
    items.push(LemmaItem {
        name: "lemma3_part2_lower_deviation_vanishes".into(),
        passed: strictly_decreasing(&p2) && *p2.last().unwrap() < 1e-10,
        n: grid3.iter().map(|&n| n as f64).collect(),
        values: p2,
    });

    LemmaReport { items }
}
