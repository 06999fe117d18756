//! The Lévy-frailty Marshall–Olkin distribution: component lifetimes are the
//! first-passage times of one subordinator path over iid Exp(1) triggers.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, invalid, LfmoError, Result};
use crate::numeric::{binomial_u128, DoubleDouble};
use crate::rng::{exp1, open_unit};
use crate::subordinator::{LaplaceExponent, SubordinatorModel};

/// Largest exact dimension for which the top trigger is drawn by inversion.
pub const GUMBEL_SWITCH_N: f64 = 1e12;
/// Default size limit for the alternating binomial sums.
pub const DEFAULT_N_MAX: u64 = 30;
/// Retries allowed when a Gumbel-regime trigger comes out negative.
const NEGATIVE_TRIGGER_RETRIES: usize = 1000;

/// System dimension, either an exact integer or `log10 n` for astronomically large systems.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dimension {
    Exact(u64),
    Log10(f64),
}

impl Dimension {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Dimension::Exact(n) if n >= 1 => Ok(()),
            Dimension::Exact(_) => invalid("dimension n must be at least 1"),
            Dimension::Log10(l) if l > 0.0 && l.is_finite() => Ok(()),
            Dimension::Log10(l) => invalid(format!("log10 n must be positive, got {l}")),
        }
    }

    /// Natural log of n.
    pub fn ln_n(&self) -> f64 {
        match *self {
            Dimension::Exact(n) => (n as f64).ln(),
            Dimension::Log10(l) => l * std::f64::consts::LN_10,
        }
    }

    /// `n` as a float (may be infinite for very large log-scale dimensions).
    pub fn n_f64(&self) -> f64 {
        match *self {
            Dimension::Exact(n) => n as f64,
            Dimension::Log10(l) => 10f64.powf(l),
        }
    }

    /// Whether the top triggers are drawn from the Gumbel approximation.
    pub fn uses_gumbel(&self) -> bool {
        match *self {
            Dimension::Exact(n) => n as f64 > GUMBEL_SWITCH_N,
            Dimension::Log10(_) => true,
        }
    }

    /// Picks `Exact` when `10^log10` is an integer no larger than the switch-over.
    pub fn from_log10(log10_n: f64) -> Self {
        let n = 10f64.powf(log10_n);
        if n <= GUMBEL_SWITCH_N && (n - n.round()).abs() < 1e-6 {
            Dimension::Exact(n.round() as u64)
        } else {
            Dimension::Log10(log10_n)
        }
    }
}

/// An LFMO law in `n` dimensions driven by `subordinator`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LfmoModel {
    pub dimension: Dimension,
    pub subordinator: SubordinatorModel,
}

impl LfmoModel {
    pub fn new(dimension: Dimension, subordinator: SubordinatorModel) -> Result<Self> {
        dimension.validate()?;
        subordinator.validate()?;
        Ok(LfmoModel { dimension, subordinator })
    }

    /// One LFMO vector in the original component order.
    pub fn sample_vector<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Vec<f64>> {
        let n = match self.dimension {
            Dimension::Exact(n) => n as usize,
            Dimension::Log10(_) => return Err(LfmoError::InvalidRegime("sample_vector needs an exact dimension".into())),
        };
        let triggers: Vec<f64> = (0..n).map(|_| exp1(rng)).collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| triggers[a].total_cmp(&triggers[b]));
        let sorted: Vec<f64> = order.iter().map(|&i| triggers[i]).collect();
        let times = self.subordinator.crossing_times(&sorted, rng)?;
        let mut out = vec![0.0; n];
        for (rank, &i) in order.iter().enumerate() {
            out[i] = times[rank];
        }
        Ok(out)
    }

    /// The top `k_top` order statistics `T_{n:n} >= T_{n-1:n} >= ...`.
    pub fn sample_upper_order_statistics<R: Rng + ?Sized>(&self, k_top: usize, rng: &mut R) -> Result<Vec<f64>> {
        let mut levels = upper_triggers(self.dimension, k_top, rng)?;
        levels.reverse();
        let mut times = self.subordinator.crossing_times(&levels, rng)?;
        times.reverse();
        Ok(times)
    }
}

/// The `k` largest of `n` iid Exp(1) variables, in descending order.
///
/// Exact regime: with `w_0 = 0` and `w_{j+1} = w_j + ln(V_j)/(n - j)`, the
/// (j+1)-th largest trigger is `-ln(-expm1(w_{j+1}))`; each step draws the
/// maximum of the remaining `n - j` triggers conditioned below the previous
/// one, so the joint law is exact. Gumbel regime: the j-th largest is
/// `ln n - ln Γ_j` with `Γ_j` a sum of `j` standard exponentials.
pub fn upper_triggers<R: Rng + ?Sized>(dimension: Dimension, k: usize, rng: &mut R) -> Result<Vec<f64>> {
    dimension.validate()?;
    if k == 0 {
        return invalid("k_top must be at least 1");
    }
    if let Dimension::Exact(n) = dimension {
        if k as u64 > n {
            return invalid(format!("k_top = {k} exceeds n = {n}"));
        }
    }
    let mut out = Vec::with_capacity(k);
    if !dimension.uses_gumbel() {
        let n = dimension.n_f64();
        let mut w = 0.0f64;
        for j in 0..k {
            w += open_unit(rng).ln() / (n - j as f64);
            out.push(-(-w.exp_m1()).ln());
        }
    } else {
        let ln_n = dimension.ln_n();
        let mut gamma_sum = 0.0f64;
        for _ in 0..k {
            let mut tries = 0;
            loop {
                let e = exp1(rng);
                let level = ln_n - (gamma_sum + e).ln();
                if level >= 0.0 {
                    gamma_sum += e;
                    out.push(level);
                    break;
                }
                tries += 1;
                if tries >= NEGATIVE_TRIGGER_RETRIES {
                    return Err(LfmoError::InvalidRegime(format!(
                        "trigger spacing keeps going negative at ln n = {ln_n}; k_top too large for this n"
                    )));
                }
            }
        }
    }
    Ok(out)
}

/// Limits for the alternating binomial formulas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactOptions {
    pub n_max: u64,
    /// Largest tolerated a-priori error bound on a returned value.
    pub max_abs_error: f64,
}

impl Default for ExactOptions {
    fn default() -> Self {
        ExactOptions { n_max: DEFAULT_N_MAX, max_abs_error: 1e-6 }
    }
}

fn check_n(n: u64, opts: &ExactOptions) -> Result<()> {
    if n == 0 {
        return domain("n must be at least 1");
    }
    if n > opts.n_max {
        return domain(format!("n = {n} exceeds the exact-formula limit n_max = {}", opts.n_max));
    }
    Ok(())
}

fn coef(n: u64, k: u64) -> Result<u128> {
    binomial_u128(n, k).ok_or_else(|| LfmoError::Domain(format!("C({n},{k}) overflows")))
}

fn finish_probability(value: f64, bound: f64, what: &str, opts: &ExactOptions) -> Result<f64> {
    if bound > opts.max_abs_error {
        return Err(LfmoError::PrecisionLoss { what: what.into(), bound, limit: opts.max_abs_error });
    }
    const SLACK: f64 = 1e-9;
    if !(-SLACK..=1.0 + SLACK).contains(&value) {
        return Err(LfmoError::PrecisionLoss { what: format!("{what} left [0,1]: {value}"), bound, limit: SLACK });
    }
    Ok(value.clamp(0.0, 1.0))
}

/// `P(T_{m:n} > t) = Σ_{k=n-m+1}^{n} e^{-Ψ(k)t} C(n,k) C(k-1,n-m) (-1)^{k-n+m-1}`.
pub fn exact_tail_probability<P: LaplaceExponent + ?Sized>(
    n: u64,
    m: u64,
    t: f64,
    psi: &P,
    opts: &ExactOptions,
) -> Result<f64> {
    check_n(n, opts)?;
    if m < 1 || m > n {
        return domain(format!("order index m = {m} outside [1, {n}]"));
    }
    if t.is_nan() || t < 0.0 {
        return domain(format!("time t must be nonnegative, got {t}"));
    }
    let mut acc = DoubleDouble::ZERO;
    let mut magnitude = 0.0;
    let mut bound = 0.0;
    for k in (n - m + 1)..=n {
        let c = coef(n, k)? * coef(k - 1, n - m)?;
        let rate = psi.psi_dd(k as f64)?;
        let decay = (-rate).mul_f64(t).exp();
        let term = DoubleDouble::from_u128(c) * decay;
        let mag = term.to_f64();
        magnitude += mag;
        if t > 0.0 {
            bound += mag * (1e-28 + t * psi.psi_abs_error(k as f64));
        }
        acc += if (k + m - n - 1).is_multiple_of(2) { term } else { -term };
    }
    bound += magnitude * 4.0 * f64::EPSILON * f64::EPSILON;
    finish_probability(acc.to_f64(), bound, "exact tail probability", opts)
}

/// `E T_{n:n} = Σ_{k=1}^{n} C(n,k) (-1)^{k-1} / Ψ(k)`.
pub fn mean_last_order_statistic<P: LaplaceExponent + ?Sized>(n: u64, psi: &P, opts: &ExactOptions) -> Result<f64> {
    check_n(n, opts)?;
    let mut acc = DoubleDouble::ZERO;
    let mut bound = 0.0;
    for k in 1..=n {
        let p = psi.psi_dd(k as f64)?;
        if p.hi.is_nan() || p.hi <= 0.0 {
            return domain(format!("Ψ({k}) = {} must be positive", p.hi));
        }
        let c = coef(n, k)?;
        let term = DoubleDouble::from_u128(c).div_dd(p);
        let mag = term.to_f64();
        bound += mag * 4.0 * f64::EPSILON * f64::EPSILON + mag / p.hi * psi.psi_abs_error(k as f64);
        acc += if k % 2 == 1 { term } else { -term };
    }
    if bound > opts.max_abs_error {
        return Err(LfmoError::PrecisionLoss { what: "mean of last order statistic".into(), bound, limit: opts.max_abs_error });
    }
    Ok(acc.to_f64())
}

/// Marshall–Olkin shock rates `λ_(v)`, v = 1..n, of the equivalent exchangeable MO law.
pub fn shock_rates<P: LaplaceExponent + ?Sized>(n: u64, psi: &P, opts: &ExactOptions) -> Result<Vec<f64>> {
    check_n(n, opts)?;
    let values: Vec<DoubleDouble> = (0..=n).map(|k| psi.psi_dd(k as f64)).collect::<Result<_>>()?;
    let mut rates = Vec::with_capacity(n as usize);
    for v in 1..=n {
        let mut acc = DoubleDouble::ZERO;
        let mut magnitude = 0.0;
        let mut psi_err = 0.0;
        for i in 0..v {
            let c = coef(v - 1, i)?;
            let j = (n - v + i) as usize;
            let diff = values[j + 1] - values[j];
            let term = DoubleDouble::from_u128(c) * diff;
            magnitude += term.to_f64().abs();
            psi_err += c as f64 * (psi.psi_abs_error(j as f64) + psi.psi_abs_error((j + 1) as f64));
            acc += if i % 2 == 0 { term } else { -term };
        }
        let bound = magnitude * 4.0 * f64::EPSILON * f64::EPSILON + psi_err;
        if bound > opts.max_abs_error {
            return Err(LfmoError::PrecisionLoss { what: format!("shock rate λ_({v})"), bound, limit: opts.max_abs_error });
        }
        let rate = acc.to_f64();
        if rate < -1e-9 {
            return Err(LfmoError::PrecisionLoss { what: format!("shock rate λ_({v}) = {rate} is negative"), bound, limit: 1e-9 });
        }
        if rate < -1e-12 {
            log::warn!("clamping λ_({v}) = {rate:e} to 0");
        } else if rate < 0.0 {
            log::debug!("clamping λ_({v}) = {rate:e} to 0");
        }
        rates.push(rate.max(0.0));
    }
    Ok(rates)
}

/// General Marshall–Olkin sampler with exchangeable rates: one exponential
/// shock per nonempty subset `V`, rate `rates[|V| - 1]`.
#[derive(Debug, Clone)]
pub struct ExchangeableMarshallOlkin {
    n: usize,
    rates: Vec<f64>,
}

impl ExchangeableMarshallOlkin {
    pub fn new(rates: Vec<f64>) -> Result<Self> {
        let n = rates.len();
        if n == 0 || n > 20 {
            return invalid("subset-shock MO sampler supports 1..=20 components");
        }
        if rates.iter().any(|r| r.is_nan() || *r < 0.0) {
            return invalid("shock rates must be nonnegative");
        }
        Ok(ExchangeableMarshallOlkin { n, rates })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let mut t = vec![f64::INFINITY; self.n];
        for subset in 1u32..(1u32 << self.n) {
            let rate = self.rates[subset.count_ones() as usize - 1];
            if rate == 0.0 {
                continue;
            }
            let z = exp1(rng) / rate;
            for (i, ti) in t.iter_mut().enumerate() {
                if subset & (1 << i) != 0 && z < *ti {
                    *ti = z;
                }
            }
        }
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::montecarlo::{ks_one_sample, ks_two_sample, Ecdf};
    use crate::rng::seeded;
    use crate::subordinator::PsiFn;
    use proptest::prelude::*;

    fn opts() -> ExactOptions {
        ExactOptions::default()
    }

    /// Oracle: P(Bin(n, q) > n - m) by direct summation.
    fn binomial_upper(n: u64, m: u64, q: f64) -> f64 {
        (n - m + 1..=n)
            .map(|j| binomial_u128(n, j).unwrap() as f64 * q.powi(j as i32) * (1.0 - q).powi((n - j) as i32))
            .sum()
    }

    #[test]
    fn minimum_collapses_to_single_exponential() {
        let drift = SubordinatorModel::drift(1.0);
        let p = exact_tail_probability(4, 1, 0.5, &drift, &opts()).unwrap();
        assert!((p - (-2.0f64).exp()).abs() < 1e-15);
        assert!((p - 0.135_335).abs() < 1e-6);
    }

    #[test]
    fn tail_at_zero_is_exactly_one() {
        let model = SubordinatorModel::cpp_pareto(1.0, 2.5);
        for n in 1..=30 {
            for m in 1..=n {
                assert_eq!(exact_tail_probability(n, m, 0.0, &model, &opts()).unwrap(), 1.0, "n={n} m={m}");
            }
        }
    }

    #[test]
    fn tail_matches_binomial_for_drift() {
        // S_t = t: P(T_{m:n} > t) = P(Bin(n, e^{-t}) > n - m)
        let drift = SubordinatorModel::drift(1.0);
        for n in [3u64, 7, 12, 20] {
            for m in 1..=n {
                for t in [0.1, 0.7, 2.0] {
                    let exact = exact_tail_probability(n, m, t, &drift, &opts()).unwrap();
                    let oracle = binomial_upper(n, m, (-t).exp());
                    assert!((exact - oracle).abs() < 1e-13, "n={n} m={m} t={t}: {exact} vs {oracle}");
                }
            }
        }
    }

    #[test]
    fn tail_domain_errors() {
        let d = SubordinatorModel::drift(1.0);
        assert!(matches!(exact_tail_probability(5, 0, 1.0, &d, &opts()), Err(LfmoError::Domain(_))));
        assert!(matches!(exact_tail_probability(5, 6, 1.0, &d, &opts()), Err(LfmoError::Domain(_))));
        assert!(matches!(exact_tail_probability(5, 2, -1.0, &d, &opts()), Err(LfmoError::Domain(_))));
        assert!(matches!(exact_tail_probability(31, 2, 1.0, &d, &opts()), Err(LfmoError::Domain(_))));
    }

    #[test]
    fn pareto_exact_formulas_reach_n_max() {
        let model = SubordinatorModel::cpp_pareto(1.0, 2.5);
        let opts = ExactOptions::default();
        let times = [0.3, 1.0, 4.0];
        let ms = [1, 15, 30];
        let oracle = crate::verification::conditional_tail_oracle(&model, 30, &ms, &times, 20_000, 31).unwrap();
        for (mi, &m) in ms.iter().enumerate() {
            let mut prev = 1.0;
            for (ti, &t) in times.iter().enumerate() {
                let p = exact_tail_probability(30, m, t, &model, &opts).unwrap();
                assert!(p <= prev);
                prev = p;
                let e = oracle[mi * times.len() + ti];
                assert!(e.within(p, 4.0), "m={m} t={t}: {p} vs {e:?}");
            }
        }
        assert!(mean_last_order_statistic(30, &model, &opts).is_ok());
        assert!(shock_rates(30, &model, &opts).is_ok());
    }

    #[test]
    fn noisy_psi_triggers_precision_loss() {
        let noisy = PsiFn::new(|x: f64| x, 1e-4);
        assert!(matches!(
            exact_tail_probability(30, 15, 1.0, &noisy, &opts()),
            Err(LfmoError::PrecisionLoss { .. })
        ));
    }

    #[test]
    fn mean_is_harmonic_number_for_unit_drift() {
        let drift = SubordinatorModel::drift(1.0);
        for n in 1..=30u64 {
            let h: f64 = (1..=n).map(|k| 1.0 / k as f64).sum();
            let m = mean_last_order_statistic(n, &drift, &opts()).unwrap();
            assert!((m - h).abs() < 1e-10, "n={n}: {m} vs {h}");
        }
        assert!((mean_last_order_statistic(3, &drift, &opts()).unwrap() - 11.0 / 6.0).abs() < 1e-15);
        let model = SubordinatorModel::cpp_pareto(1.0, 2.5);
        let m1 = mean_last_order_statistic(1, &model, &opts()).unwrap();
        assert!((m1 - 1.0 / model.laplace_exponent(1.0).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn shock_rate_identities() {
        let model = SubordinatorModel::cpp_pareto(1.0, 2.5);
        let n = 6u64;
        let rates = shock_rates(n, &model, &opts()).unwrap();
        assert!(rates.iter().all(|&r| r >= 0.0));
        let marginal: f64 = (1..=n).map(|v| binomial_u128(n - 1, v - 1).unwrap() as f64 * rates[v as usize - 1]).sum();
        let total: f64 = (1..=n).map(|v| binomial_u128(n, v).unwrap() as f64 * rates[v as usize - 1]).sum();
        assert!((marginal - model.laplace_exponent(1.0).unwrap()).abs() < 1e-8);
        assert!((total - model.laplace_exponent(n as f64).unwrap()).abs() < 1e-8);
        let one = shock_rates(1, &model, &opts()).unwrap();
        assert_eq!(one, vec![model.laplace_exponent(1.0).unwrap()]);
    }

    #[test]
    fn drift_has_only_singleton_shocks() {
        let rates = shock_rates(5, &SubordinatorModel::drift(2.0), &opts()).unwrap();
        assert!((rates[0] - 2.0).abs() < 1e-15);
        assert!(rates[1..].iter().all(|&r| r.abs() < 1e-15));
    }

    #[test]
    fn top_triggers_by_inversion_match_max_cdf() {
        let mut rng = seeded(5);
        let n = 1000u64;
        let xs: Vec<f64> = (0..100_000).map(|_| upper_triggers(Dimension::Exact(n), 1, &mut rng).unwrap()[0]).collect();
        let r = ks_one_sample(&Ecdf::new(xs).unwrap(), |x| (n as f64 * (-(-x).exp()).ln_1p()).exp()).unwrap();
        assert!(r.accepts(0.01), "{r:?}");
    }

    #[test]
    fn drift_last_failure_has_max_exponential_law() {
        let model = LfmoModel::new(Dimension::Exact(1000), SubordinatorModel::drift(1.0)).unwrap();
        let mut rng = seeded(6);
        let xs: Vec<f64> = (0..100_000).map(|_| model.sample_upper_order_statistics(1, &mut rng).unwrap()[0]).collect();
        let r = ks_one_sample(&Ecdf::new(xs).unwrap(), |t| (1000.0 * (-(-t).exp()).ln_1p()).exp()).unwrap();
        assert!(r.accepts(0.01), "{r:?}");
    }

    #[test]
    fn gumbel_regime_matches_exact_at_one_million() {
        let sub = SubordinatorModel::cpp_pareto(1.0, 2.5);
        let exact = LfmoModel::new(Dimension::Exact(1_000_000), sub).unwrap();
        let approx = LfmoModel::new(Dimension::Log10(6.0), sub).unwrap();
        let mut r1 = seeded(61);
        let mut r2 = seeded(62);
        let a: Vec<f64> = (0..100_000).map(|_| exact.sample_upper_order_statistics(1, &mut r1).unwrap()[0]).collect();
        let b: Vec<f64> = (0..100_000).map(|_| approx.sample_upper_order_statistics(1, &mut r2).unwrap()[0]).collect();
        let r = ks_two_sample(&Ecdf::new(a).unwrap(), &Ecdf::new(b).unwrap()).unwrap();
        assert!(r.accepts(0.01), "{r:?}");
    }

    #[test]
    fn single_component_drift_is_exponential() {
        let model = LfmoModel::new(Dimension::Exact(1), SubordinatorModel::drift(1.0)).unwrap();
        let mut rng = seeded(7);
        let xs: Vec<f64> = (0..100_000).map(|_| model.sample_vector(&mut rng).unwrap()[0]).collect();
        let r = ks_one_sample(&Ecdf::new(xs).unwrap(), |t| -(-t.max(0.0)).exp_m1()).unwrap();
        assert!(r.accepts(0.01), "{r:?}");
    }

    #[test]
    fn sorted_vector_matches_top_k_per_rank() {
        let sub = SubordinatorModel::cpp_pareto(1.0, 2.5);
        let model = LfmoModel::new(Dimension::Exact(5), sub).unwrap();
        let mut r1 = seeded(71);
        let mut r2 = seeded(72);
        let runs = 100_000;
        let mut by_vector: Vec<Vec<f64>> = vec![Vec::new(); 5];
        let mut by_top: Vec<Vec<f64>> = vec![Vec::new(); 5];
        for _ in 0..runs {
            let mut v = model.sample_vector(&mut r1).unwrap();
            v.sort_by(|a, b| b.total_cmp(a));
            let top = model.sample_upper_order_statistics(5, &mut r2).unwrap();
            for rank in 0..5 {
                by_vector[rank].push(v[rank]);
                by_top[rank].push(top[rank]);
            }
        }
        for rank in 0..5 {
            let r = ks_two_sample(
                &Ecdf::new(by_vector[rank].clone()).unwrap(),
                &Ecdf::new(by_top[rank].clone()).unwrap(),
            )
            .unwrap();
            assert!(r.accepts(0.01), "rank {rank}: {r:?}");
        }
    }

    #[test]
    fn top_k_rejects_bad_sizes() {
        let model = LfmoModel::new(Dimension::Exact(3), SubordinatorModel::drift(1.0)).unwrap();
        let mut rng = seeded(0);
        assert!(model.sample_upper_order_statistics(4, &mut rng).is_err());
        assert!(model.sample_upper_order_statistics(0, &mut rng).is_err());
        let big = LfmoModel::new(Dimension::Log10(40.0), SubordinatorModel::drift(1.0)).unwrap();
        assert!(big.sample_vector(&mut rng).is_err());
    }

    #[test]
    fn dimension_from_log10() {
        assert_eq!(Dimension::from_log10(6.0), Dimension::Exact(1_000_000));
        assert_eq!(Dimension::from_log10(12.0), Dimension::Exact(1_000_000_000_000));
        assert_eq!(Dimension::from_log10(13.0), Dimension::Log10(13.0));
        assert_eq!(Dimension::from_log10(2.5), Dimension::Log10(2.5));
        assert!(!Dimension::Exact(1_000_000_000_000).uses_gumbel());
        assert!(Dimension::Exact(1_000_000_000_001).uses_gumbel());
    }

    #[test]
    fn mo_sampler_with_singleton_shocks_is_iid() {
        let mo = ExchangeableMarshallOlkin::new(vec![1.0, 0.0, 0.0]).unwrap();
        let mut rng = seeded(8);
        let xs: Vec<f64> = (0..50_000).map(|_| mo.sample(&mut rng)[1]).collect();
        let r = ks_one_sample(&Ecdf::new(xs).unwrap(), |t| -(-t.max(0.0)).exp_m1()).unwrap();
        assert!(r.accepts(0.01));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn tail_monotone_in_t_and_m(n in 1u64..=12, alpha in 0.3f64..5.0, lambda in 0.2f64..3.0) {
            prop_assume!((alpha - 2.0).abs() > 1e-3);
            let model = SubordinatorModel::cpp_pareto(lambda, alpha);
            let grid = [0.0, 0.1, 0.3, 0.7, 1.5, 3.0];
            for m in 1..=n {
                let mut prev = 1.0;
                for &t in &grid {
                    let p = exact_tail_probability(n, m, t, &model, &opts()).unwrap();
                    prop_assert!(p <= prev + 1e-9);
                    prev = p;
                }
            }
            for &t in &grid {
                let mut prev = 0.0;
                for m in 1..=n {
                    let p = exact_tail_probability(n, m, t, &model, &opts()).unwrap();
                    prop_assert!(p >= prev - 1e-9);
                    prev = p;
                }
            }
        }

        #[test]
        fn crossing_times_scatter_back_in_order(seed in 0u64..1000, n in 1u64..40) {
            let model = LfmoModel::new(Dimension::Exact(n), SubordinatorModel::cpp_pareto(1.0, 1.5)).unwrap();
            let v = model.sample_vector(&mut seeded(seed)).unwrap();
            prop_assert_eq!(v.len(), n as usize);
            prop_assert!(v.iter().all(|t| *t >= 0.0 && t.is_finite()));
        }

        #[test]
        fn top_k_is_nonincreasing(seed in 0u64..1000, log10 in 1.0f64..200.0, k in 1usize..6) {
            let model = LfmoModel::new(Dimension::from_log10(log10), SubordinatorModel::cpp_pareto(1.0, 4.0)).unwrap();
            let top = model.sample_upper_order_statistics(k, &mut seeded(seed)).unwrap();
            prop_assert!(top.windows(2).all(|w| w[0] >= w[1]));
        }
    }
}
