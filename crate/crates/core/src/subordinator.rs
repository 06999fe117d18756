//! Lévy subordinators: Laplace exponent, moments, tail-regime classification
//! and exact level-crossing simulation.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, invalid, LfmoError, Result};
use crate::numeric::{integrate_adaptive, DoubleDouble};
use crate::numeric::special::expint_e;
use crate::rng::{exp1, open_unit};

/// Quadrature tolerance actually requested for the Pareto transform.
const PARETO_QUAD_TOL: f64 = 1e-12;
/// Absolute accuracy promised for `E e^{-xJ}` with Pareto steps when `x < 1` (quadrature).
pub const PARETO_TRANSFORM_ABS_ERROR: f64 = 1e-11;
/// Relative accuracy promised for the continued-fraction branch, `x >= 1`.
pub const PARETO_CF_REL_ERROR: f64 = 1e-14;
/// Default cap on simulated jumps per path.
pub const DEFAULT_JUMP_BUDGET: u64 = 1_000_000_000;

/// Jump-size law of a compound Poisson subordinator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StepDistribution {
    /// Pareto with scale 1: `P(J > t) = t^{-alpha}` for `t >= 1`.
    Pareto { alpha: f64 },
    Constant { size: f64 },
    Exponential { rate: f64 },
}

impl StepDistribution {
    pub fn validate(&self) -> Result<()> {
        let (name, v) = match *self {
            StepDistribution::Pareto { alpha } => ("pareto alpha", alpha),
            StepDistribution::Constant { size } => ("constant step size", size),
            StepDistribution::Exponential { rate } => ("exponential rate", rate),
        };
        if !(v > 0.0 && v.is_finite()) {
            return invalid(format!("{name} must be positive and finite, got {v}"));
        }
        Ok(())
    }

    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            StepDistribution::Pareto { alpha } => open_unit(rng).powf(-1.0 / alpha),
            StepDistribution::Constant { size } => size,
            StepDistribution::Exponential { rate } => exp1(rng) / rate,
        }
    }

    /// `E J^k` for k = 1, 2 (infinite when the moment diverges).
    pub fn raw_moment(&self, k: u32) -> f64 {
        let k = k as f64;
        match *self {
            StepDistribution::Pareto { alpha } => {
                if alpha > k {
                    alpha / (alpha - k)
                } else {
                    f64::INFINITY
                }
            }
            StepDistribution::Constant { size } => size.powf(k),
            StepDistribution::Exponential { rate } => statrs::function::gamma::gamma(k + 1.0) / rate.powf(k),
        }
    }

    /// Laplace transform `E e^{-xJ}`.
    pub fn laplace_transform(&self, x: f64) -> f64 {
        if x == 0.0 {
            return 1.0;
        }
        match *self {
            StepDistribution::Constant { size } => (-x * size).exp(),
            StepDistribution::Exponential { rate } => rate / (rate + x),
            StepDistribution::Pareto { alpha } if x >= 1.0 => alpha * expint_e(alpha + 1.0, x),
            StepDistribution::Pareto { alpha } => {
                // J = V^{-1/alpha} with V uniform, so E e^{-xJ} = ∫_0^1 exp(-x v^{-1/alpha}) dv.
                let f = |v: f64| if v <= 0.0 { 0.0 } else { (-x * v.powf(-1.0 / alpha)).exp() };
                integrate_adaptive(f, 0.0, 1.0, PARETO_QUAD_TOL).value
            }
        }
    }
}

/// A Lévy subordinator model. Paths start at 0 and are nondecreasing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum SubordinatorModel {
    #[serde(rename = "cpp")]
    CompoundPoisson { lambda: f64, step: StepDistribution },
    #[serde(rename = "drift")]
    LinearDrift { c: f64 },
}

/// `E S_1` and `Var S_1`; either may be `+inf`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Moments {
    pub mean: f64,
    pub variance: f64,
}

/// The tail hypothesis a subordinator satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TailRegime {
    /// Infinite variance with `P(S_1 > t) ~ A t^{-alpha}`, alpha in (0, 2).
    HypA { alpha: f64, tail_coefficient: f64 },
    /// Finite positive variance.
    HypB { variance: f64 },
    /// Deterministic linear path, zero variance.
    Trivial { slope: f64 },
}

/// Laplace exponent `Ψ(x) = -ln E e^{-x S_1}` with a declared absolute accuracy.
pub trait LaplaceExponent {
    fn psi(&self, x: f64) -> Result<f64>;

    /// `Ψ(x)` in double-double; defaults to the `f64` value.
    fn psi_dd(&self, x: f64) -> Result<DoubleDouble> {
        self.psi(x).map(DoubleDouble::from_f64)
    }

    /// Upper bound on `|psi_dd(x) - Ψ(x)|`. The default assumes a correctly rounded `psi`.
    fn psi_abs_error(&self, x: f64) -> f64 {
        self.psi(x).map_or(f64::INFINITY, |p| 0.5 * f64::EPSILON * p.abs())
    }
}

/// Adapts a closure into a [`LaplaceExponent`].
pub struct PsiFn<F> {
    f: F,
    abs_error: f64,
}

impl<F: Fn(f64) -> f64> PsiFn<F> {
    pub fn new(f: F, abs_error: f64) -> Self {
        PsiFn { f, abs_error }
    }
}

impl<F: Fn(f64) -> f64> LaplaceExponent for PsiFn<F> {
    fn psi(&self, x: f64) -> Result<f64> {
        Ok((self.f)(x))
    }
    /// The declared error plus rounding of the returned `f64`.
    fn psi_abs_error(&self, x: f64) -> f64 {
        self.abs_error + 0.5 * f64::EPSILON * (self.f)(x).abs()
    }
}

impl SubordinatorModel {
    pub fn cpp_pareto(lambda: f64, alpha: f64) -> Self {
        SubordinatorModel::CompoundPoisson { lambda, step: StepDistribution::Pareto { alpha } }
    }

    pub fn drift(c: f64) -> Self {
        SubordinatorModel::LinearDrift { c }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SubordinatorModel::CompoundPoisson { lambda, step } => {
                if !(*lambda > 0.0 && lambda.is_finite()) {
                    return invalid(format!("cpp rate lambda must be positive, got {lambda}"));
                }
                step.validate()
            }
            SubordinatorModel::LinearDrift { c } => {
                if !(*c > 0.0 && c.is_finite()) {
                    return invalid(format!("drift slope c must be positive, got {c}"));
                }
                Ok(())
            }
        }
    }

    pub fn laplace_exponent(&self, x: f64) -> Result<f64> {
        if x.is_nan() || x < 0.0 {
            return domain(format!("Laplace exponent needs x >= 0, got {x}"));
        }
        if x == 0.0 {
            return Ok(0.0);
        }
        Ok(match self {
            SubordinatorModel::LinearDrift { c } => c * x,
            SubordinatorModel::CompoundPoisson { lambda, step } => {
                // 1 - E e^{-xJ} loses digits for small x with Constant steps
                let one_minus = match *step {
                    StepDistribution::Constant { size } => -(-x * size).exp_m1(),
                    StepDistribution::Exponential { rate } => x / (rate + x),
                    StepDistribution::Pareto { .. } => 1.0 - step.laplace_transform(x),
                };
                lambda * one_minus
            }
        })
    }

    /// [`Self::laplace_exponent`] carried in double-double where the step law allows it.
    pub fn laplace_exponent_dd(&self, x: f64) -> Result<DoubleDouble> {
        if x.is_nan() || x < 0.0 {
            return domain(format!("Laplace exponent needs x >= 0, got {x}"));
        }
        if x == 0.0 {
            return Ok(DoubleDouble::ZERO);
        }
        Ok(match *self {
            SubordinatorModel::LinearDrift { c } => DoubleDouble::product(c, x),
            SubordinatorModel::CompoundPoisson { lambda, step } => {
                let one_minus = match step {
                    StepDistribution::Constant { size } => DoubleDouble::ONE - (-DoubleDouble::product(x, size)).exp(),
                    StepDistribution::Exponential { rate } => {
                        DoubleDouble::from_f64(x).div_dd(DoubleDouble::from_f64(rate) + x)
                    }
                    StepDistribution::Pareto { .. } => DoubleDouble::ONE - DoubleDouble::from_f64(step.laplace_transform(x)),
                };
                one_minus.mul_f64(lambda)
            }
        })
    }

    pub fn moments(&self) -> Moments {
        match self {
            SubordinatorModel::LinearDrift { c } => Moments { mean: *c, variance: 0.0 },
            SubordinatorModel::CompoundPoisson { lambda, step } => Moments {
                mean: lambda * step.raw_moment(1),
                variance: lambda * step.raw_moment(2),
            },
        }
    }

    pub fn classify_regime(&self) -> Result<TailRegime> {
        self.validate()?;
        match *self {
            SubordinatorModel::LinearDrift { c } => Ok(TailRegime::Trivial { slope: c }),
            SubordinatorModel::CompoundPoisson { lambda, step } => match step {
                StepDistribution::Pareto { alpha: 2.0 } => Err(LfmoError::UnsupportedRegime(
                    "Pareto steps with alpha = 2 satisfy neither tail hypothesis".into(),
                )),
                // compound Poisson tail equivalence P(S_1 > t) ~ lambda P(J > t)
                StepDistribution::Pareto { alpha } if alpha < 2.0 => {
                    Ok(TailRegime::HypA { alpha, tail_coefficient: lambda })
                }
                _ => Ok(TailRegime::HypB { variance: self.moments().variance }),
            },
        }
    }

    /// First-passage times of every level along one sampled path.
    ///
    /// `levels` must be nondecreasing and nonnegative; the output has the
    /// same order and is nondecreasing.
    pub fn crossing_times<R: Rng + ?Sized>(&self, levels: &[f64], rng: &mut R) -> Result<Vec<f64>> {
        self.crossing_times_with_budget(levels, DEFAULT_JUMP_BUDGET, rng)
    }

    pub fn crossing_times_with_budget<R: Rng + ?Sized>(
        &self,
        levels: &[f64],
        jump_budget: u64,
        rng: &mut R,
    ) -> Result<Vec<f64>> {
        if levels.iter().any(|l| l.is_nan() || *l < 0.0) {
            return invalid("crossing levels must be nonnegative");
        }
        if levels.windows(2).any(|w| w[1] < w[0]) {
            return invalid("crossing levels must be sorted nondecreasing");
        }
        let mut out = Vec::with_capacity(levels.len());
        match *self {
            SubordinatorModel::LinearDrift { c } => out.extend(levels.iter().map(|l| l / c)),
            SubordinatorModel::CompoundPoisson { lambda, step } => {
                let mut idx = levels.partition_point(|&l| l <= 0.0);
                out.resize(idx, 0.0);
                let (mut t, mut s, mut jumps) = (0.0f64, 0.0f64, 0u64);
                while idx < levels.len() {
                    if jumps >= jump_budget {
                        return Err(LfmoError::BudgetExceeded(jump_budget));
                    }
                    t += exp1(rng) / lambda;
                    s += step.sample(rng);
                    jumps += 1;
                    while idx < levels.len() && s >= levels[idx] {
                        out.push(t);
                        idx += 1;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Values `S_t` at nondecreasing times along one sampled path.
    pub fn values_at<R: Rng + ?Sized>(&self, times: &[f64], rng: &mut R) -> Result<Vec<f64>> {
        if times.iter().any(|t| t.is_nan() || *t < 0.0) || times.windows(2).any(|w| w[1] < w[0]) {
            return invalid("path times must be nonnegative and sorted");
        }
        Ok(match *self {
            SubordinatorModel::LinearDrift { c } => times.iter().map(|t| c * t).collect(),
            SubordinatorModel::CompoundPoisson { lambda, step } => {
                let mut out = Vec::with_capacity(times.len());
                let mut s = 0.0;
                let mut next_arrival = exp1(rng) / lambda;
                for &t in times {
                    while next_arrival <= t {
                        s += step.sample(rng);
                        next_arrival += exp1(rng) / lambda;
                    }
                    out.push(s);
                }
                out
            }
        })
    }
}

impl LaplaceExponent for SubordinatorModel {
    fn psi(&self, x: f64) -> Result<f64> {
        self.laplace_exponent(x)
    }

    fn psi_dd(&self, x: f64) -> Result<DoubleDouble> {
        self.laplace_exponent_dd(x)
    }

    fn psi_abs_error(&self, x: f64) -> f64 {
        if x == 0.0 {
            return 0.0;
        }
        match *self {
            SubordinatorModel::LinearDrift { .. } => 0.0,
            SubordinatorModel::CompoundPoisson { lambda, step } => match step {
                StepDistribution::Constant { .. } | StepDistribution::Exponential { .. } => lambda * 1e-28,
                // E_p(x) <= e^{-x}/x
                StepDistribution::Pareto { alpha } if x >= 1.0 => {
                    lambda * (1e-30 + PARETO_CF_REL_ERROR * alpha * (-x).exp() / x)
                }
                StepDistribution::Pareto { .. } => lambda * PARETO_TRANSFORM_ABS_ERROR,
            },
        }
    }
}
