//! α-stable laws: parameters with an explicit convention, Chambers–Mallows–Stuck
//! sampling, convention conversion and the tail constant `C_α`.
//!
//! Conventions:
//!
//! * [`Convention::Whitt451`] is the Samorodnitsky–Taqqu form
//!   `ln E e^{iθX} = -σ^α|θ|^α (1 - iβ sign θ tan(πα/2)) + iμθ` (α ≠ 1) and
//!   `-σ|θ| (1 + iβ (2/π) sign θ ln|θ|) + iμθ` (α = 1).
//! * [`Convention::NolanNotation1`] has the same characteristic function, so
//!   conversion between the two is the identity.
//! * [`Convention::NolanNotation0`] shifts the location so the law is
//!   continuous in α: `μ₀ = μ₁ + βσ tan(πα/2)` (α ≠ 1), `μ₀ = μ₁ + β(2/π)σ ln σ` (α = 1).
//!
//! In all three, `Stable(2, σ, ·, μ)` is `Normal(μ, 2σ²)`.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, invalid, LfmoError, Result};
use crate::numeric::special::gamma;
use crate::rng::{exp1, seeded};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    Whitt451,
    NolanNotation1,
    NolanNotation0,
}

impl std::str::FromStr for Convention {
    type Err = LfmoError;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "whitt451" | "whitt_451" | "whitt" => Ok(Convention::Whitt451),
            "nolan1" | "nolan_notation1" | "s1" => Ok(Convention::NolanNotation1),
            "nolan0" | "nolan_notation0" | "s0" => Ok(Convention::NolanNotation0),
            other => Err(LfmoError::InvalidParameter(format!("unknown stable convention `{other}`"))),
        }
    }
}

/// Parameters of a stable law, always tagged with their convention.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StableParams {
    pub alpha: f64,
    pub sigma: f64,
    pub beta: f64,
    pub mu: f64,
    pub convention: Convention,
}

impl StableParams {
    pub fn new(alpha: f64, sigma: f64, beta: f64, mu: f64, convention: Convention) -> Result<Self> {
        let p = StableParams { alpha, sigma, beta, mu, convention };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= 2.0) {
            return invalid(format!("stable alpha must lie in (0, 2], got {}", self.alpha));
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return invalid(format!("stable sigma must be positive, got {}", self.sigma));
        }
        if !(-1.0..=1.0).contains(&self.beta) {
            return invalid(format!("stable beta must lie in [-1, 1], got {}", self.beta));
        }
        if !self.mu.is_finite() {
            return invalid("stable mu must be finite");
        }
        Ok(())
    }

    /// Variance of the α = 2 law, which is `Normal(μ, 2σ²)` in every supported convention.
    pub fn gaussian_variance(&self) -> Option<f64> {
        (self.alpha == 2.0).then_some(2.0 * self.sigma * self.sigma)
    }
}

/// `C_α = (1 - α) / (Γ(2 - α) cos(πα/2))`, with the limit `2/π` at α = 1.
pub fn c_alpha(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 2.0) {
        return domain(format!("C_alpha needs alpha in (0, 2), got {alpha}"));
    }
    if alpha == 1.0 {
        return Ok(2.0 / PI);
    }
    Ok((1.0 - alpha) / (gamma(2.0 - alpha) * (PI * alpha / 2.0).cos()))
}

fn tan_half_pi_alpha(alpha: f64) -> f64 {
    // tan(π) is not exactly zero in floating point
    if alpha == 2.0 {
        0.0
    } else {
        (PI * alpha / 2.0).tan()
    }
}

/// Location shift `μ₀ - μ₁` between Nolan's S0 and S1 forms.
fn s0_shift(p: &StableParams) -> f64 {
    if p.alpha == 1.0 {
        p.beta * (2.0 / PI) * p.sigma * p.sigma.ln()
    } else {
        p.beta * p.sigma * tan_half_pi_alpha(p.alpha)
    }
}

/// Re-expresses the same law in another convention.
pub fn convert_convention(params: StableParams, target: Convention) -> Result<StableParams> {
    params.validate()?;
    if params.convention == target {
        return Ok(params);
    }
    use Convention::*;
    let mu = match (params.convention, target) {
        (Whitt451, NolanNotation1) | (NolanNotation1, Whitt451) => params.mu,
        (Whitt451 | NolanNotation1, NolanNotation0) => params.mu + s0_shift(&params),
        (NolanNotation0, Whitt451 | NolanNotation1) => params.mu - s0_shift(&params),
        _ => unreachable!("same-convention case returned above"),
    };
    Ok(StableParams { mu, convention: target, ..params })
}

/// One draw of `Stable(α, 1, β, 0)` in the S1 form (Chambers–Mallows–Stuck).
fn standard_s1<R: Rng + ?Sized>(alpha: f64, beta: f64, rng: &mut R) -> f64 {
    // V uniform on the open interval (-π/2, π/2)
    let v = loop {
        let v = PI * (rng.random::<f64>() - 0.5);
        if v > -FRAC_PI_2 {
            break v;
        }
    };
    let w = exp1(rng);
    if alpha == 1.0 {
        let shifted = FRAC_PI_2 + beta * v;
        (2.0 / PI) * (shifted * v.tan() - beta * ((FRAC_PI_2 * w * v.cos()) / shifted).ln())
    } else {
        let t = beta * tan_half_pi_alpha(alpha);
        let b = t.atan() / alpha;
        let s = (1.0 + t * t).powf(1.0 / (2.0 * alpha));
        let arg = alpha * (v + b);
        s * arg.sin() / v.cos().powf(1.0 / alpha) * ((v - arg).cos() / w).powf((1.0 - alpha) / alpha)
    }
}

/// One variate of the given stable law.
pub fn sample_stable<R: Rng + ?Sized>(params: &StableParams, rng: &mut R) -> Result<f64> {
    params.validate()?;
    let p = convert_convention(*params, Convention::NolanNotation1)?;
    let x = if p.alpha == 2.0 {
        // β drops out; Normal(μ, 2σ²)
        let z: f64 = rng.sample(rand_distr::StandardNormal);
        p.mu + p.sigma * std::f64::consts::SQRT_2 * z
    } else if p.alpha == 1.0 {
        p.sigma * standard_s1(1.0, p.beta, rng) + (2.0 / PI) * p.beta * p.sigma * p.sigma.ln() + p.mu
    } else {
        p.sigma * standard_s1(p.alpha, p.beta, rng) + p.mu
    };
    Ok(x)
}

/// Deterministic iid population of `count` variates for two-sample diagnostics.
pub fn reference_sample(params: &StableParams, count: usize, seed: u64) -> Result<Vec<f64>> {
    if count == 0 {
        return invalid("reference sample count must be positive");
    }
    let mut rng = seeded(seed);
    (0..count).map(|_| sample_stable(params, &mut rng)).collect()
}
