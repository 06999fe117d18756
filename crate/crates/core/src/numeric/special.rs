//! Special functions used by the order-statistic formulas and the KS machinery.

use statrs::function::erf::erfc;
use statrs::function::gamma::ln_gamma;

pub use statrs::function::gamma::gamma;

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;
const CF_MAX_ITER: usize = 200_000;
const CF_EPS: f64 = 1e-16;
const TINY: f64 = 1e-300;

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

/// Standard Gumbel (max) CDF `exp(-exp(-x))`.
pub fn gumbel_cdf(x: f64) -> f64 {
    (-(-x).exp()).exp()
}

/// Generalized exponential integral `E_p(x) = ∫_1^∞ e^{-xt} t^{-p} dt` for `x >= 1`, `p > 0`,
/// by modified Lentz on the continued fraction. Relative error is a few ulps.
pub fn expint_e(p: f64, x: f64) -> f64 {
    debug_assert!(x >= 1.0 && p > 0.0);
    let mut b = x + p;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..CF_MAX_ITER {
        let fi = i as f64;
        let a = -fi * (p - 1.0 + fi);
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        let delta = c * d;
        h *= delta;
        if (delta - 1.0).abs() < CF_EPS {
            break;
        }
    }
    h * (-x).exp()
}

fn stirling_correction(z: f64) -> f64 {
    let z2 = z * z;
    (1.0 / 12.0 - (1.0 / 360.0 - (1.0 / 1260.0 - 1.0 / (1680.0 * z2)) / z2) / z2) / z
}

/// `ln B(a, b)` without the catastrophic cancellation of
/// `lnΓ(a) + lnΓ(b) - lnΓ(a+b)` when one argument is huge.
pub fn ln_beta(a: f64, b: f64) -> f64 {
    let (big, small) = if a >= b { (a, b) } else { (b, a) };
    let s = big + small;
    if small >= 10.0 {
        HALF_LN_2PI - 0.5 * s.ln() - (big - 0.5) * (small / big).ln_1p() + (small - 0.5) * (small / s).ln()
            + stirling_correction(big)
            + stirling_correction(small)
            - stirling_correction(s)
    } else if big >= 10.0 {
        // lnΓ(big) - lnΓ(big + small) by Stirling differences
        let diff = -(big - 0.5) * (small / big).ln_1p() - small * s.ln() + small + stirling_correction(big)
            - stirling_correction(s);
        ln_gamma(small) + diff
    } else {
        ln_gamma(a) + ln_gamma(b) - ln_gamma(s)
    }
}

/// Modified Lentz evaluation of the incomplete-beta continued fraction.
fn beta_cf(a: f64, b: f64, x: f64) -> f64 {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=CF_MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < CF_EPS {
            break;
        }
    }
    h
}

fn ln_of(x: f64, complement: f64) -> f64 {
    if x > 0.5 {
        (-complement).ln_1p()
    } else {
        x.ln()
    }
}

/// Regularized incomplete beta `I_x(a, b)` together with its complement
/// `1 - I_x(a, b)`, where the caller passes both `x` and `y = 1 - x` so that
/// neither has to be formed by subtraction.
///
/// The smaller of the two returned values is computed directly and carries
/// full relative precision.
pub fn beta_inc_pair(a: f64, b: f64, x: f64, y: f64) -> (f64, f64) {
    debug_assert!(a > 0.0 && b > 0.0);
    if x <= 0.0 {
        return (0.0, 1.0);
    }
    if y <= 0.0 {
        return (1.0, 0.0);
    }
    let ln_front = a * ln_of(x, y) + b * ln_of(y, x) - ln_beta(a, b);
    if x < (a + 1.0) / (a + b + 2.0) {
        let v = (ln_front - a.ln()).exp() * beta_cf(a, b, x);
        (v, 1.0 - v)
    } else {
        let v = (ln_front - b.ln()).exp() * beta_cf(b, a, y);
        (1.0 - v, v)
    }
}

/// Regularized incomplete beta `I_x(a, b)`.
pub fn beta_inc(a: f64, b: f64, x: f64) -> f64 {
    beta_inc_pair(a, b, x, 1.0 - x).0
}

/// `P(Bin(n, p) <= k)` together with `P(Bin(n, p) > k)`.
///
/// `n` is real-valued so the function serves dimensions far beyond `u64`
/// summation range; `k` is compared on the integer lattice.
pub fn binomial_cdf_pair(k: f64, n: f64, p: f64) -> (f64, f64) {
    if k < 0.0 {
        return (0.0, 1.0);
    }
    let k = k.floor();
    if k >= n {
        return (1.0, 0.0);
    }
    if p <= 0.0 {
        return (1.0, 0.0);
    }
    if p >= 1.0 {
        return (0.0, 1.0);
    }
    // P(X <= k) = I_{1-p}(n - k, k + 1)
    beta_inc_pair(n - k, k + 1.0, 1.0 - p, p)
}

/// `P(Bin(n, p) <= k)`.
pub fn binomial_cdf(k: f64, n: f64, p: f64) -> f64 {
    binomial_cdf_pair(k, n, p).0
}
