use serde::Serialize;

use super::ecdf::Ecdf;
use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KsKind {
    OneSampleAnalytic,
    TwoSample,
}

/// Kolmogorov-Smirnov sup-distance together with where it was attained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KsResult {
    pub statistic: f64,
    pub n_effective: f64,
    pub kind: KsKind,
    /// Abscissa at which the sup-distance is attained.
    pub location: f64,
    /// `F_empirical - F_reference` at `location` (sign tells which side is heavier).
    pub signed_deviation: f64,
}

impl KsResult {
    /// Asymptotic p-value from the Kolmogorov distribution with Stephens'
    /// small-sample correction.
    pub fn p_value(&self) -> f64 {
        let sn = self.n_effective.sqrt();
        kolmogorov_survival((sn + 0.12 + 0.11 / sn) * self.statistic)
    }

    /// `true` when the test does not reject at significance `level`.
    pub fn accepts(&self, level: f64) -> bool {
        self.p_value() > level
    }

    /// "left" when the sup-deviation sits at a negative abscissa.
    pub fn side(&self) -> &'static str {
        if self.location < 0.0 {
            "left"
        } else {
            "right"
        }
    }
}

/// `P(K > lambda)` for the Kolmogorov distribution.
pub fn kolmogorov_survival(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let k = k as f64;
        let term = (-2.0 * k * k * lambda * lambda).exp();
        sum += if k as u64 % 2 == 1 { term } else { -term };
        if term < 1e-18 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// One-sample KS distance between an ECDF and a continuous CDF.
pub fn ks_one_sample<F: Fn(f64) -> f64>(a: &Ecdf, cdf: F) -> Result<KsResult> {
    if a.count() < 2 {
        return invalid("KS needs at least two sample points");
    }
    let xs = a.values();
    let n = xs.len() as f64;
    let mut best = KsResult {
        statistic: 0.0,
        n_effective: n,
        kind: KsKind::OneSampleAnalytic,
        location: xs[0],
        signed_deviation: 0.0,
    };
    let mut i = 0;
    while i < xs.len() {
        // tie group [i, j)
        let mut j = i + 1;
        while j < xs.len() && xs[j] == xs[i] {
            j += 1;
        }
        let f = cdf(xs[i]);
        let above = j as f64 / n - f;
        let below = i as f64 / n - f;
        if above.abs() > best.statistic {
            best.statistic = above.abs();
            best.location = xs[i];
            best.signed_deviation = above;
        }
        if below.abs() > best.statistic {
            best.statistic = below.abs();
            best.location = xs[i];
            best.signed_deviation = below;
        }
        i = j;
    }
    Ok(best)
}

/// Exact two-sample KS distance by merge scan.
pub fn ks_two_sample(a: &Ecdf, b: &Ecdf) -> Result<KsResult> {
    if a.count() < 2 || b.count() < 2 {
        return invalid("KS needs at least two sample points per side");
    }
    let (xa, xb) = (a.values(), b.values());
    let (na, nb) = (xa.len() as f64, xb.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut best = KsResult {
        statistic: 0.0,
        n_effective: na * nb / (na + nb),
        kind: KsKind::TwoSample,
        location: xa[0].min(xb[0]),
        signed_deviation: 0.0,
    };
    while i < xa.len() || j < xb.len() {
        let v = match (xa.get(i), xb.get(j)) {
            (Some(&p), Some(&q)) => p.min(q),
            (Some(&p), None) => p,
            (None, Some(&q)) => q,
            (None, None) => unreachable!(),
        };
        while i < xa.len() && xa[i] <= v {
            i += 1;
        }
        while j < xb.len() && xb[j] <= v {
            j += 1;
        }
        let d = i as f64 / na - j as f64 / nb;
        if d.abs() > best.statistic {
            best.statistic = d.abs();
            best.location = v;
            best.signed_deviation = d;
        }
    }
    Ok(best)
}
