use crate::error::{invalid, Result};

/// `(1 - y/n)^n - e^{-y}` for `0 <= y <= n`, written to avoid cancellation.
fn gap(y: f64, n: f64) -> f64 {
    if y >= n {
        return (-y).exp();
    }
    ((-y).exp() * (n * (-y / n).ln_1p() + y).exp_m1()).abs()
}

/// `sup_x |P(max of n Exp(1) - log n <= x) - exp(-e^{-x})|`, by a log grid in
/// `y = e^{-x}` and golden-section refinement around the best cell.
pub fn gumbel_switch_error_bound(n: u64) -> Result<f64> {
    if n < 2 {
        return invalid("gumbel_switch_error_bound needs n >= 2");
    }
    let nf = n as f64;
    let (lo, hi) = (1e-6f64.ln(), 60f64.min(nf).ln());
    const GRID: usize = 4000;
    let h = (hi - lo) / GRID as f64;
    let mut best = (0.0, lo);
    for i in 0..=GRID {
        let s = lo + i as f64 * h;
        let v = gap(s.exp(), nf);
        if v > best.0 {
            best = (v, s);
        }
    }
    let (mut a, mut b) = (best.1 - h, best.1 + h);
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..100 {
        let c = b - phi * (b - a);
        let d = a + phi * (b - a);
        if gap(c.exp(), nf) > gap(d.exp(), nf) {
            b = d;
        } else {
            a = c;
        }
    }
    // points above y = n have (1 - y/n)^n = 0 and gap e^{-y} <= e^{-n}
    Ok(best.0.max(gap((0.5 * (a + b)).exp(), nf)).max((-nf).exp()))
}
