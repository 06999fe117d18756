/// Exact binomial coefficient. Returns `None` on overflow of `u128`
/// (which does not happen for n <= 120).
pub fn binomial_u128(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = acc.checked_mul((n - i) as u128)? / (i + 1) as u128;
    }
    Some(acc)
}

/// `ln C(n, k)` for real-valued n, via log-gamma.
pub fn ln_binomial(n: f64, k: f64) -> f64 {
    use statrs::function::gamma::ln_gamma;
    ln_gamma(n + 1.0) - ln_gamma(k + 1.0) - ln_gamma(n - k + 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(binomial_u128(5, 2), Some(10));
        assert_eq!(binomial_u128(30, 15), Some(155_117_520));
        assert_eq!(binomial_u128(3, 5), Some(0));
        assert_eq!(binomial_u128(0, 0), Some(1));
    }

    #[test]
    fn pascal_rule() {
        for n in 1..60u64 {
            for k in 1..n {
                assert_eq!(
                    binomial_u128(n, k).unwrap(),
                    binomial_u128(n - 1, k - 1).unwrap() + binomial_u128(n - 1, k).unwrap()
                );
            }
        }
    }
}
