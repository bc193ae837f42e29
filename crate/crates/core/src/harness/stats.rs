/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Wilson score interval for `errors` out of `trials`.
///
/// With zero errors the interval is one-sided, `[0, 1 - 0.05^(1/n)]`.
pub fn wilson_ci(errors: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    if errors == 0 {
        return (0.0, 1.0 - 0.05f64.powf(1.0 / n));
    }
    let p = errors as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Median of a non-empty sample; the mean of the middle pair for even sizes.
pub fn median(values: &[u64]) -> Option<u64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_unstable();
    let m = v.len() / 2;
    Some(if v.len() % 2 == 1 { v[m] } else { (v[m - 1] + v[m]) / 2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn wilson_reference_values() {
        // 10 / 100: textbook Wilson bounds 0.0552 and 0.1744.
        let (lo, hi) = wilson_ci(10, 100);
        assert!((lo - 0.05523).abs() < 1e-4, "{lo}");
        assert!((hi - 0.17437).abs() < 1e-4, "{hi}");
        let (lo, hi) = wilson_ci(0, 1000);
        assert_eq!(lo, 0.0);
        assert!((hi - 0.002991).abs() < 1e-5);
        assert_eq!(wilson_ci(0, 0), (0.0, 1.0));
        let (lo, hi) = wilson_ci(5, 5);
        assert!(hi <= 1.0 && lo > 0.5);
    }

    #[test]
    fn medians() {
        assert_eq!(median(&[]), None);
        assert_eq!(median(&[3, 1, 2]), Some(2));
        assert_eq!(median(&[4, 1, 3, 2]), Some(2));
    }

    proptest! {
        #[test]
        fn interval_brackets_estimate(n in 1u64..100_000, frac in 0.0f64..=1.0) {
            let k = ((n as f64) * frac).floor() as u64;
            let (lo, hi) = wilson_ci(k, n);
            let p = k as f64 / n as f64;
            prop_assert!(0.0 <= lo && lo <= p + 1e-12);
            prop_assert!(p <= hi + 1e-12 && hi <= 1.0);
        }
    }
}
