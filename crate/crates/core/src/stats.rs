//! Binomial proportion statistics for error-rate estimates.

/// Two-sided 97.5% normal quantile, for 95% intervals.
pub const Z_95: f64 = 1.959_963_984_540_054;

/// Wilson score interval for `errors` successes in `trials` draws at 95%
/// confidence. Stays well-behaved at zero and small error counts.
pub fn wilson_interval(errors: u64, trials: u64) -> (f64, f64) {
    wilson_interval_z(errors, trials, Z_95)
}

/// Wilson score interval with an explicit normal quantile `z`.
pub fn wilson_interval_z(errors: u64, trials: u64, z: f64) -> (f64, f64) {
    assert!(trials > 0, "interval needs at least one trial");
    assert!(errors <= trials, "more errors than trials");
    let n = trials as f64;
    let p = errors as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = p + z2 / (2.0 * n);
    let radius = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    let low = ((center - radius) / denom).clamp(0.0, p);
    let high = ((center + radius) / denom).clamp(p, 1.0);
    (low, high)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frozen_reference_value() {
        // Independently evaluated at 40-digit precision.
        let (low, high) = wilson_interval(10, 100);
        assert!((low - 0.055_229_137_060_675_09).abs() < 1e-12, "low {low}");
        assert!(
            (high - 0.174_365_661_504_913_45).abs() < 1e-12,
            "high {high}"
        );
    }

    #[test]
    fn zero_errors_one_sided() {
        let (low, high) = wilson_interval(0, 1000);
        assert_eq!(low, 0.0);
        assert!(
            (high - 0.003_826_758_485_555_123).abs() < 1e-12,
            "high {high}"
        );
    }

    #[test]
    fn all_errors() {
        let (low, high) = wilson_interval(50, 50);
        assert_eq!(high, 1.0);
        assert!(low < 1.0 && low > 0.8);
    }

    #[test]
    fn brackets_the_estimate() {
        for (e, n) in [(1u64, 7u64), (3, 10), (100, 100_000), (511, 512)] {
            let p = e as f64 / n as f64;
            let (low, high) = wilson_interval(e, n);
            assert!((0.0..=p).contains(&low));
            assert!((p..=1.0).contains(&high));
        }
    }

    #[test]
    fn narrows_with_more_trials() {
        let (l1, h1) = wilson_interval(10, 100);
        let (l2, h2) = wilson_interval(100, 1000);
        assert!(h2 - l2 < h1 - l1);
    }
}
