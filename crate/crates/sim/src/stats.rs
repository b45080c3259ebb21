/// Normal quantile for a two-sided 95% interval.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Half-width of the Wilson score interval for `successes` out of `trials`.
pub fn wilson_half_width(successes: u64, trials: u64, z: f64) -> f64 {
    if trials == 0 {
        return f64::NAN;
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    z / (1.0 + z2 / n) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt()
}

/// `(lower, upper)` of the Wilson score interval.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let center = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
    let half = wilson_half_width(successes, trials, z);
    (center - half, center + half)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn textbook_value() {
        // 10 of 100 at 95%: (0.0552, 0.1744)
        let (lo, hi) = wilson_interval(10, 100, Z95);
        assert!((lo - 0.0552).abs() < 1e-4);
        assert!((hi - 0.1744).abs() < 1e-4);
    }

    #[test]
    fn zero_successes_still_have_width() {
        let (lo, hi) = wilson_interval(0, 1000, Z95);
        assert!(lo.abs() < 1e-15);
        assert!(hi > 0.0 && hi < 0.005);
        assert!(wilson_half_width(0, 0, Z95).is_nan());
    }
}
