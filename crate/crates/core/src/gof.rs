//! Goodness-of-fit statistics used by the verification suites: two-sided
//! Kolmogorov-Smirnov distance and Pearson chi-square with p-value.

use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};

/// Two-sided KS distance `sup |F_emp - F|` against a reference CDF.
/// Sorts the samples in place.
pub fn ks_statistic(samples: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
    assert!(!samples.is_empty());
    samples.sort_by(|a, b| a.partial_cmp(b).expect("samples must not contain NaN"));
    let n = samples.len() as f64;
    let mut sup: f64 = 0.0;
    for (i, x) in samples.iter().enumerate() {
        let f = cdf(*x);
        sup = sup.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
    }
    sup
}

pub fn standard_normal_cdf(x: f64) -> f64 {
    // Handle infinities explicitly; statrs is fine with them but be blunt.
    if x == f64::NEG_INFINITY {
        return 0.0;
    }
    if x == f64::INFINITY {
        return 1.0;
    }
    Normal::new(0.0, 1.0).unwrap().cdf(x)
}

pub fn uniform01_cdf(x: f64) -> f64 {
    x.clamp(0.0, 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquareResult {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

/// Pearson chi-square of observed counts against expected counts, with
/// `cells - 1` degrees of freedom. Expected counts must be positive.
pub fn chi_square_test(observed: &[u64], expected: &[f64]) -> ChiSquareResult {
    assert_eq!(observed.len(), expected.len());
    assert!(observed.len() >= 2);
    assert!(expected.iter().all(|e| *e > 0.0), "expected counts must be positive");
    let statistic: f64 = observed
        .iter()
        .zip(expected)
        .map(|(o, e)| {
            let d = *o as f64 - e;
            d * d / e
        })
        .sum();
    let dof = observed.len() - 1;
    let p_value = 1.0 - ChiSquared::new(dof as f64).unwrap().cdf(statistic);
    ChiSquareResult { statistic, dof, p_value }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::CounterRng;

    #[test]
    fn ks_detects_matching_and_mismatched_laws() {
        let rng = CounterRng::new(3, "ks");
        let mut unif: Vec<f64> = (0..20_000).map(|i| rng.uniform_half_open(i, 0)).collect();
        let d = ks_statistic(&mut unif, uniform01_cdf);
        assert!(d < 0.015, "uniform vs uniform: {d}");

        // Uniform(-1, 1) is far from a standard normal.
        let mut wrong: Vec<f64> = (0..20_000).map(|i| 2.0 * rng.uniform_half_open(i, 1) - 1.0).collect();
        let d = ks_statistic(&mut wrong, standard_normal_cdf);
        assert!(d > 0.1, "uniform vs normal should fail: {d}");
    }

    #[test]
    fn normal_cdf_sanity() {
        assert!((standard_normal_cdf(0.0) - 0.5).abs() < 1e-12);
        assert!((standard_normal_cdf(1.96) - 0.975).abs() < 1e-3);
        assert_eq!(standard_normal_cdf(f64::NEG_INFINITY), 0.0);
    }

    #[test]
    fn chi_square_distinguishes_fair_from_biased() {
        // Fair draws over 6 cells.
        let rng = CounterRng::new(5, "chi");
        let mut counts = [0u64; 6];
        let n = 60_000;
        for i in 0..n {
            counts[(rng.at(i, 0) % 6) as usize] += 1;
        }
        let expected = [n as f64 / 6.0; 6];
        let fair = chi_square_test(&counts, &expected);
        assert!(fair.p_value > 0.01, "fair sampler rejected: {fair:?}");

        let mut biased = counts;
        biased[0] += 2000;
        biased[1] -= 2000;
        let bad = chi_square_test(&biased, &expected);
        assert!(bad.p_value < 1e-6, "biased sampler accepted: {bad:?}");
    }
}
