//! Small numeric helpers: binomial tails, the normal CDF and Hoeffding bands.

/// Half-width `sqrt(ln(2/delta) / (2n))` of a two-sided Hoeffding interval
/// for a mean of `n` bounded samples. Infinite for `n = 0`.
pub fn hoeffding_band(n: u64, delta: f64) -> f64 {
    if n == 0 {
        return f64::INFINITY;
    }
    libm::sqrt(libm::log(2.0 / delta) / (2.0 * n as f64))
}

/// `P(X = k)` for `X ~ Binomial(n, p)`.
pub fn binomial_pmf(n: u64, k: u64, p: f64) -> f64 {
    if k > n {
        return 0.0;
    }
    if p <= 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    if p >= 1.0 {
        return if k == n { 1.0 } else { 0.0 };
    }
    let (nf, kf) = (n as f64, k as f64);
    let ln = libm::lgamma(nf + 1.0) - libm::lgamma(kf + 1.0) - libm::lgamma(nf - kf + 1.0)
        + kf * libm::log(p)
        + (nf - kf) * libm::log1p(-p);
    libm::exp(ln)
}

/// `P(X <= k)` for `X ~ Binomial(n, p)`.
pub fn binomial_cdf(n: u64, k: u64, p: f64) -> f64 {
    if k >= n {
        return 1.0;
    }
    // sum whichever tail is lighter
    if (k as f64) < n as f64 * p {
        (0..=k).map(|i| binomial_pmf(n, i, p)).sum::<f64>().min(1.0)
    } else {
        (1.0 - (k + 1..=n).map(|i| binomial_pmf(n, i, p)).sum::<f64>()).max(0.0)
    }
}

/// `P(X <= t)` for real `t`.
pub fn binomial_cdf_real(n: u64, t: f64, p: f64) -> f64 {
    if t < 0.0 {
        0.0
    } else {
        binomial_cdf(n, libm::floor(t) as u64, p)
    }
}

/// `P(X >= t)` for real `t`.
pub fn binomial_sf_real(n: u64, t: f64, p: f64) -> f64 {
    let k = libm::ceil(t);
    if k <= 0.0 {
        1.0
    } else if k > n as f64 {
        0.0
    } else {
        1.0 - binomial_cdf(n, k as u64 - 1, p)
    }
}

/// Standard normal CDF.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / core::f64::consts::SQRT_2)
}

/// Best rational approximation `num/den` of `value` in `[0, 1]` with
/// `den <= max_den`, by walking the Stern-Brocot tree.
pub fn rational_approx(value: f64, max_den: u32) -> (u32, u32) {
    let (mut lo_n, mut lo_d, mut hi_n, mut hi_d) = (0u32, 1u32, 1u32, 1u32);
    loop {
        let (mid_n, mid_d) = (lo_n + hi_n, lo_d + hi_d);
        if mid_d > max_den {
            break;
        }
        let mid = mid_n as f64 / mid_d as f64;
        if (mid - value).abs() < 1e-15 {
            return (mid_n, mid_d);
        }
        if value < mid {
            hi_n = mid_n;
            hi_d = mid_d;
        } else {
            lo_n = mid_n;
            lo_d = mid_d;
        }
    }
    let lo = lo_n as f64 / lo_d as f64;
    let hi = hi_n as f64 / hi_d as f64;
    if (value - lo).abs() <= (hi - value).abs() {
        (lo_n, lo_d)
    } else {
        (hi_n, hi_d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::distribution::{Binomial, Discrete, DiscreteCDF};

    #[test]
    fn binomial_matches_statrs() {
        for &(n, p) in &[(882u64, 0.4), (882, 0.5), (10, 0.01), (1, 0.99), (50, 0.3)] {
            let oracle = Binomial::new(p, n).unwrap();
            for k in 0..=n {
                assert!((binomial_pmf(n, k, p) - oracle.pmf(k)).abs() < 1e-12, "pmf n={n} k={k}");
                assert!((binomial_cdf(n, k, p) - oracle.cdf(k)).abs() < 1e-10, "cdf n={n} k={k}");
            }
        }
    }

    #[test]
    fn degenerate_probabilities() {
        assert_eq!(binomial_pmf(5, 0, 0.0), 1.0);
        assert_eq!(binomial_pmf(5, 5, 1.0), 1.0);
        assert_eq!(binomial_cdf(5, 4, 1.0), 0.0);
        assert_eq!(binomial_sf_real(5, 0.0, 0.3), 1.0);
        assert_eq!(binomial_sf_real(5, 5.5, 0.3), 0.0);
    }

    #[test]
    fn normal_cdf_values() {
        assert!((normal_cdf(0.0) - 0.5).abs() < 1e-15);
        assert!((normal_cdf(3.0) - 0.998_650_101_968_369_9).abs() < 1e-12);
    }

    #[test]
    fn hoeffding_band_shrinks() {
        assert!(hoeffding_band(0, 0.01).is_infinite());
        let b = hoeffding_band(1000, 0.01);
        assert!((b - (libm::log(200.0) / 2000.0).sqrt()).abs() < 1e-15);
        assert!(hoeffding_band(4000, 0.01) < b);
    }

    #[test]
    fn rational_approximations() {
        assert_eq!(rational_approx(0.45, 1000), (9, 20));
        assert_eq!(rational_approx(0.9, 1000), (9, 10));
        assert_eq!(rational_approx(0.0, 10), (0, 1));
        assert_eq!(rational_approx(1.0, 10), (1, 1));
        let (n, d) = rational_approx(core::f64::consts::FRAC_1_SQRT_2, 100);
        assert!((n as f64 / d as f64 - core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-3);
    }
}
