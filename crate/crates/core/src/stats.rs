//! Correlation, Fisher-z confidence intervals and the two-proportion z-test.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StatsError {
    #[error("need at least {need} observations, got {got}")]
    InsufficientData { need: usize, got: usize },
    #[error("vectors have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("zero variance in {0}")]
    ZeroVariance(&'static str),
    #[error("non-finite input value")]
    NonFinite,
    #[error("{what} = {value} is outside its domain")]
    Domain { what: &'static str, value: f64 },
    #[error("group sizes must be positive")]
    DegenerateGroups,
}

fn std_normal() -> Normal {
    Normal::new(0.0, 1.0).expect("unit normal")
}

/// Pearson product-moment correlation.
pub fn pearson_r(xs: &[f64], ys: &[f64]) -> Result<f64, StatsError> {
    if xs.len() != ys.len() {
        return Err(StatsError::LengthMismatch(xs.len(), ys.len()));
    }
    let n = xs.len();
    if n < 3 {
        return Err(StatsError::InsufficientData { need: 3, got: n });
    }
    if xs.iter().chain(ys).any(|v| !v.is_finite()) {
        return Err(StatsError::NonFinite);
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        let dx = x - mx;
        let dy = y - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if sxx == 0.0 {
        return Err(StatsError::ZeroVariance("xs"));
    }
    if syy == 0.0 {
        return Err(StatsError::ZeroVariance("ys"));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// Two-sided normal quantile for a confidence level, e.g. 1.96 at 0.95.
pub fn normal_quantile_two_sided(level: f64) -> Result<f64, StatsError> {
    if !(level > 0.0 && level < 1.0) {
        return Err(StatsError::Domain {
            what: "level",
            value: level,
        });
    }
    Ok(std_normal().inverse_cdf(0.5 + level / 2.0))
}

/// Confidence interval for a correlation via the Fisher z-transform.
pub fn fisher_interval(r: f64, n: usize, level: f64) -> Result<(f64, f64), StatsError> {
    if r.is_nan() || r.abs() >= 1.0 {
        return Err(StatsError::Domain {
            what: "r",
            value: r,
        });
    }
    if n < 4 {
        return Err(StatsError::InsufficientData { need: 4, got: n });
    }
    let q = normal_quantile_two_sided(level)?;
    let z = r.atanh();
    let half = q / ((n - 3) as f64).sqrt();
    Ok(((z - half).tanh(), (z + half).tanh()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub r: f64,
    pub n: usize,
    pub ci_low: f64,
    pub ci_high: f64,
    pub level: f64,
}

impl CorrelationReport {
    pub const DEFAULT_LEVEL: f64 = 0.95;

    /// Interval for `r`. A perfect correlation gets the degenerate interval
    /// `(r, r)`.
    pub fn new(r: f64, n: usize, level: f64) -> Result<Self, StatsError> {
        let (ci_low, ci_high) = if r.abs() == 1.0 {
            if n < 4 {
                return Err(StatsError::InsufficientData { need: 4, got: n });
            }
            normal_quantile_two_sided(level)?;
            (r, r)
        } else {
            fisher_interval(r, n, level)?
        };
        Ok(CorrelationReport {
            r,
            n,
            ci_low,
            ci_high,
            level,
        })
    }
}

/// Alternative hypothesis of a proportion test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Tail {
    /// First group's proportion exceeds the second's.
    Greater,
    Less,
    TwoSided,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProportionTest {
    pub difference: f64,
    pub z: f64,
    pub p_value: f64,
}

/// One-tailed (`Tail::Greater`) pooled two-proportion z-test without
/// continuity correction.
pub fn two_proportion_test(
    k1: u64,
    n1: u64,
    k2: u64,
    n2: u64,
) -> Result<ProportionTest, StatsError> {
    two_proportion_test_with(k1, n1, k2, n2, Tail::Greater, false)
}

pub fn two_proportion_test_with(
    k1: u64,
    n1: u64,
    k2: u64,
    n2: u64,
    tail: Tail,
    continuity: bool,
) -> Result<ProportionTest, StatsError> {
    if n1 == 0 || n2 == 0 {
        return Err(StatsError::DegenerateGroups);
    }
    if k1 > n1 || k2 > n2 {
        return Err(StatsError::Domain {
            what: "count",
            value: k1.max(k2) as f64,
        });
    }
    let (n1f, n2f) = (n1 as f64, n2 as f64);
    let difference = k1 as f64 / n1f - k2 as f64 / n2f;
    let pooled = (k1 + k2) as f64 / (n1f + n2f);
    let se = (pooled * (1.0 - pooled) * (1.0 / n1f + 1.0 / n2f)).sqrt();
    let mut num = difference;
    if continuity {
        let c = 0.5 * (1.0 / n1f + 1.0 / n2f);
        num = difference.signum() * (difference.abs() - c).max(0.0);
    }
    // se is zero only when both groups are all-0 or all-1, i.e. no difference.
    let z = if se == 0.0 { 0.0 } else { num / se };
    let phi = std_normal();
    let p_value = match tail {
        Tail::Greater => phi.sf(z),
        Tail::Less => phi.cdf(z),
        Tail::TwoSided => (2.0 * phi.sf(z.abs())).min(1.0),
    };
    Ok(ProportionTest {
        difference,
        z,
        p_value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pearson_examples() {
        let xs = [1.0, 4.0, 2.0, 8.0, 5.0];
        assert!((pearson_r(&xs, &xs).unwrap() - 1.0).abs() < 1e-15);
        let ys: Vec<f64> = xs.iter().map(|x| -2.0 * x + 7.0).collect();
        assert!((pearson_r(&xs, &ys).unwrap() + 1.0).abs() < 1e-15);
        // cov = 1.5, sxx = 2, syy = 6 -> 1.5/sqrt(3) = 0.8660254...
        let r = pearson_r(&[1.0, 2.0, 3.0], &[2.0, 2.0, 5.0]).unwrap();
        assert!((r - 3.0_f64.sqrt() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn pearson_errors() {
        assert!(matches!(
            pearson_r(&[1.0, 2.0], &[1.0, 2.0]),
            Err(StatsError::InsufficientData { .. })
        ));
        assert_eq!(
            pearson_r(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]),
            Err(StatsError::ZeroVariance("xs"))
        );
        assert_eq!(
            pearson_r(&[1.0, 2.0, 3.0], &[4.0, 4.0, 4.0]),
            Err(StatsError::ZeroVariance("ys"))
        );
        assert!(pearson_r(&[1.0, 2.0, 3.0], &[1.0, 2.0]).is_err());
        assert_eq!(
            pearson_r(&[1.0, f64::NAN, 3.0], &[1.0, 2.0, 3.0]),
            Err(StatsError::NonFinite)
        );
    }

    #[test]
    fn fisher_zero_is_symmetric() {
        let (lo, hi) = fisher_interval(0.0, 30, 0.95).unwrap();
        assert!((lo + hi).abs() < 1e-15);
        assert!(lo < 0.0);
    }

    #[test]
    fn fisher_errors() {
        assert!(fisher_interval(1.0, 30, 0.95).is_err());
        assert!(fisher_interval(-1.0, 30, 0.95).is_err());
        assert!(fisher_interval(0.5, 3, 0.95).is_err());
        assert!(fisher_interval(0.5, 30, 1.0).is_err());
    }

    #[test]
    fn quantile_is_one_point_nine_six() {
        assert!((normal_quantile_two_sided(0.95).unwrap() - 1.959_963_984_540_054).abs() < 1e-9);
    }

    #[test]
    fn proportion_examples() {
        let t = two_proportion_test(20, 40, 10, 20).unwrap();
        assert_eq!(t.z, 0.0);
        assert!((t.p_value - 0.5).abs() < 1e-12);

        // pooled p = 0.5, se = sqrt(0.25 * 0.04) = 0.1, z = 2, 1 - Phi(2) = 0.0227501...
        let t = two_proportion_test(30, 50, 20, 50).unwrap();
        assert!((t.difference - 0.2).abs() < 1e-15);
        assert!((t.z - 2.0).abs() < 1e-12);
        assert!((t.p_value - 0.022_750_131_948_179).abs() < 1e-9);

        let t = two_proportion_test(50, 50, 0, 50).unwrap();
        assert_eq!(t.difference, 1.0);
        assert!(t.p_value < 1e-20);

        let two = two_proportion_test_with(30, 50, 20, 50, Tail::TwoSided, false).unwrap();
        assert!((two.p_value - 2.0 * 0.022_750_131_948_179).abs() < 1e-9);
        let less = two_proportion_test_with(30, 50, 20, 50, Tail::Less, false).unwrap();
        assert!((less.p_value - (1.0 - 0.022_750_131_948_179)).abs() < 1e-9);
    }

    #[test]
    fn continuity_correction_shrinks_z() {
        let plain = two_proportion_test(30, 50, 20, 50).unwrap();
        let corr = two_proportion_test_with(30, 50, 20, 50, Tail::Greater, true).unwrap();
        // (0.2 - 0.02) / 0.1
        assert!((corr.z - 1.8).abs() < 1e-12);
        assert!(corr.p_value > plain.p_value);
    }

    #[test]
    fn proportion_errors() {
        assert_eq!(
            two_proportion_test(0, 0, 1, 2),
            Err(StatsError::DegenerateGroups)
        );
        assert!(two_proportion_test(3, 2, 1, 2).is_err());
    }

    #[test]
    fn perfect_correlation_report() {
        let rep = CorrelationReport::new(-1.0, 10, 0.95).unwrap();
        assert_eq!((rep.ci_low, rep.ci_high), (-1.0, -1.0));
    }
}
