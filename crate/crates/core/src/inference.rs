//! Chi-square tail probabilities and the two deviance tests built on them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::loglinear::FitResult;

/// Deviance differences down to this far below zero are treated as convergence noise.
pub const NEGATIVE_DEVIANCE_SLACK: f64 = 1e-6;

const EPS: f64 = 1e-16;
const TINY: f64 = 1e-300;
const MAX_TERMS: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestOutcome {
    pub statistic: f64,
    pub df: usize,
    pub p_value: f64,
    /// `p_value >= alpha`: the data does not reject the (smaller) model.
    pub supported: bool,
}

impl TestOutcome {
    /// With `df == 0` the statistic is forced to 0 and the p-value to 1.
    pub fn new(statistic: f64, df: usize, alpha: f64) -> Self {
        let (statistic, p_value) = if df == 0 {
            (0.0, 1.0)
        } else {
            let stat = statistic.max(0.0);
            (stat, chisq_sf(stat, df).unwrap_or(0.0))
        };
        TestOutcome { statistic, df, p_value, supported: p_value >= alpha }
    }
}

/// `P(χ²_df > x)`, computed as `Q(df/2, x/2)`.
pub fn chisq_sf(x: f64, df: usize) -> Result<f64> {
    if df == 0 {
        return Err(Error::ZeroDf);
    }
    if x.is_nan() || x < 0.0 {
        return Err(Error::NegativeStatistic(x));
    }
    if x == f64::INFINITY {
        return Ok(0.0);
    }
    Ok(gamma_q(df as f64 / 2.0, x / 2.0))
}

/// Regularized upper incomplete gamma `Q(a, x) = Γ(a, x) / Γ(a)` for `a > 0`, `x >= 0`.
///
/// Series for `x < a + 1`, Lentz continued fraction otherwise.
pub fn gamma_q(a: f64, x: f64) -> f64 {
    debug_assert!(a > 0.0 && x >= 0.0);
    if x == 0.0 {
        return 1.0;
    }
    if x < a + 1.0 {
        (1.0 - lower_series(a, x)).clamp(0.0, 1.0)
    } else {
        upper_continued_fraction(a, x).clamp(0.0, 1.0)
    }
}

fn prefactor(a: f64, x: f64) -> f64 {
    (a * x.ln() - x - ln_gamma(a)).exp()
}

fn lower_series(a: f64, x: f64) -> f64 {
    let mut ap = a;
    let mut term = 1.0 / a;
    let mut sum = term;
    for _ in 0..MAX_TERMS {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if term.abs() < sum.abs() * EPS {
            break;
        }
    }
    sum * prefactor(a, x)
}

fn upper_continued_fraction(a: f64, x: f64) -> f64 {
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_TERMS {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < EPS {
            break;
        }
    }
    prefactor(a, x) * h
}

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Γ(x)` for `x > 0` (Lanczos, g = 7).
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // Reflection.
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let t = x + LANCZOS_G + 0.5;
    let series = LANCZOS[1..]
        .iter()
        .enumerate()
        .fold(LANCZOS[0], |acc, (i, c)| acc + c / (x + i as f64 + 1.0));
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + series.ln()
}

/// Tests a converged fit against the saturated model.
pub fn goodness_of_fit(fit: &FitResult, alpha: f64) -> Result<TestOutcome> {
    check_alpha(alpha)?;
    if !fit.converged {
        return Err(Error::NotConverged(format!("{:?}", fit.model)));
    }
    Ok(TestOutcome::new(fit.g2, fit.df, alpha))
}

/// Compares a model against a larger model whose closure contains it.
///
/// Equal degrees of freedom (necessarily the same model when nested) give statistic 0, p 1.
pub fn deviance_difference(smaller: &FitResult, larger: &FitResult, alpha: f64) -> Result<TestOutcome> {
    check_alpha(alpha)?;
    for fit in [smaller, larger] {
        if !fit.converged {
            return Err(Error::NotConverged(format!("{:?}", fit.model)));
        }
    }
    if !larger.model.contains_model(&smaller.model) {
        return Err(Error::NotNested(format!("{:?} is not within {:?}", smaller.model, larger.model)));
    }
    if smaller.df < larger.df {
        return Err(Error::NotNested(format!("df {} < {}", smaller.df, larger.df)));
    }
    let statistic = smaller.g2 - larger.g2;
    if statistic < -NEGATIVE_DEVIANCE_SLACK {
        return Err(Error::NegativeStatistic(statistic));
    }
    Ok(TestOutcome::new(statistic.max(0.0), smaller.df - larger.df, alpha))
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidAlpha(alpha))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn published_tail_values() {
        assert_eq!(chisq_sf(0.0, 7).unwrap(), 1.0);
        assert!((chisq_sf(9.6637, 1).unwrap() - 0.0018).abs() < 5e-4);
        assert!((chisq_sf(18.316, 16).unwrap() - 0.305).abs() < 5e-3);
        assert!((chisq_sf(3.0037, 1).unwrap() - 0.0830).abs() < 5e-4);
    }

    #[test]
    fn two_df_closed_form() {
        for x in [0.01, 0.5, 1.0, 2.0, 3.9, 10.0, 50.0, 300.0] {
            assert!((chisq_sf(x, 2).unwrap() - (-x / 2.0).exp()).abs() < 1e-12, "x = {x}");
        }
    }

    #[test]
    fn ln_gamma_integers_and_half() {
        let mut fact = 1.0f64;
        for n in 1..20 {
            assert!((ln_gamma(n as f64) - fact.ln()).abs() < 1e-12, "n = {n}");
            fact *= n as f64;
        }
        assert!((ln_gamma(0.5) - std::f64::consts::PI.sqrt().ln()).abs() < 1e-13);
    }

    #[test]
    fn domain_errors() {
        assert_eq!(chisq_sf(1.0, 0), Err(Error::ZeroDf));
        assert_eq!(chisq_sf(-1.0, 3), Err(Error::NegativeStatistic(-1.0)));
        assert_eq!(chisq_sf(f64::INFINITY, 3), Ok(0.0));
    }

    #[test]
    fn zero_df_outcome_is_trivially_supported() {
        let o = TestOutcome::new(12.0, 0, 0.05);
        assert_eq!((o.statistic, o.p_value, o.supported), (0.0, 1.0, true));
    }
}
