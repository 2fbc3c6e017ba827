//! Summary statistics over replicate values.

use statrs::distribution::{ContinuousCDF, StudentsT};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum StatsError {
    #[error("summary statistics need at least 2 values, got {0}")]
    TooFewValues(usize),
}

/// Mean, population standard deviation (divisor n), and the half-width of
/// the 95% confidence interval built from a Student t quantile with n-1
/// degrees of freedom.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummaryStats {
    pub mean: f64,
    pub std: f64,
    pub ci_halfwidth: f64,
}

pub fn summary_stats(values: &[f64]) -> Result<SummaryStats, StatsError> {
    let n = values.len();
    if n < 2 {
        return Err(StatsError::TooFewValues(n));
    }
    let nf = n as f64;
    let mean = values.iter().sum::<f64>() / nf;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / nf;
    let std = var.sqrt();
    let t = t_quantile_975(nf - 1.0);
    Ok(SummaryStats {
        mean,
        std,
        ci_halfwidth: t * std / nf.sqrt(),
    })
}

/// Two-sided 95% Student t critical value with `df` degrees of freedom.
pub fn t_quantile_975(df: f64) -> f64 {
    StudentsT::new(0.0, 1.0, df)
        .expect("valid t distribution")
        .inverse_cdf(0.975)
}
