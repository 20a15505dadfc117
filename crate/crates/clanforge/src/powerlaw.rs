//! Power-law exponent estimation and model curve generation.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};

/// Result of a maximum-likelihood power-law fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitReport {
    pub gamma: f64,
    pub xmin: usize,
    /// Number of degrees >= xmin used by the fit.
    #[serde(rename = "n")]
    pub sample_count: usize,
}

/// Continuous maximum-likelihood estimate of the power-law exponent:
/// gamma = 1 + n * [sum ln(x_i / xmin)]^-1 over the x_i >= xmin.
///
/// Zero degrees are excluded before fitting.
pub fn fit_gamma_mle(degrees: &[usize], xmin: usize) -> Result<FitReport> {
    if xmin == 0 {
        return Err(Error::InvalidArgument("xmin must be positive".into()));
    }
    let retained: Vec<usize> = degrees
        .iter()
        .copied()
        .filter(|&d| d >= xmin && d > 0)
        .collect();
    if retained.len() < 2 {
        return Err(Error::DegenerateFit(format!(
            "only {} degrees >= xmin={xmin}; need at least 2",
            retained.len()
        )));
    }
    let log_sum: f64 = retained
        .iter()
        .map(|&d| (d as f64 / xmin as f64).ln())
        .sum();
    if log_sum <= 0.0 {
        return Err(Error::DegenerateFit(format!(
            "all retained degrees equal xmin={xmin}; exponent undefined"
        )));
    }
    Ok(FitReport {
        gamma: 1.0 + retained.len() as f64 / log_sum,
        xmin,
        sample_count: retained.len(),
    })
}

/// Unnormalized model curve k^(-gamma) at the requested degrees.
pub fn model_pmf(gamma: f64, degrees: &[usize]) -> Result<BTreeMap<usize, f64>> {
    if gamma <= 1.0 {
        return Err(Error::InvalidArgument(format!(
            "gamma must exceed 1, got {gamma}"
        )));
    }
    degrees
        .iter()
        .map(|&k| {
            if k < 1 {
                Err(Error::InvalidArgument("model degree must be >= 1".into()))
            } else {
                Ok((k, (k as f64).powf(-gamma)))
            }
        })
        .collect()
}
