use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Least-squares line `tau = slope * n + intercept`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LightConeFit {
    pub slope: f64,
    pub intercept: f64,
    /// `(n, tau - fitted)` for every fitted distance.
    pub residuals: Vec<(usize, f64)>,
    pub rms_residual: f64,
    pub n_range: (usize, usize),
}

/// Ordinary least squares of `tau` against `n` over the inclusive `n_range`.
pub fn light_cone_fit(taus: &BTreeMap<usize, Option<f64>>, n_range: (usize, usize)) -> Result<LightConeFit> {
    let (lo, hi) = n_range;
    if hi <= lo {
        return Err(Error::InvalidArgument(format!("fit range {n_range:?} is empty")));
    }
    let missing: Vec<usize> = (lo..=hi)
        .filter(|n| !matches!(taus.get(n), Some(Some(t)) if t.is_finite()))
        .collect();
    if !missing.is_empty() {
        return Err(Error::MissingViolation(missing));
    }
    let pts: Vec<(f64, f64)> = (lo..=hi).map(|n| (n as f64, taus[&n].unwrap())).collect();
    let m = pts.len() as f64;
    let mean_n = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let mean_t = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mean_n).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mean_n) * (p.1 - mean_t)).sum();
    let slope = sxy / sxx;
    let intercept = mean_t - slope * mean_n;
    let residuals: Vec<(usize, f64)> = (lo..=hi)
        .zip(&pts)
        .map(|(n, p)| (n, p.1 - (slope * p.0 + intercept)))
        .collect();
    let rms_residual = (residuals.iter().map(|r| r.1 * r.1).sum::<f64>() / m).sqrt();
    Ok(LightConeFit {
        slope,
        intercept,
        residuals,
        rms_residual,
        n_range,
    })
}
