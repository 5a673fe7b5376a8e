use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Power law `y ≈ e^intercept · n^slope` fitted on log-log axes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// First and last `n` used.
    pub window: (f64, f64),
}

/// Ordinary least squares of `log y` on `log n`.
pub fn fit_rate(points: &[(f64, f64)]) -> Result<RateFit> {
    if points.len() < 2 {
        return Err(Error::InvalidInput(
            "a rate fit needs at least two points".into(),
        ));
    }
    if let Some(&(n, y)) = points.iter().find(|(n, y)| !(*y > 0.0) || !(*n > 0.0)) {
        return Err(Error::InvalidInput(format!(
            "rate fits need positive values, got y = {y} at n = {n}"
        )));
    }
    let m = points.len() as f64;
    let logs: Vec<(f64, f64)> = points.iter().map(|&(n, y)| (n.ln(), y.ln())).collect();
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / m;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if !(sxx > 0.0) {
        return Err(Error::InvalidInput(
            "rate fit needs at least two distinct n".into(),
        ));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = logs
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum();
    let ss_tot: f64 = logs.iter().map(|p| (p.1 - my).powi(2)).sum();
    let r_squared = if ss_tot > 0.0 {
        1.0 - ss_res / ss_tot
    } else {
        1.0
    };
    Ok(RateFit {
        slope,
        intercept,
        r_squared,
        window: (points[0].0, points[points.len() - 1].0),
    })
}

/// Fit of a series indexed by `n = 1, 2, …` over its tail `[T/2, T]`.
pub fn fit_tail(series: &[f64]) -> Result<RateFit> {
    let t = series.len();
    let start = (t / 2).max(1);
    let points: Vec<(f64, f64)> = (start..=t).map(|n| (n as f64, series[n - 1])).collect();
    fit_rate(&points)
}
