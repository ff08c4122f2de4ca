use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Maximum of a function on a uniform grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridMax {
    pub argmax: f64,
    pub max: f64,
    pub points: usize,
}

/// Evaluates `f` on `lo, lo + step, …, hi` (the last point is `hi` itself) and
/// returns the largest value. Ties go to the smaller abscissa, so the result
/// does not depend on how the grid is split across threads.
pub fn grid_scan_max<F>(f: F, lo: f64, hi: f64, step: f64) -> Result<GridMax>
where
    F: Fn(f64) -> f64 + Sync,
{
    if !lo.is_finite() || !hi.is_finite() || lo > hi || step.is_nan() || step <= 0.0 {
        return Err(Error::domain(format!("bad grid [{lo}, {hi}] with step {step}")));
    }
    let intervals = ((hi - lo) / step).ceil() as usize;
    let points = intervals + 1;
    let at = |k: usize| if k == intervals { hi } else { lo + k as f64 * step };
    let (k, max) = (0..points).into_par_iter().map(|k| (k, f(at(k)))).reduce(
        || (usize::MAX, f64::NEG_INFINITY),
        |a, b| {
            if b.1 > a.1 || (b.1 == a.1 && b.0 < a.0) {
                b
            } else {
                a
            }
        },
    );
    Ok(GridMax { argmax: at(k), max, points })
}

/// One-sample Kolmogorov–Smirnov result.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    pub statistic: f64,
    pub p_value: f64,
    pub samples: usize,
}

/// `sup |F_emp − F|` for the given continuous CDF.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> Result<KsResult> {
    if samples.is_empty() {
        return Err(Error::domain("KS test needs at least one sample"));
    }
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let m = xs.len() as f64;
    let d = xs
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / m).max((i as f64 + 1.0) / m - f)
        })
        .fold(0.0, f64::max);
    Ok(KsResult { statistic: d, p_value: kolmogorov_pvalue(d, xs.len()), samples: xs.len() })
}

/// Asymptotic p-value `Q_KS((√m + 0.12 + 0.11/√m)·d)`.
pub fn kolmogorov_pvalue(d: f64, m: usize) -> f64 {
    let sm = (m as f64).sqrt();
    let lambda = (sm + 0.12 + 0.11 / sm) * d;
    if lambda < 1e-3 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * lambda * lambda).exp();
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}
