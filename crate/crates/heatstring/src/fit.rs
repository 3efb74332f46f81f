//! Exponential decay-rate fitting and log-log regression.

use crate::{Error, Result};

/// Result of an exponential fit `value ≈ C e^{−rate·t}` on a window.
///
/// `predicted_alpha` and `slowest_mode_rate` are filled by callers that
/// have the spectral context (the CLI's decay-fit command).
#[derive(Debug, Clone, Copy)]
pub struct DecayFit {
    pub window: (f64, f64),
    pub fitted_rate: f64,
    pub r_squared: f64,
    pub predicted_alpha: Option<f64>,
    pub slowest_mode_rate: Option<f64>,
}

/// Least-squares slope of `log(value)` against `t` over the window;
/// `fitted_rate = −slope`. Values inside the window must be positive.
pub fn fit_decay(series: &[(f64, f64)], window: (f64, f64)) -> Result<DecayFit> {
    let (lo, hi) = window;
    let mut ts = Vec::new();
    let mut logs = Vec::new();
    for &(t, v) in series {
        if t < lo || t > hi {
            continue;
        }
        if !(v > 0.0) {
            return Err(Error::NonPositiveFitValue { t, value: v });
        }
        ts.push(t);
        logs.push(v.ln());
    }
    if ts.len() < 3 {
        return Err(Error::FitWindow {
            lo,
            hi,
            count: ts.len(),
        });
    }
    let (slope, r2) = linear_regression(&ts, &logs);
    Ok(DecayFit {
        window,
        fitted_rate: -slope,
        r_squared: r2,
        predicted_alpha: None,
        slowest_mode_rate: None,
    })
}

/// Default fit window: the last half of the run minus the final 5%.
pub fn default_window(t_end: f64) -> (f64, f64) {
    (0.5 * t_end, 0.95 * t_end)
}

/// Window over which the series sits well above its late-time floor:
/// starts at `start`, ends where the value first drops below
/// `floor_mult ×` the measured floor (median of the last 5% of samples).
/// Falls back to the default window when nothing is above the floor.
pub fn window_above_floor(series: &[(f64, f64)], start: f64, floor_mult: f64) -> (f64, f64) {
    let t_end = series.last().map(|&(t, _)| t).unwrap_or(0.0);
    let tail_from = 0.95 * t_end;
    let mut tail: Vec<f64> = series
        .iter()
        .filter(|&&(t, _)| t >= tail_from)
        .map(|&(_, v)| v.abs())
        .collect();
    if tail.is_empty() {
        return default_window(t_end);
    }
    tail.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let floor = tail[tail.len() / 2];
    let cutoff = floor_mult * floor;
    let mut hi = t_end;
    for &(t, v) in series {
        if t > start && v.abs() <= cutoff {
            hi = t;
            break;
        }
    }
    if hi <= start {
        default_window(t_end)
    } else {
        (start, hi)
    }
}

/// Slope and r² of `log y` against `log x` (all `x, y > 0`).
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> Result<(f64, f64)> {
    if xs.len() != ys.len() || xs.len() < 3 {
        return Err(Error::FitWindow {
            lo: 0.0,
            hi: 0.0,
            count: xs.len(),
        });
    }
    let mut lx = Vec::with_capacity(xs.len());
    let mut ly = Vec::with_capacity(ys.len());
    for (&x, &y) in xs.iter().zip(ys) {
        if !(x > 0.0 && y > 0.0) {
            return Err(Error::NonPositiveFitValue { t: x, value: y });
        }
        lx.push(x.ln());
        ly.push(y.ln());
    }
    Ok(linear_regression(&lx, &ly))
}

/// Ordinary least squares `(slope, r²)`.
fn linear_regression(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    let slope = sxy / sxx;
    let ss_res = syy - slope * sxy;
    let r2 = if syy <= f64::EPSILON * (1.0 + my * my) {
        1.0
    } else {
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    };
    (slope, r2)
}
