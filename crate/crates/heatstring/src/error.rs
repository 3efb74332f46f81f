//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("grid undersampled: M = {m} panels but 2N+1 = {needed} required")]
    Undersampled { m: usize, needed: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("index out of range: {0}")]
    OutOfRange(String),

    #[error("series diverges: need s > beta + 1/2, got s = {s}, beta = {beta}")]
    DivergentSeries { s: f64, beta: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("eigen solve for n = {n} missed residual target: |p(lambda)| = {residual:e}")]
    Conditioning { n: usize, residual: f64 },

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("integrator instability at t = {t}: mode {mode} is non-finite")]
    Instability { t: f64, mode: usize },

    #[error("rk4 step too large: dt*N^2 = {0} exceeds the stability margin 2.8")]
    StepTooLarge(f64),

    #[error("duhamel step too large: dt*N^2 = {0} exceeds the quadrature margin")]
    DuhamelStep(f64),

    #[error("picard iteration diverged: contraction ratio {ratio} >= 1 for 3 consecutive steps")]
    NonContraction { ratio: f64 },

    #[error("fit window [{lo}, {hi}] has {count} usable points; need at least 3 positive values")]
    FitWindow { lo: f64, hi: f64, count: usize },

    #[error("non-positive value {value} at t = {t} inside fit window")]
    NonPositiveFitValue { t: f64, value: f64 },
}
