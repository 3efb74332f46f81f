//! Physical and numerical parameters.

use crate::{Error, Result};

/// Range of the Sobolev index required by the decay estimates.
pub const S_RANGE: (f64, f64) = (0.75, 1.0);

/// Model and discretization parameters.
///
/// `mu` is the wave/heat coupling constant, `a` the linearization
/// temperature, `n_modes` the Galerkin truncation `N`, `s` the Sobolev
/// index of the weighted norms and `grid_points` the number of panels `M`
/// of the uniform real-space grid on `[0, π]` (`M + 1` points including
/// both endpoints).
///
/// Fields are public plain data; [`ModelParams::new`] validates the
/// invariants (`mu > 0`, `a > 0`, `n_modes >= 1`, `M >= 2N+1`, and
/// `s ∈ (3/4, 1)` unless constructed through
/// [`ModelParams::with_unrestricted_s`]).
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    pub mu: f64,
    pub a: f64,
    pub n_modes: usize,
    pub s: f64,
    pub grid_points: usize,
    /// Set when `s` outside `(3/4, 1)` was explicitly requested
    /// (diagnostic norms at s = 0 or s = 1).
    pub s_unrestricted: bool,
}

impl ModelParams {
    /// Validated constructor; enforces `s ∈ (3/4, 1)`.
    pub fn new(mu: f64, a: f64, n_modes: usize, s: f64, grid_points: usize) -> Result<Self> {
        if !(s > S_RANGE.0 && s < S_RANGE.1) {
            return Err(Error::InvalidParameter(format!(
                "s = {s} outside (3/4, 1); use with_unrestricted_s for diagnostic norms"
            )));
        }
        Self::with_unrestricted_s(mu, a, n_modes, s, grid_points).map(|mut p| {
            p.s_unrestricted = false;
            p
        })
    }

    /// Constructor that allows any `s >= 0` (flagged); other invariants
    /// are still enforced.
    pub fn with_unrestricted_s(
        mu: f64,
        a: f64,
        n_modes: usize,
        s: f64,
        grid_points: usize,
    ) -> Result<Self> {
        if !(mu > 0.0) || !mu.is_finite() {
            return Err(Error::InvalidParameter(format!("mu = {mu} must be > 0")));
        }
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::InvalidParameter(format!("a = {a} must be > 0")));
        }
        if n_modes == 0 {
            return Err(Error::InvalidParameter("n_modes must be >= 1".into()));
        }
        if !(s >= 0.0) || !s.is_finite() {
            return Err(Error::InvalidParameter(format!("s = {s} must be >= 0")));
        }
        if grid_points < 2 * n_modes + 1 {
            return Err(Error::Undersampled {
                m: grid_points,
                needed: 2 * n_modes + 1,
            });
        }
        Ok(Self {
            mu,
            a,
            n_modes,
            s,
            grid_points,
            s_unrestricted: true,
        })
    }

    /// Same parameters with the linearization temperature replaced.
    pub fn with_a(&self, a: f64) -> Self {
        Self { a, ..self.clone() }
    }
}
