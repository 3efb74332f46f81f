//! Spectral and grid-side state containers.

use crate::params::ModelParams;

/// Real Fourier coefficients of one instant of the truncated system.
///
/// `u[k]`, `v[k]`, `theta[k]` hold `û_{k+1}`, `v̂_{k+1} = û'_{k+1}`,
/// `θ̂_{k+1}` for modes `1..=N`; `theta0` is the mean temperature `θ̂₀`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralState {
    pub theta0: f64,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub theta: Vec<f64>,
}

impl SpectralState {
    pub fn zero(n_modes: usize) -> Self {
        Self {
            theta0: 0.0,
            u: vec![0.0; n_modes],
            v: vec![0.0; n_modes],
            theta: vec![0.0; n_modes],
        }
    }

    pub fn n_modes(&self) -> usize {
        self.u.len()
    }

    /// Lengths consistent with `params` and all entries finite.
    pub fn is_consistent(&self, params: &ModelParams) -> bool {
        let n = params.n_modes;
        self.u.len() == n
            && self.v.len() == n
            && self.theta.len() == n
            && self.theta0.is_finite()
            && self
                .u
                .iter()
                .chain(&self.v)
                .chain(&self.theta)
                .all(|x| x.is_finite())
    }

    /// The per-mode vector `(n û_n, v̂_n, θ̂_n)` for `n` in `1..=N`.
    pub fn mode_vector(&self, n: usize) -> [f64; 3] {
        [n as f64 * self.u[n - 1], self.v[n - 1], self.theta[n - 1]]
    }
}

/// Real-space samples on the uniform grid `x_j = jπ/M`, `j = 0..=M`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    pub x: Vec<f64>,
    pub u: Vec<f64>,
    pub u_t: Vec<f64>,
    pub theta: Vec<f64>,
}

impl GridField {
    /// Number of panels `M` (one less than the number of samples).
    pub fn panels(&self) -> usize {
        self.x.len().saturating_sub(1)
    }
}

/// Scalar diagnostics recorded along a trajectory.
///
/// `hs_u_x`, `hs_u_t`, `hs_theta_dev` are the coefficient-space `H^s`
/// seminorms of `(n û_n)`, `(v̂_n)`, `(θ̂_n)`; `theta0_dev = |θ̂₀ − θ_∞|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormRecord {
    pub t: f64,
    pub energy: f64,
    pub hs_u_x: f64,
    pub hs_u_t: f64,
    pub hs_theta_dev: f64,
    pub theta0_dev: f64,
}
