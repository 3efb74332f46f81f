//! Fourier synthesis/analysis, energy and weighted sequence norms.
//!
//! Conventions on `(0, π)`: `u(x) = Σ û_n sin(nx)`, `u_t(x) = Σ v̂_n sin(nx)`,
//! `θ(x) = θ̂₀ + Σ θ̂_n cos(nx)`. Quadrature is the composite trapezoid rule
//! on `M + 1` uniform points, exact for the trigonometric band whenever
//! `M >= 2N + 1` (enforced), so analyse ∘ synthesize is the identity up to
//! rounding. No FFT: `O(MN)` direct summation at desk scale.

use std::f64::consts::PI;

use crate::params::ModelParams;
use crate::state::{GridField, SpectralState};
use crate::{Error, Result};

/// Sample the spectral state on the uniform grid.
pub fn synthesize(state: &SpectralState, params: &ModelParams) -> Result<GridField> {
    check_state(state, params)?;
    let m = params.grid_points;
    let h = PI / m as f64;
    let mut x = vec![0.0; m + 1];
    let mut u = vec![0.0; m + 1];
    let mut u_t = vec![0.0; m + 1];
    let mut theta = vec![state.theta0; m + 1];
    for j in 0..=m {
        let xj = j as f64 * h;
        x[j] = xj;
        for (k, ((&un, &vn), &tn)) in state.u.iter().zip(&state.v).zip(&state.theta).enumerate() {
            let n = (k + 1) as f64;
            let (sn, cn) = (n * xj).sin_cos();
            u[j] += un * sn;
            u_t[j] += vn * sn;
            theta[j] += tn * cn;
        }
    }
    // Dirichlet ends are exact in the basis; pin them against sin(nπ) rounding.
    u[0] = 0.0;
    u[m] = 0.0;
    u_t[0] = 0.0;
    u_t[m] = 0.0;
    x[m] = PI;
    Ok(GridField { x, u, u_t, theta })
}

/// Recover coefficients from grid samples by trapezoid quadrature.
///
/// Refuses grids with fewer than `2N + 1` panels (aliasing).
pub fn analyze(field: &GridField, params: &ModelParams) -> Result<SpectralState> {
    let m = field.panels();
    if m < 2 * params.n_modes + 1 {
        return Err(Error::Undersampled {
            m,
            needed: 2 * params.n_modes + 1,
        });
    }
    let len = m + 1;
    if field.u.len() != len || field.u_t.len() != len || field.theta.len() != len {
        return Err(Error::DimensionMismatch(format!(
            "field arrays must have {len} samples"
        )));
    }
    let h = PI / m as f64;
    let nn = params.n_modes;
    let mut state = SpectralState::zero(nn);
    state.theta0 = trapezoid(&field.theta, h) / PI;
    for n in 1..=nn {
        let mut su = 0.0;
        let mut sv = 0.0;
        let mut st = 0.0;
        for j in 0..=m {
            let w = if j == 0 || j == m { 0.5 } else { 1.0 };
            let (sn, cn) = (n as f64 * j as f64 * h).sin_cos();
            su += w * field.u[j] * sn;
            sv += w * field.u_t[j] * sn;
            st += w * field.theta[j] * cn;
        }
        state.u[n - 1] = 2.0 * h * su / PI;
        state.v[n - 1] = 2.0 * h * sv / PI;
        state.theta[n - 1] = 2.0 * h * st / PI;
    }
    Ok(state)
}

/// Total energy `E = ½∫u_t² + ½∫u_x² + ∫θ` in coefficient space:
/// `E = (π/4) Σ v̂_n² + (π/4) Σ n² û_n² + π θ̂₀`.
pub fn energy(state: &SpectralState, params: &ModelParams) -> f64 {
    assert!(
        state.n_modes() == params.n_modes,
        "state/params mode count mismatch"
    );
    let mut quad = 0.0;
    for (k, (&un, &vn)) in state.u.iter().zip(&state.v).enumerate() {
        let n = (k + 1) as f64;
        quad += vn * vn + n * n * un * un;
    }
    PI / 4.0 * quad + PI * state.theta0
}

/// Equilibrium temperature `θ_∞ = E(0)/π`.
pub fn theta_infinity(initial: &SpectralState, params: &ModelParams) -> f64 {
    energy(initial, params) / PI
}

/// Coefficient-space `H^s` seminorm `sqrt(Σ_{n>=1} n^{2s} c_n²)`;
/// `coeffs[k]` is the mode-`(k+1)` coefficient.
pub fn hs_seminorm(coeffs: &[f64], s: f64) -> f64 {
    assert!(s >= 0.0, "hs_seminorm requires s >= 0");
    coeffs
        .iter()
        .enumerate()
        .map(|(k, &c)| ((k + 1) as f64).powf(2.0 * s) * c * c)
        .sum::<f64>()
        .sqrt()
}

/// Trapezoid rule with uniform spacing `h`.
pub(crate) fn trapezoid(values: &[f64], h: f64) -> f64 {
    let m = values.len() - 1;
    let mut sum = 0.5 * (values[0] + values[m]);
    for v in &values[1..m] {
        sum += v;
    }
    sum * h
}

fn check_state(state: &SpectralState, params: &ModelParams) -> Result<()> {
    if state.u.len() != params.n_modes
        || state.v.len() != params.n_modes
        || state.theta.len() != params.n_modes
    {
        return Err(Error::DimensionMismatch(format!(
            "state has {} modes, params expect {}",
            state.u.len(),
            params.n_modes
        )));
    }
    Ok(())
}
