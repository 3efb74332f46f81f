//! Reproducible initial-condition families.
//!
//! All presets keep the coefficient decay `û_n = O(n^{-3})`,
//! `v̂_n, θ̂_n = O(n^{-2})` so the synthesized fields stay in the
//! regularity class the analysis assumes.

use std::f64::consts::PI;

use rand::prelude::*;
use rand_chacha::ChaCha12Rng;

use crate::params::ModelParams;
use crate::spectral::{analyze, hs_seminorm};
use crate::state::{GridField, SpectralState};
use crate::Result;

/// Named initial-condition presets.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialCondition {
    /// Flat string at uniform temperature: the equilibrium itself.
    Equilibrium { theta0: f64 },
    /// Explicit leading coefficients (zero-padded to the truncation).
    FourierPolynomial {
        theta0: f64,
        u: Vec<f64>,
        v: Vec<f64>,
        theta: Vec<f64>,
    },
    /// Gaussian displacement bump centered at π/2 (sampled on the grid
    /// and analyzed, so it exercises the quadrature path).
    Bump {
        theta0: f64,
        amplitude: f64,
        width: f64,
    },
    /// Seeded random coefficients with power-law decay `n^{-decay}` on û
    /// and `n^{-(decay-1)}` on v̂, θ̂.
    RandomSmooth {
        theta0: f64,
        amplitude: f64,
        seed: u64,
        decay: f64,
    },
}

/// Build the spectral state of a preset.
pub fn build(ic: &InitialCondition, params: &ModelParams) -> Result<SpectralState> {
    let nn = params.n_modes;
    match ic {
        InitialCondition::Equilibrium { theta0 } => {
            let mut st = SpectralState::zero(nn);
            st.theta0 = *theta0;
            Ok(st)
        }
        InitialCondition::FourierPolynomial {
            theta0,
            u,
            v,
            theta,
        } => {
            let mut st = SpectralState::zero(nn);
            st.theta0 = *theta0;
            for (dst, src) in st.u.iter_mut().zip(u) {
                *dst = *src;
            }
            for (dst, src) in st.v.iter_mut().zip(v) {
                *dst = *src;
            }
            for (dst, src) in st.theta.iter_mut().zip(theta) {
                *dst = *src;
            }
            Ok(st)
        }
        InitialCondition::Bump {
            theta0,
            amplitude,
            width,
        } => {
            let m = params.grid_points;
            let h = PI / m as f64;
            let x: Vec<f64> = (0..=m).map(|j| j as f64 * h).collect();
            let bump = |xi: f64| (-((xi - PI / 2.0) / width).powi(2)).exp();
            let field = GridField {
                u: x.iter()
                    .map(|&xi| amplitude * xi.sin() * bump(xi))
                    .collect(),
                u_t: vec![0.0; m + 1],
                theta: x
                    .iter()
                    .map(|&xi| theta0 + 0.5 * amplitude * xi.cos() * bump(xi))
                    .collect(),
                x,
            };
            analyze(&field, params)
        }
        InitialCondition::RandomSmooth {
            theta0,
            amplitude,
            seed,
            decay,
        } => {
            let mut rng = ChaCha12Rng::seed_from_u64(*seed);
            let mut st = SpectralState::zero(nn);
            st.theta0 = *theta0;
            for k in 0..nn {
                let n = (k + 1) as f64;
                st.u[k] = amplitude * rng.gen_range(-1.0..1.0) / n.powf(*decay);
                st.v[k] = amplitude * rng.gen_range(-1.0..1.0) / n.powf(decay - 1.0);
                st.theta[k] = amplitude * rng.gen_range(-1.0..1.0) / n.powf(decay - 1.0);
            }
            Ok(st)
        }
    }
}

/// Rescale the deviation part (u, v, θ̂_{n>=1}) so that the largest of the
/// three `H^s` seminorms of `(n û_n)`, `(v̂_n)`, `(θ̂_n)` equals `target`.
/// θ̂₀ is untouched; `|θ̂₀ − θ_∞|` then sits at `O(target²)` automatically.
pub fn rescale_to_size(state: &SpectralState, params: &ModelParams, target: f64) -> SpectralState {
    let weighted_u: Vec<f64> = state
        .u
        .iter()
        .enumerate()
        .map(|(k, &c)| (k + 1) as f64 * c)
        .collect();
    let size = hs_seminorm(&weighted_u, params.s)
        .max(hs_seminorm(&state.v, params.s))
        .max(hs_seminorm(&state.theta, params.s));
    if size == 0.0 {
        return state.clone();
    }
    let f = target / size;
    let mut out = state.clone();
    for k in 0..state.n_modes() {
        out.u[k] *= f;
        out.v[k] *= f;
        out.theta[k] *= f;
    }
    out
}
