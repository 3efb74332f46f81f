//! Right-hand side of the truncated mode system and its decomposition.
//!
//! The evolution of `(û_n, v̂_n, θ̂_n, θ̂₀)` truncated at `N` modes:
//!
//! ```text
//! û_n'  = v̂_n
//! v̂_n'  = −n² û_n − μ n θ̂_n
//! θ̂₀'   = (μ/2) Σ_{l=1}^{N} θ̂_l l v̂_l
//! θ̂_n'  = −n² θ̂_n + (μ/2)[S1 + S2 + S3] + μ θ̂₀ n v̂_n
//! ```
//!
//! with the strict Cauchy part `S1 = Σ_{k=1}^{n−1} θ̂_{n−k} k v̂_k` and the
//! two tails `S2 = Σ θ̂_{l+n} l v̂_l`, `S3 = Σ_{l>=1} θ̂_l (l+n) v̂_{l+n}`.
//! The diagonal `μ θ̂₀ n v̂_n` collects the `k = n` Cauchy term and the
//! `l = 0` term of the right tail. Relative to the linearization
//! temperature `a`, the same right-hand side splits per mode into
//! `A_{n,a} (n û_n, v̂_n, θ̂_n)ᵀ + (0, 0, g_{3,n})ᵀ` with [`g3`] the forcing.

use std::ops::{Add, Mul};

use num_complex::Complex64;

use crate::params::ModelParams;
use crate::state::SpectralState;
use crate::{Error, Result};

/// Time derivative of a [`SpectralState`].
#[derive(Debug, Clone, PartialEq)]
pub struct RhsOutput {
    pub d_theta0: f64,
    pub d_u: Vec<f64>,
    pub d_v: Vec<f64>,
    pub d_theta: Vec<f64>,
}

/// Evaluate the truncated system right-hand side.
pub fn rhs(state: &SpectralState, params: &ModelParams) -> RhsOutput {
    assert!(
        state.n_modes() == params.n_modes,
        "state/params mode count mismatch"
    );
    let nn = params.n_modes;
    let mu = params.mu;
    let mut out = RhsOutput {
        d_theta0: 0.0,
        d_u: vec![0.0; nn],
        d_v: vec![0.0; nn],
        d_theta: vec![0.0; nn],
    };
    for l in 1..=nn {
        out.d_theta0 += state.theta[l - 1] * l as f64 * state.v[l - 1];
    }
    out.d_theta0 *= mu / 2.0;
    for n in 1..=nn {
        let nf = n as f64;
        out.d_u[n - 1] = state.v[n - 1];
        out.d_v[n - 1] = -nf * nf * state.u[n - 1] - mu * nf * state.theta[n - 1];
        let sums = quadratic_sums(&state.theta, &state.v, n);
        out.d_theta[n - 1] = -nf * nf * state.theta[n - 1]
            + mu / 2.0 * sums
            + mu * state.theta0 * nf * state.v[n - 1];
    }
    out
}

/// Forcing `g_{3,n}` relative to the linearization temperature `params.a`.
pub fn g3(state: &SpectralState, params: &ModelParams, n: usize) -> Result<f64> {
    if n < 1 || n > params.n_modes {
        return Err(Error::OutOfRange(format!(
            "g3: n = {n} outside 1..={}",
            params.n_modes
        )));
    }
    Ok(g3_generic(
        &state.theta,
        &state.v,
        state.theta0 - params.a,
        params.mu,
        n,
    ))
}

/// `S1 + S2 + S3` for mode `n` over finite sequences (zero extension).
fn quadratic_sums(theta: &[f64], v: &[f64], n: usize) -> f64 {
    convolution_sums(theta, v, n)
}

/// `g_{3,n}` over real or complex coefficient sequences:
/// `(μ/2)(S1 + S2 + S3) + μ (θ̂₀ − a) n v̂_n`.
pub(crate) fn g3_generic<T>(theta: &[T], v: &[T], theta0_minus_a: T, mu: f64, n: usize) -> T
where
    T: Copy + Add<Output = T> + Mul<Output = T> + Mul<f64, Output = T> + Default,
{
    let sums = convolution_sums(theta, v, n);
    sums * (mu / 2.0) + theta0_minus_a * v[n - 1] * (mu * n as f64)
}

/// The three quadratic sums shared by the rhs, `g3` and the projected
/// forcing, generic over the scalar type.
pub(crate) fn convolution_sums<T>(theta: &[T], v: &[T], n: usize) -> T
where
    T: Copy + Add<Output = T> + Mul<Output = T> + Mul<f64, Output = T> + Default,
{
    let nn = theta.len();
    debug_assert_eq!(v.len(), nn);
    let mut sum = T::default();
    // S1: Σ_{k=1}^{n−1} θ_{n−k} k v_k
    for k in 1..n {
        sum = sum + theta[n - k - 1] * v[k - 1] * k as f64;
    }
    // S2: Σ_{l} θ_{l+n} l v_l
    for l in 1..=nn.saturating_sub(n) {
        sum = sum + theta[l + n - 1] * v[l - 1] * l as f64;
    }
    // S3: Σ_{l>=1} θ_l (l+n) v_{l+n}
    for l in 1..=nn.saturating_sub(n) {
        sum = sum + theta[l - 1] * v[l + n - 1] * (l + n) as f64;
    }
    sum
}

/// Complex variant used by the Duhamel machinery.
pub(crate) fn g3_complex(
    theta: &[Complex64],
    v: &[Complex64],
    theta0_minus_a: Complex64,
    mu: f64,
    n: usize,
) -> Complex64 {
    g3_generic(theta, v, theta0_minus_a, mu, n)
}

/// Linearized right-hand side about temperature `a`: θ̂₀ frozen, quadratic
/// sums dropped, so per mode `d/dt (nû, v̂, θ̂) = A_{n,a} (nû, v̂, θ̂)`.
pub fn rhs_linearized(state: &SpectralState, params: &ModelParams, a: f64) -> RhsOutput {
    let nn = params.n_modes;
    let mu = params.mu;
    let mut out = RhsOutput {
        d_theta0: 0.0,
        d_u: vec![0.0; nn],
        d_v: vec![0.0; nn],
        d_theta: vec![0.0; nn],
    };
    for n in 1..=nn {
        let nf = n as f64;
        out.d_u[n - 1] = state.v[n - 1];
        out.d_v[n - 1] = -nf * nf * state.u[n - 1] - mu * nf * state.theta[n - 1];
        out.d_theta[n - 1] = -nf * nf * state.theta[n - 1] + a * mu * nf * state.v[n - 1];
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha12Rng;

    fn params(n: usize) -> ModelParams {
        ModelParams::new(0.7, 1.3, n, 0.8, 2 * n + 1).unwrap()
    }

    fn random_state(n: usize, seed: u64) -> SpectralState {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let mut st = SpectralState::zero(n);
        st.theta0 = rng.gen_range(0.5..1.5);
        for k in 0..n {
            st.u[k] = rng.gen_range(-1.0..1.0);
            st.v[k] = rng.gen_range(-1.0..1.0);
            st.theta[k] = rng.gen_range(-1.0..1.0);
        }
        st
    }

    #[test]
    fn zero_state_zero_derivative() {
        let p = params(4);
        let out = rhs(&SpectralState::zero(4), &p);
        assert_eq!(out.d_theta0, 0.0);
        assert!(out.d_u.iter().all(|&x| x == 0.0));
        assert!(out.d_v.iter().all(|&x| x == 0.0));
        assert!(out.d_theta.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn pure_heat_decay_when_velocity_vanishes() {
        let p = params(4);
        let mut st = SpectralState::zero(4);
        st.theta0 = 0.9;
        st.theta = vec![0.3, -0.2, 0.1, 0.05];
        let out = rhs(&st, &p);
        assert_eq!(out.d_theta0, 0.0);
        for n in 1..=4usize {
            let expect = -((n * n) as f64) * st.theta[n - 1];
            assert!((out.d_theta[n - 1] - expect).abs() < 1e-15);
        }
    }

    /// Literal transcription of the full mode system with nested loops,
    /// including the k = n Cauchy term and the l = 0 right-tail term.
    fn rhs_transcription(st: &SpectralState, p: &ModelParams) -> RhsOutput {
        let nn = p.n_modes;
        let mu = p.mu;
        let th = |i: usize| -> f64 {
            if i == 0 {
                st.theta0
            } else if i <= nn {
                st.theta[i - 1]
            } else {
                0.0
            }
        };
        let vv = |i: usize| -> f64 {
            if i >= 1 && i <= nn {
                st.v[i - 1]
            } else {
                0.0
            }
        };
        let mut out = RhsOutput {
            d_theta0: 0.0,
            d_u: vec![0.0; nn],
            d_v: vec![0.0; nn],
            d_theta: vec![0.0; nn],
        };
        for l in 1..=nn {
            out.d_theta0 += mu / 2.0 * th(l) * l as f64 * vv(l);
        }
        for n in 1..=nn {
            let nf = n as f64;
            out.d_u[n - 1] = vv(n);
            out.d_v[n - 1] = -nf * nf * st.u[n - 1] - mu * nf * th(n);
            let mut d = -nf * nf * th(n);
            for k in 1..=n {
                d += mu / 2.0 * th(n - k) * k as f64 * vv(k);
            }
            for l in 1..=2 * nn {
                d += mu / 2.0 * th(l + n) * l as f64 * vv(l);
            }
            for l in 0..=2 * nn {
                d += mu / 2.0 * th(l) * (l + n) as f64 * vv(l + n);
            }
            out.d_theta[n - 1] = d;
        }
        out
    }

    #[test]
    fn rhs_matches_literal_transcription() {
        let p = params(3);
        for seed in 0..8 {
            let st = random_state(3, seed);
            let a = rhs(&st, &p);
            let b = rhs_transcription(&st, &p);
            assert!((a.d_theta0 - b.d_theta0).abs() < 1e-13);
            for k in 0..3 {
                assert!((a.d_u[k] - b.d_u[k]).abs() < 1e-13);
                assert!((a.d_v[k] - b.d_v[k]).abs() < 1e-13);
                assert!((a.d_theta[k] - b.d_theta[k]).abs() < 1e-13, "mode {k}");
            }
        }
    }

    #[test]
    fn g3_vanishes_without_velocity() {
        let p = params(4);
        let mut st = SpectralState::zero(4);
        st.theta0 = 2.0;
        st.theta = vec![0.4, 0.3, 0.2, 0.1];
        for n in 1..=4 {
            assert_eq!(g3(&st, &p, n).unwrap(), 0.0);
        }
    }

    #[test]
    fn g3_vanishes_at_linearization_temperature() {
        let p = params(4);
        let mut st = SpectralState::zero(4);
        st.theta0 = p.a;
        st.v = vec![0.5, -0.5, 0.25, 0.1];
        for n in 1..=4 {
            assert_eq!(g3(&st, &p, n).unwrap(), 0.0);
        }
        assert!(g3(&st, &p, 0).is_err());
        assert!(g3(&st, &p, 5).is_err());
    }

    /// d_theta[n] == (−n² θ̂_n + a μ n v̂_n) + g3(n): the linear/forcing
    /// decomposition is exact up to float reassociation.
    #[test]
    fn decomposition_identity() {
        let p = params(4);
        for seed in 0..10 {
            let st = random_state(4, seed);
            let out = rhs(&st, &p);
            for n in 1..=4usize {
                let nf = n as f64;
                let linear = -nf * nf * st.theta[n - 1] + p.a * p.mu * nf * st.v[n - 1];
                let expect = linear + g3(&st, &p, n).unwrap();
                assert!(
                    (out.d_theta[n - 1] - expect).abs() < 1e-12,
                    "n = {n}: {} vs {}",
                    out.d_theta[n - 1],
                    expect
                );
            }
        }
    }

    /// The truncated system conserves energy identically:
    /// dE/dt = (π/2)Σ(v̂ d_v + n²û d_u) + π d_θ̂₀ = 0 for the rhs, with
    /// no contribution needed from the θ̂_{n>=1} equations.
    #[test]
    fn rhs_conserves_energy_differentially() {
        use std::f64::consts::PI;
        let p = params(6);
        for seed in 0..20 {
            let st = random_state(6, seed);
            let d = rhs(&st, &p);
            let mut de = PI * d.d_theta0;
            for n in 1..=6usize {
                let nf = n as f64;
                de +=
                    PI / 2.0 * (st.v[n - 1] * d.d_v[n - 1] + nf * nf * st.u[n - 1] * d.d_u[n - 1]);
            }
            assert!(de.abs() < 1e-12, "dE/dt = {de:e} at seed {seed}");
        }
    }

    #[test]
    fn linearized_rhs_is_the_linear_system() {
        let p = params(4);
        let a = 1.1;
        let st = random_state(4, 3);
        let lin = rhs_linearized(&st, &p, a);
        assert_eq!(lin.d_theta0, 0.0);
        for n in 1..=4usize {
            let nf = n as f64;
            assert!((lin.d_u[n - 1] - st.v[n - 1]).abs() < 1e-15);
            let dv = -nf * nf * st.u[n - 1] - p.mu * nf * st.theta[n - 1];
            assert!((lin.d_v[n - 1] - dv).abs() < 1e-15);
            let dth = -nf * nf * st.theta[n - 1] + a * p.mu * nf * st.v[n - 1];
            assert!((lin.d_theta[n - 1] - dth).abs() < 1e-15);
        }
    }
}
