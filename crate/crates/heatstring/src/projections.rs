//! Projection coordinates onto the per-mode eigendirections.
//!
//! For separated modes (`n >= n_split`) the projection is `U = C_nᵀ y`
//! with `y = (n û_n, v̂_n, θ̂_n)ᵀ` and `C_n` the asymptotic eigenvector
//! matrix of `A*`; the projected dynamics is then diagonal up to the
//! explicit forcing `F_{j,n}` of [`forcing_f`]; the identity is exact for
//! every `n >= 1`. Below the split the basis is the numerically
//! computed eigenbasis of `A` itself (`B_n = Sᵀ`); those modes evolve
//! through the 3×3 matrix exponential, so any invertible basis is exact.

use crate::linalg::{cdot, cvec_from_real, CMat3, C64};
use crate::linear::{self, BranchAnchor};
use crate::nonlinear;
use crate::params::ModelParams;
use crate::state::SpectralState;
use crate::{Error, Result};

/// Complex projection coordinates per mode plus the mean temperature.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionState {
    pub theta0: f64,
    pub u1: Vec<C64>,
    pub u2: Vec<C64>,
    pub u3: Vec<C64>,
}

impl ProjectionState {
    pub fn zero(n_modes: usize) -> Self {
        let z = vec![C64::new(0.0, 0.0); n_modes];
        Self {
            theta0: 0.0,
            u1: z.clone(),
            u2: z.clone(),
            u3: z,
        }
    }

    pub fn n_modes(&self) -> usize {
        self.u1.len()
    }

    pub fn mode(&self, n: usize) -> [C64; 3] {
        [self.u1[n - 1], self.u2[n - 1], self.u3[n - 1]]
    }
}

/// Which basis a mode uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisKind {
    /// `B = C_nᵀ` from the asymptotic eigenvectors (n >= n_split).
    AsymptoticEigen,
    /// Numerical eigenbasis of `A_{n,a}` (n < n_split).
    NumericEigen,
}

/// One mode's projection basis `U = B y` with its inverse and the
/// eigenvalues used by the diagonal Duhamel branch.
#[derive(Debug, Clone)]
pub struct ModeBasis {
    pub n: usize,
    pub kind: BasisKind,
    pub b: CMat3,
    pub b_inv: CMat3,
    pub lambda: [C64; 3],
    pub condition: f64,
}

/// Per-mode bases for a full truncation, split at `n_split`.
#[derive(Debug, Clone)]
pub struct ProjectionBasis {
    pub n_split: usize,
    modes: Vec<ModeBasis>,
}

impl ProjectionBasis {
    /// Build bases for all modes. `n_split` defaults to the Gershgorin
    /// separation threshold. The linearization temperature is `params.a`.
    pub fn new(params: &ModelParams, n_split: Option<usize>) -> Result<Self> {
        let n_split = n_split.unwrap_or_else(|| linear::smallest_separated_n(params));
        let mut modes = Vec::with_capacity(params.n_modes);
        for n in 1..=params.n_modes {
            modes.push(mode_basis(n, params, n_split)?);
        }
        Ok(Self { n_split, modes })
    }

    pub fn mode(&self, n: usize) -> &ModeBasis {
        &self.modes[n - 1]
    }

    pub fn n_modes(&self) -> usize {
        self.modes.len()
    }
}

fn mode_basis(n: usize, params: &ModelParams, n_split: usize) -> Result<ModeBasis> {
    if n >= n_split {
        let asym = linear::eigen_asymptotic(n, params);
        let b = asym.vector_matrix().transpose();
        let b_inv = b.inverse()?;
        Ok(ModeBasis {
            n,
            kind: BasisKind::AsymptoticEigen,
            condition: b.cond_inf(),
            b,
            b_inv,
            lambda: asym.lambdas(),
        })
    } else {
        let eig = linear::eigen_exact(n, params)?;
        let a = linear::build_a(n, params).to_complex();
        let w1 = linear::null_space_vector(&a, eig.lambda1, BranchAnchor::Unit)?;
        let w2 = linear::null_space_vector(&a, eig.lambda2, BranchAnchor::Unit)?;
        let w3 = linear::null_space_vector(&a, eig.lambda3, BranchAnchor::Unit)?;
        let s = CMat3::from_columns(w1, w2, w3);
        let b = s.transpose();
        let b_inv = b.inverse()?;
        Ok(ModeBasis {
            n,
            kind: BasisKind::NumericEigen,
            condition: s.cond_inf(),
            b,
            b_inv,
            lambda: eig.lambdas(),
        })
    }
}

/// Project a real state onto the per-mode bases.
pub fn to_projection(
    state: &SpectralState,
    params: &ModelParams,
    basis: &ProjectionBasis,
) -> Result<ProjectionState> {
    if state.n_modes() != params.n_modes || basis.n_modes() != params.n_modes {
        return Err(Error::DimensionMismatch(
            "to_projection: state/basis/params disagree on mode count".into(),
        ));
    }
    let mut out = ProjectionState::zero(params.n_modes);
    out.theta0 = state.theta0;
    for n in 1..=params.n_modes {
        let y = cvec_from_real(state.mode_vector(n));
        let u = basis.mode(n).b.mul_vec(y);
        out.u1[n - 1] = u[0];
        out.u2[n - 1] = u[1];
        out.u3[n - 1] = u[2];
    }
    Ok(out)
}

/// Invert the projection; returns the real parts of `B⁻¹U`.
///
/// For a projection of a real state the imaginary residue is at rounding
/// level (see [`projection_imag_residual`]).
pub fn from_projection(
    proj: &ProjectionState,
    params: &ModelParams,
    basis: &ProjectionBasis,
) -> Result<SpectralState> {
    if proj.n_modes() != params.n_modes || basis.n_modes() != params.n_modes {
        return Err(Error::DimensionMismatch(
            "from_projection: state/basis/params disagree on mode count".into(),
        ));
    }
    let mut out = SpectralState::zero(params.n_modes);
    out.theta0 = proj.theta0;
    for n in 1..=params.n_modes {
        let y = basis.mode(n).b_inv.mul_vec(proj.mode(n));
        out.u[n - 1] = y[0].re / n as f64;
        out.v[n - 1] = y[1].re;
        out.theta[n - 1] = y[2].re;
    }
    Ok(out)
}

/// Largest relative imaginary part of `B⁻¹U` over modes and components.
pub fn projection_imag_residual(proj: &ProjectionState, basis: &ProjectionBasis) -> f64 {
    let mut worst: f64 = 0.0;
    for n in 1..=proj.n_modes() {
        let y = basis.mode(n).b_inv.mul_vec(proj.mode(n));
        for c in y {
            worst = worst.max(c.im.abs() / (1.0 + c.norm()));
        }
    }
    worst
}

/// The three forcing scalars `F_{j,n}` of the projected dynamics, for a
/// real state; the linearization temperature is `params.a`.
pub fn forcing_f(state: &SpectralState, params: &ModelParams, n: usize) -> Result<[C64; 3]> {
    let g = nonlinear::g3(state, params, n)?;
    let y = cvec_from_real(state.mode_vector(n));
    Ok(forcing_from_g(y, C64::new(g, 0.0), params.a, params.mu, n))
}

/// `F_{j,n}` from mode coordinates `y = (a₁, a₂, a₃)` and the assembled
/// quadratic forcing `g = g_{3,n}`:
///
/// ```text
/// F₁ = (a²μ³/n²) a₁ − (aμ/n) a₂ + (a²μ⁴/n²) a₃ + (1 − aμ²/n²) g
/// F₂ = (aμ²/n − a²μ⁴/4n) a₂ + (μi/n − aμ³i/n + aμ³/2n² − a²μ⁵/4n²) a₃
///        + (−μi/n + μ/n² − aμ³/2n²) g
/// F₃ = conj-pattern of F₂ (i → −i in the leading terms)
/// ```
pub(crate) fn forcing_from_g(y: [C64; 3], g: C64, a: f64, mu: f64, n: usize) -> [C64; 3] {
    let nf = n as f64;
    let n2 = nf * nf;
    let i = C64::new(0.0, 1.0);
    let f1 = y[0] * (a * a * mu.powi(3) / n2) - y[1] * (a * mu / nf)
        + y[2] * (a * a * mu.powi(4) / n2)
        + g * (1.0 - a * mu * mu / n2);
    let coeff_v = a * mu * mu / nf - a * a * mu.powi(4) / (4.0 * nf);
    let coeff_theta_re = a * mu.powi(3) / (2.0 * n2) - a * a * mu.powi(5) / (4.0 * n2);
    let coeff_theta_im = mu / nf - a * mu.powi(3) / nf;
    let g2 = C64::new(mu / n2 - a * mu.powi(3) / (2.0 * n2), -mu / nf);
    let f2 = y[1] * coeff_v + y[2] * (C64::new(coeff_theta_re, 0.0) + i * coeff_theta_im) + g * g2;
    let g3c = C64::new(mu / n2 - a * mu.powi(3) / (2.0 * n2), mu / nf);
    let f3 = y[1] * coeff_v + y[2] * (C64::new(coeff_theta_re, 0.0) - i * coeff_theta_im) + g * g3c;
    [f1, f2, f3]
}

/// Complex-coordinate forcing used inside the Duhamel map: `a2`/`a3` are
/// the full mode sequences at one time, `h_dev = h(t) − θ_∞`.
pub(crate) fn forcing_coords(
    a1n: C64,
    a2: &[C64],
    a3: &[C64],
    h_dev: C64,
    a: f64,
    mu: f64,
    n: usize,
) -> ([C64; 3], C64) {
    let g = nonlinear::g3_complex(a3, a2, h_dev, mu, n);
    let y = [a1n, a2[n - 1], a3[n - 1]];
    (forcing_from_g(y, g, a, mu, n), g)
}

/// Convenience: dot with an `A*`-eigenvector (the projection convention
/// is a plain dot product, no conjugation).
pub fn project_component(v: [C64; 3], y: [f64; 3]) -> C64 {
    cdot(v, cvec_from_real(y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha12Rng;

    fn params(n: usize) -> ModelParams {
        ModelParams::new(1.0, 1.0, n, 0.8, 2 * n + 1).unwrap()
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
    fn zero_state_projects_to_zero() {
        let p = params(6);
        let basis = ProjectionBasis::new(&p, None).unwrap();
        let proj = to_projection(&SpectralState::zero(6), &p, &basis).unwrap();
        assert!(proj.u1.iter().all(|z| z.norm() == 0.0));
        assert_eq!(proj.theta0, 0.0);
    }

    #[test]
    fn round_trip_and_reality() {
        let p = params(8);
        let basis = ProjectionBasis::new(&p, Some(4)).unwrap();
        for seed in 0..10 {
            let st = random_state(8, seed);
            let proj = to_projection(&st, &p, &basis).unwrap();
            assert!(projection_imag_residual(&proj, &basis) < 1e-9);
            let back = from_projection(&proj, &p, &basis).unwrap();
            assert!((back.theta0 - st.theta0).abs() < 1e-10);
            for k in 0..8 {
                assert!((back.u[k] - st.u[k]).abs() < 1e-10);
                assert!((back.v[k] - st.v[k]).abs() < 1e-10);
                assert!((back.theta[k] - st.theta[k]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn conjugate_symmetry_for_real_states() {
        let p = params(8);
        let basis = ProjectionBasis::new(&p, Some(4)).unwrap();
        let st = random_state(8, 3);
        let proj = to_projection(&st, &p, &basis).unwrap();
        for n in 1..=8usize {
            assert!(
                (proj.u3[n - 1] - proj.u2[n - 1].conj()).norm() < 1e-12,
                "mode {n}"
            );
            assert!(proj.u1[n - 1].im.abs() < 1e-12);
        }
    }

    #[test]
    fn pure_theta_mode_projection_value() {
        // mode with only θ̂_n = 1 has U₁ = 1 − aμ²/n² under the
        // asymptotic basis.
        let p = params(8);
        let basis = ProjectionBasis::new(&p, Some(4)).unwrap();
        let mut st = SpectralState::zero(8);
        st.theta[4] = 1.0; // n = 5 >= n_split
        let proj = to_projection(&st, &p, &basis).unwrap();
        assert!((proj.u1[4].re - (1.0 - 1.0 / 25.0)).abs() < 1e-14);
        assert!(proj.u1[4].im.abs() < 1e-15);
    }

    #[test]
    fn forcing_zero_state() {
        let p = params(4);
        let f = forcing_f(&SpectralState::zero(4), &p, 2).unwrap();
        assert!(f.iter().all(|z| z.norm() == 0.0));
    }

    /// With v = 0 and θ̂₀ = a the quadratic forcing vanishes, leaving only
    /// the three linear terms of F₁.
    #[test]
    fn forcing_linear_data_reduces_to_linear_terms() {
        let p = params(4);
        let mut st = SpectralState::zero(4);
        st.theta0 = p.a;
        st.u = vec![0.3, -0.2, 0.1, 0.05];
        st.theta = vec![-0.4, 0.2, 0.3, -0.1];
        for n in 1..=4usize {
            let f = forcing_f(&st, &p, n).unwrap();
            let nf = n as f64;
            let n2 = nf * nf;
            let (a, mu) = (p.a, p.mu);
            let expect = a * a * mu.powi(3) / n2 * (nf * st.u[n - 1])
                + a * a * mu.powi(4) / n2 * st.theta[n - 1];
            assert!((f[0].re - expect).abs() < 1e-14);
            assert!(f[0].im.abs() < 1e-15);
        }
    }

    /// The projected nonlinear rhs equals the diagonal dynamics plus
    /// forcing, mode by mode: d/dt (V_j·y) = λ_j (V_j·y) + F_j exactly.
    /// Uses the asymptotic vectors directly; the identity holds for every
    /// n >= 1, including modes where C_n is not invertible.
    #[test]
    fn projected_dynamics_identity() {
        let p = params(4);
        for seed in 0..12 {
            let st = random_state(4, seed);
            let d = nonlinear::rhs(&st, &p);
            for n in 1..=4usize {
                let asym = crate::linear::eigen_asymptotic(n, &p);
                let f = forcing_f(&st, &p, n).unwrap();
                let y = st.mode_vector(n);
                let dy = [n as f64 * d.d_u[n - 1], d.d_v[n - 1], d.d_theta[n - 1]];
                for (j, (lam, v)) in asym.lambdas().iter().zip(asym.vectors()).enumerate() {
                    let u = project_component(v, y);
                    let du = project_component(v, dy);
                    let expect = *lam * u + f[j];
                    assert!(
                        (du - expect).norm() < 1e-10,
                        "n={n} j={j}: {du} vs {expect}"
                    );
                }
            }
        }
    }

    #[test]
    fn numeric_basis_is_well_conditioned_here() {
        let p = params(8);
        let basis = ProjectionBasis::new(&p, None).unwrap();
        assert_eq!(basis.n_split, 4);
        for n in 1..basis.n_split {
            let mb = basis.mode(n);
            assert_eq!(mb.kind, BasisKind::NumericEigen);
            assert!(mb.condition < 1e3, "cond at n={n}: {}", mb.condition);
        }
        assert_eq!(basis.mode(5).kind, BasisKind::AsymptoticEigen);
    }
}
