//! Stiffness-aware time integration of the truncated system.
//!
//! `etd_rk2` integrates the per-mode linear block (heat diagonal, wave
//! rotation and the μ-coupling, with θ̂₀ frozen at a cached snapshot)
//! exactly through matrix exponentials, and treats the remaining g-terms
//! explicitly with the standard φ₁/φ₂ exponential-RK2 weights. The cache
//! refreshes whenever θ̂₀ drifts from its snapshot; the drift itself is
//! compensated to second order by the `μ(θ̂₀ − a*) n v̂_n` remainder term.
//! `rk4` is the classical explicit scheme, usable while `dt·N²` stays
//! inside its stability interval; it serves as the fine-step reference.

use crate::linalg::Mat3;
use crate::nonlinear::{self, g3_generic};
use crate::params::ModelParams;
use crate::spectral;
use crate::state::{NormRecord, SpectralState};
use crate::{Error, Result};

/// Time stepping method.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    EtdRk2,
    Rk4,
}

#[derive(Debug, Clone, Copy)]
pub struct IntegratorConfig {
    pub t_end: f64,
    pub dt: f64,
    pub method: Method,
    /// Record norms/states every this many steps.
    pub record_every: usize,
}

impl IntegratorConfig {
    pub fn new(t_end: f64, dt: f64, method: Method, record_every: usize) -> Result<Self> {
        if !(dt > 0.0) || !(t_end > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "need positive dt and t_end, got dt = {dt}, t_end = {t_end}"
            )));
        }
        Ok(Self {
            t_end,
            dt,
            method,
            record_every: record_every.max(1),
        })
    }
}

/// Recorded trajectory: times, strided states, norm records and the
/// positivity monitor (min of the synthesized temperature per record).
#[derive(Debug, Clone)]
pub struct TrajectoryRecord {
    pub times: Vec<f64>,
    pub states: Vec<SpectralState>,
    pub norms: Vec<NormRecord>,
    pub min_theta: Vec<f64>,
    pub theta_inf: f64,
}

impl TrajectoryRecord {
    /// `(t, value)` series of one recorded column.
    pub fn series(&self, column: NormColumn) -> Vec<(f64, f64)> {
        self.norms
            .iter()
            .zip(&self.min_theta)
            .map(|(r, &mt)| {
                let v = match column {
                    NormColumn::Energy => r.energy,
                    NormColumn::HsUx => r.hs_u_x,
                    NormColumn::HsUt => r.hs_u_t,
                    NormColumn::HsThetaDev => r.hs_theta_dev,
                    NormColumn::Theta0Dev => r.theta0_dev,
                    NormColumn::MinTheta => mt,
                };
                (r.t, v)
            })
            .collect()
    }

    pub fn relative_energy_drift(&self) -> f64 {
        let e0 = self.norms[0].energy;
        self.norms
            .iter()
            .map(|r| (r.energy - e0).abs())
            .fold(0.0, f64::max)
            / e0.abs().max(f64::MIN_POSITIVE)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormColumn {
    Energy,
    HsUx,
    HsUt,
    HsThetaDev,
    Theta0Dev,
    MinTheta,
}

/// Per-mode exponential weights for one (dt, θ̂₀-snapshot) pair.
struct EtdCache {
    a_snapshot: f64,
    dt: f64,
    /// (e^{A dt}, dt·φ₁ third column, dt·φ₂ third column) per mode.
    modes: Vec<(Mat3, [f64; 3], [f64; 3])>,
}

impl EtdCache {
    fn build(params: &ModelParams, a_snapshot: f64, dt: f64) -> Self {
        let modes = (1..=params.n_modes)
            .map(|n| {
                let p = params.with_a(a_snapshot);
                let mut a = crate::linear::build_a(n, &p);
                for row in a.0.iter_mut() {
                    for v in row.iter_mut() {
                        *v *= dt;
                    }
                }
                let (e, p1, p2) = crate::expm::expm_phi3(&a);
                let w1 = [dt * p1.0[0][2], dt * p1.0[1][2], dt * p1.0[2][2]];
                let w2 = [dt * p2.0[0][2], dt * p2.0[1][2], dt * p2.0[2][2]];
                (e, w1, w2)
            })
            .collect();
        Self {
            a_snapshot,
            dt,
            modes,
        }
    }

    fn stale(&self, theta0: f64) -> bool {
        (theta0 - self.a_snapshot).abs() > 1e-6 * self.a_snapshot.abs().max(1.0)
    }
}

/// The remainder relative to the frozen linear part: `g_{3,n}` per mode
/// and the θ̂₀ source.
fn remainder(state: &SpectralState, mu: f64, a_snapshot: f64) -> (Vec<f64>, f64) {
    let nn = state.n_modes();
    let g: Vec<f64> = (1..=nn)
        .map(|n| g3_generic(&state.theta, &state.v, state.theta0 - a_snapshot, mu, n))
        .collect();
    let mut f0 = 0.0;
    for l in 1..=nn {
        f0 += state.theta[l - 1] * l as f64 * state.v[l - 1];
    }
    (g, mu / 2.0 * f0)
}

fn etd_step_cached(state: &SpectralState, params: &ModelParams, cache: &EtdCache) -> SpectralState {
    let nn = params.n_modes;
    let dt = cache.dt;
    let (g_y, f0_y) = remainder(state, params.mu, cache.a_snapshot);

    let mut stage = SpectralState::zero(nn);
    stage.theta0 = state.theta0 + dt * f0_y;
    for n in 1..=nn {
        let (e, w1, _) = &cache.modes[n - 1];
        let y = state.mode_vector(n);
        let ey = e.mul_vec(y);
        let g = g_y[n - 1];
        stage.u[n - 1] = (ey[0] + w1[0] * g) / n as f64;
        stage.v[n - 1] = ey[1] + w1[1] * g;
        stage.theta[n - 1] = ey[2] + w1[2] * g;
    }

    let (g_s, f0_s) = remainder(&stage, params.mu, cache.a_snapshot);
    let mut out = stage.clone();
    out.theta0 += 0.5 * dt * (f0_s - f0_y);
    for n in 1..=nn {
        let (_, _, w2) = &cache.modes[n - 1];
        let dg = g_s[n - 1] - g_y[n - 1];
        out.u[n - 1] += w2[0] * dg / n as f64;
        out.v[n - 1] += w2[1] * dg;
        out.theta[n - 1] += w2[2] * dg;
    }
    out
}

/// One exponential-RK2 step (standalone; `run` reuses the weight cache
/// across steps).
pub fn step_etd(state: &SpectralState, params: &ModelParams, dt: f64) -> Result<SpectralState> {
    let cache = EtdCache::build(params, state.theta0, dt);
    let out = etd_step_cached(state, params, &cache);
    check_finite(&out, 0.0)?;
    Ok(out)
}

/// One classical RK4 step on the full right-hand side.
pub fn step_rk4(state: &SpectralState, params: &ModelParams, dt: f64) -> SpectralState {
    let k1 = nonlinear::rhs(state, params);
    let s2 = apply(state, &k1, 0.5 * dt);
    let k2 = nonlinear::rhs(&s2, params);
    let s3 = apply(state, &k2, 0.5 * dt);
    let k3 = nonlinear::rhs(&s3, params);
    let s4 = apply(state, &k3, dt);
    let k4 = nonlinear::rhs(&s4, params);
    let nn = state.n_modes();
    let mut out = state.clone();
    out.theta0 += dt / 6.0 * (k1.d_theta0 + 2.0 * k2.d_theta0 + 2.0 * k3.d_theta0 + k4.d_theta0);
    for i in 0..nn {
        out.u[i] += dt / 6.0 * (k1.d_u[i] + 2.0 * k2.d_u[i] + 2.0 * k3.d_u[i] + k4.d_u[i]);
        out.v[i] += dt / 6.0 * (k1.d_v[i] + 2.0 * k2.d_v[i] + 2.0 * k3.d_v[i] + k4.d_v[i]);
        out.theta[i] +=
            dt / 6.0 * (k1.d_theta[i] + 2.0 * k2.d_theta[i] + 2.0 * k3.d_theta[i] + k4.d_theta[i]);
    }
    out
}

fn apply(state: &SpectralState, d: &nonlinear::RhsOutput, dt: f64) -> SpectralState {
    let nn = state.n_modes();
    let mut out = state.clone();
    out.theta0 += dt * d.d_theta0;
    for i in 0..nn {
        out.u[i] += dt * d.d_u[i];
        out.v[i] += dt * d.d_v[i];
        out.theta[i] += dt * d.d_theta[i];
    }
    out
}

/// Integrate the nonlinear system and record norms.
pub fn run(
    initial: &SpectralState,
    params: &ModelParams,
    config: &IntegratorConfig,
) -> Result<TrajectoryRecord> {
    run_impl(initial, params, config, None)
}

/// Integrate the linearization about temperature `a` (θ̂₀ frozen,
/// quadratic sums absent): exact per-mode exponential stepping.
pub fn run_linearized(
    initial: &SpectralState,
    params: &ModelParams,
    a: f64,
    config: &IntegratorConfig,
) -> Result<TrajectoryRecord> {
    run_impl(initial, params, config, Some(a))
}

fn run_impl(
    initial: &SpectralState,
    params: &ModelParams,
    config: &IntegratorConfig,
    linearized_at: Option<f64>,
) -> Result<TrajectoryRecord> {
    if !initial.is_consistent(params) {
        return Err(Error::DimensionMismatch(
            "initial state inconsistent with params".into(),
        ));
    }
    if config.method == Method::Rk4 {
        let margin = config.dt * (params.n_modes * params.n_modes) as f64;
        if margin > 2.8 {
            return Err(Error::StepTooLarge(margin));
        }
    }
    let dt = config.dt;
    let n_steps = (config.t_end / dt).round().max(1.0) as usize;
    let theta_inf = spectral::theta_infinity(initial, params);

    let mut traj = TrajectoryRecord {
        times: Vec::new(),
        states: Vec::new(),
        norms: Vec::new(),
        min_theta: Vec::new(),
        theta_inf,
    };
    let record = |state: &SpectralState, t: f64, traj: &mut TrajectoryRecord| -> Result<()> {
        let field = spectral::synthesize(state, params)?;
        let min_theta = field.theta.iter().copied().fold(f64::INFINITY, f64::min);
        let weighted_u: Vec<f64> = state
            .u
            .iter()
            .enumerate()
            .map(|(k, &c)| (k + 1) as f64 * c)
            .collect();
        traj.norms.push(NormRecord {
            t,
            energy: spectral::energy(state, params),
            hs_u_x: spectral::hs_seminorm(&weighted_u, params.s),
            hs_u_t: spectral::hs_seminorm(&state.v, params.s),
            hs_theta_dev: spectral::hs_seminorm(&state.theta, params.s),
            theta0_dev: (state.theta0 - theta_inf).abs(),
        });
        traj.min_theta.push(min_theta);
        traj.times.push(t);
        traj.states.push(state.clone());
        Ok(())
    };

    let mut state = initial.clone();
    record(&state, 0.0, &mut traj)?;

    let mut cache = match (config.method, linearized_at) {
        (Method::EtdRk2, None) => Some(EtdCache::build(params, state.theta0, dt)),
        (_, Some(a)) => Some(EtdCache::build(params, a, dt)),
        _ => None,
    };

    for step in 1..=n_steps {
        let t = step as f64 * dt;
        state = match linearized_at {
            Some(_) => {
                // exact linear flow: remainder vanishes identically
                let c = cache.as_ref().unwrap();
                let nn = params.n_modes;
                let mut out = state.clone();
                for n in 1..=nn {
                    let ey = c.modes[n - 1].0.mul_vec(state.mode_vector(n));
                    out.u[n - 1] = ey[0] / n as f64;
                    out.v[n - 1] = ey[1];
                    out.theta[n - 1] = ey[2];
                }
                out
            }
            None => match config.method {
                Method::EtdRk2 => {
                    if cache.as_ref().unwrap().stale(state.theta0) {
                        cache = Some(EtdCache::build(params, state.theta0, dt));
                    }
                    etd_step_cached(&state, params, cache.as_ref().unwrap())
                }
                Method::Rk4 => step_rk4(&state, params, dt),
            },
        };
        check_finite(&state, t)?;
        if step % config.record_every == 0 || step == n_steps {
            record(&state, t, &mut traj)?;
        }
    }
    Ok(traj)
}

fn check_finite(state: &SpectralState, t: f64) -> Result<()> {
    if !state.theta0.is_finite() {
        return Err(Error::Instability { t, mode: 0 });
    }
    for (i, ((&u, &v), &th)) in state.u.iter().zip(&state.v).zip(&state.theta).enumerate() {
        if !u.is_finite() || !v.is_finite() || !th.is_finite() {
            return Err(Error::Instability { t, mode: i + 1 });
        }
    }
    Ok(())
}
