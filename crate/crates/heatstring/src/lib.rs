//! Spectral-Galerkin toolkit for the 1-D thermoelastic string
//!
//! The model couples a wave equation for the string displacement `u` with a
//! heat equation for its temperature `θ` on `(0, π)`:
//!
//! ```text
//! u_tt − u_xx = μ θ_x,          θ_t − θ_xx = μ θ u_tx,
//! u(·,0) = u(·,π) = θ_x(·,0) = θ_x(·,π) = 0.
//! ```
//!
//! Everything lives on the Fourier side: `u = Σ û_n sin(nx)`,
//! `θ = θ̂₀ + Σ θ̂_n cos(nx)`, truncated at `N` modes. The crate provides
//!
//! * [`spectral`]: synthesis/analysis between grid fields and coefficients,
//!   energy, equilibrium temperature and weighted sequence norms;
//! * [`estimates`]: the discrete convolution sums and the weighted-norm
//!   inequality toolkit used by the decay analysis;
//! * [`nonlinear`]: the truncated ODE system right-hand side and its
//!   mode-wise linear/forcing decomposition;
//! * [`linear`]: the per-mode 3×3 matrices, their exact and asymptotic
//!   eigen-decompositions, Gershgorin localization and decay thresholds;
//! * [`projections`] / [`duhamel`]: eigendirection projections, the Duhamel
//!   integral map and its Picard fixed-point solver;
//! * [`integrator`]: stiffness-aware time integration (exponential RK2 and
//!   classical RK4) with norm tracking;
//! * [`fit`]: exponential decay-rate fitting and log-log regression;
//! * [`presets`]: reproducible initial-condition families;
//! * [`report`]: CSV rendering of trajectories, spectra and iteration logs.
//!
//! All operations are pure functions of immutable inputs and safe to call
//! concurrently; nothing in the crate holds shared mutable state.

pub mod duhamel;
pub mod error;
pub mod estimates;
pub mod expm;
pub mod fit;
pub mod integrator;
pub mod linalg;
pub mod linear;
pub mod nonlinear;
pub mod params;
pub mod presets;
pub mod projections;
pub mod report;
pub mod spectral;
pub mod state;

pub use error::Error;
pub use params::ModelParams;
pub use state::{GridField, NormRecord, SpectralState};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
