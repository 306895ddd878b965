//! Time integration of the coupled velocity/temperature/concentration system
//!
//! ```text
//! u_t + (u·∇)u − μΔu + ∇p = α(θ + φ)g + f,   div u = 0
//! θ_t + (u·∇)θ − κ₁Δθ = ℓ
//! φ_t + (u·∇)φ − κ₂Δφ = h
//! ```
//!
//! on the periodic box with zero-mean unknowns. The stepper is first-order
//! IMEX: diffusion is integrated exactly per Fourier mode with the factor
//! `exp(−ν|k|²Δt)`, while advection, buoyancy and sources are explicit.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{
    convective_scalar, convective_vector, divergence, grad_norm_sq, laplacian, leray_project, Grid, ScalarField,
    VectorField,
};

/// Default Courant number.
pub const CFL_COEFF: f64 = 0.4;

const VELOCITY_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhysicsParams {
    pub mu: f64,
    pub kappa1: f64,
    pub kappa2: f64,
    pub alpha: f64,
    /// Constant gravity vector (length `dim`).
    pub gravity: Vec<f64>,
}

impl PhysicsParams {
    pub fn new(mu: f64, kappa1: f64, kappa2: f64, alpha: f64, gravity: Vec<f64>) -> Result<Self> {
        let params = PhysicsParams {
            mu,
            kappa1,
            kappa2,
            alpha,
            gravity,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("mu", self.mu), ("kappa1", self.kappa1), ("kappa2", self.kappa2)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::arg(name, format!("must be positive, got {v}")));
            }
        }
        if !self.alpha.is_finite() || self.gravity.iter().any(|g| !g.is_finite()) {
            return Err(Error::arg("alpha", "buoyancy data must be finite"));
        }
        Ok(())
    }

    /// `‖g‖_{L^3}` of the constant gravity vector over the box.
    pub fn gravity_l3(&self, grid: &Grid) -> f64 {
        let mag = self.gravity.iter().map(|g| g * g).sum::<f64>().sqrt();
        mag * grid.volume().cbrt()
    }

    fn check_grid(&self, grid: &Grid) -> Result<()> {
        if self.gravity.len() != grid.dim() {
            return Err(Error::arg(
                "gravity",
                format!("expected {} components, got {}", grid.dim(), self.gravity.len()),
            ));
        }
        Ok(())
    }
}

type VectorSource = Arc<dyn Fn(f64) -> VectorField + Send + Sync>;
type ScalarSource = Arc<dyn Fn(f64) -> ScalarField + Send + Sync>;

/// Time-dependent sources `f`, `ℓ`, `h`; an absent source is zero.
#[derive(Clone, Default)]
pub struct Forcing {
    velocity: Option<VectorSource>,
    temperature: Option<ScalarSource>,
    concentration: Option<ScalarSource>,
}

impl Forcing {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn with_velocity(mut self, f: impl Fn(f64) -> VectorField + Send + Sync + 'static) -> Self {
        self.velocity = Some(Arc::new(f));
        self
    }

    pub fn with_temperature(mut self, f: impl Fn(f64) -> ScalarField + Send + Sync + 'static) -> Self {
        self.temperature = Some(Arc::new(f));
        self
    }

    pub fn with_concentration(mut self, f: impl Fn(f64) -> ScalarField + Send + Sync + 'static) -> Self {
        self.concentration = Some(Arc::new(f));
        self
    }

    pub fn velocity(&self, t: f64) -> Option<VectorField> {
        self.velocity.as_ref().map(|f| f(t))
    }

    pub fn temperature(&self, t: f64) -> Option<ScalarField> {
        self.temperature.as_ref().map(|f| f(t))
    }

    pub fn concentration(&self, t: f64) -> Option<ScalarField> {
        self.concentration.as_ref().map(|f| f(t))
    }

    /// `(‖f(t)‖, ‖ℓ(t)‖, ‖h(t)‖)`.
    pub fn norms(&self, t: f64) -> [f64; 3] {
        [
            self.velocity(t).map_or(0.0, |f| f.norm()),
            self.temperature(t).map_or(0.0, |f| f.norm()),
            self.concentration(t).map_or(0.0, |f| f.norm()),
        ]
    }
}

impl fmt::Debug for Forcing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Forcing")
            .field("velocity", &self.velocity.is_some())
            .field("temperature", &self.temperature.is_some())
            .field("concentration", &self.concentration.is_some())
            .finish()
    }
}

/// Snapshot `(u, θ, φ, t)`. Fields are kept zero-mean and, between steps,
/// in physical representation.
#[derive(Debug, Clone)]
pub struct SimState {
    pub u: VectorField,
    pub theta: ScalarField,
    pub phi: ScalarField,
    pub t: f64,
}

impl SimState {
    /// Enforces zero mean on every field and projects `u` onto
    /// divergence-free fields.
    pub fn new(u: VectorField, theta: ScalarField, phi: ScalarField, t: f64) -> Result<Self> {
        u.grid().ensure_same(theta.grid())?;
        u.grid().ensure_same(phi.grid())?;
        if !t.is_finite() {
            return Err(Error::arg("t", "time must be finite"));
        }
        Ok(SimState {
            u: leray_project(&u.with_zero_mean()).to_physical(),
            theta: theta.with_zero_mean().to_physical(),
            phi: phi.with_zero_mean().to_physical(),
            t,
        })
    }

    /// Builds a state from fields taken verbatim (e.g. read back from disk).
    pub fn from_parts(u: VectorField, theta: ScalarField, phi: ScalarField, t: f64) -> Result<Self> {
        u.grid().ensure_same(theta.grid())?;
        u.grid().ensure_same(phi.grid())?;
        Ok(SimState { u, theta, phi, t })
    }

    pub fn zeros(grid: &Grid) -> Self {
        SimState {
            u: VectorField::zeros(grid),
            theta: ScalarField::zeros(grid),
            phi: ScalarField::zeros(grid),
            t: 0.0,
        }
    }

    pub fn grid(&self) -> &Grid {
        self.u.grid()
    }

    /// `‖∇u‖`.
    pub fn grad_u_norm(&self) -> f64 {
        self.u.components().iter().map(grad_norm_sq).sum::<f64>().sqrt()
    }

    /// `‖div u‖ / ‖∇u‖` (or `‖div u‖` for a constant field).
    pub fn relative_divergence(&self) -> f64 {
        let div = divergence(&self.u).norm();
        let grad = self.grad_u_norm();
        if grad > 0.0 {
            div / grad
        } else {
            div
        }
    }

    pub fn is_finite(&self) -> bool {
        self.u.is_finite() && self.theta.is_finite() && self.phi.is_finite()
    }

    /// The same state with velocity multiplied by `factor`.
    pub fn with_scaled_velocity(&self, factor: f64) -> SimState {
        SimState {
            u: self.u.scale(factor),
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub cfl: f64,
    pub max_dt: f64,
    /// Steps whose CFL limit falls below this end the run.
    pub min_dt: f64,
    /// Observer cadence in steps.
    pub sample_every: usize,
    /// Test hook: when false all `(u·∇)` terms are dropped.
    pub nonlinear: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            cfl: CFL_COEFF,
            max_dt: 1e-2,
            min_dt: 1e-10,
            sample_every: 10,
            nonlinear: true,
        }
    }
}

/// Time derivatives of the three unknowns.
#[derive(Debug, Clone)]
pub struct Tendency {
    pub du: VectorField,
    pub dtheta: ScalarField,
    pub dphi: ScalarField,
}

/// Explicit part of the right-hand side: `P[−(u·∇)u + α(θ+φ)g + f]`,
/// `−(u·∇)θ + ℓ`, `−(u·∇)φ + h`.
fn explicit_terms(state: &SimState, params: &PhysicsParams, forcing: &Forcing, nonlinear: bool) -> Result<Tendency> {
    let grid = state.grid();
    params.check_grid(grid)?;

    let buoyant = state.theta.axpy(1.0, &state.phi)?.scale(params.alpha);
    let mut force = VectorField::new(params.gravity.iter().map(|&g| buoyant.scale(g)).collect())?;
    if let Some(f) = forcing.velocity(state.t) {
        force = force.axpy(1.0, &f)?;
    }
    let mut dtheta = forcing.temperature(state.t).unwrap_or_else(|| ScalarField::zeros(grid));
    let mut dphi = forcing
        .concentration(state.t)
        .unwrap_or_else(|| ScalarField::zeros(grid));

    if nonlinear {
        force = force.axpy(-1.0, &convective_vector(&state.u, &state.u)?)?;
        dtheta = dtheta.axpy(-1.0, &convective_scalar(&state.u, &state.theta)?)?;
        dphi = dphi.axpy(-1.0, &convective_scalar(&state.u, &state.phi)?)?;
    }

    Ok(Tendency {
        du: leray_project(&force),
        dtheta,
        dphi,
    })
}

/// Full right-hand side including diffusion.
pub fn rhs(state: &SimState, params: &PhysicsParams, forcing: &Forcing) -> Result<Tendency> {
    rhs_with(state, params, forcing, true)
}

pub fn rhs_with(state: &SimState, params: &PhysicsParams, forcing: &Forcing, nonlinear: bool) -> Result<Tendency> {
    if !state.is_finite() {
        return Err(Error::BlowUp {
            t: state.t,
            grad_u_norm: state.grad_u_norm(),
        });
    }
    let ex = explicit_terms(state, params, forcing, nonlinear)?;
    let diffuse = |f: &ScalarField, nu: f64| laplacian(f).scale(nu);
    let tendency = Tendency {
        du: ex.du.axpy(1.0, &state.u.map(|c| diffuse(c, params.mu)))?,
        dtheta: ex.dtheta.axpy(1.0, &diffuse(&state.theta, params.kappa1))?,
        dphi: ex.dphi.axpy(1.0, &diffuse(&state.phi, params.kappa2))?,
    };
    let finite = tendency.du.is_finite() && tendency.dtheta.is_finite() && tendency.dphi.is_finite();
    if !finite {
        return Err(Error::BlowUp {
            t: state.t,
            grad_u_norm: state.grad_u_norm(),
        });
    }
    Ok(tendency)
}

/// `cfl · Δx / max(max|u|, 1e-12)`, capped at `max_dt`.
pub fn cfl_dt(state: &SimState, config: &SolverConfig) -> f64 {
    let umax = state.u.max_abs().max(VELOCITY_FLOOR);
    (config.cfl * state.grid().spacing() / umax).min(config.max_dt)
}

/// `exp(−ν|k|²Δt) (f̂ + Δt ĝ)` per mode.
fn integrate_mode(f: &ScalarField, g: &ScalarField, nu: f64, dt: f64) -> Result<ScalarField> {
    let grid = f.grid().clone();
    Ok(f.axpy(dt, g)?
        .map_spectral(|z, idx| z * (-nu * grid.wavenumber_sq(idx) * dt).exp()))
}

/// One IMEX step of size `dt`.
pub fn step(
    state: &SimState,
    params: &PhysicsParams,
    forcing: &Forcing,
    dt: f64,
    config: &SolverConfig,
) -> Result<SimState> {
    if !(dt > 0.0) {
        return Err(Error::arg("dt", format!("must be positive, got {dt}")));
    }
    let limit = cfl_dt(state, config);
    if dt > limit * (1.0 + 1e-12) {
        return Err(Error::CflViolation { dt, limit });
    }
    let blow_up = || Error::BlowUp {
        t: state.t,
        grad_u_norm: state.grad_u_norm(),
    };
    if !state.is_finite() {
        return Err(blow_up());
    }

    let ex = explicit_terms(state, params, forcing, config.nonlinear)?;
    let u_components = state
        .u
        .components()
        .iter()
        .zip(ex.du.components())
        .map(|(u, du)| integrate_mode(u, du, params.mu, dt))
        .collect::<Result<Vec<_>>>()?;
    let u = leray_project(&VectorField::new(u_components)?.with_zero_mean()).to_physical();
    let theta = integrate_mode(&state.theta, &ex.dtheta, params.kappa1, dt)?
        .with_zero_mean()
        .to_physical();
    let phi = integrate_mode(&state.phi, &ex.dphi, params.kappa2, dt)?
        .with_zero_mean()
        .to_physical();

    let next = SimState {
        u,
        theta,
        phi,
        t: state.t + dt,
    };
    if !next.is_finite() {
        return Err(blow_up());
    }
    Ok(next)
}

/// Why a run stopped.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum Termination {
    Completed,
    /// The CFL step fell below `min_dt`.
    CflFloor {
        t: f64,
        dt: f64,
    },
    /// A field became NaN/Inf; carries the last finite `‖∇u‖`.
    NonfiniteField {
        t: f64,
        grad_u_norm: f64,
    },
}

impl Termination {
    pub fn is_blow_up(&self) -> bool {
        !matches!(self, Termination::Completed)
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub final_state: SimState,
    pub steps: usize,
    pub termination: Termination,
}

/// Receives snapshots during [`run`]; must not retain mutable access to the
/// state.
pub trait Observer {
    fn observe(&mut self, state: &SimState, step: usize) -> Result<()>;
}

impl<F: FnMut(&SimState, usize) -> Result<()>> Observer for F {
    fn observe(&mut self, state: &SimState, step: usize) -> Result<()> {
        self(state, step)
    }
}

/// Steps from `initial` to `t_final`, calling `observer` on the initial
/// state, every `sample_every` steps and on the final state.
pub fn run(
    initial: SimState,
    params: &PhysicsParams,
    forcing: &Forcing,
    t_final: f64,
    config: &SolverConfig,
    observer: &mut dyn Observer,
) -> Result<RunOutcome> {
    params.validate()?;
    params.check_grid(initial.grid())?;
    if !(t_final >= initial.t) {
        return Err(Error::arg("t_final", "must not precede the initial time"));
    }
    let sample_every = config.sample_every.max(1);

    let mut state = initial;
    let mut steps = 0;
    let mut last_observed = 0;
    observer.observe(&state, 0)?;

    let termination = loop {
        let remaining = t_final - state.t;
        if remaining <= 0.0 {
            break Termination::Completed;
        }
        let limit = cfl_dt(&state, config);
        if limit < config.min_dt {
            break Termination::CflFloor { t: state.t, dt: limit };
        }
        let last = remaining <= limit;
        let dt = if last { remaining } else { limit };
        match step(&state, params, forcing, dt, config) {
            Ok(mut next) => {
                if last {
                    next.t = t_final;
                }
                state = next;
            }
            Err(Error::BlowUp { t, grad_u_norm }) => {
                break Termination::NonfiniteField { t, grad_u_norm };
            }
            Err(e) => return Err(e),
        }
        steps += 1;
        if steps % sample_every == 0 {
            observer.observe(&state, steps)?;
            last_observed = steps;
        }
    };

    if last_observed != steps && termination == Termination::Completed {
        observer.observe(&state, steps)?;
    }

    Ok(RunOutcome {
        final_state: state,
        steps,
        termination,
    })
}

/// Spectral amplitude of `f` at integer mode `m` (test helper for modal
/// analyses).
pub fn mode_amplitude(f: &ScalarField, m: [usize; 3]) -> Complex64 {
    let idx = f.grid().linear_index(m);
    f.spectral_values()[idx]
}
