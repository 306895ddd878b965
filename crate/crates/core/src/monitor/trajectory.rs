use crate::dynamics::{Forcing, SimState};
use crate::error::{Error, Result};
use crate::grid::{grad_norm_sq, stokes_norm_sq};
use crate::lebesgue::{TimeSeries, WeightedSamples};

/// One monitored snapshot together with the source norms at its time.
#[derive(Debug, Clone)]
pub struct Sample {
    pub state: SimState,
    /// `(‖f(t)‖, ‖ℓ(t)‖, ‖h(t)‖)`.
    pub forcing_norms: [f64; 3],
}

/// Snapshots with strictly increasing times on a shared grid.
#[derive(Debug, Clone, Default)]
pub struct Trajectory {
    samples: Vec<Sample>,
}

impl Trajectory {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_states(states: Vec<SimState>, forcing: &Forcing) -> Result<Self> {
        let mut traj = Trajectory::new();
        for s in states {
            traj.push(s, forcing)?;
        }
        Ok(traj)
    }

    pub fn push(&mut self, state: SimState, forcing: &Forcing) -> Result<()> {
        if let Some(last) = self.samples.last() {
            last.state.grid().ensure_same(state.grid())?;
            if !(state.t > last.state.t) {
                return Err(Error::NonMonotoneTime {
                    index: self.samples.len(),
                    t: state.t,
                });
            }
        }
        let forcing_norms = forcing.norms(state.t);
        self.samples.push(Sample { state, forcing_norms });
        Ok(())
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.state.t).collect()
    }

    /// Every velocity multiplied by `factor`; scalars and sources unchanged.
    pub fn with_scaled_velocity(&self, factor: f64) -> Trajectory {
        Trajectory {
            samples: self
                .samples
                .iter()
                .map(|s| Sample {
                    state: s.state.with_scaled_velocity(factor),
                    forcing_norms: s.forcing_norms,
                })
                .collect(),
        }
    }

    /// Spatial weak norms `‖u(t)‖_{r,∞}` per sample.
    pub fn weak_velocity_norms(&self, r: f64) -> Result<Vec<f64>> {
        self.samples
            .iter()
            .map(|s| WeightedSamples::from_magnitude(&s.state.u).weak_lp_norm(r))
            .collect()
    }

    /// A series over the sample times with dual-cell weights.
    pub(crate) fn series(&self, values: Vec<f64>) -> Result<TimeSeries> {
        TimeSeries::from_samples(self.times(), values)
    }

    pub fn diagnostics(&self) -> Vec<Diagnostics> {
        self.samples.iter().map(Diagnostics::of).collect()
    }
}

/// Squared norms entering the enstrophy and scalar estimates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    pub t: f64,
    /// `‖∇u‖²`, the enstrophy `E(t)`.
    pub enstrophy: f64,
    pub grad_theta_sq: f64,
    pub grad_phi_sq: f64,
    /// `‖Au‖²`.
    pub stokes_sq: f64,
    pub f_sq: f64,
    pub ell_sq: f64,
    pub h_sq: f64,
}

impl Diagnostics {
    fn of(sample: &Sample) -> Self {
        let s = &sample.state;
        let [f, ell, h] = sample.forcing_norms;
        Diagnostics {
            t: s.t,
            enstrophy: s.u.components().iter().map(grad_norm_sq).sum(),
            grad_theta_sq: grad_norm_sq(&s.theta),
            grad_phi_sq: grad_norm_sq(&s.phi),
            stokes_sq: stokes_norm_sq(&s.u),
            f_sq: f * f,
            ell_sq: ell * ell,
            h_sq: h * h,
        }
    }
}

/// Trapezoidal running integral `∫_{t_0}^{t_i} v`.
pub(crate) fn cumulative_integral(times: &[f64], values: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    let mut out = Vec::with_capacity(times.len());
    for i in 0..times.len() {
        if i > 0 {
            acc += 0.5 * (times[i] - times[i - 1]) * (values[i] + values[i - 1]);
        }
        out.push(acc);
    }
    out
}

/// Total trapezoidal integral over the sample times.
pub(crate) fn integral(times: &[f64], values: &[f64]) -> f64 {
    cumulative_integral(times, values).last().copied().unwrap_or(0.0)
}

/// Centered differences at interior samples, one-sided at the ends.
pub(crate) fn time_derivative(times: &[f64], values: &[f64]) -> Vec<f64> {
    let m = times.len();
    (0..m)
        .map(|i| {
            let (a, b) = match i {
                0 => (0, 1),
                _ if i + 1 == m => (m - 2, m - 1),
                _ => (i - 1, i + 1),
            };
            (values[b] - values[a]) / (times[b] - times[a])
        })
        .collect()
}
