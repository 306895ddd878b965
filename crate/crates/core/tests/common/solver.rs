//! Solver oracles shared by the dynamics tests and the acceptance suite.

use super::{gravity, random_state, record, torus};
use obreg::dynamics::{cfl_dt, mode_amplitude, run, step, Forcing, PhysicsParams, SimState, SolverConfig, Termination};
use obreg::grid::{cellular_mode, grad_norm_sq, Grid, ScalarField, VectorField};

/// Largest relative deviation of one mode per field from `e^{-ν|m|²dt}`
/// decay over `steps` linear steps.
pub fn modal_decay_error(steps: usize) -> f64 {
    let g = torus(2, 16);
    let p = params(0.07, 0.03, 0.0, 2);
    let u = cellular_mode(&g, [2, 1, 0], 1.0);
    let theta = ScalarField::from_fn(&g, |x| (3.0 * x[0] + x[1]).cos());
    let mut state = SimState::new(u, theta.clone(), theta, 0.0).unwrap();
    let cfg = SolverConfig {
        max_dt: 0.01,
        nonlinear: false,
        ..SolverConfig::default()
    };
    let (m, mt) = ([2, 1, 0], [3, 1, 0]);
    let mut worst: f64 = 0.0;
    for _ in 0..steps {
        let dt = cfl_dt(&state, &cfg);
        let next = step(&state, &p, &Forcing::none(), dt, &cfg).unwrap();
        let (fu, fs) = ((-0.07 * 5.0 * dt).exp(), (-0.03 * 10.0 * dt).exp());
        for (a, b, f) in [
            (
                mode_amplitude(state.u.component(0), m),
                mode_amplitude(next.u.component(0), m),
                fu,
            ),
            (mode_amplitude(&state.theta, mt), mode_amplitude(&next.theta, mt), fs),
            (mode_amplitude(&state.phi, mt), mode_amplitude(&next.phi, mt), fs),
        ] {
            worst = worst.max((b - a * f).norm() / a.norm());
        }
        state = next;
    }
    worst
}

pub fn params(mu: f64, kappa: f64, alpha: f64, dim: usize) -> PhysicsParams {
    PhysicsParams::new(mu, kappa, kappa, alpha, gravity(dim)).unwrap()
}

/// Exact solution `u = (a sin y, b sin 2x)`, `θ = c cos(x+y)`,
/// `φ = d sin(x-y)` with the forcing that sustains it.
pub struct Manufactured {
    pub mu: f64,
    pub kappa: f64,
    pub alpha: f64,
}

impl Manufactured {
    pub fn coeffs(t: f64) -> [(f64, f64); 4] {
        // (value, derivative)
        [
            (t.cos(), -t.sin()),
            (1.0 + 0.5 * t.sin(), 0.5 * t.cos()),
            ((-0.5 * t).exp(), -0.5 * (-0.5 * t).exp()),
            (1.0 / (1.0 + t), -1.0 / (1.0 + t).powi(2)),
        ]
    }

    pub fn state(&self, g: &Grid, t: f64) -> SimState {
        let [(a, _), (b, _), (c, _), (d, _)] = Self::coeffs(t);
        SimState::from_parts(
            VectorField::from_fn(g, |x| [a * x[1].sin(), b * (2.0 * x[0]).sin(), 0.0]),
            ScalarField::from_fn(g, |x| c * (x[0] + x[1]).cos()),
            ScalarField::from_fn(g, |x| d * (x[0] - x[1]).sin()),
            t,
        )
        .unwrap()
    }

    pub fn forcing(&self, g: &Grid) -> Forcing {
        let (mu, kappa, alpha) = (self.mu, self.kappa, self.alpha);
        let (g1, g2, g3) = (g.clone(), g.clone(), g.clone());
        Forcing::none()
            .with_velocity(move |t| {
                let [(a, da), (b, db), (c, _), (d, _)] = Self::coeffs(t);
                VectorField::from_fn(&g1, |x| {
                    let (sy, s2x) = (x[1].sin(), (2.0 * x[0]).sin());
                    let buoy = alpha * (c * (x[0] + x[1]).cos() + d * (x[0] - x[1]).sin());
                    [
                        da * sy + b * s2x * a * x[1].cos() + mu * a * sy,
                        db * s2x + a * sy * 2.0 * b * (2.0 * x[0]).cos() + 4.0 * mu * b * s2x + buoy,
                        0.0,
                    ]
                })
            })
            .with_temperature(move |t| {
                let [(a, _), (b, _), (c, dc), _] = Self::coeffs(t);
                ScalarField::from_fn(&g2, |x| {
                    let s = x[0] + x[1];
                    let u = (a * x[1].sin(), b * (2.0 * x[0]).sin());
                    dc * s.cos() - (u.0 + u.1) * c * s.sin() + 2.0 * kappa * c * s.cos()
                })
            })
            .with_concentration(move |t| {
                let [(a, _), (b, _), _, (d, dd)] = Self::coeffs(t);
                ScalarField::from_fn(&g3, |x| {
                    let s = x[0] - x[1];
                    let u = (a * x[1].sin(), b * (2.0 * x[0]).sin());
                    dd * s.sin() + (u.0 - u.1) * d * s.cos() + 2.0 * kappa * d * s.sin()
                })
            })
    }

    pub fn error(&self, g: &Grid, dt: f64, t_final: f64) -> f64 {
        let p = params(self.mu, self.kappa, self.alpha, 2);
        let cfg = SolverConfig {
            max_dt: dt,
            sample_every: usize::MAX,
            ..SolverConfig::default()
        };
        let out = run(
            self.state(g, 0.0),
            &p,
            &self.forcing(g),
            t_final,
            &cfg,
            &mut |_: &SimState, _| Ok(()),
        )
        .unwrap();
        assert_eq!(out.termination, Termination::Completed);
        let exact = self.state(g, t_final);
        let s = &out.final_state;
        let du = s.u.axpy(-1.0, &exact.u).unwrap().norm();
        let dth = s.theta.axpy(-1.0, &exact.theta).unwrap().norm();
        let dph = s.phi.axpy(-1.0, &exact.phi).unwrap().norm();
        (du * du + dth * dth + dph * dph).sqrt()
    }
}

pub fn kinetic(s: &SimState) -> f64 {
    0.5 * s.u.norm().powi(2)
}

pub fn enstrophy(s: &SimState) -> f64 {
    s.u.components().iter().map(grad_norm_sq).sum()
}

/// `|ΔE + μ∫‖∇u‖²| / (μ∫‖∇u‖²)` for an unforced run.
pub fn energy_budget_error(n: usize, mu: f64, t_final: f64) -> f64 {
    let g = torus(2, n);
    let p = params(mu, mu, 0.0, 2);
    let cfg = SolverConfig {
        max_dt: 1e-3,
        sample_every: 1,
        ..SolverConfig::default()
    };
    let traj = record(random_state(&g, 17, 1.0, 0.0), &p, &Forcing::none(), t_final, &cfg);
    let s = traj.samples();
    let mut dissipation = 0.0;
    for w in s.windows(2) {
        let dt = w[1].state.t - w[0].state.t;
        dissipation += 0.5 * dt * mu * (enstrophy(&w[0].state) + enstrophy(&w[1].state));
    }
    let de = kinetic(&s.last().unwrap().state) - kinetic(&s[0].state);
    (de + dissipation).abs() / dissipation
}
