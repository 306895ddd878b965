#![allow(dead_code)]

use std::f64::consts::PI;

use obreg::dynamics::{run, Forcing, PhysicsParams, SimState, SolverConfig};
use obreg::grid::{random_scalar, random_solenoidal, Grid, ScalarField, VectorField};
use obreg::monitor::Trajectory;
use obreg::scenario::RunConfig;

pub mod solver;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn torus(dim: usize, n: usize) -> Grid {
    Grid::new(dim, n, 2.0 * PI).unwrap()
}

pub fn random_state(grid: &Grid, seed: u64, u_rms: f64, scalar_rms: f64) -> SimState {
    let mut r = rng(seed);
    SimState::new(
        random_solenoidal(grid, &mut r, 2.0, u_rms),
        random_scalar(grid, &mut r, 2.0, scalar_rms),
        random_scalar(grid, &mut r, 2.0, scalar_rms),
        0.0,
    )
    .unwrap()
}

/// A generic vector field, not divergence-free.
pub fn random_vector(grid: &Grid, seed: u64) -> VectorField {
    let mut r = rng(seed);
    VectorField::new((0..grid.dim()).map(|_| random_scalar(grid, &mut r, 1.0, 1.0)).collect()).unwrap()
}

pub fn gravity(dim: usize) -> Vec<f64> {
    let mut g = vec![0.0; dim];
    g[dim - 1] = -1.0;
    g
}

/// Runs the solver and records every observed state.
pub fn record(
    initial: SimState,
    params: &PhysicsParams,
    forcing: &Forcing,
    t_final: f64,
    solver: &SolverConfig,
) -> Trajectory {
    let mut traj = Trajectory::new();
    run(initial, params, forcing, t_final, solver, &mut |s: &SimState, _| {
        traj.push(s.clone(), forcing)
    })
    .unwrap();
    traj
}

pub fn max_abs_diff(a: &ScalarField, b: &ScalarField) -> f64 {
    a.physical_values()
        .iter()
        .zip(b.physical_values().iter())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// The buoyancy scenario used across monitor and CLI tests: fluid at rest,
/// random zero-mean temperature and concentration, `α = 0.5`.
pub fn buoyancy_toml(out_dir: &std::path::Path) -> String {
    format!(
        r#"
[grid]
dim = 2
n = 32

[physics]
mu = 0.05
kappa1 = 0.05
kappa2 = 0.05
alpha = 0.5
g = [0.0, -1.0]

[initial]
preset = "convection"
seed = 3
amplitude = 0.0
scalar_amplitude = 1.0

[time]
T = 1.0
max_dt = 0.01
sample_every = 5

[monitor]
pairs = [{{ r = inf, s = 2.0 }}, {{ r = 6.0, s = 4.0 }}, {{ r = 9.0, s = 3.0 }}]
eps = [0.5, 0.1]

[monitor.calibration]
mode = "fresh"
seed = 11
count = 50

[output]
dir = "{}"
"#,
        out_dir.display()
    )
}

pub fn buoyancy_config(out_dir: &std::path::Path) -> RunConfig {
    RunConfig::from_toml(&buoyancy_toml(out_dir)).unwrap()
}

/// Samples of `|x - x₀|^{-dim/p}` on an `n`-point 2-D torus of side 1, with
/// `x₀` at a cell centre and periodic distance.
pub fn singular_samples(n: usize, p: f64) -> obreg::lebesgue::WeightedSamples {
    let h = 1.0 / n as f64;
    let x0 = [0.5 + 0.5 * h, 0.5 + 0.5 * h];
    let mut values = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let d = |a: f64, b: f64| {
                let t = (a - b).abs();
                t.min(1.0 - t)
            };
            let (dx, dy) = (d(i as f64 * h, x0[0]), d(j as f64 * h, x0[1]));
            values.push((dx * dx + dy * dy).sqrt().powf(-2.0 / p));
        }
    }
    obreg::lebesgue::WeightedSamples::uniform(values, h * h).unwrap()
}

pub fn random_samples(seed: u64, len: usize) -> obreg::lebesgue::WeightedSamples {
    use rand::Rng;
    let mut r = rng(seed);
    let values = (0..len).map(|_| r.gen_range(-5.0..5.0)).collect();
    let weights = (0..len).map(|_| r.gen_range(0.01..1.0)).collect();
    obreg::lebesgue::WeightedSamples::new(values, weights).unwrap()
}

/// Unforced, buoyancy-free decay of one cellular mode at `μ = 1` on a 16²
/// torus, with `max|u₀|` set to `factor` times the smallest weak-in-time
/// threshold of `(∞, 2)` over the `ε` search grid. Returns the report and
/// that threshold.
pub fn small_data_run(factor: f64) -> (obreg::monitor::MonitorReport, f64) {
    use obreg::monitor::{build_report, calibrate, gamma_threshold, FamilyKind, FieldFamily, MonitorConfig};
    use obreg::ProdiSerrinPair;

    let g = torus(2, 16);
    let pair = ProdiSerrinPair::new(f64::INFINITY, 2.0).unwrap();
    let config = MonitorConfig {
        pairs: vec![pair],
        ..MonitorConfig::default()
    };
    let constants = calibrate(
        &FieldFamily::new(&g, 0, 50, FamilyKind::Mixed).unwrap(),
        &config.pairs,
        &config.all_eps(),
    )
    .unwrap();
    let params = PhysicsParams::new(1.0, 1.0, 1.0, 0.0, gravity(2)).unwrap();
    let c_s = constants.convective_for(&pair).unwrap();
    let threshold = config
        .eps_grid
        .iter()
        .map(|&e| {
            let c2 = constants.interpolation_for(&pair, e).unwrap();
            gamma_threshold(&pair, c_s, c2, params.mu).unwrap().threshold
        })
        .fold(f64::INFINITY, f64::min);
    let mode = obreg::grid::cellular_mode(&g, [1, 1, 0], 1.0);
    let peak = mode.magnitude().into_iter().fold(0.0, f64::max);
    let u0 = mode.scale(factor * threshold / peak);
    let initial = SimState::new(u0, ScalarField::zeros(&g), ScalarField::zeros(&g), 0.0).unwrap();
    let solver = SolverConfig {
        max_dt: 0.01,
        sample_every: 5,
        ..SolverConfig::default()
    };
    let traj = record(initial, &params, &obreg::dynamics::Forcing::none(), 1.0, &solver);
    (
        build_report(&traj, &params, Some(&constants), &config).unwrap(),
        threshold,
    )
}
