use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::config::{ForcingPreset, InitialPreset, RunConfig};
use crate::dynamics::{Forcing, SimState};
use crate::error::Result;
use crate::grid::{cellular_mode, random_scalar, random_solenoidal, Grid, ScalarField, VectorField};

pub fn initial_state(config: &RunConfig, grid: &Grid) -> Result<SimState> {
    let spec = &config.initial;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let a = spec.amplitude;
    let k = 2.0 * PI / grid.length();
    let u = match spec.preset {
        InitialPreset::Zero => VectorField::zeros(grid),
        InitialPreset::TaylorGreen => VectorField::from_fn(grid, |x| {
            let z = if x.len() == 3 { (k * x[2]).cos() } else { 1.0 };
            [
                a * (k * x[0]).sin() * (k * x[1]).cos() * z,
                -a * (k * x[0]).cos() * (k * x[1]).sin() * z,
                0.0,
            ]
        }),
        InitialPreset::SingleMode => cellular_mode(grid, [1, 1, 1], a),
        InitialPreset::Random => random_solenoidal(grid, &mut rng, spec.spectral_decay, a),
    };
    let (theta, phi) = match spec.preset {
        InitialPreset::Zero => (ScalarField::zeros(grid), ScalarField::zeros(grid)),
        _ => (
            random_scalar(grid, &mut rng, spec.spectral_decay, spec.scalar_amplitude),
            random_scalar(grid, &mut rng, spec.spectral_decay, spec.scalar_amplitude),
        ),
    };
    SimState::new(u, theta, phi, 0.0)
}

pub fn forcing(config: &RunConfig, grid: &Grid) -> Forcing {
    let spec = &config.forcing;
    let a = spec.amplitude;
    let k = 2.0 * PI / grid.length() * spec.mode as f64;
    match spec.preset {
        ForcingPreset::None => Forcing::none(),
        ForcingPreset::Kolmogorov => {
            let f = VectorField::from_fn(grid, |x| [a * (k * x[1]).sin(), 0.0, 0.0]).with_zero_mean();
            Forcing::none().with_velocity(move |_| f.clone())
        }
        ForcingPreset::Heating => {
            let l = ScalarField::from_fn(grid, |x| a * (k * x[0]).sin() * (k * x[1]).cos()).with_zero_mean();
            Forcing::none().with_temperature(move |_| l.clone())
        }
    }
}
