//! Freely decaying 2-D turbulence with an energy budget check.
//!
//! ```bash
//! cargo run -p obreg --example decay_run --release
//! ```

use obreg::dynamics::{run, Forcing, PhysicsParams, SimState, SolverConfig};
use obreg::grid::{grad_norm_sq, random_solenoidal, Grid, ScalarField};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> obreg::Result<()> {
    let grid = Grid::new(2, 64, 2.0 * std::f64::consts::PI)?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let u = random_solenoidal(&grid, &mut rng, 2.0, 1.0);
    let initial = SimState::new(u, ScalarField::zeros(&grid), ScalarField::zeros(&grid), 0.0)?;
    let params = PhysicsParams::new(0.01, 0.01, 0.01, 0.0, vec![0.0, -1.0])?;
    let solver = SolverConfig {
        max_dt: 0.001,
        sample_every: 1,
        ..SolverConfig::default()
    };

    let mut last: Option<(f64, f64)> = None;
    let mut dissipated = 0.0;
    let e0 = 0.5 * initial.u.norm().powi(2);
    let out = run(
        initial,
        &params,
        &Forcing::none(),
        2.0,
        &solver,
        &mut |s: &SimState, step| {
            let enstrophy: f64 = s.u.components().iter().map(grad_norm_sq).sum();
            if let Some((t, z)) = last {
                dissipated += 0.5 * (s.t - t) * params.mu * (z + enstrophy);
            }
            last = Some((s.t, enstrophy));
            if step % 500 == 0 {
                println!(
                    "t = {:.3}  E = {:.6}  ‖∇u‖² = {:.4}",
                    s.t,
                    0.5 * s.u.norm().powi(2),
                    enstrophy
                );
            }
            Ok(())
        },
    )?;
    let e1 = 0.5 * out.final_state.u.norm().powi(2);
    println!(
        "steps {}  E(0) - E(T) = {:.6}  μ∫‖∇u‖² = {:.6}",
        out.steps,
        e0 - e1,
        dissipated
    );
    Ok(())
}
