//! Time-convergence order against a forced Taylor-Green vortex.
//!
//! `u = a(t) (sin x cos y, -cos x sin y)` with `a = 1 + sin t` solves the
//! forced system exactly: its advection is a pure gradient, so the forcing
//! only has to balance `∂t u - μΔu`.
//!
//! ```bash
//! cargo run -p obreg --example manufactured_convergence --release
//! ```

use obreg::dynamics::{run, Forcing, PhysicsParams, SimState, SolverConfig};
use obreg::grid::{Grid, ScalarField, VectorField};

const MU: f64 = 0.1;

fn vortex(grid: &Grid, a: f64) -> VectorField {
    VectorField::from_fn(grid, |x| {
        [a * x[0].sin() * x[1].cos(), -a * x[0].cos() * x[1].sin(), 0.0]
    })
}

fn error(grid: &Grid, dt: f64, t_final: f64) -> obreg::Result<f64> {
    let g = grid.clone();
    let forcing = Forcing::none().with_velocity(move |t| vortex(&g, t.cos() + 2.0 * MU * (1.0 + t.sin())));
    let initial = SimState::new(
        vortex(grid, 1.0),
        ScalarField::zeros(grid),
        ScalarField::zeros(grid),
        0.0,
    )?;
    let params = PhysicsParams::new(MU, 0.1, 0.1, 0.0, vec![0.0, -1.0])?;
    let solver = SolverConfig {
        max_dt: dt,
        sample_every: usize::MAX,
        ..SolverConfig::default()
    };
    let out = run(initial, &params, &forcing, t_final, &solver, &mut |_: &SimState, _| {
        Ok(())
    })?;
    let exact = vortex(grid, 1.0 + t_final.sin());
    out.final_state.u.axpy(-1.0, &exact).map(|d| d.norm())
}

fn main() -> obreg::Result<()> {
    let grid = Grid::new(2, 16, 2.0 * std::f64::consts::PI)?;
    let mut previous: Option<f64> = None;
    for dt in [0.02, 0.01, 0.005, 0.0025] {
        let e = error(&grid, dt, 1.0)?;
        match previous {
            Some(p) => println!("dt = {dt:<7} error = {e:.4e}  order = {:.3}", (p / e).log2()),
            None => println!("dt = {dt:<7} error = {e:.4e}"),
        }
        previous = Some(e);
    }
    Ok(())
}
