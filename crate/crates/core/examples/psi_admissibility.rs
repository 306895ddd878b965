//! Search for an admissible (ε, δ) pair on small and large initial data.
//!
//! ```bash
//! cargo run -p obreg --example psi_admissibility --release
//! ```

use obreg::dynamics::{run, Forcing, PhysicsParams, SimState, SolverConfig};
use obreg::grid::{cellular_mode, Grid, ScalarField};
use obreg::monitor::{build_report, calibrate, FamilyKind, FieldFamily, MonitorConfig, Trajectory};
use obreg::ProdiSerrinPair;

fn main() -> obreg::Result<()> {
    let grid = Grid::new(2, 16, 2.0 * std::f64::consts::PI)?;
    let config = MonitorConfig {
        pairs: vec![ProdiSerrinPair::new(f64::INFINITY, 2.0)?],
        ..MonitorConfig::default()
    };
    let constants = calibrate(
        &FieldFamily::new(&grid, 0, 50, FamilyKind::Mixed)?,
        &config.pairs,
        &config.all_eps(),
    )?;
    let params = PhysicsParams::new(1.0, 1.0, 1.0, 0.0, vec![0.0, -1.0])?;
    let solver = SolverConfig {
        max_dt: 0.01,
        sample_every: 5,
        ..SolverConfig::default()
    };

    for amplitude in [1e-3, 1e-1, 1.0, 10.0] {
        let u = cellular_mode(&grid, [1, 1, 0], amplitude);
        let initial = SimState::new(u, ScalarField::zeros(&grid), ScalarField::zeros(&grid), 0.0)?;
        let mut traj = Trajectory::new();
        run(
            initial,
            &params,
            &Forcing::none(),
            1.0,
            &solver,
            &mut |s: &SimState, _| traj.push(s.clone(), &Forcing::none()),
        )?;
        let report = build_report(&traj, &params, Some(&constants), &config)?;
        let psi = report.pairs[0].psi.as_ref().expect("calibrated");
        match &psi.chosen {
            Some(b) => println!(
                "amplitude {amplitude:>6}: ε = {} δ = {} bound {:.3e} contained {}",
                b.eps,
                b.delta,
                b.bound,
                b.all_contained()
            ),
            None => {
                let first = &psi.candidates[0];
                println!(
                    "amplitude {amplitude:>6}: none admissible, e.g. ε = {} δ = {}: {:?}",
                    first.eps, first.delta, first.violated
                );
            }
        }
    }
    Ok(())
}
