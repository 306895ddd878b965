//! Buoyancy-driven run with calibrated constants and the full monitor report.
//!
//! ```bash
//! cargo run -p obreg --example buoyancy_monitor --release
//! ```

use obreg::dynamics::{run, Forcing, PhysicsParams, SimState, SolverConfig};
use obreg::grid::{random_scalar, Grid, VectorField};
use obreg::monitor::{build_report, calibrate, FamilyKind, FieldFamily, MonitorConfig, Trajectory};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> obreg::Result<()> {
    let grid = Grid::new(2, 32, 2.0 * std::f64::consts::PI)?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let theta = random_scalar(&grid, &mut rng, 2.0, 1.0);
    let phi = random_scalar(&grid, &mut rng, 2.0, 1.0);
    let initial = SimState::new(VectorField::zeros(&grid), theta, phi, 0.0)?;
    let params = PhysicsParams::new(0.05, 0.05, 0.05, 0.5, vec![0.0, -1.0])?;
    let forcing = Forcing::none();
    let solver = SolverConfig {
        max_dt: 0.01,
        sample_every: 5,
        ..SolverConfig::default()
    };

    let mut traj = Trajectory::new();
    run(initial, &params, &forcing, 1.0, &solver, &mut |s: &SimState, _| {
        traj.push(s.clone(), &forcing)
    })?;

    let config = MonitorConfig::default();
    let family = FieldFamily::new(&grid, 11, 50, FamilyKind::Mixed)?;
    let constants = calibrate(&family, &config.pairs, &config.all_eps())?;
    let report = build_report(&traj, &params, Some(&constants), &config)?;

    for p in &report.pairs {
        let env = p.velocity_envelope.as_ref().expect("calibrated");
        println!(
            "{}  ‖u‖_(L^s L^(r,∞)) = {:.4}  envelope M = {:.3e}  rate = {:.3e}  contained: {}",
            p.pair,
            p.theorem1.strong_time_norm,
            env.constant,
            env.rate,
            env.all_contained()
        );
        for v in &p.theorem2 {
            println!(
                "    ε = {}  {:?}  margin {:.3e}",
                v.eps,
                v.status,
                v.margin.unwrap_or(f64::NAN)
            );
        }
    }
    let theta_env = report.theta_envelope.as_ref().expect("calibrated");
    println!("‖∇θ‖² envelope contained: {}", theta_env.all_contained());
    Ok(())
}
