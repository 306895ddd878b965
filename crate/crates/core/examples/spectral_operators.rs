//! Leray projection, the Stokes operator and advection on a 2-D torus.
//!
//! ```bash
//! cargo run -p obreg --example spectral_operators
//! ```

use obreg::grid::{
    cellular_mode, convective_scalar, divergence, leray_project, random_scalar, random_solenoidal, stokes_apply, Grid,
    VectorField,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> obreg::Result<()> {
    let grid = Grid::new(2, 32, 2.0 * std::f64::consts::PI)?;

    // a gradient plus a cellular flow; projection removes the gradient
    let flow = cellular_mode(&grid, [1, 2, 0], 1.0);
    let mixed = VectorField::from_fn(&grid, |x| [x[0].cos() + x[1].sin(), (2.0 * x[1]).cos(), 0.0]);
    let projected = leray_project(&mixed);
    println!(
        "‖∇·v‖   before {:.3e}  after {:.3e}",
        divergence(&mixed).norm(),
        divergence(&projected).norm()
    );

    // cellular modes are Stokes eigenfunctions with eigenvalue |k|²
    let au = stokes_apply(&flow);
    println!("‖Au‖ / ‖u‖ = {:.12} (|k|² = 5)", au.field.norm() / flow.norm());

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let u = random_solenoidal(&grid, &mut rng, 2.0, 1.0);
    let theta = random_scalar(&grid, &mut rng, 2.0, 1.0);
    let pairing = convective_scalar(&u, &theta)?.inner(&theta)?;
    println!("((u·∇)θ, θ) = {pairing:.3e}");
    Ok(())
}
