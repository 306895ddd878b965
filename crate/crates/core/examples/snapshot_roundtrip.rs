//! Write a state to the binary snapshot format and read it back.
//!
//! ```bash
//! cargo run -p obreg --example snapshot_roundtrip
//! ```

use obreg::dynamics::SimState;
use obreg::grid::{random_scalar, random_solenoidal, Grid};
use obreg::io::{read_frame, read_snapshot, write_snapshot};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> obreg::Result<()> {
    let grid = Grid::new(3, 16, 1.0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let state = SimState::new(
        random_solenoidal(&grid, &mut rng, 2.0, 1.0),
        random_scalar(&grid, &mut rng, 2.0, 1.0),
        random_scalar(&grid, &mut rng, 2.0, 1.0),
        0.25,
    )?;

    let path = std::env::temp_dir().join("obreg_example.obrg");
    write_snapshot(&state, &path)?;
    let frame = read_frame(&path)?;
    println!("dim {} n {} L {} t {}", frame.dim, frame.n, frame.length, frame.t);
    for (name, comps) in &frame.fields {
        println!("  {name}: {} component(s)", comps.len());
    }
    let back = read_snapshot(&path)?;
    let same = state.u.axpy(-1.0, &back.u)?.norm() == 0.0 && state.theta.axpy(-1.0, &back.theta)?.norm() == 0.0;
    println!("round trip exact: {same}");
    std::fs::remove_file(&path).ok();
    Ok(())
}
