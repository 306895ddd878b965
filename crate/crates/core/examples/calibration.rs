//! Calibrate inequality constants on one seeded family and check them on another.
//!
//! ```bash
//! cargo run -p obreg --example calibration --release
//! ```

use obreg::grid::Grid;
use obreg::monitor::{calibrate, held_out_containment, FamilyKind, FieldFamily, MonitorConfig};

fn main() -> obreg::Result<()> {
    let grid = Grid::new(2, 32, 2.0 * std::f64::consts::PI)?;
    let config = MonitorConfig::default();
    let eps = config.all_eps();
    let constants = calibrate(&FieldFamily::new(&grid, 1, 50, FamilyKind::Mixed)?, &config.pairs, &eps)?;
    println!("embedding  {:.4e}", constants.embedding);
    println!("advection  {:.4e}", constants.advection);
    for c in &constants.convective {
        println!("convective {}  {:.4e}", c.pair, c.value);
    }

    let fresh = FieldFamily::new(&grid, 2, 50, FamilyKind::Mixed)?;
    for row in held_out_containment(&constants, &fresh, &config.pairs, &eps)? {
        println!("{:<40} {}/{}", row.inequality, row.contained, row.total);
    }
    Ok(())
}
