//! Distribution function, weak and strong Lebesgue norms, and the layer cake.
//!
//! ```bash
//! cargo run -p obreg --example weak_norms
//! ```

use obreg::lebesgue::{TimeSeries, WeightedSamples};

fn main() -> obreg::Result<()> {
    // f(x) = x^{-1/2} on (0, 1] belongs to weak L² but not to L²
    for n in [1 << 10, 1 << 14, 1 << 18] {
        let h = 1.0 / n as f64;
        let f = WeightedSamples::uniform((1..=n).map(|i| (i as f64 * h).powf(-0.5)).collect(), h)?;
        println!(
            "n = {n:>6}  ‖f‖_(2,∞) = {:.4}  ‖f‖_2² = {:.3}  layer cake = {:.3}",
            f.weak_lp_norm(2.0)?,
            f.lp_norm(2.0)?.powi(2),
            f.layer_cake(2.0)?
        );
    }

    // a spike in time: the weak-in-time norm stays below the strong one
    let times: Vec<f64> = (0..=100).map(|i| i as f64 / 100.0).collect();
    let values = times.iter().map(|t| 1.0 / (t + 0.01).sqrt()).collect();
    let k = TimeSeries::from_samples(times, values)?;
    println!(
        "L²(0,1): {:.4}  L^(2,∞)(0,1): {:.4}",
        k.bochner_strong(2.0)?,
        k.bochner_weak(2.0)?
    );
    Ok(())
}
