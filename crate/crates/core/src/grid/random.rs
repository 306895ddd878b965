use rand::Rng;
use rand_distr::StandardNormal;

use super::{dealias, leray_project, Grid, ScalarField, VectorField};

/// Zero-mean random scalar field: white noise filtered by
/// `(1 + |k|^2 / k_1^2)^{-decay/2}`, truncated to the 2/3-rule band, and
/// rescaled to root-mean-square value `rms`.
pub fn random_scalar<R: Rng + ?Sized>(grid: &Grid, rng: &mut R, decay: f64, rms: f64) -> ScalarField {
    let noise: Vec<f64> = (0..grid.len()).map(|_| rng.sample(StandardNormal)).collect();
    let k1 = grid.first_eigenvalue();
    let f = ScalarField::from_physical(grid, noise)
        .expect("length matches grid")
        .with_zero_mean()
        .map_spectral(|z, idx| z * (1.0 + grid.wavenumber_sq(idx) / k1).powf(-decay / 2.0));
    normalize(dealias(&f), rms)
}

/// Divergence-free, zero-mean random velocity with the same spectral shape as
/// [`random_scalar`], rescaled so that `||u|| / |Ω|^{1/2} = rms`.
pub fn random_solenoidal<R: Rng + ?Sized>(grid: &Grid, rng: &mut R, decay: f64, rms: f64) -> VectorField {
    let raw = VectorField::new((0..grid.dim()).map(|_| random_scalar(grid, rng, decay, 1.0)).collect())
        .expect("components share the grid");
    let u = leray_project(&raw);
    let norm = u.norm();
    let target = rms * grid.volume().sqrt();
    if norm == 0.0 {
        u
    } else {
        u.scale(target / norm)
    }
}

/// Divergence-free cellular mode with stream-function structure
/// `sin(k1 x) sin(k2 y) cos(k3 z)` (integer mode numbers, `k3` ignored in 2-D).
pub fn cellular_mode(grid: &Grid, modes: [i64; 3], amplitude: f64) -> VectorField {
    let base = 2.0 * std::f64::consts::PI / grid.length();
    let (a, b) = (base * modes[0] as f64, base * modes[1] as f64);
    let c = if grid.dim() == 3 { base * modes[2] as f64 } else { 0.0 };
    VectorField::from_fn(grid, move |x| {
        let z = if x.len() == 3 { (c * x[2]).cos() } else { 1.0 };
        [
            amplitude * b * (a * x[0]).sin() * (b * x[1]).cos() * z,
            -amplitude * a * (a * x[0]).cos() * (b * x[1]).sin() * z,
            0.0,
        ]
    })
    .with_zero_mean()
}

fn normalize(f: ScalarField, rms: f64) -> ScalarField {
    let norm = f.spectral_norm();
    if norm == 0.0 {
        return f;
    }
    f.scale(rms * f.grid().volume().sqrt() / norm)
}
