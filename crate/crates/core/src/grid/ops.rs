use num_complex::Complex64;

use super::{Grid, ScalarField, VectorField, STOKES_DIVERGENCE_WARNING};
use crate::error::Result;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

pub fn gradient(f: &ScalarField) -> VectorField {
    let grid = f.grid();
    let coeffs = f.spectral_values();
    let components = (0..grid.dim())
        .map(|axis| {
            let c = coeffs
                .iter()
                .enumerate()
                .map(|(idx, &z)| I * grid.wavevector(idx)[axis] * z)
                .collect();
            ScalarField::from_spectral(grid, c)
                .expect("length matches grid")
                .set_zero_mean_flag(true)
        })
        .collect();
    VectorField::new(components).expect("components share the grid")
}

pub fn divergence(v: &VectorField) -> ScalarField {
    let grid = v.grid();
    let mut acc = vec![Complex64::default(); grid.len()];
    for (axis, comp) in v.components().iter().enumerate() {
        let c = comp.spectral_values();
        for (idx, a) in acc.iter_mut().enumerate() {
            *a += I * grid.wavevector(idx)[axis] * c[idx];
        }
    }
    ScalarField::from_spectral(grid, acc)
        .expect("length matches grid")
        .set_zero_mean_flag(true)
}

pub fn laplacian(f: &ScalarField) -> ScalarField {
    let grid = f.grid().clone();
    f.map_spectral(|z, idx| -grid.wavenumber_sq(idx) * z)
        .set_zero_mean_flag(true)
}

/// `||grad f||^2`, evaluated spectrally.
pub fn grad_norm_sq(f: &ScalarField) -> f64 {
    let grid = f.grid();
    let c = f.spectral_values();
    let sum: f64 = c
        .iter()
        .enumerate()
        .map(|(idx, z)| {
            let k = grid.wavevector(idx);
            (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) * z.norm_sqr()
        })
        .sum();
    sum * grid.cell_volume()
}

/// Helmholtz-Leray projection onto divergence-free fields: each mode is
/// mapped by `I - k k^T / |k|^2`; the zero mode passes through.
pub fn leray_project(v: &VectorField) -> VectorField {
    let grid = v.grid();
    let dim = grid.dim();
    let coeffs: Vec<_> = v.components().iter().map(|c| c.spectral_values()).collect();
    let mut out: Vec<Vec<Complex64>> = vec![vec![Complex64::default(); grid.len()]; dim];
    for idx in 0..grid.len() {
        let k = grid.wavevector(idx);
        let k2: f64 = k[..dim].iter().map(|x| x * x).sum();
        if k2 == 0.0 {
            for axis in 0..dim {
                out[axis][idx] = coeffs[axis][idx];
            }
            continue;
        }
        let mut kdotv = Complex64::default();
        for axis in 0..dim {
            kdotv += coeffs[axis][idx] * k[axis];
        }
        let kdotv = kdotv / k2;
        for axis in 0..dim {
            out[axis][idx] = coeffs[axis][idx] - kdotv * k[axis];
        }
    }
    let components = out
        .into_iter()
        .zip(v.components())
        .map(|(c, orig)| {
            ScalarField::from_spectral(grid, c)
                .expect("length matches grid")
                .set_zero_mean_flag(orig.is_zero_mean())
        })
        .collect();
    VectorField::new(components).expect("components share the grid")
}

/// Result of applying the Stokes operator, with the input-divergence
/// diagnostic.
#[derive(Debug, Clone)]
pub struct StokesOutput {
    pub field: VectorField,
    /// `||div u|| / ||grad u||` of the input (0 for the zero field).
    pub input_divergence: f64,
    pub divergence_warning: bool,
}

/// `A u = -P Δ u`.
pub fn stokes_apply(u: &VectorField) -> StokesOutput {
    let grad = u.components().iter().map(grad_norm_sq).sum::<f64>().sqrt();
    let div = divergence(u).norm();
    let input_divergence = if grad > 0.0 { div / grad } else { div };
    let neg_lap = u.map(|c| laplacian(c).scale(-1.0));
    StokesOutput {
        field: leray_project(&neg_lap),
        input_divergence,
        divergence_warning: input_divergence > STOKES_DIVERGENCE_WARNING,
    }
}

/// `||A u||^2`.
pub fn stokes_norm_sq(u: &VectorField) -> f64 {
    stokes_apply(u).field.spectral_norm().powi(2)
}

/// Zeroes every mode removed by the 2/3 rule.
pub fn dealias(f: &ScalarField) -> ScalarField {
    let grid = f.grid().clone();
    f.map_spectral(|z, idx| if grid.is_retained(idx) { z } else { Complex64::default() })
}

pub fn dealias_vector(v: &VectorField) -> VectorField {
    v.map(dealias)
}

/// Dealiased velocity samples, shared across the products of one
/// convective evaluation.
struct Advector {
    grid: Grid,
    samples: Vec<Vec<f64>>,
}

impl Advector {
    fn new(u: &VectorField) -> Self {
        let samples = u
            .components()
            .iter()
            .map(|c| dealias(c).physical_values().into_owned())
            .collect();
        Advector {
            grid: u.grid().clone(),
            samples,
        }
    }

    fn apply(&self, phi: &ScalarField) -> Result<ScalarField> {
        self.grid.ensure_same(phi.grid())?;
        let grad = gradient(&dealias(phi));
        let mut acc = vec![0.0; self.grid.len()];
        for (u_j, d_j) in self.samples.iter().zip(grad.components()) {
            let d = d_j.physical_values();
            for ((a, u), g) in acc.iter_mut().zip(u_j).zip(d.iter()) {
                *a += u * g;
            }
        }
        let product = ScalarField::from_physical(&self.grid, acc)?;
        Ok(dealias(&product))
    }
}

/// `(u . grad) phi`, products formed from 2/3-truncated factors and the
/// result truncated again.
pub fn convective_scalar(u: &VectorField, phi: &ScalarField) -> Result<ScalarField> {
    u.grid().ensure_same(phi.grid())?;
    Advector::new(u).apply(phi)
}

/// `(u . grad) v`, componentwise as in [`convective_scalar`].
pub fn convective_vector(u: &VectorField, v: &VectorField) -> Result<VectorField> {
    u.grid().ensure_same(v.grid())?;
    let adv = Advector::new(u);
    let components = v.components().iter().map(|c| adv.apply(c)).collect::<Result<_>>()?;
    VectorField::new(components)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn grid2() -> Grid {
        Grid::new(2, 16, 2.0 * PI).unwrap()
    }

    fn rel_err(a: &ScalarField, b: &ScalarField) -> f64 {
        a.axpy(-1.0, b).unwrap().norm() / b.norm().max(1e-300)
    }

    #[test]
    fn gradient_of_constant_vanishes() {
        let g = grid2();
        let grad = gradient(&ScalarField::constant(&g, 4.0));
        assert!(grad.norm() < 1e-12);
    }

    #[test]
    fn laplacian_eigenfunction() {
        let l = 3.0;
        let g = Grid::new(2, 16, l).unwrap();
        let k = 2.0 * PI / l;
        let f = ScalarField::from_fn(&g, |x| (k * x[0]).sin());
        let expected = f.scale(-k * k);
        assert!(rel_err(&laplacian(&f), &expected) < 1e-12);
    }

    #[test]
    fn projection_annihilates_gradients() {
        let g = grid2();
        let chi = ScalarField::from_fn(&g, |x| (x[0]).sin() * (2.0 * x[1]).cos() + (x[1]).cos());
        let p = leray_project(&gradient(&chi));
        assert!(p.norm() < 1e-10);
    }

    #[test]
    fn projection_fixes_divergence_free() {
        let g = grid2();
        let u = VectorField::from_fn(&g, |x| [x[0].sin() * x[1].cos(), -x[0].cos() * x[1].sin(), 0.0]);
        let p = leray_project(&u);
        assert!(p.axpy(-1.0, &u).unwrap().norm() < 1e-12 * u.norm());
    }

    #[test]
    fn stokes_eigenmode() {
        let g = grid2();
        // wavevector (2, 1): amplitude direction (1, -2) is orthogonal
        let u = VectorField::from_fn(&g, |x| {
            let phase = (2.0 * x[0] + x[1]).cos();
            [phase, -2.0 * phase, 0.0]
        });
        let out = stokes_apply(&u);
        assert!(!out.divergence_warning);
        let err = out.field.axpy(-5.0, &u).unwrap().norm();
        assert!(err < 1e-10 * u.norm());
        assert!(stokes_apply(&VectorField::zeros(&g)).field.norm() == 0.0);
    }

    #[test]
    fn stokes_flags_divergent_input() {
        let g = grid2();
        let u = VectorField::from_fn(&g, |x| [x[0].sin(), 0.0, 0.0]);
        assert!(stokes_apply(&u).divergence_warning);
    }

    #[test]
    fn constant_advection() {
        let l = 1.0;
        let g = Grid::new(2, 16, l).unwrap();
        let c = [0.7, -0.3];
        let u = VectorField::constant(&g, &c).unwrap();
        let k = 2.0 * PI / l;
        let phi = ScalarField::from_fn(&g, |x| (k * x[0]).sin());
        let adv = convective_scalar(&u, &phi).unwrap();
        let expected = ScalarField::from_fn(&g, |x| c[0] * k * (k * x[0]).cos());
        assert!(rel_err(&adv, &expected) < 1e-12);
        let zero = convective_scalar(&VectorField::zeros(&g), &phi).unwrap();
        assert_eq!(zero.norm(), 0.0);
    }

    #[test]
    fn grid_mismatch_rejected() {
        let g = grid2();
        let h = Grid::new(2, 8, 2.0 * PI).unwrap();
        let r = convective_scalar(&VectorField::zeros(&g), &ScalarField::zeros(&h));
        assert!(r.is_err());
    }
}
