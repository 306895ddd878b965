use std::borrow::Cow;

use num_complex::Complex64;

use super::Grid;
use crate::error::{Error, Result};

/// Which space a field's values live in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Representation {
    Physical,
    Spectral,
}

#[derive(Debug, Clone)]
enum Values {
    Physical(Vec<f64>),
    Spectral(Vec<Complex64>),
}

/// A real scalar field on a periodic grid, stored either as samples or as
/// (Hermitian-symmetric) Fourier coefficients.
#[derive(Debug, Clone)]
pub struct ScalarField {
    grid: Grid,
    values: Values,
    zero_mean: bool,
}

impl ScalarField {
    pub fn from_physical(grid: &Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::arg(
                "values",
                format!("expected {} samples, got {}", grid.len(), values.len()),
            ));
        }
        Ok(ScalarField {
            grid: grid.clone(),
            values: Values::Physical(values),
            zero_mean: false,
        })
    }

    /// Coefficients are taken as given; callers are responsible for
    /// Hermitian symmetry if the field is meant to be real.
    pub fn from_spectral(grid: &Grid, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::arg(
                "coeffs",
                format!("expected {} coefficients, got {}", grid.len(), coeffs.len()),
            ));
        }
        Ok(ScalarField {
            grid: grid.clone(),
            values: Values::Spectral(coeffs),
            zero_mean: false,
        })
    }

    pub fn zeros(grid: &Grid) -> Self {
        ScalarField {
            grid: grid.clone(),
            values: Values::Physical(vec![0.0; grid.len()]),
            zero_mean: true,
        }
    }

    pub fn constant(grid: &Grid, c: f64) -> Self {
        ScalarField {
            grid: grid.clone(),
            values: Values::Physical(vec![c; grid.len()]),
            zero_mean: c == 0.0,
        }
    }

    /// Samples `f` at every grid point.
    pub fn from_fn(grid: &Grid, f: impl Fn(&[f64]) -> f64) -> Self {
        let dim = grid.dim();
        let values = (0..grid.len()).map(|idx| f(&grid.coords(idx)[..dim])).collect();
        ScalarField {
            grid: grid.clone(),
            values: Values::Physical(values),
            zero_mean: false,
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn representation(&self) -> Representation {
        match self.values {
            Values::Physical(_) => Representation::Physical,
            Values::Spectral(_) => Representation::Spectral,
        }
    }

    pub fn is_zero_mean(&self) -> bool {
        self.zero_mean
    }

    /// Removes the zero-frequency coefficient and marks the field zero-mean.
    pub fn with_zero_mean(self) -> Self {
        let grid = self.grid.clone();
        let mut coeffs = self.spectral_values().into_owned();
        coeffs[0] = Complex64::new(0.0, 0.0);
        ScalarField {
            grid,
            values: Values::Spectral(coeffs),
            zero_mean: true,
        }
    }

    pub(crate) fn set_zero_mean_flag(mut self, flag: bool) -> Self {
        self.zero_mean = flag;
        self
    }

    pub fn to_spectral(&self) -> ScalarField {
        ScalarField {
            grid: self.grid.clone(),
            values: Values::Spectral(self.spectral_values().into_owned()),
            zero_mean: self.zero_mean,
        }
    }

    pub fn to_physical(&self) -> ScalarField {
        ScalarField {
            grid: self.grid.clone(),
            values: Values::Physical(self.physical_values().into_owned()),
            zero_mean: self.zero_mean,
        }
    }

    /// Physical samples, transforming if needed (imaginary parts dropped).
    pub fn physical_values(&self) -> Cow<'_, [f64]> {
        match &self.values {
            Values::Physical(v) => Cow::Borrowed(v),
            Values::Spectral(c) => {
                let mut buf = c.clone();
                self.grid.inverse(&mut buf);
                Cow::Owned(buf.into_iter().map(|z| z.re).collect())
            }
        }
    }

    /// Fourier coefficients; the zero mode is pinned to 0 for zero-mean fields.
    pub fn spectral_values(&self) -> Cow<'_, [Complex64]> {
        match &self.values {
            Values::Spectral(c) => Cow::Borrowed(c),
            Values::Physical(v) => {
                let mut buf: Vec<Complex64> = v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
                self.grid.forward(&mut buf);
                if self.zero_mean {
                    buf[0] = Complex64::new(0.0, 0.0);
                }
                Cow::Owned(buf)
            }
        }
    }

    /// Applies `f(coefficient, index)` to every Fourier coefficient.
    pub(crate) fn map_spectral(&self, f: impl Fn(Complex64, usize) -> Complex64) -> ScalarField {
        let coeffs = self
            .spectral_values()
            .iter()
            .enumerate()
            .map(|(idx, &c)| f(c, idx))
            .collect();
        ScalarField {
            grid: self.grid.clone(),
            values: Values::Spectral(coeffs),
            zero_mean: self.zero_mean,
        }
    }

    /// Pointwise combination in physical space.
    pub fn zip_with(&self, other: &ScalarField, f: impl Fn(f64, f64) -> f64) -> Result<ScalarField> {
        self.grid.ensure_same(&other.grid)?;
        let a = self.physical_values();
        let b = other.physical_values();
        let values = a.iter().zip(b.iter()).map(|(&x, &y)| f(x, y)).collect();
        Ok(ScalarField {
            grid: self.grid.clone(),
            values: Values::Physical(values),
            zero_mean: false,
        })
    }

    /// `self + factor * other`, kept in spectral space when both are.
    pub fn axpy(&self, factor: f64, other: &ScalarField) -> Result<ScalarField> {
        self.grid.ensure_same(&other.grid)?;
        let zero_mean = self.zero_mean && other.zero_mean;
        let values = match (&self.values, &other.values) {
            (Values::Physical(a), Values::Physical(b)) => {
                Values::Physical(a.iter().zip(b).map(|(x, y)| x + factor * y).collect())
            }
            _ => {
                let a = self.spectral_values();
                let b = other.spectral_values();
                Values::Spectral(a.iter().zip(b.iter()).map(|(x, y)| x + y * factor).collect())
            }
        };
        Ok(ScalarField {
            grid: self.grid.clone(),
            values,
            zero_mean,
        })
    }

    pub fn scale(&self, factor: f64) -> ScalarField {
        let values = match &self.values {
            Values::Physical(v) => Values::Physical(v.iter().map(|x| x * factor).collect()),
            Values::Spectral(c) => Values::Spectral(c.iter().map(|z| z * factor).collect()),
        };
        ScalarField {
            grid: self.grid.clone(),
            values,
            zero_mean: self.zero_mean,
        }
    }

    /// Cell-volume weighted L^2 inner product.
    pub fn inner(&self, other: &ScalarField) -> Result<f64> {
        self.grid.ensure_same(&other.grid)?;
        let a = self.physical_values();
        let b = other.physical_values();
        let sum: f64 = a.iter().zip(b.iter()).map(|(x, y)| x * y).sum();
        Ok(sum * self.grid.cell_volume())
    }

    pub fn norm(&self) -> f64 {
        let v = self.physical_values();
        (v.iter().map(|x| x * x).sum::<f64>() * self.grid.cell_volume()).sqrt()
    }

    /// L^2 norm evaluated from Fourier coefficients (Parseval route).
    pub fn spectral_norm(&self) -> f64 {
        let c = self.spectral_values();
        (c.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.grid.cell_volume()).sqrt()
    }

    pub fn mean(&self) -> f64 {
        let v = self.physical_values();
        v.iter().sum::<f64>() / v.len() as f64
    }

    pub fn max_abs(&self) -> f64 {
        self.physical_values().iter().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    pub fn is_finite(&self) -> bool {
        match &self.values {
            Values::Physical(v) => v.iter().all(|x| x.is_finite()),
            Values::Spectral(c) => c.iter().all(|z| z.re.is_finite() && z.im.is_finite()),
        }
    }
}

/// `dim` scalar components on a shared grid.
#[derive(Debug, Clone)]
pub struct VectorField {
    components: Vec<ScalarField>,
}

impl VectorField {
    pub fn new(components: Vec<ScalarField>) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| Error::arg("components", "empty component list"))?;
        let grid = first.grid().clone();
        if components.len() != grid.dim() {
            return Err(Error::arg(
                "components",
                format!("expected {} components, got {}", grid.dim(), components.len()),
            ));
        }
        for c in &components[1..] {
            grid.ensure_same(c.grid())?;
        }
        Ok(VectorField { components })
    }

    pub fn zeros(grid: &Grid) -> Self {
        VectorField {
            components: (0..grid.dim()).map(|_| ScalarField::zeros(grid)).collect(),
        }
    }

    pub fn constant(grid: &Grid, c: &[f64]) -> Result<Self> {
        if c.len() != grid.dim() {
            return Err(Error::arg("c", format!("expected {} entries", grid.dim())));
        }
        Ok(VectorField {
            components: c.iter().map(|&ci| ScalarField::constant(grid, ci)).collect(),
        })
    }

    /// Samples a vector-valued function; only the first `dim` entries are used.
    pub fn from_fn(grid: &Grid, f: impl Fn(&[f64]) -> [f64; 3]) -> Self {
        let dim = grid.dim();
        let samples: Vec<[f64; 3]> = (0..grid.len()).map(|idx| f(&grid.coords(idx)[..dim])).collect();
        let components = (0..dim)
            .map(|axis| {
                ScalarField::from_physical(grid, samples.iter().map(|s| s[axis]).collect())
                    .expect("length matches grid")
            })
            .collect();
        VectorField { components }
    }

    pub fn grid(&self) -> &Grid {
        self.components[0].grid()
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[ScalarField] {
        &self.components
    }

    pub fn component(&self, axis: usize) -> &ScalarField {
        &self.components[axis]
    }

    pub fn into_components(self) -> Vec<ScalarField> {
        self.components
    }

    pub fn map(&self, f: impl Fn(&ScalarField) -> ScalarField) -> VectorField {
        VectorField {
            components: self.components.iter().map(f).collect(),
        }
    }

    pub fn is_zero_mean(&self) -> bool {
        self.components.iter().all(ScalarField::is_zero_mean)
    }

    pub fn with_zero_mean(self) -> Self {
        VectorField {
            components: self.components.into_iter().map(ScalarField::with_zero_mean).collect(),
        }
    }

    pub fn to_spectral(&self) -> VectorField {
        self.map(ScalarField::to_spectral)
    }

    pub fn to_physical(&self) -> VectorField {
        self.map(ScalarField::to_physical)
    }

    pub fn axpy(&self, factor: f64, other: &VectorField) -> Result<VectorField> {
        self.grid().ensure_same(other.grid())?;
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.axpy(factor, b))
            .collect::<Result<_>>()?;
        Ok(VectorField { components })
    }

    pub fn scale(&self, factor: f64) -> VectorField {
        self.map(|c| c.scale(factor))
    }

    pub fn inner(&self, other: &VectorField) -> Result<f64> {
        self.grid().ensure_same(other.grid())?;
        self.components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.inner(b))
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.components.iter().map(|c| c.norm().powi(2)).sum::<f64>().sqrt()
    }

    pub fn spectral_norm(&self) -> f64 {
        self.components
            .iter()
            .map(|c| c.spectral_norm().powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// Pointwise Euclidean magnitude `|v(x)|` at every sample.
    pub fn magnitude(&self) -> Vec<f64> {
        let comps: Vec<_> = self.components.iter().map(|c| c.physical_values()).collect();
        (0..self.grid().len())
            .map(|i| comps.iter().map(|c| c[i] * c[i]).sum::<f64>().sqrt())
            .collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.magnitude().into_iter().fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.components.iter().all(ScalarField::is_finite)
    }
}
