//! Periodic grids, dual physical/spectral fields and the spectral operator
//! algebra (derivatives, Leray projection, Stokes operator, dealiased
//! convection).
//!
//! The box is the torus `[0, L)^dim` sampled at `x_i = i L / n`. Linear
//! indices are x-fastest: `idx = i0 + n (i1 + n i2)`. Transforms use the
//! unitary convention (both directions scaled by `N^{-1/2}`, `N = n^dim`), so
//! the plain coefficient sum of squares equals the sample sum of squares.

mod field;
mod ops;
mod random;

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

pub use field::{Representation, ScalarField, VectorField};
pub use ops::{
    convective_scalar, convective_vector, dealias, dealias_vector, divergence, grad_norm_sq, gradient, laplacian,
    leray_project, stokes_apply, stokes_norm_sq, StokesOutput,
};
pub use random::{cellular_mode, random_scalar, random_solenoidal};

/// Divergence (relative to the gradient norm) above which [`stokes_apply`]
/// flags its input.
pub const STOKES_DIVERGENCE_WARNING: f64 = 1e-8;

struct Tables {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    /// Derivative wavenumbers per linear index (Nyquist entries zeroed).
    k: Vec<[f64; 3]>,
    /// True squared wavenumber magnitude per linear index.
    k2: Vec<f64>,
    /// Modes retained by the 2/3 rule.
    retained: Vec<bool>,
}

/// Uniform periodic grid.
#[derive(Clone)]
pub struct Grid {
    dim: usize,
    n: usize,
    length: f64,
    tables: Arc<Tables>,
}

impl Grid {
    pub fn new(dim: usize, n: usize, length: f64) -> Result<Self> {
        if dim != 2 && dim != 3 {
            return Err(Error::InvalidGrid(format!("dim must be 2 or 3, got {dim}")));
        }
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!("n must be a power of two >= 8, got {n}")));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "length must be positive and finite, got {length}"
            )));
        }

        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);

        let total = n.pow(dim as u32);
        let base = 2.0 * PI / length;
        let mut k = Vec::with_capacity(total);
        let mut k2 = Vec::with_capacity(total);
        let mut retained = Vec::with_capacity(total);
        for idx in 0..total {
            let m = multi_index(n, dim, idx);
            let mut kv = [0.0; 3];
            let mut mag = 0.0;
            let mut keep = true;
            for axis in 0..dim {
                let s = signed_mode(n, m[axis]);
                let kk = base * s as f64;
                mag += kk * kk;
                if 2 * s.unsigned_abs() as usize != n {
                    kv[axis] = kk;
                }
                if 3 * s.unsigned_abs() as usize > n {
                    keep = false;
                }
            }
            k.push(kv);
            k2.push(mag);
            retained.push(keep);
        }

        Ok(Grid {
            dim,
            n,
            length,
            tables: Arc::new(Tables {
                forward,
                inverse,
                k,
                k2,
                retained,
            }),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// Number of samples, `n^dim`.
    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.n as f64
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    pub fn volume(&self) -> f64 {
        self.length.powi(self.dim as i32)
    }

    /// Per-axis integer indices of a linear index (unused axes are 0).
    pub fn multi_index(&self, idx: usize) -> [usize; 3] {
        multi_index(self.n, self.dim, idx)
    }

    pub fn linear_index(&self, m: [usize; 3]) -> usize {
        let mut idx = 0;
        for axis in (0..self.dim).rev() {
            idx = idx * self.n + m[axis];
        }
        idx
    }

    /// Physical coordinates of sample `idx`.
    pub fn coords(&self, idx: usize) -> [f64; 3] {
        let m = self.multi_index(idx);
        let h = self.spacing();
        let mut x = [0.0; 3];
        for axis in 0..self.dim {
            x[axis] = m[axis] as f64 * h;
        }
        x
    }

    /// Signed integer mode numbers of spectral index `idx`.
    pub fn mode(&self, idx: usize) -> [i64; 3] {
        let m = self.multi_index(idx);
        let mut s = [0; 3];
        for axis in 0..self.dim {
            s[axis] = signed_mode(self.n, m[axis]);
        }
        s
    }

    /// Derivative wavenumber vector at spectral index `idx` (Nyquist
    /// components are zero so odd derivatives stay real).
    pub fn wavevector(&self, idx: usize) -> [f64; 3] {
        self.tables.k[idx]
    }

    /// `|k|^2` at spectral index `idx`.
    pub fn wavenumber_sq(&self, idx: usize) -> f64 {
        self.tables.k2[idx]
    }

    /// Whether the 2/3 rule keeps the mode at spectral index `idx`.
    pub fn is_retained(&self, idx: usize) -> bool {
        self.tables.retained[idx]
    }

    /// Smallest nonzero `|k|^2`, i.e. the first Stokes/Poincare eigenvalue.
    pub fn first_eigenvalue(&self) -> f64 {
        let base = 2.0 * PI / self.length;
        base * base
    }

    pub(crate) fn ensure_same(&self, other: &Grid) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GridMismatch {
                left: self.to_string(),
                right: other.to_string(),
            })
        }
    }

    pub(crate) fn forward(&self, data: &mut [Complex64]) {
        self.transform(data, &self.tables.forward);
    }

    pub(crate) fn inverse(&self, data: &mut [Complex64]) {
        self.transform(data, &self.tables.inverse);
    }

    fn transform(&self, data: &mut [Complex64], fft: &Arc<dyn Fft<f64>>) {
        let n = self.n;
        let total = data.len();
        debug_assert_eq!(total, self.len());
        let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];

        // axis 0 is contiguous: rustfft processes every length-n chunk
        fft.process_with_scratch(data, &mut scratch);

        let mut line = vec![Complex64::default(); n];
        for axis in 1..self.dim {
            let stride = n.pow(axis as u32);
            let block = stride * n;
            for outer in (0..total).step_by(block) {
                for inner in 0..stride {
                    let start = outer + inner;
                    for (j, v) in line.iter_mut().enumerate() {
                        *v = data[start + j * stride];
                    }
                    fft.process_with_scratch(&mut line, &mut scratch);
                    for (j, v) in line.iter().enumerate() {
                        data[start + j * stride] = *v;
                    }
                }
            }
        }

        let scale = 1.0 / (total as f64).sqrt();
        for v in data.iter_mut() {
            *v *= scale;
        }
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.n == other.n && self.length == other.length
    }
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("dim", &self.dim)
            .field("n", &self.n)
            .field("length", &self.length)
            .finish()
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{} grid (L = {})", self.n, self.dim, self.length)
    }
}

fn multi_index(n: usize, dim: usize, mut idx: usize) -> [usize; 3] {
    let mut m = [0; 3];
    for slot in m.iter_mut().take(dim) {
        *slot = idx % n;
        idx /= n;
    }
    m
}

fn signed_mode(n: usize, m: usize) -> i64 {
    if m <= n / 2 {
        m as i64
    } else {
        m as i64 - n as i64
    }
}
