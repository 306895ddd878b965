//! Strong and weak (Marcinkiewicz) Lebesgue norms of sampled functions,
//! Bochner norms of time series, and the layer-cake integral.
//!
//! A sampled function is a step function: value `v_i` on a set of measure
//! `w_i`. Its distribution function `d_f(α) = Σ_{|v_i| > α} w_i` is a
//! right-continuous step function, so `sup_α α d_f(α)^{1/p}` is the maximum of
//! `v · d_f(v⁻)^{1/p}` over the distinct sample magnitudes `v`, with
//! `d_f(v⁻) = Σ_{|v_i| ≥ v} w_i`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{ScalarField, VectorField};
use crate::monitor::ProdiSerrinPair;

fn check_exponent(name: &'static str, p: f64) -> Result<()> {
    if p >= 1.0 {
        Ok(())
    } else {
        Err(Error::arg(name, format!("exponent must be >= 1, got {p}")))
    }
}

/// Absolute sample values with their cell measures.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedSamples {
    values: Vec<f64>,
    weights: Vec<f64>,
}

impl WeightedSamples {
    pub fn new(values: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if values.len() != weights.len() {
            return Err(Error::arg(
                "weights",
                format!("{} weights for {} values", weights.len(), values.len()),
            ));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(Error::arg("weights", format!("weights must be positive, got {w}")));
        }
        let values = values.into_iter().map(f64::abs).collect();
        Ok(WeightedSamples { values, weights })
    }

    pub fn uniform(values: Vec<f64>, weight: f64) -> Result<Self> {
        let weights = vec![weight; values.len()];
        Self::new(values, weights)
    }

    pub fn from_scalar(f: &ScalarField) -> Self {
        let w = f.grid().cell_volume();
        Self::uniform(f.physical_values().into_owned(), w).expect("cell volume is positive")
    }

    /// Samples of the pointwise magnitude `|u(x)|`.
    pub fn from_magnitude(u: &VectorField) -> Self {
        let w = u.grid().cell_volume();
        Self::uniform(u.magnitude(), w).expect("cell volume is positive")
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn total_measure(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// `d_f(α)`: measure of `{|f| > α}`.
    pub fn distribution_function(&self, alpha: f64) -> Result<f64> {
        if !(alpha >= 0.0) {
            return Err(Error::arg("alpha", format!("must be >= 0, got {alpha}")));
        }
        Ok(self
            .values
            .iter()
            .zip(&self.weights)
            .filter(|(v, _)| **v > alpha)
            .map(|(_, w)| w)
            .sum())
    }

    /// Distinct magnitudes in decreasing order, each with `d_f(v⁻)`.
    fn levels(&self) -> Vec<(f64, f64)> {
        let mut order: Vec<usize> = (0..self.values.len()).collect();
        order.sort_by(|&a, &b| self.values[b].total_cmp(&self.values[a]));
        let mut levels: Vec<(f64, f64)> = Vec::new();
        let mut cumulative = 0.0;
        for idx in order {
            let v = self.values[idx];
            cumulative += self.weights[idx];
            match levels.last_mut() {
                Some(last) if last.0 == v => last.1 = cumulative,
                _ => levels.push((v, cumulative)),
            }
        }
        levels
    }

    /// `‖f‖_{p,∞} = sup_{α>0} α d_f(α)^{1/p}`; `p = ∞` gives `max |f|`.
    pub fn weak_lp_norm(&self, p: f64) -> Result<f64> {
        check_exponent("p", p)?;
        if p.is_infinite() {
            return Ok(self.max());
        }
        Ok(self
            .levels()
            .into_iter()
            .filter(|(v, _)| *v > 0.0)
            .map(|(v, d)| v * d.powf(1.0 / p))
            .fold(0.0, f64::max))
    }

    /// `(Σ w |v|^p)^{1/p}`; `p = ∞` gives `max |f|`.
    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        check_exponent("p", p)?;
        if p.is_infinite() {
            return Ok(self.max());
        }
        let sum: f64 = self.values.iter().zip(&self.weights).map(|(v, w)| w * v.powf(p)).sum();
        Ok(sum.powf(1.0 / p))
    }

    /// `p ∫_0^∞ σ^{p-1} d_f(σ) dσ`, integrated in closed form on each interval
    /// between consecutive distinct magnitudes.
    pub fn layer_cake(&self, p: f64) -> Result<f64> {
        check_exponent("p", p)?;
        if p.is_infinite() {
            return Err(Error::arg("p", "layer-cake integral needs finite p"));
        }
        let levels = self.levels();
        // d_f is constant, equal to d_f(a_i⁻), on [a_{i+1}, a_i) in decreasing order
        let mut total = 0.0;
        for (i, &(a, d)) in levels.iter().enumerate() {
            let below = levels.get(i + 1).map_or(0.0, |l| l.0);
            total += d * (a.powf(p) - below.powf(p));
        }
        Ok(total)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }
}

/// Samples of a scalar function of time with per-sample measures `Δt`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct TimeSeries {
    times: Vec<f64>,
    values: Vec<f64>,
    weights: Vec<f64>,
}

impl TimeSeries {
    pub fn new(times: Vec<f64>, values: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() || times.len() != weights.len() {
            return Err(Error::arg("times", "times, values and weights differ in length"));
        }
        if let Some(i) = (1..times.len()).find(|&i| !(times[i] > times[i - 1])) {
            return Err(Error::NonMonotoneTime { index: i, t: times[i] });
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(Error::arg("weights", format!("weights must be positive, got {w}")));
        }
        Ok(TimeSeries { times, values, weights })
    }

    /// Dual-cell weights: each sample owns half of each adjacent interval, so
    /// the weights sum to `t_last - t_first`.
    pub fn from_samples(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.len() < 2 {
            return Err(Error::InsufficientSnapshots {
                needed: 2,
                got: times.len(),
            });
        }
        let m = times.len();
        let weights = (0..m)
            .map(|i| {
                let left = if i > 0 { times[i] - times[i - 1] } else { 0.0 };
                let right = if i + 1 < m { times[i + 1] - times[i] } else { 0.0 };
                0.5 * (left + right)
            })
            .collect();
        Self::new(times, values, weights)
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Total measure `Σ Δt`.
    pub fn duration(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> TimeSeries {
        TimeSeries {
            times: self.times.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
            weights: self.weights.clone(),
        }
    }

    pub fn as_samples(&self) -> WeightedSamples {
        WeightedSamples {
            values: self.values.iter().map(|v| v.abs()).collect(),
            weights: self.weights.clone(),
        }
    }

    /// `(Σ Δt |v|^s)^{1/s}`: the `L^s(0,T)` norm of the series.
    pub fn bochner_strong(&self, s: f64) -> Result<f64> {
        check_exponent("s", s)?;
        if s.is_infinite() {
            return Err(Error::arg("s", "time exponent must be finite"));
        }
        self.as_samples().lp_norm(s)
    }

    /// Weak `L^{s,∞}(0,T)` norm of the series.
    pub fn bochner_weak(&self, s: f64) -> Result<f64> {
        check_exponent("s", s)?;
        if s.is_infinite() {
            return Err(Error::arg("s", "time exponent must be finite"));
        }
        self.as_samples().weak_lp_norm(s)
    }
}

/// Exponents and right-hand side of the Lorentz interpolation inequality
/// `‖u‖_{r_ε,∞}^{s_ε} ≤ C ‖u‖_{r,∞}^{s(1-ε)} ‖∇u‖^{4ε}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterpolationTerms {
    pub shifted: ProdiSerrinPair,
    /// `‖u‖_{r,∞}^{s(1-ε)} ‖∇u‖^{4ε}`.
    pub rhs: f64,
}

impl InterpolationTerms {
    pub fn s_eps(&self) -> f64 {
        self.shifted.s()
    }

    pub fn r_eps(&self) -> f64 {
        self.shifted.r()
    }
}

pub fn interpolation_check(u_weak_r: f64, grad_u: f64, pair: &ProdiSerrinPair, eps: f64) -> Result<InterpolationTerms> {
    let shifted = pair.shifted(eps)?;
    let rhs = u_weak_r.powf(pair.s() * (1.0 - eps)) * grad_u.powf(4.0 * eps);
    Ok(InterpolationTerms { shifted, rhs })
}
