//! Strong- and weak-in-time criteria on `t ↦ ‖u(t)‖_{r,∞}`.

use serde::{Deserialize, Serialize};

use super::{ProdiSerrinPair, Trajectory};
use crate::error::{Error, Result};
use crate::lebesgue::TimeSeries;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictStatus {
    Satisfied,
    Violated,
    Uncalibrated,
}

/// `k(t) = ‖u(t)‖_{r,∞}^s` with dual-cell time weights.
pub fn k_series(traj: &Trajectory, pair: &ProdiSerrinPair) -> Result<TimeSeries> {
    if traj.is_empty() {
        return Err(Error::InsufficientSnapshots { needed: 1, got: 0 });
    }
    let s = pair.s();
    let values = traj
        .weak_velocity_norms(pair.r())?
        .into_iter()
        .map(|w| w.powf(s))
        .collect();
    traj.series(values)
}

/// Strong and weak `L^s` norms in time; a single sample spans zero measure
/// and both norms vanish.
pub(crate) fn time_norms(times: &[f64], values: &[f64], s: f64) -> Result<(f64, f64)> {
    match times.len() {
        0 => Err(Error::InsufficientSnapshots { needed: 1, got: 0 }),
        1 => Ok((0.0, 0.0)),
        _ => {
            let ts = TimeSeries::from_samples(times.to_vec(), values.to_vec())?;
            Ok((ts.bochner_strong(s)?, ts.bochner_weak(s)?))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Theorem1Verdict {
    pub status: VerdictStatus,
    /// `‖u‖_{L^s(0,T; L^{r,∞})}`.
    pub strong_time_norm: f64,
    /// Finiteness is the decision, so the margin is the norm itself. Every
    /// discrete norm is finite; the envelope checks carry the substance.
    pub margin: f64,
}

pub fn theorem1_verdict(strong_time_norm: f64) -> Theorem1Verdict {
    Theorem1Verdict {
        status: if strong_time_norm.is_finite() {
            VerdictStatus::Satisfied
        } else {
            VerdictStatus::Violated
        },
        strong_time_norm,
        margin: strong_time_norm,
    }
}

pub fn theorem1_criterion(traj: &Trajectory, pair: &ProdiSerrinPair) -> Result<Theorem1Verdict> {
    let weak = traj.weak_velocity_norms(pair.r())?;
    let (strong, _) = time_norms(&traj.times(), &weak, pair.s())?;
    Ok(theorem1_verdict(strong))
}

/// `C₁ = 2 (C_s^s / s) (6(s-1)/s)^{s-1}`.
pub fn c1(pair: &ProdiSerrinPair, c_s: f64) -> f64 {
    let s = pair.s();
    2.0 * c_s.powf(s) / s * (6.0 * (s - 1.0) / s).powf(s - 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaThreshold {
    pub c1: f64,
    /// `C₃ = C₂^ε C₁`.
    pub c3: f64,
    /// `Γ = (2 C₂^ε C₁)^{-1/s}`.
    pub gamma: f64,
    /// `Γ μ^{(s-1)/s}`.
    pub threshold: f64,
}

pub fn gamma_threshold(pair: &ProdiSerrinPair, c_s: f64, c2_eps: f64, mu: f64) -> Result<GammaThreshold> {
    for (name, value) in [("C_s", c_s), ("C2_eps", c2_eps), ("mu", mu)] {
        if !(value > 0.0 && value.is_finite()) {
            return Err(Error::NonpositiveConstant { name, value });
        }
    }
    let s = pair.s();
    let c1 = c1(pair, c_s);
    let gamma = (2.0 * c2_eps * c1).powf(-1.0 / s);
    Ok(GammaThreshold {
        c1,
        c3: c2_eps * c1,
        gamma,
        threshold: gamma * mu.powf((s - 1.0) / s),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Theorem2Verdict {
    pub eps: f64,
    pub status: VerdictStatus,
    /// `‖u‖_{L^{s,∞}(0,T; L^{r,∞})}`.
    pub weak_time_norm: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<GammaThreshold>,
    /// `threshold - weak_time_norm`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
    /// `‖k‖_{1,∞}` in time.
    pub k_weak_l1: f64,
    /// `1 / (2 C₃ μ^{1-s})`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub smallness_bound: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub smallness_holds: Option<bool>,
}

/// `gamma` is `None` when the constants for this pair and `ε` are missing.
pub fn theorem2_verdict(
    pair: &ProdiSerrinPair,
    eps: f64,
    weak_time_norm: f64,
    k_weak_l1: f64,
    gamma: Option<GammaThreshold>,
    mu: f64,
) -> Theorem2Verdict {
    let Some(g) = gamma else {
        return Theorem2Verdict {
            eps,
            status: VerdictStatus::Uncalibrated,
            weak_time_norm,
            gamma: None,
            margin: None,
            k_weak_l1,
            smallness_bound: None,
            smallness_holds: None,
        };
    };
    let smallness_bound = 1.0 / (2.0 * g.c3 * mu.powf(1.0 - pair.s()));
    Theorem2Verdict {
        eps,
        status: if weak_time_norm <= g.threshold {
            VerdictStatus::Satisfied
        } else {
            VerdictStatus::Violated
        },
        weak_time_norm,
        gamma: Some(g),
        margin: Some(g.threshold - weak_time_norm),
        k_weak_l1,
        smallness_bound: Some(smallness_bound),
        smallness_holds: Some(k_weak_l1 < smallness_bound),
    }
}

pub fn theorem2_criterion(
    traj: &Trajectory,
    pair: &ProdiSerrinPair,
    c_s: f64,
    c2_eps: f64,
    eps: f64,
    mu: f64,
) -> Result<Theorem2Verdict> {
    let gamma = gamma_threshold(pair, c_s, c2_eps, mu)?;
    let weak = traj.weak_velocity_norms(pair.r())?;
    let times = traj.times();
    let (_, weak_time_norm) = time_norms(&times, &weak, pair.s())?;
    let k: Vec<f64> = weak.iter().map(|w| w.powf(pair.s())).collect();
    let (_, k_weak_l1) = time_norms(&times, &k, 1.0)?;
    Ok(theorem2_verdict(pair, eps, weak_time_norm, k_weak_l1, Some(gamma), mu))
}
