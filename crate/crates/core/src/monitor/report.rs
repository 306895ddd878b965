use serde::{Deserialize, Serialize};

use super::constants::{convective_ratio, interpolation_ratio, CalibratedConstants};
use super::criteria::{
    gamma_threshold, theorem1_verdict, theorem2_verdict, time_norms, Theorem1Verdict, Theorem2Verdict,
};
use super::envelopes::{
    enstrophy_residual, psi_envelope, scalar_envelopes, velocity_envelope, weak_l1_chain, EnstrophyCoefficients,
    EnstrophyResidual, Envelope, PsiInputs, PsiReport, WeakL1Chain,
};
use super::{ProdiSerrinPair, Trajectory};
use crate::dynamics::PhysicsParams;
use crate::error::{Error, Result};
use crate::lebesgue::TimeSeries;

pub const DEFAULT_EPS_GRID: [f64; 5] = [0.5, 0.25, 0.1, 0.05, 0.01];
pub const DEFAULT_DELTA_GRID: [f64; 4] = [0.05, 0.1, 0.2, 0.3];

pub const THEOREM1_NOTE: &str = "the strong-in-time criterion is informational: \
    every discrete norm is finite, the envelope containments carry the check";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonitorConfig {
    pub pairs: Vec<ProdiSerrinPair>,
    /// `ε` values for the weak-in-time threshold.
    #[serde(default = "default_eps")]
    pub eps: Vec<f64>,
    #[serde(default = "default_eps_grid")]
    pub eps_grid: Vec<f64>,
    #[serde(default = "default_delta_grid")]
    pub delta_grid: Vec<f64>,
}

fn default_eps() -> Vec<f64> {
    vec![0.5, 0.1]
}

fn default_eps_grid() -> Vec<f64> {
    DEFAULT_EPS_GRID.to_vec()
}

fn default_delta_grid() -> Vec<f64> {
    DEFAULT_DELTA_GRID.to_vec()
}

impl Default for MonitorConfig {
    fn default() -> Self {
        MonitorConfig {
            pairs: vec![
                ProdiSerrinPair::new(f64::INFINITY, 2.0).expect("valid pair"),
                ProdiSerrinPair::new(6.0, 4.0).expect("valid pair"),
                ProdiSerrinPair::new(9.0, 3.0).expect("valid pair"),
            ],
            eps: default_eps(),
            eps_grid: default_eps_grid(),
            delta_grid: default_delta_grid(),
        }
    }
}

impl MonitorConfig {
    pub fn validate(&self) -> Result<()> {
        if self.pairs.is_empty() {
            return Err(Error::arg("pairs", "at least one pair is required"));
        }
        for &e in self.eps.iter().chain(&self.eps_grid) {
            if !(e > 0.0 && e < 1.0) {
                return Err(Error::arg("eps", format!("must lie in (0, 1), got {e}")));
            }
        }
        for &d in &self.delta_grid {
            if !(d > 0.0 && d < 1.0 / 3.0) {
                return Err(Error::arg("delta", format!("must lie in (0, 1/3), got {d}")));
            }
        }
        Ok(())
    }

    /// Every `ε` that needs an interpolation constant, deduplicated in order.
    pub fn all_eps(&self) -> Vec<f64> {
        let mut out: Vec<f64> = Vec::new();
        for &e in self.eps.iter().chain(&self.eps_grid) {
            if !out.contains(&e) {
                out.push(e);
            }
        }
        out
    }
}

/// Largest ratio along the trajectory and how often it stays under the
/// calibrated constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioStats {
    pub max: f64,
    pub samples: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contained_fraction: Option<f64>,
}

impl RatioStats {
    fn new(ratios: &[f64], bound: Option<f64>) -> Self {
        RatioStats {
            max: ratios.iter().copied().fold(0.0, f64::max),
            samples: ratios.len(),
            contained_fraction: bound.map(|b| {
                if ratios.is_empty() {
                    1.0
                } else {
                    ratios.iter().filter(|&&r| r <= b).count() as f64 / ratios.len() as f64
                }
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterpolationStats {
    pub eps: f64,
    #[serde(flatten)]
    pub stats: RatioStats,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairReport {
    pub pair: ProdiSerrinPair,
    /// `‖u(t)‖_{r,∞}` per sample.
    pub weak_norms: Vec<f64>,
    /// `k(t) = ‖u(t)‖_{r,∞}^s`.
    pub k: Vec<f64>,
    pub theorem1: Theorem1Verdict,
    pub theorem2: Vec<Theorem2Verdict>,
    /// Discrete `ε ∫k^{1-ε} ≤ εT + (1-ε)‖k‖_{1,∞}` per `ε` of the search grid.
    pub weak_l1_chain: Vec<WeakL1Chain>,
    pub convective_ratio: RatioStats,
    pub interpolation_ratio: Vec<InterpolationStats>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<EnstrophyCoefficients>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub velocity_envelope: Option<Envelope>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<EnstrophyResidual>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi: Option<PsiReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonitorReport {
    pub sample_count: usize,
    pub t_start: f64,
    pub t_end: f64,
    pub calibrated: bool,
    pub notes: Vec<String>,
    pub times: Vec<f64>,
    /// `‖∇u(t)‖²`.
    pub enstrophy: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constants: Option<CalibratedConstants>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_envelope: Option<Envelope>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi_envelope: Option<Envelope>,
    pub pairs: Vec<PairReport>,
}

impl MonitorReport {
    pub fn pair(&self, pair: &ProdiSerrinPair) -> Option<&PairReport> {
        self.pairs.iter().find(|p| p.pair == *pair)
    }
}

/// Evaluates every configured pair along `traj`. Without `constants` the
/// threshold, envelope and residual entries are omitted and the report is
/// marked uncalibrated.
pub fn build_report(
    traj: &Trajectory,
    params: &PhysicsParams,
    constants: Option<&CalibratedConstants>,
    config: &MonitorConfig,
) -> Result<MonitorReport> {
    config.validate()?;
    params.validate()?;
    if traj.is_empty() {
        return Err(Error::InsufficientSnapshots { needed: 1, got: 0 });
    }
    if let Some(c) = constants {
        c.validate()?;
    }
    let grid = traj.samples()[0].state.grid().clone();
    let g_l3 = params.gravity_l3(&grid);
    let times = traj.times();
    let diag = traj.diagnostics();
    let mut notes = vec![THEOREM1_NOTE.to_string()];
    if constants.is_none() {
        notes.push("uncalibrated: no constants supplied, thresholds and envelopes omitted".into());
    }
    if traj.len() < 3 {
        notes.push(format!(
            "{} sample(s): enstrophy residual needs at least 3 and is omitted",
            traj.len()
        ));
    }

    let mut pairs = Vec::with_capacity(config.pairs.len());
    for pair in &config.pairs {
        pairs.push(pair_report(traj, &diag, &times, params, constants, config, pair, g_l3)?);
    }

    let (theta_envelope, phi_envelope) = match constants {
        Some(c) => {
            let (t, p) = scalar_envelopes(&diag, params, c.advection);
            (Some(t), Some(p))
        }
        None => (None, None),
    };

    Ok(MonitorReport {
        sample_count: traj.len(),
        t_start: times[0],
        t_end: *times.last().expect("nonempty"),
        calibrated: constants.is_some(),
        notes,
        enstrophy: diag.iter().map(|d| d.enstrophy).collect(),
        times,
        constants: constants.cloned(),
        theta_envelope,
        phi_envelope,
        pairs,
    })
}

#[allow(clippy::too_many_arguments)]
fn pair_report(
    traj: &Trajectory,
    diag: &[super::Diagnostics],
    times: &[f64],
    params: &PhysicsParams,
    constants: Option<&CalibratedConstants>,
    config: &MonitorConfig,
    pair: &ProdiSerrinPair,
    g_l3: f64,
) -> Result<PairReport> {
    let s = pair.s();
    let weak_norms = traj.weak_velocity_norms(pair.r())?;
    let k: Vec<f64> = weak_norms.iter().map(|w| w.powf(s)).collect();
    let (strong, weak) = time_norms(times, &weak_norms, s)?;
    let (_, k_weak_l1) = time_norms(times, &k, 1.0)?;
    let k_series = if times.len() >= 2 {
        Some(TimeSeries::from_samples(times.to_vec(), k.clone())?)
    } else {
        None
    };

    let c_s = constants.and_then(|c| c.convective_for(pair));
    let theorem2 = config
        .eps
        .iter()
        .map(|&eps| {
            let gamma = match (c_s, constants.and_then(|c| c.interpolation_for(pair, eps))) {
                (Some(c_s), Some(c2e)) => Some(gamma_threshold(pair, c_s, c2e, params.mu)?),
                _ => None,
            };
            Ok(theorem2_verdict(pair, eps, weak, k_weak_l1, gamma, params.mu))
        })
        .collect::<Result<Vec<_>>>()?;

    let weak_l1_chain = match &k_series {
        Some(ks) => config
            .eps_grid
            .iter()
            .map(|&e| weak_l1_chain(ks, e))
            .collect::<Result<_>>()?,
        None => Vec::new(),
    };

    let mut conv = Vec::with_capacity(traj.len());
    let mut interp: Vec<Vec<f64>> = vec![Vec::new(); config.eps.len()];
    for sample in traj.samples() {
        if let Some(r) = convective_ratio(&sample.state.u, pair)? {
            conv.push(r);
        }
        for (j, &eps) in config.eps.iter().enumerate() {
            if let Some(r) = interpolation_ratio(&sample.state.u, pair, eps)? {
                interp[j].push(r);
            }
        }
    }
    let convective_ratio = RatioStats::new(&conv, c_s);
    let interpolation_ratio = config
        .eps
        .iter()
        .zip(&interp)
        .map(|(&eps, r)| InterpolationStats {
            eps,
            stats: RatioStats::new(r, constants.and_then(|c| c.interpolation_for(pair, eps))),
        })
        .collect();

    let mut report = PairReport {
        pair: *pair,
        weak_norms,
        k: k.clone(),
        theorem1: theorem1_verdict(strong),
        theorem2,
        weak_l1_chain,
        convective_ratio,
        interpolation_ratio,
        coefficients: None,
        velocity_envelope: None,
        residual: None,
        psi: None,
    };

    let (Some(constants), Some(c_s)) = (constants, c_s) else {
        return Ok(report);
    };
    let coeff = EnstrophyCoefficients::new(pair, c_s, constants.embedding, params, g_l3);
    let envelope = velocity_envelope(diag, &k, &coeff);
    if diag.len() >= 3 {
        report.residual = Some(enstrophy_residual(diag, &k, &coeff, params.mu)?);
    }
    if let Some(ks) = &k_series {
        let inputs = PsiInputs {
            diag,
            k: ks,
            pair: *pair,
            c1: coeff.c1,
            mu: params.mu,
            radius: envelope.constant,
        };
        report.psi = Some(psi_envelope(
            &inputs,
            |eps| constants.interpolation_for(pair, eps),
            &config.eps_grid,
            &config.delta_grid,
        )?);
    }
    report.coefficients = Some(coeff);
    report.velocity_envelope = Some(envelope);
    Ok(report)
}
