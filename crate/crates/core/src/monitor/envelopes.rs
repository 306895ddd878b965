//! Gronwall envelopes, the enstrophy differential inequality and the
//! `ψ`-bound used by the weak-in-time criterion.
//!
//! All envelopes act on precomputed [`Diagnostics`] and `k(t)` samples so
//! that one pass over the snapshots serves every pair.

use serde::{Deserialize, Serialize};

use super::criteria::c1;
use super::trajectory::{cumulative_integral, integral, time_derivative};
use super::{Diagnostics, ProdiSerrinPair};
use crate::dynamics::PhysicsParams;
use crate::error::{Error, Result};
use crate::lebesgue::TimeSeries;

/// An observed squared norm against `constant · exp(∫ rate)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    /// `M` or `N`.
    pub constant: f64,
    pub rate: f64,
    pub times: Vec<f64>,
    pub observed: Vec<f64>,
    pub envelope: Vec<f64>,
    pub contained: Vec<bool>,
}

impl Envelope {
    fn new(constant: f64, rate: f64, times: Vec<f64>, observed: Vec<f64>, envelope: Vec<f64>) -> Self {
        let contained = observed.iter().zip(&envelope).map(|(o, e)| o <= e).collect();
        Envelope {
            constant,
            rate,
            times,
            observed,
            envelope,
            contained,
        }
    }

    pub fn all_contained(&self) -> bool {
        self.contained.iter().all(|&c| c)
    }
}

/// Coefficients of
/// `dE/dt + μ‖Au‖² ≤ C₁μ^{1-s} k E + C̃(‖∇θ‖² + ‖∇φ‖²) + c_f ‖f‖²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnstrophyCoefficients {
    pub c1: f64,
    /// `C₁ μ^{1-s}`.
    pub rate: f64,
    /// `2 C₂ (6/μ) α² ‖g‖_{L³}`.
    pub c_tilde: f64,
    /// `2 C₂² (6/μ) α² ‖g‖_{L³}²`, the variant with the buoyancy norm squared.
    pub c_tilde_squared: f64,
    /// `μ/3`.
    pub forcing_printed: f64,
    /// `12/μ`: the `6/μ` Young bound on `|(f, Au)|`, doubled for `dE/dt`.
    pub forcing_young: f64,
}

impl EnstrophyCoefficients {
    pub fn new(pair: &ProdiSerrinPair, c_s: f64, c2: f64, params: &PhysicsParams, g_l3: f64) -> Self {
        let mu = params.mu;
        let c1 = c1(pair, c_s);
        let a2 = params.alpha * params.alpha;
        EnstrophyCoefficients {
            c1,
            rate: c1 * mu.powf(1.0 - pair.s()),
            c_tilde: 2.0 * c2 * (6.0 / mu) * a2 * g_l3,
            c_tilde_squared: 2.0 * c2 * c2 * (6.0 / mu) * a2 * g_l3 * g_l3,
            forcing_printed: mu / 3.0,
            forcing_young: 12.0 / mu,
        }
    }
}

fn column(diag: &[Diagnostics], f: impl Fn(&Diagnostics) -> f64) -> Vec<f64> {
    diag.iter().map(f).collect()
}

/// `M = E(0) + C̃ (∫‖∇θ‖² + ∫‖∇φ‖²) + (μ/3) ∫‖f‖²` over the whole record.
pub fn velocity_radius(diag: &[Diagnostics], coeff: &EnstrophyCoefficients) -> f64 {
    let times = column(diag, |d| d.t);
    let scalars = column(diag, |d| d.grad_theta_sq + d.grad_phi_sq);
    let forcing = column(diag, |d| d.f_sq);
    diag.first().map_or(0.0, |d| d.enstrophy)
        + coeff.c_tilde * integral(&times, &scalars)
        + coeff.forcing_printed * integral(&times, &forcing)
}

/// `E(t) ≤ M exp(C₁ μ^{1-s} ∫₀ᵗ k)`.
pub fn velocity_envelope(diag: &[Diagnostics], k: &[f64], coeff: &EnstrophyCoefficients) -> Envelope {
    let times = column(diag, |d| d.t);
    let m = velocity_radius(diag, coeff);
    let envelope = cumulative_integral(&times, k)
        .iter()
        .map(|ik| m * (coeff.rate * ik).exp())
        .collect();
    Envelope::new(m, coeff.rate, times, column(diag, |d| d.enstrophy), envelope)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnstrophyResidual {
    pub times: Vec<f64>,
    /// `dE/dt + μ‖Au‖²`.
    pub lhs: Vec<f64>,
    pub rhs_printed: Vec<f64>,
    pub rhs_young: Vec<f64>,
    /// `rhs_printed - lhs`.
    pub residual_printed: Vec<f64>,
    /// `rhs_young - lhs`.
    pub residual_young: Vec<f64>,
}

impl EnstrophyResidual {
    /// Fraction of samples with `residual ≥ -tol·|rhs|` for the printed column.
    pub fn fraction_within(&self, tol: f64) -> f64 {
        let ok = self
            .residual_printed
            .iter()
            .zip(&self.rhs_printed)
            .filter(|(r, rhs)| **r >= -tol * rhs.abs())
            .count();
        ok as f64 / self.times.len() as f64
    }
}

pub fn enstrophy_residual(
    diag: &[Diagnostics],
    k: &[f64],
    coeff: &EnstrophyCoefficients,
    mu: f64,
) -> Result<EnstrophyResidual> {
    if diag.len() < 3 {
        return Err(Error::InsufficientSnapshots {
            needed: 3,
            got: diag.len(),
        });
    }
    let times = column(diag, |d| d.t);
    let de = time_derivative(&times, &column(diag, |d| d.enstrophy));
    let mut out = EnstrophyResidual {
        times,
        lhs: Vec::with_capacity(diag.len()),
        rhs_printed: Vec::with_capacity(diag.len()),
        rhs_young: Vec::with_capacity(diag.len()),
        residual_printed: Vec::with_capacity(diag.len()),
        residual_young: Vec::with_capacity(diag.len()),
    };
    for (i, d) in diag.iter().enumerate() {
        let lhs = de[i] + mu * d.stokes_sq;
        let common = coeff.rate * k[i] * d.enstrophy + coeff.c_tilde * (d.grad_theta_sq + d.grad_phi_sq);
        let printed = common + coeff.forcing_printed * d.f_sq;
        let young = common + coeff.forcing_young * d.f_sq;
        out.lhs.push(lhs);
        out.rhs_printed.push(printed);
        out.rhs_young.push(young);
        out.residual_printed.push(printed - lhs);
        out.residual_young.push(young - lhs);
    }
    Ok(out)
}

/// `‖∇θ(t)‖² ≤ N exp(C t)` with `N = ‖∇θ(0)‖² + (2/κ) ∫‖ℓ‖²` and
/// `C = 27/(16κ³) (C_adv sup‖∇u‖)⁴`.
///
/// Testing the scalar equation with `-Δθ` and splitting the advection bound
/// `C_adv ‖∇u‖ ‖∇θ‖^{1/2} ‖Δθ‖^{3/2}` by Young with exponents `4/3, 4` gives
/// these coefficients.
pub fn scalar_envelope(
    times: &[f64],
    observed: &[f64],
    source_sq: &[f64],
    kappa: f64,
    advection: f64,
    grad_u_sup: f64,
) -> Envelope {
    let n = observed.first().copied().unwrap_or(0.0) + 2.0 / kappa * integral(times, source_sq);
    let rate = 27.0 / (16.0 * kappa.powi(3)) * (advection * grad_u_sup).powi(4);
    let t0 = times.first().copied().unwrap_or(0.0);
    let envelope = times.iter().map(|t| n * (rate * (t - t0)).exp()).collect();
    Envelope::new(n, rate, times.to_vec(), observed.to_vec(), envelope)
}

/// Temperature and concentration envelopes.
pub fn scalar_envelopes(diag: &[Diagnostics], params: &PhysicsParams, advection: f64) -> (Envelope, Envelope) {
    let times = column(diag, |d| d.t);
    let sup = diag.iter().map(|d| d.enstrophy.sqrt()).fold(0.0, f64::max);
    (
        scalar_envelope(
            &times,
            &column(diag, |d| d.grad_theta_sq),
            &column(diag, |d| d.ell_sq),
            params.kappa1,
            advection,
            sup,
        ),
        scalar_envelope(
            &times,
            &column(diag, |d| d.grad_phi_sq),
            &column(diag, |d| d.h_sq),
            params.kappa2,
            advection,
            sup,
        ),
    )
}

/// `ε ∫ k^{1-ε} ≤ εT + (1-ε) ‖k‖_{1,∞}` on the discrete series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeakL1Chain {
    pub eps: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

pub fn weak_l1_chain(k: &TimeSeries, eps: f64) -> Result<WeakL1Chain> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::arg("eps", format!("must lie in (0, 1), got {eps}")));
    }
    let lhs = eps
        * k.values()
            .iter()
            .zip(k.weights())
            .map(|(v, w)| w * v.abs().powf(1.0 - eps))
            .sum::<f64>();
    let rhs = eps * k.duration() + (1.0 - eps) * k.as_samples().weak_lp_norm(1.0)?;
    Ok(WeakL1Chain {
        eps,
        lhs,
        rhs,
        holds: lhs <= rhs,
    })
}

/// One `(ε, δ)` candidate of the admissibility search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsiCandidate {
    pub eps: f64,
    pub delta: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c3: Option<f64>,
    pub admissible: bool,
    /// Failed conditions, empty when admissible.
    pub violated: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsiBound {
    pub eps: f64,
    pub delta: f64,
    /// `δ^{-1/(2ε)}`.
    pub bound: f64,
    /// `ψ(t) = R + C₃ μ^{1-s} ∫₀ᵗ k^{1-ε} E^{1+2ε}`.
    pub psi: Vec<f64>,
    pub contained: Vec<bool>,
    /// `ψ(0)^{-2ε} - ψ(t)^{-2ε} ≤ 2C₃μ^{1-s} ε ∫₀ᵗ k^{1-ε}` at every sample.
    pub integrated_holds: bool,
}

impl PsiBound {
    pub fn all_contained(&self) -> bool {
        self.contained.iter().all(|&c| c)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsiReport {
    /// `R`, the same data radius as the velocity envelope.
    pub radius: f64,
    pub k_weak_l1: f64,
    pub duration: f64,
    pub candidates: Vec<PsiCandidate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chosen: Option<PsiBound>,
}

impl PsiReport {
    pub fn admissible(&self) -> bool {
        self.chosen.is_some()
    }
}

pub struct PsiInputs<'a> {
    pub diag: &'a [Diagnostics],
    pub k: &'a TimeSeries,
    pub pair: ProdiSerrinPair,
    pub c1: f64,
    pub mu: f64,
    pub radius: f64,
}

/// Scans `ε` (outer) and `δ` (inner) in the given order and stops at the
/// first admissible pair. `c2_eps` returns `None` for an uncalibrated `ε`.
pub fn psi_envelope(
    inputs: &PsiInputs<'_>,
    c2_eps: impl Fn(f64) -> Option<f64>,
    eps_grid: &[f64],
    delta_grid: &[f64],
) -> Result<PsiReport> {
    let PsiInputs {
        diag,
        k,
        pair,
        c1,
        mu,
        radius,
    } = *inputs;
    if !radius.is_finite() {
        return Err(Error::arg(
            "radius",
            format!("data radius must be finite, got {radius}"),
        ));
    }
    let k_weak_l1 = k.as_samples().weak_lp_norm(1.0)?;
    let duration = k.duration();
    let visc = mu.powf(1.0 - pair.s());
    let mut report = PsiReport {
        radius,
        k_weak_l1,
        duration,
        candidates: Vec::new(),
        chosen: None,
    };
    for &eps in eps_grid {
        for &delta in delta_grid {
            let mut violated = Vec::new();
            if !(eps > 0.0 && eps < 1.0) {
                violated.push(format!("ε = {eps} outside (0, 1)"));
            }
            if !(delta > 0.0 && delta < 1.0 / 3.0) {
                violated.push(format!("δ = {delta} outside (0, 1/3)"));
            }
            let c3 = c2_eps(eps).map(|c| c * c1);
            match c3 {
                None => violated.push(format!("no interpolation constant for ε = {eps}")),
                Some(c3) => {
                    let a = 2.0 * c3 * visc;
                    if !(1.0 - delta < radius.powf(-2.0 * eps)) {
                        violated.push("1 - δ < R^{-2ε}".into());
                    }
                    if !(a * eps * duration < delta) {
                        violated.push("2C₃μ^{1-s} ε T < δ".into());
                    }
                    if !(a * k_weak_l1 < 1.0 - 3.0 * delta) {
                        violated.push("2C₃μ^{1-s} ‖k‖_{1,∞} < 1 - 3δ".into());
                    }
                }
            }
            let admissible = violated.is_empty();
            report.candidates.push(PsiCandidate {
                eps,
                delta,
                c3,
                admissible,
                violated,
            });
            if admissible {
                let c3 = c3.expect("admissible implies calibrated");
                report.chosen = Some(psi_bound(diag, k, c3 * visc, radius, eps, delta));
                return Ok(report);
            }
        }
    }
    Ok(report)
}

fn psi_bound(diag: &[Diagnostics], k: &TimeSeries, c3_visc: f64, radius: f64, eps: f64, delta: f64) -> PsiBound {
    let times = k.times();
    let kv = k.values();
    let growth: Vec<f64> = diag
        .iter()
        .zip(kv)
        .map(|(d, k)| k.powf(1.0 - eps) * d.enstrophy.powf(1.0 + 2.0 * eps))
        .collect();
    let psi: Vec<f64> = cumulative_integral(times, &growth)
        .iter()
        .map(|g| radius + c3_visc * g)
        .collect();
    let k_pow: Vec<f64> = kv.iter().map(|k| k.powf(1.0 - eps)).collect();
    let ik = cumulative_integral(times, &k_pow);
    let integrated_holds = psi.iter().zip(&ik).all(|(p, ik)| {
        let lhs = if *p == psi[0] {
            0.0
        } else {
            psi[0].powf(-2.0 * eps) - p.powf(-2.0 * eps)
        };
        lhs <= 2.0 * c3_visc * eps * ik * (1.0 + 1e-12)
    });
    let bound = delta.powf(-1.0 / (2.0 * eps));
    PsiBound {
        eps,
        delta,
        bound,
        contained: diag.iter().map(|d| d.enstrophy <= bound).collect(),
        psi,
        integrated_holds,
    }
}
