//! Empirical constants for the functional inequalities used by the monitor.
//!
//! Each constant is the largest ratio `lhs / rhs` seen over a seeded family of
//! fields, multiplied by [`SAFETY_FACTOR`]. Family members are seeded
//! independently from `(seed, index)`, so a larger family with the same seed
//! contains the smaller one and its constants can only grow.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::ProdiSerrinPair;
use crate::error::{Error, Result};
use crate::grid::{
    cellular_mode, convective_scalar, convective_vector, grad_norm_sq, laplacian, random_scalar, random_solenoidal,
    stokes_norm_sq, Grid, ScalarField, VectorField,
};
use crate::lebesgue::WeightedSamples;

pub const SAFETY_FACTOR: f64 = 1.5;
pub const MIN_FAMILY_SIZE: usize = 10;

const MATCH_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    /// Random spectra with every fourth member a single cellular mode.
    Mixed,
    SingleModes,
    RandomSpectra,
}

/// A velocity with a scalar partner for the advection estimate.
#[derive(Debug, Clone)]
pub struct Member {
    pub u: VectorField,
    pub theta: ScalarField,
}

#[derive(Debug, Clone)]
pub struct FieldFamily {
    grid: Grid,
    seed: u64,
    count: usize,
    kind: FamilyKind,
}

impl FieldFamily {
    pub fn new(grid: &Grid, seed: u64, count: usize, kind: FamilyKind) -> Result<Self> {
        if count < MIN_FAMILY_SIZE {
            return Err(Error::DegenerateFamily(format!(
                "family of {count} members is below the minimum of {MIN_FAMILY_SIZE}"
            )));
        }
        Ok(FieldFamily {
            grid: grid.clone(),
            seed,
            count,
            kind,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn member(&self, index: usize) -> Member {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index as u64);
        let single = match self.kind {
            FamilyKind::SingleModes => true,
            FamilyKind::RandomSpectra => false,
            FamilyKind::Mixed => index % 4 == 3,
        };
        if single {
            single_mode_member(&self.grid, &mut rng)
        } else {
            let decay = rng.gen_range(1.5..4.0);
            let rms = rng.gen_range(0.1..3.0);
            let u = random_solenoidal(&self.grid, &mut rng, decay, rms);
            let decay = rng.gen_range(1.5..4.0);
            let rms = rng.gen_range(0.1..3.0);
            let theta = random_scalar(&self.grid, &mut rng, decay, rms);
            Member { u, theta }
        }
    }

    pub fn members(&self) -> impl Iterator<Item = Member> + '_ {
        (0..self.count).map(|i| self.member(i))
    }
}

fn single_mode_member(grid: &Grid, rng: &mut ChaCha8Rng) -> Member {
    // largest mode number that survives the two-thirds truncation
    let kmax = ((grid.n() - 1) / 3).clamp(1, 3) as i64;
    let draw = |rng: &mut ChaCha8Rng, allow_zero: bool| -> [i64; 3] {
        loop {
            let lo = if allow_zero { 0 } else { 1 };
            let mut m = [0i64; 3];
            for m in m.iter_mut().take(grid.dim()) {
                *m = rng.gen_range(lo..=kmax);
            }
            if m.iter().any(|&v| v != 0) {
                return m;
            }
        }
    };
    let modes = draw(rng, false);
    let amplitude = rng.gen_range(0.2..2.0);
    let u = cellular_mode(grid, modes, amplitude);

    let (m1, m2) = (draw(rng, true), draw(rng, true));
    let (a, b) = (rng.gen_range(0.2..2.0), rng.gen_range(0.2..2.0));
    let base = 2.0 * std::f64::consts::PI / grid.length();
    let phase = |m: &[i64; 3], x: &[f64]| base * x.iter().zip(m).map(|(x, m)| x * *m as f64).sum::<f64>();
    let theta = ScalarField::from_fn(grid, |x| a * phase(&m1, x).cos() + b * phase(&m2, x).sin()).with_zero_mean();
    Member { u, theta }
}

fn grad_norm(u: &VectorField) -> f64 {
    u.components().iter().map(grad_norm_sq).sum::<f64>().sqrt()
}

fn ratio(lhs: f64, rhs: f64) -> Option<f64> {
    (rhs > 0.0 && rhs.is_finite() && lhs.is_finite()).then(|| lhs / rhs)
}

/// `‖v‖_{L⁶} / ‖∇v‖` over the velocity magnitude, each velocity component
/// and the scalar partner.
pub fn embedding_ratio(member: &Member) -> Option<f64> {
    let mut out: Option<f64> = None;
    let mut push = |r: Option<f64>| {
        if let Some(r) = r {
            out = Some(out.map_or(r, |o| o.max(r)));
        }
    };
    let l6 = |w: WeightedSamples| w.lp_norm(6.0).expect("finite exponent");
    push(ratio(
        l6(WeightedSamples::from_magnitude(&member.u)),
        grad_norm(&member.u),
    ));
    for c in member.u.components().iter().chain([&member.theta]) {
        push(ratio(l6(WeightedSamples::from_scalar(c)), grad_norm_sq(c).sqrt()));
    }
    out
}

/// `|((u·∇)θ, Δθ)| / (‖∇u‖ ‖∇θ‖^{1/2} ‖Δθ‖^{3/2})`.
pub fn advection_ratio(u: &VectorField, theta: &ScalarField) -> Result<Option<f64>> {
    let lap = laplacian(theta);
    let lhs = convective_scalar(u, theta)?.inner(&lap)?.abs();
    let rhs = grad_norm(u) * grad_norm_sq(theta).powf(0.25) * lap.norm().powf(1.5);
    Ok(ratio(lhs, rhs))
}

/// `‖(u·∇)u‖ / (‖u‖_{r,∞} ‖∇u‖^{2/s} ‖Au‖^{(s-2)/s})`.
pub fn convective_ratio(u: &VectorField, pair: &ProdiSerrinPair) -> Result<Option<f64>> {
    let s = pair.s();
    let lhs = convective_vector(u, u)?.norm();
    let weak = WeightedSamples::from_magnitude(u).weak_lp_norm(pair.r())?;
    let rhs = weak * grad_norm(u).powf(2.0 / s) * stokes_norm_sq(u).sqrt().powf((s - 2.0) / s);
    Ok(ratio(lhs, rhs))
}

/// `‖u‖_{r_ε,∞}^{s_ε} / (‖u‖_{r,∞}^{s(1-ε)} ‖∇u‖^{4ε})`.
pub fn interpolation_ratio(u: &VectorField, pair: &ProdiSerrinPair, eps: f64) -> Result<Option<f64>> {
    let shifted = pair.shifted(eps)?;
    let samples = WeightedSamples::from_magnitude(u);
    let lhs = samples.weak_lp_norm(shifted.r())?.powf(shifted.s());
    let rhs = samples.weak_lp_norm(pair.r())?.powf(pair.s() * (1.0 - eps)) * grad_norm(u).powf(4.0 * eps);
    Ok(ratio(lhs, rhs))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairConstant {
    pub pair: ProdiSerrinPair,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterpolationConstant {
    pub pair: ProdiSerrinPair,
    pub eps: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum Provenance {
    Empirical {
        seed: u64,
        family_size: usize,
        kind: FamilyKind,
        safety_factor: f64,
        dim: usize,
        n: usize,
        length: f64,
    },
    Supplied {
        note: String,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibratedConstants {
    /// `‖v‖_{L⁶} ≤ C ‖∇v‖`.
    pub embedding: f64,
    /// `|((u·∇)θ, Δθ)| ≤ C ‖∇u‖ ‖∇θ‖^{1/2} ‖Δθ‖^{3/2}`.
    pub advection: f64,
    /// `‖(u·∇)u‖ ≤ C_s ‖u‖_{r,∞} ‖∇u‖^{2/s} ‖Au‖^{(s-2)/s}` per pair.
    pub convective: Vec<PairConstant>,
    /// `‖u‖_{r_ε,∞}^{s_ε} ≤ C ‖u‖_{r,∞}^{s(1-ε)} ‖∇u‖^{4ε}` per pair and `ε`.
    pub interpolation: Vec<InterpolationConstant>,
    pub provenance: Provenance,
}

fn same(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= MATCH_TOLERANCE * a.abs().max(b.abs())
}

fn same_pair(a: &ProdiSerrinPair, b: &ProdiSerrinPair) -> bool {
    same(a.r(), b.r()) && same(a.s(), b.s())
}

impl CalibratedConstants {
    pub fn convective_for(&self, pair: &ProdiSerrinPair) -> Option<f64> {
        self.convective
            .iter()
            .find(|c| same_pair(&c.pair, pair))
            .map(|c| c.value)
    }

    pub fn interpolation_for(&self, pair: &ProdiSerrinPair, eps: f64) -> Option<f64> {
        self.interpolation
            .iter()
            .find(|c| same_pair(&c.pair, pair) && same(c.eps, eps))
            .map(|c| c.value)
    }

    /// Every constant must be finite and strictly positive.
    pub fn validate(&self) -> Result<()> {
        let check = |name: &'static str, value: f64| {
            if value > 0.0 && value.is_finite() {
                Ok(())
            } else {
                Err(Error::NonpositiveConstant { name, value })
            }
        };
        check("embedding", self.embedding)?;
        check("advection", self.advection)?;
        for c in &self.convective {
            check("convective", c.value)?;
        }
        for c in &self.interpolation {
            check("interpolation", c.value)?;
        }
        Ok(())
    }
}

/// Largest ratios seen for one member.
#[derive(Debug, Clone, PartialEq)]
pub struct MemberRatios {
    pub embedding: Option<f64>,
    pub advection: Option<f64>,
    pub convective: Vec<Option<f64>>,
    /// Pair-major, `ε` minor.
    pub interpolation: Vec<Option<f64>>,
}

pub fn member_ratios(member: &Member, pairs: &[ProdiSerrinPair], eps: &[f64]) -> Result<MemberRatios> {
    let mut interpolation = Vec::with_capacity(pairs.len() * eps.len());
    for pair in pairs {
        for &e in eps {
            interpolation.push(interpolation_ratio(&member.u, pair, e)?);
        }
    }
    Ok(MemberRatios {
        embedding: embedding_ratio(member),
        advection: advection_ratio(&member.u, &member.theta)?,
        convective: pairs
            .iter()
            .map(|p| convective_ratio(&member.u, p))
            .collect::<Result<_>>()?,
        interpolation,
    })
}

fn fold_max(acc: &mut Option<f64>, r: Option<f64>) {
    if let Some(r) = r {
        *acc = Some(acc.map_or(r, |a| a.max(r)));
    }
}

fn finalize(name: &str, max: Option<f64>) -> Result<f64> {
    match max {
        Some(m) if m > 0.0 && m.is_finite() => Ok(m * SAFETY_FACTOR),
        _ => Err(Error::DegenerateFamily(format!(
            "no member gives a positive finite ratio for the {name} inequality"
        ))),
    }
}

pub fn calibrate(family: &FieldFamily, pairs: &[ProdiSerrinPair], eps: &[f64]) -> Result<CalibratedConstants> {
    let mut embedding = None;
    let mut advection = None;
    let mut convective = vec![None; pairs.len()];
    let mut interpolation = vec![None; pairs.len() * eps.len()];
    for member in family.members() {
        let r = member_ratios(&member, pairs, eps)?;
        fold_max(&mut embedding, r.embedding);
        fold_max(&mut advection, r.advection);
        for (acc, v) in convective.iter_mut().zip(r.convective) {
            fold_max(acc, v);
        }
        for (acc, v) in interpolation.iter_mut().zip(r.interpolation) {
            fold_max(acc, v);
        }
    }

    let mut interp = Vec::with_capacity(interpolation.len());
    for (i, pair) in pairs.iter().enumerate() {
        for (j, &e) in eps.iter().enumerate() {
            interp.push(InterpolationConstant {
                pair: *pair,
                eps: e,
                value: finalize(
                    &format!("interpolation {pair} ε = {e}"),
                    interpolation[i * eps.len() + j],
                )?,
            });
        }
    }
    let grid = family.grid();
    Ok(CalibratedConstants {
        embedding: finalize("embedding", embedding)?,
        advection: finalize("advection", advection)?,
        convective: pairs
            .iter()
            .zip(convective)
            .map(|(pair, m)| {
                Ok(PairConstant {
                    pair: *pair,
                    value: finalize(&format!("convective {pair}"), m)?,
                })
            })
            .collect::<Result<_>>()?,
        interpolation: interp,
        provenance: Provenance::Empirical {
            seed: family.seed(),
            family_size: family.len(),
            kind: family.kind(),
            safety_factor: SAFETY_FACTOR,
            dim: grid.dim(),
            n: grid.n(),
            length: grid.length(),
        },
    })
}

/// How often calibrated constants bound the ratios of another family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Containment {
    pub inequality: String,
    pub contained: usize,
    pub total: usize,
}

impl Containment {
    pub fn fraction(&self) -> f64 {
        if self.total == 0 {
            1.0
        } else {
            self.contained as f64 / self.total as f64
        }
    }
}

/// Checks `constants` against every member of `family`. Pairs and `ε` values
/// missing from `constants` are skipped.
pub fn held_out_containment(
    constants: &CalibratedConstants,
    family: &FieldFamily,
    pairs: &[ProdiSerrinPair],
    eps: &[f64],
) -> Result<Vec<Containment>> {
    let mut rows: Vec<(String, Option<f64>)> = vec![
        ("embedding".into(), Some(constants.embedding)),
        ("advection".into(), Some(constants.advection)),
    ];
    for p in pairs {
        rows.push((format!("convective {p}"), constants.convective_for(p)));
    }
    for p in pairs {
        for &e in eps {
            rows.push((format!("interpolation {p} ε = {e}"), constants.interpolation_for(p, e)));
        }
    }
    let mut counts = vec![(0usize, 0usize); rows.len()];
    for member in family.members() {
        let r = member_ratios(&member, pairs, eps)?;
        let values = [r.embedding, r.advection]
            .into_iter()
            .chain(r.convective)
            .chain(r.interpolation);
        for (i, v) in values.enumerate() {
            if let (Some(bound), Some(v)) = (rows[i].1, v) {
                counts[i].1 += 1;
                if v <= bound {
                    counts[i].0 += 1;
                }
            }
        }
    }
    Ok(rows
        .into_iter()
        .zip(counts)
        .filter(|((_, bound), _)| bound.is_some())
        .map(|((inequality, _), (contained, total))| Containment {
            inequality,
            contained,
            total,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs() -> Vec<ProdiSerrinPair> {
        vec![
            ProdiSerrinPair::new(f64::INFINITY, 2.0).unwrap(),
            ProdiSerrinPair::new(6.0, 4.0).unwrap(),
        ]
    }

    #[test]
    fn small_family_is_rejected() {
        let g = Grid::new(2, 16, 1.0).unwrap();
        assert!(matches!(
            FieldFamily::new(&g, 1, 9, FamilyKind::Mixed),
            Err(Error::DegenerateFamily(_))
        ));
    }

    #[test]
    fn members_are_prefix_stable() {
        let g = Grid::new(2, 16, 1.0).unwrap();
        let a = FieldFamily::new(&g, 7, 10, FamilyKind::Mixed).unwrap();
        let b = FieldFamily::new(&g, 7, 20, FamilyKind::Mixed).unwrap();
        for i in 0..10 {
            let (ma, mb) = (a.member(i), b.member(i));
            assert_eq!(ma.u.component(0).physical_values(), mb.u.component(0).physical_values());
            assert_eq!(ma.theta.physical_values(), mb.theta.physical_values());
        }
    }

    #[test]
    fn single_mode_family_gives_positive_constants() {
        let g = Grid::new(2, 16, 2.0 * std::f64::consts::PI).unwrap();
        let fam = FieldFamily::new(&g, 3, 12, FamilyKind::SingleModes).unwrap();
        let c = calibrate(&fam, &pairs(), &[0.5]).unwrap();
        c.validate().unwrap();
        assert!(c.convective_for(&pairs()[1]).is_some());
        assert!(c.interpolation_for(&pairs()[0], 0.5).is_some());
        assert!(c.interpolation_for(&pairs()[0], 0.25).is_none());
    }

    #[test]
    fn constants_bound_their_own_family() {
        let g = Grid::new(2, 16, 1.0).unwrap();
        let fam = FieldFamily::new(&g, 5, 10, FamilyKind::Mixed).unwrap();
        let c = calibrate(&fam, &pairs(), &[0.1]).unwrap();
        for row in held_out_containment(&c, &fam, &pairs(), &[0.1]).unwrap() {
            assert_eq!(row.contained, row.total, "{}", row.inequality);
        }
    }
}
