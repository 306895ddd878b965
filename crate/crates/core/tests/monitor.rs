mod common;

use common::{gravity, random_state, record, small_data_run, torus};
use obreg::dynamics::{Forcing, PhysicsParams, SimState, SolverConfig};
use obreg::grid::{cellular_mode, ScalarField};
use obreg::lebesgue::TimeSeries;
use obreg::monitor::{
    build_report, calibrate, held_out_containment, k_series, member_ratios, scalar_envelopes, theorem1_criterion,
    theorem2_criterion, weak_l1_chain, FamilyKind, FieldFamily, Member, MonitorConfig, Trajectory, VerdictStatus,
};
use obreg::ProdiSerrinPair;
use proptest::prelude::*;

fn pairs() -> Vec<ProdiSerrinPair> {
    MonitorConfig::default().pairs
}

fn decay_trajectory(seed: u64, n: usize) -> Trajectory {
    let g = torus(2, n);
    let p = PhysicsParams::new(0.05, 0.05, 0.05, 0.0, gravity(2)).unwrap();
    let cfg = SolverConfig {
        max_dt: 0.01,
        sample_every: 5,
        ..SolverConfig::default()
    };
    record(random_state(&g, seed, 1.0, 1.0), &p, &Forcing::none(), 0.3, &cfg)
}

/// `n` copies of one velocity field at times `0, dt, ...`.
fn frozen(u: obreg::grid::VectorField, n: usize, dt: f64) -> Trajectory {
    let g = u.grid().clone();
    let states = (0..n)
        .map(|i| SimState::new(u.clone(), ScalarField::zeros(&g), ScalarField::zeros(&g), i as f64 * dt).unwrap())
        .collect();
    Trajectory::from_states(states, &Forcing::none()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn k_is_homogeneous(seed in 0u64..1000, c in 0.1f64..10.0) {
        let traj = decay_trajectory(seed, 16);
        for pair in pairs() {
            let k = k_series(&traj, &pair).unwrap();
            let ks = k_series(&traj.with_scaled_velocity(c), &pair).unwrap();
            for (a, b) in k.values().iter().zip(ks.values()) {
                prop_assert!((b - c.powf(pair.s()) * a).abs() <= 1e-12 * b);
            }
        }
    }

    #[test]
    fn weak_l1_chain_holds(values in prop::collection::vec(0.0f64..1e3, 2..60), eps in 0.01f64..0.99) {
        let times: Vec<f64> = (0..values.len()).map(|i| 0.1 * i as f64 + 0.01 * (i * i) as f64).collect();
        let k = TimeSeries::from_samples(times, values).unwrap();
        let chain = weak_l1_chain(&k, eps).unwrap();
        prop_assert!(chain.holds, "{chain:?}");
    }

    #[test]
    fn larger_velocity_never_improves_verdict(seed in 0u64..1000, c in 1.0f64..20.0) {
        let traj = decay_trajectory(seed, 16);
        let pair = pairs()[0];
        let a = theorem2_criterion(&traj, &pair, 0.8, 1.2, 0.5, 0.05).unwrap();
        let b = theorem2_criterion(&traj.with_scaled_velocity(c), &pair, 0.8, 1.2, 0.5, 0.05).unwrap();
        prop_assert!(b.weak_time_norm >= a.weak_time_norm);
        prop_assert!(b.margin.unwrap() <= a.margin.unwrap());
        if a.status == VerdictStatus::Violated {
            prop_assert_eq!(b.status, VerdictStatus::Violated);
        }
    }
}

#[test]
fn strong_time_norm_matches_trapezoid_oracle() {
    // r = ∞: the weak norm is the pointwise maximum of |u|
    let traj = decay_trajectory(21, 16);
    let pair = pairs()[0];
    let sup: Vec<f64> = traj
        .samples()
        .iter()
        .map(|s| s.state.u.magnitude().into_iter().fold(0.0, f64::max))
        .collect();
    let t = traj.times();
    let mut integral = 0.0;
    for i in 1..t.len() {
        integral += 0.5 * (t[i] - t[i - 1]) * (sup[i].powi(2) + sup[i - 1].powi(2));
    }
    let v = theorem1_criterion(&traj, &pair).unwrap();
    assert!((v.strong_time_norm - integral.sqrt()).abs() <= 1e-10 * integral.sqrt());
    assert_eq!(v.status, VerdictStatus::Satisfied);
}

#[test]
fn weak_time_norm_below_strong() {
    let traj = decay_trajectory(4, 16);
    for pair in pairs() {
        let strong = theorem1_criterion(&traj, &pair).unwrap().strong_time_norm;
        let weak = theorem2_criterion(&traj, &pair, 1.0, 1.0, 0.5, 0.05)
            .unwrap()
            .weak_time_norm;
        assert!(weak <= strong * (1.0 + 1e-12), "{pair}: {weak} > {strong}");
    }
}

#[test]
fn zero_velocity_has_full_margin() {
    let g = torus(2, 16);
    let traj = frozen(obreg::grid::VectorField::zeros(&g), 5, 0.1);
    let pair = pairs()[0];
    let v = theorem2_criterion(&traj, &pair, 0.7, 1.3, 0.5, 0.2).unwrap();
    assert_eq!(v.weak_time_norm, 0.0);
    assert_eq!(v.margin, Some(v.gamma.unwrap().threshold));
    assert_eq!(v.status, VerdictStatus::Satisfied);
}

#[test]
fn twice_the_threshold_is_violated() {
    let g = torus(2, 16);
    let pair = pairs()[0];
    let (c_s, c2, mu) = (0.7, 1.3, 0.2);
    let threshold = obreg::monitor::gamma_threshold(&pair, c_s, c2, mu).unwrap().threshold;
    // frozen field on [0, 1]: the weak-in-time norm of a constant c is c T^{1/s}
    let mode = cellular_mode(&g, [1, 2, 0], 1.0);
    let peak = mode.magnitude().into_iter().fold(0.0, f64::max);
    let traj = frozen(mode.scale(2.0 * threshold / peak), 11, 0.1);
    let v = theorem2_criterion(&traj, &pair, c_s, c2, 0.5, mu).unwrap();
    assert!((v.weak_time_norm - 2.0 * threshold).abs() <= 1e-12 * threshold);
    assert_eq!(v.status, VerdictStatus::Violated);
    assert!((v.margin.unwrap() + threshold).abs() <= 1e-12 * threshold);
}

#[test]
fn decay_run_stays_inside_envelopes() {
    let traj = decay_trajectory(9, 32);
    let g = torus(2, 32);
    let config = MonitorConfig::default();
    let constants = calibrate(
        &FieldFamily::new(&g, 0, 50, FamilyKind::Mixed).unwrap(),
        &config.pairs,
        &config.all_eps(),
    )
    .unwrap();
    let params = PhysicsParams::new(0.05, 0.05, 0.05, 0.0, gravity(2)).unwrap();
    let report = build_report(&traj, &params, Some(&constants), &config).unwrap();
    assert!(report.theta_envelope.as_ref().unwrap().all_contained());
    assert!(report.phi_envelope.as_ref().unwrap().all_contained());
    for p in &report.pairs {
        assert!(p.velocity_envelope.as_ref().unwrap().all_contained(), "{}", p.pair);
        assert!(p.weak_l1_chain.iter().all(|c| c.holds));
        let res = p.residual.as_ref().unwrap();
        assert!(
            res.residual_printed.iter().all(|r| *r >= 0.0),
            "{}: {:?}",
            p.pair,
            res.residual_printed
        );
    }
}

#[test]
fn pure_diffusion_scalar_envelope() {
    // u = 0: ‖∇θ(t)‖² = ‖∇θ(0)‖² e^{-2κ|m|²t} for one mode, below N e^{0}
    let g = torus(2, 16);
    let params = PhysicsParams::new(0.1, 0.2, 0.3, 0.0, gravity(2)).unwrap();
    let theta = ScalarField::from_fn(&g, |x| (2.0 * x[0] + x[1]).sin());
    let initial = SimState::new(obreg::grid::VectorField::zeros(&g), theta.clone(), theta, 0.0).unwrap();
    let cfg = SolverConfig {
        max_dt: 0.02,
        sample_every: 1,
        ..SolverConfig::default()
    };
    let traj = record(initial, &params, &Forcing::none(), 0.5, &cfg);
    let diag = traj.diagnostics();
    let (th, ph) = scalar_envelopes(&diag, &params, 1.0);
    assert_eq!(th.rate, 0.0);
    assert!(th.all_contained() && ph.all_contained());
    for (d, e) in diag.iter().zip(&th.observed) {
        let exact = diag[0].grad_theta_sq * (-2.0 * 0.2 * 5.0 * d.t).exp();
        assert!((e - exact).abs() <= 1e-10 * exact);
    }
}

#[test]
fn small_data_admits_psi_bound() {
    let (report, threshold) = small_data_run(1e-2);
    let psi = report.pairs[0].psi.as_ref().unwrap();
    let chosen = psi
        .chosen
        .as_ref()
        .unwrap_or_else(|| panic!("no admissible pair: {:?}", psi.candidates));
    assert!(chosen.all_contained());
    assert!(chosen.integrated_holds);
    assert!(report.pairs[0].weak_norms[0] <= 1e-2 * threshold * (1.0 + 1e-12));
    assert!(report.pairs[0]
        .theorem2
        .iter()
        .all(|v| v.status == VerdictStatus::Satisfied));
}

#[test]
fn large_data_admits_nothing() {
    let (report, _) = small_data_run(10.0);
    let psi = report.pairs[0].psi.as_ref().unwrap();
    assert!(!psi.admissible(), "chosen {:?}", psi.chosen);
    assert!(psi.candidates.iter().all(|c| !c.violated.is_empty()));
}

#[test]
fn held_out_family_is_contained() {
    let g = torus(2, 16);
    let config = MonitorConfig::default();
    let eps = config.all_eps();
    let constants = calibrate(
        &FieldFamily::new(&g, 1, 50, FamilyKind::Mixed).unwrap(),
        &config.pairs,
        &eps,
    )
    .unwrap();
    let fresh = FieldFamily::new(&g, 2, 50, FamilyKind::Mixed).unwrap();
    for row in held_out_containment(&constants, &fresh, &config.pairs, &eps).unwrap() {
        assert!(row.fraction() >= 0.95, "{row:?}");
    }
}

#[test]
fn ratios_ignore_amplitude() {
    let g = torus(2, 16);
    let family = FieldFamily::new(&g, 3, 12, FamilyKind::Mixed).unwrap();
    let pairs = pairs();
    let eps = [0.5, 0.1];
    for m in family.members() {
        let a = member_ratios(&m, &pairs, &eps).unwrap();
        let doubled = Member {
            u: m.u.scale(2.0),
            theta: m.theta.scale(2.0),
        };
        let b = member_ratios(&doubled, &pairs, &eps).unwrap();
        let all = |r: &obreg::monitor::MemberRatios| -> Vec<f64> {
            [r.embedding, r.advection]
                .into_iter()
                .chain(r.convective.iter().copied())
                .chain(r.interpolation.iter().copied())
                .map(|v| v.unwrap())
                .collect()
        };
        for (x, y) in all(&a).iter().zip(all(&b)) {
            assert!((x - y).abs() <= 1e-12 * x, "{x} vs {y}");
        }
    }
}

#[test]
fn larger_family_gives_larger_constants() {
    let g = torus(2, 16);
    let pairs = pairs();
    let eps = [0.5];
    let small = calibrate(&FieldFamily::new(&g, 5, 20, FamilyKind::Mixed).unwrap(), &pairs, &eps).unwrap();
    let large = calibrate(&FieldFamily::new(&g, 5, 40, FamilyKind::Mixed).unwrap(), &pairs, &eps).unwrap();
    assert!(large.embedding >= small.embedding);
    assert!(large.advection >= small.advection);
    for (a, b) in small.convective.iter().zip(&large.convective) {
        assert!(b.value >= a.value);
    }
    for (a, b) in small.interpolation.iter().zip(&large.interpolation) {
        assert!(b.value >= a.value);
    }
}

#[test]
fn same_seed_same_constants() {
    let g = torus(2, 16);
    let pairs = pairs();
    let a = calibrate(
        &FieldFamily::new(&g, 8, 15, FamilyKind::RandomSpectra).unwrap(),
        &pairs,
        &[0.5],
    )
    .unwrap();
    let b = calibrate(
        &FieldFamily::new(&g, 8, 15, FamilyKind::RandomSpectra).unwrap(),
        &pairs,
        &[0.5],
    )
    .unwrap();
    assert_eq!(a, b);
}

#[test]
fn uncalibrated_report_omits_thresholds() {
    let traj = decay_trajectory(2, 16);
    let params = PhysicsParams::new(0.05, 0.05, 0.05, 0.0, gravity(2)).unwrap();
    let report = build_report(&traj, &params, None, &MonitorConfig::default()).unwrap();
    assert!(!report.calibrated);
    for p in &report.pairs {
        assert!(p
            .theorem2
            .iter()
            .all(|v| v.status == VerdictStatus::Uncalibrated && v.gamma.is_none()));
        assert!(p.velocity_envelope.is_none() && p.psi.is_none());
    }
    assert!(report.theta_envelope.is_none());
}
