mod common;

use common::{random_state, random_vector, rng, torus};
use obreg::grid::{
    cellular_mode, convective_scalar, convective_vector, divergence, grad_norm_sq, gradient, laplacian, leray_project,
    random_scalar, random_solenoidal, stokes_apply, Grid, ScalarField, VectorField,
};
use proptest::prelude::*;

fn vec_diff(a: &VectorField, b: &VectorField) -> f64 {
    a.axpy(-1.0, b).unwrap().norm()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn leray_is_idempotent(seed in any::<u64>(), dim in 2usize..=3) {
        let g = torus(dim, if dim == 2 { 32 } else { 8 });
        let v = random_vector(&g, seed);
        let p = leray_project(&v);
        let pp = leray_project(&p);
        prop_assert!(vec_diff(&p, &pp) <= 1e-12 * p.norm().max(1.0));
        let div = divergence(&p).norm();
        let grad = p.components().iter().map(grad_norm_sq).sum::<f64>().sqrt();
        prop_assert!(div <= 1e-10 * grad.max(1.0));
    }

    #[test]
    fn leray_is_orthogonal(seed in any::<u64>()) {
        let g = torus(2, 16);
        let v = random_vector(&g, seed);
        let p = leray_project(&v);
        let q = v.axpy(-1.0, &p).unwrap();
        prop_assert!(p.inner(&q).unwrap().abs() <= 1e-10 * v.norm() * v.norm());
    }

    #[test]
    fn parseval(seed in any::<u64>()) {
        let g = torus(2, 32);
        let f = random_scalar(&g, &mut rng(seed), 1.0, 1.3);
        let (a, b) = (f.norm(), f.spectral_norm());
        prop_assert!((a - b).abs() <= 1e-12 * a);
    }

    #[test]
    fn advection_is_skew(seed in any::<u64>(), dim in 2usize..=3) {
        let g = torus(dim, if dim == 2 { 32 } else { 16 });
        let mut r = rng(seed);
        let u = random_solenoidal(&g, &mut r, 1.0, 1.0);
        let phi = random_scalar(&g, &mut r, 1.0, 1.0);
        let v = random_solenoidal(&g, &mut r, 1.0, 1.0);
        prop_assert!(convective_scalar(&u, &phi).unwrap().inner(&phi).unwrap().abs() <= 1e-8);
        prop_assert!(convective_vector(&u, &v).unwrap().inner(&v).unwrap().abs() <= 1e-8);
    }

    #[test]
    fn laplacian_is_negative(seed in any::<u64>()) {
        let g = torus(2, 16);
        let f = random_scalar(&g, &mut rng(seed), 1.0, 1.0);
        let pairing = f.inner(&laplacian(&f)).unwrap();
        prop_assert!((pairing + grad_norm_sq(&f)).abs() <= 1e-10 * grad_norm_sq(&f));
    }
}

#[test]
fn stokes_eigen_relation_on_modes() {
    let g = Grid::new(2, 32, 3.0).unwrap();
    let base = (2.0 * std::f64::consts::PI / 3.0).powi(2);
    let mut count = 0;
    for a in 1..=5i64 {
        for b in 1..=4i64 {
            let u = cellular_mode(&g, [a, b, 0], 0.7);
            let au = stokes_apply(&u);
            assert!(!au.divergence_warning);
            let expected = u.scale(base * (a * a + b * b) as f64);
            assert!(
                vec_diff(&au.field, &expected) <= 1e-10 * expected.norm(),
                "mode ({a}, {b})"
            );
            count += 1;
        }
    }
    assert_eq!(count, 20);
}

#[test]
fn stokes_flags_divergent_input() {
    let g = torus(2, 16);
    let v = gradient(&ScalarField::from_fn(&g, |x| x[0].sin() * x[1].cos()));
    assert!(stokes_apply(&v).divergence_warning);
}

#[test]
fn gradient_of_plane_wave() {
    let g = torus(3, 16);
    let f = ScalarField::from_fn(&g, |x| (2.0 * x[0] - x[2]).sin());
    let grad = gradient(&f);
    let expected = VectorField::from_fn(&g, |x| {
        let c = (2.0 * x[0] - x[2]).cos();
        [2.0 * c, 0.0, -c]
    });
    assert!(vec_diff(&grad, &expected) < 1e-11);
}

#[test]
fn projection_keeps_solenoidal_states() {
    let g = torus(2, 32);
    let s = random_state(&g, 4, 1.0, 0.0);
    assert!(vec_diff(&leray_project(&s.u), &s.u) <= 1e-12 * s.u.norm());
}
