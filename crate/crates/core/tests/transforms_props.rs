use std::f64::consts::PI;

use hermite_io2::hermite::{eval_psi, gauss_hermite};
use hermite_io2::rep::CoeffVector;
use hermite_io2::transforms::{
    analyze, completeness_kernel, fourier_num, momentum_profile_num, number_state_profile, parseval_ratio,
    synthesize_p, synthesize_x, translate_phase, FunctionSpec,
};
use num_complex::Complex;
use proptest::prelude::*;

type C64 = Complex<f64>;

fn p_grid() -> Vec<f64> {
    (0..=48).map(|i| -6.0 + 0.25 * i as f64).collect()
}

fn coeffs_strategy(len: usize) -> impl Strategy<Value = CoeffVector<f64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), len)
        .prop_map(|v| CoeffVector::new(v.into_iter().map(|(re, im)| C64::new(re, im)).collect()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn analyze_inverts_synthesize(c in coeffs_strategy(32)) {
        let rule = gauss_hermite::<f64>(40).unwrap();
        let f = FunctionSpec::samples(synthesize_x(&c, rule.nodes()));
        prop_assert!(analyze(&f, 32, &rule).unwrap().max_abs_diff(&c) <= 1e-12);
    }

    #[test]
    fn momentum_synthesis_is_coherent(c in coeffs_strategy(32)) {
        let rule = gauss_hermite::<f64>(96).unwrap();
        let ps = p_grid();
        let f = FunctionSpec::samples(synthesize_x(&c, rule.nodes()));
        let direct = synthesize_p(&c, &ps);
        let profile = momentum_profile_num(&f, &rule, &ps).unwrap();
        let neg: Vec<f64> = ps.iter().map(|p| -p).collect();
        let mirrored = fourier_num(&f, &rule, &neg).unwrap();
        for ((d, a), b) in direct.iter().zip(&profile).zip(&mirrored) {
            prop_assert!((d - a).norm() <= 1e-8);
            prop_assert!((d - b).norm() <= 1e-8);
        }
    }

    #[test]
    fn parseval_ratio_is_universal(c in coeffs_strategy(16)) {
        prop_assume!(c.norm_sqr() > 1e-3);
        let rule = gauss_hermite::<f64>(40).unwrap();
        let f = FunctionSpec::samples(synthesize_x(&c, rule.nodes()));
        prop_assert!((parseval_ratio(&f, 16, &rule).unwrap() - (2.0 * PI).sqrt()).abs() <= 1e-10);
    }

    #[test]
    fn translation_acts_by_phase(x0 in -2.0f64..2.0) {
        let rule = gauss_hermite::<f64>(96).unwrap();
        let ps = p_grid();
        let base = momentum_profile_num(&FunctionSpec::real(|x| eval_psi(0, x)), &rule, &ps).unwrap();
        let shifted = momentum_profile_num(&FunctionSpec::real(move |x| eval_psi(0, x - x0)), &rule, &ps).unwrap();
        let moved = translate_phase(&base, &ps, x0).unwrap();
        for (a, b) in shifted.iter().zip(&moved) {
            prop_assert!((a - b).norm() <= 1e-8);
        }
    }
}

#[test]
fn hermite_functions_are_fourier_eigenvectors() {
    let rule = gauss_hermite::<f64>(96).unwrap();
    let ps = p_grid();
    for n in 0..=32 {
        let got = fourier_num(&FunctionSpec::real(move |x| eval_psi(n, x)), &rule, &ps).unwrap();
        let phase = C64::new(0.0, 1.0).powu(n as u32);
        for (g, &p) in got.iter().zip(&ps) {
            assert!((g - phase * eval_psi(n, p)).norm() <= 1e-8, "n={n} p={p}");
        }
    }
}

#[test]
fn fourier_examples() {
    let rule = gauss_hermite::<f64>(96).unwrap();
    let ps = [-1.5, 0.0, 0.7, 2.0];
    let g0 = fourier_num(&FunctionSpec::real(|x| eval_psi(0, x)), &rule, &ps).unwrap();
    let g3 = fourier_num(&FunctionSpec::real(|x| eval_psi(3, x)), &rule, &ps).unwrap();
    for (i, &p) in ps.iter().enumerate() {
        assert!((g0[i] - C64::new(eval_psi(0, p), 0.0)).norm() < 1e-12);
        assert!((g3[i] - C64::new(0.0, -eval_psi(3, p))).norm() < 1e-12);
    }
}

#[test]
fn kernel_reproduces_low_modes() {
    let rule = gauss_hermite::<f64>(40).unwrap();
    for m in 0..32 {
        for x in [-2.5, -1.0, 0.0, 0.4, 1.75, 3.0] {
            let got = rule.integrate_fn(|xp| completeness_kernel(32, x, xp) * eval_psi(m, xp));
            assert!((got - eval_psi(m, x)).abs() <= 1e-12, "m={m} x={x}");
        }
    }
    // modes at or above the cutoff are projected out
    let got = rule.integrate_fn(|xp| completeness_kernel(32, 0.4, xp) * eval_psi(33, xp));
    assert!(got.abs() <= 1e-12);
}

#[test]
fn number_state_profiles() {
    let rule = gauss_hermite::<f64>(40).unwrap();
    for n in [0usize, 5, 17] {
        let c = analyze(&number_state_profile(n), 24, &rule).unwrap();
        assert!(c.max_abs_diff(&CoeffVector::unit(n, 24)) < 1e-13);
    }
    let ratio = parseval_ratio(&number_state_profile::<f64>(0), 8, &rule).unwrap();
    assert!((ratio - (2.0 * PI).sqrt()).abs() < 1e-12);
}
