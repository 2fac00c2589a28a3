use hermite_io2::hermite::{
    eval_psi, eval_psi_all, eval_psi_general, gauss_hermite, psi_prime, psi_second_general, FrameParams, QuadratureRule,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use proptest::prelude::*;

/// ψ_n(x) from the closed form, with H_n(x) evaluated exactly in rationals.
fn psi_explicit(n: usize, x: f64) -> f64 {
    let xr = BigRational::from_float(x).unwrap();
    let two = BigRational::from_integer(BigInt::from(2));
    let (mut h_prev, mut h) = (BigRational::zero(), BigRational::one());
    for k in 0..n {
        let kk = BigRational::from_integer(BigInt::from(k as i64));
        let next = &two * &xr * &h - &two * kk * &h_prev;
        h_prev = std::mem::replace(&mut h, next);
    }
    let fact: f64 = (1..=n).map(|k| k as f64).product();
    let norm = (2f64.powi(n as i32) * fact * std::f64::consts::PI.sqrt()).sqrt();
    (-x * x / 2.0).exp() * h.to_f64().unwrap() / norm
}

fn central_difference(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

#[test]
fn recurrence_matches_closed_form() {
    let xs = [-3.7, -2.2, -0.9, 0.35, 1.6, 2.9, 4.4];
    for n in 0..=12 {
        for &x in &xs {
            let want = psi_explicit(n, x);
            let got = eval_psi(n, x);
            let rel = (got - want).abs() / want.abs();
            assert!(rel <= 1e-12, "n={n} x={x} rel={rel:e}");
        }
    }
}

#[test]
fn batch_agrees_with_loop() {
    let all = eval_psi_all(64, 0.7);
    let looped: Vec<f64> = (0..=64).map(|k| eval_psi(k, 0.7)).collect();
    assert_eq!(all, looped);
}

#[test]
fn derivative_identity_against_finite_differences() {
    let h = 1e-5;
    for n in 0..=40 {
        for i in 0..=48 {
            let x = -6.0 + 0.25 * i as f64;
            let fd = central_difference(|t| eval_psi(n, t), x, h);
            let err = (psi_prime(n, x) - fd).abs();
            assert!(err <= 1e-7, "n={n} x={x} err={err:e}");
        }
    }
}

#[test]
fn framed_derivative_example_against_finite_differences() {
    let fd = central_difference(|t| eval_psi(5, t), 1.3, 1e-5);
    assert!((psi_prime(5, 1.3) - fd).abs() < 1e-8);
    let fd = central_difference(|t| eval_psi(1, t), 0.0, 1e-5);
    assert!((psi_prime(1, 0.0) - fd).abs() < 1e-8);
}

fn check_rule(rule: &QuadratureRule<f64>, max_sum: usize, tol: f64) -> f64 {
    let table = rule.psi_table(max_sum);
    let mut worst = 0.0f64;
    for n in 0..=max_sum {
        for m in 0..=(max_sum - n) {
            let s: f64 = table
                .iter()
                .zip(rule.weights())
                .map(|(row, &w)| w * row[n] * row[m])
                .sum();
            let want = if n == m { 1.0 } else { 0.0 };
            worst = worst.max((s - want).abs());
        }
    }
    assert!(worst <= tol, "worst orthonormality error {worst:e}");
    worst
}

#[test]
fn rule_shape_and_exactness() {
    for m in [1usize, 2, 3, 7, 16, 40, 41] {
        let rule = gauss_hermite::<f64>(m).unwrap();
        let nodes = rule.nodes();
        assert_eq!(nodes.len(), m);
        for w in nodes.windows(2) {
            assert!(w[0] < w[1]);
        }
        for i in 0..m {
            assert_eq!(nodes[i], -nodes[m - 1 - i]);
            assert!(rule.weights()[i] > 0.0);
        }
        check_rule(&rule, 2 * m - 2, 1e-13);
    }
}

#[test]
fn orthonormality_large_degree() {
    let rule = gauss_hermite::<f64>(66).unwrap();
    let table = rule.psi_table(64);
    for n in 0..=64 {
        for m in 0..=64 {
            let s: f64 = table.iter().zip(rule.weights()).map(|(r, &w)| w * r[n] * r[m]).sum();
            let want = if n == m { 1.0 } else { 0.0 };
            assert!((s - want).abs() <= 1e-12, "n={n} m={m}");
        }
    }
}

#[test]
fn nodes_are_zeros() {
    let m = 40;
    let rule = gauss_hermite::<f64>(m).unwrap();
    for &x in rule.nodes() {
        assert!(eval_psi(m, x).abs() < 1e-13);
    }
}

#[test]
fn high_order_rule_is_usable() {
    let rule = gauss_hermite::<f64>(1024).unwrap();
    assert!(rule.weights().iter().all(|w| w.is_finite() && *w > 0.0));
    assert!(rule.nodes()[1023] < (2.0 * 1024.0 + 1.0f64).sqrt());
    let s: f64 = rule.integrate_fn(|x| eval_psi(700, x) * eval_psi(700, x));
    assert!((s - 1.0).abs() < 1e-10, "{s}");
}

#[test]
fn second_moment_and_kinetic_laws() {
    let rule = gauss_hermite::<f64>(40).unwrap();
    for &s in &[0.5, 1.0, 2.0] {
        let frame = FrameParams::new(0.75, s).unwrap();
        for n in 0..=32 {
            // integrate in the unit variable u with x = x0 + s u, dx = s du
            let second = rule.integrate_fn(|u| {
                let x = frame.x0() + s * u;
                let p = eval_psi_general(n, &frame, x);
                (x - frame.x0()).powi(2) * p * p * s
            });
            let kinetic = rule.integrate_fn(|u| {
                let x = frame.x0() + s * u;
                eval_psi_general(n, &frame, x) * psi_second_general(n, &frame, x) * s
            });
            let nh = n as f64 + 0.5;
            assert!((second - nh * s * s).abs() <= 1e-10, "n={n} s={s}");
            assert!((kinetic + nh / (s * s)).abs() <= 1e-10, "n={n} s={s}");
        }
    }
}

proptest! {
    #[test]
    fn scale_covariance(n in 0usize..30, x0 in -3.0f64..3.0, s in 0.1f64..5.0, x in -10.0f64..10.0) {
        let frame = FrameParams::new(x0, s).unwrap();
        let lhs = eval_psi_general(n, &frame, x) * s.sqrt();
        let rhs = eval_psi(n, (x - x0) / s);
        prop_assert!((lhs - rhs).abs() <= 4.0 * f64::EPSILON * rhs.abs().max(1e-300));
    }

    #[test]
    fn parity(n in 0usize..60, x in -8.0f64..8.0) {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert_eq!(eval_psi(n, -x), sign * eval_psi(n, x));
    }
}
