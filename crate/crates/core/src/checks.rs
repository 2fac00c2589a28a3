//! Invariant suite run by `opcli verify`.
//!
//! Every check is deterministic: random inputs come from fixed seeds.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use crate::hermite::{
    eval_psi, eval_psi_general, gauss_hermite, psi_prime, psi_second, psi_second_general, FrameParams, QuadratureRule,
};
use crate::rep::{
    apply, compile_exact, compile_guarded, generator_matrix, momentum_matrix, uncertainty_product, CoeffVector,
};
use crate::sample::{random_element, seeded};
use crate::transforms::{
    analyze, completeness_kernel, fourier_num, momentum_profile_num, number_state_profile, parseval_ratio,
    synthesize_p, synthesize_x, translate_phase, FunctionSpec,
};
use crate::uea::{casimir, equals_mod_casimir, Basis, Generator, Rewriter, UeaElement, DEFAULT_REWRITE_BUDGET};
use crate::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Hermite,
    Uea,
    Rep,
    Transforms,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Hermite, Suite::Uea, Suite::Rep, Suite::Transforms];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Hermite => "hermite",
            Suite::Uea => "uea",
            Suite::Rep => "rep",
            Suite::Transforms => "transforms",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub suite: Suite,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}/{}: {}", self.suite, self.name, self.detail)
    }
}

type Measured = Result<(bool, String), String>;

fn within(worst: f64, tol: f64) -> Measured {
    Ok((worst <= tol, format!("max err {worst:.3e} (tol {tol:.0e})")))
}

fn holds(ok: bool, detail: impl Into<String>) -> Measured {
    Ok((ok, detail.into()))
}

fn fail<E: fmt::Display>(e: E) -> String {
    e.to_string()
}

type Check = (&'static str, fn() -> Measured);

fn checks_for(suite: Suite) -> &'static [Check] {
    match suite {
        Suite::Hermite => &[
            ("orthonormality", hermite_orthonormality),
            ("closed-form", hermite_closed_form),
            ("derivative", hermite_derivative),
            ("scale-covariance", hermite_scale_covariance),
            ("moment-laws", hermite_moment_laws),
            ("quadrature-examples", hermite_quadrature_examples),
        ],
        Suite::Uea => &[
            ("pbw-determinism", uea_pbw_determinism),
            ("rewrite-budget", uea_rewrite_budget),
            ("basis-round-trip", uea_round_trip),
            ("centrality", uea_centrality),
            ("reduction-soundness", uea_reduction_soundness),
            ("reduced-shape", uea_reduced_shape),
            ("number-identity", uea_number_identity),
        ],
        Suite::Rep => &[
            ("oracle-equivalence", rep_oracle_equivalence),
            ("hermiticity", rep_hermiticity),
            ("canonical-commutator", rep_commutator),
            ("casimir-annihilation", rep_casimir_annihilation),
            ("casimir-on-functions", rep_casimir_numeric),
            ("ladder-relations", rep_ladder_relations),
            ("uncertainty", rep_uncertainty),
        ],
        Suite::Transforms => &[
            ("round-trip", tr_round_trip),
            ("fourier-eigenvectors", tr_fourier_eigenvectors),
            ("p-profile-coherence", tr_coherence),
            ("kernel-reproduction", tr_kernel),
            ("parseval-ratio", tr_parseval),
            ("translation-phase", tr_translation),
        ],
    }
}

/// Runs every check of `suite` in a fixed order.
pub fn run_suite(suite: Suite) -> Vec<CheckOutcome> {
    checks_for(suite)
        .iter()
        .map(|&(name, f)| {
            let (passed, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
            CheckOutcome {
                suite,
                name,
                passed,
                detail,
            }
        })
        .collect()
}

pub fn run_all() -> Vec<CheckOutcome> {
    Suite::ALL.into_iter().flat_map(run_suite).collect()
}

// ---- hermite ----

fn hermite_orthonormality() -> Measured {
    let rule = gauss_hermite::<f64>(80).map_err(fail)?;
    within(gram_error(&rule, 64), 1e-12)
}

fn gram_error(rule: &QuadratureRule<f64>, n_max: usize) -> f64 {
    let table = rule.psi_table(n_max);
    let mut worst = 0.0f64;
    for n in 0..=n_max {
        for m in n..=n_max {
            let s: f64 = table.iter().zip(rule.weights()).map(|(r, &w)| w * r[n] * r[m]).sum();
            worst = worst.max((s - if n == m { 1.0 } else { 0.0 }).abs());
        }
    }
    worst
}

/// ψ_n(x) with H_n(x) summed exactly; x must be a dyadic float.
fn psi_closed_form(n: usize, x: f64) -> f64 {
    let xr = BigRational::from_float(x).expect("finite");
    let two = BigRational::from_integer(BigInt::from(2));
    let (mut prev, mut cur) = (BigRational::zero(), BigRational::one());
    for k in 0..n {
        let next = &two * &xr * &cur - &two * BigRational::from_integer(BigInt::from(k)) * &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    let fact: f64 = (1..=n).map(|k| k as f64).product();
    let norm = (2f64.powi(n as i32) * fact * std::f64::consts::PI.sqrt()).sqrt();
    (-x * x / 2.0).exp() * cur.to_f64().unwrap_or(f64::NAN) / norm
}

fn hermite_closed_form() -> Measured {
    let mut worst = 0.0f64;
    for n in 0..=12 {
        for x in [-3.75, -2.25, -0.875, 0.375, 1.625, 2.875, 4.5] {
            let want = psi_closed_form(n, x);
            worst = worst.max((eval_psi(n, x) - want).abs() / want.abs());
        }
    }
    within(worst, 1e-12)
}

fn hermite_derivative() -> Measured {
    let h = 1e-5;
    let mut worst = 0.0f64;
    for n in 0..=40 {
        for i in 0..=48 {
            let x = -6.0 + 0.25 * i as f64;
            let fd = (eval_psi(n, x + h) - eval_psi(n, x - h)) / (2.0 * h);
            worst = worst.max((psi_prime(n, x) - fd).abs());
        }
    }
    within(worst, 1e-7)
}

fn hermite_scale_covariance() -> Measured {
    let mut rng = seeded(0x5c);
    let mut worst = 0.0f64;
    for _ in 0..2000 {
        let n = rng.gen_range(0..40);
        let frame = FrameParams::<f64>::new(rng.gen_range(-3.0..3.0), rng.gen_range(0.1..5.0)).map_err(fail)?;
        let x = rng.gen_range(-10.0..10.0);
        let lhs = eval_psi_general(n, &frame, x) * frame.s().sqrt();
        let rhs = eval_psi(n, (x - frame.x0()) / frame.s());
        if rhs != 0.0 {
            worst = worst.max((lhs - rhs).abs() / rhs.abs());
        }
    }
    let ulps = worst / f64::EPSILON;
    holds(ulps <= 4.0, format!("max {ulps:.2} ulp (tol 4 ulp)"))
}

fn hermite_moment_laws() -> Measured {
    let rule = gauss_hermite::<f64>(40).map_err(fail)?;
    let mut worst = 0.0f64;
    for s in [0.5, 1.0, 2.0] {
        let frame = FrameParams::new(0.75, s).map_err(fail)?;
        let at = |u: f64| frame.x0() + s * u;
        for n in 0..=32 {
            let nh = n as f64 + 0.5;
            let second = rule.integrate_fn(|u| {
                let p = eval_psi_general(n, &frame, at(u));
                (s * u).powi(2) * p * p * s
            });
            let kinetic = rule.integrate_fn(|u| {
                let x = at(u);
                eval_psi_general(n, &frame, x) * psi_second_general(n, &frame, x) * s
            });
            worst = worst
                .max((second - nh * s * s).abs())
                .max((kinetic + nh / (s * s)).abs());
        }
    }
    within(worst, 1e-10)
}

fn hermite_quadrature_examples() -> Measured {
    let rule = gauss_hermite::<f64>(8).map_err(fail)?;
    let cross = rule.integrate_fn(|x| eval_psi(0, x) * eval_psi(1, x)).abs();
    let second = (rule.integrate_fn(|x| x * x * eval_psi(0, x).powi(2)) - 0.5).abs();
    within(cross.max(second), 1e-14)
}

// ---- uea ----

fn both_bases() -> [Basis; 2] {
    [Basis::Differential, Basis::Ladder]
}

fn uea_pbw_determinism() -> Measured {
    let mut rng = seeded(0x9b);
    let mut count = 0;
    for i in 0..500 {
        let basis = both_bases()[i % 2];
        let a = random_element(&mut rng, basis, 2, 3);
        let b = random_element(&mut rng, basis, 2, 3);
        let c = random_element(&mut rng, basis, 1, 3);
        let left = a.product(&b).and_then(|ab| ab.product(&c)).map_err(fail)?;
        let right = b.product(&c).and_then(|bc| a.product(&bc)).map_err(fail)?;
        if left != right {
            return holds(false, format!("association mismatch at sample {i}"));
        }
        count += 1;
    }
    holds(true, format!("{count} triple products agree exactly"))
}

fn uea_rewrite_budget() -> Measured {
    // every ordered pair of degree-4 monomials, so every degree-8 word shape is hit
    let quartics: Vec<[u32; 3]> = (0..=4u32)
        .flat_map(|i| (0..=4 - i).map(move |j| [i, j, 4 - i - j]))
        .collect();
    let mut most = 0u64;
    for basis in both_bases() {
        for ea in &quartics {
            for eb in &quartics {
                let a = UeaElement::monomial(basis, Scalar::from_int(1), *ea);
                let b = UeaElement::monomial(basis, Scalar::from_int(1), *eb);
                let mut rw = Rewriter::with_budget(basis, DEFAULT_REWRITE_BUDGET);
                a.product_with(&b, &mut rw).map_err(fail)?;
                most = most.max(rw.steps());
            }
        }
    }
    holds(
        most <= DEFAULT_REWRITE_BUDGET,
        format!("max {most} rule applications at degree 8"),
    )
}

fn uea_round_trip() -> Measured {
    let mut rng = seeded(0x71);
    for i in 0..200 {
        let a = random_element(&mut rng, Basis::Differential, 5, 4);
        let back = a.to_ladder().and_then(|l| l.from_ladder()).map_err(fail)?;
        if back != a {
            return holds(false, format!("differential round trip differs at sample {i}"));
        }
        let l = random_element(&mut rng, Basis::Ladder, 5, 4);
        let back = l.from_ladder().and_then(|d| d.to_ladder()).map_err(fail)?;
        if back != l {
            return holds(false, format!("ladder round trip differs at sample {i}"));
        }
    }
    holds(true, "200 elements per basis, exact")
}

fn uea_centrality() -> Measured {
    let mut rng = seeded(0x2c);
    let c = casimir();
    let c_ladder = c.to_ladder().map_err(fail)?;
    for i in 0..100 {
        let a = random_element(&mut rng, Basis::Differential, 4, 4);
        let l = random_element(&mut rng, Basis::Ladder, 4, 4);
        if !c.commutator(&a).map_err(fail)?.is_zero() || !c_ladder.commutator(&l).map_err(fail)?.is_zero() {
            return holds(false, format!("nonzero commutator at sample {i}"));
        }
    }
    holds(true, "[C, A] = 0 for 100 elements per basis")
}

fn uea_reduction_soundness() -> Measured {
    let mut rng = seeded(0x4d);
    for i in 0..100 {
        let a = random_element(&mut rng, Basis::Differential, 4, 4);
        let r = a.casimir_reduce().map_err(fail)?;
        if compile_exact(&a, 16).map_err(fail)? != compile_exact(r.as_element(), 16).map_err(fail)? {
            return holds(false, format!("exact 16x16 matrices differ at sample {i}"));
        }
    }
    holds(true, "100 elements, exact 16x16 equality")
}

fn uea_reduced_shape() -> Measured {
    let mut rng = seeded(0x5e);
    let mut highest = 0;
    for _ in 0..200 {
        let a = random_element(&mut rng, Basis::Differential, 6, 4);
        highest = highest.max(a.casimir_reduce().map_err(fail)?.as_element().max_middle_power());
    }
    let d5 = UeaElement::generator(Generator::D).pow(5).map_err(fail)?;
    highest = highest.max(d5.casimir_reduce().map_err(fail)?.as_element().max_middle_power());
    holds(highest <= 1, format!("max D power after reduction {highest}"))
}

fn uea_number_identity() -> Measured {
    let x = UeaElement::generator(Generator::X);
    let d = UeaElement::generator(Generator::D);
    let half = Scalar::from_frac(1, 2);
    let rhs = &(&(&x * &x) - &(&d * &d)) - &UeaElement::one(Basis::Differential);
    let rhs = rhs.scale(&half);
    let n = UeaElement::generator(Generator::N);
    let symbolic = equals_mod_casimir(&n, &rhs).map_err(fail)?;
    let exact = compile_exact(&n, 24).map_err(fail)? == compile_exact(&rhs, 24).map_err(fail)?;
    let printed = (&d * &d).casimir_reduce().map_err(fail)?.to_string();
    holds(
        symbolic && exact && printed == "X^2 - 2*N - I",
        format!("mod C: {symbolic}, 24x24 exact: {exact}, D^2 -> {printed}"),
    )
}

// ---- rep ----

fn rep_oracle_equivalence() -> Measured {
    let mut rng = seeded(0x6f);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let a = random_element(&mut rng, Basis::Differential, 4, 4);
        let r = a.casimir_reduce().map_err(fail)?;
        let lhs = compile_guarded::<f64>(&a, 16, 8).map_err(fail)?;
        let rhs = compile_guarded::<f64>(r.as_element(), 16, 8).map_err(fail)?;
        let exact = compile_exact(&a, 16).map_err(fail)?.to_float::<f64>();
        worst = worst.max(lhs.max_abs_diff(&rhs)).max(lhs.max_abs_diff(&exact));
    }
    within(worst, 1e-10)
}

fn rep_hermiticity() -> Measured {
    let d = 24;
    let x = generator_matrix::<f64>(Generator::X, d).map_err(fail)?;
    let p = momentum_matrix::<f64>(d).map_err(fail)?;
    let a = generator_matrix::<f64>(Generator::A, d).map_err(fail)?;
    let ad = generator_matrix::<f64>(Generator::ADag, d).map_err(fail)?;
    let worst = x
        .max_abs_diff(&x.adjoint())
        .max(p.max_abs_diff(&p.adjoint()))
        .max(ad.max_abs_diff(&a.adjoint()));
    within(worst, 1e-14)
}

fn rep_commutator() -> Measured {
    let d = 24;
    let x = generator_matrix::<f64>(Generator::X, d).map_err(fail)?;
    let p = momentum_matrix::<f64>(d).map_err(fail)?;
    let comm = x.matmul(&p).sub(&p.matmul(&x)).block(d - 2);
    let want = crate::rep::OperatorMatrix::identity(d - 2).scale(Complex::new(0.0, 1.0));
    within(comm.max_abs_diff(&want), 1e-14)
}

fn rep_casimir_annihilation() -> Measured {
    let c = casimir();
    let zero_block = compile_exact(&c, 32).map_err(fail)?.is_zero();
    let mut worst = 0.0f64;
    for n in 0..30 {
        let out = apply(&c, &CoeffVector::<f64>::unit(n, 32)).map_err(fail)?;
        worst = worst.max(out.coeffs().iter().map(|z| z.norm()).fold(0.0, f64::max));
    }
    holds(
        zero_block && worst == 0.0,
        format!("32x32 exact block zero: {zero_block}, max |C e_n| {worst:.1e}"),
    )
}

/// Quadrature norm of a residual sampled at the rule's nodes.
fn grid_norm(rule: &QuadratureRule<f64>, r: impl Fn(f64) -> f64) -> f64 {
    rule.integrate_fn(|x| r(x).powi(2)).sqrt()
}

fn rep_casimir_numeric() -> Measured {
    let rule = gauss_hermite::<f64>(40).map_err(fail)?;
    let mut worst = 0.0f64;
    for n in 0..=24 {
        let nh = n as f64 + 0.5;
        let r = |x: f64| {
            let p = eval_psi(n, x);
            0.5 * (x * x * p - psi_second(n, x)) - nh * p
        };
        worst = worst.max(grid_norm(&rule, r));
    }
    within(worst, 1e-11)
}

fn rep_ladder_relations() -> Measured {
    let rule = gauss_hermite::<f64>(64).map_err(fail)?;
    let r2 = std::f64::consts::SQRT_2;
    let mut worst = 0.0f64;
    for n in 0..=40 {
        let nf = n as f64;
        // ψ_n′ from H_n′ = 2n H_{n−1}, independent of psi_prime's symmetric form
        let slope = |x: f64| {
            let lower = if n == 0 {
                0.0
            } else {
                (2.0 * nf).sqrt() * eval_psi(n - 1, x)
            };
            lower - x * eval_psi(n, x)
        };
        let raise = |x: f64| (x * eval_psi(n, x) - slope(x)) / r2 - (nf + 1.0).sqrt() * eval_psi(n + 1, x);
        let lower = |x: f64| {
            let below = if n == 0 { 0.0 } else { nf.sqrt() * eval_psi(n - 1, x) };
            (x * eval_psi(n, x) + slope(x)) / r2 - below
        };
        let agree = |x: f64| psi_prime(n, x) - slope(x);
        worst = worst
            .max(grid_norm(&rule, raise))
            .max(grid_norm(&rule, lower))
            .max(grid_norm(&rule, agree));
    }
    within(worst, 1e-10)
}

fn rep_uncertainty() -> Measured {
    let mut worst = 0.0f64;
    for s in [0.5, 1.0, 2.0] {
        for n in 0..=32 {
            let u = uncertainty_product::<f64>(n, s).map_err(fail)?;
            worst = worst.max((u.product - (n as f64 + 0.5)).abs());
        }
    }
    within(worst, 1e-10)
}

// ---- transforms ----

fn random_coeffs(seed: u64, len: usize) -> CoeffVector<f64> {
    let mut rng = seeded(seed);
    CoeffVector::new(
        (0..len)
            .map(|_| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect(),
    )
}

fn p_grid() -> Vec<f64> {
    (0..=48).map(|i| -6.0 + 0.25 * i as f64).collect()
}

fn tr_round_trip() -> Measured {
    let rule = gauss_hermite::<f64>(40).map_err(fail)?;
    let mut worst = 0.0f64;
    for seed in 0..8 {
        let c = random_coeffs(seed, 32);
        let samples = synthesize_x(&c, rule.nodes());
        let back = analyze(&FunctionSpec::samples(samples), 32, &rule).map_err(fail)?;
        worst = worst.max(back.max_abs_diff(&c));
    }
    within(worst, 1e-12)
}

fn tr_fourier_eigenvectors() -> Measured {
    let rule = gauss_hermite::<f64>(96).map_err(fail)?;
    let ps = p_grid();
    let mut worst = 0.0f64;
    for n in 0..=32 {
        let f = FunctionSpec::real(move |x| eval_psi(n, x));
        let got = fourier_num(&f, &rule, &ps).map_err(fail)?;
        let phase = Complex::new(0.0, 1.0).powu(n as u32);
        for (g, &p) in got.iter().zip(&ps) {
            worst = worst.max((g - phase * eval_psi(n, p)).norm());
        }
    }
    within(worst, 1e-8)
}

fn tr_coherence() -> Measured {
    let rule = gauss_hermite::<f64>(96).map_err(fail)?;
    let ps = p_grid();
    let neg: Vec<f64> = ps.iter().map(|p| -p).collect();
    let mut worst = 0.0f64;
    for seed in 0..4 {
        let c = random_coeffs(100 + seed, 32);
        let f = FunctionSpec::samples(synthesize_x(&c, rule.nodes()));
        let direct = synthesize_p(&c, &ps);
        let profile = momentum_profile_num(&f, &rule, &ps).map_err(fail)?;
        let mirrored = fourier_num(&f, &rule, &neg).map_err(fail)?;
        for ((d, a), b) in direct.iter().zip(&profile).zip(&mirrored) {
            worst = worst.max((d - a).norm()).max((d - b).norm());
        }
    }
    within(worst, 1e-8)
}

fn tr_kernel() -> Measured {
    let rule = gauss_hermite::<f64>(40).map_err(fail)?;
    let big_n = 32;
    let mut worst = 0.0f64;
    for m in 0..big_n {
        for x in [-2.5, -1.0, 0.0, 0.4, 1.75, 3.0] {
            let got = rule.integrate_fn(|xp| completeness_kernel(big_n, x, xp) * eval_psi(m, xp));
            worst = worst.max((got - eval_psi(m, x)).abs());
        }
    }
    within(worst, 1e-12)
}

fn tr_parseval() -> Measured {
    let rule = gauss_hermite::<f64>(40).map_err(fail)?;
    let target = (2.0 * std::f64::consts::PI).sqrt();
    let mut worst = 0.0f64;
    let psi0 = number_state_profile::<f64>(0);
    worst = worst.max((parseval_ratio(&psi0, 16, &rule).map_err(fail)? - target).abs());
    let mix = FunctionSpec::real(|x: f64| {
        let q = (2.0 * std::f64::consts::PI).powf(0.25);
        q * (eval_psi(0, x) + eval_psi(5, x)) / std::f64::consts::SQRT_2
    });
    worst = worst.max((parseval_ratio(&mix, 16, &rule).map_err(fail)? - target).abs());
    for seed in 0..4 {
        let c = random_coeffs(200 + seed, 16);
        let f = FunctionSpec::samples(synthesize_x(&c, rule.nodes()));
        worst = worst.max((parseval_ratio(&f, 16, &rule).map_err(fail)? - target).abs());
    }
    within(worst, 1e-10)
}

fn tr_translation() -> Measured {
    let rule = gauss_hermite::<f64>(96).map_err(fail)?;
    let ps = p_grid();
    let x0 = 1.25;
    let base = momentum_profile_num(&FunctionSpec::real(|x| eval_psi(0, x)), &rule, &ps).map_err(fail)?;
    let shifted = momentum_profile_num(&FunctionSpec::real(move |x| eval_psi(0, x - x0)), &rule, &ps).map_err(fail)?;
    let moved = translate_phase(&base, &ps, x0).map_err(fail)?;
    let worst = shifted
        .iter()
        .zip(&moved)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    within(worst, 1e-8)
}
