//! Changes of basis among {|n⟩}, {|x⟩} and {|p⟩}.
//!
//! Normalizations: ⟨n|x⟩ = (2π)^{1/4} ψ_n(x), ⟨x|x′⟩ = √(2π) δ(x − x′), so
//!
//! ```text
//! f(x) = (2π)^{1/4} Σ ψ_n(x) f_n
//! f(p) = (2π)^{1/4} Σ (−i)^n ψ_n(p) f_n
//! f_n  = (2π)^{-1/4} ∫ ψ_n(x) f(x) dx
//! ```
//!
//! The kets satisfy |p⟩ = (2π)^{-1/2} ∫ e^{+ipx} |x⟩ dx, hence the wave
//! functions transform with the conjugate kernel: f(p) = (2π)^{-1/2} ∫ e^{−ipx} f(x) dx.
//! [`fourier_num`] realizes the e^{+ipx} integral (under which ψ_n has eigenvalue iⁿ),
//! [`momentum_profile_num`] the e^{−ipx} one.
//!
//! The |x⟩ and |p⟩ are never materialized; only the pairings ⟨x|f⟩, ⟨p|f⟩, ⟨n|f⟩ are.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;
use num_traits::Zero;
use thiserror::Error;

use crate::hermite::{eval_psi, eval_psi_all, QuadratureRule};
use crate::real::Real;
use crate::rep::CoeffVector;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TransformError {
    #[error("a {nodes}-node rule cannot resolve {n_max} coefficients; need at least n_max + 1 nodes")]
    InsufficientOrder { nodes: usize, n_max: usize },
    #[error("expected {expected} samples, got {got}")]
    SampleCount { expected: usize, got: usize },
    #[error("function has zero norm")]
    ZeroFunction,
}

type Closed<F> = Arc<dyn Fn(F) -> Complex<F> + Send + Sync>;

/// A function of one real variable: either evaluable anywhere or sampled on a rule's nodes.
#[derive(Clone)]
pub enum FunctionSpec<F> {
    Closed(Closed<F>),
    Samples(Vec<Complex<F>>),
}

impl<F: Real> FunctionSpec<F> {
    pub fn closed(f: impl Fn(F) -> Complex<F> + Send + Sync + 'static) -> Self {
        FunctionSpec::Closed(Arc::new(f))
    }

    pub fn real(f: impl Fn(F) -> F + Send + Sync + 'static) -> Self {
        Self::closed(move |x| Complex::new(f(x), F::zero()))
    }

    pub fn samples(values: Vec<Complex<F>>) -> Self {
        FunctionSpec::Samples(values)
    }

    /// Values at the nodes of `rule`.
    pub fn values_on(&self, rule: &QuadratureRule<F>) -> Result<Vec<Complex<F>>, TransformError> {
        match self {
            FunctionSpec::Closed(f) => Ok(rule.nodes().iter().map(|&x| f(x)).collect()),
            FunctionSpec::Samples(v) if v.len() == rule.len() => Ok(v.clone()),
            FunctionSpec::Samples(v) => Err(TransformError::SampleCount {
                expected: rule.len(),
                got: v.len(),
            }),
        }
    }
}

impl<F> fmt::Debug for FunctionSpec<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionSpec::Closed(_) => f.write_str("FunctionSpec::Closed(..)"),
            FunctionSpec::Samples(v) => write!(f, "FunctionSpec::Samples(len = {})", v.len()),
        }
    }
}

fn quarter_root_two_pi<F: Real>() -> F {
    (F::lit(2.0) * F::PI()).powf(F::lit(0.25))
}

/// (−i)^n.
fn minus_i_pow<F: Real>(n: usize) -> Complex<F> {
    let (o, z) = (F::one(), F::zero());
    match n % 4 {
        0 => Complex::new(o, z),
        1 => Complex::new(z, -o),
        2 => Complex::new(-o, z),
        _ => Complex::new(z, o),
    }
}

/// f_n = (2π)^{-1/4} ∫ ψ_n(x) f(x) dx for n < n_max.
///
/// Exact for f in the span of ψ_0 … ψ_{2M−n_max}; energy beyond that aliases
/// into the result and is not detected.
pub fn analyze<F: Real>(
    f: &FunctionSpec<F>,
    n_max: usize,
    rule: &QuadratureRule<F>,
) -> Result<CoeffVector<F>, TransformError> {
    if rule.len() < n_max + 1 {
        return Err(TransformError::InsufficientOrder {
            nodes: rule.len(),
            n_max,
        });
    }
    let values = f.values_on(rule)?;
    let pre = F::one() / quarter_root_two_pi::<F>();
    let mut coeffs = vec![Complex::zero(); n_max];
    if n_max == 0 {
        return Ok(CoeffVector::new(coeffs));
    }
    for ((&x, &w), &v) in rule.nodes().iter().zip(rule.weights()).zip(&values) {
        let psi = eval_psi_all(n_max - 1, x);
        for (c, &p) in coeffs.iter_mut().zip(&psi) {
            *c = *c + v * (w * p);
        }
    }
    Ok(CoeffVector::new(coeffs.into_iter().map(|c| c * pre).collect()))
}

fn synthesize<F: Real>(c: &CoeffVector<F>, points: &[F], twist: impl Fn(usize) -> Complex<F>) -> Vec<Complex<F>> {
    let pre = quarter_root_two_pi::<F>();
    if c.is_empty() {
        return vec![Complex::zero(); points.len()];
    }
    points
        .iter()
        .map(|&x| {
            let psi = eval_psi_all(c.len() - 1, x);
            c.coeffs()
                .iter()
                .zip(&psi)
                .enumerate()
                .fold(Complex::zero(), |acc, (n, (&f, &p))| acc + twist(n) * f * p)
                * pre
        })
        .collect()
}

/// f(x) = (2π)^{1/4} Σ ψ_n(x) f_n at each x.
pub fn synthesize_x<F: Real>(c: &CoeffVector<F>, xs: &[F]) -> Vec<Complex<F>> {
    synthesize(c, xs, |_| Complex::new(F::one(), F::zero()))
}

/// f(p) = (2π)^{1/4} Σ (−i)^n ψ_n(p) f_n at each p.
pub fn synthesize_p<F: Real>(c: &CoeffVector<F>, ps: &[F]) -> Vec<Complex<F>> {
    synthesize(c, ps, minus_i_pow)
}

fn fourier_with_sign<F: Real>(
    f: &FunctionSpec<F>,
    rule: &QuadratureRule<F>,
    ps: &[F],
    sign: F,
) -> Result<Vec<Complex<F>>, TransformError> {
    let values = f.values_on(rule)?;
    let pre = F::one() / (F::lit(2.0) * F::PI()).sqrt();
    Ok(ps
        .iter()
        .map(|&p| {
            rule.nodes()
                .iter()
                .zip(rule.weights())
                .zip(&values)
                .fold(Complex::zero(), |acc, ((&x, &w), &v)| {
                    acc + Complex::from_polar(w, sign * p * x) * v
                })
                * pre
        })
        .collect())
}

/// (2π)^{-1/2} Σ ŵ_i e^{+ipx_i} f(x_i): the transform under which ψ_n ↦ iⁿ ψ_n.
///
/// Accurate when f decays like a combination of Hermite functions.
pub fn fourier_num<F: Real>(
    f: &FunctionSpec<F>,
    rule: &QuadratureRule<F>,
    ps: &[F],
) -> Result<Vec<Complex<F>>, TransformError> {
    fourier_with_sign(f, rule, ps, F::one())
}

/// ⟨p|f⟩ = (2π)^{-1/2} ∫ e^{−ipx} f(x) dx by quadrature.
pub fn momentum_profile_num<F: Real>(
    f: &FunctionSpec<F>,
    rule: &QuadratureRule<F>,
    ps: &[F],
) -> Result<Vec<Complex<F>>, TransformError> {
    fourier_with_sign(f, rule, ps, -F::one())
}

/// U^p(x₀): multiplies a momentum profile by e^{−ipx₀}.
pub fn translate_phase<F: Real>(fp: &[Complex<F>], ps: &[F], x0: F) -> Result<Vec<Complex<F>>, TransformError> {
    if fp.len() != ps.len() {
        return Err(TransformError::SampleCount {
            expected: ps.len(),
            got: fp.len(),
        });
    }
    Ok(fp
        .iter()
        .zip(ps)
        .map(|(&v, &p)| v * Complex::from_polar(F::one(), -p * x0))
        .collect())
}

/// K_N(x, x′) = Σ_{n<N} ψ_n(x) ψ_n(x′).
pub fn completeness_kernel<F: Real>(n: usize, x: F, xprime: F) -> F {
    if n == 0 {
        return F::zero();
    }
    let a = eval_psi_all(n - 1, x);
    let b = eval_psi_all(n - 1, xprime);
    a.iter().zip(&b).fold(F::zero(), |acc, (&u, &v)| acc + u * v)
}

/// (∫|f(x)|² dx) / (Σ|f_n|²); √(2π) under the normalizations above.
pub fn parseval_ratio<F: Real>(
    f: &FunctionSpec<F>,
    n_max: usize,
    rule: &QuadratureRule<F>,
) -> Result<F, TransformError> {
    let values = f.values_on(rule)?;
    let coeffs = analyze(f, n_max, rule)?;
    let denom = coeffs.norm_sqr();
    if denom == F::zero() {
        return Err(TransformError::ZeroFunction);
    }
    let num = values
        .iter()
        .zip(rule.weights())
        .fold(F::zero(), |acc, (v, &w)| acc + w * v.norm_sqr());
    Ok(num / denom)
}

/// (2π)^{1/4} ψ_n(x) as a closed-form function: the x-profile of |n⟩.
pub fn number_state_profile<F: Real>(n: usize) -> FunctionSpec<F> {
    FunctionSpec::real(move |x| quarter_root_two_pi::<F>() * eval_psi(n, x))
}
