//! Hermite functions and Gauss–Hermite quadrature.
//!
//! Evaluation uses the normalized three-term recurrence
//!
//! ```text
//! ψ_0(x)     = π^{-1/4} e^{-x²/2}
//! ψ_1(x)     = √2 x ψ_0(x)
//! ψ_{k+1}(x) = √(2/(k+1)) x ψ_k(x) − √(k/(k+1)) ψ_{k-1}(x)
//! ```
//!
//! which never overflows because every |ψ_k| ≤ 1. When the Gaussian seed itself
//! would underflow the recurrence is carried on a rescaled mantissa with a
//! separate log-scale, so large |x| still yields correct (possibly zero) values.

use thiserror::Error;

use crate::real::Real;

/// Degree label n ≥ 0.
pub type HermiteIndex = usize;

/// Largest supported quadrature order.
pub const MAX_QUADRATURE_ORDER: usize = 1024;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HermiteError {
    #[error("frame scale must be positive and finite, got {0}")]
    NonPositiveScale(f64),
    #[error("quadrature order {0} outside 1..={MAX_QUADRATURE_ORDER}")]
    QuadratureOrder(usize),
    #[error("expected {expected} samples, got {got}")]
    LengthMismatch { expected: usize, got: usize },
}

/// Origin and scale of a generalized Hermite function ψ[n, x₀, s, x].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameParams<F> {
    x0: F,
    s: F,
}

impl<F: Real> FrameParams<F> {
    pub fn new(x0: F, s: F) -> Result<Self, HermiteError> {
        if s <= F::zero() || !s.is_finite() {
            return Err(HermiteError::NonPositiveScale(s.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(Self { x0, s })
    }

    pub fn standard() -> Self {
        Self {
            x0: F::zero(),
            s: F::one(),
        }
    }

    pub fn x0(&self) -> F {
        self.x0
    }

    pub fn s(&self) -> F {
        self.s
    }

    /// Maps a position to the dimensionless variable (x − x₀)/s.
    pub fn to_unit(&self, x: F) -> F {
        (x - self.x0) / self.s
    }
}

/// Streams ψ_0(x), ψ_1(x), … from the recurrence.
#[derive(Debug, Clone)]
struct PsiRecurrence<F> {
    x: F,
    k: usize,
    prev: F,
    cur: F,
    /// Natural-log scale of `cur`/`prev`; `None` when the values are unscaled.
    log_scale: Option<F>,
}

impl<F: Real> PsiRecurrence<F> {
    fn new(x: F) -> Self {
        let half = x * x / F::lit(2.0);
        let quarter_root_pi = F::PI().powf(F::lit(-0.25));
        let floor = -F::min_positive_value().ln() * F::lit(0.95);
        if half < floor {
            Self {
                x,
                k: 0,
                prev: F::zero(),
                cur: quarter_root_pi * (-half).exp(),
                log_scale: None,
            }
        } else {
            Self {
                x,
                k: 0,
                prev: F::zero(),
                cur: F::one(),
                log_scale: Some(quarter_root_pi.ln() - half),
            }
        }
    }

    /// Current ψ_k(x) as a true value.
    fn value(&self) -> F {
        match self.log_scale {
            None => self.cur,
            Some(_) if self.cur == F::zero() => F::zero(),
            Some(ls) => (self.cur.abs().ln() + ls).exp() * self.cur.signum(),
        }
    }

    /// Scaled (ψ_k, ψ_{k-1}) pair sharing one positive factor; fine for ratios and signs.
    fn scaled(&self) -> (F, F) {
        (self.cur, self.prev)
    }

    fn step(&mut self) {
        let k = F::from_usize_lossy(self.k);
        let next = if self.k == 0 {
            F::SQRT_2() * self.x * self.cur
        } else {
            (F::lit(2.0) / (k + F::one())).sqrt() * self.x * self.cur - (k / (k + F::one())).sqrt() * self.prev
        };
        self.prev = self.cur;
        self.cur = next;
        self.k += 1;
        if let Some(ls) = self.log_scale.as_mut() {
            let big = F::max_value().sqrt().sqrt();
            if self.cur.abs() > big {
                self.cur = self.cur / big;
                self.prev = self.prev / big;
                *ls = *ls + big.ln();
            }
        }
    }
}

/// ψ_n(x).
pub fn eval_psi<F: Real>(n: HermiteIndex, x: F) -> F {
    let mut rec = PsiRecurrence::new(x);
    for _ in 0..n {
        rec.step();
    }
    rec.value()
}

/// [ψ_0(x), …, ψ_{n_max}(x)], bit-identical to repeated [`eval_psi`].
pub fn eval_psi_all<F: Real>(n_max: HermiteIndex, x: F) -> Vec<F> {
    let mut rec = PsiRecurrence::new(x);
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(rec.value());
    for _ in 0..n_max {
        rec.step();
        out.push(rec.value());
    }
    out
}

/// ψ[n, x₀, s, x] = s^{-1/2} ψ_n((x − x₀)/s).
pub fn eval_psi_general<F: Real>(n: HermiteIndex, frame: &FrameParams<F>, x: F) -> F {
    eval_psi(n, frame.to_unit(x)) / frame.s.sqrt()
}

/// ψ_n′(x) = √(n/2) ψ_{n-1}(x) − √((n+1)/2) ψ_{n+1}(x).
pub fn psi_prime<F: Real>(n: HermiteIndex, x: F) -> F {
    let psi = eval_psi_all(n + 1, x);
    derivative_from_table(n, &psi)
}

fn derivative_from_table<F: Real>(n: usize, psi: &[F]) -> F {
    let half = F::lit(0.5);
    let up = (F::from_usize_lossy(n + 1) * half).sqrt() * psi[n + 1];
    if n == 0 {
        -up
    } else {
        (F::from_usize_lossy(n) * half).sqrt() * psi[n - 1] - up
    }
}

/// First derivative of ψ[n, x₀, s, ·] at x.
pub fn psi_prime_general<F: Real>(n: HermiteIndex, frame: &FrameParams<F>, x: F) -> F {
    let s = frame.s;
    psi_prime(n, frame.to_unit(x)) / (s * s.sqrt())
}

/// ψ_n″(x), from applying the derivative relation twice:
/// ½√(n(n−1)) ψ_{n-2} − (n + ½) ψ_n + ½√((n+1)(n+2)) ψ_{n+2}.
pub fn psi_second<F: Real>(n: HermiteIndex, x: F) -> F {
    let psi = eval_psi_all(n + 2, x);
    let half = F::lit(0.5);
    let nf = F::from_usize_lossy(n);
    let mut v = -(nf + half) * psi[n] + half * ((nf + F::one()) * (nf + F::lit(2.0))).sqrt() * psi[n + 2];
    if n >= 2 {
        v = v + half * (nf * (nf - F::one())).sqrt() * psi[n - 2];
    }
    v
}

/// Second derivative of ψ[n, x₀, s, ·] at x.
pub fn psi_second_general<F: Real>(n: HermiteIndex, frame: &FrameParams<F>, x: F) -> F {
    let s = frame.s;
    psi_second(n, frame.to_unit(x)) / (s * s * s.sqrt())
}

/// Gauss–Hermite nodes with weights rescaled for plain `dx` integrals.
///
/// For nodes x_i (roots of ψ_M) and ŵ_i = 1 / Σ_{k<M} ψ_k(x_i)², the sum
/// Σ ŵ_i g(x_i) equals ∫ g(x) dx whenever g is a polynomial of degree ≤ 2M−1
/// times e^{-x²}, in particular any product ψ_n ψ_{n'} with n + n' ≤ 2M − 1.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule<F> {
    nodes: Vec<F>,
    weights: Vec<F>,
}

impl<F: Real> QuadratureRule<F> {
    pub fn nodes(&self) -> &[F] {
        &self.nodes
    }

    pub fn weights(&self) -> &[F] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Σ ŵ_i g(x_i) for samples g(x_i).
    pub fn integrate(&self, samples: &[F]) -> Result<F, HermiteError> {
        integrate(samples, self)
    }

    /// Samples `g` at the nodes and integrates.
    pub fn integrate_fn(&self, mut g: impl FnMut(F) -> F) -> F {
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(F::zero(), |acc, (&x, &w)| acc + w * g(x))
    }

    /// ψ_k(x_i) for every node, as rows `[i][k]`, k ≤ n_max.
    pub fn psi_table(&self, n_max: usize) -> Vec<Vec<F>> {
        self.nodes.iter().map(|&x| eval_psi_all(n_max, x)).collect()
    }
}

/// Σ_i ŵ_i g(x_i).
pub fn integrate<F: Real>(samples: &[F], rule: &QuadratureRule<F>) -> Result<F, HermiteError> {
    if samples.len() != rule.len() {
        return Err(HermiteError::LengthMismatch {
            expected: rule.len(),
            got: samples.len(),
        });
    }
    Ok(samples
        .iter()
        .zip(&rule.weights)
        .fold(F::zero(), |acc, (&g, &w)| acc + w * g))
}

/// Number of sign changes along ψ_0(x), …, ψ_k(x), which equals the number
/// of zeros of ψ_k lying above x.
fn zeros_above<F: Real>(k: usize, x: F) -> usize {
    let mut rec = PsiRecurrence::new(x);
    let mut last = rec.scaled().0.signum();
    let mut changes = 0;
    for _ in 0..k {
        rec.step();
        let v = rec.scaled().0;
        if v != F::zero() {
            let sg = v.signum();
            if sg != last {
                changes += 1;
            }
            last = sg;
        }
    }
    changes
}

/// Positive zeros of ψ_k in increasing order, by bisection on the sign-change count.
fn positive_zeros_by_count<F: Real>(k: usize) -> Vec<F> {
    let bound = F::from_usize_lossy(2 * k + 1).sqrt();
    let n_pos = k / 2;
    let mut out = Vec::with_capacity(n_pos);
    // t-th largest zero, t = 1..=n_pos
    for t in (1..=n_pos).rev() {
        let (mut lo, mut hi) = (F::zero(), bound);
        for _ in 0..200 {
            let mid = (lo + hi) / F::lit(2.0);
            if mid <= lo || mid >= hi {
                break;
            }
            if zeros_above(k, mid) >= t {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        out.push((lo + hi) / F::lit(2.0));
    }
    out
}

/// ψ_M(x) and ψ_M′(x) up to a common positive factor.
fn psi_and_slope_scaled<F: Real>(m: usize, x: F) -> (F, F) {
    let mut rec = PsiRecurrence::new(x);
    for _ in 0..m {
        rec.step();
    }
    let (cur, prev) = rec.scaled();
    // ψ_M′ = √(2M) ψ_{M-1} − x ψ_M
    let slope = (F::lit(2.0) * F::from_usize_lossy(m)).sqrt() * prev - x * cur;
    (cur, slope)
}

/// Refines the single zero of ψ_M inside (lo, hi): a few bisections, then safeguarded Newton.
fn refine_zero<F: Real>(m: usize, mut lo: F, mut hi: F) -> F {
    let f_lo = psi_and_slope_scaled(m, lo).0;
    let sign_lo = f_lo.signum();
    for _ in 0..6 {
        let mid = (lo + hi) / F::lit(2.0);
        let (f, _) = psi_and_slope_scaled(m, mid);
        if f == F::zero() {
            return mid;
        }
        if f.signum() == sign_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut x = (lo + hi) / F::lit(2.0);
    let tol = F::epsilon() * F::lit(2.0);
    for _ in 0..100 {
        let (f, df) = psi_and_slope_scaled(m, x);
        if f == F::zero() {
            return x;
        }
        if f.signum() == sign_lo {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - f / df;
        let next = if df != F::zero() && newton > lo && newton < hi {
            newton
        } else {
            (lo + hi) / F::lit(2.0)
        };
        let done = (next - x).abs() <= tol * x.abs().max(F::one());
        x = next;
        if done {
            break;
        }
    }
    x
}

/// Builds the M-point rule.
///
/// Nodes are the zeros of ψ_M. Each positive zero is bracketed by consecutive
/// zeros of ψ_{M−1} (interlacing), or by the last one and √(2M+1), then refined
/// with bisection followed by Newton. Nodes are mirrored, so the rule is exactly
/// symmetric.
pub fn gauss_hermite<F: Real>(m: usize) -> Result<QuadratureRule<F>, HermiteError> {
    if !(1..=MAX_QUADRATURE_ORDER).contains(&m) {
        return Err(HermiteError::QuadratureOrder(m));
    }
    let bound = F::from_usize_lossy(2 * m + 1).sqrt();
    let mut brackets = positive_zeros_by_count::<F>(m - 1);
    if m.is_multiple_of(2) {
        // ψ_{M-1} is odd, so 0 is one of its zeros and the lowest bracket edge
        brackets.insert(0, F::zero());
    }
    brackets.push(bound);
    let positive: Vec<F> = brackets.windows(2).map(|w| refine_zero(m, w[0], w[1])).collect();

    let mut nodes: Vec<F> = positive.iter().rev().map(|&x| -x).collect();
    if m % 2 == 1 {
        nodes.push(F::zero());
    }
    nodes.extend(positive.iter().copied());

    let weights: Vec<F> = nodes
        .iter()
        .map(|&x| {
            let sum = eval_psi_all(m - 1, x).iter().fold(F::zero(), |acc, &p| acc + p * p);
            F::one() / sum
        })
        .collect();
    Ok(QuadratureRule { nodes, weights })
}
