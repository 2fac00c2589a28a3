//! The C = 0 representation on the discrete basis {|n⟩}.
//!
//! Two independent routes turn an algebra element into a matrix:
//!
//! * [`compile_exact`] converts to the ladder basis and evaluates each ordered
//!   monomial `a†^α N^β a^γ` entry by entry with integer index algebra:
//!   `⟨k+α| a†^α N^β a^γ |k+γ⟩ = k^β √((k+γ)!/k! · (k+α)!/k!)`. Entries are kept
//!   as exact sums of surds, so identities such as C = 0 hold with no rounding.
//!   The formula is that of the untruncated operator, so no guard band is needed.
//! * [`compile_guarded`] multiplies truncated band matrices of the generators in
//!   the element's own basis at dimension `dim + guard` and keeps the leading
//!   `dim × dim` block. With `guard ≥ degree` the block is free of truncation error.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::hermite::{
    eval_psi_general, gauss_hermite, psi_prime_general, psi_second_general, FrameParams, HermiteError, HermiteIndex,
};
use crate::real::Real;
use crate::scalar::{fmt_scaled, scalar_pieces, write_signed};
use crate::uea::{Basis, Generator, UeaElement, UeaError};
use crate::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RepError {
    #[error("matrix dimension must be at least 1")]
    EmptyDimension,
    #[error("expectation of the zero vector")]
    ZeroVector,
    #[error(transparent)]
    Algebra(#[from] UeaError),
    #[error(transparent)]
    Hermite(#[from] HermiteError),
}

/// Exact value Σ_r c_r √r with r odd squarefree (factors of 2 live in `c_r` as √2).
/// Keys are the prime factors of r; the empty key is r = 1.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SurdSum {
    terms: BTreeMap<Vec<u32>, Scalar>,
}

impl SurdSum {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Scalar)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), v))
    }

    fn add(&mut self, radicand: Vec<u32>, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(radicand.clone()).or_insert_with(Scalar::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&radicand);
        }
    }

    pub fn to_complex<F: Real>(&self) -> Complex<F> {
        self.terms.iter().fold(Complex::zero(), |acc, (primes, c)| {
            let root = primes.iter().fold(F::one(), |r, &p| r * F::from_u32(p).unwrap().sqrt());
            acc + c.to_complex::<F>() * root
        })
    }
}

impl fmt::Display for SurdSum {
    /// Sum form with radicals written `sqrt(r)`, e.g. `(1/2)*s2*sqrt(3) + 2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pieces = self.terms.iter().flat_map(|(primes, c)| {
            if primes.is_empty() {
                scalar_pieces(c)
            } else {
                let r: u64 = primes.iter().map(|&p| u64::from(p)).product();
                vec![fmt_scaled(c, &format!("sqrt({r})"))]
            }
        });
        write_signed(f, pieces)
    }
}

fn add_prime_factors(mut n: u64, exps: &mut BTreeMap<u64, u32>) {
    let mut p = 2;
    while p * p <= n {
        while n.is_multiple_of(p) {
            *exps.entry(p).or_insert(0) += 1;
            n /= p;
        }
        p += 1;
    }
    if n > 1 {
        *exps.entry(n).or_insert(0) += 1;
    }
}

/// √(∏ factors) = square_part · √2^{two} · √(odd squarefree).
fn split_root(factors: impl Iterator<Item = u64>) -> (BigInt, bool, Vec<u32>) {
    let mut exps = BTreeMap::new();
    for f in factors {
        add_prime_factors(f, &mut exps);
    }
    let mut square = BigInt::one();
    let mut two = false;
    let mut odd = Vec::new();
    for (p, e) in exps {
        square *= BigInt::from(p).pow(e / 2);
        if e % 2 == 1 {
            if p == 2 {
                two = true;
            } else {
                odd.push(u32::try_from(p).expect("prime fits u32"));
            }
        }
    }
    (square, two, odd)
}

/// Exact `rows × cols` matrix of surd sums.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<SurdSum>,
}

impl ExactMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &SurdSum {
        &self.entries[r * self.cols + c]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(SurdSum::is_zero)
    }

    pub fn to_float<F: Real>(&self) -> OperatorMatrix<F> {
        assert_eq!(self.rows, self.cols, "only square blocks convert to OperatorMatrix");
        OperatorMatrix {
            dim: self.rows,
            entries: self.entries.iter().map(SurdSum::to_complex).collect(),
        }
    }
}

/// Exact leading `rows × cols` block of the operator represented by `a`.
pub fn exact_block(a: &UeaElement, rows: usize, cols: usize) -> Result<ExactMatrix, RepError> {
    let ladder = a.to_ladder()?;
    let mut entries = vec![SurdSum::default(); rows * cols];
    for (&[alpha, beta, gamma], c) in ladder.terms() {
        let (alpha, gamma) = (alpha as usize, gamma as usize);
        for col in gamma..cols {
            let k = col - gamma;
            let row = k + alpha;
            if row >= rows {
                break;
            }
            if k == 0 && beta > 0 {
                continue;
            }
            let (square, two, odd) = split_root(((k + 1)..=col).chain((k + 1)..=row).map(|v| v as u64));
            let weight = BigInt::from(k).pow(beta) * square;
            let mut value = c.scale_big(&weight);
            if two {
                value *= Scalar::sqrt2();
            }
            entries[row * cols + col].add(odd, value);
        }
    }
    Ok(ExactMatrix { rows, cols, entries })
}

/// Exact `dim × dim` matrix of `a`.
pub fn compile_exact(a: &UeaElement, dim: usize) -> Result<ExactMatrix, RepError> {
    if dim == 0 {
        return Err(RepError::EmptyDimension);
    }
    exact_block(a, dim, dim)
}

/// `dim × dim` complex matrix of `a`, converted from the exact route.
pub fn compile<F: Real>(a: &UeaElement, dim: usize) -> Result<OperatorMatrix<F>, RepError> {
    Ok(compile_exact(a, dim)?.to_float())
}

/// Dense complex square matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix<F> {
    dim: usize,
    entries: Vec<Complex<F>>,
}

impl<F: Real> OperatorMatrix<F> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![Complex::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = Complex::one();
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, r: usize, c: usize) -> Complex<F> {
        self.entries[r * self.dim + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Complex<F>) {
        self.entries[r * self.dim + c] = v;
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Complex<F>]> {
        self.entries.chunks(self.dim.max(1))
    }

    /// Largest |r − c| over nonzero entries.
    pub fn bandwidth(&self) -> usize {
        let mut bw = 0;
        for r in 0..self.dim {
            for c in 0..self.dim {
                if !self.get(r, c).is_zero() {
                    bw = bw.max(r.abs_diff(c));
                }
            }
        }
        bw
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                m.set(c, r, self.get(r, c).conj());
            }
        }
        m
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut m = Self::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..n {
                    m.entries[r * n + c] = m.entries[r * n + c] + a * other.get(k, c);
                }
            }
        }
        m
    }

    pub fn scale(&self, s: Complex<F>) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|&v| v * s).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        Self {
            dim: self.dim,
            entries: self.entries.iter().zip(&other.entries).map(|(&a, &b)| a - b).collect(),
        }
    }

    /// Leading `k × k` block.
    pub fn block(&self, k: usize) -> Self {
        let mut m = Self::zeros(k);
        for r in 0..k {
            for c in 0..k {
                m.set(r, c, self.get(r, c));
            }
        }
        m
    }

    pub fn max_abs_diff(&self, other: &Self) -> F {
        assert_eq!(self.dim, other.dim);
        self.entries
            .iter()
            .zip(&other.entries)
            .fold(F::zero(), |m, (&a, &b)| m.max((a - b).norm()))
    }

    pub fn max_abs(&self) -> F {
        self.entries.iter().fold(F::zero(), |m, v| m.max(v.norm()))
    }

    pub fn is_hermitian(&self, tol: F) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol
    }

    pub fn matvec(&self, v: &[Complex<F>]) -> Vec<Complex<F>> {
        assert_eq!(v.len(), self.dim);
        self.rows()
            .map(|row| row.iter().zip(v).fold(Complex::zero(), |acc, (&m, &x)| acc + m * x))
            .collect()
    }
}

/// Coefficients on row r multiplying v[r−1], v[r], v[r+1].
fn band_row<F: Real>(g: Generator, r: usize) -> [F; 3] {
    let rf = F::from_usize_lossy(r);
    let half = F::lit(0.5);
    let z = F::zero();
    match g {
        Generator::X => [(rf * half).sqrt(), z, ((rf + F::one()) * half).sqrt()],
        Generator::D => [-(rf * half).sqrt(), z, ((rf + F::one()) * half).sqrt()],
        Generator::N => [z, rf, z],
        Generator::Id => [z, F::one(), z],
        Generator::ADag => [rf.sqrt(), z, z],
        Generator::A => [z, z, (rf + F::one()).sqrt()],
    }
}

/// Truncated `dim × dim` band matrix of a generator.
pub fn generator_matrix<F: Real>(g: Generator, dim: usize) -> Result<OperatorMatrix<F>, RepError> {
    if dim == 0 {
        return Err(RepError::EmptyDimension);
    }
    let mut m = OperatorMatrix::zeros(dim);
    for r in 0..dim {
        let [left, mid, right] = band_row::<F>(g, r);
        if r > 0 {
            m.set(r, r - 1, Complex::new(left, F::zero()));
        }
        m.set(r, r, Complex::new(mid, F::zero()));
        if r + 1 < dim {
            m.set(r, r + 1, Complex::new(right, F::zero()));
        }
    }
    Ok(m)
}

/// P = −i·D.
pub fn momentum_matrix<F: Real>(dim: usize) -> Result<OperatorMatrix<F>, RepError> {
    Ok(generator_matrix::<F>(Generator::D, dim)?.scale(Complex::new(F::zero(), -F::one())))
}

/// v ← M v for the truncated band matrix of `g`.
fn apply_band<F: Real>(g: Generator, v: &[Complex<F>]) -> Vec<Complex<F>> {
    let n = v.len();
    (0..n)
        .map(|r| {
            let [left, mid, right] = band_row::<F>(g, r);
            let mut acc = v[r] * mid;
            if r > 0 {
                acc = acc + v[r - 1] * left;
            }
            if r + 1 < n {
                acc = acc + v[r + 1] * right;
            }
            acc
        })
        .collect()
}

/// `dim × dim` block of products of truncated generator matrices at `dim + guard`.
pub fn compile_guarded<F: Real>(a: &UeaElement, dim: usize, guard: usize) -> Result<OperatorMatrix<F>, RepError> {
    if dim == 0 {
        return Err(RepError::EmptyDimension);
    }
    let letters = match a.basis() {
        Basis::Differential => [Generator::X, Generator::D, Generator::N],
        Basis::Ladder => [Generator::ADag, Generator::N, Generator::A],
    };
    let big = dim + guard;
    let mut out = OperatorMatrix::zeros(dim);
    for (e, c) in a.terms() {
        let c = c.to_complex::<F>();
        for col in 0..dim {
            let mut v = vec![Complex::zero(); big];
            v[col] = Complex::one();
            // rightmost letter acts first
            for slot in (0..3).rev() {
                for _ in 0..e[slot] {
                    v = apply_band(letters[slot], &v);
                }
            }
            for (row, z) in v.iter().take(dim).enumerate() {
                let cur = out.get(row, col);
                out.set(row, col, cur + c * z);
            }
        }
    }
    Ok(out)
}

/// [`compile_guarded`] with the guard band equal to the element's degree.
pub fn compile_banded<F: Real>(a: &UeaElement, dim: usize) -> Result<OperatorMatrix<F>, RepError> {
    compile_guarded(a, dim, a.degree() as usize)
}

/// A truncated sequence {f_n} in the discrete basis.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffVector<F> {
    coeffs: Vec<Complex<F>>,
    frame: Option<FrameParams<F>>,
}

impl<F: Real> CoeffVector<F> {
    pub fn new(coeffs: Vec<Complex<F>>) -> Self {
        Self { coeffs, frame: None }
    }

    pub fn from_real(coeffs: &[F]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex::new(c, F::zero())).collect())
    }

    /// e_n of length `len`.
    pub fn unit(n: usize, len: usize) -> Self {
        let mut v = vec![Complex::zero(); len];
        v[n] = Complex::one();
        Self::new(v)
    }

    pub fn with_frame(mut self, frame: FrameParams<F>) -> Self {
        self.frame = Some(frame);
        self
    }

    pub fn frame(&self) -> Option<&FrameParams<F>> {
        self.frame.as_ref()
    }

    pub fn coeffs(&self) -> &[Complex<F>] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn norm_sqr(&self) -> F {
        self.coeffs.iter().fold(F::zero(), |acc, c| acc + c.norm_sqr())
    }

    /// ⟨self, other⟩, conjugate-linear in `self`; the shorter vector is zero-padded.
    pub fn inner(&self, other: &Self) -> Complex<F> {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .fold(Complex::zero(), |acc, (a, b)| acc + a.conj() * b)
    }

    pub fn max_abs_diff(&self, other: &Self) -> F {
        let n = self.len().max(other.len());
        (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or_else(Complex::zero);
                let b = other.coeffs.get(i).copied().unwrap_or_else(Complex::zero);
                (a - b).norm()
            })
            .fold(F::zero(), F::max)
    }
}

/// A f, with output length `len(f) + deg(A)`.
///
/// Every output entry is exact up to the final float conversion: a degree-d
/// element maps |n⟩ into span{|0⟩ … |n+d⟩}, so nothing is lost to the cutoff.
pub fn apply<F: Real>(a: &UeaElement, f: &CoeffVector<F>) -> Result<CoeffVector<F>, RepError> {
    let cols = f.len();
    let rows = cols + a.degree() as usize;
    let m = exact_block(a, rows, cols)?;
    let dense: Vec<Complex<F>> = m.entries.iter().map(SurdSum::to_complex).collect();
    let coeffs = (0..rows)
        .map(|r| {
            dense[r * cols..(r + 1) * cols]
                .iter()
                .zip(f.coeffs())
                .fold(Complex::zero(), |acc, (&m, &x)| acc + m * x)
        })
        .collect();
    Ok(CoeffVector { coeffs, frame: f.frame })
}

/// ⟨f, A f⟩ / ⟨f, f⟩.
pub fn expectation<F: Real>(a: &UeaElement, f: &CoeffVector<F>) -> Result<Complex<F>, RepError> {
    let norm = f.norm_sqr();
    if norm == F::zero() {
        return Err(RepError::ZeroVector);
    }
    let af = apply(a, f)?;
    Ok(f.inner(&af) / norm)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Uncertainty<F> {
    pub delta_x: F,
    pub delta_p: F,
    pub product: F,
}

/// ΔX, ΔP and their product for ψ[n, x₀, s, ·], from quadrature second moments.
pub fn uncertainty_product<F: Real>(n: HermiteIndex, s: F) -> Result<Uncertainty<F>, RepError> {
    // x₀ drops out; an off-origin frame keeps that honest
    let frame = FrameParams::new(F::lit(0.5), s)?;
    let rule = gauss_hermite::<F>(n + 4)?;
    let x0 = frame.x0();
    let moments = |g: &dyn Fn(F) -> F| rule.integrate_fn(|u| g(x0 + s * u) * s);
    let psi = |x: F| eval_psi_general(n, &frame, x);
    let mean_x = moments(&|x| (x - x0) * psi(x) * psi(x));
    let var_x = moments(&|x| (x - x0) * (x - x0) * psi(x) * psi(x)) - mean_x * mean_x;
    // P = −i∂ₓ: ⟨P⟩ = −i∫ψψ′, ⟨P²⟩ = −∫ψψ″ for real ψ
    let mean_p = moments(&|x| psi(x) * psi_prime_general(n, &frame, x));
    let var_p = -moments(&|x| psi(x) * psi_second_general(n, &frame, x)) - mean_p * mean_p;
    let delta_x = var_x.sqrt();
    let delta_p = var_p.sqrt();
    Ok(Uncertainty {
        delta_x,
        delta_p,
        product: delta_x * delta_p,
    })
}
