//! Seeded random elements for property checks.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::uea::{Basis, Exponents, UeaElement};
use crate::Scalar;

/// Deterministic generator used by tests and `verify`.
pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small coefficient in ℚ(i,√2); most draws are plain rationals.
pub fn random_scalar<R: Rng>(rng: &mut R) -> Scalar {
    let base = match small_fraction(rng) {
        (0, d) => Scalar::from_frac(1, d),
        (n, d) => Scalar::from_frac(n, d),
    };
    if !rng.gen_bool(0.25) {
        return base;
    }
    let (n1, d1) = small_fraction(rng);
    let (n2, d2) = small_fraction(rng);
    base + Scalar::i() * Scalar::from_frac(n1, d1) + Scalar::sqrt2() * Scalar::from_frac(n2, d2)
}

fn small_fraction<R: Rng>(rng: &mut R) -> (i64, i64) {
    (rng.gen_range(-5..=5), rng.gen_range(1..=4))
}

/// Random canonical monomial exponents with total degree ≤ `max_degree`.
pub fn random_exponents<R: Rng>(rng: &mut R, max_degree: u32) -> Exponents {
    let total = rng.gen_range(0..=max_degree);
    let first = rng.gen_range(0..=total);
    let second = rng.gen_range(0..=total - first);
    [first, second, total - first - second]
}

/// Random element with up to `max_terms` monomials of degree ≤ `max_degree`.
pub fn random_element<R: Rng>(rng: &mut R, basis: Basis, max_degree: u32, max_terms: usize) -> UeaElement {
    let count = rng.gen_range(1..=max_terms.max(1));
    let terms: Vec<_> = (0..count)
        .map(|_| (random_scalar(rng), random_exponents(rng, max_degree)))
        .collect();
    UeaElement::from_terms(basis, terms)
}
