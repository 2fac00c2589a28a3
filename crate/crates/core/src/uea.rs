//! The universal enveloping algebra of io(2) in PBW normal form.
//!
//! Two ordered bases are supported:
//!
//! * differential: monomials `X^α D^β N^γ`, rewrite rules
//!   `D·X → X·D + 1`, `N·X → X·N − D`, `N·D → D·N − X`;
//! * ladder: monomials `a†^α N^β a^γ`, rewrite rules
//!   `a·a† → a†·a + 1`, `N·a† → a†·N + a†`, `a·N → N·a + a`.
//!
//! Momentum is never stored: `P = −i·D`, which makes `a = (X + D)/√2` the
//! annihilator of ψ_0. Coefficients are exact [`Scalar`]s, so two elements are
//! equal in the algebra iff their term maps are identical.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use thiserror::Error;

use crate::scalar::{fmt_scaled, write_signed};
use crate::Scalar;

/// Upper bound on rule applications for a single call.
pub const DEFAULT_REWRITE_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Basis {
    Differential,
    Ladder,
}

impl Basis {
    /// Printed names of the three ordered letters.
    pub fn letters(self) -> [&'static str; 3] {
        match self {
            Basis::Differential => ["X", "D", "N"],
            Basis::Ladder => ["ad", "N", "a"],
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Basis::Differential => "differential",
            Basis::Ladder => "ladder",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Generator {
    X,
    D,
    N,
    Id,
    ADag,
    A,
}

impl Generator {
    /// The basis the generator belongs to; `N` and `Id` are shared.
    pub fn basis(self) -> Option<Basis> {
        match self {
            Generator::X | Generator::D => Some(Basis::Differential),
            Generator::ADag | Generator::A => Some(Basis::Ladder),
            Generator::N | Generator::Id => None,
        }
    }

    /// Position in the normal order of `basis`, `None` for the identity.
    fn letter(self, basis: Basis) -> Option<u8> {
        match (basis, self) {
            (_, Generator::Id) => None,
            (Basis::Differential, Generator::X) | (Basis::Ladder, Generator::ADag) => Some(0),
            (Basis::Differential, Generator::D) | (Basis::Ladder, Generator::N) => Some(1),
            (Basis::Differential, Generator::N) | (Basis::Ladder, Generator::A) => Some(2),
            _ => unreachable!("generator checked against basis"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UeaError {
    #[error("basis mismatch: {left} vs {right}")]
    BasisMismatch { left: Basis, right: Basis },
    #[error("generator {0:?} does not belong to the {1} basis")]
    ForeignGenerator(Generator, Basis),
    #[error("rewrite budget of {0} rule applications exhausted")]
    BudgetExceeded(u64),
}

/// Exponents of the three ordered letters.
pub type Exponents = [u32; 3];

/// A single ordered monomial with its coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monomial {
    pub coeff: Scalar,
    pub exponents: Exponents,
}

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.exponents.iter().sum()
    }
}

/// Graded lexicographic key: total degree first, then exponents left to right.
pub fn grlex_key(e: &Exponents) -> (u32, u32, u32, u32) {
    (e[0] + e[1] + e[2], e[0], e[1], e[2])
}

/// Rewrite of an out-of-order adjacent pair `hi·lo` (hi > lo): the swapped
/// pair with coefficient one plus these integer-weighted corrections.
fn corrections(basis: Basis, hi: u8, lo: u8) -> &'static [(i64, &'static [u8])] {
    match (basis, hi, lo) {
        (Basis::Differential, 1, 0) => &[(1, &[])],
        (Basis::Differential, 2, 0) => &[(-1, &[1])],
        (Basis::Differential, 2, 1) => &[(-1, &[0])],
        (Basis::Ladder, 1, 0) => &[(1, &[0])],
        (Basis::Ladder, 2, 0) => &[(1, &[])],
        (Basis::Ladder, 2, 1) => &[(1, &[2])],
        _ => unreachable!("only out-of-order pairs are rewritten"),
    }
}

fn word_of(e: &Exponents) -> Vec<u8> {
    let mut w = Vec::with_capacity(e.iter().sum::<u32>() as usize);
    for (letter, &k) in e.iter().enumerate() {
        w.extend(std::iter::repeat_n(letter as u8, k as usize));
    }
    w
}

fn exponents_of(word: &[u8]) -> Exponents {
    let mut e = [0u32; 3];
    for &l in word {
        e[l as usize] += 1;
    }
    e
}

fn accumulate<K: Ord>(map: &mut BTreeMap<K, Scalar>, key: K, c: Scalar) {
    use std::collections::btree_map::Entry;
    if c.is_zero() {
        return;
    }
    match map.entry(key) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

/// Normal-orders a linear combination of words.
///
/// Words are processed longest-first and lexicographically largest-first.
/// Every rule output is strictly smaller under that order (same length with
/// one inversion fewer, or one letter shorter), so each word is visited once
/// with its fully merged coefficient and the loop terminates.
pub struct Rewriter {
    basis: Basis,
    budget: u64,
    steps: u64,
}

impl Rewriter {
    pub fn new(basis: Basis) -> Self {
        Self::with_budget(basis, DEFAULT_REWRITE_BUDGET)
    }

    pub fn with_budget(basis: Basis, budget: u64) -> Self {
        Self {
            basis,
            budget,
            steps: 0,
        }
    }

    /// Rule applications performed so far.
    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn normal_order(
        &mut self,
        words: impl IntoIterator<Item = (Vec<u8>, Scalar)>,
    ) -> Result<BTreeMap<Exponents, Scalar>, UeaError> {
        let mut work: BTreeMap<(usize, Vec<u8>), Scalar> = BTreeMap::new();
        for (w, c) in words {
            accumulate(&mut work, (w.len(), w), c);
        }
        let mut out = BTreeMap::new();
        while let Some(((_, word), c)) = work.pop_last() {
            let Some(i) = word.windows(2).position(|p| p[0] > p[1]) else {
                accumulate(&mut out, exponents_of(&word), c);
                continue;
            };
            self.steps += 1;
            if self.steps > self.budget {
                return Err(UeaError::BudgetExceeded(self.budget));
            }
            let (hi, lo) = (word[i], word[i + 1]);
            let mut swapped = word.clone();
            swapped.swap(i, i + 1);
            accumulate(&mut work, (swapped.len(), swapped), c.clone());
            for &(k, middle) in corrections(self.basis, hi, lo) {
                let mut w = Vec::with_capacity(word.len() - 2 + middle.len());
                w.extend_from_slice(&word[..i]);
                w.extend_from_slice(middle);
                w.extend_from_slice(&word[i + 2..]);
                accumulate(&mut work, (w.len(), w), c.clone() * Scalar::from_int(k));
            }
        }
        Ok(out)
    }
}

/// A finite sum of ordered monomials in one basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UeaElement {
    basis: Basis,
    terms: BTreeMap<Exponents, Scalar>,
}

impl UeaElement {
    pub fn zero(basis: Basis) -> Self {
        Self {
            basis,
            terms: BTreeMap::new(),
        }
    }

    /// The identity 𝕀.
    pub fn one(basis: Basis) -> Self {
        Self::scalar(basis, Scalar::one())
    }

    pub fn scalar(basis: Basis, c: Scalar) -> Self {
        Self::monomial(basis, c, [0, 0, 0])
    }

    pub fn monomial(basis: Basis, c: Scalar, exponents: Exponents) -> Self {
        let mut terms = BTreeMap::new();
        accumulate(&mut terms, exponents, c);
        Self { basis, terms }
    }

    /// Builds from `(coefficient, exponents)` pairs, merging repeats.
    pub fn from_terms(basis: Basis, terms: impl IntoIterator<Item = (Scalar, Exponents)>) -> Self {
        let mut map = BTreeMap::new();
        for (c, e) in terms {
            accumulate(&mut map, e, c);
        }
        Self { basis, terms: map }
    }

    /// A generator as an element of `basis`.
    pub fn generator_in(g: Generator, basis: Basis) -> Result<Self, UeaError> {
        if g.basis().is_some_and(|b| b != basis) {
            return Err(UeaError::ForeignGenerator(g, basis));
        }
        Ok(match g.letter(basis) {
            None => Self::one(basis),
            Some(l) => {
                let mut e = [0; 3];
                e[l as usize] = 1;
                Self::monomial(basis, Scalar::one(), e)
            }
        })
    }

    /// A generator in its own basis (`N` and `Id` default to differential).
    pub fn generator(g: Generator) -> Self {
        let basis = g.basis().unwrap_or(Basis::Differential);
        Self::generator_in(g, basis).expect("generator in its own basis")
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, e: &Exponents) -> Option<&Scalar> {
        self.terms.get(e)
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Scalar)> {
        self.terms.iter()
    }

    pub fn monomials(&self) -> impl Iterator<Item = Monomial> + '_ {
        self.terms.iter().map(|(e, c)| Monomial {
            coeff: c.clone(),
            exponents: *e,
        })
    }

    /// Terms in descending graded-lex order, the printing order.
    pub fn terms_grlex_desc(&self) -> Vec<(&Exponents, &Scalar)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by_key(|(e, _)| std::cmp::Reverse(grlex_key(e)));
        v
    }

    /// Total degree of the highest monomial; 0 for the zero element.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// Largest exponent of the middle letter (D, or N in the ladder basis).
    pub fn max_middle_power(&self) -> u32 {
        self.terms.keys().map(|e| e[1]).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(self.basis);
        }
        Self {
            basis: self.basis,
            terms: self.terms.iter().map(|(e, v)| (*e, v.clone() * c.clone())).collect(),
        }
    }

    fn check_basis(&self, other: &Self) -> Result<(), UeaError> {
        if self.basis != other.basis {
            return Err(UeaError::BasisMismatch {
                left: self.basis,
                right: other.basis,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, UeaError> {
        self.check_basis(other)?;
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            accumulate(&mut terms, *e, c.clone());
        }
        Ok(Self {
            basis: self.basis,
            terms,
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, UeaError> {
        self.try_add(&-other)
    }

    /// Normal-ordered product.
    pub fn product(&self, other: &Self) -> Result<Self, UeaError> {
        self.product_with(other, &mut Rewriter::new(self.basis))
    }

    /// Product charged against an existing rewriter's budget.
    pub fn product_with(&self, other: &Self, rw: &mut Rewriter) -> Result<Self, UeaError> {
        self.check_basis(other)?;
        let words = self.terms.iter().flat_map(|(ea, ca)| {
            other.terms.iter().map(move |(eb, cb)| {
                let mut w = word_of(ea);
                w.extend(word_of(eb));
                (w, ca.clone() * cb.clone())
            })
        });
        let terms = rw.normal_order(words.collect::<Vec<_>>())?;
        Ok(Self {
            basis: self.basis,
            terms,
        })
    }

    /// [A, B] = AB − BA.
    pub fn commutator(&self, other: &Self) -> Result<Self, UeaError> {
        let ab = self.product(other)?;
        let ba = other.product(self)?;
        ab.try_sub(&ba)
    }

    pub fn pow(&self, k: u32) -> Result<Self, UeaError> {
        let mut rw = Rewriter::new(self.basis);
        let mut acc = Self::one(self.basis);
        for _ in 0..k {
            acc = acc.product_with(self, &mut rw)?;
        }
        Ok(acc)
    }

    /// Rewrites every monomial through letter images in `target` and normal-orders.
    fn substitute(&self, target: Basis, images: &[UeaElement; 3]) -> Result<Self, UeaError> {
        let mut words: Vec<(Vec<u8>, Scalar)> = Vec::new();
        for (e, c) in &self.terms {
            let mut partial: Vec<(Vec<u8>, Scalar)> = vec![(Vec::new(), c.clone())];
            for &letter in &word_of(e) {
                let img = &images[letter as usize];
                let mut next = Vec::with_capacity(partial.len() * img.len());
                for (w, cw) in &partial {
                    for (ei, ci) in &img.terms {
                        let mut w2 = w.clone();
                        w2.extend(word_of(ei));
                        next.push((w2, cw.clone() * ci.clone()));
                    }
                }
                partial = next;
            }
            words.extend(partial);
        }
        let terms = Rewriter::new(target).normal_order(words)?;
        Ok(Self { basis: target, terms })
    }

    /// Rewrites in `a†, N, a` via X = (a† + a)/√2, D = (a − a†)/√2.
    /// Ladder input is returned unchanged.
    pub fn to_ladder(&self) -> Result<Self, UeaError> {
        if self.basis == Basis::Ladder {
            return Ok(self.clone());
        }
        let h = Scalar::inv_sqrt2();
        let l = Basis::Ladder;
        let images = [
            Self::from_terms(l, [(h.clone(), [1, 0, 0]), (h.clone(), [0, 0, 1])]),
            Self::from_terms(l, [(h.clone(), [0, 0, 1]), (-h, [1, 0, 0])]),
            Self::monomial(l, Scalar::one(), [0, 1, 0]),
        ];
        self.substitute(l, &images)
    }

    /// Rewrites in `X, D, N` via a† = (X − D)/√2, a = (X + D)/√2.
    /// Differential input is returned unchanged.
    pub fn from_ladder(&self) -> Result<Self, UeaError> {
        if self.basis == Basis::Differential {
            return Ok(self.clone());
        }
        let h = Scalar::inv_sqrt2();
        let d = Basis::Differential;
        let images = [
            Self::from_terms(d, [(h.clone(), [1, 0, 0]), (-h.clone(), [0, 1, 0])]),
            Self::monomial(d, Scalar::one(), [0, 0, 1]),
            Self::from_terms(d, [(h.clone(), [1, 0, 0]), (h, [0, 1, 0])]),
        ];
        self.substitute(d, &images)
    }

    /// Converts to `basis`.
    pub fn in_basis(&self, basis: Basis) -> Result<Self, UeaError> {
        match basis {
            Basis::Differential => self.from_ladder(),
            Basis::Ladder => self.to_ladder(),
        }
    }

    /// Reduces every monomial to at most one D.
    ///
    /// The largest monomial (graded lex) containing D² is rewritten with its
    /// leftmost D² replaced by X² − 2N − 𝕀, then re-normal-ordered; repeat
    /// until no D² remains. Ladder input is converted first.
    pub fn casimir_reduce(&self) -> Result<ReducedForm, UeaError> {
        self.casimir_reduce_with_budget(DEFAULT_REWRITE_BUDGET)
    }

    pub fn casimir_reduce_with_budget(&self, budget: u64) -> Result<ReducedForm, UeaError> {
        let mut cur = self.from_ladder()?;
        let mut rw = Rewriter::with_budget(Basis::Differential, budget);
        loop {
            let target = cur
                .terms
                .keys()
                .filter(|e| e[1] >= 2)
                .max_by_key(|e| grlex_key(e))
                .copied();
            let Some(e) = target else { break };
            let c = cur.terms.remove(&e).expect("key just found");
            let [alpha, beta, gamma] = e;
            let prefix = word_of(&[alpha, beta - 2, 0]);
            let tail = word_of(&[0, 0, gamma]);
            let with = |middle: &[u8]| {
                let mut w = prefix.clone();
                w.extend_from_slice(middle);
                w.extend_from_slice(&tail);
                w
            };
            // D² ≡ X² − 2N − 𝕀
            let words = vec![
                (with(&[0, 0]), c.clone()),
                (with(&[2]), c.clone() * Scalar::from_int(-2)),
                (with(&[]), -c),
            ];
            for (e2, c2) in rw.normal_order(words)? {
                accumulate(&mut cur.terms, e2, c2);
            }
        }
        Ok(ReducedForm(cur))
    }
}

/// C = ½X² − ½D² − N − ½𝕀, in the differential basis.
pub fn casimir() -> UeaElement {
    UeaElement::from_terms(
        Basis::Differential,
        [
            (Scalar::from_frac(1, 2), [2, 0, 0]),
            (Scalar::from_frac(-1, 2), [0, 2, 0]),
            (Scalar::from_int(-1), [0, 0, 1]),
            (Scalar::from_frac(-1, 2), [0, 0, 0]),
        ],
    )
}

/// Equality as operators on the C = 0 representation.
pub fn equals_mod_casimir(a: &UeaElement, b: &UeaElement) -> Result<bool, UeaError> {
    Ok(a.casimir_reduce()? == b.casimir_reduce()?)
}

/// A differential-basis element whose monomials all have D-degree ≤ 1,
/// i.e. f₀(X)g₀(N) + f₁(X)·D·g₁(N) with polynomial f's and g's.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedForm(UeaElement);

impl ReducedForm {
    pub fn as_element(&self) -> &UeaElement {
        &self.0
    }

    pub fn into_element(self) -> UeaElement {
        self.0
    }

    /// Splits into the D-free part and the part carrying a single D.
    pub fn split(&self) -> (UeaElement, UeaElement) {
        let pick = |beta: u32| UeaElement {
            basis: Basis::Differential,
            terms: self
                .0
                .terms
                .iter()
                .filter(|(e, _)| e[1] == beta)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        };
        (pick(0), pick(1))
    }
}

impl fmt::Display for ReducedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

fn fmt_letters(basis: Basis, e: &Exponents) -> String {
    let names = basis.letters();
    let parts: Vec<String> = e
        .iter()
        .zip(names)
        .filter(|(k, _)| **k > 0)
        .map(|(&k, name)| {
            if k == 1 {
                name.to_string()
            } else {
                format!("{name}^{k}")
            }
        })
        .collect();
    if parts.is_empty() {
        "I".to_string()
    } else {
        parts.join("*")
    }
}

impl fmt::Display for UeaElement {
    /// Canonical text, e.g. `(1/2)*X^2 - (1/2)*D^2 - N - (1/2)*I`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pieces = self
            .terms_grlex_desc()
            .into_iter()
            .map(|(e, c)| fmt_scaled(c, &fmt_letters(self.basis, e)));
        write_signed(f, pieces)
    }
}

impl Neg for &UeaElement {
    type Output = UeaElement;
    fn neg(self) -> UeaElement {
        UeaElement {
            basis: self.basis,
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }
}

impl Neg for UeaElement {
    type Output = UeaElement;
    fn neg(self) -> UeaElement {
        -&self
    }
}

// Operator sugar. These panic on a basis mismatch or exhausted budget; the
// `try_*`/`product` methods are the fallible forms.

impl Add for &UeaElement {
    type Output = UeaElement;
    fn add(self, rhs: &UeaElement) -> UeaElement {
        self.try_add(rhs).expect("operands in the same basis")
    }
}

impl Sub for &UeaElement {
    type Output = UeaElement;
    fn sub(self, rhs: &UeaElement) -> UeaElement {
        self.try_sub(rhs).expect("operands in the same basis")
    }
}

impl Mul for &UeaElement {
    type Output = UeaElement;
    fn mul(self, rhs: &UeaElement) -> UeaElement {
        self.product(rhs).expect("operands in the same basis")
    }
}

impl Mul<&UeaElement> for Scalar {
    type Output = UeaElement;
    fn mul(self, rhs: &UeaElement) -> UeaElement {
        rhs.scale(&self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> UeaElement {
        UeaElement::generator(Generator::X)
    }
    fn d() -> UeaElement {
        UeaElement::generator(Generator::D)
    }
    fn n() -> UeaElement {
        UeaElement::generator(Generator::N)
    }
    fn id() -> UeaElement {
        UeaElement::one(Basis::Differential)
    }
    fn a() -> UeaElement {
        UeaElement::generator(Generator::A)
    }
    fn ad() -> UeaElement {
        UeaElement::generator(Generator::ADag)
    }
    fn nl() -> UeaElement {
        UeaElement::generator_in(Generator::N, Basis::Ladder).unwrap()
    }
    fn q(n: i64, dd: i64) -> Scalar {
        Scalar::from_frac(n, dd)
    }

    #[test]
    fn single_rule_products() {
        assert_eq!(&d() * &x(), &(&x() * &d()) + &id());
        let l1 = UeaElement::one(Basis::Ladder);
        assert_eq!(&a() * &ad(), &(&ad() * &a()) + &l1);
        assert_eq!((&d() * &x()).to_string(), "X*D + I");
    }

    #[test]
    fn d_times_x_squared() {
        let x2 = x().pow(2).unwrap();
        let want = &(&x2 * &d()) + &x().scale(&Scalar::from_int(2));
        assert_eq!(&d() * &x2, want);
    }

    #[test]
    fn commutators() {
        assert_eq!(n().commutator(&x()).unwrap(), -d());
        assert_eq!(n().commutator(&d()).unwrap(), -x());
        assert_eq!(x().commutator(&d()).unwrap(), -id());
        assert!(x().commutator(&x()).unwrap().is_zero());
        assert_eq!(nl().commutator(&ad()).unwrap(), ad());
        assert_eq!(nl().commutator(&a()).unwrap(), -a());
        assert_eq!(a().commutator(&ad()).unwrap(), UeaElement::one(Basis::Ladder));
    }

    #[test]
    fn io2_relations_with_momentum() {
        // P = −i·D: [N,X] = −iP, [N,P] = iX, [X,P] = i𝕀
        let i = Scalar::i();
        let p = d().scale(&-i.clone());
        assert_eq!(n().commutator(&x()).unwrap(), p.scale(&-i.clone()));
        assert_eq!(n().commutator(&p).unwrap(), x().scale(&i));
        assert_eq!(x().commutator(&p).unwrap(), id().scale(&i));
    }

    #[test]
    fn basis_mismatch_is_an_error() {
        assert_eq!(
            x().product(&a()),
            Err(UeaError::BasisMismatch {
                left: Basis::Differential,
                right: Basis::Ladder
            })
        );
        assert!(x().commutator(&a()).is_err());
        assert!(UeaElement::generator_in(Generator::X, Basis::Ladder).is_err());
    }

    #[test]
    fn ladder_images() {
        let h = Scalar::inv_sqrt2();
        assert_eq!(x().to_ladder().unwrap(), &ad().scale(&h) + &a().scale(&h));
        assert_eq!(id().to_ladder().unwrap(), UeaElement::one(Basis::Ladder));
        assert_eq!(a().from_ladder().unwrap(), &x().scale(&h) + &d().scale(&h));
        assert_eq!(nl().from_ladder().unwrap(), n());
    }

    #[test]
    fn number_form_of_adag_a() {
        // a†a = ½X² − ½D² − ½𝕀 exactly in the algebra
        let got = (&ad() * &a()).from_ladder().unwrap();
        let want = UeaElement::from_terms(
            Basis::Differential,
            [(q(1, 2), [2, 0, 0]), (q(-1, 2), [0, 2, 0]), (q(-1, 2), [0, 0, 0])],
        );
        assert_eq!(got, want);
    }

    #[test]
    fn casimir_forms() {
        let c = casimir();
        assert_eq!(c.to_string(), "(1/2)*X^2 - (1/2)*D^2 - N - (1/2)*I");
        assert_eq!(c.to_ladder().unwrap(), &(&ad() * &a()) - &nl());
        for g in [x(), d(), n(), id()] {
            assert!(c.commutator(&g).unwrap().is_zero());
        }
    }

    #[test]
    fn reductions() {
        let d2 = d().pow(2).unwrap();
        let r = d2.casimir_reduce().unwrap();
        assert_eq!(r.to_string(), "X^2 - 2*N - I");
        assert_eq!(x().casimir_reduce().unwrap().into_element(), x());
        // D³ → X²D − 2DN − D + 2X
        let d3 = d().pow(3).unwrap().casimir_reduce().unwrap().into_element();
        let want = UeaElement::from_terms(
            Basis::Differential,
            [
                (Scalar::one(), [2, 1, 0]),
                (Scalar::from_int(-2), [0, 1, 1]),
                (Scalar::from_int(-1), [0, 1, 0]),
                (Scalar::from_int(2), [1, 0, 0]),
            ],
        );
        assert_eq!(d3, want);
        assert!(casimir().casimir_reduce().unwrap().as_element().is_zero());
    }

    #[test]
    fn operatorial_identity() {
        let rhs = (&(&x().pow(2).unwrap() - &d().pow(2).unwrap()) - &id()).scale(&q(1, 2));
        assert!(equals_mod_casimir(&n(), &rhs).unwrap());
        assert!(!equals_mod_casimir(&x(), &d()).unwrap());
        // but N and (X² − D² − 1)/2 differ in the algebra itself
        assert_ne!(n(), rhs);
    }

    #[test]
    fn split_shape() {
        let e = &(&d().pow(3).unwrap() * &n()) + &x();
        let (f0, f1) = e.casimir_reduce().unwrap().split();
        assert!(f0.terms().all(|(e, _)| e[1] == 0));
        assert!(f1.terms().all(|(e, _)| e[1] == 1));
    }

    #[test]
    fn budget_is_enforced() {
        let big = &x().pow(6).unwrap() + &n();
        let err = d()
            .pow(6)
            .unwrap()
            .product_with(&big, &mut Rewriter::with_budget(Basis::Differential, 10));
        assert_eq!(err, Err(UeaError::BudgetExceeded(10)));
    }

    #[test]
    fn printing_edge_cases() {
        assert_eq!(UeaElement::zero(Basis::Differential).to_string(), "0");
        assert_eq!((-d()).to_string(), "-D");
        assert_eq!(x().to_ladder().unwrap().to_string(), "(1/2)*s2*ad + (1/2)*s2*a");
        let z = x().scale(&(Scalar::one() + Scalar::i()));
        assert_eq!(z.to_string(), "(1 + i)*X");
        assert_eq!((&(&ad() * &nl()) * &a()).to_string(), "ad*N*a");
    }
}
