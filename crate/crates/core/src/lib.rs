//! Hermite functions, the enveloping algebra of io(2), and the bridge between them.
//!
//! - [`hermite`]: normalized Hermite functions, derivatives, Gauss–Hermite rules.
//! - [`uea`]: exact normal-ordered algebra in the (X, D, N) and (a†, N, a) bases,
//!   with reduction modulo the Casimir.
//! - [`rep`]: exact and floating matrices of algebra elements on the number basis.
//! - [`transforms`]: number, position and momentum profiles of a function.
//! - [`expr`]: text syntax for algebra elements.
//! - [`checks`]: the invariant suite behind `opcli verify`.
//!
//! Numerics are generic over [`real::Real`]; exact coefficients live in
//! ℚ(i,√2) via [`scalar::ExactScalar`]. The aliases below fix the usual choices.
//!
//! ```
//! use hermite_io2::expr::parse_element;
//!
//! let d2 = parse_element("D^2").unwrap();
//! assert_eq!(d2.casimir_reduce().unwrap().to_string(), "X^2 - 2*N - I");
//! ```

pub mod checks;
pub mod expr;
pub mod hermite;
pub mod real;
pub mod rep;
pub mod sample;
pub mod scalar;
pub mod transforms;
pub mod uea;

pub use num_rational::BigRational;

/// Exact coefficient ring ℚ(i,√2) over arbitrary-precision rationals.
pub type Scalar = scalar::ExactScalar<BigRational>;

pub type FrameParams64 = hermite::FrameParams<f64>;
pub type QuadratureRule64 = hermite::QuadratureRule<f64>;
pub type OperatorMatrix64 = rep::OperatorMatrix<f64>;
pub type CoeffVector64 = rep::CoeffVector<f64>;
pub type FunctionSpec64 = transforms::FunctionSpec<f64>;
pub type Uncertainty64 = rep::Uncertainty<f64>;
