//! Exact-arithmetic kernel for non-commutative probability.
//!
//! The crate evaluates the five universal products (tensor, free, boolean,
//! monotone, anti-monotone) on free-product monomials, builds the labelled
//! convolutions of moment series through the additive, multiplicative and
//! graded coproducts, computes the boxed convolution over non-crossing
//! partitions together with `Moeb`, the R-transform and free cumulants, and
//! maps each unipotent convolution group to its cumulant coordinates by a
//! one-parameter flow. All arithmetic is exact: coefficients live in a
//! [`coeff::Coeff`] ring (rationals, polynomials over the rationals, or
//! first-order dual numbers).

pub mod boxed;
pub mod coeff;
pub mod dualconv;
pub mod error;
pub mod flowlog;
pub mod ncpart;
pub mod par;
pub mod random;
pub mod series;
pub mod shuffle;
pub mod uniprod;
pub mod verify;
pub mod words;

pub use coeff::{Coeff, FirstOrder, Poly, Rational};
pub use error::{Error, Result};
pub use series::{Constant, GroupSet, Series, WeightProfile};
pub use uniprod::ProductKind;
pub use words::{Alphabet, FreeMonomial, Leg, Word};
