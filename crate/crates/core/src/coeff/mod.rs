//! Exact coefficient rings.
//!
//! Every higher module is generic over [`Coeff`], a commutative ring with
//! unit. Three rings are provided: [`Rational`] (the ground field),
//! [`Poly`] (commutative polynomials over the rationals in named
//! indeterminates) and [`FirstOrder`] (polynomials with a distinguished
//! variable `eps` truncated at `eps^2`).

mod first_order;
mod poly;
mod rational;

use std::fmt;

pub use first_order::{FirstOrder, EPSILON};
pub use poly::{Homogeneity, Monomial, Poly, Var};
pub use rational::Rational;

use crate::error::Result;

/// Commutative ring contract shared by all coefficient types.
pub trait Coeff: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_rational(r: &Rational) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse, if it exists in the ring.
    fn inverse(&self) -> Option<Self>;
    /// Parses the textual form produced by `Display`.
    fn parse(s: &str) -> Result<Self>;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&Rational::from(n))
    }

    fn add_assign(&mut self, rhs: &Self) {
        *self = Coeff::add(self, rhs);
    }

    fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Integer power allowing negative exponents for invertible elements.
    fn powi(&self, exp: i64) -> Option<Self> {
        if exp >= 0 {
            Some(self.pow(exp as u32))
        } else {
            self.inverse().map(|inv| inv.pow((-exp) as u32))
        }
    }
}

/// Product of a sequence of ring elements; the empty product is one.
pub fn product<'a, R: Coeff, I: IntoIterator<Item = &'a R>>(items: I) -> R {
    items.into_iter().fold(R::one(), |acc, x| acc.mul(x))
}
