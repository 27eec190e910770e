use std::fmt;

use super::{Coeff, Poly, Rational, Var};
use crate::error::Result;

/// Name of the distinguished infinitesimal.
pub const EPSILON: &str = "eps";

/// Polynomials with `eps^2 = 0`: every product discards monomials of
/// `eps`-degree two or more.
#[derive(Clone, PartialEq, Eq, Default, Hash)]
pub struct FirstOrder(Poly);

impl FirstOrder {
    pub fn epsilon() -> Var {
        Var::new(EPSILON)
    }

    pub fn new(p: Poly) -> Self {
        FirstOrder(p.truncate_in(Self::epsilon(), 1))
    }

    pub fn as_poly(&self) -> &Poly {
        &self.0
    }

    /// The `eps^0` part.
    pub fn value_part(&self) -> Poly {
        self.0.coefficient_of_power(Self::epsilon(), 0)
    }

    /// The coefficient of `eps`.
    pub fn linear_part(&self) -> Poly {
        self.0.coefficient_of_power(Self::epsilon(), 1)
    }
}

impl fmt::Display for FirstOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::Debug for FirstOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl Coeff for FirstOrder {
    fn zero() -> Self {
        FirstOrder(Poly::zero())
    }

    fn one() -> Self {
        FirstOrder(Poly::one())
    }

    fn from_rational(r: &Rational) -> Self {
        FirstOrder(Poly::from_rational(r))
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn add(&self, rhs: &Self) -> Self {
        FirstOrder(self.0.add(&rhs.0))
    }

    fn add_assign(&mut self, rhs: &Self) {
        self.0.add_assign(&rhs.0);
    }

    fn sub(&self, rhs: &Self) -> Self {
        FirstOrder(self.0.sub(&rhs.0))
    }

    fn mul(&self, rhs: &Self) -> Self {
        FirstOrder(self.0.mul(&rhs.0).truncate_in(Self::epsilon(), 1))
    }

    fn neg(&self) -> Self {
        FirstOrder(self.0.neg())
    }

    /// `(a + eps*b)^-1 = a^-1 - eps*b*a^-2` when `a` is a nonzero constant.
    fn inverse(&self) -> Option<Self> {
        let a_inv = self.value_part().inverse()?;
        let b = self.linear_part();
        let eps = Poly::var(EPSILON);
        Some(FirstOrder(
            a_inv.sub(&eps.mul(&b).mul(&a_inv).mul(&a_inv)),
        ))
    }

    fn parse(s: &str) -> Result<Self> {
        Ok(FirstOrder::new(s.parse()?))
    }
}
