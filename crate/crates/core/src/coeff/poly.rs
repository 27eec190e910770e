use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

use once_cell::sync::Lazy;
use smallvec::SmallVec;

use super::{Coeff, Rational};
use crate::error::{Error, Result};

#[derive(Default)]
struct Interner {
    names: Vec<Arc<str>>,
    ids: HashMap<Arc<str>, u32>,
}

static INTERNER: Lazy<RwLock<Interner>> = Lazy::new(Default::default);

/// An interned indeterminate. Ids are process-local; ordering by id is only
/// used internally, every textual form sorts by name.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(u32);

impl Var {
    pub fn new(name: &str) -> Var {
        if let Some(&id) = INTERNER.read().unwrap().ids.get(name) {
            return Var(id);
        }
        let mut table = INTERNER.write().unwrap();
        if let Some(&id) = table.ids.get(name) {
            return Var(id);
        }
        let id = table.names.len() as u32;
        let name: Arc<str> = Arc::from(name);
        table.names.push(name.clone());
        table.ids.insert(name, id);
        Var(id)
    }

    pub fn name(&self) -> Arc<str> {
        INTERNER.read().unwrap().names[self.0 as usize].clone()
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Power product of variables, sorted by variable id, no zero exponents.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Debug)]
pub struct Monomial(SmallVec<[(Var, u32); 6]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var(v: Var) -> Self {
        let mut m = SmallVec::new();
        m.push((v, 1));
        Monomial(m)
    }

    /// Builds a monomial from named factors; repeated names accumulate.
    pub fn from_names<'a, I: IntoIterator<Item = (&'a str, u32)>>(factors: I) -> Self {
        factors
            .into_iter()
            .filter(|&(_, e)| e > 0)
            .fold(Monomial::one(), |acc, (name, e)| {
                acc.mul(&Monomial(SmallVec::from_elem((Var::new(name), e), 1)))
            })
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> impl Iterator<Item = (Var, u32)> + '_ {
        self.0.iter().copied()
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0
            .iter()
            .find(|&&(w, _)| w == v)
            .map_or(0, |&(_, e)| e)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn mul(&self, rhs: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &rhs.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// The monomial with `v` removed.
    fn without(&self, v: Var) -> Monomial {
        Monomial(self.0.iter().copied().filter(|&(w, _)| w != v).collect())
    }

    /// Factors as `(name, exponent)`, sorted by name.
    pub fn named_factors(&self) -> Vec<(Arc<str>, u32)> {
        let mut named: Vec<_> = self.0.iter().map(|&(v, e)| (v.name(), e)).collect();
        named.sort();
        named
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        for (k, (name, e)) in self.named_factors().into_iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            if e == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Result of a weighted-degree query.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Homogeneity {
    /// Every monomial has this weighted degree. The zero polynomial reports `Zero`.
    Homogeneous(u64),
    Zero,
    Inhomogeneous,
}

/// Sparse commutative polynomial with rational coefficients.
#[derive(Clone, PartialEq, Eq, Default, Hash)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn constant(c: Rational) -> Poly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        Poly { terms }
    }

    pub fn var(name: &str) -> Poly {
        Poly::term(Rational::one(), Monomial::var(Var::new(name)))
    }

    pub fn term(c: Rational, m: Monomial) -> Poly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// Coefficient of a monomial (zero if absent).
    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Variable names that occur, sorted lexicographically.
    pub fn variables(&self) -> Vec<Arc<str>> {
        let mut names: Vec<Arc<str>> = self
            .terms
            .keys()
            .flat_map(|m| m.factors().map(|(v, _)| v.name()))
            .collect();
        names.sort();
        names.dedup();
        names
    }

    fn insert_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    fn mul_term(&self, c: &Rational, m: &Monomial) -> Poly {
        // multiplication by a monomial is injective on monomials
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(mm, cc)| (mm.mul(m), cc * c))
                .collect(),
        }
    }

    /// Weighted degree with respect to per-variable weights. Variables
    /// without a weight make the query fail.
    pub fn weighted_degree<F>(&self, weight: F) -> Result<Homogeneity>
    where
        F: Fn(&str) -> Option<u64>,
    {
        let mut found: Option<u64> = None;
        for m in self.terms.keys() {
            let mut d = 0u64;
            for (v, e) in m.factors() {
                let name = v.name();
                let w = weight(&name)
                    .ok_or_else(|| Error::Invalid(format!("no weight for variable '{name}'")))?;
                d += w * u64::from(e);
            }
            match found {
                None => found = Some(d),
                Some(prev) if prev != d => return Ok(Homogeneity::Inhomogeneous),
                _ => {}
            }
        }
        Ok(found.map_or(Homogeneity::Zero, Homogeneity::Homogeneous))
    }

    /// Degree in a single variable; zero for the zero polynomial.
    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    /// The coefficient of `v^k`, as a polynomial in the remaining variables.
    pub fn coefficient_of_power(&self, v: Var, k: u32) -> Poly {
        let mut out = Poly::default();
        for (m, c) in &self.terms {
            if m.exponent(v) == k {
                out.insert_term(m.without(v), c.clone());
            }
        }
        out
    }

    /// Drops every monomial whose degree in `v` exceeds `max`.
    pub fn truncate_in(&self, v: Var, max: u32) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.exponent(v) <= max)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Substitutes variables by name; unmapped variables are kept.
    pub fn rename<F>(&self, map: F) -> Poly
    where
        F: Fn(&str) -> Option<String>,
    {
        let mut out = Poly::default();
        for (m, c) in &self.terms {
            let factors: Vec<(String, u32)> = m
                .factors()
                .map(|(v, e)| {
                    let name = v.name();
                    (map(&name).unwrap_or_else(|| name.to_string()), e)
                })
                .collect();
            let mm = Monomial::from_names(factors.iter().map(|(n, e)| (n.as_str(), *e)));
            out.insert_term(mm, c.clone());
        }
        out
    }

    /// Evaluates the polynomial at rational values of its variables.
    pub fn evaluate<F>(&self, value: F) -> Result<Rational>
    where
        F: Fn(&str) -> Option<Rational>,
    {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m.factors() {
                let name = v.name();
                let x = value(&name)
                    .ok_or_else(|| Error::Invalid(format!("no value for variable '{name}'")))?;
                t = &t * &x.pow(e);
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    fn sorted_terms(&self) -> Vec<(String, u32, &Rational)> {
        let mut out: Vec<_> = self
            .terms
            .iter()
            .map(|(m, c)| (m.to_string(), m.total_degree(), c))
            .collect();
        out.sort_by(|a, b| (a.1, &a.0).cmp(&(b.1, &b.0)));
        out
    }
}

impl fmt::Display for Poly {
    /// Terms ordered by total degree then by their monomial text; factors
    /// within a monomial sorted by variable name.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (mono, _, c)) in self.sorted_terms().into_iter().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            match (k, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if mono == "1" {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                f.write_str(&mono)?;
            } else {
                write!(f, "{mag}*{mono}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl std::str::FromStr for Poly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Poly> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut out = Poly::default();
        let mut rest = s;
        let mut sign = Rational::one();
        if let Some(r) = rest.strip_prefix('-') {
            sign = -sign;
            rest = r;
        }
        loop {
            let (term, next) = match (rest.find(" + "), rest.find(" - ")) {
                (None, None) => (rest, None),
                (Some(p), None) => (&rest[..p], Some((p, false))),
                (None, Some(m)) => (&rest[..m], Some((m, true))),
                (Some(p), Some(m)) if p < m => (&rest[..p], Some((p, false))),
                (_, Some(m)) => (&rest[..m], Some((m, true))),
            };
            let (c, m) = parse_term(term)?;
            out.insert_term(m, &sign * &c);
            match next {
                None => break,
                Some((pos, neg)) => {
                    sign = if neg { -Rational::one() } else { Rational::one() };
                    rest = &rest[pos + 3..];
                }
            }
        }
        Ok(out)
    }
}

fn parse_term(term: &str) -> Result<(Rational, Monomial)> {
    let term = term.trim();
    if term.is_empty() {
        return Err(Error::Parse("empty term".into()));
    }
    let mut coeff = Rational::one();
    let mut factors: Vec<(&str, u32)> = Vec::new();
    for (k, factor) in term.split('*').enumerate() {
        let starts_numeric = factor.starts_with(|c: char| c.is_ascii_digit());
        if k == 0 && starts_numeric {
            coeff = factor.parse()?;
            continue;
        }
        if factor.is_empty() || starts_numeric || factor.contains(' ') {
            return Err(Error::Parse(format!("bad factor '{factor}' in '{term}'")));
        }
        match factor.rsplit_once('^') {
            Some((name, e)) => {
                let e: u32 = e
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad exponent in '{factor}'")))?;
                factors.push((name, e));
            }
            None => factors.push((factor, 1)),
        }
    }
    Ok((coeff, Monomial::from_names(factors)))
}

impl Coeff for Poly {
    fn zero() -> Self {
        Poly::default()
    }

    fn one() -> Self {
        Poly::constant(Rational::one())
    }

    fn from_rational(r: &Rational) -> Self {
        Poly::constant(r.clone())
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(rhs);
        out
    }

    fn add_assign(&mut self, rhs: &Self) {
        for (m, c) in &rhs.terms {
            self.insert_term(m.clone(), c.clone());
        }
    }

    fn sub(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.insert_term(m.clone(), -c);
        }
        out
    }

    fn mul(&self, rhs: &Self) -> Self {
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            return rhs.mul_term(c, m);
        }
        if rhs.terms.len() == 1 {
            let (m, c) = rhs.terms.iter().next().unwrap();
            return self.mul_term(c, m);
        }
        let mut out = Poly::default();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.insert_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    fn neg(&self) -> Self {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    /// Only nonzero constants are units of a polynomial ring.
    fn inverse(&self) -> Option<Self> {
        match self.terms.len() {
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                if m.is_one() {
                    c.inverse().map(Poly::constant)
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    fn parse(s: &str) -> Result<Self> {
        s.parse()
    }
}
