//! The shuffle Hopf algebra with deconcatenation: characters, their
//! convolution, and the classical logarithm and exponential series.

use std::collections::BTreeMap;
use std::fmt;

use crate::coeff::{Coeff, Rational};
use crate::error::{Error, Result};
use crate::flowlog::{ConvolutionGroup, Graded};
use crate::random::SeriesSampler;
use crate::series::{Constant, Series};
use crate::words::{Alphabet, Word};

/// A finite rational combination of words.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ShuffleElem {
    terms: BTreeMap<Word, Rational>,
}

impl ShuffleElem {
    pub fn new() -> Self {
        ShuffleElem::default()
    }

    pub fn word(w: Word) -> Self {
        let mut e = ShuffleElem::new();
        e.add_term(w, Rational::one());
        e
    }

    pub fn add_term(&mut self, w: Word, c: Rational) {
        let v = &self.coefficient(&w) + &c;
        if v.is_zero() {
            self.terms.remove(&w);
        } else {
            self.terms.insert(w, v);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: &Word) -> Rational {
        self.terms.get(w).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Pairing `⟨f, self⟩` with a functional.
    pub fn evaluate<R: Coeff>(&self, f: &Series<R>) -> R {
        self.terms
            .iter()
            .fold(R::zero(), |acc, (w, c)| acc.add(&f.get(w).mul(&R::from_rational(c))))
    }
}

impl fmt::Display for ShuffleElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if c.is_one() {
                write!(f, "({w})")?;
            } else {
                write!(f, "{c}*({w})")?;
            }
        }
        Ok(())
    }
}

fn interleave(u: &[u32], v: &[u32], prefix: &mut Vec<u32>, out: &mut ShuffleElem) {
    if u.is_empty() || v.is_empty() {
        let mut w = prefix.clone();
        w.extend_from_slice(u);
        w.extend_from_slice(v);
        out.add_term(Word::new(w), Rational::one());
        return;
    }
    prefix.push(u[0]);
    interleave(&u[1..], v, prefix, out);
    prefix.pop();
    prefix.push(v[0]);
    interleave(u, &v[1..], prefix, out);
    prefix.pop();
}

/// `u ш v`, with multiplicities.
pub fn shuffle_mul(alphabet: &Alphabet, max_deg: usize, u: &Word, v: &Word) -> Result<ShuffleElem> {
    let degree = alphabet.degree(u)? + alphabet.degree(v)?;
    if degree > max_deg {
        return Err(Error::Truncation {
            word: u.concat(v).to_string(),
            degree,
            max_deg,
        });
    }
    let mut out = ShuffleElem::new();
    interleave(u.letters(), v.letters(), &mut Vec::new(), &mut out);
    Ok(out)
}

/// `(f * g)(w) = Σ_{w = uv} f(u) g(v)`.
pub fn char_convolve_word<R: Coeff>(f: &Series<R>, g: &Series<R>, w: &Word) -> R {
    w.deconcatenations()
        .fold(R::zero(), |acc, (u, v)| acc.add(&f.get(&u).mul(&g.get(&v))))
}

/// Convolution of two functionals; the output constant is the product of the constants.
pub fn char_convolve<R: Coeff>(f: &Series<R>, g: &Series<R>) -> Result<Series<R>> {
    let max_deg = f.compatible_alphabet(g)?;
    let constant = match (f.constant(), g.constant()) {
        (Constant::One, Constant::One) => Constant::One,
        _ => Constant::Zero,
    };
    let alphabet = f.alphabet();
    let words = alphabet.enumerate_words(max_deg);
    let values = crate::par::map(&words, |w| char_convolve_word(f, g, w));
    let mut out = Series::zero(alphabet, max_deg, constant);
    for (w, v) in words.into_iter().zip(values) {
        out.set_unchecked(w, v);
    }
    Ok(out)
}

/// The counit `ε`.
pub fn counit<R: Coeff>(alphabet: &Alphabet, max_deg: usize) -> Series<R> {
    Series::zero(alphabet, max_deg, Constant::One)
}

/// `Σ_{k≥1} (-1)^{k+1}/k (f - ε)^{*k}` for a unital functional.
pub fn hopf_log<R: Coeff>(f: &Series<R>) -> Result<Series<R>> {
    if f.constant() != Constant::One {
        return Err(Error::Invalid("the logarithm needs a unital functional".into()));
    }
    let nilpotent = f.clone().with_constant(Constant::Zero);
    let mut power = nilpotent.clone();
    let mut out = Series::zero(f.alphabet(), f.max_deg(), Constant::Zero);
    for k in 1..=f.max_deg() as i64 {
        let c = R::from_rational(&Rational::new(if k % 2 == 1 { 1 } else { -1 }, k)?);
        out = out.add(&power.map(|_, v| v.mul(&c)))?;
        power = char_convolve(&power, &nilpotent)?;
    }
    Ok(out)
}

/// `Σ_{k≥0} ξ^{*k}/k!` for a functional vanishing on the empty word.
pub fn hopf_exp<R: Coeff>(xi: &Series<R>) -> Result<Series<R>> {
    if xi.constant() != Constant::Zero {
        return Err(Error::Invalid("the exponential needs a functional vanishing on the empty word".into()));
    }
    let mut out = counit(xi.alphabet(), xi.max_deg());
    let mut power = xi.clone();
    let mut factorial = Rational::one();
    for k in 1..=xi.max_deg() as i64 {
        factorial = &factorial * &Rational::from(k);
        let c = R::from_rational(&factorial.recip()?);
        out = out.add(&power.map(|_, v| v.mul(&c)).with_constant(Constant::One))?;
        power = char_convolve(&power, xi)?;
    }
    Ok(out)
}

/// Whether `f(u ш v) = f(u) f(v)` for every pair in range, and `f(∅) = 1`.
pub fn is_character<R: Coeff>(f: &Series<R>) -> bool {
    f.constant() == Constant::One && shuffle_defect(f, |fu, fv| fu.mul(fv))
}

/// Whether `ξ(u ш v) = 0` for all nonempty `u`, `v` in range, and `ξ(∅) = 0`.
pub fn is_infinitesimal_character<R: Coeff>(xi: &Series<R>) -> bool {
    xi.constant() == Constant::Zero && shuffle_defect(xi, |_, _| R::zero())
}

fn shuffle_defect<R: Coeff>(f: &Series<R>, expected: impl Fn(&R, &R) -> R) -> bool {
    let alphabet = f.alphabet();
    let words = alphabet.enumerate_words(f.max_deg());
    words.iter().all(|u| {
        words.iter().all(|v| match shuffle_mul(alphabet, f.max_deg(), u, v) {
            Ok(sh) => sh.evaluate(f) == expected(&f.get(u), &f.get(v)),
            Err(_) => true,
        })
    })
}

/// The group-like character `w ↦ ∏ a_{w_i} / |w|!`, the exponential of the
/// infinitesimal character supported on letters with values `a`.
pub fn letter_character(alphabet: &Alphabet, max_deg: usize, a: &[Rational]) -> Result<Series<Rational>> {
    if a.len() != alphabet.size() {
        return Err(Error::Mismatch(format!(
            "{} letter values for an alphabet of size {}",
            a.len(),
            alphabet.size()
        )));
    }
    Ok(Series::filled(alphabet, max_deg, Constant::One, |w| {
        let mut c = Rational::one();
        for (k, &l) in w.letters().iter().enumerate() {
            c = &c * &a[l as usize - 1];
            c = c.checked_div(&Rational::from(k as i64 + 1)).expect("nonzero");
        }
        c
    }))
}

/// Product of `factors` random letter characters; noncommutative for `s ≥ 2`.
pub fn random_character(
    sampler: &mut SeriesSampler,
    alphabet: &Alphabet,
    max_deg: usize,
    factors: usize,
) -> Result<Series<Rational>> {
    let mut out = counit(alphabet, max_deg);
    for _ in 0..factors {
        let a: Vec<Rational> = (0..alphabet.size()).map(|_| sampler.rational()).collect();
        out = char_convolve(&out, &letter_character(alphabet, max_deg, &a)?)?;
    }
    Ok(out)
}

/// The character group under convolution, graded by degree.
#[derive(Clone, Copy, Debug, Default)]
pub struct ShuffleGroup;

impl Graded for ShuffleGroup {
    fn name(&self) -> String {
        "shuffle".into()
    }

    fn sigma(&self, alphabet: &Alphabet, w: &Word) -> usize {
        alphabet.degree(w).unwrap_or(0)
    }
}

impl<R: Coeff> ConvolutionGroup<R> for ShuffleGroup {

    fn unit(&self, alphabet: &Alphabet, max_deg: usize) -> Series<R> {
        counit(alphabet, max_deg)
    }

    fn multiply(&self, f: &Series<R>, g: &Series<R>) -> Result<Series<R>> {
        char_convolve(f, g)
    }

    fn invert(&self, f: &Series<R>) -> Result<Series<R>> {
        // g(w) = -Σ_{w = uv, u ≠ ∅} f(u) g(v), solved by increasing length
        let alphabet = f.alphabet();
        let mut words = alphabet.enumerate_words(f.max_deg());
        words.sort_by_key(|w| w.len());
        let mut g = counit(alphabet, f.max_deg());
        for w in words {
            let v = w
                .deconcatenations()
                .filter(|(u, _)| !u.is_empty())
                .fold(R::zero(), |acc, (u, rest)| acc.add(&f.get(&u).mul(&g.get(&rest))));
            g.set_unchecked(w, v.neg());
        }
        Ok(g)
    }

    fn check_member(&self, f: &Series<R>) -> Result<()> {
        if f.constant() != Constant::One {
            return Err(Error::Mismatch("characters take the value 1 on the empty word".into()));
        }
        Ok(())
    }
}
