//! Truncated coefficient functionals on `k<x_1, ..., x_s>`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::coeff::{Coeff, Poly};
use crate::error::{Error, Result};
use crate::words::{Alphabet, Word};

/// Value of a series on the empty word.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Constant {
    Zero,
    One,
}

impl Constant {
    pub fn value<R: Coeff>(self) -> R {
        match self {
            Constant::Zero => R::zero(),
            Constant::One => R::one(),
        }
    }
}

/// Grading used by the scaling operators `δ_λ`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum WeightProfile {
    /// `σ_w = deg(w)`, the grading of the additive groups.
    Degree,
    /// `σ_w = |w| - 1`, the grading of the boxed group.
    LengthMinusOne,
}

impl WeightProfile {
    pub fn weight(self, alphabet: &Alphabet, w: &Word) -> usize {
        match self {
            WeightProfile::Degree => alphabet.degree(w).unwrap_or(0),
            WeightProfile::LengthMinusOne => w.len().saturating_sub(1),
        }
    }
}

/// The two groups of series with a distinguished linear part.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GroupSet {
    /// Every single-letter coefficient invertible.
    Invertible,
    /// Every single-letter coefficient equal to one.
    Unipotent,
}

/// A formal series truncated at weighted degree `max_deg`. Absent
/// coefficients are zero; zeros are never stored.
#[derive(Clone, Debug)]
pub struct Series<R> {
    alphabet: Alphabet,
    max_deg: usize,
    constant: Constant,
    coeffs: HashMap<Word, R>,
}

impl<R: Coeff> PartialEq for Series<R> {
    fn eq(&self, other: &Self) -> bool {
        self.alphabet == other.alphabet
            && self.max_deg == other.max_deg
            && self.constant == other.constant
            && self.coeffs == other.coeffs
    }
}

impl<R: Coeff> Series<R> {
    /// The series with every coefficient zero.
    pub fn zero(alphabet: &Alphabet, max_deg: usize, constant: Constant) -> Self {
        Series {
            alphabet: alphabet.clone(),
            max_deg,
            constant,
            coeffs: HashMap::new(),
        }
    }

    /// Builds a series from `(word, value)` pairs; the empty word is not allowed.
    pub fn from_coeffs<I>(alphabet: &Alphabet, max_deg: usize, constant: Constant, coeffs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Word, R)>,
    {
        let mut s = Series::zero(alphabet, max_deg, constant);
        for (w, c) in coeffs {
            s.set(w, c)?;
        }
        Ok(s)
    }

    /// `Zeta`: every nonempty coefficient one, constant zero.
    pub fn zeta(alphabet: &Alphabet, max_deg: usize) -> Self {
        Self::filled(alphabet, max_deg, Constant::Zero, |_| R::one())
    }

    /// `1̲`: every coefficient one, constant one (unit of the multiplicative convolutions).
    pub fn ones(alphabet: &Alphabet, max_deg: usize) -> Self {
        Self::filled(alphabet, max_deg, Constant::One, |_| R::one())
    }

    /// `(1̲_s, 0̲)`: single letters one, everything else zero (unit of `⊠`).
    pub fn boxed_unit(alphabet: &Alphabet, max_deg: usize) -> Self {
        Self::filled(alphabet, max_deg, Constant::Zero, |w| {
            if w.len() == 1 {
                R::one()
            } else {
                R::zero()
            }
        })
    }

    /// Series whose coefficient at every word in range is `f(w)`.
    pub fn filled<F: FnMut(&Word) -> R>(alphabet: &Alphabet, max_deg: usize, constant: Constant, mut f: F) -> Self {
        let mut s = Series::zero(alphabet, max_deg, constant);
        for w in alphabet.enumerate_words(max_deg) {
            let c = f(&w);
            if !c.is_zero() {
                s.coeffs.insert(w, c);
            }
        }
        s
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn max_deg(&self) -> usize {
        self.max_deg
    }

    pub fn constant(&self) -> Constant {
        self.constant
    }

    pub fn with_constant(mut self, constant: Constant) -> Self {
        self.constant = constant;
        self
    }

    /// Words in the truncation range, in canonical order.
    pub fn words(&self) -> Vec<Word> {
        self.alphabet.enumerate_words(self.max_deg)
    }

    /// Stored (nonzero) coefficients, in canonical word order.
    pub fn nonzero(&self) -> Vec<(&Word, &R)> {
        let mut v: Vec<_> = self.coeffs.iter().collect();
        v.sort_by(|a, b| self.alphabet.cmp_words(a.0, b.0));
        v
    }

    fn check_word(&self, w: &Word) -> Result<usize> {
        self.alphabet.check(w)?;
        let degree = self.alphabet.degree(w)?;
        if degree > self.max_deg {
            return Err(Error::Truncation {
                word: w.to_string(),
                degree,
                max_deg: self.max_deg,
            });
        }
        Ok(degree)
    }

    /// Coefficient at `w`; the empty word yields the constant.
    pub fn coefficient(&self, w: &Word) -> Result<R> {
        self.check_word(w)?;
        Ok(self.get(w))
    }

    /// Unchecked lookup for hot paths: out-of-range words read as zero.
    pub(crate) fn get(&self, w: &Word) -> R {
        if w.is_empty() {
            return self.constant.value();
        }
        self.coeffs.get(w).cloned().unwrap_or_else(R::zero)
    }

    pub(crate) fn get_ref(&self, w: &Word) -> Option<&R> {
        self.coeffs.get(w)
    }

    pub fn set(&mut self, w: Word, c: R) -> Result<()> {
        if w.is_empty() {
            return Err(Error::Invalid(
                "the empty-word coefficient is fixed by the series constant".into(),
            ));
        }
        self.check_word(&w)?;
        if c.is_zero() {
            self.coeffs.remove(&w);
        } else {
            self.coeffs.insert(w, c);
        }
        Ok(())
    }

    pub(crate) fn set_unchecked(&mut self, w: Word, c: R) {
        if c.is_zero() {
            self.coeffs.remove(&w);
        } else {
            self.coeffs.insert(w, c);
        }
    }

    /// Pointwise sum; the constants must agree.
    pub fn add(&self, other: &Series<R>) -> Result<Series<R>> {
        let max_deg = self.compatible(other)?;
        let mut out = self.truncate(max_deg);
        for (w, c) in &other.coeffs {
            if other.alphabet.degree(w)? <= max_deg {
                let v = out.get(w).add(c);
                out.set_unchecked(w.clone(), v);
            }
        }
        Ok(out)
    }

    /// Pointwise difference of the coefficient maps (constants ignored).
    pub fn sub_coeffs(&self, other: &Series<R>) -> Result<Series<R>> {
        let max_deg = self.compatible_alphabet(other)?;
        let mut out = self.truncate(max_deg).with_constant(Constant::Zero);
        for (w, c) in &other.coeffs {
            if other.alphabet.degree(w)? <= max_deg {
                let v = out.get(w).sub(c);
                out.set_unchecked(w.clone(), v);
            }
        }
        Ok(out)
    }

    pub fn map<S: Coeff, F: Fn(&Word, &R) -> S>(&self, f: F) -> Series<S> {
        let mut out = Series::zero(&self.alphabet, self.max_deg, self.constant);
        for (w, c) in &self.coeffs {
            out.set_unchecked(w.clone(), f(w, c));
        }
        out
    }

    /// Drops coefficients above `max_deg`.
    pub fn truncate(&self, max_deg: usize) -> Series<R> {
        let max_deg = max_deg.min(self.max_deg);
        Series {
            alphabet: self.alphabet.clone(),
            max_deg,
            constant: self.constant,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(w, _)| self.alphabet.degree(w).unwrap_or(usize::MAX) <= max_deg)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    /// Shared truncation degree for a binary operation; checks alphabet and constant.
    pub fn compatible(&self, other: &Series<R>) -> Result<usize> {
        let d = self.compatible_alphabet(other)?;
        if self.constant != other.constant {
            return Err(Error::Mismatch("series constants differ".into()));
        }
        Ok(d)
    }

    pub(crate) fn compatible_alphabet(&self, other: &Series<R>) -> Result<usize> {
        if self.alphabet != other.alphabet {
            return Err(Error::Mismatch(format!(
                "alphabets differ: {:?} vs {:?}",
                self.alphabet.weights(),
                other.alphabet.weights()
            )));
        }
        Ok(self.max_deg.min(other.max_deg))
    }

    /// `δ_λ`: multiplies the coefficient at `w` by `λ^{σ_w}`.
    pub fn scale(&self, lambda: &R, profile: WeightProfile) -> Result<Series<R>> {
        if lambda.inverse().is_none() {
            return Err(Error::NotInvertible(format!("scaling factor {lambda}")));
        }
        Ok(self.map(|w, c| c.mul(&lambda.pow(profile.weight(&self.alphabet, w) as u32))))
    }

    /// Membership in `𝔊ˢ` (invertible linear part) or `𝔊ˢ₊` (unit linear part).
    pub fn in_group(&self, which: GroupSet) -> bool {
        (1..=self.alphabet.size() as u32).all(|i| {
            let c = self.get(&Word::letter(i));
            match which {
                GroupSet::Invertible => c.inverse().is_some(),
                GroupSet::Unipotent => c.is_one(),
            }
        })
    }

    /// Words on which the two series differ, in canonical order.
    pub fn differences(&self, other: &Series<R>) -> Vec<Word> {
        let mut words: Vec<Word> = self
            .coeffs
            .keys()
            .chain(other.coeffs.keys())
            .filter(|w| self.get(w) != other.get(w))
            .cloned()
            .collect();
        words.sort_by(|a, b| self.alphabet.cmp_words(a, b));
        words.dedup();
        words
    }

    /// JSON object in the exchange schema, coefficients in canonical word order.
    pub fn to_json(&self) -> serde_json::Value {
        let file = SeriesFile {
            s: self.alphabet.size(),
            weights: self.alphabet.weights().to_vec(),
            max_deg: self.max_deg,
            constant: match self.constant {
                Constant::Zero => "0".into(),
                Constant::One => "1".into(),
            },
            coeffs: self
                .nonzero()
                .into_iter()
                .map(|(w, c)| (w.to_string(), serde_json::Value::String(c.to_string())))
                .collect(),
        };
        serde_json::to_value(file).expect("series serializes")
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("series serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let file: SeriesFile = serde_json::from_value(value.clone())
            .map_err(|e| Error::Parse(format!("series JSON: {e}")))?;
        if file.weights.len() != file.s {
            return Err(Error::Mismatch(format!(
                "s = {} but {} weights given",
                file.s,
                file.weights.len()
            )));
        }
        let alphabet = Alphabet::with_weights(file.weights)?;
        let constant = match file.constant.as_str() {
            "0" => Constant::Zero,
            "1" => Constant::One,
            other => return Err(Error::Parse(format!("constant must be \"0\" or \"1\", got {other:?}"))),
        };
        let mut s = Series::zero(&alphabet, file.max_deg, constant);
        for (k, v) in file.coeffs {
            let w: Word = k.parse()?;
            let text = v
                .as_str()
                .ok_or_else(|| Error::Parse(format!("coefficient for '{k}' must be a string")))?;
            s.set(w, R::parse(text)?)?;
        }
        Ok(s)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let v: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("series JSON: {e}")))?;
        Self::from_json(&v)
    }
}

impl Series<Poly> {
    /// Generic series whose coefficient at `u` is the indeterminate `<prefix>:<u>`.
    pub fn symbolic(alphabet: &Alphabet, max_deg: usize, prefix: &str, constant: Constant) -> Self {
        Self::filled(alphabet, max_deg, constant, |w| Poly::var(&symbol(prefix, w)))
    }
}

/// Canonical indeterminate name `<prefix>:<word>`.
pub fn symbol(prefix: &str, w: &Word) -> String {
    format!("{prefix}:{w}")
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SeriesFile {
    s: usize,
    weights: Vec<u32>,
    max_deg: usize,
    constant: String,
    coeffs: serde_json::Map<String, serde_json::Value>,
}
