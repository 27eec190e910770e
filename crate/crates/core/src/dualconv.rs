//! Labelled convolutions `f ⋆_• g = (f • g) ∘ Δ` for the additive coproduct
//! `Δ_a(x_i) = x_i + y_i`, the multiplicative coproduct `Δ_m(x_i) = x_i y_i`
//! and graded deformations `Δ_h(x_i) = x_i + y_i + Σ α_u (mixed legs of u)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

use once_cell::sync::Lazy;

use crate::coeff::{Coeff, Monomial, Poly, Rational};
use crate::error::{Error, Result};
use crate::ncpart::catalan;
use crate::par;
use crate::series::{symbol, Constant, Series};
use crate::uniprod::{ProductEvaluator, ProductKind};
use crate::words::{Alphabet, FreeMonomial, Leg, Word};

/// Deformation terms of a graded coproduct: for letter `i`, pairs `(u, α_u)`
/// with `deg(u) = deg(x_i)` and `|u| ≥ 2`. Each contributes `α_u` times the
/// sum over all mixed leg assignments of `u`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Deformation {
    terms: BTreeMap<u32, Vec<(Word, Rational)>>,
}

impl Deformation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_term(mut self, alphabet: &Alphabet, letter: u32, u: Word, alpha: Rational) -> Result<Self> {
        let target = alphabet.weight(letter)? as usize;
        let degree = alphabet.degree(&u)?;
        if degree != target {
            return Err(Error::Invalid(format!(
                "deformation word '{u}' has degree {degree}, letter {letter} has degree {target}"
            )));
        }
        if u.len() < 2 {
            return Err(Error::Invalid(format!("deformation word '{u}' must have length at least 2")));
        }
        self.terms.entry(letter).or_default().push((u, alpha));
        Ok(self)
    }

    pub fn is_trivial(&self) -> bool {
        self.terms.values().flatten().all(|(_, a)| a.is_zero())
    }

    fn for_letter(&self, letter: u32) -> &[(Word, Rational)] {
        self.terms.get(&letter).map_or(&[], Vec::as_slice)
    }
}

/// Which dual-group coproduct drives the convolution.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum DualGroupSpec {
    Additive,
    Multiplicative,
    Graded(Deformation),
}

impl DualGroupSpec {
    /// The constant term of the series the convolution acts on.
    pub fn constant(&self) -> Constant {
        match self {
            DualGroupSpec::Multiplicative => Constant::One,
            _ => Constant::Zero,
        }
    }

    pub fn is_additive(&self) -> bool {
        !matches!(self, DualGroupSpec::Multiplicative)
    }

    pub fn name(&self) -> &'static str {
        match self {
            DualGroupSpec::Additive => "additive",
            DualGroupSpec::Multiplicative => "multiplicative",
            DualGroupSpec::Graded(_) => "graded",
        }
    }
}

impl fmt::Display for DualGroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `Δ(w)` as a combination of normalized free monomials.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CoproductExpansion {
    pub word: Word,
    pub terms: Vec<(FreeMonomial, Rational)>,
}

type LetterImage = Vec<(Vec<(Leg, u32)>, Rational)>;

fn letter_image(spec: &DualGroupSpec, letter: u32) -> LetterImage {
    let mut image = match spec {
        DualGroupSpec::Multiplicative => {
            return vec![(vec![(Leg::One, letter), (Leg::Two, letter)], Rational::one())]
        }
        _ => vec![
            (vec![(Leg::One, letter)], Rational::one()),
            (vec![(Leg::Two, letter)], Rational::one()),
        ],
    };
    if let DualGroupSpec::Graded(def) = spec {
        for (u, alpha) in def.for_letter(letter) {
            if alpha.is_zero() {
                continue;
            }
            let n = u.len();
            // masks 1..2^n-2 are exactly the mixed assignments
            for mask in 1..(1u64 << n) - 1 {
                let seq = u
                    .letters()
                    .iter()
                    .enumerate()
                    .map(|(k, &l)| (if mask >> k & 1 == 1 { Leg::Two } else { Leg::One }, l))
                    .collect();
                image.push((seq, alpha.clone()));
            }
        }
    }
    image
}

static ADDITIVE_CACHE: Lazy<RwLock<HashMap<Word, Arc<CoproductExpansion>>>> = Lazy::new(Default::default);

/// Expands `Δ(x_{i_1}) ... Δ(x_{i_m})` into normalized monomials.
pub fn coproduct(spec: &DualGroupSpec, alphabet: &Alphabet, w: &Word) -> Result<Arc<CoproductExpansion>> {
    alphabet.check(w)?;
    if w.is_empty() {
        return Err(Error::Invalid("the coproduct is only expanded on nonempty words".into()));
    }
    if *spec == DualGroupSpec::Additive {
        if let Some(e) = ADDITIVE_CACHE.read().unwrap().get(w) {
            return Ok(e.clone());
        }
    }
    let mut partial: Vec<(Vec<(Leg, u32)>, Rational)> = vec![(Vec::new(), Rational::one())];
    for &l in w.letters() {
        let image = letter_image(spec, l);
        let mut next = Vec::with_capacity(partial.len() * image.len());
        for (seq, c) in &partial {
            for (piece, a) in &image {
                let mut s = seq.clone();
                s.extend_from_slice(piece);
                next.push((s, c * a));
            }
        }
        partial = next;
    }
    let mut combined: BTreeMap<FreeMonomial, Rational> = BTreeMap::new();
    for (seq, c) in partial {
        let m = FreeMonomial::from_letters(seq)?;
        let e = combined.entry(m).or_insert_with(Rational::zero);
        *e = &*e + &c;
    }
    let expansion = Arc::new(CoproductExpansion {
        word: w.clone(),
        terms: combined.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
    });
    if *spec == DualGroupSpec::Additive {
        ADDITIVE_CACHE.write().unwrap().insert(w.clone(), expansion.clone());
    }
    Ok(expansion)
}

fn check_operands<R: Coeff>(spec: &DualGroupSpec, f: &Series<R>, g: &Series<R>) -> Result<usize> {
    let d = f.compatible(g)?;
    if f.constant() != spec.constant() {
        return Err(Error::Mismatch(format!(
            "{} convolution needs series with constant {}",
            spec.name(),
            match spec.constant() {
                Constant::Zero => "0",
                Constant::One => "1",
            }
        )));
    }
    Ok(d)
}

/// `(f ⋆ g)_w` for one word.
pub fn convolve_word<R: Coeff>(
    kind: ProductKind,
    spec: &DualGroupSpec,
    f: &Series<R>,
    g: &Series<R>,
    w: &Word,
) -> Result<R> {
    let expansion = coproduct(spec, f.alphabet(), w)?;
    let mut eval = ProductEvaluator::new(kind, f, g);
    let mut acc = R::zero();
    for (m, c) in &expansion.terms {
        let v = eval.eval(m)?;
        if v.is_zero() {
            continue;
        }
        acc.add_assign(&if c.is_one() { v } else { v.mul(&R::from_rational(c)) });
    }
    Ok(acc)
}

/// The labelled convolution of two series; words are evaluated in parallel.
pub fn convolve<R: Coeff>(kind: ProductKind, spec: &DualGroupSpec, f: &Series<R>, g: &Series<R>) -> Result<Series<R>> {
    let max_deg = check_operands(spec, f, g)?;
    let words = f.alphabet().enumerate_words(max_deg);
    let values = par::try_map(&words, |w| convolve_word(kind, spec, f, g, w))?;
    let mut out = Series::zero(f.alphabet(), max_deg, spec.constant());
    for (w, v) in words.into_iter().zip(values) {
        out.set_unchecked(w, v);
    }
    Ok(out)
}

/// `⊞_V`: free product through the additive coproduct.
pub fn boxplus_v<R: Coeff>(f: &Series<R>, g: &Series<R>) -> Result<Series<R>> {
    convolve(ProductKind::Free, &DualGroupSpec::Additive, f, g)
}

/// `⊠_V`: free product through the multiplicative coproduct.
pub fn boxtimes_v<R: Coeff>(f: &Series<R>, g: &Series<R>) -> Result<Series<R>> {
    convolve(ProductKind::Free, &DualGroupSpec::Multiplicative, f, g)
}

/// Words grouped by weighted degree, lowest first.
pub(crate) fn degree_levels(alphabet: &Alphabet, max_deg: usize) -> Vec<Vec<Word>> {
    let mut levels = vec![Vec::new(); max_deg];
    for w in alphabet.enumerate_words(max_deg) {
        let d = alphabet.degree(&w).expect("enumerated word");
        levels[d - 1].push(w);
    }
    levels
}

/// Inverse in one of the additive groups: solves `f ⋆ g = 0` degree by degree.
/// The law has the shape `X_w + Y_w + (terms of lower degree)`.
pub fn additive_inverse<R: Coeff>(kind: ProductKind, spec: &DualGroupSpec, f: &Series<R>) -> Result<Series<R>> {
    if !spec.is_additive() {
        return Err(Error::Invalid("additive_inverse needs an additive or graded coproduct".into()));
    }
    check_operands(spec, f, f)?;
    let mut g = Series::zero(f.alphabet(), f.max_deg(), Constant::Zero);
    for level in degree_levels(f.alphabet(), f.max_deg()) {
        let values = par::try_map(&level, |w| convolve_word(kind, spec, f, &g, w))?;
        for (w, v) in level.into_iter().zip(values) {
            g.set_unchecked(w, v.neg());
        }
    }
    Ok(g)
}

/// Inverse for `⊠_V` on `𝔊ˢ`, solved degree by degree from
/// `(f ⊠_V g)_w = f_{i_1}⋯f_{i_m} g_w + (terms without g_w)`.
pub fn boxtimes_v_inverse<R: Coeff>(f: &Series<R>) -> Result<Series<R>> {
    let spec = DualGroupSpec::Multiplicative;
    check_operands(&spec, f, f)?;
    let alphabet = f.alphabet();
    let mut letter_inv = Vec::with_capacity(alphabet.size());
    for i in 1..=alphabet.size() as u32 {
        let w = Word::letter(i);
        let inv = f
            .get(&w)
            .inverse()
            .ok_or_else(|| Error::NotInvertible(w.to_string()))?;
        letter_inv.push(inv);
    }
    let mut g = Series::zero(alphabet, f.max_deg(), Constant::One);
    for level in degree_levels(alphabet, f.max_deg()) {
        let values = par::try_map(&level, |w| {
            let v = convolve_word(ProductKind::Free, &spec, f, &g, w)?;
            let scale = w
                .letters()
                .iter()
                .fold(R::one(), |acc, &l| acc.mul(&letter_inv[l as usize - 1]));
            Ok::<R, Error>(R::one().sub(&v).mul(&scale))
        })?;
        for (w, v) in level.into_iter().zip(values) {
            g.set_unchecked(w, v);
        }
    }
    Ok(g)
}

/// Group inverse for every convolution that forms a group: the additive and
/// graded flavours of all five products, `⊠_V`, and the componentwise
/// tensor product on series with all coefficients invertible.
pub fn convolution_inverse<R: Coeff>(kind: ProductKind, spec: &DualGroupSpec, f: &Series<R>) -> Result<Series<R>> {
    match (spec, kind) {
        (DualGroupSpec::Multiplicative, ProductKind::Free) => boxtimes_v_inverse(f),
        (DualGroupSpec::Multiplicative, ProductKind::Tensor) => {
            check_operands(spec, f, f)?;
            let mut g = Series::zero(f.alphabet(), f.max_deg(), Constant::One);
            for w in f.words() {
                let inv = f.get(&w).inverse().ok_or_else(|| Error::NotInvertible(w.to_string()))?;
                g.set_unchecked(w, inv);
            }
            Ok(g)
        }
        (DualGroupSpec::Multiplicative, _) => Err(Error::Unsupported(format!(
            "the multiplicative {kind} convolution is not a group"
        ))),
        _ => additive_inverse(kind, spec, f),
    }
}

/// The universal polynomial `F_w(X, Y)`: the convolution evaluated on the
/// generic series `f_u = X:u`, `g_u = Y:u`.
pub fn group_law(kind: ProductKind, spec: &DualGroupSpec, alphabet: &Alphabet, w: &Word) -> Result<Poly> {
    let d = alphabet.degree(w)?.max(1);
    let f = Series::symbolic(alphabet, d, "X", spec.constant());
    let g = Series::symbolic(alphabet, d, "Y", spec.constant());
    convolve_word(kind, spec, &f, &g, w)
}

/// Coefficients of the three distinguished monomials of `(f ⊠_V g)_w`.
#[derive(Clone, Debug, PartialEq)]
pub struct DecompositionReport {
    pub word: Word,
    /// Coefficient of `X_w Y_{i_1}⋯Y_{i_m}` (monotone part), expected 1.
    pub monotone: Rational,
    /// Coefficient of `X_{i_1}⋯X_{i_m} Y_w` (anti-monotone part), expected 1.
    pub antimonotone: Rational,
    /// Coefficient of `X_{i_1}⋯X_{i_m} Y_{i_1}⋯Y_{i_m}` (boolean part).
    pub boolean: Rational,
    /// `(-1)^{|w|-1} C_{|w|-1}`.
    pub expected_boolean: Rational,
    /// Everything else in the law.
    pub residual: Poly,
}

impl DecompositionReport {
    pub fn passed(&self) -> bool {
        self.monotone.is_one() && self.antimonotone.is_one() && self.boolean == self.expected_boolean
    }
}

/// Reads off the canonical decomposition of the multiplicative free law at `w`.
pub fn verify_decomposition(alphabet: &Alphabet, w: &Word) -> Result<DecompositionReport> {
    if w.is_empty() {
        return Err(Error::Invalid("decomposition needs a nonempty word".into()));
    }
    let law = group_law(ProductKind::Free, &DualGroupSpec::Multiplicative, alphabet, w)?;
    let letters = |prefix: &str| -> Vec<(String, u32)> {
        w.letters().iter().map(|&l| (symbol(prefix, &Word::letter(l)), 1)).collect()
    };
    let mono = |parts: Vec<(String, u32)>| Monomial::from_names(parts.iter().map(|(n, e)| (n.as_str(), *e)));
    let mut m_mono = letters("Y");
    m_mono.push((symbol("X", w), 1));
    let mut am_mono = letters("X");
    am_mono.push((symbol("Y", w), 1));
    let mut b_mono = letters("X");
    b_mono.extend(letters("Y"));
    let (m_mono, am_mono, b_mono) = (mono(m_mono), mono(am_mono), mono(b_mono));

    let mut residual = law.clone();
    for m in [&m_mono, &am_mono, &b_mono] {
        let c = residual.coefficient(m);
        residual = residual.sub(&Poly::term(c, m.clone()));
    }
    let n = w.len();
    let sign = if n % 2 == 1 { 1 } else { -1 };
    Ok(DecompositionReport {
        word: w.clone(),
        monotone: law.coefficient(&m_mono),
        antimonotone: law.coefficient(&am_mono),
        boolean: law.coefficient(&b_mono),
        expected_boolean: Rational::from(sign * catalan(n - 1) as i64),
        residual,
    })
}
