//! The five universal products, evaluated on free-product monomials.
//!
//! For functionals `f` (first leg) and `g` (second leg) and an alternating
//! monomial `a_1 ... a_m`:
//!
//! * tensor: `f(∏_{leg 1} a_i) g(∏_{leg 2} a_i)`
//! * boolean: `∏_{leg 1} f(a_i) ∏_{leg 2} g(a_i)`
//! * monotone: `f(∏_{leg 1} a_i) ∏_{leg 2} g(a_i)`
//! * anti-monotone: `∏_{leg 1} f(a_i) g(∏_{leg 2} a_i)`
//! * free: `Σ_{I ⊊ [m]} (-1)^{m-|I|+1} (f•g)(∏_{i∈I} a_i) ∏_{i∉I} φ_i(a_i)`,
//!   where restricted products are re-contracted before recursing.
//!
//! Products over an empty index set evaluate to the ring unit, whatever the
//! series constant; this is what makes every product satisfy the marginal
//! property.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::coeff::{Coeff, Poly};
use crate::error::{Error, Result};
use crate::series::{Constant, Series};
use crate::words::{Alphabet, FreeMonomial, Leg, Word};

/// Largest number of blocks the free recursion accepts (subset masks are `u64`).
pub const MAX_FREE_BLOCKS: usize = 24;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum ProductKind {
    Tensor,
    Free,
    Boolean,
    Monotone,
    AntiMonotone,
}

impl ProductKind {
    pub const ALL: [ProductKind; 5] = [
        ProductKind::Tensor,
        ProductKind::Free,
        ProductKind::Boolean,
        ProductKind::Monotone,
        ProductKind::AntiMonotone,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProductKind::Tensor => "tensor",
            ProductKind::Free => "free",
            ProductKind::Boolean => "boolean",
            ProductKind::Monotone => "monotone",
            ProductKind::AntiMonotone => "antimonotone",
        }
    }

    /// Tensor, free and boolean products are commutative.
    pub fn is_commutative(self) -> bool {
        matches!(self, ProductKind::Tensor | ProductKind::Free | ProductKind::Boolean)
    }
}

impl fmt::Display for ProductKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProductKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ProductKind::ALL
            .into_iter()
            .find(|k| k.name() == s.to_ascii_lowercase().replace(['-', '_'], ""))
            .ok_or_else(|| Error::Parse(format!("unknown product '{s}'")))
    }
}

/// Evaluates one universal product for a fixed pair of functionals. The free
/// product memoizes on normalized sub-monomials; the table lives as long as
/// the evaluator.
pub struct ProductEvaluator<'a, R> {
    kind: ProductKind,
    f: &'a Series<R>,
    g: &'a Series<R>,
    memo: HashMap<FreeMonomial, R>,
}

impl<'a, R: Coeff> ProductEvaluator<'a, R> {
    pub fn new(kind: ProductKind, f: &'a Series<R>, g: &'a Series<R>) -> Self {
        ProductEvaluator {
            kind,
            f,
            g,
            memo: HashMap::new(),
        }
    }

    pub fn kind(&self) -> ProductKind {
        self.kind
    }

    /// `(f • g)(m)`.
    pub fn eval(&mut self, m: &FreeMonomial) -> Result<R> {
        self.check_truncation(m)?;
        Ok(match self.kind {
            ProductKind::Tensor => self
                .leg_value(Leg::One, &m.leg_word(Leg::One))
                .mul(&self.leg_value(Leg::Two, &m.leg_word(Leg::Two))),
            ProductKind::Boolean => self.blockwise(m, Leg::One).mul(&self.blockwise(m, Leg::Two)),
            ProductKind::Monotone => self
                .leg_value(Leg::One, &m.leg_word(Leg::One))
                .mul(&self.blockwise(m, Leg::Two)),
            ProductKind::AntiMonotone => self
                .blockwise(m, Leg::One)
                .mul(&self.leg_value(Leg::Two, &m.leg_word(Leg::Two))),
            ProductKind::Free => {
                if m.len() > MAX_FREE_BLOCKS {
                    return Err(Error::OutOfBounds {
                        what: "free-product blocks",
                        value: m.len(),
                        range: format!("1..={MAX_FREE_BLOCKS}"),
                    });
                }
                self.free(m)?
            }
        })
    }

    fn check_truncation(&self, m: &FreeMonomial) -> Result<()> {
        for (leg, series) in [(Leg::One, self.f), (Leg::Two, self.g)] {
            let w = m.leg_word(leg);
            series.alphabet().check(&w)?;
            let degree = series.alphabet().degree(&w)?;
            if degree > series.max_deg() {
                return Err(Error::Truncation {
                    word: w.to_string(),
                    degree,
                    max_deg: series.max_deg(),
                });
            }
        }
        Ok(())
    }

    /// Functional value of a word on one leg; the empty product is one.
    fn leg_value(&self, leg: Leg, w: &Word) -> R {
        if w.is_empty() {
            return R::one();
        }
        match leg {
            Leg::One => self.f.get(w),
            Leg::Two => self.g.get(w),
        }
    }

    fn blockwise(&self, m: &FreeMonomial, leg: Leg) -> R {
        m.blocks()
            .iter()
            .filter(|b| b.leg == leg)
            .fold(R::one(), |acc, b| acc.mul(&self.leg_value(leg, &b.word)))
    }

    fn free(&mut self, m: &FreeMonomial) -> Result<R> {
        if m.len() == 1 {
            let b = &m.blocks()[0];
            return Ok(self.leg_value(b.leg, &b.word));
        }
        if let Some(v) = self.memo.get(m) {
            return Ok(v.clone());
        }
        let n = m.len();
        let values: Vec<R> = m.blocks().iter().map(|b| self.leg_value(b.leg, &b.word)).collect();
        let full: u64 = (1u64 << n) - 1;
        let mut acc = R::zero();
        for mask in 0..full {
            let excluded = full & !mask;
            let mut term = match m.restrict_mask(mask) {
                None => R::one(),
                Some(sub) => self.free(&sub)?,
            };
            if term.is_zero() {
                continue;
            }
            for (i, v) in values.iter().enumerate() {
                if excluded >> i & 1 == 1 {
                    term = term.mul(v);
                }
            }
            // sign (-1)^{m-|I|+1}: positive when an odd number of blocks is excluded
            if excluded.count_ones() % 2 == 1 {
                acc.add_assign(&term);
            } else {
                acc = acc.sub(&term);
            }
        }
        self.memo.insert(m.clone(), acc.clone());
        Ok(acc)
    }
}

/// `(f • g)(m)` for a single monomial.
pub fn eval_product<R: Coeff>(kind: ProductKind, f: &Series<R>, g: &Series<R>, m: &FreeMonomial) -> Result<R> {
    ProductEvaluator::new(kind, f, g).eval(m)
}

/// Full symbolic expansion of `(f •_F g)(m)` with `f_u = X:u`, `g_u = Y:u`.
pub fn eval_free_symbolic(alphabet: &Alphabet, m: &FreeMonomial) -> Result<Poly> {
    let max_deg = [Leg::One, Leg::Two]
        .into_iter()
        .map(|leg| alphabet.degree(&m.leg_word(leg)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .max()
        .unwrap_or(1)
        .max(1);
    let f = Series::symbolic(alphabet, max_deg, "X", Constant::Zero);
    let g = Series::symbolic(alphabet, max_deg, "Y", Constant::Zero);
    eval_product(ProductKind::Free, &f, &g, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::Rational;
    use crate::random::SeriesSampler;
    use proptest::prelude::*;

    fn p(s: &str) -> Poly {
        s.parse().unwrap()
    }

    fn mono(blocks: &[(Leg, &[u32])]) -> FreeMonomial {
        FreeMonomial::from_blocks(blocks.iter().map(|&(l, v)| (l, Word::new(v.to_vec())))).unwrap()
    }

    fn symbolic(s: usize, deg: usize) -> (Series<Poly>, Series<Poly>) {
        let a = Alphabet::new(s).unwrap();
        (
            Series::symbolic(&a, deg, "X", Constant::Zero),
            Series::symbolic(&a, deg, "Y", Constant::Zero),
        )
    }

    /// Direct transcription of the free recursion without memoization.
    fn free_unmemoized<R: Coeff>(f: &Series<R>, g: &Series<R>, m: &FreeMonomial) -> R {
        let value = |leg: Leg, w: &Word| match leg {
            Leg::One => f.get(w),
            Leg::Two => g.get(w),
        };
        let n = m.len();
        if n == 1 {
            return value(m.blocks()[0].leg, &m.blocks()[0].word);
        }
        let mut acc = R::zero();
        for mask in 0..(1u64 << n) - 1 {
            let chosen: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            let mut term = if chosen.is_empty() {
                R::one()
            } else {
                free_unmemoized(f, g, &m.restrict(&chosen).unwrap())
            };
            for (i, b) in m.blocks().iter().enumerate() {
                if mask >> i & 1 == 0 {
                    term = term.mul(&value(b.leg, &b.word));
                }
            }
            let sign = (n - chosen.len() + 1).is_multiple_of(2);
            acc = if sign { acc.add(&term) } else { acc.sub(&term) };
        }
        acc
    }

    #[test]
    fn monotone_example() {
        let (f, g) = symbolic(2, 2);
        let m = mono(&[(Leg::One, &[1]), (Leg::Two, &[1]), (Leg::One, &[2]), (Leg::Two, &[2])]);
        let v = eval_product(ProductKind::Monotone, &f, &g, &m).unwrap();
        assert_eq!(v, p("X:1,2*Y:1*Y:2"));
        let swapped = eval_product(ProductKind::Monotone, &g, &f, &m.swap_legs()).unwrap();
        assert_ne!(v, swapped);
    }

    #[test]
    fn free_five_block_example() {
        let (f, g) = symbolic(3, 3);
        let m = mono(&[
            (Leg::One, &[1]),
            (Leg::Two, &[1]),
            (Leg::One, &[2]),
            (Leg::Two, &[2]),
            (Leg::One, &[3]),
        ]);
        let v = eval_product(ProductKind::Free, &f, &g, &m).unwrap();
        assert_eq!(
            v,
            p("X:1,2,3*Y:1*Y:2 + X:1,3*X:2*Y:1,2 - X:1,3*X:2*Y:1*Y:2")
        );
    }

    #[test]
    fn boolean_and_tensor_on_xyx() {
        let (f, g) = symbolic(1, 2);
        let m = mono(&[(Leg::One, &[1]), (Leg::Two, &[1]), (Leg::One, &[1])]);
        assert_eq!(eval_product(ProductKind::Boolean, &f, &g, &m).unwrap(), p("X:1^2*Y:1"));
        assert_eq!(eval_product(ProductKind::Tensor, &f, &g, &m).unwrap(), p("X:1,1*Y:1"));
    }

    #[test]
    fn symbolic_small_cases() {
        let a = Alphabet::new(1).unwrap();
        assert_eq!(eval_free_symbolic(&a, &mono(&[(Leg::One, &[1, 1])])).unwrap(), p("X:1,1"));
        assert_eq!(
            eval_free_symbolic(&a, &mono(&[(Leg::One, &[1]), (Leg::Two, &[1])])).unwrap(),
            p("X:1*Y:1")
        );
    }

    #[test]
    fn truncation_is_reported() {
        let (f, g) = symbolic(1, 1);
        let m = mono(&[(Leg::One, &[1]), (Leg::Two, &[1]), (Leg::One, &[1])]);
        for kind in ProductKind::ALL {
            assert!(matches!(eval_product(kind, &f, &g, &m), Err(Error::Truncation { .. })), "{kind}");
        }
    }

    #[test]
    fn kind_names_parse() {
        for k in ProductKind::ALL {
            assert_eq!(k.name().parse::<ProductKind>().unwrap(), k);
        }
        assert_eq!("anti-monotone".parse::<ProductKind>().unwrap(), ProductKind::AntiMonotone);
        assert!("classical".parse::<ProductKind>().is_err());
    }

    fn arb_monomial(max_blocks: usize) -> impl Strategy<Value = FreeMonomial> {
        (any::<bool>(), proptest::collection::vec(proptest::collection::vec(1u32..3, 1..3), 1..=max_blocks))
            .prop_map(|(start, words)| {
                let mut leg = if start { Leg::One } else { Leg::Two };
                let mut blocks = Vec::new();
                for w in words {
                    blocks.push((leg, Word::new(w)));
                    leg = leg.swap();
                }
                FreeMonomial::from_blocks(blocks).unwrap()
            })
    }

    fn random_pair(seed: u64) -> (Series<Rational>, Series<Rational>) {
        let mut s = SeriesSampler::new(seed);
        let a = Alphabet::new(2).unwrap();
        (s.series(&a, 12, Constant::Zero), s.series(&a, 12, Constant::Zero))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn marginal_property(w in proptest::collection::vec(1u32..3, 1..4), seed in 0u64..1000) {
            let (f, g) = random_pair(seed);
            let w = Word::new(w);
            for kind in ProductKind::ALL {
                let x = FreeMonomial::from_blocks([(Leg::One, w.clone())]).unwrap();
                let y = FreeMonomial::from_blocks([(Leg::Two, w.clone())]).unwrap();
                prop_assert_eq!(eval_product(kind, &f, &g, &x).unwrap(), f.get(&w));
                prop_assert_eq!(eval_product(kind, &f, &g, &y).unwrap(), g.get(&w));
            }
        }

        #[test]
        fn commutative_products_commute(m in arb_monomial(6), seed in 0u64..1000) {
            let (f, g) = random_pair(seed);
            for kind in ProductKind::ALL.into_iter().filter(|k| k.is_commutative()) {
                prop_assert_eq!(
                    eval_product(kind, &f, &g, &m).unwrap(),
                    eval_product(kind, &g, &f, &m.swap_legs()).unwrap()
                );
            }
        }

        #[test]
        fn memoized_free_matches_plain_recursion(m in arb_monomial(6), seed in 0u64..1000) {
            let (f, g) = random_pair(seed);
            prop_assert_eq!(eval_product(ProductKind::Free, &f, &g, &m).unwrap(), free_unmemoized(&f, &g, &m));
        }

        #[test]
        fn free_symbolic_is_weighted_homogeneous(m in arb_monomial(5)) {
            let a = Alphabet::with_weights(vec![1, 2]).unwrap();
            let poly = eval_free_symbolic(&a, &m).unwrap();
            let total: usize = m.blocks().iter().map(|b| a.degree(&b.word).unwrap()).sum();
            let hom = poly
                .weighted_degree(|name| name[2..].parse::<Word>().ok().map(|w| a.degree(&w).unwrap() as u64))
                .unwrap();
            prop_assert_eq!(hom, crate::coeff::Homogeneity::Homogeneous(total as u64));
        }
    }
}
