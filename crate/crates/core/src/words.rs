//! Words over a weighted alphabet and monomials of the free product.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The alphabet `{1, ..., s}` with a positive integer weight per letter.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Alphabet {
    weights: Vec<u32>,
}

impl Alphabet {
    /// `s` letters, all of weight one.
    pub fn new(s: usize) -> Result<Self> {
        Self::with_weights(vec![1; s])
    }

    pub fn with_weights(weights: Vec<u32>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Invalid("alphabet must have at least one letter".into()));
        }
        if weights.contains(&0) {
            return Err(Error::Invalid("letter weights must be positive".into()));
        }
        Ok(Alphabet { weights })
    }

    pub fn size(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn weight(&self, letter: u32) -> Result<u32> {
        letter
            .checked_sub(1)
            .and_then(|i| self.weights.get(i as usize))
            .copied()
            .ok_or(Error::LetterOutOfRange {
                letter,
                size: self.size(),
            })
    }

    pub fn contains(&self, letter: u32) -> bool {
        letter >= 1 && (letter as usize) <= self.size()
    }

    pub fn has_unit_weights(&self) -> bool {
        self.weights.iter().all(|&w| w == 1)
    }

    /// Weighted degree of a word; zero for the empty word.
    pub fn degree(&self, w: &Word) -> Result<usize> {
        w.letters()
            .iter()
            .map(|&l| self.weight(l).map(|x| x as usize))
            .sum()
    }

    /// Canonical order: weighted degree, then length, then lexicographic.
    pub fn cmp_words(&self, a: &Word, b: &Word) -> Ordering {
        let da = self.degree(a).unwrap_or(usize::MAX);
        let db = self.degree(b).unwrap_or(usize::MAX);
        (da, a.len(), a.letters()).cmp(&(db, b.len(), b.letters()))
    }

    /// All nonempty words of weighted degree at most `max_deg`, in canonical order.
    pub fn enumerate_words(&self, max_deg: usize) -> Vec<Word> {
        let mut out = Vec::new();
        let mut buf = Vec::new();
        for d in 1..=max_deg {
            let start = out.len();
            self.words_of_degree(d, &mut buf, &mut out);
            out[start..].sort_by(|a: &Word, b: &Word| (a.len(), a.letters()).cmp(&(b.len(), b.letters())));
        }
        out
    }

    fn words_of_degree(&self, remaining: usize, buf: &mut Vec<u32>, out: &mut Vec<Word>) {
        if remaining == 0 {
            out.push(Word(buf.clone()));
            return;
        }
        for (i, &w) in self.weights.iter().enumerate() {
            let w = w as usize;
            if w <= remaining {
                buf.push(i as u32 + 1);
                self.words_of_degree(remaining - w, buf, out);
                buf.pop();
            }
        }
    }

    /// Checks every letter of `w` lies in the alphabet.
    pub fn check(&self, w: &Word) -> Result<()> {
        match w.letters().iter().find(|&&l| !self.contains(l)) {
            Some(&letter) => Err(Error::LetterOutOfRange {
                letter,
                size: self.size(),
            }),
            None => Ok(()),
        }
    }
}

/// A finite sequence of letters, possibly empty. Serialized as `"1,2,1"`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(Vec<u32>);

impl Word {
    pub fn new(letters: Vec<u32>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(l: u32) -> Self {
        Word(vec![l])
    }

    pub fn letters(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn extend_from(&mut self, other: &Word) {
        self.0.extend_from_slice(&other.0);
    }

    pub fn push(&mut self, letter: u32) {
        self.0.push(letter);
    }

    /// Subword at the given 1-based positions, in increasing position order.
    pub fn restrict(&self, positions: &[usize]) -> Result<Word> {
        let mut sorted = positions.to_vec();
        sorted.sort_unstable();
        sorted
            .into_iter()
            .map(|p| {
                p.checked_sub(1)
                    .and_then(|i| self.0.get(i))
                    .copied()
                    .ok_or_else(|| {
                        Error::Invalid(format!("position {p} outside word of length {}", self.len()))
                    })
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    /// Every way of splitting the word as `u v`, from `(empty, w)` to `(w, empty)`.
    pub fn deconcatenations(&self) -> impl Iterator<Item = (Word, Word)> + '_ {
        (0..=self.len()).map(move |k| (Word(self.0[..k].to_vec()), Word(self.0[k..].to_vec())))
    }
}

impl From<Vec<u32>> for Word {
    fn from(v: Vec<u32>) -> Self {
        Word(v)
    }
}

impl<const N: usize> From<[u32; N]> for Word {
    fn from(v: [u32; N]) -> Self {
        Word(v.to_vec())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Word::empty());
        }
        s.split(',')
            .map(|t| {
                let l: u32 = t
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad letter '{t}' in word '{s}'")))?;
                if l == 0 {
                    return Err(Error::Parse(format!("letters start at 1 in word '{s}'")));
                }
                Ok(l)
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

/// Which copy of the algebra a block of a free-product monomial lives in.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Leg {
    /// First factor, read by the left functional (letters `x_i`).
    One,
    /// Second factor, read by the right functional (letters `y_i`).
    Two,
}

impl Leg {
    pub fn swap(self) -> Leg {
        match self {
            Leg::One => Leg::Two,
            Leg::Two => Leg::One,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Block {
    pub leg: Leg,
    pub word: Word,
}

/// A monomial in the free product `A ⨿ A`: an alternating sequence of
/// nonempty blocks. Adjacent blocks on the same leg are always contracted.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FreeMonomial {
    blocks: Vec<Block>,
}

impl FreeMonomial {
    /// Normalizes `(leg, word)` pairs by contracting equal neighbours.
    /// Empty block words are rejected.
    pub fn from_blocks<I: IntoIterator<Item = (Leg, Word)>>(blocks: I) -> Result<Self> {
        let mut out = FreeMonomial { blocks: Vec::new() };
        for (leg, word) in blocks {
            if word.is_empty() {
                return Err(Error::Invalid("free-product blocks must be nonempty".into()));
            }
            out.push_block(leg, &word);
        }
        if out.blocks.is_empty() {
            return Err(Error::Invalid("a free monomial needs at least one block".into()));
        }
        Ok(out)
    }

    /// Builds a monomial from leg-tagged single letters.
    pub fn from_letters<I: IntoIterator<Item = (Leg, u32)>>(letters: I) -> Result<Self> {
        Self::from_blocks(letters.into_iter().map(|(leg, l)| (leg, Word::letter(l))))
    }

    /// The alternating monomial `x_{i1} y_{i1} ... x_{im} y_{im}`.
    pub fn interleaved(w: &Word) -> Result<Self> {
        Self::from_letters(w.letters().iter().flat_map(|&l| [(Leg::One, l), (Leg::Two, l)]))
    }

    fn push_block(&mut self, leg: Leg, word: &Word) {
        match self.blocks.last_mut() {
            Some(last) if last.leg == leg => last.word.extend_from(word),
            _ => self.blocks.push(Block {
                leg,
                word: word.clone(),
            }),
        }
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Product in the free product, contracting at the seam.
    pub fn mul(&self, rhs: &FreeMonomial) -> FreeMonomial {
        let mut out = self.clone();
        for b in &rhs.blocks {
            out.push_block(b.leg, &b.word);
        }
        out
    }

    /// Product of the selected blocks (0-based indices) in their original
    /// order, re-contracted.
    pub fn restrict(&self, indices: &[usize]) -> Result<FreeMonomial> {
        let mut idx = indices.to_vec();
        idx.sort_unstable();
        idx.dedup();
        if idx.is_empty() {
            return Err(Error::Invalid("restriction to an empty index set".into()));
        }
        let mut out = FreeMonomial { blocks: Vec::new() };
        for i in idx {
            let b = self.blocks.get(i).ok_or_else(|| {
                Error::Invalid(format!("block index {i} outside monomial of {} blocks", self.len()))
            })?;
            out.push_block(b.leg, &b.word);
        }
        Ok(out)
    }

    /// Restriction to the blocks whose bit is set in `mask` (bit `i` = block `i`).
    /// Returns `None` for the empty mask.
    pub fn restrict_mask(&self, mask: u64) -> Option<FreeMonomial> {
        if mask == 0 {
            return None;
        }
        let mut out = FreeMonomial {
            blocks: Vec::with_capacity(mask.count_ones() as usize),
        };
        for (i, b) in self.blocks.iter().enumerate() {
            if mask >> i & 1 == 1 {
                out.push_block(b.leg, &b.word);
            }
        }
        Some(out)
    }

    /// Exchanges the two legs of every block.
    pub fn swap_legs(&self) -> FreeMonomial {
        FreeMonomial {
            blocks: self
                .blocks
                .iter()
                .map(|b| Block {
                    leg: b.leg.swap(),
                    word: b.word.clone(),
                })
                .collect(),
        }
    }

    /// Concatenation of all block words on one leg, in order.
    pub fn leg_word(&self, leg: Leg) -> Word {
        let mut w = Word::empty();
        for b in self.blocks.iter().filter(|b| b.leg == leg) {
            w.extend_from(&b.word);
        }
        w
    }

    pub fn is_alternating(&self) -> bool {
        self.blocks.windows(2).all(|p| p[0].leg != p[1].leg)
            && self.blocks.iter().all(|b| !b.word.is_empty())
    }
}

impl fmt::Display for FreeMonomial {
    /// `x(1,2)y(1)` style: `x` for the first leg, `y` for the second.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.blocks {
            let tag = match b.leg {
                Leg::One => 'x',
                Leg::Two => 'y',
            };
            write!(f, "{tag}({})", b.word)?;
        }
        Ok(())
    }
}

impl fmt::Debug for FreeMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(v: &[u32]) -> Word {
        Word::new(v.to_vec())
    }

    fn mono(blocks: &[(Leg, &[u32])]) -> FreeMonomial {
        FreeMonomial::from_blocks(blocks.iter().map(|&(l, v)| (l, w(v)))).unwrap()
    }

    #[test]
    fn word_degree_examples() {
        let unit = Alphabet::new(2).unwrap();
        assert_eq!(unit.degree(&w(&[1, 1, 2])).unwrap(), 3);
        let weighted = Alphabet::with_weights(vec![1, 2]).unwrap();
        assert_eq!(weighted.degree(&w(&[1, 2])).unwrap(), 3);
        assert_eq!(weighted.degree(&Word::empty()).unwrap(), 0);
        assert_eq!(
            unit.degree(&w(&[3])),
            Err(Error::LetterOutOfRange { letter: 3, size: 2 })
        );
    }

    #[test]
    fn invalid_alphabets() {
        assert!(Alphabet::new(0).is_err());
        assert!(Alphabet::with_weights(vec![1, 0]).is_err());
    }

    #[test]
    fn enumeration_examples() {
        let a1 = Alphabet::new(1).unwrap();
        assert_eq!(a1.enumerate_words(3), vec![w(&[1]), w(&[1, 1]), w(&[1, 1, 1])]);
        let a2 = Alphabet::new(2).unwrap();
        assert_eq!(
            a2.enumerate_words(2),
            vec![w(&[1]), w(&[2]), w(&[1, 1]), w(&[1, 2]), w(&[2, 1]), w(&[2, 2])]
        );
        let weighted = Alphabet::with_weights(vec![1, 2]).unwrap();
        assert_eq!(weighted.enumerate_words(2), vec![w(&[1]), w(&[2]), w(&[1, 1])]);
    }

    #[test]
    fn enumeration_matches_brute_force_filter() {
        // all sequences up to length 4 over 3 letters, filtered by weighted degree
        let a = Alphabet::with_weights(vec![1, 2, 3]).unwrap();
        let mut brute = Vec::new();
        let mut frontier = vec![Word::empty()];
        for _ in 0..4 {
            let mut next = Vec::new();
            for u in &frontier {
                for l in 1..=3 {
                    let mut v = u.clone();
                    v.push(l);
                    next.push(v);
                }
            }
            brute.extend(next.iter().filter(|v| a.degree(v).unwrap() <= 4).cloned());
            frontier = next;
        }
        brute.sort_by(|x, y| a.cmp_words(x, y));
        assert_eq!(a.enumerate_words(4), brute);
    }

    #[test]
    fn word_text_format() {
        assert_eq!(w(&[1, 12, 3]).to_string(), "1,12,3");
        assert_eq!("1,12,3".parse::<Word>().unwrap(), w(&[1, 12, 3]));
        assert_eq!("".parse::<Word>().unwrap(), Word::empty());
        assert!("1,,2".parse::<Word>().is_err());
        assert!("0".parse::<Word>().is_err());
    }

    #[test]
    fn restrict_word_examples() {
        let u = w(&[1, 2, 1]);
        assert_eq!(u.restrict(&[1, 3]).unwrap(), w(&[1, 1]));
        assert_eq!(u.restrict(&[2]).unwrap(), w(&[2]));
        assert_eq!(w(&[1, 2, 2, 1]).restrict(&[2, 3, 4]).unwrap(), w(&[2, 2, 1]));
        assert!(u.restrict(&[4]).is_err());
    }

    #[test]
    fn monomial_multiplication() {
        let x1 = mono(&[(Leg::One, &[1])]);
        let y1 = mono(&[(Leg::Two, &[1])]);
        assert_eq!(x1.mul(&y1), mono(&[(Leg::One, &[1]), (Leg::Two, &[1])]));
        let x2 = mono(&[(Leg::One, &[2])]);
        assert_eq!(x1.mul(&x2), mono(&[(Leg::One, &[1, 2])]));
        let a = mono(&[(Leg::One, &[1]), (Leg::Two, &[1])]);
        let b = mono(&[(Leg::Two, &[2]), (Leg::One, &[2])]);
        assert_eq!(
            a.mul(&b),
            mono(&[(Leg::One, &[1]), (Leg::Two, &[1, 2]), (Leg::One, &[2])])
        );
    }

    #[test]
    fn restriction_contracts() {
        // a1..a5 with legs (1,2,1,2,1), keep a2 a3 a5
        let m = mono(&[
            (Leg::One, &[1]),
            (Leg::Two, &[2]),
            (Leg::One, &[3]),
            (Leg::Two, &[4]),
            (Leg::One, &[5]),
        ]);
        assert_eq!(
            m.restrict(&[1, 2, 4]).unwrap(),
            mono(&[(Leg::Two, &[2]), (Leg::One, &[3, 5])])
        );
        assert_eq!(m.restrict(&[0, 1, 2, 3, 4]).unwrap(), m);
        let m3 = mono(&[(Leg::One, &[1]), (Leg::Two, &[2]), (Leg::One, &[3])]);
        assert_eq!(m3.restrict(&[0, 2]).unwrap(), mono(&[(Leg::One, &[1, 3])]));
        assert!(m3.restrict(&[]).is_err());
        assert_eq!(m3.restrict_mask(0b101), Some(mono(&[(Leg::One, &[1, 3])])));
    }

    #[test]
    fn empty_blocks_rejected() {
        assert!(FreeMonomial::from_blocks([(Leg::One, Word::empty())]).is_err());
        assert!(FreeMonomial::from_blocks(Vec::<(Leg, Word)>::new()).is_err());
    }

    fn arb_monomial() -> impl Strategy<Value = FreeMonomial> {
        proptest::collection::vec((any::<bool>(), proptest::collection::vec(1u32..4, 1..3)), 1..7)
            .prop_map(|bs| {
                FreeMonomial::from_blocks(
                    bs.into_iter()
                        .map(|(b, v)| (if b { Leg::One } else { Leg::Two }, Word::new(v))),
                )
                .unwrap()
            })
    }

    proptest! {
        #[test]
        fn multiplication_is_associative(a in arb_monomial(), b in arb_monomial(), c in arb_monomial()) {
            let left = a.mul(&b).mul(&c);
            prop_assert_eq!(&left, &a.mul(&b.mul(&c)));
            prop_assert!(left.is_alternating());
        }

        #[test]
        fn restriction_stays_alternating(m in arb_monomial(), mask in 1u64..64) {
            let mask = mask & ((1u64 << m.len()) - 1);
            if let Some(r) = m.restrict_mask(mask) {
                prop_assert!(r.is_alternating());
            }
        }

        #[test]
        fn enumeration_count(s in 1usize..4, n in 1usize..5) {
            let a = Alphabet::new(s).unwrap();
            let expected: usize = (1..=n as u32).map(|k| s.pow(k)).sum();
            let words = a.enumerate_words(n);
            prop_assert_eq!(words.len(), expected);
            let mut dedup = words.clone();
            dedup.sort();
            dedup.dedup();
            prop_assert_eq!(dedup.len(), expected);
        }
    }
}
