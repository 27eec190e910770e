//! Seeded generation of small exact test inputs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coeff::Rational;
use crate::series::{Constant, GroupSet, Series};
use crate::words::{Alphabet, Word};

/// Draws rationals `p/q` with `|p| ≤ 9` and `1 ≤ q ≤ 4`.
pub struct SeriesSampler {
    rng: ChaCha8Rng,
}

impl SeriesSampler {
    pub fn new(seed: u64) -> Self {
        SeriesSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rational(&mut self) -> Rational {
        let p = self.rng.gen_range(-9i64..=9);
        let q = self.rng.gen_range(1i64..=4);
        Rational::new(p, q).unwrap()
    }

    pub fn nonzero_rational(&mut self) -> Rational {
        loop {
            let r = self.rational();
            if r != Rational::from(0) {
                return r;
            }
        }
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    /// Every coefficient up to `max_deg` drawn independently.
    pub fn series(&mut self, alphabet: &Alphabet, max_deg: usize, constant: Constant) -> Series<Rational> {
        let mut s = Series::zero(alphabet, max_deg, constant);
        for w in alphabet.enumerate_words(max_deg) {
            let c = self.rational();
            s.set(w, c).expect("word in range");
        }
        s
    }

    /// Random element of `𝔊ˢ` or `𝔊ˢ₊`: the linear part is nonzero or one.
    pub fn group_series(
        &mut self,
        alphabet: &Alphabet,
        max_deg: usize,
        constant: Constant,
        which: GroupSet,
    ) -> Series<Rational> {
        let mut s = self.series(alphabet, max_deg, constant);
        for i in 1..=alphabet.size() as u32 {
            let w = Word::letter(i);
            if alphabet.degree(&w).unwrap() > max_deg {
                continue;
            }
            let c = match which {
                GroupSet::Invertible => self.nonzero_rational(),
                GroupSet::Unipotent => Rational::from(1),
            };
            s.set(w, c).expect("word in range");
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_generation_is_deterministic() {
        let a = Alphabet::new(2).unwrap();
        let s1 = SeriesSampler::new(7).series(&a, 3, Constant::Zero);
        let s2 = SeriesSampler::new(7).series(&a, 3, Constant::Zero);
        assert_eq!(s1, s2);
        let s3 = SeriesSampler::new(8).series(&a, 3, Constant::Zero);
        assert_ne!(s1, s3);
    }

    #[test]
    fn group_samples_have_the_right_linear_part() {
        let a = Alphabet::new(3).unwrap();
        let mut s = SeriesSampler::new(1);
        for _ in 0..20 {
            assert!(s.group_series(&a, 2, Constant::One, GroupSet::Invertible).in_group(GroupSet::Invertible));
            assert!(s.group_series(&a, 2, Constant::Zero, GroupSet::Unipotent).in_group(GroupSet::Unipotent));
        }
    }

    #[test]
    fn bounds_hold() {
        let mut s = SeriesSampler::new(3);
        for _ in 0..500 {
            let r = s.rational();
            assert!(r.numer().magnitude() <= &9u32.into());
            assert!(r.denom() <= &4.into());
        }
    }
}
