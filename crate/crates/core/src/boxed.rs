//! The boxed convolution `⊠`, the `Zeta`/`Moeb` series, the R-transform and
//! the bridge `f ⊠_V g = f ⊠ Moeb ⊠ g`.
//!
//! `(f ⊠ g)_w = Σ_{π ∈ NC(|w|)} ∏_{V ∈ π} f_{w|V} · ∏_{V ∈ K(π)} g_{w|V}`.
//! Constants are ignored on input and zero on output.

use crate::coeff::{Coeff, Poly};
use crate::dualconv::boxtimes_v;
use crate::error::{Error, Result};
use crate::ncpart::nc_with_kreweras;
use crate::par;
use crate::series::{Constant, Series};
use crate::words::{Alphabet, Word};

fn restricted_product<R: Coeff>(s: &Series<R>, w: &Word, blocks: &[Vec<usize>]) -> R {
    let mut acc = R::one();
    for b in blocks {
        let sub = Word::new(b.iter().map(|&i| w.letters()[i - 1]).collect());
        match s.get_ref(&sub) {
            Some(v) => acc = acc.mul(v),
            None => return R::zero(),
        }
    }
    acc
}

/// `(f ⊠ g)_w` for one word.
pub fn boxed_word<R: Coeff>(f: &Series<R>, g: &Series<R>, w: &Word) -> Result<R> {
    if w.is_empty() {
        return Err(Error::Invalid("the boxed convolution has no empty-word coefficient".into()));
    }
    let table = nc_with_kreweras(w.len())?;
    let mut acc = R::zero();
    for (pi, k) in table.iter() {
        let left = restricted_product(f, w, pi.blocks());
        if left.is_zero() {
            continue;
        }
        let right = restricted_product(g, w, k.blocks());
        if !right.is_zero() {
            acc.add_assign(&left.mul(&right));
        }
    }
    Ok(acc)
}

fn check_pair<R: Coeff>(f: &Series<R>, g: &Series<R>) -> Result<usize> {
    if f.alphabet() != g.alphabet() {
        return Err(Error::Mismatch("alphabets differ".into()));
    }
    Ok(f.max_deg().min(g.max_deg()))
}

/// `f ⊠ g`.
pub fn boxed_mul<R: Coeff>(f: &Series<R>, g: &Series<R>) -> Result<Series<R>> {
    let max_deg = check_pair(f, g)?;
    let words = f.alphabet().enumerate_words(max_deg);
    let values = par::try_map(&words, |w| boxed_word(f, g, w))?;
    let mut out = Series::zero(f.alphabet(), max_deg, Constant::Zero);
    for (w, v) in words.into_iter().zip(values) {
        out.set_unchecked(w, v);
    }
    Ok(out)
}

/// Words grouped by length, shortest first.
fn length_levels(alphabet: &Alphabet, max_deg: usize) -> Vec<Vec<Word>> {
    let mut levels: Vec<Vec<Word>> = Vec::new();
    for w in alphabet.enumerate_words(max_deg) {
        if levels.len() < w.len() {
            levels.resize(w.len(), Vec::new());
        }
        levels[w.len() - 1].push(w);
    }
    levels
}

/// Right inverse `g` with `f ⊠ g = (1̲_s, 0̲)`, by triangular elimination:
/// only the discrete partition pairs `g_w` with `f_{i_1}⋯f_{i_m}`; every
/// other term reads `g` on strictly shorter subwords.
pub fn boxed_inverse<R: Coeff>(f: &Series<R>) -> Result<Series<R>> {
    let alphabet = f.alphabet();
    let mut letter_inv = Vec::with_capacity(alphabet.size());
    for i in 1..=alphabet.size() as u32 {
        let w = Word::letter(i);
        letter_inv.push(f.get(&w).inverse().ok_or_else(|| Error::NotInvertible(w.to_string()))?);
    }
    let mut g = Series::zero(alphabet, f.max_deg(), Constant::Zero);
    for level in length_levels(alphabet, f.max_deg()) {
        let values = par::try_map(&level, |w| {
            // g_w is still zero here, so the sum below omits the discrete term
            let rest = boxed_word(f, &g, w)?;
            let target = if w.len() == 1 { R::one() } else { R::zero() };
            let scale = w
                .letters()
                .iter()
                .fold(R::one(), |acc, &l| acc.mul(&letter_inv[l as usize - 1]));
            Ok::<R, Error>(target.sub(&rest).mul(&scale))
        })?;
        for (w, v) in level.into_iter().zip(values) {
            g.set_unchecked(w, v);
        }
    }
    Ok(g)
}

/// `Moeb`, the `⊠`-inverse of `Zeta`.
pub fn moeb<R: Coeff>(alphabet: &Alphabet, max_deg: usize) -> Series<R> {
    boxed_inverse(&Series::zeta(alphabet, max_deg)).expect("Zeta has unit linear part")
}

/// `R(f) = f ⊠ Moeb`; its coefficients are the free cumulants of `f`.
pub fn r_transform<R: Coeff>(f: &Series<R>) -> Result<Series<R>> {
    boxed_mul(f, &moeb(f.alphabet(), f.max_deg()))
}

/// Inverse of the R-transform: `κ ↦ κ ⊠ Zeta`.
pub fn r_transform_inverse<R: Coeff>(kappa: &Series<R>) -> Result<Series<R>> {
    boxed_mul(kappa, &Series::zeta(kappa.alphabet(), kappa.max_deg()))
}

/// Symbolic boxed law `F_w(X, Y)`. With `unipotent` the single-letter
/// variables are set to one, giving the law of `𝔊ˢ₊`.
pub fn boxed_group_law(alphabet: &Alphabet, w: &Word, unipotent: bool) -> Result<Poly> {
    let d = alphabet.degree(w)?;
    let build = |prefix: &str| {
        Series::filled(alphabet, d, Constant::Zero, |u| {
            if unipotent && u.len() == 1 {
                Poly::one()
            } else {
                Poly::var(&crate::series::symbol(prefix, u))
            }
        })
    };
    boxed_word(&build("X"), &build("Y"), w)
}

/// Outcome of comparing `f ⊠_V g` with `f ⊠ Moeb ⊠ g`.
#[derive(Clone, Debug)]
pub struct BridgeReport<R> {
    pub via_free_product: Series<R>,
    pub via_boxed: Series<R>,
    /// Words where the two pipelines disagree.
    pub mismatches: Vec<Word>,
}

impl<R> BridgeReport<R> {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Computes both sides of the bridge identity through independent pipelines:
/// the universal free product on `Δ_m`, and the boxed convolution.
pub fn verify_boxv_bridge<R: Coeff>(f: &Series<R>, g: &Series<R>) -> Result<BridgeReport<R>> {
    let lhs = boxtimes_v(f, g)?;
    let f0 = f.clone().with_constant(Constant::Zero);
    let g0 = g.clone().with_constant(Constant::Zero);
    let m = moeb(f.alphabet(), f.max_deg().min(g.max_deg()));
    let rhs = boxed_mul(&boxed_mul(&f0, &m)?, &g0)?;
    let mismatches = lhs.clone().with_constant(Constant::Zero).differences(&rhs);
    Ok(BridgeReport {
        via_free_product: lhs,
        via_boxed: rhs,
        mismatches,
    })
}
