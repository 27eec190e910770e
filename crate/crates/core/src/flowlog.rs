//! Cumulant coordinates on the unipotent convolution groups.
//!
//! For a unipotent group with a weight-graded polynomial law, every
//! coefficient of the power `f^{∘n}` is a polynomial in `n` of degree at
//! most the weight of its word. `LOG(f)` is the derivative of that
//! polynomial at `n = 0`, recovered exactly by Lagrange interpolation on the
//! nodes `n = 0, ..., D`. `EXP` inverts `LOG` level by level, since
//! `LOG(f)_w = (f - 1)_w + (terms of lower weight)`.

use std::fmt;

use crate::boxed::{boxed_inverse, boxed_mul, r_transform, r_transform_inverse};
use crate::coeff::{Coeff, FirstOrder, Homogeneity, Poly, Rational};
use crate::dualconv::{convolution_inverse, convolve, DualGroupSpec};
use crate::error::{Error, Result};
use crate::series::{symbol, Constant, GroupSet, Series, WeightProfile};
use crate::uniprod::ProductKind;
use crate::words::{Alphabet, Word};

/// Weight grading of a unipotent group of series.
pub trait Graded {
    fn name(&self) -> String;
    /// Weight `σ_w` bounding the degree in `n` of `(f^{∘n})_w`.
    fn sigma(&self, alphabet: &Alphabet, w: &Word) -> usize;
}

/// A group of truncated series with a weight grading making it unipotent.
pub trait ConvolutionGroup<R: Coeff>: Graded + Sync {
    fn unit(&self, alphabet: &Alphabet, max_deg: usize) -> Series<R>;
    fn multiply(&self, f: &Series<R>, g: &Series<R>) -> Result<Series<R>>;
    fn invert(&self, f: &Series<R>) -> Result<Series<R>>;
    fn check_member(&self, f: &Series<R>) -> Result<()>;
}

/// The convolution groups on which the cumulant maps are defined.
///
/// Multiplicative monotone and anti-monotone convolutions only have a
/// one-sided unit, the multiplicative boolean one has none, and the
/// multiplicative tensor one is a torus rather than a unipotent group; none
/// of them is accepted.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum GroupHandle {
    /// `⋆_{•,a}` or `⋆_{•,h}` on series with constant zero; `σ_w = deg(w)`.
    Labelled { kind: ProductKind, spec: DualGroupSpec },
    /// `⊠` on `𝔊ˢ₊`; `σ_w = |w| - 1`.
    Boxed,
    /// `⊠_V` on `𝔊ˢ₊` (constant one); `σ_w = |w| - 1`.
    BoxTimesV,
}

impl GroupHandle {
    pub fn additive(kind: ProductKind) -> Self {
        GroupHandle::Labelled {
            kind,
            spec: DualGroupSpec::Additive,
        }
    }

    /// The group for a product and coproduct, if that convolution is a unipotent group.
    pub fn labelled(kind: ProductKind, spec: DualGroupSpec) -> Result<Self> {
        match (&spec, kind) {
            (DualGroupSpec::Multiplicative, ProductKind::Free) => Ok(GroupHandle::BoxTimesV),
            (DualGroupSpec::Multiplicative, _) => Err(Error::Unsupported(format!(
                "the multiplicative {kind} convolution is not a unipotent group"
            ))),
            _ => Ok(GroupHandle::Labelled { kind, spec }),
        }
    }

    /// Every group handled here, with the trivial deformation.
    pub fn all() -> Vec<GroupHandle> {
        let mut v: Vec<_> = ProductKind::ALL.into_iter().map(GroupHandle::additive).collect();
        v.push(GroupHandle::Boxed);
        v.push(GroupHandle::BoxTimesV);
        v
    }

    /// Grading under which `δ_λ` acts by automorphisms, when there is one in
    /// moment coordinates.
    pub fn weight_profile(&self) -> Option<WeightProfile> {
        match self {
            GroupHandle::Labelled { .. } => Some(WeightProfile::Degree),
            GroupHandle::Boxed => Some(WeightProfile::LengthMinusOne),
            GroupHandle::BoxTimesV => None,
        }
    }

    /// Whether the group is commutative (tensor, free, boolean additive).
    pub fn is_commutative_additive(&self) -> bool {
        matches!(self, GroupHandle::Labelled { kind, .. } if kind.is_commutative())
    }

    pub fn constant(&self) -> Constant {
        match self {
            GroupHandle::BoxTimesV => Constant::One,
            _ => Constant::Zero,
        }
    }
}

impl fmt::Display for GroupHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupHandle::Labelled { kind, spec } => write!(f, "{kind}/{spec}"),
            GroupHandle::Boxed => f.write_str("boxed"),
            GroupHandle::BoxTimesV => f.write_str("free/multiplicative"),
        }
    }
}

impl Graded for GroupHandle {
    fn name(&self) -> String {
        self.to_string()
    }

    fn sigma(&self, alphabet: &Alphabet, w: &Word) -> usize {
        match self {
            GroupHandle::Labelled { .. } => WeightProfile::Degree.weight(alphabet, w),
            _ => WeightProfile::LengthMinusOne.weight(alphabet, w),
        }
    }
}

impl<R: Coeff> ConvolutionGroup<R> for GroupHandle {

    fn unit(&self, alphabet: &Alphabet, max_deg: usize) -> Series<R> {
        match self {
            GroupHandle::Labelled { .. } => Series::zero(alphabet, max_deg, Constant::Zero),
            GroupHandle::Boxed => Series::boxed_unit(alphabet, max_deg),
            GroupHandle::BoxTimesV => Series::ones(alphabet, max_deg),
        }
    }

    fn multiply(&self, f: &Series<R>, g: &Series<R>) -> Result<Series<R>> {
        match self {
            GroupHandle::Labelled { kind, spec } => convolve(*kind, spec, f, g),
            GroupHandle::Boxed => boxed_mul(f, g),
            GroupHandle::BoxTimesV => convolve(ProductKind::Free, &DualGroupSpec::Multiplicative, f, g),
        }
    }

    fn invert(&self, f: &Series<R>) -> Result<Series<R>> {
        match self {
            GroupHandle::Labelled { kind, spec } => convolution_inverse(*kind, spec, f),
            GroupHandle::Boxed => boxed_inverse(f),
            GroupHandle::BoxTimesV => convolution_inverse(ProductKind::Free, &DualGroupSpec::Multiplicative, f),
        }
    }

    fn check_member(&self, f: &Series<R>) -> Result<()> {
        if let GroupHandle::Labelled { kind, spec: DualGroupSpec::Multiplicative } = self {
            return Err(Error::Unsupported(format!(
                "use GroupHandle::labelled: the multiplicative {kind} convolution is handled separately or not at all"
            )));
        }
        if f.constant() != self.constant() {
            return Err(Error::Mismatch(format!("series constant does not match the {self} group")));
        }
        if matches!(self, GroupHandle::Boxed | GroupHandle::BoxTimesV) && !f.in_group(GroupSet::Unipotent) {
            return Err(Error::Invalid(format!(
                "the {self} group needs every single-letter coefficient equal to 1"
            )));
        }
        Ok(())
    }
}

/// Exponential coordinates of a group element, indexed like a series.
#[derive(Clone, Debug)]
pub struct CumulantVector<R>(Series<R>);

impl<R: Coeff> PartialEq for CumulantVector<R> {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

impl<R: Coeff> CumulantVector<R> {
    pub fn new(coeffs: Series<R>) -> Self {
        CumulantVector(coeffs.with_constant(Constant::Zero))
    }

    pub fn zero(alphabet: &Alphabet, max_deg: usize) -> Self {
        CumulantVector(Series::zero(alphabet, max_deg, Constant::Zero))
    }

    pub fn coefficient(&self, w: &Word) -> Result<R> {
        self.0.coefficient(w)
    }

    pub fn as_series(&self) -> &Series<R> {
        &self.0
    }

    pub fn into_series(self) -> Series<R> {
        self.0
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.0.add(&other.0).map(CumulantVector)
    }

    pub fn scale_by(&self, c: &R) -> Self {
        CumulantVector(self.0.map(|_, v| v.mul(c)))
    }

    pub fn to_json(&self) -> serde_json::Value {
        self.0.to_json()
    }
}

fn max_sigma<R: Coeff, G: ConvolutionGroup<R> + ?Sized>(g: &G, alphabet: &Alphabet, max_deg: usize) -> usize {
    alphabet
        .enumerate_words(max_deg)
        .iter()
        .map(|w| g.sigma(alphabet, w))
        .max()
        .unwrap_or(0)
}

/// `f^{∘n}`; negative powers go through the group inverse.
pub fn group_power<R: Coeff, G: ConvolutionGroup<R> + ?Sized>(g: &G, f: &Series<R>, n: i64) -> Result<Series<R>> {
    g.check_member(f)?;
    let base = if n < 0 { g.invert(f)? } else { f.clone() };
    let mut acc = g.unit(f.alphabet(), f.max_deg());
    for _ in 0..n.unsigned_abs() {
        acc = g.multiply(&acc, &base)?;
    }
    Ok(acc)
}

/// Weights `c_j` with `p'(0) = Σ_j c_j p(j)` for every polynomial of degree ≤ `d`.
pub fn derivative_weights(d: usize) -> Vec<Rational> {
    (0..=d)
        .map(|j| {
            if j == 0 {
                // L_0'(0) = -Σ_{k=1}^{d} 1/k
                (1..=d).fold(Rational::zero(), |acc, k| &acc - &Rational::new(1, k as i64).unwrap())
            } else {
                let j = j as i64;
                let mut num = Rational::one();
                let mut den = Rational::one();
                for k in 0..=d as i64 {
                    if k == j {
                        continue;
                    }
                    if k != 0 {
                        num = &num * &Rational::from(-k);
                    }
                    den = &den * &Rational::from(j - k);
                }
                num.checked_div(&den).expect("distinct nodes")
            }
        })
        .collect()
}

/// `LOG(f)`: the derivative at `t = 0` of the flow `t ↦ f^{∘t}`.
pub fn log_map<R: Coeff, G: ConvolutionGroup<R> + ?Sized>(g: &G, f: &Series<R>) -> Result<CumulantVector<R>> {
    g.check_member(f)?;
    let alphabet = f.alphabet();
    let d = max_sigma(g, alphabet, f.max_deg());
    let weights: Vec<R> = derivative_weights(d).iter().map(R::from_rational).collect();
    let mut powers = Vec::with_capacity(d + 1);
    powers.push(g.unit(alphabet, f.max_deg()));
    for n in 1..=d {
        let next = g.multiply(&powers[n - 1], f)?;
        powers.push(next);
    }
    let mut out = Series::zero(alphabet, f.max_deg(), Constant::Zero);
    for w in alphabet.enumerate_words(f.max_deg()) {
        let v = powers
            .iter()
            .zip(&weights)
            .fold(R::zero(), |acc, (p, c)| acc.add(&p.get(&w).mul(c)));
        out.set_unchecked(w, v);
    }
    Ok(CumulantVector(out))
}

/// `EXP(ξ)`: the unique group element with `LOG(f) = ξ`.
pub fn exp_map<R: Coeff, G: ConvolutionGroup<R> + ?Sized>(g: &G, xi: &CumulantVector<R>) -> Result<Series<R>> {
    let alphabet = xi.0.alphabet();
    let max_deg = xi.0.max_deg();
    let unit = g.unit(alphabet, max_deg);
    for (w, _) in xi.0.nonzero() {
        if g.sigma(alphabet, w) == 0 {
            return Err(Error::Invalid(format!(
                "coordinate at '{w}' has weight zero and must vanish in the {} group",
                g.name()
            )));
        }
    }
    let mut f = unit.clone();
    for w in alphabet.enumerate_words(max_deg) {
        let v = unit.get(&w).add(&xi.0.get(&w));
        f.set_unchecked(w, v);
    }
    let d = max_sigma(g, alphabet, max_deg);
    for level in 1..=d {
        let current = log_map(g, &f)?;
        for w in alphabet.enumerate_words(max_deg) {
            if g.sigma(alphabet, &w) == level {
                let v = f.get(&w).add(&xi.0.get(&w)).sub(&current.0.get(&w));
                f.set_unchecked(w, v);
            }
        }
    }
    Ok(f)
}

/// The group law pushed forward to exponential coordinates.
pub fn bch_law<R: Coeff, G: ConvolutionGroup<R> + ?Sized>(
    g: &G,
    xi: &CumulantVector<R>,
    eta: &CumulantVector<R>,
) -> Result<CumulantVector<R>> {
    let product = g.multiply(&exp_map(g, xi)?, &exp_map(g, eta)?)?;
    log_map(g, &product)
}

/// Outcome of the R-transform differential check.
#[derive(Clone, Debug)]
pub struct DifferentialReport {
    /// Words where `R(0 + ε h)` is not `ε h` to first order.
    pub linear_mismatches: Vec<Word>,
    /// Words where `LOG_{⊞_V} ∘ R⁻¹` fails to be identity plus strictly lower terms.
    pub triangular_mismatches: Vec<Word>,
}

impl DifferentialReport {
    pub fn passed(&self) -> bool {
        self.linear_mismatches.is_empty() && self.triangular_mismatches.is_empty()
    }
}

/// Differential of the R-transform at the origin of `(k^N, ⊞_V, 0)`, and the
/// unipotent-linear relation between `⊞_V`-cumulants and free cumulants.
pub fn r_transform_differential_check(alphabet: &Alphabet, max_deg: usize) -> Result<DifferentialReport> {
    let words = alphabet.enumerate_words(max_deg);

    // R(ε h) = ε h + O(ε²)
    let eps = Poly::var(crate::coeff::EPSILON);
    let h = Series::filled(alphabet, max_deg, Constant::Zero, |u| {
        FirstOrder::new(eps.mul(&Poly::var(&symbol("H", u))))
    });
    let r = r_transform(&h)?;
    let linear_mismatches = words
        .iter()
        .filter(|w| {
            let v = r.get(w);
            !v.value_part().is_zero() || v.linear_part() != Poly::var(&symbol("H", w))
        })
        .cloned()
        .collect();

    // LOG_{⊞_V}(R⁻¹(κ)) with symbolic κ
    let kappa = Series::symbolic(alphabet, max_deg, "K", Constant::Zero);
    let moments = r_transform_inverse(&kappa)?;
    let group = GroupHandle::additive(ProductKind::Free);
    let cumulants = log_map(&group, &moments)?;
    let position = |u: &Word| words.iter().position(|v| v == u);
    let triangular_mismatches = words
        .iter()
        .filter(|w| {
            let c = cumulants.0.get(w);
            let linear = c.weighted_degree(|name| name.starts_with("K:").then_some(1)) == Ok(Homogeneity::Homogeneous(1));
            let diagonal = c.coefficient(&crate::coeff::Monomial::var(crate::coeff::Var::new(&symbol("K", w))));
            let lower = c.variables().iter().all(|name| {
                let u: Word = name[2..].parse().expect("K:<word>");
                &u == *w || position(&u) < position(w)
            });
            !(linear && diagonal.is_one() && lower)
        })
        .cloned()
        .collect();

    Ok(DifferentialReport {
        linear_mismatches,
        triangular_mismatches,
    })
}
