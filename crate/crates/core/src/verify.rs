//! The invariant suite behind `verify all`: every identity of the library
//! checked on seeded random input, one report line per identity.

use std::fmt;

use serde::Serialize;

use crate::boxed::{boxed_group_law, boxed_mul, moeb, r_transform, verify_boxv_bridge};
use crate::coeff::{Coeff, Homogeneity, Rational};
use crate::dualconv::{boxplus_v, boxtimes_v, boxtimes_v_inverse, convolve, group_law, verify_decomposition, DualGroupSpec};
use crate::error::{Error, Result};
use crate::flowlog::{bch_law, exp_map, group_power, log_map, r_transform_differential_check, ConvolutionGroup, Graded, GroupHandle};
use crate::ncpart::{catalan, enumerate_nc, kreweras, MAX_NC};
use crate::par;
use crate::random::SeriesSampler;
use crate::series::{Constant, GroupSet, Series};
use crate::shuffle::{hopf_log, is_character, random_character, ShuffleGroup};
use crate::uniprod::ProductKind;
use crate::words::{Alphabet, Word};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub status: Status,
    pub detail: String,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Parameters shared by every check.
#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub alphabet: Alphabet,
    pub max_deg: usize,
    pub seed: u64,
}

impl VerifyConfig {
    pub fn new(s: usize, max_deg: usize, seed: u64) -> Result<Self> {
        if max_deg == 0 {
            return Err(Error::OutOfBounds {
                what: "max_deg",
                value: 0,
                range: "1..".into(),
            });
        }
        Ok(VerifyConfig {
            alphabet: Alphabet::new(s)?,
            max_deg,
            seed,
        })
    }

    fn sampler(&self, salt: u64) -> SeriesSampler {
        SeriesSampler::new(self.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(salt))
    }

    fn words(&self) -> Vec<Word> {
        self.alphabet.enumerate_words(self.max_deg)
    }
}

type Outcome = std::result::Result<String, String>;
type CheckFn = fn(&VerifyConfig) -> Result<Outcome>;

fn ensure(ok: bool, fail: impl FnOnce() -> String) -> Result<Outcome> {
    Ok(if ok { Ok(String::new()) } else { Err(fail()) })
}

fn differ<R: Coeff>(a: &Series<R>, b: &Series<R>) -> Option<String> {
    let d = a.differences(b);
    if d.is_empty() && a.constant() == b.constant() {
        None
    } else {
        Some(format!(
            "differ at {}",
            d.iter().take(4).map(|w| format!("({w})")).collect::<Vec<_>>().join(" ")
        ))
    }
}

fn equal<R: Coeff>(a: &Series<R>, b: &Series<R>) -> Result<Outcome> {
    Ok(match differ(a, b) {
        None => Ok(String::new()),
        Some(e) => Err(e),
    })
}

/// Runs every check, concurrently when enabled, sorted by name.
pub fn run_all(config: &VerifyConfig) -> Vec<CheckReport> {
    let checks = checks();
    let mut reports = par::map(&checks, |(name, check)| {
        let (status, detail) = match check(config) {
            Ok(Ok(d)) => (Status::Pass, d),
            Ok(Err(d)) => (Status::Fail, d),
            Err(e) => (Status::Fail, format!("error: {e}")),
        };
        CheckReport {
            check: name.clone(),
            status,
            detail,
        }
    });
    reports.sort_by(|a, b| a.check.cmp(&b.check));
    reports
}

fn checks() -> Vec<(String, CheckFn)> {
    let mut v: Vec<(String, CheckFn)> = vec![
        ("nc.catalan".into(), nc_catalan),
        ("nc.kreweras".into(), nc_kreweras),
        ("uniprod.marginal".into(), uniprod_marginal),
        ("conv.associativity".into(), conv_associativity),
        ("conv.units".into(), conv_units),
        ("conv.commutativity".into(), conv_commutativity),
        ("conv.noncommutativity".into(), conv_noncommutativity),
        ("conv.homogeneity".into(), conv_homogeneity),
        ("conv.automorphism".into(), conv_automorphism),
        ("boxtimesv.inverse".into(), boxtimesv_inverse),
        ("boxtimesv.decomposition".into(), boxtimesv_decomposition),
        ("boxed.group".into(), boxed_group),
        ("boxed.homogeneity".into(), boxed_homogeneity),
        ("boxed.moeb".into(), boxed_moeb),
        ("boxed.bridge".into(), boxed_bridge),
        ("boxed.cumulant_additivity".into(), boxed_cumulant_additivity),
        ("flow.roundtrip".into(), flow_roundtrip),
        ("flow.powers".into(), flow_powers),
        ("flow.additivity".into(), flow_additivity),
        ("flow.homogeneity".into(), flow_homogeneity),
        ("flow.pyramid".into(), flow_pyramid),
        ("flow.free_cumulants".into(), flow_free_cumulants),
        ("flow.r_differential".into(), flow_r_differential),
        ("shuffle.oracle".into(), shuffle_oracle),
    ];
    v.sort_by(|a, b| a.0.cmp(&b.0));
    v
}

fn nc_catalan(c: &VerifyConfig) -> Result<Outcome> {
    let top = (c.max_deg + 4).clamp(8, MAX_NC);
    for n in 1..=top {
        let count = enumerate_nc(n)?.len() as u64;
        if count != catalan(n) {
            return Ok(Err(format!("|NC({n})| = {count}, expected {}", catalan(n))));
        }
    }
    Ok(Ok(format!("n = 1..{top}")))
}

fn nc_kreweras(_: &VerifyConfig) -> Result<Outcome> {
    for n in 1..=8 {
        let parts = enumerate_nc(n)?;
        let mut images = Vec::with_capacity(parts.len());
        for p in &parts {
            let k = kreweras(p);
            if p.num_blocks() + k.num_blocks() != n + 1 {
                return Ok(Err(format!("|π| + |K(π)| ≠ {} for {p}", n + 1)));
            }
            images.push(k.to_string());
        }
        images.sort();
        images.dedup();
        if images.len() != parts.len() {
            return Ok(Err(format!("K is not injective on NC({n})")));
        }
    }
    Ok(Ok("n = 1..8".into()))
}

fn uniprod_marginal(c: &VerifyConfig) -> Result<Outcome> {
    let mut rng = c.sampler(1);
    let f = rng.series(&c.alphabet, c.max_deg, Constant::Zero);
    let g = rng.series(&c.alphabet, c.max_deg, Constant::Zero);
    let zero = Series::zero(&c.alphabet, c.max_deg, Constant::Zero);
    for kind in ProductKind::ALL {
        for w in c.words() {
            let left = crate::words::FreeMonomial::from_blocks([(crate::words::Leg::One, w.clone())])?;
            let right = left.swap_legs();
            let a = crate::uniprod::eval_product(kind, &f, &g, &left)?;
            let b = crate::uniprod::eval_product(kind, &f, &g, &right)?;
            if a != f.get(&w) || b != g.get(&w) {
                return Ok(Err(format!("{kind}: marginal fails at ({w})")));
            }
        }
        if convolve(kind, &DualGroupSpec::Additive, &f, &zero)? != f {
            return Ok(Err(format!("{kind}: f ⋆ 0 ≠ f")));
        }
    }
    Ok(Ok(String::new()))
}

fn flavors() -> [DualGroupSpec; 2] {
    [DualGroupSpec::Additive, DualGroupSpec::Multiplicative]
}

fn conv_associativity(c: &VerifyConfig) -> Result<Outcome> {
    let mut rng = c.sampler(2);
    let d = c.max_deg.min(4);
    for spec in flavors() {
        let k = spec.constant();
        let (f, g, h) = (
            rng.series(&c.alphabet, d, k),
            rng.series(&c.alphabet, d, k),
            rng.series(&c.alphabet, d, k),
        );
        for kind in ProductKind::ALL {
            let lhs = convolve(kind, &spec, &convolve(kind, &spec, &f, &g)?, &h)?;
            let rhs = convolve(kind, &spec, &f, &convolve(kind, &spec, &g, &h)?)?;
            if let Some(e) = differ(&lhs, &rhs) {
                return Ok(Err(format!("{kind}/{spec}: {e}")));
            }
        }
    }
    Ok(Ok(format!("max_deg {d}")))
}

/// Which sides `1̲` is a unit on for the multiplicative flavour.
pub fn multiplicative_unit_sides(kind: ProductKind) -> (bool, bool) {
    match kind {
        ProductKind::Tensor | ProductKind::Free => (true, true),
        ProductKind::Monotone => (false, true),
        ProductKind::AntiMonotone => (true, false),
        ProductKind::Boolean => (false, false),
    }
}

fn conv_units(c: &VerifyConfig) -> Result<Outcome> {
    let mut rng = c.sampler(3);
    let d = c.max_deg.min(4);
    let f = rng.series(&c.alphabet, d, Constant::Zero);
    let zero = Series::zero(&c.alphabet, d, Constant::Zero);
    for kind in ProductKind::ALL {
        let spec = DualGroupSpec::Additive;
        if convolve(kind, &spec, &f, &zero)? != f || convolve(kind, &spec, &zero, &f)? != f {
            return Ok(Err(format!("{kind}/additive: 0 is not a two-sided unit")));
        }
    }
    let f = rng.series(&c.alphabet, d, Constant::One);
    let one = Series::ones(&c.alphabet, d);
    let spec = DualGroupSpec::Multiplicative;
    for kind in ProductKind::ALL {
        let (left, right) = multiplicative_unit_sides(kind);
        let is_left = convolve(kind, &spec, &one, &f)? == f;
        let is_right = convolve(kind, &spec, &f, &one)? == f;
        if (left, right) != (is_left, is_right) {
            return Ok(Err(format!(
                "{kind}/multiplicative: 1̲ left unit {is_left}, right unit {is_right}"
            )));
        }
    }
    // boolean: f ⋆ g only sees single-letter coefficients, so nothing is a unit
    let mut g = f.clone();
    if let Some(w) = c.words().into_iter().find(|w| w.len() >= 2) {
        let v = g.get(&w).add(&Rational::one());
        g.set(w, v)?;
        let probe = rng.series(&c.alphabet, d, Constant::One);
        let a = convolve(ProductKind::Boolean, &spec, &probe, &f)?;
        let b = convolve(ProductKind::Boolean, &spec, &probe, &g)?;
        if a != b {
            return Ok(Err("boolean/multiplicative reads more than single letters".into()));
        }
    }
    Ok(Ok(String::new()))
}

fn conv_commutativity(c: &VerifyConfig) -> Result<Outcome> {
    let mut rng = c.sampler(4);
    let d = c.max_deg.min(4);
    for spec in flavors() {
        let k = spec.constant();
        let (f, g) = (rng.series(&c.alphabet, d, k), rng.series(&c.alphabet, d, k));
        for kind in [ProductKind::Tensor, ProductKind::Free, ProductKind::Boolean] {
            let diff = differ(&convolve(kind, &spec, &f, &g)?, &convolve(kind, &spec, &g, &f)?);
            // ⊠_V is abelian only on one letter; for s ≥ 2 it must fail to commute
            let abelian = spec.is_additive() || kind != ProductKind::Free || c.alphabet.size() == 1;
            match (diff, abelian) {
                (Some(e), true) => return Ok(Err(format!("{kind}/{spec}: {e}"))),
                (None, false) if d >= 3 => return Ok(Err(format!("{kind}/{spec} commuted for s ≥ 2"))),
                _ => {}
            }
        }
    }
    Ok(Ok(String::new()))
}

fn conv_noncommutativity(c: &VerifyConfig) -> Result<Outcome> {
    if c.max_deg < 3 {
        return Ok(Ok("skipped below degree 3".into()));
    }
    let mut rng = c.sampler(5);
    let mut found = Vec::new();
    for spec in flavors() {
        let k = spec.constant();
        for kind in [ProductKind::Monotone, ProductKind::AntiMonotone] {
            let mut witnessed = false;
            for _ in 0..8 {
                let (f, g) = (rng.series(&c.alphabet, 3, k), rng.series(&c.alphabet, 3, k));
                let (a, b) = (convolve(kind, &spec, &f, &g)?, convolve(kind, &spec, &g, &f)?);
                if a.differences(&b).iter().any(|w| c.alphabet.degree(w).unwrap() == 3) {
                    witnessed = true;
                    break;
                }
            }
            if !witnessed {
                return Ok(Err(format!("no degree-3 witness for {kind}/{spec}")));
            }
            found.push(format!("{kind}/{spec}"));
        }
    }
    Ok(Ok(format!("witnesses: {}", found.join(", "))))
}

fn law_weight(alphabet: &Alphabet) -> impl Fn(&str) -> Option<u64> + '_ {
    move |name: &str| {
        let w: Word = name.get(2..)?.parse().ok()?;
        alphabet.degree(&w).ok().map(|d| d as u64)
    }
}

fn conv_homogeneity(c: &VerifyConfig) -> Result<Outcome> {
    let d = c.max_deg.min(4);
    for kind in ProductKind::ALL {
        for w in c.alphabet.enumerate_words(d) {
            let law = group_law(kind, &DualGroupSpec::Additive, &c.alphabet, &w)?;
            let deg = c.alphabet.degree(&w)? as u64;
            if law.weighted_degree(law_weight(&c.alphabet))? != Homogeneity::Homogeneous(deg) {
                return Ok(Err(format!("{kind}/additive law at ({w}) is not of weight {deg}")));
            }
        }
    }
    Ok(Ok(format!("words up to degree {d}")))
}

fn scaling_factors() -> [Rational; 3] {
    [Rational::from(2), Rational::from(-1), Rational::new(1, 3).unwrap()]
}

fn conv_automorphism(c: &VerifyConfig) -> Result<Outcome> {
    let mut rng = c.sampler(6);
    let d = c.max_deg.min(4);
    let mut groups = Vec::new();
    for g in GroupHandle::all() {
        let Some(profile) = g.weight_profile() else { continue };
        let which = if g == GroupHandle::Boxed { Some(GroupSet::Unipotent) } else { None };
        let sample = |rng: &mut SeriesSampler| match which {
            Some(set) => rng.group_series(&c.alphabet, d, Constant::Zero, set),
            None => rng.series(&c.alphabet, d, Constant::Zero),
        };
        let (f, h) = (sample(&mut rng), sample(&mut rng));
        for lambda in scaling_factors() {
            let lhs = g.multiply(&f.scale(&lambda, profile)?, &h.scale(&lambda, profile)?)?;
            let rhs = g.multiply(&f, &h)?.scale(&lambda, profile)?;
            if let Some(e) = differ(&lhs, &rhs) {
                return Ok(Err(format!("δ_{lambda} on {g}: {e}")));
            }
        }
        groups.push(g.to_string());
    }
    Ok(Ok(groups.join(", ")))
}

fn boxtimesv_inverse(c: &VerifyConfig) -> Result<Outcome> {
    let mut rng = c.sampler(7);
    let d = c.max_deg.min(4);
    let one = Series::ones(&c.alphabet, d);
    for _ in 0..3 {
        let f = rng.group_series(&c.alphabet, d, Constant::One, GroupSet::Invertible);
        let inv = boxtimes_v_inverse(&f)?;
        if boxtimes_v(&f, &inv)? != one || boxtimes_v(&inv, &f)? != one {
            return Ok(Err("f ⊠_V f⁻¹ ≠ 1̲".into()));
        }
    }
    Ok(Ok(String::new()))
}

fn boxtimesv_decomposition(c: &VerifyConfig) -> Result<Outcome> {
    let words: Vec<Word> = c.words().into_iter().filter(|w| w.len() <= 5).collect();
    let reports = par::try_map(&words, |w| verify_decomposition(&c.alphabet, w))?;
    match reports.iter().find(|r| !r.passed()) {
        Some(r) => Ok(Err(format!(
            "({}) coefficients {}, {}, {} (boolean expected {})",
            r.word, r.monotone, r.antimonotone, r.boolean, r.expected_boolean
        ))),
        None => Ok(Ok(format!("{} words", words.len()))),
    }
}

fn boxed_group(c: &VerifyConfig) -> Result<Outcome> {
    let mut rng = c.sampler(8);
    let d = c.max_deg.min(5);
    let neutral = Series::boxed_unit(&c.alphabet, d);
    let sample = |rng: &mut SeriesSampler| rng.group_series(&c.alphabet, d, Constant::Zero, GroupSet::Invertible);
    let (f, g, h) = (sample(&mut rng), sample(&mut rng), sample(&mut rng));
    if let Some(e) = differ(&boxed_mul(&boxed_mul(&f, &g)?, &h)?, &boxed_mul(&f, &boxed_mul(&g, &h)?)?) {
        return Ok(Err(format!("associativity: {e}")));
    }
    if boxed_mul(&f, &neutral)? != f || boxed_mul(&neutral, &f)? != f {
        return Ok(Err("neutral element".into()));
    }
    let inv = crate::boxed::boxed_inverse(&f)?;
    if boxed_mul(&f, &inv)? != neutral || boxed_mul(&inv, &f)? != neutral {
        return Ok(Err("inverse".into()));
    }
    let commutes = boxed_mul(&f, &g)? == boxed_mul(&g, &f)?;
    ensure(commutes == (c.alphabet.size() == 1), || {
        format!("commutativity is {commutes} at s = {}", c.alphabet.size())
    })
}

fn boxed_homogeneity(c: &VerifyConfig) -> Result<Outcome> {
    let d = c.max_deg.min(5);
    for w in c.alphabet.enumerate_words(d) {
        let law = boxed_group_law(&c.alphabet, &w, true)?;
        let weight = |name: &str| name.get(2..)?.parse::<Word>().ok().map(|u| u.len() as u64 - 1);
        let expected = Homogeneity::Homogeneous(w.len() as u64 - 1);
        if law.weighted_degree(weight)? != expected {
            return Ok(Err(format!("boxed law at ({w}) is not of weight {}", w.len() - 1)));
        }
    }
    Ok(Ok(format!("words up to degree {d}")))
}

fn boxed_moeb(c: &VerifyConfig) -> Result<Outcome> {
    let one = Alphabet::new(1)?;
    let n_max = c.max_deg.max(6);
    let m: Series<Rational> = moeb(&one, n_max);
    for n in 1..=n_max {
        let expected = Rational::from(if n % 2 == 1 { 1 } else { -1 } * catalan(n - 1) as i64);
        if m.get(&Word::new(vec![1; n])) != expected {
            return Ok(Err(format!("Moeb at length {n} is {}", m.get(&Word::new(vec![1; n])))));
        }
    }
    let zeta: Series<Rational> = Series::zeta(&c.alphabet, c.max_deg);
    let mb = moeb(&c.alphabet, c.max_deg);
    let neutral = Series::boxed_unit(&c.alphabet, c.max_deg);
    if boxed_mul(&zeta, &mb)? != neutral || boxed_mul(&mb, &zeta)? != neutral {
        return Ok(Err("Zeta ⊠ Moeb ≠ neutral".into()));
    }
    Ok(Ok(format!("lengths 1..{n_max}")))
}

fn boxed_bridge(c: &VerifyConfig) -> Result<Outcome> {
    let mut rng = c.sampler(9);
    let d = c.max_deg.min(4);
    for i in 0..20 {
        let f = rng.group_series(&c.alphabet, d, Constant::One, GroupSet::Invertible);
        let g = rng.group_series(&c.alphabet, d, Constant::One, GroupSet::Invertible);
        let report = verify_boxv_bridge(&f, &g)?;
        if !report.passed() {
            return Ok(Err(format!("pair {i}: pipelines differ at ({})", report.mismatches[0])));
        }
    }
    Ok(Ok("20 pairs".into()))
}

fn boxed_cumulant_additivity(c: &VerifyConfig) -> Result<Outcome> {
    let mut rng = c.sampler(10);
    let d = c.max_deg.min(4);
    let f = rng.series(&c.alphabet, d, Constant::Zero);
    let g = rng.series(&c.alphabet, d, Constant::Zero);
    let sum = r_transform(&f)?.add(&r_transform(&g)?)?;
    equal(&r_transform(&boxplus_v(&f, &g)?)?, &sum)
}

fn flow_groups() -> Vec<GroupHandle> {
    GroupHandle::all()
}

fn flow_sample(g: &GroupHandle, rng: &mut SeriesSampler, alphabet: &Alphabet, d: usize) -> Series<Rational> {
    match g {
        GroupHandle::Labelled { .. } => rng.series(alphabet, d, Constant::Zero),
        GroupHandle::Boxed => rng.group_series(alphabet, d, Constant::Zero, GroupSet::Unipotent),
        GroupHandle::BoxTimesV => rng.group_series(alphabet, d, Constant::One, GroupSet::Unipotent),
    }
}

fn flow_roundtrip(c: &VerifyConfig) -> Result<Outcome> {
    let mut rng = c.sampler(11);
    let d = c.max_deg.min(4);
    for g in flow_groups() {
        let f = flow_sample(&g, &mut rng, &c.alphabet, d);
        let xi = log_map(&g, &f)?;
        if let Some(e) = differ(&exp_map(&g, &xi)?, &f) {
            return Ok(Err(format!("EXP ∘ LOG on {g}: {e}")));
        }
        let xi = crate::flowlog::CumulantVector::new(Series::filled(&c.alphabet, d, Constant::Zero, |w| {
            if g.sigma(&c.alphabet, w) == 0 {
                Rational::zero()
            } else {
                rng.rational()
            }
        }));
        if let Some(e) = differ(log_map(&g, &exp_map(&g, &xi)?)?.as_series(), xi.as_series()) {
            return Ok(Err(format!("LOG ∘ EXP on {g}: {e}")));
        }
    }
    Ok(Ok(String::new()))
}

fn flow_powers(c: &VerifyConfig) -> Result<Outcome> {
    let mut rng = c.sampler(12);
    let d = c.max_deg.min(4);
    for g in flow_groups() {
        let f = flow_sample(&g, &mut rng, &c.alphabet, d);
        let base = log_map(&g, &f)?;
        for n in -2i64..=3 {
            let lhs = log_map(&g, &group_power(&g, &f, n)?)?;
            let rhs = base.scale_by(&Rational::from(n));
            if let Some(e) = differ(lhs.as_series(), rhs.as_series()) {
                return Ok(Err(format!("LOG(f^{n}) on {g}: {e}")));
            }
        }
    }
    Ok(Ok("n = -2..3".into()))
}

fn flow_additivity(c: &VerifyConfig) -> Result<Outcome> {
    let mut rng = c.sampler(13);
    let d = c.max_deg.min(4);
    for kind in [ProductKind::Tensor, ProductKind::Free, ProductKind::Boolean] {
        let g = GroupHandle::additive(kind);
        let (f, h) = (flow_sample(&g, &mut rng, &c.alphabet, d), flow_sample(&g, &mut rng, &c.alphabet, d));
        let lhs = log_map(&g, &g.multiply(&f, &h)?)?;
        let rhs = log_map(&g, &f)?.add(&log_map(&g, &h)?)?;
        if let Some(e) = differ(lhs.as_series(), rhs.as_series()) {
            return Ok(Err(format!("{g}: {e}")));
        }
        let (xi, eta) = (log_map(&g, &f)?, log_map(&g, &h)?);
        if let Some(e) = differ(bch_law(&g, &xi, &eta)?.as_series(), xi.add(&eta)?.as_series()) {
            return Ok(Err(format!("BCH on {g}: {e}")));
        }
    }
    if d >= 3 {
        let g = GroupHandle::additive(ProductKind::Monotone);
        let (f, h) = (flow_sample(&g, &mut rng, &c.alphabet, d), flow_sample(&g, &mut rng, &c.alphabet, d));
        let (xi, eta) = (log_map(&g, &f)?, log_map(&g, &h)?);
        if bch_law(&g, &xi, &eta)? == bch_law(&g, &eta, &xi)? {
            return Ok(Err("monotone BCH law commuted on random input".into()));
        }
    }
    Ok(Ok(String::new()))
}

fn flow_homogeneity(c: &VerifyConfig) -> Result<Outcome> {
    let mut rng = c.sampler(14);
    let d = c.max_deg.min(4);
    for g in flow_groups() {
        let Some(profile) = g.weight_profile() else { continue };
        let f = flow_sample(&g, &mut rng, &c.alphabet, d);
        for lambda in scaling_factors() {
            let lhs = log_map(&g, &f.scale(&lambda, profile)?)?;
            let rhs = log_map(&g, &f)?.into_series().scale(&lambda, profile)?;
            if let Some(e) = differ(lhs.as_series(), &rhs) {
                return Ok(Err(format!("λ = {lambda} on {g}: {e}")));
            }
        }
    }
    Ok(Ok(String::new()))
}

fn flow_pyramid(c: &VerifyConfig) -> Result<Outcome> {
    let mut rng = c.sampler(15);
    let d = c.max_deg.min(4);
    for g in flow_groups() {
        let f = flow_sample(&g, &mut rng, &c.alphabet, d);
        let unit: Series<Rational> = g.unit(&c.alphabet, d);
        let shape = |f: &Series<Rational>| -> Result<Series<Rational>> {
            let l = log_map(&g, f)?;
            l.as_series().sub_coeffs(&f.sub_coeffs(&unit)?)
        };
        let base = shape(&f)?;
        for v in c.alphabet.enumerate_words(d) {
            let sv = g.sigma(&c.alphabet, &v);
            if sv == 0 {
                continue;
            }
            let mut p = f.clone();
            let bumped = p.get(&v).add(&rng.nonzero_rational());
            p.set(v.clone(), bumped)?;
            let moved = shape(&p)?;
            for w in c.alphabet.enumerate_words(d) {
                if g.sigma(&c.alphabet, &w) <= sv && moved.get(&w) != base.get(&w) {
                    return Ok(Err(format!("{g}: LOG(f)_({w}) - f_({w}) depends on f_({v})")));
                }
            }
        }
    }
    Ok(Ok(String::new()))
}

fn flow_free_cumulants(c: &VerifyConfig) -> Result<Outcome> {
    let mut rng = c.sampler(16);
    let d = c.max_deg.min(4);
    let g = GroupHandle::additive(ProductKind::Free);
    let f = rng.series(&c.alphabet, d, Constant::Zero);
    let log = log_map(&g, &f)?;
    let r = r_transform(&f)?;
    for w in c.alphabet.enumerate_words(d.min(2)) {
        if log.as_series().get(&w) != r.get(&w) {
            return Ok(Err(format!("LOG and R differ at ({w})")));
        }
    }
    let check = r_transform_differential_check(&c.alphabet, d)?;
    ensure(check.triangular_mismatches.is_empty(), || {
        format!("LOG ∘ R⁻¹ not unipotent at ({})", check.triangular_mismatches[0])
    })
}

fn flow_r_differential(c: &VerifyConfig) -> Result<Outcome> {
    let d = c.max_deg.min(3);
    let check = r_transform_differential_check(&c.alphabet, d)?;
    ensure(check.linear_mismatches.is_empty(), || {
        format!("ε-linear part of R is not h at ({})", check.linear_mismatches[0])
    })
}

fn shuffle_oracle(c: &VerifyConfig) -> Result<Outcome> {
    let mut rng = c.sampler(17);
    let d = c.max_deg.min(4);
    for i in 0..10 {
        let f = random_character(&mut rng, &c.alphabet, d, 3)?;
        if !is_character(&f) {
            return Ok(Err(format!("sample {i} is not a character")));
        }
        let flow = log_map(&ShuffleGroup, &f)?;
        if let Some(e) = differ(flow.as_series(), &hopf_log(&f)?) {
            return Ok(Err(format!("sample {i}: {e}")));
        }
    }
    Ok(Ok("10 characters".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes_on_small_alphabets() {
        for (s, d) in [(1, 4), (2, 3)] {
            let reports = run_all(&VerifyConfig::new(s, d, 7).unwrap());
            let failed: Vec<_> = reports.iter().filter(|r| !r.passed()).collect();
            assert!(failed.is_empty(), "s = {s}, max_deg = {d}: {failed:#?}");
            assert!(reports.windows(2).all(|p| p[0].check < p[1].check));
        }
    }
}
