//! Acceptance criteria, one line per criterion. Exact arithmetic throughout.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use ncprob::boxed::{boxed_group_law, boxed_mul, moeb, r_transform, verify_boxv_bridge};
use ncprob::coeff::{Coeff, Homogeneity, Monomial};
use ncprob::dualconv::{
    boxtimes_v, boxtimes_v_inverse, convolve, group_law, verify_decomposition, DualGroupSpec,
};
use ncprob::flowlog::{
    exp_map, group_power, log_map, r_transform_differential_check, ConvolutionGroup, CumulantVector, Graded,
    GroupHandle,
};
use ncprob::ncpart::{enumerate_nc, kreweras};
use ncprob::random::SeriesSampler;
use ncprob::shuffle::{hopf_log, is_character, random_character, ShuffleGroup};
use ncprob::uniprod::eval_free_symbolic;
use ncprob::{Alphabet, Constant, FreeMonomial, GroupSet, Leg, Poly, ProductKind, Rational, Series, Word};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! check {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn rat(p: i64, q: i64) -> Rational {
    Rational::new(p, q).unwrap()
}

fn alphabets() -> [Alphabet; 2] {
    [Alphabet::new(1).unwrap(), Alphabet::new(2).unwrap()]
}

fn nc_combinatorics() -> Outcome {
    let catalan = [1usize, 2, 5, 14, 42, 132, 429, 1430];
    for n in 1..=8 {
        let parts = enumerate_nc(n).unwrap();
        check!(parts.len() == catalan[n - 1], "|NC({n})| = {}", parts.len());
        let all: BTreeSet<String> = parts.iter().map(|p| p.to_string()).collect();
        let mut images = BTreeSet::new();
        for p in parts.iter() {
            let k = kreweras(p);
            check!(p.num_blocks() + k.num_blocks() == n + 1, "|π|+|K(π)| fails for {p}");
            images.insert(k.to_string());
        }
        check!(images == all, "K is not a bijection of NC({n})");
    }
    Ok("n = 1..8".into())
}

/// `(coefficient, f-words, g-words)` of the known free-product expansions.
type Term = (i64, &'static [&'static [u32]], &'static [&'static [u32]]);

const FIVE_BLOCKS: &[Term] = &[
    (1, &[&[1, 2, 3]], &[&[1], &[2]]),
    (1, &[&[1, 3], &[2]], &[&[1, 2]]),
    (-1, &[&[1, 3], &[2]], &[&[1], &[2]]),
];

const SIX_BLOCKS: &[Term] = &[
    (1, &[&[1, 2, 3]], &[&[1], &[2], &[3]]),
    (1, &[&[1], &[2], &[3]], &[&[1, 2, 3]]),
    (1, &[&[1, 3], &[2]], &[&[1, 2], &[3]]),
    (-1, &[&[1, 3], &[2]], &[&[1], &[2], &[3]]),
    (1, &[&[1, 2], &[3]], &[&[1], &[2, 3]]),
    (-1, &[&[1], &[2], &[3]], &[&[1], &[2, 3]]),
    (-1, &[&[1], &[2, 3]], &[&[1], &[2], &[3]]),
    (-1, &[&[1], &[2], &[3]], &[&[1, 2], &[3]]),
    (-1, &[&[1, 2], &[3]], &[&[1], &[2], &[3]]),
    (1, &[&[1], &[2, 3]], &[&[1, 3], &[2]]),
    (-1, &[&[1], &[2], &[3]], &[&[1, 3], &[2]]),
    (2, &[&[1], &[2], &[3]], &[&[1], &[2], &[3]]),
];

fn transcribe(terms: &[Term]) -> Poly {
    let name = |p: &str, w: &[u32]| format!("{p}:{}", Word::new(w.to_vec()));
    terms.iter().fold(Poly::zero(), |acc, (c, fs, gs)| {
        let names: Vec<String> = fs.iter().map(|w| name("X", w)).chain(gs.iter().map(|w| name("Y", w))).collect();
        let m = Monomial::from_names(names.iter().map(|n| (n.as_str(), 1)));
        acc.add(&Poly::term(Rational::from(*c), m))
    })
}

fn free_product_expansions() -> Outcome {
    let a = Alphabet::new(3).unwrap();
    let five = FreeMonomial::from_letters([(Leg::One, 1), (Leg::Two, 1), (Leg::One, 2), (Leg::Two, 2), (Leg::One, 3)]).unwrap();
    let six = five.mul(&FreeMonomial::from_letters([(Leg::Two, 3)]).unwrap());
    check!(six.len() == 6, "monomial {six} has {} blocks", six.len());
    for (m, terms) in [(&five, FIVE_BLOCKS), (&six, SIX_BLOCKS)] {
        let got = eval_free_symbolic(&a, m).unwrap();
        let expected = transcribe(terms);
        check!(got.len() == terms.len(), "{m}: {} terms, expected {}", got.len(), terms.len());
        check!(got == expected, "{m}: got {got}, expected {expected}");
    }
    Ok("3 and 12 terms".into())
}

fn unit_sides(kind: ProductKind) -> (bool, bool) {
    match kind {
        ProductKind::Tensor | ProductKind::Free => (true, true),
        ProductKind::Monotone => (false, true),
        ProductKind::AntiMonotone => (true, false),
        ProductKind::Boolean => (false, false),
    }
}

fn monoid_laws() -> Outcome {
    let mut rng = SeriesSampler::new(303);
    let specs = [DualGroupSpec::Additive, DualGroupSpec::Multiplicative];
    for a in alphabets() {
        let s = a.size();
        for spec in &specs {
            let k = spec.constant();
            let unit = match k {
                Constant::Zero => Series::zero(&a, 4, k),
                Constant::One => Series::ones(&a, 4),
            };
            for kind in ProductKind::ALL {
                let (f, g, h) = (rng.series(&a, 4, k), rng.series(&a, 4, k), rng.series(&a, 4, k));
                let c = |x: &Series<Rational>, y: &Series<Rational>| convolve(kind, spec, x, y).unwrap();
                check!(c(&c(&f, &g), &h) == c(&f, &c(&g, &h)), "{kind}/{spec} s={s}: associativity");
                let (left, right) = if spec.is_additive() { (true, true) } else { unit_sides(kind) };
                check!((c(&unit, &f) == f) == left, "{kind}/{spec} s={s}: left unit should be {left}");
                check!((c(&f, &unit) == f) == right, "{kind}/{spec} s={s}: right unit should be {right}");
                let commutes = c(&f, &g) == c(&g, &f);
                let expected = match kind {
                    ProductKind::Tensor | ProductKind::Boolean => true,
                    ProductKind::Free => spec.is_additive() || s == 1,
                    _ => false,
                };
                check!(commutes == expected, "{kind}/{spec} s={s}: commutativity {commutes}");
                if !expected {
                    let at_three = c(&f, &g).differences(&c(&g, &f)).iter().any(|w| w.len() == 3);
                    check!(at_three, "{kind}/{spec} s={s}: no degree-3 witness");
                }
            }
            // no multiplicative boolean unit: the product only reads single letters of the right factor
            if !spec.is_additive() {
                let f = rng.series(&a, 4, k);
                let mut g = f.clone();
                let w = Word::new(vec![1; 3]);
                let bumped = g.coefficient(&w).unwrap().add(&Rational::one());
                g.set(w, bumped).unwrap();
                let probe = rng.series(&a, 4, k);
                check!(
                    convolve(ProductKind::Boolean, spec, &probe, &f).unwrap()
                        == convolve(ProductKind::Boolean, spec, &probe, &g).unwrap(),
                    "boolean/multiplicative unexpectedly reads longer words"
                );
            }
        }
    }
    Ok("s = 1, 2; max_deg 4".into())
}

fn bridge_identity() -> Outcome {
    let mut rng = SeriesSampler::new(404);
    for a in alphabets() {
        for i in 0..20 {
            let f = rng.group_series(&a, 4, Constant::One, GroupSet::Invertible);
            let g = rng.group_series(&a, 4, Constant::One, GroupSet::Invertible);
            let report = verify_boxv_bridge(&f, &g).unwrap();
            check!(report.passed(), "s={} pair {i}: mismatch at {:?}", a.size(), report.mismatches);
        }
    }
    Ok("20 pairs per alphabet, s = 1, 2".into())
}

fn catalan(n: usize) -> i64 {
    let mut c = vec![1i64];
    for m in 1..=n {
        c.push((0..m).map(|k| c[k] * c[m - 1 - k]).sum());
    }
    c[n]
}

fn canonical_decomposition() -> Outcome {
    let mut count = 0;
    for a in alphabets() {
        for w in a.enumerate_words(5) {
            let r = verify_decomposition(&a, &w).unwrap();
            let n = w.len();
            let expected = Rational::from(if n % 2 == 1 { 1 } else { -1 } * catalan(n - 1));
            check!(r.monotone.is_one() && r.antimonotone.is_one(), "({w}): pure terms {} {}", r.monotone, r.antimonotone);
            check!(r.boolean == expected, "({w}): boolean coefficient {} expected {expected}", r.boolean);
            count += 1;
        }
    }
    Ok(format!("{count} words"))
}

/// Cancels `F:i * P:i`, where `P:i` stands for `1/F:i`.
fn reduce_inverses(p: &Poly) -> Poly {
    p.terms().fold(Poly::zero(), |acc, (m, c)| {
        let factors = m.named_factors();
        let exp = |n: &str| factors.iter().find(|(k, _)| &**k == n).map_or(0, |(_, e)| *e);
        let mut kept: Vec<(String, u32)> = Vec::new();
        for (name, e) in &factors {
            let e = if let Some(rest) = name.strip_prefix("F:") {
                e.saturating_sub(exp(&format!("P:{rest}")))
            } else if let Some(rest) = name.strip_prefix("P:") {
                e.saturating_sub(exp(&format!("F:{rest}")))
            } else {
                *e
            };
            if e > 0 {
                kept.push((name.to_string(), e));
            }
        }
        acc.add(&Poly::term(c.clone(), Monomial::from_names(kept.iter().map(|(n, e)| (n.as_str(), *e)))))
    })
}

fn boxtimes_v_inverse_check() -> Outcome {
    // displayed coefficients, with P:i = 1/f_i
    let a = Alphabet::new(2).unwrap();
    let f = Series::symbolic(&a, 2, "F", Constant::One);
    let p = |i: u32| Poly::var(&format!("P:{i}"));
    let g = Series::filled(&a, 2, Constant::One, |w| match w.letters() {
        [i] => p(*i),
        [i, j] => {
            let pp = p(*i).mul(&p(*j));
            let fij = Poly::var(&format!("F:{i},{j}"));
            pp.mul(&Poly::constant(Rational::from(2)).sub(&fij.mul(&pp)))
        }
        _ => unreachable!(),
    });
    for (x, y, side) in [(&f, &g, "f ⊠_V g"), (&g, &f, "g ⊠_V f")] {
        let prod = boxtimes_v(x, y).unwrap();
        for w in a.enumerate_words(2) {
            let v = reduce_inverses(&prod.coefficient(&w).unwrap());
            check!(v.is_one(), "{side} at ({w}) reduces to {v}");
        }
    }
    // the solver reproduces them on the unipotent slice and on rational points
    let unipotent = Series::filled(&a, 2, Constant::One, |w| {
        if w.len() == 1 { Poly::one() } else { Poly::var(&format!("F:{w}")) }
    });
    let inv = boxtimes_v_inverse(&unipotent).unwrap();
    check!(inv.coefficient(&Word::from([1, 2])).unwrap().to_string() == "2 - F:1,2", "unipotent slice: {}", inv.coefficient(&Word::from([1, 2])).unwrap());
    let mut rng = SeriesSampler::new(606);
    for a in alphabets() {
        let one = Series::ones(&a, 4);
        for _ in 0..5 {
            let f = rng.group_series(&a, 4, Constant::One, GroupSet::Invertible);
            let inv = boxtimes_v_inverse(&f).unwrap();
            check!(boxtimes_v(&f, &inv).unwrap() == one && boxtimes_v(&inv, &f).unwrap() == one, "two-sided inverse fails");
            for w in a.enumerate_words(2) {
                let fi = |k: usize| f.coefficient(&Word::letter(w.letters()[k])).unwrap();
                let expected = match w.len() {
                    1 => fi(0).recip().unwrap(),
                    _ => {
                        let d = &fi(0) * &fi(1);
                        &d.recip().unwrap() * &(&Rational::from(2) - &f.coefficient(&w).unwrap().checked_div(&d).unwrap())
                    }
                };
                check!(inv.coefficient(&w).unwrap() == expected, "solver at ({w})");
            }
        }
    }
    Ok("symbolic identities and solver agreement, max_deg 4".into())
}

fn moebius() -> Outcome {
    let one = Alphabet::new(1).unwrap();
    let m: Series<Rational> = moeb(&one, 6);
    for n in 1..=6 {
        let expected = Rational::from(if n % 2 == 1 { 1 } else { -1 } * catalan(n - 1));
        let got = m.coefficient(&Word::new(vec![1; n])).unwrap();
        check!(got == expected, "Moeb_{n} = {got}, expected {expected}");
    }
    for a in alphabets() {
        let zeta: Series<Rational> = Series::zeta(&a, 5);
        let mb = moeb(&a, 5);
        let neutral = Series::boxed_unit(&a, 5);
        check!(boxed_mul(&zeta, &mb).unwrap() == neutral, "Zeta ⊠ Moeb, s={}", a.size());
        check!(boxed_mul(&mb, &zeta).unwrap() == neutral, "Moeb ⊠ Zeta, s={}", a.size());
    }
    Ok("n ≤ 6".into())
}

fn word_of(name: &str) -> Word {
    name[2..].parse().unwrap()
}

fn homogeneity() -> Outcome {
    let weighted = Alphabet::with_weights(vec![1, 2]).unwrap();
    for a in alphabets().into_iter().chain([weighted]) {
        for kind in ProductKind::ALL {
            for w in a.enumerate_words(4) {
                let law = group_law(kind, &DualGroupSpec::Additive, &a, &w).unwrap();
                let h = law.weighted_degree(|n| a.degree(&word_of(n)).ok().map(|d| d as u64)).unwrap();
                check!(h == Homogeneity::Homogeneous(a.degree(&w).unwrap() as u64), "{kind} law at ({w}): {h:?}");
            }
        }
    }
    for a in alphabets() {
        for w in a.enumerate_words(5) {
            let law = boxed_group_law(&a, &w, true).unwrap();
            let h = law.weighted_degree(|n| Some(word_of(n).len() as u64 - 1)).unwrap();
            check!(h == Homogeneity::Homogeneous(w.len() as u64 - 1), "boxed law at ({w}): {h:?}");
        }
    }
    let mut rng = SeriesSampler::new(808);
    let lambdas = [Rational::from(2), Rational::from(-1), rat(1, 3)];
    let mut groups = 0;
    for a in alphabets() {
        for g in GroupHandle::all() {
            let Some(profile) = g.weight_profile() else { continue };
            let sample = |rng: &mut SeriesSampler| match g {
                GroupHandle::Boxed => rng.group_series(&a, 4, Constant::Zero, GroupSet::Invertible),
                _ => rng.series(&a, 4, Constant::Zero),
            };
            let (f, h) = (sample(&mut rng), sample(&mut rng));
            for l in &lambdas {
                let lhs = g.multiply(&f.scale(l, profile).unwrap(), &h.scale(l, profile).unwrap()).unwrap();
                let rhs = g.multiply(&f, &h).unwrap().scale(l, profile).unwrap();
                check!(lhs == rhs, "δ_{l} is not an automorphism of {g}");
            }
            groups += 1;
        }
    }
    Ok(format!("laws up to degree 4 (boxed 5); δ_λ on {groups} group instances"))
}

fn sample_member(g: &GroupHandle, rng: &mut SeriesSampler, a: &Alphabet, d: usize) -> Series<Rational> {
    match g {
        GroupHandle::Labelled { .. } => rng.series(a, d, Constant::Zero),
        GroupHandle::Boxed => rng.group_series(a, d, Constant::Zero, GroupSet::Unipotent),
        GroupHandle::BoxTimesV => rng.group_series(a, d, Constant::One, GroupSet::Unipotent),
    }
}

fn log_exp() -> Outcome {
    let mut rng = SeriesSampler::new(909);
    let d = 4;
    for a in alphabets() {
        let s = a.size();
        for g in GroupHandle::all() {
            let f = sample_member(&g, &mut rng, &a, d);
            let xi = log_map(&g, &f).unwrap();
            check!(exp_map(&g, &xi).unwrap() == f, "{g} s={s}: EXP∘LOG");
            let random_xi = CumulantVector::new(Series::filled(&a, d, Constant::Zero, |w| {
                if g.sigma(&a, w) == 0 { Rational::zero() } else { rng.rational() }
            }));
            check!(log_map(&g, &exp_map(&g, &random_xi).unwrap()).unwrap() == random_xi, "{g} s={s}: LOG∘EXP");
            for n in -2i64..=3 {
                let lhs = log_map(&g, &group_power(&g, &f, n).unwrap()).unwrap();
                check!(lhs == xi.scale_by(&Rational::from(n)), "{g} s={s}: LOG(f^{n}) ≠ {n}·LOG(f)");
            }
            if let Some(profile) = g.weight_profile() {
                for l in [Rational::from(2), Rational::from(-1), rat(1, 3)] {
                    let lhs = log_map(&g, &f.scale(&l, profile).unwrap()).unwrap();
                    let rhs = xi.as_series().scale(&l, profile).unwrap();
                    check!(lhs.as_series() == &rhs, "{g} s={s}: cumulant homogeneity at λ = {l}");
                }
            }
            // pyramid: LOG(f)_w - (f - 1)_w ignores f_v whenever σ(v) ≥ σ(w)
            let unit: Series<Rational> = g.unit(&a, d);
            let shape = |f: &Series<Rational>| log_map(&g, f).unwrap().as_series().sub_coeffs(&f.sub_coeffs(&unit).unwrap()).unwrap();
            let base = shape(&f);
            for v in a.enumerate_words(d).into_iter().filter(|v| g.sigma(&a, v) > 0) {
                let mut p = f.clone();
                let bumped = p.coefficient(&v).unwrap().add(&rng.nonzero_rational());
                p.set(v.clone(), bumped).unwrap();
                let moved = shape(&p);
                for w in a.enumerate_words(d).into_iter().filter(|w| g.sigma(&a, w) <= g.sigma(&a, &v)) {
                    check!(moved.coefficient(&w).unwrap() == base.coefficient(&w).unwrap(), "{g} s={s}: pyramid at ({w}) vs ({v})");
                }
            }
        }
        for kind in [ProductKind::Tensor, ProductKind::Free, ProductKind::Boolean] {
            let g = GroupHandle::additive(kind);
            let (f, h) = (sample_member(&g, &mut rng, &a, d), sample_member(&g, &mut rng, &a, d));
            let lhs = log_map(&g, &g.multiply(&f, &h).unwrap()).unwrap();
            let rhs = log_map(&g, &f).unwrap().add(&log_map(&g, &h).unwrap()).unwrap();
            check!(lhs == rhs, "{g} s={s}: additivity");
        }
        let g = GroupHandle::additive(ProductKind::Free);
        let f = rng.series(&a, d, Constant::Zero);
        let log = log_map(&g, &f).unwrap();
        let r = r_transform(&f).unwrap();
        for w in a.enumerate_words(2) {
            check!(log.coefficient(&w).unwrap() == r.coefficient(&w).unwrap(), "s={s}: LOG vs R at ({w})");
        }
        let report = r_transform_differential_check(&a, d).unwrap();
        check!(report.triangular_mismatches.is_empty(), "s={s}: LOG∘R⁻¹ not unipotent at {:?}", report.triangular_mismatches);
    }
    Ok("all groups, s = 1, 2, max_deg 4".into())
}

fn r_differential() -> Outcome {
    for a in alphabets() {
        for d in 1..=3 {
            let report = r_transform_differential_check(&a, d).unwrap();
            check!(report.linear_mismatches.is_empty(), "s={} max_deg {d}: {:?}", a.size(), report.linear_mismatches);
        }
    }
    Ok("s ≤ 2, max_deg ≤ 3".into())
}

fn oracle_equivalence() -> Outcome {
    let mut rng = SeriesSampler::new(1111);
    for a in alphabets() {
        for i in 0..10 {
            let f = random_character(&mut rng, &a, 4, 3).unwrap();
            check!(is_character(&f), "s={} sample {i} not a character", a.size());
            let flow = log_map(&ShuffleGroup, &f).unwrap();
            check!(flow.as_series() == &hopf_log(&f).unwrap(), "s={} sample {i}: flow LOG ≠ Hopf log", a.size());
        }
    }
    Ok("10 characters per alphabet, max_deg 4".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("NC combinatorics", nc_combinatorics),
        ("free-product expansions", free_product_expansions),
        ("monoid and group laws", monoid_laws),
        ("bridge identity", bridge_identity),
        ("canonical decomposition", canonical_decomposition),
        ("⊠_V inverse", boxtimes_v_inverse_check),
        ("Moebius series", moebius),
        ("homogeneity", homogeneity),
        ("LOG/EXP", log_exp),
        ("R-transform differential", r_differential),
        ("shuffle oracle equivalence", oracle_equivalence),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({detail}) [{secs:.2}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail} [{secs:.2}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
