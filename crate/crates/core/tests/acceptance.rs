//! Acceptance suite. Each criterion prints one PASS/FAIL line; the process
//! exits nonzero if any criterion fails.

use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap};
use std::time::Instant;

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

use domrat_core::blockdsl;
use domrat_core::circulant::{self, CirculantInstance};
use domrat_core::formulas::{self, CirculantFamily, Known};
use domrat_core::generators::GeneratorSet;
use domrat_core::periodic::{BlockStructure, PeriodicSet};
use domrat_core::rational::Rational;
use domrat_core::stategraph::{self, RatioCertificate, DEFAULT_C_MAX};

const N_MAX: u64 = circulant::DEFAULT_N_MAX;

type Outcome = Result<String, String>;

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn set(v: &[i64]) -> GeneratorSet {
    GeneratorSet::new(v.iter().copied()).unwrap()
}

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Memoised certificates, each validated once on first computation.
#[derive(Default)]
struct Engine {
    certs: RefCell<HashMap<GeneratorSet, RatioCertificate>>,
}

impl Engine {
    fn ratio(&self, gens: &GeneratorSet) -> Result<RatioCertificate, String> {
        if let Some(c) = self.certs.borrow().get(gens) {
            return Ok(c.clone());
        }
        let cert = stategraph::domination_ratio(gens, DEFAULT_C_MAX)
            .map_err(|e| format!("{gens}: {e}"))?;
        cert.validate().map_err(|e| format!("{gens}: {e}"))?;
        self.certs.borrow_mut().insert(gens.clone(), cert.clone());
        Ok(cert)
    }
}

/// Coverage count of every `j ∈ [1, p]` by explicit integers, lifting the
/// witness to `[1 - c, p + c]` rather than reducing modulo `p`.
fn lifted_counts(w: &PeriodicSet, gens: &GeneratorSet) -> Vec<usize> {
    let p = w.period() as i64;
    let c = gens.c() as i64;
    let mut members = BTreeSet::new();
    for shift in -(c / p + 1)..=(c / p + 1) {
        for &x in w.residues() {
            members.insert(x as i64 + shift * p);
        }
    }
    (1..=p)
        .map(|j| {
            usize::from(members.contains(&j))
                + gens
                    .elements()
                    .iter()
                    .filter(|&&s| members.contains(&(j - s)))
                    .count()
        })
        .collect()
}

fn one_s_values() -> impl Iterator<Item = i64> {
    (-12..=14).filter(|&s| s != 0 && s != 1)
}

const PAIRS: [(i64, i64); 5] = [(2, 4), (2, 8), (3, 6), (2, -6), (3, -9)];

fn criterion_1(engine: &Engine) -> Outcome {
    let mut n = 0;
    for s in one_s_values() {
        let gens = set(&[1, s]);
        if gens.c() > DEFAULT_C_MAX {
            continue;
        }
        let cert = engine.ratio(&gens)?;
        let expected = formulas::ratio_one_s(s).map_err(|e| e.to_string())?;
        ensure(cert.ratio == expected, || {
            format!("{gens}: engine {} vs {expected}", cert.ratio)
        })?;
        n += 1;
    }
    // Spot values of each family.
    for (s, q) in [
        (2, r(1, 3)),
        (-1, r(1, 3)),
        (4, r(2, 5)),
        (-3, r(2, 5)),
        (3, r(2, 5)),
        (-2, r(2, 5)),
    ] {
        ensure(engine.ratio(&set(&[1, s]))?.ratio == q, || {
            format!("{{1,{s}}} is not {q}")
        })?;
    }
    for (s, q) in [
        (13, r(5, 14)),
        (-12, r(5, 14)),
        (12, r(8, 23)),
        (-11, r(8, 23)),
        (7, r(3, 8)),
    ] {
        ensure(engine.ratio(&set(&[1, s]))?.ratio == q, || {
            format!("{{1,{s}}} is not {q}")
        })?;
    }
    Ok(format!("{n} sets {{1,s}}, s in [-12,14]"))
}

fn criterion_2(engine: &Engine) -> Outcome {
    for (s, t) in PAIRS {
        let gens = set(&[s, t]);
        let cert = engine.ratio(&gens)?;
        let expected = formulas::ratio_pair_dividing(s, t).map_err(|e| e.to_string())?;
        ensure(cert.ratio == expected, || {
            format!("{gens}: engine {} vs {expected}", cert.ratio)
        })?;
        // The reduced pair {1, t/s} has the same ratio.
        let reduced = engine.ratio(&set(&[1, t / s]))?;
        ensure(reduced.ratio == cert.ratio, || {
            format!("{gens}: reduced pair differs")
        })?;
    }
    Ok(format!("{} divisor pairs", PAIRS.len()))
}

fn criterion_3() -> Outcome {
    let cases: Vec<(i64, i64)> = PAIRS
        .into_iter()
        .chain((-10..=11).filter(|&s| s != 0 && s != 1).map(|s| (1, s)))
        .collect();
    let mut positive = 0;
    for &(s, t) in &cases {
        let gens = set(&[s, t]);
        let res = stategraph::eds_exists(&gens, DEFAULT_C_MAX).map_err(|e| e.to_string())?;
        let predicted = (t / s).rem_euclid(3) == 2;
        ensure(formulas::eds_predicted(s, t) == Ok(predicted), || {
            format!("{gens}: formula mismatch")
        })?;
        ensure(res.exists == predicted, || {
            format!("{gens}: engine {} vs predicted {predicted}", res.exists)
        })?;
        if let Some(w) = res.witness {
            positive += 1;
            let counts = lifted_counts(&w, &gens);
            ensure(counts.iter().all(|&k| k == 1), || {
                format!("{gens}: coverage counts {counts:?}")
            })?;
            ensure(w.density() == r(1, 3), || {
                format!("{gens}: density {}", w.density())
            })?;
        } else {
            ensure(!predicted, || format!("{gens}: no witness"))?;
        }
    }
    Ok(format!(
        "{} sets, {positive} with exact-cover witnesses",
        cases.len()
    ))
}

fn gamma(n: u64, conn: &[u64]) -> Result<u64, String> {
    let inst = CirculantInstance::new(n, conn.iter().copied()).map_err(|e| e.to_string())?;
    let d = circulant::domination_number(&inst, N_MAX).map_err(|e| e.to_string())?;
    ensure(
        inst.is_dominating(&d.witness) && d.witness.len() as u64 == d.gamma,
        || format!("n={n} {conn:?}: bad witness {:?}", d.witness),
    )?;
    Ok(d.gamma)
}

fn criterion_4() -> Outcome {
    for k in 1..=8u64 {
        let n = 3 * k + 2;
        let g = gamma(n, &[1, 2])?;
        ensure(g == k + 1, || {
            format!("gamma(Z_{n},{{1,2}}) = {g}, expected {}", k + 1)
        })?;
        let g = gamma(n, &[1, n - 1])?;
        ensure(g == k + 1, || {
            format!("gamma(Z_{n},{{±1}}) = {g}, expected {}", k + 1)
        })?;
        ensure(
            formulas::circulant_known(n, CirculantFamily::OneTwo) == Ok(Known::Exact(k + 1)),
            || format!("formula at n={n}"),
        )?;
    }
    for k in 1..=4u64 {
        let n = 6 * k - 1;
        let g = gamma(n, &[1, 3 * k])?;
        ensure(g == 2 * k, || {
            format!("gamma(Z_{n},{{1,{}}}) = {g}, expected {}", 3 * k, 2 * k)
        })?;
        ensure(
            formulas::circulant_known(n, CirculantFamily::OneThreeK) == Ok(Known::Exact(2 * k)),
            || format!("formula at n={n}"),
        )?;
    }
    Ok("k in [1,8] for {1,2} and {±1}, k in [1,4] for {1,3k}".into())
}

fn criterion_5() -> Outcome {
    let mut count = 0;
    for n in 2..=15u64 {
        for s in 1..n {
            let conn: Vec<u64> = (1..=s).collect();
            let g = gamma(n, &conn)?;
            ensure(g == n.div_ceil(s + 1), || format!("n={n} s={s}: {g}"))?;
            ensure(
                formulas::circulant_known(n, CirculantFamily::Consecutive(s))
                    == Ok(Known::Exact(g)),
                || format!("formula at n={n} s={s}"),
            )?;
            count += 1;
        }
    }
    Ok(format!("{count} pairs 1 <= s < n <= 15"))
}

fn criterion_6() -> Outcome {
    for n in 7..=22u64 {
        let g = gamma(n, &[1, 3, n - 3, n - 1])?;
        let expected = n.div_ceil(5) + u64::from(n % 5 == 4);
        ensure(g == expected, || format!("n={n}: {g}, expected {expected}"))?;
        ensure(
            formulas::circulant_known(n, CirculantFamily::PlusMinusOneThree) == Ok(Known::Exact(g)),
            || format!("formula at n={n}"),
        )?;
    }
    Ok("n in [7,22]".into())
}

fn criterion_7(engine: &Engine) -> Outcome {
    let sets: Vec<GeneratorSet> = one_s_values()
        .map(|s| set(&[1, s]))
        .chain(PAIRS.iter().map(|&(s, t)| set(&[s, t])))
        .collect();
    let (mut checked, mut skipped) = (0, Vec::new());
    for gens in &sets {
        let cert = engine.ratio(gens)?;
        let l = cert.minimal_period;
        // Any period of the witness works; zero residues would create loops.
        let orders: Vec<u64> = (1..=N_MAX / l)
            .map(|k| k * l)
            .filter(|&p| circulant::residues(gens, p).is_ok())
            .collect();
        if orders.is_empty() {
            skipped.push(gens.to_string());
            continue;
        }
        for p in orders {
            let inst = circulant::residues(gens, p).unwrap();
            let g = circulant::domination_number(&inst, N_MAX)
                .map_err(|e| e.to_string())?
                .gamma;
            ensure(
                cert.ratio * p as i64 == Rational::from_integer(g as i64),
                || format!("{gens} p={p}: gamma {g} vs ratio {}", cert.ratio),
            )?;
            checked += 1;
        }
    }
    ensure(skipped.len() < sets.len(), || "every set skipped".into())?;
    Ok(format!(
        "{checked} orders across {} sets; skipped {skipped:?}",
        sets.len() - skipped.len()
    ))
}

fn criterion_8(engine: &Engine) -> Outcome {
    // Every set of at most two elements from [-8,8], on top of those above.
    let elements: Vec<i64> = (-8..=8).filter(|&s| s != 0).collect();
    for (i, &s) in elements.iter().enumerate() {
        engine.ratio(&set(&[s]))?;
        for &t in &elements[i + 1..] {
            engine.ratio(&set(&[s, t]))?;
        }
    }
    let certs = engine.certs.borrow();
    for cert in certs.values() {
        ensure(cert.period as u128 <= cert.period_bound(), || {
            format!(
                "{}: period {} > {}",
                cert.generators,
                cert.period,
                cert.period_bound()
            )
        })?;
        ensure(
            cert.minimal_period <= cert.period && cert.period % cert.minimal_period == 0,
            || {
                format!(
                    "{}: minimal period {}",
                    cert.generators, cert.minimal_period
                )
            },
        )?;
    }
    Ok(format!("{} certificates", certs.len()))
}

fn check_properties(engine: &Engine, gens: &GeneratorSet) -> Result<(), String> {
    let cert = engine.ratio(gens)?;
    let q = cert.ratio;
    let k = gens.len() as i64;

    ensure(engine.ratio(&gens.negated())?.ratio == q, || {
        format!("{gens}: negation changes ratio")
    })?;
    for sub in gens.subsets().filter(|t| !t.is_empty() && t != gens) {
        let qs = engine.ratio(&sub)?.ratio;
        ensure(q <= qs, || {
            format!("{gens}: ratio {q} above subset {sub} ratio {qs}")
        })?;
    }
    if k == 1 {
        ensure(q == r(1, 2), || {
            format!("{gens}: single generator ratio {q}")
        })?;
    } else {
        ensure(r(1, k + 1) <= q && q <= r(1, 2), || {
            format!("{gens}: {q} outside bounds")
        })?;
    }

    ensure(cert.witness.verify_dominating(gens) == Ok(true), || {
        format!("{gens}: witness fails")
    })?;
    ensure(
        lifted_counts(&cert.witness, gens).iter().all(|&n| n >= 1),
        || format!("{gens}: lifted check fails"),
    )?;
    ensure(cert.witness.density() == q, || {
        format!("{gens}: density differs")
    })?;

    let eds = stategraph::eds_exists(gens, DEFAULT_C_MAX).map_err(|e| e.to_string())?;
    if let Some(w) = &eds.witness {
        ensure(q == r(1, k + 1), || {
            format!("{gens}: efficient set but ratio {q}")
        })?;
        ensure(lifted_counts(w, gens).iter().all(|&n| n == 1), || {
            format!("{gens}: inexact cover")
        })?;
    }

    let sym: BTreeSet<i64> = gens.elements().iter().flat_map(|&s| [s, -s]).collect();
    let sym = GeneratorSet::new(sym).unwrap();
    if sym.c() <= DEFAULT_C_MAX {
        let qs = engine.ratio(&sym)?.ratio;
        ensure(r(1, sym.len() as i64 + 1) <= qs && qs <= r(1, 3), || {
            format!("{sym}: undirected ratio {qs} outside bounds")
        })?;
        if let Some(expected) = formulas::ratio_undirected(&sym) {
            ensure(qs == expected, || format!("{sym}: {qs} vs {expected}"))?;
        }
    }
    if 2 * gens.c() <= DEFAULT_C_MAX {
        let scaled = gens.scaled(2).unwrap();
        ensure(engine.ratio(&scaled)?.ratio == q, || {
            format!("{gens}: scaling by 2 changes ratio")
        })?;
    }
    Ok(())
}

fn criterion_9(engine: &Engine) -> Outcome {
    let element = (-8i64..=8).prop_filter("nonzero", |&s| s != 0);
    let strategy = prop::collection::btree_set(element, 1..=3);
    let mut runner = TestRunner::new(Config {
        cases: 600,
        failure_persistence: None,
        ..Config::default()
    });
    let cases = RefCell::new(0usize);
    runner
        .run(&strategy, |elements| {
            *cases.borrow_mut() += 1;
            let gens = GeneratorSet::new(elements).unwrap();
            check_properties(engine, &gens).map_err(TestCaseError::fail)
        })
        .map_err(|e| e.to_string())?;

    // Congruence families with s <= 3 and every offset vector in [-2,2]^s.
    let mut families = 0;
    for s in 1..=3u64 {
        let mut offsets = vec![-2i64; s as usize];
        loop {
            let gens = formulas::cong_family(s, &offsets).map_err(|e| e.to_string())?;
            if gens.c() <= DEFAULT_C_MAX {
                let q = engine.ratio(&gens)?.ratio;
                ensure(q == formulas::cong_ratio(s), || format!("{gens}: {q}"))?;
                let lattice = PeriodicSet::new(s + 1, [s + 1]).unwrap();
                ensure(lattice.verify_efficient(&gens) == Ok(true), || {
                    format!("{gens}: (s+1)Z is not efficient")
                })?;
                ensure(
                    stategraph::eds_exists(&gens, DEFAULT_C_MAX).unwrap().exists,
                    || format!("{gens}: engine finds no efficient set"),
                )?;
                families += 1;
            }
            let Some(i) = offsets.iter().position(|&o| o < 2) else {
                break;
            };
            offsets[i] += 1;
            offsets[..i].iter_mut().for_each(|o| *o = -2);
        }
    }
    let n = *cases.borrow();
    ensure(n >= 500, || format!("only {n} random cases"))?;
    Ok(format!("{n} random sets, {families} congruence families"))
}

fn criterion_10(engine: &Engine) -> Outcome {
    let mut sets: Vec<GeneratorSet> = vec![
        set(&[2, 3]),
        set(&[2, 5]),
        set(&[3, 4]),
        set(&[-2, 3]),
        set(&[3, 5]),
    ];
    for s in (-7..=8).filter(|&s| s != 0 && s != 1) {
        sets.push(set(&[1, s]));
    }
    sets.extend([
        set(&[1, 2, 3]),
        set(&[-3, 2, 5]),
        set(&[-4, -1, 4]),
        set(&[-2, 1, 5]),
        set(&[2, 3, 4]),
    ]);
    let mut certified = 0;
    for gens in &sets {
        ensure(gens.c() <= 8, || format!("{gens}: c > 8"))?;
        let cert = engine.ratio(gens)?;
        let start = gens
            .elements()
            .iter()
            .map(|s| s.unsigned_abs())
            .max()
            .unwrap()
            + 1;

        let bound_limit = ((gens.c() << gens.c()).min(40)).max(start);
        let scan = circulant::ratio_oracle(gens, bound_limit, 64).map_err(|e| e.to_string())?;
        ensure(scan.ratio >= cert.ratio, || {
            format!("{gens}: oracle {} below engine {}", scan.ratio, cert.ratio)
        })?;

        let limit = (start..=64)
            .find(|&n| n % cert.minimal_period == 0 && circulant::residues(gens, n).is_ok());
        let Some(limit) = limit else { continue };
        let scan = circulant::ratio_oracle(gens, limit, 64).map_err(|e| e.to_string())?;
        ensure(scan.covers_period(cert.minimal_period), || {
            format!("{gens}: period not scanned")
        })?;
        ensure(scan.ratio == cert.ratio, || {
            format!("{gens}: oracle {} vs engine {}", scan.ratio, cert.ratio)
        })?;
        certified += 1;
    }
    ensure(certified >= 20, || {
        format!("only {certified} certified cross-checks")
    })?;
    ensure(engine.ratio(&set(&[2, 3]))?.ratio == r(2, 5), || {
        "{2,3}".into()
    })?;
    Ok(format!(
        "{certified} of {} sets cross-checked exactly",
        sets.len()
    ))
}

fn criterion_11() -> Outcome {
    let strategy = prop::collection::vec(1u64..=12, 1..40);
    let mut runner = TestRunner::new(Config {
        cases: 1200,
        failure_persistence: None,
        ..Config::default()
    });
    let cases = RefCell::new(0usize);
    runner
        .run(&strategy, |sizes| {
            *cases.borrow_mut() += 1;
            let bs = BlockStructure::new(sizes.clone()).unwrap();
            let text = blockdsl::render(&bs);
            let back = blockdsl::parse_blocks(&text)
                .map_err(|e| TestCaseError::fail(format!("{text}: {e}")))?;
            prop_assert_eq!(back.sizes(), &sizes[..], "{}", text);
            let expr = blockdsl::parse(&text).unwrap();
            let again = blockdsl::parse_blocks(&expr.to_string()).unwrap();
            prop_assert_eq!(again.sizes(), &sizes[..]);
            let blocks = bs.to_periodic().to_blocks().unwrap();
            prop_assert_eq!(blocks.sizes(), &sizes[..]);
            prop_assert_eq!(
                bs.density(),
                r(sizes.len() as i64, sizes.iter().sum::<u64>() as i64)
            );
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    let example = blockdsl::parse_blocks("(2 3)^5 7 (3 4)^2").map_err(|e| e.to_string())?;
    ensure(example.len() == 15 && example.period() == 46, || {
        format!(
            "example gives {} blocks summing to {}",
            example.len(),
            example.period()
        )
    })?;
    let n = *cases.borrow();
    ensure(n >= 1000, || format!("only {n} cases"))?;
    Ok(format!(
        "{n} random structures; example has 15 blocks summing to 46"
    ))
}

fn main() {
    let engine = Engine::default();
    let criteria: Vec<Criterion> = vec![
        ("1 {1,s} ratio sweep", Box::new(|| criterion_1(&engine))),
        ("2 divisor reduction", Box::new(|| criterion_2(&engine))),
        ("3 efficient domination", Box::new(criterion_3)),
        ("4 finite circulant families", Box::new(criterion_4)),
        ("5 consecutive circulants", Box::new(criterion_5)),
        ("6 circulants {±1,±3}", Box::new(criterion_6)),
        ("7 finite identity", Box::new(|| criterion_7(&engine))),
        ("8 period bound", Box::new(|| criterion_8(&engine))),
        ("9 property suite", Box::new(|| criterion_9(&engine))),
        ("10 oracle cross-check", Box::new(|| criterion_10(&engine))),
        ("11 block notation", Box::new(criterion_11)),
    ];
    let mut failed = 0;
    for (name, check) in &criteria {
        let t = Instant::now();
        match check() {
            Ok(detail) => println!("PASS criterion {name}: {detail} ({:.2?})", t.elapsed()),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name}: {why}");
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
