//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the report.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use common::*;
use nmatrix::compare::compare_over;
use nmatrix::constructions::natural_map;
use nmatrix::semantics::Universe;
use nmatrix::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng as PropRng, TestRunner};
use rand::Rng;

/// Wall-clock budget per worked-example item.
const EXAMPLE_BUDGET: Duration = Duration::from_secs(5);
/// Budget for the whole randomized property suite.
const PROPERTY_SUITE_BUDGET: Duration = Duration::from_secs(120);
/// Randomized cases per property.
const PROPERTY_CASES: u32 = 200;
/// Entailment on D_{3,3} with twelve subformulas.
const ENTAILS_BUDGET: Duration = Duration::from_secs(1);
/// Pattern enumeration on a four-valued matrix with eight formulas.
const PATTERNS_BUDGET: Duration = Duration::from_secs(10);
/// Oracle comparisons only where `|Θ|·log2|A|` stays within this bound.
const ORACLE_BITS: f64 = 16.0;
/// Patterns are only compared on universes at most this large.
const PATTERN_THETA_MAX: usize = 9;

/// Criteria whose literal statement cannot hold; each must still be
/// reported as failing.
const KNOWN_UNATTAINABLE: &[&str] = &["1e", "2d"];

struct Line {
    id: &'static str,
    pass: bool,
    detail: String,
    elapsed: Duration,
}

#[derive(Default)]
struct Report {
    lines: Vec<Line>,
    notes: Vec<String>,
}

impl Report {
    fn run(&mut self, id: &'static str, budget: Duration, f: impl FnOnce(&mut Vec<String>) -> Result<String, String>) {
        let start = Instant::now();
        let mut notes = Vec::new();
        let out = f(&mut notes);
        let elapsed = start.elapsed();
        let (mut pass, mut detail) = match out {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        if elapsed > budget {
            pass = false;
            detail = format!("{detail}; over budget {budget:?}");
        }
        for n in notes {
            self.notes.push(format!("  {id}: {n}"));
        }
        self.lines.push(Line {
            id,
            pass,
            detail,
            elapsed,
        });
    }
}

fn check(cond: bool, what: &str, failures: &mut Vec<String>) {
    if !cond {
        failures.push(what.to_string());
    }
}

fn verdict(failures: Vec<String>, ok: &str) -> Result<String, String> {
    if failures.is_empty() {
        Ok(ok.to_string())
    } else {
        Err(failures.join("; "))
    }
}

// ---------------------------------------------------------------------------
// 1. Worked examples

fn c1a() -> Result<String, String> {
    let mp = fam(Family::MP, 1, 1);
    let s = seq("p, ->(p,q) |- q", mp.signature());
    let v = entails(&mp, &s).map_err(|e| e.to_string())?;
    verdict(
        if v.holds { vec![] } else { vec![format!("refuted by {:?}", v.witness)] },
        "p, p→q ⊳ q holds in MP_{1,1}",
    )
}

fn pigeonhole(k: usize) -> (Vec<Formula>, Vec<Formula>) {
    let gamma: Vec<Formula> = (0..=k).map(var).collect();
    let mut delta = Vec::new();
    for i in 0..=k {
        for j in i + 1..=k {
            delta.push(imp(var(i), var(j)));
        }
    }
    (gamma, delta)
}

fn c1b() -> Result<String, String> {
    let (g, d) = pigeonhole(2);
    let d12 = fam(Family::D, 1, 2);
    let d21 = fam(Family::D, 2, 1);
    let s1 = Sequent::new(g.clone(), d.clone());
    let s2 = Sequent::new(vec![], g.into_iter().chain(d));
    let mut f = Vec::new();
    check(entails(&d12, &s1).unwrap().holds, "D_{1,2}: Γ2 ⊳ Δ2", &mut f);
    check(entails(&d21, &s2).unwrap().holds, "D_{2,1}: ∅ ⊳ Γ2∪Δ2", &mut f);
    verdict(f, "both pigeonhole sequents hold")
}

fn c1c() -> Result<String, String> {
    let i11 = fam(Family::I, 1, 1);
    let key = imp(imp(var(0), var(1)), var(2));
    let s1 = Sequent::new(vec![var(0), var(1), key.clone()], vec![var(2)]);
    let s2 = Sequent::new(vec![imp(var(0), var(2)), imp(var(1), var(2)), key], vec![var(2)]);
    let mut f = Vec::new();
    check(entails(&i11, &s1).unwrap().holds, "Γ1 ⊳ p2", &mut f);
    check(entails(&i11, &s2).unwrap().holds, "Δ1 ⊳ p2", &mut f);
    verdict(f, "Γ1 ⊳ p2 and Δ1 ⊳ p2 hold in I_{1,1}")
}

/// `{pi→pj : i<j≤k} ∪ {(pi→pi)→p(k+1) : i≤k} ⊳ p(k+1)`.
fn k_rule(k: usize) -> Sequent {
    let mut prem = Vec::new();
    for i in 0..=k {
        for j in i + 1..=k {
            prem.push(imp(var(i), var(j)));
        }
        prem.push(imp(imp(var(i), var(i)), var(k + 1)));
    }
    Sequent::new(prem, vec![var(k + 1)])
}

fn c1d() -> Result<String, String> {
    let mp = fam(Family::MP, 1, 1);
    let mut f = Vec::new();
    let mut counts = Vec::new();
    for (k, nvars) in [(1, 1), (2, 2)] {
        let rep = check_rule_under_all_substitutions(&mp, &k_rule(k), nvars).map_err(|e| e.to_string())?;
        check(!rep.verdict.holds, &format!("k={k}: rule should fail"), &mut f);
        check(rep.all_instances_hold(), &format!("k={k}: all instances should hold"), &mut f);
        counts.push(format!("k={k}: {} instances", rep.instances.len()));
    }
    verdict(f, &format!("rule fails, every instance holds ({})", counts.join(", ")))
}

/// Arrow table of a two-valued matrix as `[[00,01],[10,11]]` index lists.
fn arrow_rows(m: &Nmatrix) -> Vec<Vec<usize>> {
    m.table("->").unwrap().cells().iter().map(|c| c.iter().collect()).collect()
}

fn collapse(n: usize, m: usize) -> HomMap {
    let src = fam(Family::D, n, m);
    let tgt = fam(Family::U, 1, 1);
    HomMap::new(src, tgt, (0..n + m).map(|v| usize::from(v >= n)).collect()).unwrap()
}

fn single_conclusion_agreement(a: &Nmatrix, b: &Nmatrix, samples: usize, seed: u64) -> (usize, Option<Sequent>) {
    let mut r = rng(seed);
    let sig = a.signature();
    let mut checked = 0;
    while checked < samples {
        let theta = random_theta(&mut r, sig, 3);
        let s = random_single_conclusion(&mut r, &theta);
        checked += 1;
        if entails(a, &s).unwrap().holds != entails(b, &s).unwrap().holds {
            return (checked, Some(s));
        }
    }
    (checked, None)
}

fn c1e(notes: &mut Vec<String>) -> Result<String, String> {
    // Tables as printed, with 0 = the undesignated class and 1 = the
    // designated one, labelled h_{1,2} (left) and h_{2,1} (right).
    let printed_h12 = vec![vec![0, 1], vec![0, 1], vec![0, 1], vec![1]];
    let printed_h21 = vec![vec![1], vec![0, 1], vec![0, 1], vec![0, 1]];
    let (h12, h21, h22) = (collapse(1, 2), collapse(2, 1), collapse(2, 2));
    let img12 = image(&h12).unwrap();
    let img21 = image(&h21).unwrap();
    let sig = img12.signature().clone();
    let r12 = seq("p, q |- ->(p,q)", &sig);
    let r21 = seq("|- p, q, ->(p,q)", &sig);
    let u = fam(Family::U, 1, 1);

    let mut f = Vec::new();
    check(arrow_rows(&img12) == printed_h12, "image(h_{1,2}) differs from its printed table", &mut f);
    check(arrow_rows(&img21) == printed_h21, "image(h_{2,1}) differs from its printed table", &mut f);
    check(!is_covering(&h12), "h_{1,2} should not be covering", &mut f);
    check(is_covering(&h22), "h_{2,2} should be covering", &mut f);
    check(rule_sound(&img12, &r12).unwrap().holds, "p,q ⊳ p→q unsound in image(h_{1,2})", &mut f);
    check(rule_sound(&img21, &r21).unwrap().holds, "∅ ⊳ p,q,p→q unsound in image(h_{2,1})", &mut f);
    let (n, diff) = single_conclusion_agreement(&u, &img21, 20, 0x1e);
    check(diff.is_none(), &format!("⊢ disagreement with image(h_{{2,1}}) after {n} samples"), &mut f);

    // The same claims with the two labels exchanged.
    let mut g = Vec::new();
    check(arrow_rows(&img12) == printed_h21, "image(h_{1,2}) vs right table", &mut g);
    check(arrow_rows(&img21) == printed_h12, "image(h_{2,1}) vs left table", &mut g);
    check(rule_sound(&img21, &r12).unwrap().holds, "p,q ⊳ p→q in image(h_{2,1})", &mut g);
    check(rule_sound(&img12, &r21).unwrap().holds, "∅ ⊳ p,q,p→q in image(h_{1,2})", &mut g);
    check(!rule_sound(&img12, &r12).unwrap().holds, "p,q ⊳ p→q fails in image(h_{1,2})", &mut g);
    let (n, diff) = single_conclusion_agreement(&u, &img12, 20, 0x1e);
    check(diff.is_none(), &format!("⊢ disagreement with image(h_{{1,2}}) after {n} samples"), &mut g);
    notes.push(format!(
        "with the table labels exchanged: {}",
        if g.is_empty() { "all checks PASS".to_string() } else { format!("FAIL ({})", g.join("; ")) }
    ));
    if !g.is_empty() {
        return Err(format!("corrected-label checks failed too: {}", g.join("; ")));
    }
    verdict(f, "tables, covering, rules and ⊢ agreement as printed")
}

fn c1f() -> Result<String, String> {
    let m = widened13();
    let rules = vec![seq("|- ->(p,p)", m.signature())];
    let sound = sound_compatible_quotients(&m, &rules).map_err(|e| e.to_string())?;
    let d12 = fam(Family::D, 1, 2);
    let merged: Vec<Vec<Vec<&str>>> = sound.iter().map(|(p, _)| p.merged_names(&m)).collect();
    let mut f = Vec::new();
    for pair in [["⊤0", "⊤1"], ["⊤1", "⊤2"]] {
        match sound.iter().find(|(p, _)| p.merged_names(&m) == vec![pair.to_vec()]) {
            Some((_, q)) => check(find_isomorphism(q, &d12).is_some(), &format!("{pair:?} quotient ≇ D_{{1,2}}"), &mut f),
            None => f.push(format!("{pair:?} merge missing")),
        }
    }
    let triple = vec![vec!["⊤0", "⊤1", "⊤2"]];
    check(!merged.contains(&triple), "triple merge listed as sound", &mut f);
    let tp = Partition::from_names(&m, &triple).unwrap();
    let tq = quotient(&m, &tp).unwrap();
    check(!rule_sound(&tq, &rules[0]).unwrap().holds, "triple quotient satisfies ∅ ⊳ p→p", &mut f);
    verdict(f, &format!("{} sound compatible quotients; ≡01, ≡12 ≅ D_{{1,2}}; triple merge unsound", sound.len()))
}

fn c1g() -> Result<String, String> {
    let ms = negation_matrices();
    let rules = negation_rules();
    let mut f = Vec::new();
    for (i, m) in ms.iter().enumerate() {
        check(ruleset_sound(m, &rules).unwrap().sound, &format!("R unsound in M{}", i + 1), &mut f);
    }
    let [m1, m2, m3, m4] = &ms;
    check(is_subnmatrix(m1, m3), "M1 ⊄ M3", &mut f);
    check(is_subnmatrix(m2, m3), "M2 ⊄ M3", &mut f);
    check(is_subnmatrix(m1, m4), "M1 ⊄ M4", &mut f);
    let p = Partition::from_names(m4, &[vec!["⊤1", "⊤2"]]).unwrap();
    check(find_isomorphism(&quotient(m4, &p).unwrap(), m3).is_some(), "M4/(⊤1=⊤2) ≇ M3", &mut f);

    match witness_chain(m1, m2, &rules, PairMode::LookBehind) {
        Some(ch) => {
            check(
                ch.mediator.values() == ["⟨⊥0·⊤0⟩", "⟨⊤0·⊥0⟩", "⟨⊤0·⊤1⟩", "⟨⊤1·⊤1⟩"],
                "look-behind carrier",
                &mut f,
            );
            let cells: Vec<Vec<usize>> = ch.mediator.table("¬").unwrap().cells().iter().map(|c| c.iter().collect()).collect();
            check(cells == vec![vec![1], vec![0], vec![0], vec![2, 3]], "look-behind table", &mut f);
            check(ch.mediator.designated().iter().collect::<Vec<_>>() == vec![1, 2, 3], "look-behind D", &mut f);
            check(ch.onto_second.map() == [0, 1, 1, 2], "h(xy)=x onto M2", &mut f);
            check(ch.onto_first.map() == [0, 1, 2, 2], "g onto M1", &mut f);
            check(is_covering(&ch.onto_first) && is_covering(&ch.onto_second), "look-behind maps covering", &mut f);
        }
        None => f.push("no look-behind chain".into()),
    }
    match witness_chain(m2, m1, &rules, PairMode::LookAhead) {
        Some(ch) => {
            check(
                ch.mediator.values() == ["⟨⊥0·⊤0⟩", "⟨⊤0·⊥0⟩", "⟨⊤1·⊥0⟩", "⟨⊤1·⊤1⟩"],
                "look-ahead carrier",
                &mut f,
            );
            let cells: Vec<Vec<usize>> = ch.mediator.table("¬").unwrap().cells().iter().map(|c| c.iter().collect()).collect();
            check(cells == vec![vec![1], vec![0], vec![0], vec![2, 3]], "look-ahead table", &mut f);
            check(ch.onto_second.map() == [0, 1, 2, 2], "h(xy)=x onto M1", &mut f);
            check(ch.onto_first.map() == [0, 1, 1, 2], "g onto M2", &mut f);
            check(is_covering(&ch.onto_first) && is_covering(&ch.onto_second), "look-ahead maps covering", &mut f);
        }
        None => f.push("no look-ahead chain".into()),
    }
    for i in 0..4 {
        for j in 0..4 {
            let rep = bounded_equivalent(&ms[i], &ms[j], 1, 3).map_err(|e| e.to_string())?;
            check(rep.equivalent(), &format!("M{} vs M{} not equivalent over Θ", i + 1, j + 1), &mut f);
        }
    }
    verdict(f, "soundness, subNmatrices, quotient, both chains, 16 equivalences")
}

// ---------------------------------------------------------------------------
// 2. Properties

struct Instance {
    m: Nmatrix,
    theta: BTreeSet<Formula>,
}

fn instance(seed: u64, deterministic: bool) -> Instance {
    let mut r = rng(seed);
    let sigs = signatures();
    let sig = sigs[r.gen_range(0..sigs.len())].clone();
    let n = r.gen_range(1..=5);
    let m = random_nmatrix(&mut r, &sig, n, deterministic);
    let mut theta = random_theta(&mut r, &sig, 3);
    while theta.len() > PATTERN_THETA_MAX {
        theta = random_theta(&mut r, &sig, 2);
    }
    Instance { m, theta }
}

fn runner() -> TestRunner {
    TestRunner::new_with_rng(
        Config {
            cases: PROPERTY_CASES,
            failure_persistence: None,
            ..Config::default()
        },
        PropRng::deterministic_rng(RngAlgorithm::ChaCha),
    )
}

fn property(f: impl Fn(u64) -> Result<(), String>) -> Result<String, String> {
    let mut cases = 0u32;
    let counter = std::cell::Cell::new(0u32);
    let res = runner().run(&proptest::num::u64::ANY, |seed| {
        counter.set(counter.get() + 1);
        f(seed).map_err(TestCaseError::fail)
    });
    cases += counter.get();
    match res {
        Ok(()) => Ok(format!("{cases} cases")),
        Err(e) => Err(e.to_string()),
    }
}

fn p2a() -> Result<String, String> {
    property(|seed| {
        let Instance { m, theta, .. } = instance(seed, false);
        let base = realized_patterns(&m, &theta).map_err(|e| e.to_string())?;
        for p in enumerate_compatible_partitions(&m).map_err(|e| e.to_string())? {
            let q = quotient(&m, &p).map_err(|e| e.to_string())?;
            let qp = realized_patterns(&q, &theta).map_err(|e| e.to_string())?;
            if !base.is_subset(&qp) {
                return Err(format!("seed {seed}: patterns lost in quotient by {p:?}"));
            }
            if !bounded_leq(&q, &m, &theta).map_err(|e| e.to_string())? {
                return Err(format!("seed {seed}: bounded_leq(quotient, m) false"));
            }
        }
        Ok(())
    })
}

fn p2b() -> Result<String, String> {
    property(|seed| {
        let Instance { m, .. } = instance(seed, false);
        let mut r = rng(seed ^ 0xb);
        let p = random_partition(&mut r, m.size());
        let nat = natural_map(&m, &p).map_err(|e| e.to_string())?;
        if is_strict(&nat) != is_compatible(&p, &m) {
            return Err(format!("seed {seed}: natural map strictness vs compatibility of {p:?}"));
        }
        // A strict map into a widened quotient.
        let cp = Partition::from_labels(
            &p.labels()
                .iter()
                .enumerate()
                .map(|(v, &l)| 2 * l + usize::from(m.is_designated(v)))
                .collect::<Vec<_>>(),
        );
        let q = widen(&mut r, &quotient(&m, &cp).unwrap());
        let h = HomMap::new(m.clone(), q, cp.labels()).unwrap();
        if !is_strict(&h) {
            return Err(format!("seed {seed}: map into widened quotient not strict"));
        }
        let img = image(&h).unwrap();
        let kq = quotient(&m, &kernel_partition(&h)).unwrap();
        if find_isomorphism(&img, &kq).is_none() {
            return Err(format!("seed {seed}: image ≇ quotient by kernel"));
        }
        Ok(())
    })
}

fn p2c() -> Result<String, String> {
    property(|seed| {
        let mut r = rng(seed);
        let sigs = signatures();
        let sig = &sigs[r.gen_range(0..sigs.len())];
        let k = r.gen_range(1..=3);
        let ms: Vec<Nmatrix> = (0..k)
            .map(|_| {
                let n = r.gen_range(1..=if k == 3 { 3 } else { 4 });
                random_nmatrix(&mut r, sig, n, true)
            })
            .collect();
        let i = r.gen_range(0..k);
        let up = ultraproduct(&ms, &Ultrafilter::principal(k, i).unwrap()).map_err(|e| e.to_string())?;
        if !up.is_deterministic() {
            return Err(format!("seed {seed}: ultraproduct not deterministic"));
        }
        if find_isomorphism(&up, &ms[i]).is_none() {
            return Err(format!("seed {seed}: ultraproduct ≇ factor {i}"));
        }
        Ok(())
    })
}

struct ProductCase {
    ms: Vec<Nmatrix>,
    prod: Nmatrix,
    s: Sequent,
}

fn product_case(seed: u64) -> ProductCase {
    let mut r = rng(seed);
    let sigs = signatures();
    let sig = &sigs[r.gen_range(0..sigs.len())];
    let ms: Vec<Nmatrix> = (0..2)
        .map(|_| {
            let n = r.gen_range(1..=4);
            random_nmatrix(&mut r, sig, n, false)
        })
        .collect();
    let prod = product(&ms).unwrap();
    let theta = random_theta(&mut r, sig, 3);
    let s = random_single_conclusion(&mut r, &theta);
    ProductCase { ms, prod, s }
}

/// A factor that never designates `c` makes the product unable to refute
/// anything with `c` among the premises.
fn product_counterexample() -> (Vec<Nmatrix>, Sequent) {
    let sig = Signature::new([("c", 0), ("f", 2)]).unwrap();
    let two = |c: usize| {
        Nmatrix::from_fn(sig.clone(), vec!["0".into(), "1".into()], BitSet::singleton(2, 1), |k, _| {
            if k == "c" {
                BitSet::singleton(2, c)
            } else {
                BitSet::full(2)
            }
        })
        .unwrap()
    };
    let s = seq("c, f(p,q) |- q", &sig);
    (vec![two(1), two(0)], s)
}

fn p2d(notes: &mut Vec<String>) -> Result<String, String> {
    // The weaker statements that do hold: products never refute more than
    // their factors, and adding the product to the class changes nothing.
    let corrected = property(|seed| {
        let ProductCase { ms, prod, s } = product_case(seed);
        let class = entails_class(&ms, &s).unwrap().holds;
        if class && !entails(&prod, &s).unwrap().holds {
            return Err(format!("seed {seed}: {s} refuted by the product only"));
        }
        let mut with = ms.clone();
        with.push(prod);
        if entails_class(&with, &s).unwrap().holds != class {
            return Err(format!("seed {seed}: {s} changes when the product joins the class"));
        }
        Ok(())
    });
    let (ms, s) = product_counterexample();
    let class = entails_class(&ms, &s).unwrap().holds;
    let single = entails(&product(&ms).unwrap(), &s).unwrap().holds;
    notes.push(format!(
        "class ⊆ product and class = class + product: {}",
        match &corrected {
            Ok(d) => format!("PASS ({d})"),
            Err(e) => format!("FAIL ({e})"),
        }
    ));
    notes.push(format!("fixed counterexample {s}: class {class}, product {single}"));
    corrected.map_err(|e| format!("corrected statement fails too: {e}"))?;
    if class == single {
        return Err("fixed counterexample no longer separates".into());
    }

    property(|seed| {
        let ProductCase { ms, prod, s } = product_case(seed);
        let class = entails_class(&ms, &s).unwrap().holds;
        let single = entails(&prod, &s).unwrap().holds;
        if class != single {
            return Err(format!("seed {seed}: {s}: class {class}, product {single}"));
        }
        Ok(())
    })
}

fn p2e() -> Result<String, String> {
    property(|seed| {
        let Instance { m, theta, .. } = instance(seed, false);
        let mut r = rng(seed ^ 0xe);
        let extra = random_theta(&mut r, m.signature(), 2);
        let bigger: BTreeSet<Formula> = theta.union(&extra).cloned().collect();
        for a in enumerate_assignments(&m, &theta, &Constraint::none()).unwrap().take(64) {
            let c = a.iter().fold(Constraint::none(), |c, (f, v)| c.pin(f.clone(), v));
            if enumerate_assignments(&m, &bigger, &c).unwrap().next().is_none() {
                return Err(format!("seed {seed}: {} does not extend", a.display(&m)));
            }
        }
        Ok(())
    })
}

fn p2f() -> Result<String, String> {
    let compared = std::cell::Cell::new(0usize);
    let out = property(|seed| {
        let Instance { m, theta, .. } = instance(seed, false);
        let mut r = rng(seed ^ 0xf);
        let s = random_sequent(&mut r, &theta);
        let closure = subformula_closure(&s.formulas().cloned().collect::<Vec<_>>());
        if oracle_bits(&m, closure.len()) <= ORACLE_BITS {
            compared.set(compared.get() + 1);
            let fast = entails(&m, &s).unwrap().holds;
            if fast != naive_entails(&m, &s) {
                return Err(format!("seed {seed}: {s} disagrees with the oracle"));
            }
        }
        if oracle_bits(&m, theta.len()) <= ORACLE_BITS {
            let fast: BTreeSet<_> = realized_patterns(&m, &theta).unwrap().sets().into_iter().collect();
            if fast != naive_patterns(&m, &theta) {
                return Err(format!("seed {seed}: patterns disagree with the oracle"));
            }
        }
        Ok(())
    })?;
    Ok(format!("{out}, {} oracle comparisons", compared.get()))
}

fn p2g() -> Result<String, String> {
    property(|seed| {
        let Instance { m, theta, .. } = instance(seed, false);
        let mut r = rng(seed ^ 0x9);
        let mut s = random_sequent(&mut r, &theta);
        let shared = theta.iter().nth(r.gen_range(0..theta.len())).unwrap().clone();
        let mut overlap = s.clone();
        overlap.premises.insert(shared.clone());
        overlap.conclusions.insert(shared);
        if !entails(&m, &overlap).unwrap().holds {
            return Err(format!("seed {seed}: overlap {overlap} fails"));
        }
        let before = entails(&m, &s).unwrap().holds;
        let extra = random_sequent(&mut r, &theta);
        s.premises.extend(extra.premises);
        s.conclusions.extend(extra.conclusions);
        if before && !entails(&m, &s).unwrap().holds {
            return Err(format!("seed {seed}: dilution to {s} fails"));
        }
        Ok(())
    })
}

// ---------------------------------------------------------------------------
// 3. Performance

fn perf_entails() -> Result<String, String> {
    let d33 = fam(Family::D, 3, 3);
    let (g, mut d) = pigeonhole(3);
    d.push(imp(imp(var(0), var(1)), var(2)));
    d.push(imp(var(3), imp(var(0), var(1))));
    let s = Sequent::new(g, d);
    let size = Universe::closure_of(s.formulas()).len();
    if size != 12 {
        return Err(format!("sequent has {size} subformulas"));
    }
    let v = entails(&d33, &s).map_err(|e| e.to_string())?;
    Ok(format!("|sub| = 12, holds = {}", v.holds))
}

fn perf_patterns() -> Result<String, String> {
    let u22 = fam(Family::U, 2, 2);
    let roots = [
        imp(var(0), var(1)),
        imp(var(1), var(0)),
        imp(imp(var(0), var(1)), var(1)),
        imp(var(0), imp(var(1), var(0))),
        imp(imp(var(1), var(0)), var(0)),
        imp(var(0), var(0)),
    ];
    let theta = subformula_closure(&roots);
    if theta.len() != 8 {
        return Err(format!("universe has {} formulas", theta.len()));
    }
    let p = realized_patterns(&u22, &theta).map_err(|e| e.to_string())?;
    Ok(format!("|Θ| = 8, {} patterns", p.len()))
}

// ---------------------------------------------------------------------------

#[test]
fn acceptance_suite() {
    let mut rep = Report::default();
    rep.run("1a", EXAMPLE_BUDGET, |_| c1a());
    rep.run("1b", EXAMPLE_BUDGET, |_| c1b());
    rep.run("1c", EXAMPLE_BUDGET, |_| c1c());
    rep.run("1d", EXAMPLE_BUDGET, |_| c1d());
    rep.run("1e", EXAMPLE_BUDGET, c1e);
    rep.run("1f", EXAMPLE_BUDGET, |_| c1f());
    rep.run("1g", EXAMPLE_BUDGET, |_| c1g());

    let suite = Instant::now();
    rep.run("2a", PROPERTY_SUITE_BUDGET, |_| p2a());
    rep.run("2b", PROPERTY_SUITE_BUDGET, |_| p2b());
    rep.run("2c", PROPERTY_SUITE_BUDGET, |_| p2c());
    rep.run("2d", PROPERTY_SUITE_BUDGET, p2d);
    rep.run("2e", PROPERTY_SUITE_BUDGET, |_| p2e());
    rep.run("2f", PROPERTY_SUITE_BUDGET, |_| p2f());
    rep.run("2g", PROPERTY_SUITE_BUDGET, |_| p2g());
    let suite = suite.elapsed();
    rep.run("2*", PROPERTY_SUITE_BUDGET, |_| Ok(format!("property suite total {suite:.2?}")));
    if suite > PROPERTY_SUITE_BUDGET {
        rep.lines.last_mut().unwrap().pass = false;
    }

    rep.run("3a", ENTAILS_BUDGET, |_| perf_entails());
    rep.run("3b", PATTERNS_BUDGET, |_| perf_patterns());

    println!("acceptance report");
    for l in &rep.lines {
        println!(
            "{} {:<3} {:>10.3?}  {}",
            if l.pass { "PASS" } else { "FAIL" },
            l.id,
            l.elapsed,
            l.detail
        );
    }
    for n in &rep.notes {
        println!("{n}");
    }

    let unexpected: Vec<&str> = rep
        .lines
        .iter()
        .filter(|l| l.pass == KNOWN_UNATTAINABLE.contains(&l.id))
        .map(|l| l.id)
        .collect();
    assert!(
        unexpected.is_empty(),
        "criteria with an unexpected outcome: {unexpected:?}"
    );
}

#[test]
fn comparison_report_is_consistent() {
    // Witnesses attached to a report re-verify in both matrices.
    let u = fam(Family::U, 1, 1);
    let mp = fam(Family::MP, 1, 1);
    let theta = formulas_up_to(u.signature(), 2, 1, 100).unwrap();
    let rep = compare_over(&u, &mp, &theta, &Limits::default()).unwrap();
    assert!(rep.leq && !rep.geq);
    let w = rep.geq_witness.unwrap();
    assert!(entails(&mp, &w).unwrap().holds);
    assert!(!entails(&u, &w).unwrap().holds);
}
