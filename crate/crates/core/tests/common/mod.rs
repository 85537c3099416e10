//! Brute-force oracles, fixtures and random generators shared by the
//! integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use nmatrix::{
    builtin_family, formulas_up_to, parse_sequent, subformula_closure, BitSet, Family, Formula,
    Nmatrix, Sequent, Signature,
};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn fam(k: Family, n: usize, m: usize) -> Nmatrix {
    builtin_family(k, n, m).unwrap()
}

pub fn seq(s: &str, sig: &Signature) -> Sequent {
    parse_sequent(s, sig).unwrap()
}

// ---------------------------------------------------------------------------
// Naive oracles: enumerate every map from the universe into the carrier.

/// Every assignment on a subformula-closed `theta` compatible with the
/// tables, as value vectors over the sorted universe.
pub fn naive_assignments(m: &Nmatrix, theta: &BTreeSet<Formula>) -> (Vec<Formula>, Vec<Vec<usize>>) {
    let uni: Vec<Formula> = theta.iter().cloned().collect();
    let pos: BTreeMap<&Formula, usize> = uni.iter().enumerate().map(|(i, f)| (f, i)).collect();
    let n = m.size();
    let k = uni.len();
    let total = n.checked_pow(k as u32).expect("oracle universe too large");
    let mut out = Vec::new();
    let mut vals = vec![0usize; k];
    for code in 0..total {
        let mut c = code;
        for v in vals.iter_mut() {
            *v = c % n;
            c /= n;
        }
        let ok = uni.iter().enumerate().all(|(i, f)| match f {
            Formula::Var(_) => true,
            Formula::App(c, args) => {
                let a: Vec<usize> = args.iter().map(|g| vals[pos[g]]).collect();
                m.apply(c, &a).contains(vals[i])
            }
        });
        if ok {
            out.push(vals.clone());
        }
    }
    (uni, out)
}

pub fn naive_entails(m: &Nmatrix, s: &Sequent) -> bool {
    let theta = subformula_closure(&s.formulas().cloned().collect::<Vec<_>>());
    let (uni, all) = naive_assignments(m, &theta);
    let idx = |f: &Formula| uni.iter().position(|g| g == f).unwrap();
    !all.iter().any(|vals| {
        s.premises.iter().all(|f| m.is_designated(vals[idx(f)]))
            && s.conclusions.iter().all(|f| !m.is_designated(vals[idx(f)]))
    })
}

pub fn naive_patterns(m: &Nmatrix, theta: &BTreeSet<Formula>) -> BTreeSet<BTreeSet<Formula>> {
    let (uni, all) = naive_assignments(m, theta);
    all.iter()
        .map(|vals| {
            uni.iter()
                .zip(vals)
                .filter(|(_, &v)| m.is_designated(v))
                .map(|(f, _)| f.clone())
                .collect()
        })
        .collect()
}

/// `log2(|A|^|Θ|)`, the oracle's search-space exponent.
pub fn oracle_bits(m: &Nmatrix, theta_len: usize) -> f64 {
    theta_len as f64 * (m.size() as f64).log2()
}

// ---------------------------------------------------------------------------
// Random instances

/// Signatures with at most two connectives of arity at most two.
pub fn signatures() -> Vec<Signature> {
    vec![
        Signature::new([("f", 2)]).unwrap(),
        Signature::new([("n", 1)]).unwrap(),
        Signature::new([("n", 1), ("f", 2)]).unwrap(),
        Signature::new([("f", 2), ("g", 2)]).unwrap(),
        Signature::new([("c", 0), ("f", 2)]).unwrap(),
    ]
}

fn random_cell(rng: &mut TestRng, n: usize, deterministic: bool) -> BitSet {
    if deterministic {
        return BitSet::singleton(n, rng.gen_range(0..n));
    }
    // Mostly small cells keep the logics non-trivial.
    let mut cell = BitSet::singleton(n, rng.gen_range(0..n));
    for v in 0..n {
        if rng.gen_bool(0.3) {
            cell.insert(v);
        }
    }
    cell
}

/// A random matrix over `sig` with `n` values named `v0..`, at least one
/// designated and one undesignated value when `n ≥ 2`.
pub fn random_nmatrix(rng: &mut TestRng, sig: &Signature, n: usize, deterministic: bool) -> Nmatrix {
    let values: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let mut designated = BitSet::empty(n);
    for v in 0..n {
        if rng.gen_bool(0.5) {
            designated.insert(v);
        }
    }
    if n >= 2 {
        designated.insert(n - 1);
        designated.remove(0);
    }
    Nmatrix::from_fn(sig.clone(), values, designated, |_, _| {
        random_cell(rng, n, deterministic)
    })
    .unwrap()
}

/// A copy of `m` with extra outputs added to random cells.
pub fn widen(rng: &mut TestRng, m: &Nmatrix) -> Nmatrix {
    let n = m.size();
    Nmatrix::from_fn(m.signature().clone(), m.values().to_vec(), m.designated().clone(), |c, a| {
        let mut cell = m.apply(c, a).clone();
        if rng.gen_bool(0.3) {
            cell.insert(rng.gen_range(0..n));
        }
        cell
    })
    .unwrap()
}

/// The closure of up to `roots` random formulas with at most two variables
/// and depth at most two.
pub fn random_theta(rng: &mut TestRng, sig: &Signature, roots: usize) -> BTreeSet<Formula> {
    let nvars = rng.gen_range(1..=2);
    let depth = rng.gen_range(0..=2);
    let pool: Vec<Formula> = formulas_up_to(sig, nvars, depth, 10_000).unwrap().into_iter().collect();
    let k = rng.gen_range(1..=roots);
    let picked: Vec<Formula> = pool.choose_multiple(rng, k).cloned().collect();
    subformula_closure(&picked)
}

/// A random sequent with formulas from `theta`.
pub fn random_sequent(rng: &mut TestRng, theta: &BTreeSet<Formula>) -> Sequent {
    let all: Vec<&Formula> = theta.iter().collect();
    let pick = |rng: &mut TestRng| -> BTreeSet<Formula> {
        all.iter().filter(|_| rng.gen_bool(0.3)).map(|f| (*f).clone()).collect()
    };
    let premises = pick(rng);
    let conclusions = pick(rng);
    Sequent {
        premises,
        conclusions,
    }
}

/// A random sequent with exactly one conclusion.
pub fn random_single_conclusion(rng: &mut TestRng, theta: &BTreeSet<Formula>) -> Sequent {
    let all: Vec<&Formula> = theta.iter().collect();
    let premises = all.iter().filter(|_| rng.gen_bool(0.4)).map(|f| (*f).clone()).collect();
    let conclusion = (*all.choose(rng).unwrap()).clone();
    Sequent {
        premises,
        conclusions: [conclusion].into(),
    }
}

/// A random partition of `0..n` from block labels.
pub fn random_partition(rng: &mut TestRng, n: usize) -> nmatrix::Partition {
    let labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
    nmatrix::Partition::from_labels(&labels)
}

// ---------------------------------------------------------------------------
// Fixtures

pub fn neg_signature() -> Signature {
    Signature::new([("¬", 1)]).unwrap()
}

fn neg_matrix(values: &[&str], rows: &[&[&str]]) -> Nmatrix {
    let values: Vec<String> = values.iter().map(|s| s.to_string()).collect();
    let n = values.len();
    let designated = BitSet::from_indices(n, (0..n).filter(|&i| values[i].starts_with('⊤')));
    let idx = |s: &str| values.iter().position(|v| v == s).unwrap();
    let cells = rows
        .iter()
        .map(|r| BitSet::from_indices(n, r.iter().map(|s| idx(s))))
        .collect();
    Nmatrix::from_parts(neg_signature(), values.clone(), designated, [("¬".to_string(), cells)].into()).unwrap()
}

/// The four negation matrices M1..M4.
pub fn negation_matrices() -> [Nmatrix; 4] {
    let a = ["⊥0", "⊤0", "⊤1"];
    [
        neg_matrix(&a, &[&["⊤0"], &["⊥0"], &["⊥0", "⊤1"]]),
        neg_matrix(&a, &[&["⊤0"], &["⊥0"], &["⊤0", "⊤1"]]),
        neg_matrix(&a, &[&["⊤0"], &["⊥0"], &["⊥0", "⊤0", "⊤1"]]),
        neg_matrix(
            &["⊥0", "⊤0", "⊤1", "⊤2"],
            &[&["⊤0"], &["⊥0"], &["⊥0", "⊤1"], &["⊤0", "⊤1"]],
        ),
    ]
}

pub fn negation_rules() -> Vec<Sequent> {
    let sig = neg_signature();
    vec![seq("|- p, ¬(p)", &sig), seq("¬(¬(p)) |- p", &sig)]
}

/// D_{1,3} with the cells between ⊤0,⊤1 and between ⊤1,⊤2 widened to D.
pub fn widened13() -> Nmatrix {
    let d = fam(Family::D, 1, 3);
    let top = d.designated().clone();
    Nmatrix::from_fn(d.signature().clone(), d.values().to_vec(), top.clone(), |_, a| {
        match (a[0], a[1]) {
            (1, 2) | (2, 1) | (2, 3) | (3, 2) => top.clone(),
            _ => d.apply("->", a).clone(),
        }
    })
    .unwrap()
}

pub fn var(i: usize) -> Formula {
    Formula::var(format!("p{i}"))
}

pub fn imp(a: Formula, b: Formula) -> Formula {
    Formula::bin("->", a, b)
}

/// A two-valued table over `{-> /2}` given as `[[00, 01], [10, 11]]` output
/// lists, with value 1 designated.
pub fn two_valued(rows: [[&[usize]; 2]; 2]) -> Nmatrix {
    Nmatrix::from_fn(
        Signature::implication(),
        vec!["0".into(), "1".into()],
        BitSet::singleton(2, 1),
        |_, a| BitSet::from_indices(2, rows[a[0]][a[1]].iter().copied()),
    )
    .unwrap()
}
