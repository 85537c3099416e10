//! Bounded comparison of the logics of two finite Nmatrices.
//!
//! Over a subformula-closed universe Θ, every sequent with formulas from Θ
//! that holds in `m1` holds in `m2` exactly when each designation pattern
//! realized in `m2` is realized in `m1`.

use std::collections::BTreeSet;

use crate::bitset::BitSet;
use crate::constructions::tuple_name;
use crate::error::Result;
use crate::formula::{formulas_up_to, Formula, Sequent};
use crate::matrix::{tuple_at, tuples, Nmatrix};
use crate::morphisms::{find_strict_hom, is_covering, HomFlags, HomMap};
use crate::semantics::{realized_patterns_with, ruleset_sound, PatternFamily};
use crate::Limits;

/// Whether `⊳_{m1} ⊆ ⊳_{m2}` restricted to sequents over `theta`.
pub fn bounded_leq(m1: &Nmatrix, m2: &Nmatrix, theta: &BTreeSet<Formula>) -> Result<bool> {
    bounded_leq_with(m1, m2, theta, &Limits::default())
}

pub fn bounded_leq_with(
    m1: &Nmatrix,
    m2: &Nmatrix,
    theta: &BTreeSet<Formula>,
    limits: &Limits,
) -> Result<bool> {
    if has_strict_hom(m2, m1) {
        return Ok(true);
    }
    let p1 = realized_patterns_with(m1, theta, limits)?;
    let p2 = realized_patterns_with(m2, theta, limits)?;
    Ok(p2.is_subset(&p1))
}

/// A strict homomorphism `src → tgt` turns every valuation on `src` into one
/// on `tgt` with the same designation pattern.
fn has_strict_hom(src: &Nmatrix, tgt: &Nmatrix) -> bool {
    find_strict_hom(src, tgt, HomFlags::default()).is_some()
}

/// Picks a pattern of `p2` missing from `p1`, preferring the largest one and
/// then the least in canonical order, as the sequent `Ω ⊳ Θ∖Ω`.
fn separating(p1: &PatternFamily, p2: &PatternFamily) -> Option<Sequent> {
    let omega = p2
        .difference(p1)
        .fold(None::<&BitSet>, |best, p| match best {
            Some(b) if b.len() >= p.len() => Some(b),
            _ => Some(p),
        })?;
    let (prem, concl): (Vec<_>, Vec<_>) = p2
        .universe()
        .iter()
        .enumerate()
        .partition(|(i, _)| omega.contains(*i));
    Some(Sequent::new(
        prem.into_iter().map(|(_, f)| f.clone()),
        concl.into_iter().map(|(_, f)| f.clone()),
    ))
}

/// A sequent over `theta` holding in `m1` and failing in `m2`, if any.
pub fn distinguishing_sequent(
    m1: &Nmatrix,
    m2: &Nmatrix,
    theta: &BTreeSet<Formula>,
) -> Result<Option<Sequent>> {
    if has_strict_hom(m2, m1) {
        return Ok(None);
    }
    let limits = Limits::default();
    let p1 = realized_patterns_with(m1, theta, &limits)?;
    let p2 = realized_patterns_with(m2, theta, &limits)?;
    Ok(separating(&p1, &p2))
}

/// Both directions of the bounded comparison over one universe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComparisonReport {
    pub universe: Vec<Formula>,
    /// `⊳_{m1} ⊆ ⊳_{m2}` over the universe.
    pub leq: bool,
    /// `⊳_{m2} ⊆ ⊳_{m1}` over the universe.
    pub geq: bool,
    /// Holds in `m1`, fails in `m2`.
    pub leq_witness: Option<Sequent>,
    /// Holds in `m2`, fails in `m1`.
    pub geq_witness: Option<Sequent>,
    /// Pattern counts, when the families had to be computed.
    pub first_patterns: Option<usize>,
    pub second_patterns: Option<usize>,
}

impl ComparisonReport {
    pub fn equivalent(&self) -> bool {
        self.leq && self.geq
    }
}

/// Compares over all formulas with variables `p0..p(nvars-1)` and depth at
/// most `maxdepth`.
pub fn bounded_equivalent(
    m1: &Nmatrix,
    m2: &Nmatrix,
    nvars: usize,
    maxdepth: usize,
) -> Result<ComparisonReport> {
    bounded_equivalent_with(m1, m2, nvars, maxdepth, &Limits::default())
}

pub fn bounded_equivalent_with(
    m1: &Nmatrix,
    m2: &Nmatrix,
    nvars: usize,
    maxdepth: usize,
    limits: &Limits,
) -> Result<ComparisonReport> {
    if m1.signature() != m2.signature() {
        return Err(crate::Error::SignatureMismatch);
    }
    let theta = formulas_up_to(m1.signature(), nvars, maxdepth, limits.formulas)?;
    compare_over(m1, m2, &theta, limits)
}

/// Both directions over an explicit universe. Pattern families are only
/// computed when a strict homomorphism does not settle both directions.
pub fn compare_over(
    m1: &Nmatrix,
    m2: &Nmatrix,
    theta: &BTreeSet<Formula>,
    limits: &Limits,
) -> Result<ComparisonReport> {
    let universe = crate::semantics::Universe::new(theta.clone())?.formulas().to_vec();
    if has_strict_hom(m2, m1) && has_strict_hom(m1, m2) {
        return Ok(ComparisonReport {
            universe,
            leq: true,
            geq: true,
            leq_witness: None,
            geq_witness: None,
            first_patterns: None,
            second_patterns: None,
        });
    }
    let p1 = realized_patterns_with(m1, theta, limits)?;
    let p2 = realized_patterns_with(m2, theta, limits)?;
    let leq_witness = separating(&p1, &p2);
    let geq_witness = separating(&p2, &p1);
    Ok(ComparisonReport {
        universe,
        leq: leq_witness.is_none(),
        geq: geq_witness.is_none(),
        leq_witness,
        geq_witness,
        first_patterns: Some(p1.len()),
        second_patterns: Some(p2.len()),
    })
}

/// How the pair carrier of the mediating matrix is built from the second
/// matrix `M2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PairMode {
    /// Pairs `xy` with `x ∈ ©2(y, …)`: `y` is a look-behind of `x`.
    LookBehind,
    /// Pairs `xy` with `y ∈ ©2(x, …)`: `y` is a look-ahead of `x`.
    LookAhead,
}

impl std::str::FromStr for PairMode {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "look-behind" | "behind" => Ok(PairMode::LookBehind),
            "look-ahead" | "ahead" => Ok(PairMode::LookAhead),
            _ => Err(crate::Error::Family(format!("unknown pair mode `{s}`"))),
        }
    }
}

/// A matrix `M` with covering strict homomorphisms onto both inputs, which
/// places `m1` among the sound quotients of preimages of `m2`.
#[derive(Clone, Debug)]
pub struct WitnessChain {
    pub mediator: Nmatrix,
    /// `h: M → m2`, the first projection.
    pub onto_second: HomMap,
    /// `g: M → m1`.
    pub onto_first: HomMap,
}

/// Searches for a mediating matrix. Best effort: `None` means this
/// particular construction did not produce covering strict maps, or `m1`
/// is not sound for `rules`.
pub fn witness_chain(
    m1: &Nmatrix,
    m2: &Nmatrix,
    rules: &[Sequent],
    mode: PairMode,
) -> Option<WitnessChain> {
    if m1.signature() != m2.signature() || !ruleset_sound(m1, rules).ok()?.sound {
        return None;
    }
    let (mediator, first) = if m1 == m2 {
        (diagonal(m2), (0..m2.size()).collect())
    } else {
        pair_matrix(m2, mode)?
    };
    let onto_second = HomMap::new(mediator.clone(), m2.clone(), first).ok()?;
    if !is_covering(&onto_second) {
        return None;
    }
    let onto_first = if m1 == m2 {
        onto_second.clone()
    } else {
        find_strict_hom(
            &mediator,
            m1,
            HomFlags {
                covering: true,
                injective: false,
            },
        )?
    };
    Some(WitnessChain {
        mediator,
        onto_second,
        onto_first,
    })
}

fn pair_name(m: &Nmatrix, (x, y): (usize, usize)) -> String {
    tuple_name(&[m.value_name(x), m.value_name(y)])
}

fn diagonal(m: &Nmatrix) -> Nmatrix {
    let values = (0..m.size()).map(|x| pair_name(m, (x, x))).collect();
    Nmatrix::from_fn(
        m.signature().clone(),
        values,
        m.designated().clone(),
        |c, args| m.apply(c, args).clone(),
    )
    .expect("diagonal of a valid matrix")
}

/// The pair matrix with the first coordinate of each value.
fn pair_matrix(m: &Nmatrix, mode: PairMode) -> Option<(Nmatrix, Vec<usize>)> {
    let n = m.size();
    // related[x] holds the y paired with x.
    let mut related = vec![BitSet::empty(n); n];
    for (c, t) in m.tables() {
        if t.arity() == 0 {
            continue;
        }
        for (i, _) in t.cells().iter().enumerate() {
            let args = tuple_at(n, t.arity(), i);
            for z in m.apply(c, &args) {
                match mode {
                    PairMode::LookBehind => related[z].insert(args[0]),
                    PairMode::LookAhead => related[args[0]].insert(z),
                }
            }
        }
    }
    for (x, r) in related.iter_mut().enumerate() {
        if r.is_empty() {
            r.insert(x);
        }
    }
    let carrier: Vec<(usize, usize)> = (0..n)
        .flat_map(|x| related[x].iter().map(move |y| (x, y)).collect::<Vec<_>>())
        .collect();
    let index = |p: (usize, usize)| carrier.iter().position(|&q| q == p);
    let k = carrier.len();
    let designated = BitSet::from_indices(k, (0..k).filter(|&i| m.is_designated(carrier[i].0)));
    let values = carrier.iter().map(|&p| pair_name(m, p)).collect();
    let mut tables = std::collections::BTreeMap::new();
    for (c, t) in m.tables() {
        let cells = tuples(k, t.arity())
            .map(|args| {
                let xs: Vec<usize> = args.iter().map(|&a| carrier[a].0).collect();
                let out = m.apply(c, &xs);
                let mut cell = BitSet::empty(k);
                match (mode, args.first()) {
                    (PairMode::LookBehind, Some(&a)) => {
                        for z in out {
                            cell.insert(index((z, carrier[a].0))?);
                        }
                    }
                    (PairMode::LookAhead, Some(&a)) if out.contains(carrier[a].1) => {
                        let y = carrier[a].1;
                        for i in (0..k).filter(|&i| carrier[i].0 == y) {
                            cell.insert(i);
                        }
                    }
                    _ => {
                        for i in (0..k).filter(|&i| out.contains(carrier[i].0)) {
                            cell.insert(i);
                        }
                    }
                }
                Some(cell)
            })
            .collect::<Option<Vec<_>>>()?;
        tables.insert(c.to_string(), cells);
    }
    let mediator = Nmatrix::from_parts(m.signature().clone(), values, designated, tables).ok()?;
    Some((mediator, carrier.iter().map(|p| p.0).collect()))
}
