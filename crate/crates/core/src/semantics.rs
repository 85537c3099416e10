//! Entailment over finite Nmatrices.
//!
//! Everything here reduces to searching for assignments on a finite,
//! subformula-closed universe of formulas: any such prevaluation extends to
//! a full valuation, so a sequent fails in a matrix exactly when some
//! assignment on the subformulas of the sequent designates every premise and
//! no conclusion.
//!
//! The search visits formulas in order of depth (variables first), so the
//! candidate values of an application are known as soon as its arguments are
//! set. Candidates are intersected with the designation constraints up
//! front, and each choice is forward-checked against every application whose
//! arguments it completes.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::formula::{is_subformula_closed, subformula_closure, Formula, Sequent, Substitution};
use crate::matrix::{tuple_index, Nmatrix, Table};
use crate::Limits;

/// A subformula-closed set of formulas in canonical search order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Universe {
    formulas: Vec<Formula>,
    index: HashMap<Formula, usize>,
    args: Vec<Vec<usize>>,
    parents: Vec<Vec<usize>>,
}

impl Universe {
    /// Fails unless `fs` is closed under immediate subformulas.
    pub fn new(fs: BTreeSet<Formula>) -> Result<Self> {
        is_subformula_closed(&fs)?;
        Ok(Self::build(fs))
    }

    pub fn closure_of<'a>(fs: impl IntoIterator<Item = &'a Formula>) -> Self {
        Self::build(subformula_closure(fs))
    }

    fn build(fs: BTreeSet<Formula>) -> Self {
        let mut formulas: Vec<Formula> = fs.into_iter().collect();
        formulas.sort_by_cached_key(|f| (f.depth(), f.clone()));
        let index: HashMap<Formula, usize> = formulas
            .iter()
            .enumerate()
            .map(|(i, f)| (f.clone(), i))
            .collect();
        let args: Vec<Vec<usize>> = formulas
            .iter()
            .map(|f| f.args().iter().map(|a| index[a]).collect())
            .collect();
        let mut parents = vec![Vec::new(); formulas.len()];
        for (i, a) in args.iter().enumerate() {
            for &j in a {
                if !parents[j].contains(&i) {
                    parents[j].push(i);
                }
            }
        }
        Universe {
            formulas,
            index,
            args,
            parents,
        }
    }

    pub fn len(&self) -> usize {
        self.formulas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.formulas.is_empty()
    }

    pub fn formulas(&self) -> &[Formula] {
        &self.formulas
    }

    pub fn position(&self, f: &Formula) -> Option<usize> {
        self.index.get(f).copied()
    }

    pub fn args(&self, i: usize) -> &[usize] {
        &self.args[i]
    }

    pub fn to_set(&self) -> BTreeSet<Formula> {
        self.formulas.iter().cloned().collect()
    }
}

/// A table-compatible map from a subformula-closed set into a carrier.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Assignment {
    map: BTreeMap<Formula, usize>,
}

impl Assignment {
    pub fn from_map(map: BTreeMap<Formula, usize>) -> Self {
        Assignment { map }
    }

    pub(crate) fn from_values(uni: &Universe, vals: &[usize]) -> Self {
        Assignment {
            map: uni.formulas.iter().cloned().zip(vals.iter().copied()).collect(),
        }
    }

    pub fn get(&self, f: &Formula) -> Option<usize> {
        self.map.get(f).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Formula, usize)> + '_ {
        self.map.iter().map(|(f, &v)| (f, v))
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn domain(&self) -> BTreeSet<Formula> {
        self.map.keys().cloned().collect()
    }

    /// Checks the domain is subformula-closed and every application's value
    /// lies in its table cell.
    pub fn is_compatible(&self, m: &Nmatrix) -> bool {
        self.map.iter().all(|(f, &v)| {
            if v >= m.size() {
                return false;
            }
            match f {
                Formula::Var(_) => true,
                Formula::App(c, args) => {
                    let Some(vals) = args.iter().map(|a| self.get(a)).collect::<Option<Vec<_>>>()
                    else {
                        return false;
                    };
                    m.table(c)
                        .is_some_and(|t| t.cell(tuple_index(m.size(), &vals)).contains(v))
                }
            }
        })
    }

    /// Formulas mapped to designated values.
    pub fn designated_set(&self, m: &Nmatrix) -> BTreeSet<Formula> {
        self.map
            .iter()
            .filter(|(_, &v)| m.is_designated(v))
            .map(|(f, _)| f.clone())
            .collect()
    }

    /// Renders as `f ↦ value` pairs using the matrix's value names.
    pub fn display<'a>(&'a self, m: &'a Nmatrix) -> impl fmt::Display + 'a {
        DisplayAssignment(self, m)
    }

    pub fn named<'a>(&'a self, m: &'a Nmatrix) -> Vec<(String, String)> {
        self.map
            .iter()
            .map(|(f, &v)| (f.to_string(), m.value_name(v).to_string()))
            .collect()
    }
}

struct DisplayAssignment<'a>(&'a Assignment, &'a Nmatrix);

impl fmt::Display for DisplayAssignment<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<_> = self
            .0
            .map
            .iter()
            .map(|(k, &v)| format!("{k} ↦ {}", self.1.value_name(v)))
            .collect();
        write!(f, "{}", parts.join(", "))
    }
}

/// Side conditions on an assignment search.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Constraint {
    pub must_designate: BTreeSet<Formula>,
    pub must_undesignate: BTreeSet<Formula>,
    pub pinned: BTreeMap<Formula, usize>,
}

impl Constraint {
    pub fn none() -> Self {
        Self::default()
    }

    /// Premises designated, conclusions undesignated.
    pub fn refuting(s: &Sequent) -> Self {
        Constraint {
            must_designate: s.premises.clone(),
            must_undesignate: s.conclusions.clone(),
            pinned: BTreeMap::new(),
        }
    }

    pub fn pin(mut self, f: Formula, v: usize) -> Self {
        self.pinned.insert(f, v);
        self
    }

    fn formulas(&self) -> impl Iterator<Item = &Formula> + '_ {
        self.must_designate
            .iter()
            .chain(&self.must_undesignate)
            .chain(self.pinned.keys())
    }
}

/// Precomputed search data for one matrix, universe and constraint.
struct Plan<'a> {
    m: &'a Nmatrix,
    uni: Universe,
    tables: Vec<Option<&'a Table>>,
    allowed: Vec<BitSet>,
    /// `ready_at[i]`: applications whose last argument (in order) is `i`.
    ready_at: Vec<Vec<usize>>,
    is_root: Vec<bool>,
    infeasible: bool,
}

impl<'a> Plan<'a> {
    fn new(m: &'a Nmatrix, uni: Universe, c: &Constraint) -> Result<Self> {
        let n = m.size();
        for f in c.formulas() {
            if uni.position(f).is_none() {
                return Err(Error::OutsideUniverse(f.to_string()));
            }
        }
        for f in uni.formulas() {
            f.check(m.signature())?;
        }
        let undes = m.undesignated();
        let mut allowed = vec![BitSet::full(n); uni.len()];
        for f in &c.must_designate {
            allowed[uni.index[f]].intersect_with(m.designated());
        }
        for f in &c.must_undesignate {
            allowed[uni.index[f]].intersect_with(&undes);
        }
        for (f, &v) in &c.pinned {
            let slot = &mut allowed[uni.index[f]];
            if v < n && slot.contains(v) {
                *slot = BitSet::singleton(n, v);
            } else {
                *slot = BitSet::empty(n);
            }
        }
        let tables = uni
            .formulas
            .iter()
            .map(|f| match f {
                Formula::Var(_) => None,
                Formula::App(c, _) => m.table(c),
            })
            .collect();
        let mut ready_at = vec![Vec::new(); uni.len()];
        for (j, a) in uni.args.iter().enumerate() {
            if let Some(&last) = a.iter().max() {
                ready_at[last].push(j);
            }
        }
        let is_root = uni.parents.iter().map(Vec::is_empty).collect();
        let mut plan = Plan {
            m,
            uni,
            tables,
            allowed,
            ready_at,
            is_root,
            infeasible: false,
        };
        // Variables and nullary applications have fixed candidates.
        let empty_vals = vec![];
        plan.infeasible = (0..plan.uni.len())
            .any(|i| plan.uni.args[i].is_empty() && plan.candidates(i, &empty_vals).is_empty())
            || plan.allowed.iter().any(BitSet::is_empty);
        Ok(plan)
    }

    #[inline]
    fn candidates(&self, i: usize, vals: &[usize]) -> BitSet {
        match self.tables[i] {
            None => self.allowed[i].clone(),
            Some(t) => {
                let idx = self.uni.args[i]
                    .iter()
                    .fold(0, |acc, &a| acc * self.m.size() + vals[a]);
                t.cell(idx).intersection(&self.allowed[i])
            }
        }
    }

    #[inline]
    fn forward_ok(&self, i: usize, vals: &[usize]) -> bool {
        self.ready_at[i]
            .iter()
            .all(|&j| !self.candidates(j, vals).is_empty())
    }
}

/// Depth-first enumeration of assignments in canonical order.
pub struct Assignments<'a> {
    plan: Plan<'a>,
    vals: Vec<usize>,
    remaining: Vec<BitSet>,
    /// Roots never feed another formula, so for existence questions one
    /// value per root suffices.
    existential_roots: bool,
    started: bool,
    done: bool,
}

impl<'a> Assignments<'a> {
    fn new(plan: Plan<'a>, existential_roots: bool) -> Self {
        let n = plan.uni.len();
        Assignments {
            plan,
            vals: vec![0; n],
            remaining: Vec::with_capacity(n),
            existential_roots,
            started: false,
            done: false,
        }
    }

    pub fn universe(&self) -> &Universe {
        &self.plan.uni
    }

    /// Advances to the next complete assignment, leaving it in `self.vals`.
    fn advance(&mut self) -> bool {
        let n = self.plan.uni.len();
        if self.done {
            return false;
        }
        if !self.started {
            self.started = true;
            if self.plan.infeasible {
                self.done = true;
                return false;
            }
            if n == 0 {
                self.done = true;
                return true;
            }
            self.remaining.push(self.plan.candidates(0, &self.vals));
        }
        loop {
            let Some(lvl) = self.remaining.len().checked_sub(1) else {
                self.done = true;
                return false;
            };
            let mut chosen = None;
            while let Some(v) = self.remaining[lvl].first() {
                self.remaining[lvl].remove(v);
                self.vals[lvl] = v;
                if self.plan.forward_ok(lvl, &self.vals) {
                    chosen = Some(v);
                    break;
                }
            }
            match chosen {
                Some(_) => {
                    if self.existential_roots && self.plan.is_root[lvl] {
                        self.remaining[lvl] = BitSet::empty(0);
                    }
                    if lvl + 1 == n {
                        return true;
                    }
                    let next = self.plan.candidates(lvl + 1, &self.vals);
                    self.remaining.push(next);
                }
                None => {
                    self.remaining.pop();
                }
            }
        }
    }
}

impl Iterator for Assignments<'_> {
    type Item = Assignment;

    fn next(&mut self) -> Option<Assignment> {
        if self.advance() {
            Some(Assignment::from_values(&self.plan.uni, &self.vals))
        } else {
            None
        }
    }
}

/// Every assignment on `theta` compatible with the tables of `m` and with
/// `c`, without duplicates, in canonical order.
pub fn enumerate_assignments<'a>(
    m: &'a Nmatrix,
    theta: &BTreeSet<Formula>,
    c: &Constraint,
) -> Result<Assignments<'a>> {
    let uni = Universe::new(theta.clone())?;
    Ok(Assignments::new(Plan::new(m, uni, c)?, false))
}

/// Outcome of an entailment query; a witness is present iff it fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    pub witness: Option<Assignment>,
}

impl Verdict {
    fn from_witness(witness: Option<Assignment>) -> Self {
        Verdict {
            holds: witness.is_none(),
            witness,
        }
    }
}

fn find_witness(m: &Nmatrix, s: &Sequent) -> Result<Option<Assignment>> {
    s.check(m.signature())?;
    let uni = Universe::closure_of(s.formulas());
    let plan = Plan::new(m, uni, &Constraint::refuting(s))?;
    Ok(Assignments::new(plan, true).next())
}

/// Decides `Γ ⊳_m Δ`: it holds iff no assignment on the subformulas of the
/// sequent designates all of `Γ` and none of `Δ`.
pub fn entails(m: &Nmatrix, s: &Sequent) -> Result<Verdict> {
    Ok(Verdict::from_witness(find_witness(m, s)?))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassVerdict {
    pub holds: bool,
    /// Index of the first refuting matrix, with its witness.
    pub failure: Option<(usize, Assignment)>,
}

/// Entailment in every member of a class of matrices.
pub fn entails_class(ms: &[Nmatrix], s: &Sequent) -> Result<ClassVerdict> {
    if ms.is_empty() {
        return Err(Error::EmptyClass);
    }
    let sig = ms[0].signature();
    if ms.iter().any(|m| m.signature() != sig) {
        return Err(Error::SignatureMismatch);
    }
    for (i, m) in ms.iter().enumerate() {
        if let Some(w) = find_witness(m, s)? {
            return Ok(ClassVerdict {
                holds: false,
                failure: Some((i, w)),
            });
        }
    }
    Ok(ClassVerdict {
        holds: true,
        failure: None,
    })
}

/// Soundness of a schematic rule. Variables range over all values, so this
/// is entailment of the rule's own sequent.
pub fn rule_sound(m: &Nmatrix, rule: &Sequent) -> Result<Verdict> {
    entails(m, rule)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RulesetVerdict {
    pub sound: bool,
    /// Index of the first unsound rule, with its witness.
    pub failure: Option<(usize, Assignment)>,
}

pub fn ruleset_sound(m: &Nmatrix, rules: &[Sequent]) -> Result<RulesetVerdict> {
    for (i, r) in rules.iter().enumerate() {
        if let Some(w) = find_witness(m, r)? {
            return Ok(RulesetVerdict {
                sound: false,
                failure: Some((i, w)),
            });
        }
    }
    Ok(RulesetVerdict {
        sound: true,
        failure: None,
    })
}

/// The sets of universe formulas designated by some assignment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternFamily {
    universe: Vec<Formula>,
    patterns: BTreeSet<BitSet>,
}

impl PatternFamily {
    pub fn universe(&self) -> &[Formula] {
        &self.universe
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    /// Raw patterns as bit sets over universe positions.
    pub fn bits(&self) -> &BTreeSet<BitSet> {
        &self.patterns
    }

    pub fn to_formulas(&self, p: &BitSet) -> BTreeSet<Formula> {
        p.iter().map(|i| self.universe[i].clone()).collect()
    }

    pub fn sets(&self) -> Vec<BTreeSet<Formula>> {
        self.patterns.iter().map(|p| self.to_formulas(p)).collect()
    }

    pub fn contains(&self, set: &BTreeSet<Formula>) -> bool {
        if set.iter().any(|f| !self.universe.contains(f)) {
            return false;
        }
        let bits = BitSet::from_indices(
            self.universe.len(),
            self.universe
                .iter()
                .enumerate()
                .filter(|(_, f)| set.contains(f))
                .map(|(i, _)| i),
        );
        self.patterns.contains(&bits)
    }

    /// Pattern inclusion; both families must share the universe.
    pub fn is_subset(&self, other: &PatternFamily) -> bool {
        assert_eq!(self.universe, other.universe, "different universes");
        self.patterns.is_subset(&other.patterns)
    }

    pub fn difference<'a>(&'a self, other: &'a PatternFamily) -> impl Iterator<Item = &'a BitSet> {
        assert_eq!(self.universe, other.universe, "different universes");
        self.patterns.difference(&other.patterns)
    }
}

const DEAD: u16 = u16::MAX;

/// All designation patterns `{φ ∈ Θ : w(φ) ∈ D}` over assignments `w`.
pub fn realized_patterns(m: &Nmatrix, theta: &BTreeSet<Formula>) -> Result<PatternFamily> {
    realized_patterns_with(m, theta, &Limits::default())
}

/// Pattern enumeration branches on the designation class of each formula
/// and carries the set of reachable partial assignments, projected onto the
/// formulas still needed by later applications. Every branch that survives
/// yields a distinct pattern.
pub fn realized_patterns_with(
    m: &Nmatrix,
    theta: &BTreeSet<Formula>,
    limits: &Limits,
) -> Result<PatternFamily> {
    if theta.len() > limits.formulas {
        return Err(Error::CapExceeded {
            what: "pattern universe",
            size: theta.len(),
            cap: limits.formulas,
        });
    }
    if m.size() >= DEAD as usize {
        return Err(Error::CapExceeded {
            what: "carrier for pattern enumeration",
            size: m.size(),
            cap: DEAD as usize - 1,
        });
    }
    let uni = Universe::new(theta.clone())?;
    let plan = Plan::new(m, uni, &Constraint::none())?;
    let n = plan.uni.len();
    let mut dies_at: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        let last = plan.uni.parents[i].iter().copied().max().unwrap_or(i);
        dies_at[last].push(i);
    }
    let classes = [m.undesignated(), m.designated().clone()];
    let mut out = BTreeSet::new();
    let mut pattern = BitSet::empty(n);
    let start: HashSet<Vec<u16>> = [vec![DEAD; n]].into();
    let mut walker = PatternWalk {
        plan: &plan,
        dies_at: &dies_at,
        classes: &classes,
        limits,
        out: &mut out,
    };
    walker.walk(0, &start, &mut pattern)?;
    Ok(PatternFamily {
        universe: plan.uni.formulas.clone(),
        patterns: out,
    })
}

struct PatternWalk<'p, 'a> {
    plan: &'p Plan<'a>,
    dies_at: &'p [Vec<usize>],
    classes: &'p [BitSet; 2],
    limits: &'p Limits,
    out: &'p mut BTreeSet<BitSet>,
}

impl PatternWalk<'_, '_> {
    fn walk(&mut self, i: usize, states: &HashSet<Vec<u16>>, pattern: &mut BitSet) -> Result<()> {
        if i == self.plan.uni.len() {
            self.out.insert(pattern.clone());
            if self.out.len() > self.limits.patterns {
                return Err(Error::CapExceeded {
                    what: "realized pattern count",
                    size: self.out.len(),
                    cap: self.limits.patterns,
                });
            }
            return Ok(());
        }
        let n = self.plan.m.size();
        let mut vals = vec![0usize; self.plan.uni.len()];
        for (designated, class) in self.classes.iter().enumerate() {
            if class.is_empty() {
                continue;
            }
            let mut next: HashSet<Vec<u16>> = HashSet::new();
            for s in states {
                let cand = match self.plan.tables[i] {
                    None => class.clone(),
                    Some(t) => {
                        for &a in &self.plan.uni.args[i] {
                            vals[a] = s[a] as usize;
                        }
                        let idx = self.plan.uni.args[i]
                            .iter()
                            .fold(0, |acc, &a| acc * n + vals[a]);
                        t.cell(idx).intersection(class)
                    }
                };
                for v in &cand {
                    let mut s2 = s.clone();
                    s2[i] = v as u16;
                    for &d in &self.dies_at[i] {
                        s2[d] = DEAD;
                    }
                    next.insert(s2);
                }
                if next.len() > self.limits.states {
                    return Err(Error::CapExceeded {
                        what: "pattern search frontier",
                        size: next.len(),
                        cap: self.limits.states,
                    });
                }
            }
            if next.is_empty() {
                continue;
            }
            if designated == 1 {
                pattern.insert(i);
            }
            let r = self.walk(i + 1, &next, pattern);
            pattern.remove(i);
            r?;
        }
        Ok(())
    }
}

/// Per-substitution verdicts for a rule instantiated into `p0..p(k-1)`.
#[derive(Clone, Debug)]
pub struct InstanceReport {
    pub rule: Sequent,
    pub verdict: Verdict,
    pub instances: Vec<(Substitution, Sequent, Verdict)>,
}

impl InstanceReport {
    pub fn all_instances_hold(&self) -> bool {
        self.instances.iter().all(|(_, _, v)| v.holds)
    }

    /// The rule fails although every instance over the bounded variable set
    /// holds: the logic is not determined by that many variables.
    pub fn is_counterexample(&self) -> bool {
        !self.verdict.holds && self.all_instances_hold()
    }
}

pub fn check_rule_under_all_substitutions(
    m: &Nmatrix,
    rule: &Sequent,
    nvars: usize,
) -> Result<InstanceReport> {
    check_rule_under_all_substitutions_with(m, rule, nvars, &Limits::default())
}

pub fn check_rule_under_all_substitutions_with(
    m: &Nmatrix,
    rule: &Sequent,
    nvars: usize,
    limits: &Limits,
) -> Result<InstanceReport> {
    if nvars == 0 {
        return Err(Error::Syntax {
            pos: 0,
            msg: "need at least one target variable".into(),
        });
    }
    let vars: Vec<String> = rule.variables().into_iter().collect();
    let count = (nvars as u128).checked_pow(vars.len() as u32);
    let count = match count.map(usize::try_from) {
        Some(Ok(c)) if c <= limits.substitutions => c,
        _ => {
            return Err(Error::CapExceeded {
                what: "substitution count",
                size: count.map_or(usize::MAX, |c| usize::try_from(c).unwrap_or(usize::MAX)),
                cap: limits.substitutions,
            })
        }
    };
    let verdict = entails(m, rule)?;
    let targets: Vec<Formula> = (0..nvars).map(|i| Formula::var(format!("p{i}"))).collect();
    let mut instances = Vec::with_capacity(count);
    for code in 0..count {
        let mut rest = code;
        let mut sigma = Substitution::new();
        for v in vars.iter().rev() {
            sigma.insert(v.clone(), targets[rest % nvars].clone());
            rest /= nvars;
        }
        let inst = rule.substitute(&sigma);
        let v = entails(m, &inst)?;
        instances.push((sigma, inst, v));
    }
    Ok(InstanceReport {
        rule: rule.clone(),
        verdict,
        instances,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse_formula, parse_sequent, Signature};
    use crate::matrix::{builtin_family, Family};

    fn f(s: &str) -> Formula {
        parse_formula(s, &Signature::implication()).unwrap()
    }

    fn seq(s: &str) -> Sequent {
        parse_sequent(s, &Signature::implication()).unwrap()
    }

    fn set(fs: &[&str]) -> BTreeSet<Formula> {
        fs.iter().map(|s| f(s)).collect()
    }

    fn fam(k: Family, n: usize, m: usize) -> Nmatrix {
        builtin_family(k, n, m).unwrap()
    }

    #[test]
    fn enumerate_free_variable() {
        let u = fam(Family::U, 1, 1);
        let all: Vec<_> = enumerate_assignments(&u, &set(&["p"]), &Constraint::none())
            .unwrap()
            .collect();
        assert_eq!(all.len(), 2);
    }

    #[test]
    fn enumerate_mp_refutation_is_empty() {
        let mp = fam(Family::MP, 1, 1);
        let c = Constraint {
            must_designate: set(&["p", "->(p,q)"]),
            must_undesignate: set(&["q"]),
            ..Default::default()
        };
        let theta = set(&["p", "q", "->(p,q)"]);
        assert_eq!(enumerate_assignments(&mp, &theta, &c).unwrap().count(), 0);
    }

    #[test]
    fn enumerate_identity_forces_designation() {
        let d = fam(Family::D, 1, 2);
        let c = Constraint {
            must_undesignate: set(&["->(p,p)"]),
            ..Default::default()
        };
        let theta = set(&["p", "->(p,p)"]);
        assert_eq!(enumerate_assignments(&d, &theta, &c).unwrap().count(), 0);
    }

    #[test]
    fn enumerate_rejects_open_universe() {
        let u = fam(Family::U, 1, 1);
        assert!(matches!(
            enumerate_assignments(&u, &set(&["->(p,p)"]), &Constraint::none()),
            Err(Error::NotClosed(_))
        ));
        let c = Constraint {
            must_designate: set(&["q"]),
            ..Default::default()
        };
        assert!(matches!(
            enumerate_assignments(&u, &set(&["p"]), &c),
            Err(Error::OutsideUniverse(_))
        ));
    }

    #[test]
    fn empty_universe_has_the_empty_assignment() {
        let u = fam(Family::U, 1, 1);
        let all: Vec<_> = enumerate_assignments(&u, &BTreeSet::new(), &Constraint::none())
            .unwrap()
            .collect();
        assert_eq!(all, vec![Assignment::default()]);
        // Hence the empty sequent fails everywhere.
        assert!(!entails(&u, &Sequent::default()).unwrap().holds);
    }

    #[test]
    fn entails_examples() {
        let mp = fam(Family::MP, 1, 1);
        assert!(entails(&mp, &seq("p, ->(p,q) |- q")).unwrap().holds);
        assert!(entails(&mp, &seq("p |- p")).unwrap().holds);
        let d12 = fam(Family::D, 1, 2);
        let pigeon = seq("p0, p1, p2 |- ->(p0,p1), ->(p0,p2), ->(p1,p2)");
        assert!(entails(&d12, &pigeon).unwrap().holds);

        let u = fam(Family::U, 1, 1);
        let v = entails(&u, &seq("|- ->(p,p)")).unwrap();
        assert!(!v.holds);
        let w = v.witness.unwrap();
        assert_eq!(w.get(&f("->(p,p)")), Some(u.value("⊥0").unwrap()));
        // First witness in canonical order: p takes the first value.
        assert_eq!(w.get(&f("p")), Some(0));
        assert!(w.is_compatible(&u));
    }

    #[test]
    fn class_examples() {
        let mp = fam(Family::MP, 1, 1);
        let u = fam(Family::U, 1, 1);
        let r = entails_class(std::slice::from_ref(&mp), &seq("p, ->(p,q) |- q")).unwrap();
        assert!(r.holds);
        let r = entails_class(&[u, mp], &seq("p, ->(p,q) |- q")).unwrap();
        assert!(!r.holds);
        assert_eq!(r.failure.unwrap().0, 0);
        let r = entails_class(
            &[fam(Family::D, 1, 2), fam(Family::D, 2, 1)],
            &seq("|- ->(p,p)"),
        )
        .unwrap();
        assert!(r.holds);
        assert_eq!(
            entails_class(&[], &seq("p |- p")),
            Err(Error::EmptyClass)
        );
    }

    #[test]
    fn rule_examples() {
        assert!(rule_sound(&fam(Family::I, 1, 1), &seq("|- ->(p,p)")).unwrap().holds);
        let u = fam(Family::U, 1, 1);
        let v = rule_sound(&u, &seq("p, ->(p,q) |- q")).unwrap();
        assert!(!v.holds);
        let w = v.witness.unwrap();
        let top = u.value("⊤0").unwrap();
        let bot = u.value("⊥0").unwrap();
        assert_eq!(w.get(&f("p")), Some(top));
        assert_eq!(w.get(&f("->(p,q)")), Some(top));
        assert_eq!(w.get(&f("q")), Some(bot));
        assert!(ruleset_sound(&u, &[]).unwrap().sound);
        let r = ruleset_sound(&u, &[seq("|- ->(p,p)")]).unwrap();
        assert!(!r.sound);
        assert_eq!(r.failure.unwrap().0, 0);
    }

    #[test]
    fn pattern_examples() {
        let u = fam(Family::U, 1, 1);
        let theta = set(&["p", "->(p,p)"]);
        assert_eq!(realized_patterns(&u, &theta).unwrap().len(), 4);

        let d = fam(Family::D, 1, 2);
        let fam_d = realized_patterns(&d, &theta).unwrap();
        let expected: BTreeSet<BTreeSet<Formula>> =
            [set(&["->(p,p)"]), set(&["p", "->(p,p)"])].into();
        assert_eq!(fam_d.sets().into_iter().collect::<BTreeSet<_>>(), expected);

        let mp = fam(Family::MP, 1, 1);
        let fam_p = realized_patterns(&mp, &set(&["p"])).unwrap();
        assert_eq!(
            fam_p.sets().into_iter().collect::<BTreeSet<_>>(),
            [set(&[]), set(&["p"])].into()
        );
    }

    #[test]
    fn instance_checks() {
        let mp = fam(Family::MP, 1, 1);
        let g1 = seq("->(p0,p1), ->(->(p0,p0),p2), ->(->(p1,p1),p2) |- p2");
        let r = check_rule_under_all_substitutions(&mp, &g1, 1).unwrap();
        assert!(!r.verdict.holds);
        assert!(r.all_instances_hold());
        assert!(r.is_counterexample());

        let r = check_rule_under_all_substitutions(&mp, &seq("p |- p"), 1).unwrap();
        assert!(r.verdict.holds && r.all_instances_hold());

        let i11 = fam(Family::I, 1, 1);
        let proto = seq("p0, p1, ->(->(p0,p1),p2) |- p2");
        let r = check_rule_under_all_substitutions(&i11, &proto, 1).unwrap();
        assert!(r.verdict.holds);
        assert!(!r.is_counterexample());
    }

    #[test]
    fn substitution_cap() {
        let u = fam(Family::U, 1, 1);
        let limits = Limits {
            substitutions: 10,
            ..Limits::default()
        };
        let r = check_rule_under_all_substitutions_with(&u, &seq("p, q, r |- s"), 2, &limits);
        assert!(matches!(r, Err(Error::CapExceeded { .. })));
    }
}
