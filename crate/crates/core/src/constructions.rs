//! Quotients, restrictions, products and ultraproducts.

use std::collections::BTreeMap;
use std::fmt;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::formula::Sequent;
use crate::matrix::{tuple_at, tuple_index, tuples, Nmatrix};
use crate::morphisms::HomMap;
use crate::semantics::{ruleset_sound, RulesetVerdict};
use crate::Limits;

/// A partition of `0..n` with blocks sorted internally and ordered by their
/// least element.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n];
        let mut out = Vec::with_capacity(blocks.len());
        for mut b in blocks {
            if b.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            b.sort_unstable();
            for &v in &b {
                if v >= n {
                    return Err(Error::InvalidPartition(format!("element {v} out of range")));
                }
                if std::mem::replace(&mut seen[v], true) {
                    return Err(Error::InvalidPartition(format!("element {v} occurs twice")));
                }
            }
            out.push(b);
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidPartition(format!("element {v} is not covered")));
        }
        out.sort_unstable_by_key(|b| b[0]);
        Ok(Partition { n, blocks: out })
    }

    /// Blocks given by value names; values not mentioned become singletons.
    pub fn from_names<S: AsRef<str>>(m: &Nmatrix, blocks: &[Vec<S>]) -> Result<Self> {
        let mut idx = Vec::new();
        let mut seen = BitSet::empty(m.size());
        for b in blocks {
            let block = b
                .iter()
                .map(|s| m.value(s.as_ref()))
                .collect::<Result<Vec<_>>>()?;
            for &v in &block {
                seen.insert(v);
            }
            idx.push(block);
        }
        idx.extend((0..m.size()).filter(|&v| !seen.contains(v)).map(|v| vec![v]));
        Partition::new(m.size(), idx)
    }

    /// All singletons.
    pub fn discrete(n: usize) -> Self {
        Partition {
            n,
            blocks: (0..n).map(|v| vec![v]).collect(),
        }
    }

    /// From a block label per element (any labels; equal labels share a
    /// block).
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut by: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (v, &l) in labels.iter().enumerate() {
            by.entry(l).or_default().push(v);
        }
        Partition::new(labels.len(), by.into_values().collect()).expect("labels cover")
    }

    pub fn carrier_size(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn is_discrete(&self) -> bool {
        self.blocks.len() == self.n
    }

    /// Index of the block holding `v`.
    pub fn block_of(&self, v: usize) -> usize {
        self.labels()[v]
    }

    /// Block index per element.
    pub fn labels(&self) -> Vec<usize> {
        let mut l = vec![0; self.n];
        for (i, b) in self.blocks.iter().enumerate() {
            for &v in b {
                l[v] = i;
            }
        }
        l
    }

    /// Blocks with more than one element, as value names.
    pub fn merged_names<'a>(&self, m: &'a Nmatrix) -> Vec<Vec<&'a str>> {
        self.blocks
            .iter()
            .filter(|b| b.len() > 1)
            .map(|b| b.iter().map(|&v| m.value_name(v)).collect())
            .collect()
    }

    pub fn display<'a>(&'a self, m: &'a Nmatrix) -> impl fmt::Display + 'a {
        DisplayPartition(self, m)
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.blocks)
    }
}

struct DisplayPartition<'a>(&'a Partition, &'a Nmatrix);

impl fmt::Display for DisplayPartition<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> = self
            .0
            .blocks
            .iter()
            .map(|b| {
                let names: Vec<_> = b.iter().map(|&v| self.1.value_name(v)).collect();
                format!("{{{}}}", names.join(" "))
            })
            .collect();
        write!(f, "{}", blocks.join(" "))
    }
}

fn check_partition(m: &Nmatrix, p: &Partition) -> Result<()> {
    if p.n != m.size() {
        return Err(Error::InvalidPartition(format!(
            "partition of {} elements for a carrier of {}",
            p.n,
            m.size()
        )));
    }
    Ok(())
}

fn block_name(m: &Nmatrix, b: &[usize]) -> String {
    match b {
        [v] => m.value_name(*v).to_string(),
        _ => {
            let names: Vec<_> = b.iter().map(|&v| m.value_name(v)).collect();
            format!("[{}]", names.join("|"))
        }
    }
}

/// `M/≡`: one value per block, designated blocks are those meeting `D`, and
/// `©([x⃗]) = {[y] : y ∈ ©(y⃗), y_i ∈ [x_i]}`.
///
/// Singleton blocks keep their value name; larger blocks are named
/// `[a|b|…]`.
pub fn quotient(m: &Nmatrix, p: &Partition) -> Result<Nmatrix> {
    check_partition(m, p)?;
    let (n, k) = (m.size(), p.len());
    let label = p.labels();
    let values = p.blocks.iter().map(|b| block_name(m, b)).collect();
    let designated = BitSet::from_indices(k, m.designated().iter().map(|v| label[v]));
    let tables = m
        .tables()
        .map(|(c, t)| {
            let mut cells = vec![BitSet::empty(k); k.pow(t.arity() as u32)];
            for (i, cell) in t.cells().iter().enumerate() {
                let args: Vec<usize> = tuple_at(n, t.arity(), i).iter().map(|&a| label[a]).collect();
                let target = &mut cells[tuple_index(k, &args)];
                for y in cell {
                    target.insert(label[y]);
                }
            }
            (c.to_string(), cells)
        })
        .collect();
    Nmatrix::from_parts(m.signature().clone(), values, designated, tables)
}

/// `x ↦ [x]` from `m` onto `quotient(m, p)`.
pub fn natural_map(m: &Nmatrix, p: &Partition) -> Result<HomMap> {
    let q = quotient(m, p)?;
    HomMap::new(m.clone(), q, p.labels())
}

/// Every block lies inside `D` or inside its complement.
pub fn is_compatible(p: &Partition, m: &Nmatrix) -> bool {
    p.n == m.size()
        && p.blocks.iter().all(|b| {
            let d = m.is_designated(b[0]);
            b.iter().all(|&v| m.is_designated(v) == d)
        })
}

pub fn bell(n: usize) -> usize {
    // Bell triangle.
    let mut row = vec![1usize];
    for _ in 0..n {
        let mut next = vec![*row.last().unwrap()];
        for &x in &row {
            let last = *next.last().unwrap();
            next.push(last.saturating_add(x));
        }
        row = next;
    }
    row[0]
}

/// All set partitions of `items`, as restricted growth strings.
fn set_partitions(items: &[usize]) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut rgs = vec![0usize; items.len()];
    fn go(i: usize, max: usize, items: &[usize], rgs: &mut Vec<usize>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == items.len() {
            let mut blocks = vec![Vec::new(); if items.is_empty() { 0 } else { max + 1 }];
            for (j, &b) in rgs.iter().enumerate() {
                blocks[b].push(items[j]);
            }
            out.push(blocks);
            return;
        }
        let top = if i == 0 { 0 } else { max + 1 };
        for b in 0..=top {
            rgs[i] = b;
            go(i + 1, max.max(b), items, rgs, out);
        }
    }
    go(0, 0, items, &mut rgs, &mut out);
    out
}

/// Every partition refining the designated/undesignated split; there are
/// `Bell(|D|)·Bell(|A∖D|)` of them. The discrete partition comes first.
pub fn enumerate_compatible_partitions(m: &Nmatrix) -> Result<Vec<Partition>> {
    enumerate_compatible_partitions_with(m, &Limits::default())
}

pub fn enumerate_compatible_partitions_with(m: &Nmatrix, limits: &Limits) -> Result<Vec<Partition>> {
    let d: Vec<usize> = m.designated().iter().collect();
    let u: Vec<usize> = m.undesignated().iter().collect();
    let count = bell(d.len()).saturating_mul(bell(u.len()));
    if count > limits.partitions {
        return Err(Error::CapExceeded {
            what: "compatible partitions",
            size: count,
            cap: limits.partitions,
        });
    }
    let pd = set_partitions(&d);
    let pu = set_partitions(&u);
    let mut out = Vec::with_capacity(count);
    for a in &pu {
        for b in &pd {
            let blocks = a.iter().chain(b).cloned().collect();
            out.push(Partition::new(m.size(), blocks)?);
        }
    }
    out.sort_by_key(|p| std::cmp::Reverse(p.len()));
    Ok(out)
}

/// One compatible quotient with its soundness verdict.
#[derive(Clone, Debug)]
pub struct QuotientEntry {
    pub partition: Partition,
    pub quotient: Nmatrix,
    pub verdict: RulesetVerdict,
}

/// Every compatible quotient of `m` with its verdict against `rules`.
pub fn classify_compatible_quotients(
    m: &Nmatrix,
    rules: &[Sequent],
    limits: &Limits,
) -> Result<Vec<QuotientEntry>> {
    enumerate_compatible_partitions_with(m, limits)?
        .into_iter()
        .map(|partition| {
            let quotient = quotient(m, &partition)?;
            let verdict = ruleset_sound(&quotient, rules)?;
            Ok(QuotientEntry {
                partition,
                quotient,
                verdict,
            })
        })
        .collect()
}

/// The compatible quotients of `m` in which every rule is sound.
pub fn sound_compatible_quotients(m: &Nmatrix, rules: &[Sequent]) -> Result<Vec<(Partition, Nmatrix)>> {
    Ok(classify_compatible_quotients(m, rules, &Limits::default())?
        .into_iter()
        .filter(|e| e.verdict.sound)
        .map(|e| (e.partition, e.quotient))
        .collect())
}

/// The subNmatrix on `b`, which must be closed under every table.
pub fn restriction(m: &Nmatrix, b: &BitSet) -> Result<Nmatrix> {
    let n = m.size();
    let keep: Vec<usize> = b.iter().filter(|&v| v < n).collect();
    if let Some(bad) = b.iter().find(|&v| v >= n) {
        return Err(Error::UnknownValue(format!("#{bad}")));
    }
    let k = keep.len();
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in keep.iter().enumerate() {
        pos[v] = i;
    }
    let mut tables = BTreeMap::new();
    for (c, t) in m.tables() {
        let mut cells = Vec::with_capacity(k.pow(t.arity() as u32));
        for args in tuples(k, t.arity()) {
            let full: Vec<usize> = args.iter().map(|&a| keep[a]).collect();
            let cell = t.cell(tuple_index(n, &full));
            if !cell.is_subset(b) {
                return Err(Error::NotClosedUnder {
                    connective: c.to_string(),
                    args: full.iter().map(|&a| m.value_name(a)).collect::<Vec<_>>().join(","),
                    outputs: m.names_of(cell).join(","),
                });
            }
            cells.push(BitSet::from_indices(k, cell.iter().map(|y| pos[y])));
        }
        tables.insert(c.to_string(), cells);
    }
    Nmatrix::from_parts(
        m.signature().clone(),
        keep.iter().map(|&v| m.value_name(v).to_string()).collect(),
        BitSet::from_indices(k, keep.iter().filter(|&&v| m.is_designated(v)).map(|&v| pos[v])),
        tables,
    )
}

/// Carrier inclusion by value name, `D_a = D_b ∩ A_a`, and cellwise
/// inclusion.
pub fn is_subnmatrix(a: &Nmatrix, b: &Nmatrix) -> bool {
    if a.signature() != b.signature() {
        return false;
    }
    let Some(emb): Option<Vec<usize>> = a.values().iter().map(|v| b.value_index(v)).collect() else {
        return false;
    };
    if (0..a.size()).any(|v| a.is_designated(v) != b.is_designated(emb[v])) {
        return false;
    }
    a.tables().all(|(c, t)| {
        let tb = b.table(c).unwrap();
        t.cells().iter().enumerate().all(|(i, cell)| {
            let args: Vec<usize> = tuple_at(a.size(), t.arity(), i).iter().map(|&x| emb[x]).collect();
            let big = tb.cell(tuple_index(b.size(), &args));
            cell.iter().all(|y| big.contains(emb[y]))
        })
    })
}

/// Name of a product value from its component names.
pub fn tuple_name<S: AsRef<str>>(parts: &[S]) -> String {
    let parts: Vec<&str> = parts.iter().map(|s| s.as_ref()).collect();
    format!("⟨{}⟩", parts.join("·"))
}

const TABLE_CELL_CAP: usize = 1 << 22;

fn check_factors(ms: &[Nmatrix], limits: &Limits) -> Result<usize> {
    let first = ms.first().ok_or(Error::EmptyClass)?;
    if ms.iter().any(|m| m.signature() != first.signature()) {
        return Err(Error::SignatureMismatch);
    }
    let size = ms
        .iter()
        .try_fold(1usize, |acc, m| acc.checked_mul(m.size()))
        .unwrap_or(usize::MAX);
    if size > limits.carrier {
        return Err(Error::CapExceeded {
            what: "product carrier",
            size,
            cap: limits.carrier,
        });
    }
    let max_arity = first.signature().iter().map(|(_, k)| k).max().unwrap_or(0);
    let cells = size.checked_pow(max_arity as u32).unwrap_or(usize::MAX);
    if cells > TABLE_CELL_CAP {
        return Err(Error::CapExceeded {
            what: "product table",
            size: cells,
            cap: TABLE_CELL_CAP,
        });
    }
    Ok(size)
}

/// Decodes a product value into component values (first factor most
/// significant).
fn components(sizes: &[usize], mut v: usize, out: &mut [usize]) {
    for i in (0..sizes.len()).rev() {
        out[i] = v % sizes[i];
        v /= sizes[i];
    }
}

/// The direct product: tuples ordered lexicographically, a tuple designated
/// when every component is, and cells the componentwise products.
pub fn product(ms: &[Nmatrix]) -> Result<Nmatrix> {
    product_with(ms, &Limits::default())
}

pub fn product_with(ms: &[Nmatrix], limits: &Limits) -> Result<Nmatrix> {
    let size = check_factors(ms, limits)?;
    let sizes: Vec<usize> = ms.iter().map(|m| m.size()).collect();
    let k = ms.len();
    let mut comp = vec![0; k];
    let mut values = Vec::with_capacity(size);
    let mut designated = BitSet::empty(size);
    for v in 0..size {
        components(&sizes, v, &mut comp);
        values.push(tuple_name(
            &comp.iter().zip(ms).map(|(&c, m)| m.value_name(c)).collect::<Vec<_>>(),
        ));
        if comp.iter().zip(ms).all(|(&c, m)| m.is_designated(c)) {
            designated.insert(v);
        }
    }
    let sig = ms[0].signature().clone();
    let mut tables = BTreeMap::new();
    for (c, arity) in sig.iter() {
        let facts: Vec<_> = ms.iter().map(|m| m.table(c).unwrap()).collect();
        let mut cells = Vec::with_capacity(size.pow(arity as u32));
        let mut arg_comp = vec![vec![0; k]; arity];
        for args in tuples(size, arity) {
            for (j, &a) in args.iter().enumerate() {
                components(&sizes, a, &mut arg_comp[j]);
            }
            let mut outs = vec![0usize];
            for i in 0..k {
                let local: Vec<usize> = arg_comp.iter().map(|t| t[i]).collect();
                let cell = facts[i].cell(tuple_index(sizes[i], &local));
                let w = sizes[i];
                outs = outs
                    .iter()
                    .flat_map(|&o| cell.iter().map(move |y| o * w + y))
                    .collect();
            }
            cells.push(BitSet::from_indices(size, outs));
        }
        tables.insert(c.to_string(), cells);
    }
    Nmatrix::from_parts(sig, values, designated, tables)
}

/// An ultrafilter on `{0..n-1}`. On a finite index set every ultrafilter is
/// principal, so only the generator is stored.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Ultrafilter {
    n: usize,
    principal: usize,
}

const FAMILY_INDEX_CAP: usize = 16;

impl Ultrafilter {
    pub fn principal(n: usize, i: usize) -> Result<Self> {
        if i >= n {
            return Err(Error::InvalidUltrafilter(format!(
                "generator {i} outside the index set of size {n}"
            )));
        }
        Ok(Ultrafilter { n, principal: i })
    }

    /// Validates an explicit family of subsets and normalizes it to its
    /// principal generator.
    pub fn from_family(n: usize, family: &[Vec<usize>]) -> Result<Self> {
        let bad = |msg: &str| Err(Error::InvalidUltrafilter(msg.to_string()));
        if n == 0 {
            return bad("empty index set");
        }
        if n > FAMILY_INDEX_CAP {
            return Err(Error::CapExceeded {
                what: "ultrafilter index set",
                size: n,
                cap: FAMILY_INDEX_CAP,
            });
        }
        let mut member = vec![false; 1 << n];
        for x in family {
            let mut mask = 0usize;
            for &i in x {
                if i >= n {
                    return Err(Error::InvalidUltrafilter(format!("index {i} out of range")));
                }
                mask |= 1 << i;
            }
            member[mask] = true;
        }
        let full = (1usize << n) - 1;
        if member[0] {
            return bad("contains the empty set");
        }
        for x in 0..=full {
            if !member[x] {
                if !member[full ^ x] {
                    return bad("contains neither a set nor its complement");
                }
                continue;
            }
            // Upward closure: adding any one element stays inside.
            if (0..n).any(|i| !member[x | (1 << i)]) {
                return bad("not upward closed");
            }
            for y in 0..=full {
                if member[y] && !member[x & y] {
                    return bad("not closed under intersection");
                }
            }
        }
        let core = (0..=full).filter(|&x| member[x]).fold(full, |a, x| a & x);
        if core.count_ones() != 1 {
            return bad("not principal");
        }
        Ultrafilter::principal(n, core.trailing_zeros() as usize)
    }

    pub fn index_size(&self) -> usize {
        self.n
    }

    pub fn generator(&self) -> usize {
        self.principal
    }

    pub fn contains(&self, set: &BitSet) -> bool {
        set.contains(self.principal)
    }
}

/// The `n` principal ultrafilters, which are all of them.
pub fn ultrafilters(n: usize) -> Vec<Ultrafilter> {
    (0..n).map(|i| Ultrafilter { n, principal: i }).collect()
}

/// The product of `ms` modulo `s ≡ t ⇔ {i : s_i = t_i} ∈ U`.
///
/// A class is designated when `{i : s_i ∈ D_i} ∈ U`. Classes are named
/// `[t]` after their least tuple `t`. The cells are built as a quotient and
/// then checked against the componentwise membership criterion.
pub fn ultraproduct(ms: &[Nmatrix], u: &Ultrafilter) -> Result<Nmatrix> {
    ultraproduct_with(ms, u, &Limits::default())
}

pub fn ultraproduct_with(ms: &[Nmatrix], u: &Ultrafilter, limits: &Limits) -> Result<Nmatrix> {
    if ms.len() != u.n {
        return Err(Error::InvalidUltrafilter(format!(
            "ultrafilter on {} indices for {} factors",
            u.n,
            ms.len()
        )));
    }
    let prod = product_with(ms, limits)?;
    let sizes: Vec<usize> = ms.iter().map(|m| m.size()).collect();
    let k = ms.len();
    let size = prod.size();
    let comps: Vec<Vec<usize>> = (0..size)
        .map(|v| {
            let mut c = vec![0; k];
            components(&sizes, v, &mut c);
            c
        })
        .collect();
    let in_u = |pred: &dyn Fn(usize) -> bool| u.contains(&BitSet::from_indices(k, (0..k).filter(|&i| pred(i))));

    let mut reps: Vec<usize> = Vec::new();
    let mut label = vec![0; size];
    for s in 0..size {
        let found = reps
            .iter()
            .position(|&r| in_u(&|i| comps[s][i] == comps[r][i]));
        label[s] = found.unwrap_or_else(|| {
            reps.push(s);
            reps.len() - 1
        });
    }
    let mut blocks = vec![Vec::new(); reps.len()];
    for s in 0..size {
        blocks[label[s]].push(s);
    }
    let p = Partition::new(size, blocks)?;
    let q = quotient(&prod, &p)?;
    let labels = p.labels();

    let rep_of: Vec<usize> = p.blocks().iter().map(|b| b[0]).collect();
    let values: Vec<String> = rep_of.iter().map(|&r| format!("[{}]", prod.value_name(r))).collect();
    let designated = BitSet::from_indices(
        p.len(),
        (0..p.len()).filter(|&c| in_u(&|i| ms[i].is_designated(comps[rep_of[c]][i]))),
    );
    for s in 0..size {
        let d = in_u(&|i| ms[i].is_designated(comps[s][i]));
        if d != designated.contains(labels[s]) {
            return Err(Error::Consistency("designation is not class invariant".into()));
        }
    }

    let kc = p.len();
    let mut tables = BTreeMap::new();
    for (c, t) in q.tables() {
        for (i, cell) in t.cells().iter().enumerate() {
            let args: Vec<usize> = tuple_at(kc, t.arity(), i).iter().map(|&a| rep_of[a]).collect();
            for cls in 0..kc {
                let y = rep_of[cls];
                let expected = in_u(&|j| {
                    let local: Vec<usize> = args.iter().map(|&a| comps[a][j]).collect();
                    ms[j].apply(c, &local).contains(comps[y][j])
                });
                if expected != cell.contains(cls) {
                    return Err(Error::Consistency(format!(
                        "ultraproduct cell {c} at {:?} disagrees on {}",
                        args,
                        values[cls]
                    )));
                }
            }
        }
        tables.insert(c.to_string(), t.cells().to_vec());
    }
    Nmatrix::from_parts(prod.signature().clone(), values, designated, tables)
}
