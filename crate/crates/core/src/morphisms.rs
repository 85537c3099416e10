//! Homomorphisms between finite Nmatrices.
//!
//! A map `h: A1 → A2` is a homomorphism when `h[©1(x⃗)] ⊆ ©2(h(x⃗))` for
//! every cell and `h[D1] ⊆ D2`; it is strict when moreover
//! `h⁻¹(D2) = D1`.

use std::fmt;

use crate::bitset::BitSet;
use crate::constructions::Partition;
use crate::error::{Error, Result};
use crate::matrix::{tuple_at, tuple_index, Nmatrix, Table};

#[derive(Clone, PartialEq, Eq)]
pub struct HomMap {
    source: Nmatrix,
    target: Nmatrix,
    map: Vec<usize>,
}

impl HomMap {
    /// Wraps a total map on value indices; does not check the homomorphism
    /// conditions.
    pub fn new(source: Nmatrix, target: Nmatrix, map: Vec<usize>) -> Result<Self> {
        if source.signature() != target.signature() {
            return Err(Error::SignatureMismatch);
        }
        if map.len() != source.size() {
            return Err(Error::InvalidMap(format!(
                "map has {} entries for {} source values",
                map.len(),
                source.size()
            )));
        }
        if let Some(&bad) = map.iter().find(|&&t| t >= target.size()) {
            return Err(Error::InvalidMap(format!("target index {bad} out of range")));
        }
        Ok(HomMap {
            source,
            target,
            map,
        })
    }

    /// Builds the map from `(source value, target value)` name pairs, which
    /// must cover the source carrier exactly once.
    pub fn from_names<S: AsRef<str>>(
        source: &Nmatrix,
        target: &Nmatrix,
        pairs: &[(S, S)],
    ) -> Result<Self> {
        let mut map = vec![None; source.size()];
        for (a, b) in pairs {
            let i = source.value(a.as_ref())?;
            let j = target.value(b.as_ref())?;
            if map[i].replace(j).is_some() {
                return Err(Error::InvalidMap(format!("`{}` mapped twice", a.as_ref())));
            }
        }
        let map = map
            .into_iter()
            .enumerate()
            .map(|(i, t)| {
                t.ok_or_else(|| {
                    Error::InvalidMap(format!("`{}` is not mapped", source.value_name(i)))
                })
            })
            .collect::<Result<_>>()?;
        HomMap::new(source.clone(), target.clone(), map)
    }

    /// The identity on `m`.
    pub fn identity(m: &Nmatrix) -> Self {
        HomMap {
            source: m.clone(),
            target: m.clone(),
            map: (0..m.size()).collect(),
        }
    }

    pub fn source(&self) -> &Nmatrix {
        &self.source
    }

    pub fn target(&self) -> &Nmatrix {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    #[inline]
    pub fn apply(&self, v: usize) -> usize {
        self.map[v]
    }

    pub fn apply_set(&self, s: &BitSet) -> BitSet {
        BitSet::from_indices(self.target.size(), s.iter().map(|v| self.map[v]))
    }

    /// `(source name, target name)` pairs in source order.
    pub fn named(&self) -> Vec<(String, String)> {
        self.map
            .iter()
            .enumerate()
            .map(|(i, &j)| {
                (
                    self.source.value_name(i).to_string(),
                    self.target.value_name(j).to_string(),
                )
            })
            .collect()
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &HomMap) -> Result<HomMap> {
        if self.target != other.source {
            return Err(Error::InvalidMap("maps do not compose".into()));
        }
        HomMap::new(
            self.source.clone(),
            other.target.clone(),
            self.map.iter().map(|&v| other.map[v]).collect(),
        )
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = BitSet::empty(self.target.size());
        self.map.iter().all(|&t| {
            let fresh = !seen.contains(t);
            seen.insert(t);
            fresh
        })
    }

    pub fn is_onto(&self) -> bool {
        BitSet::from_indices(self.target.size(), self.map.iter().copied()).len()
            == self.target.size()
    }
}

impl fmt::Display for HomMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<_> = self
            .named()
            .into_iter()
            .map(|(a, b)| format!("{a} ↦ {b}"))
            .collect();
        write!(f, "{}", parts.join(", "))
    }
}

impl fmt::Debug for HomMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HomMap({self})")
    }
}

/// Multialgebra condition plus `h[D1] ⊆ D2`.
pub fn is_hom(h: &HomMap) -> bool {
    let (src, tgt) = (&h.source, &h.target);
    if h.source.designated().iter().any(|d| !tgt.is_designated(h.apply(d))) {
        return false;
    }
    let n = src.size();
    src.tables().all(|(c, t)| {
        let tt = tgt.table(c).expect("signatures match");
        t.cells().iter().enumerate().all(|(i, cell)| {
            let args: Vec<usize> = tuple_at(n, t.arity(), i).iter().map(|&a| h.apply(a)).collect();
            let out = tt.cell(tuple_index(tgt.size(), &args));
            cell.iter().all(|y| out.contains(h.apply(y)))
        })
    })
}

/// A homomorphism with `h⁻¹(D2) = D1`.
pub fn is_strict(h: &HomMap) -> bool {
    is_hom(h)
        && (0..h.source.size())
            .all(|v| h.source.is_designated(v) == h.target.is_designated(h.apply(v)))
}

pub fn is_embedding(h: &HomMap) -> bool {
    is_strict(h) && h.is_injective()
}

/// Cells of `h[M1]` indexed over the target carrier; unhit tuples stay
/// empty.
fn image_cells(h: &HomMap) -> Vec<(String, Vec<BitSet>)> {
    let (src, tgt) = (&h.source, &h.target);
    let (n, m) = (src.size(), tgt.size());
    src.tables()
        .map(|(c, t)| {
            let mut cells = vec![BitSet::empty(m); m.pow(t.arity() as u32)];
            for (i, cell) in t.cells().iter().enumerate() {
                let args: Vec<usize> = tuple_at(n, t.arity(), i).iter().map(|&a| h.apply(a)).collect();
                cells[tuple_index(m, &args)].union_with(&h.apply_set(cell));
            }
            (c.to_string(), cells)
        })
        .collect()
}

/// The image `h[M1]`: carrier `h[A1]` (in target order), designated
/// `D2 ∩ h[A1]`, and each cell the union of `h[©1(y⃗)]` over the tuples `y⃗`
/// mapped onto it.
pub fn image(h: &HomMap) -> Result<Nmatrix> {
    if !is_strict(h) {
        return Err(Error::NotStrict);
    }
    let tgt = &h.target;
    let hit = BitSet::from_indices(tgt.size(), h.map.iter().copied());
    let carrier: Vec<usize> = hit.iter().collect();
    let mut pos = vec![usize::MAX; tgt.size()];
    for (i, &v) in carrier.iter().enumerate() {
        pos[v] = i;
    }
    let k = carrier.len();
    let reindex = |s: &BitSet| BitSet::from_indices(k, s.iter().map(|v| pos[v]));
    let tables = image_cells(h)
        .into_iter()
        .map(|(c, cells)| {
            let arity = tgt.signature().arity(&c).unwrap();
            let sub = crate::matrix::tuples(k, arity)
                .map(|args| {
                    let full: Vec<usize> = args.iter().map(|&a| carrier[a]).collect();
                    reindex(&cells[tuple_index(tgt.size(), &full)])
                })
                .collect();
            (c, sub)
        })
        .collect();
    Nmatrix::from_parts(
        tgt.signature().clone(),
        carrier.iter().map(|&v| tgt.value_name(v).to_string()).collect(),
        reindex(&tgt.designated().intersection(&hit)),
        tables,
    )
}

/// Strict and `h[M1] = M2`, compared cell by cell.
pub fn is_covering(h: &HomMap) -> bool {
    if !is_strict(h) || !h.is_onto() {
        return false;
    }
    image_cells(h)
        .into_iter()
        .all(|(c, cells)| cells.as_slice() == h.target.table(&c).unwrap().cells())
}

/// The fibers of `h` as a partition of the source carrier.
pub fn kernel_partition(h: &HomMap) -> Partition {
    let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); h.target.size()];
    for (v, &t) in h.map.iter().enumerate() {
        blocks[t].push(v);
    }
    Partition::new(
        h.source.size(),
        blocks.into_iter().filter(|b| !b.is_empty()).collect(),
    )
    .expect("fibers partition the carrier")
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct HomFlags {
    pub covering: bool,
    pub injective: bool,
}

/// One check that becomes decidable once its last variable is assigned.
struct Check<'a> {
    table: &'a Table,
    args: Vec<usize>,
    kind: CheckKind,
}

enum CheckKind {
    /// `h(y) ∈ ©2(h(args))`.
    Member(usize),
    /// `|©1(args)| = |©2(h(args))|`, used for isomorphisms.
    SameSize(usize),
}

struct Search<'a> {
    tgt: &'a Nmatrix,
    order: Vec<usize>,
    candidates: Vec<Vec<usize>>,
    checks_at: Vec<Vec<Check<'a>>>,
    injective: bool,
    covering: bool,
    map: Vec<usize>,
    used: Vec<usize>,
}

const UNSET: usize = usize::MAX;

impl<'a> Search<'a> {
    fn new(src: &'a Nmatrix, tgt: &'a Nmatrix, flags: HomFlags, iso: bool) -> Self {
        let n = src.size();
        let mut degree = vec![0usize; n];
        for (_, t) in src.tables() {
            for (i, cell) in t.cells().iter().enumerate() {
                let args = tuple_at(n, t.arity(), i);
                for y in cell {
                    degree[y] += 1;
                    for &a in &args {
                        degree[a] += 1;
                    }
                }
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(degree[v]), v));
        let mut pos = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }

        let src_inv = if iso { invariants(src) } else { vec![] };
        let tgt_inv = if iso { invariants(tgt) } else { vec![] };
        let candidates = (0..n)
            .map(|v| {
                (0..tgt.size())
                    .filter(|&t| src.is_designated(v) == tgt.is_designated(t))
                    .filter(|&t| !iso || src_inv[v] == tgt_inv[t])
                    .collect()
            })
            .collect();

        let mut checks_at: Vec<Vec<Check<'a>>> = (0..n).map(|_| Vec::new()).collect();
        for (c, t) in src.tables() {
            let tt = tgt.table(c).expect("signatures match");
            for (i, cell) in t.cells().iter().enumerate() {
                let args = tuple_at(n, t.arity(), i);
                let last_arg = args.iter().map(|&a| pos[a]).max();
                if iso {
                    checks_at[last_arg.unwrap_or(0)].push(Check {
                        table: tt,
                        args: args.clone(),
                        kind: CheckKind::SameSize(cell.len()),
                    });
                }
                for y in cell {
                    let at = last_arg.map_or(pos[y], |p| p.max(pos[y]));
                    checks_at[at].push(Check {
                        table: tt,
                        args: args.clone(),
                        kind: CheckKind::Member(y),
                    });
                }
            }
        }
        Search {
            tgt,
            order,
            candidates,
            checks_at,
            injective: flags.injective || iso,
            covering: flags.covering || iso,
            map: vec![UNSET; n],
            used: vec![0; tgt.size()],
        }
    }

    fn checks_pass(&self, level: usize) -> bool {
        let m = self.tgt.size();
        self.checks_at[level].iter().all(|ch| {
            let idx = ch.args.iter().fold(0, |acc, &a| acc * m + self.map[a]);
            let out = ch.table.cell(idx);
            match ch.kind {
                CheckKind::Member(y) => out.contains(self.map[y]),
                CheckKind::SameSize(k) => out.len() == k,
            }
        })
    }

    fn run(&mut self, level: usize, accept: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if level == self.order.len() {
            return accept(&self.map);
        }
        if self.covering {
            let unhit = self.used.iter().filter(|&&u| u == 0).count();
            if unhit > self.order.len() - level {
                return false;
            }
        }
        let v = self.order[level];
        for ci in 0..self.candidates[v].len() {
            let t = self.candidates[v][ci];
            if self.injective && self.used[t] > 0 {
                continue;
            }
            self.map[v] = t;
            self.used[t] += 1;
            if self.checks_pass(level) && self.run(level + 1, accept) {
                return true;
            }
            self.used[t] -= 1;
            self.map[v] = UNSET;
        }
        false
    }
}

/// Per-value isomorphism invariants: designation, then per connective and
/// argument position the sorted sizes of the cells in that row, then the
/// number of cells containing the value.
fn invariants(m: &Nmatrix) -> Vec<Vec<usize>> {
    let n = m.size();
    let mut inv: Vec<Vec<usize>> = (0..n).map(|v| vec![m.is_designated(v) as usize]).collect();
    for (_, t) in m.tables() {
        for p in 0..t.arity() {
            let mut rows: Vec<Vec<usize>> = vec![Vec::new(); n];
            for (i, cell) in t.cells().iter().enumerate() {
                rows[tuple_at(n, t.arity(), i)[p]].push(cell.len());
            }
            for (v, mut r) in rows.into_iter().enumerate() {
                r.sort_unstable();
                inv[v].extend(r);
            }
        }
        for (v, row) in inv.iter_mut().enumerate() {
            row.push(t.cells().iter().filter(|c| c.contains(v)).count());
        }
    }
    inv
}

/// Exhaustive search for a strict homomorphism with the requested extra
/// properties. Returns the first one found in search order.
pub fn find_strict_hom(src: &Nmatrix, tgt: &Nmatrix, flags: HomFlags) -> Option<HomMap> {
    if src.signature() != tgt.signature() {
        return None;
    }
    if flags.injective && src.size() > tgt.size() {
        return None;
    }
    let mut search = Search::new(src, tgt, flags, false);
    let mut found = None;
    search.run(0, &mut |map| {
        let h = HomMap {
            source: src.clone(),
            target: tgt.clone(),
            map: map.to_vec(),
        };
        if flags.covering && !is_covering(&h) {
            return false;
        }
        found = Some(h);
        true
    });
    found
}

/// A bijective strict map with `h(©a(x⃗)) = ©b(h(x⃗))` on every cell.
pub fn find_isomorphism(a: &Nmatrix, b: &Nmatrix) -> Option<HomMap> {
    if a.signature() != b.signature()
        || a.size() != b.size()
        || a.designated().len() != b.designated().len()
    {
        return None;
    }
    let mut search = Search::new(a, b, HomFlags::default(), true);
    let mut found = None;
    search.run(0, &mut |map| {
        found = Some(HomMap {
            source: a.clone(),
            target: b.clone(),
            map: map.to_vec(),
        });
        true
    });
    found
}
