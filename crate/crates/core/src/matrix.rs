//! The Nmatrix data type: a finite carrier, set-valued tables and a
//! designated subset.

use std::collections::BTreeMap;
use std::fmt;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::formula::{is_ident, Signature};

/// Interpretation of one connective: a cell per argument tuple, indexed in
/// mixed radix with the first argument most significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Table {
    arity: usize,
    cells: Vec<BitSet>,
}

impl Table {
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn cells(&self) -> &[BitSet] {
        &self.cells
    }

    #[inline]
    pub fn cell(&self, index: usize) -> &BitSet {
        &self.cells[index]
    }
}

/// Index of an argument tuple in a table over a carrier of size `n`.
#[inline]
pub fn tuple_index(n: usize, args: &[usize]) -> usize {
    args.iter().fold(0, |acc, &a| acc * n + a)
}

/// The argument tuple stored at `index`.
pub fn tuple_at(n: usize, arity: usize, mut index: usize) -> Vec<usize> {
    let mut out = vec![0; arity];
    for slot in out.iter_mut().rev() {
        *slot = index % n;
        index /= n;
    }
    out
}

/// Every tuple in `0..n` of length `arity`, in table order.
pub fn tuples(n: usize, arity: usize) -> impl Iterator<Item = Vec<usize>> {
    let count = n.checked_pow(arity as u32).unwrap_or(0);
    (0..count).map(move |i| tuple_at(n, arity, i))
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Nmatrix {
    signature: Signature,
    values: Vec<String>,
    designated: BitSet,
    tables: BTreeMap<String, Table>,
}

impl Nmatrix {
    /// Assembles a matrix from already-indexed parts, checking every
    /// invariant.
    pub fn from_parts(
        signature: Signature,
        values: Vec<String>,
        designated: BitSet,
        tables: BTreeMap<String, Vec<BitSet>>,
    ) -> Result<Self> {
        let n = values.len();
        let mut violations = Vec::new();
        if n == 0 {
            violations.push(Violation::EmptyCarrier);
        }
        let mut seen = std::collections::BTreeSet::new();
        for v in &values {
            if !is_ident(v) {
                violations.push(Violation::BadName(v.clone()));
            }
            if !seen.insert(v) {
                violations.push(Violation::DuplicateValue(v.clone()));
            }
        }
        if let Some(bad) = designated.iter().find(|&d| d >= n) {
            violations.push(Violation::DesignatedNotInCarrier(format!("#{bad}")));
        }
        let mut out = BTreeMap::new();
        for (c, k) in signature.iter() {
            let Some(cells) = tables.get(c) else {
                violations.push(Violation::MissingTable(c.to_string()));
                continue;
            };
            let expected = n.pow(k as u32);
            if cells.len() != expected {
                violations.push(Violation::WrongCellCount {
                    connective: c.to_string(),
                    expected,
                    found: cells.len(),
                });
                continue;
            }
            for (i, cell) in cells.iter().enumerate() {
                let args = names(&values, &tuple_at(n, k, i));
                if cell.is_empty() {
                    violations.push(Violation::EmptyOutput {
                        connective: c.to_string(),
                        args,
                    });
                } else if let Some(bad) = cell.iter().find(|&o| o >= n) {
                    violations.push(Violation::OutputNotInCarrier {
                        connective: c.to_string(),
                        args,
                        value: format!("#{bad}"),
                    });
                }
            }
            out.insert(
                c.to_string(),
                Table {
                    arity: k,
                    cells: cells.clone(),
                },
            );
        }
        for c in tables.keys() {
            if !signature.contains(c) {
                violations.push(Violation::UnknownConnective(c.clone()));
            }
        }
        if !violations.is_empty() {
            return Err(Error::InvalidNmatrix(violations));
        }
        Ok(Nmatrix {
            signature,
            values,
            designated,
            tables: out,
        })
    }

    /// Builds a matrix from a cell function over value indices.
    pub fn from_fn(
        signature: Signature,
        values: Vec<String>,
        designated: BitSet,
        mut cell: impl FnMut(&str, &[usize]) -> BitSet,
    ) -> Result<Self> {
        let n = values.len();
        let tables = signature
            .iter()
            .map(|(c, k)| (c.to_string(), tuples(n, k).map(|t| cell(c, &t)).collect()))
            .collect();
        Nmatrix::from_parts(signature, values, designated, tables)
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn values(&self) -> &[String] {
        &self.values
    }

    pub fn size(&self) -> usize {
        self.values.len()
    }

    pub fn value_name(&self, v: usize) -> &str {
        &self.values[v]
    }

    pub fn value_index(&self, name: &str) -> Option<usize> {
        self.values.iter().position(|v| v == name)
    }

    pub fn value(&self, name: &str) -> Result<usize> {
        self.value_index(name)
            .ok_or_else(|| Error::UnknownValue(name.to_string()))
    }

    pub fn designated(&self) -> &BitSet {
        &self.designated
    }

    pub fn undesignated(&self) -> BitSet {
        let mut u = BitSet::full(self.size());
        for d in &self.designated {
            u.remove(d);
        }
        u
    }

    pub fn is_designated(&self, v: usize) -> bool {
        self.designated.contains(v)
    }

    pub fn table(&self, conn: &str) -> Option<&Table> {
        self.tables.get(conn)
    }

    pub fn tables(&self) -> impl Iterator<Item = (&str, &Table)> + '_ {
        self.tables.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Output set of `conn` on `args`. Panics on an unknown connective.
    pub fn apply(&self, conn: &str, args: &[usize]) -> &BitSet {
        self.tables[conn].cell(tuple_index(self.size(), args))
    }

    /// True iff every cell is a singleton.
    pub fn is_deterministic(&self) -> bool {
        self.tables
            .values()
            .all(|t| t.cells.iter().all(BitSet::is_singleton))
    }

    pub fn names_of(&self, set: &BitSet) -> Vec<&str> {
        set.iter().map(|v| self.value_name(v)).collect()
    }

    pub fn set_of<S: AsRef<str>>(&self, names: &[S]) -> Result<BitSet> {
        let mut s = BitSet::empty(self.size());
        for n in names {
            s.insert(self.value(n.as_ref())?);
        }
        Ok(s)
    }
}

fn names(values: &[String], idx: &[usize]) -> Vec<String> {
    idx.iter()
        .map(|&i| values.get(i).cloned().unwrap_or_else(|| format!("#{i}")))
        .collect()
}

/// Writes the matrix in the workspace file syntax.
impl fmt::Display for Nmatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{{")?;
        writeln!(f, "  values: {} ;", self.values.join(" "))?;
        writeln!(f, "  designated: {} ;", self.names_of(&self.designated).join(" "))?;
        for (c, t) in &self.tables {
            writeln!(f, "  table {c} {{")?;
            for (i, cell) in t.cells.iter().enumerate() {
                let args = names(&self.values, &tuple_at(self.size(), t.arity, i));
                writeln!(
                    f,
                    "    {}{}: {} ;",
                    args.join(" "),
                    if args.is_empty() { "" } else { " " },
                    self.names_of(cell).join(" ")
                )?;
            }
            writeln!(f, "  }}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for Nmatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A broken invariant found while validating an Nmatrix description.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    EmptyCarrier,
    BadName(String),
    DuplicateValue(String),
    DesignatedNotInCarrier(String),
    MissingTable(String),
    UnknownConnective(String),
    WrongCellCount {
        connective: String,
        expected: usize,
        found: usize,
    },
    EmptyOutput {
        connective: String,
        args: Vec<String>,
    },
    OutputNotInCarrier {
        connective: String,
        args: Vec<String>,
        value: String,
    },
    ArgNotInCarrier {
        connective: String,
        value: String,
    },
    WrongArgCount {
        connective: String,
        args: Vec<String>,
    },
    DuplicateCell {
        connective: String,
        args: Vec<String>,
    },
    MissingCell {
        connective: String,
        args: Vec<String>,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let at = |c: &str, a: &[String]| format!("{c}({})", a.join(","));
        match self {
            Violation::EmptyCarrier => write!(f, "empty carrier"),
            Violation::BadName(v) => write!(f, "bad value name `{v}`"),
            Violation::DuplicateValue(v) => write!(f, "duplicate value `{v}`"),
            Violation::DesignatedNotInCarrier(v) => {
                write!(f, "designated value `{v}` not in carrier")
            }
            Violation::MissingTable(c) => write!(f, "missing table for `{c}`"),
            Violation::UnknownConnective(c) => write!(f, "table for unknown connective `{c}`"),
            Violation::WrongCellCount {
                connective,
                expected,
                found,
            } => write!(f, "table `{connective}` has {found} cells, expected {expected}"),
            Violation::EmptyOutput { connective, args } => {
                write!(f, "empty output set at {}", at(connective, args))
            }
            Violation::OutputNotInCarrier {
                connective,
                args,
                value,
            } => write!(f, "output `{value}` at {} not in carrier", at(connective, args)),
            Violation::ArgNotInCarrier { connective, value } => {
                write!(f, "argument `{value}` in table `{connective}` not in carrier")
            }
            Violation::WrongArgCount { connective, args } => {
                write!(f, "wrong number of arguments at {}", at(connective, args))
            }
            Violation::DuplicateCell { connective, args } => {
                write!(f, "duplicate entry for {}", at(connective, args))
            }
            Violation::MissingCell { connective, args } => {
                write!(f, "missing entry for {}", at(connective, args))
            }
        }
    }
}

/// A name-based Nmatrix description, as read from a file, not yet
/// validated.
#[derive(Clone, Debug, Default)]
pub struct RawNmatrix {
    pub signature: Signature,
    pub values: Vec<String>,
    pub designated: Vec<String>,
    /// Per connective, the listed `(arguments, outputs)` rows.
    pub tables: BTreeMap<String, TableRows>,
}

/// `(arguments, outputs)` rows of one table, by value name.
pub type TableRows = Vec<(Vec<String>, Vec<String>)>;

/// Reports every broken invariant of `raw`; an empty list means valid.
pub fn validate_nmatrix(raw: &RawNmatrix) -> Vec<Violation> {
    match build(raw) {
        Ok(_) => vec![],
        Err(v) => v,
    }
}

impl TryFrom<&RawNmatrix> for Nmatrix {
    type Error = Error;

    fn try_from(raw: &RawNmatrix) -> Result<Self> {
        build(raw).map_err(Error::InvalidNmatrix)
    }
}

fn build(raw: &RawNmatrix) -> Result<Nmatrix, Vec<Violation>> {
    let mut violations = Vec::new();
    let n = raw.values.len();
    let index: BTreeMap<&str, usize> = raw
        .values
        .iter()
        .enumerate()
        .map(|(i, v)| (v.as_str(), i))
        .collect();
    let mut designated = BitSet::empty(n);
    for d in &raw.designated {
        match index.get(d.as_str()) {
            Some(&i) => designated.insert(i),
            None => violations.push(Violation::DesignatedNotInCarrier(d.clone())),
        }
    }
    let mut tables = BTreeMap::new();
    for (c, rows) in &raw.tables {
        let Some(k) = raw.signature.arity(c) else {
            violations.push(Violation::UnknownConnective(c.clone()));
            continue;
        };
        let mut cells: Vec<Option<BitSet>> = vec![None; n.pow(k as u32)];
        for (args, outs) in rows {
            if args.len() != k {
                violations.push(Violation::WrongArgCount {
                    connective: c.clone(),
                    args: args.clone(),
                });
                continue;
            }
            let mut idx = Vec::with_capacity(k);
            for a in args {
                match index.get(a.as_str()) {
                    Some(&i) => idx.push(i),
                    None => violations.push(Violation::ArgNotInCarrier {
                        connective: c.clone(),
                        value: a.clone(),
                    }),
                }
            }
            if idx.len() != k {
                continue;
            }
            let mut set = BitSet::empty(n);
            for o in outs {
                match index.get(o.as_str()) {
                    Some(&i) => set.insert(i),
                    None => violations.push(Violation::OutputNotInCarrier {
                        connective: c.clone(),
                        args: args.clone(),
                        value: o.clone(),
                    }),
                }
            }
            if outs.is_empty() {
                violations.push(Violation::EmptyOutput {
                    connective: c.clone(),
                    args: args.clone(),
                });
            }
            let slot = &mut cells[tuple_index(n, &idx)];
            if slot.is_some() {
                violations.push(Violation::DuplicateCell {
                    connective: c.clone(),
                    args: args.clone(),
                });
            }
            *slot = Some(set);
        }
        let mut full = Vec::with_capacity(cells.len());
        for (i, cell) in cells.into_iter().enumerate() {
            match cell {
                Some(s) => full.push(s),
                None => {
                    violations.push(Violation::MissingCell {
                        connective: c.clone(),
                        args: names(&raw.values, &tuple_at(n, k, i)),
                    });
                    full.push(BitSet::full(n));
                }
            }
        }
        tables.insert(c.clone(), full);
    }
    match Nmatrix::from_parts(raw.signature.clone(), raw.values.clone(), designated, tables) {
        Ok(m) if violations.is_empty() => Ok(m),
        Ok(_) => Err(violations),
        Err(Error::InvalidNmatrix(more)) => {
            // Structural checks may repeat what the row pass found.
            for v in more {
                if !violations.contains(&v) {
                    violations.push(v);
                }
            }
            Err(violations)
        }
        Err(e) => unreachable!("from_parts only reports violations: {e}"),
    }
}

pub fn is_deterministic(m: &Nmatrix) -> bool {
    m.is_deterministic()
}

/// The implication families over `A_{n,m} = U_n ∪ D_m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// Unconstrained: every cell is the whole carrier.
    U,
    /// Modus-ponens: designated-to-undesignated gives `U_n`.
    MP,
    /// Identity: equal arguments give `D_m`.
    D,
    /// Both of the above, identity first.
    I,
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "U" => Ok(Family::U),
            "MP" => Ok(Family::MP),
            "D" => Ok(Family::D),
            "I" => Ok(Family::I),
            _ => Err(Error::Family(format!("unknown family `{s}`"))),
        }
    }
}

/// Name of the `i`-th undesignated value.
pub fn bot(i: usize) -> String {
    format!("⊥{i}")
}

/// Name of the `i`-th designated value.
pub fn top(i: usize) -> String {
    format!("⊤{i}")
}

/// The finite member `(n, m)` of a builtin family; carrier `⊥0..⊥(n-1)`
/// followed by `⊤0..⊤(m-1)`, designated the `⊤` values.
pub fn builtin_family(family: Family, n: usize, m: usize) -> Result<Nmatrix> {
    if n + m == 0 {
        return Err(Error::Family("carrier must be nonempty (n + m >= 1)".into()));
    }
    let values: Vec<String> = (0..n).map(bot).chain((0..m).map(top)).collect();
    let size = n + m;
    let all = BitSet::full(size);
    let undes = BitSet::from_indices(size, 0..n);
    let des = BitSet::from_indices(size, n..size);
    let is_des = |v: usize| v >= n;
    Nmatrix::from_fn(Signature::implication(), values, des.clone(), |_, a| {
        let (x, y) = (a[0], a[1]);
        let same = x == y;
        let mp = is_des(x) && !is_des(y);
        let cell = match family {
            Family::U => &all,
            Family::MP if mp => &undes,
            Family::D if same => &des,
            Family::I if same => &des,
            Family::I if mp => &undes,
            _ => &all,
        };
        // D and I with m = 0 produce empty cells here and are rejected by
        // validation.
        cell.clone()
    })
}
