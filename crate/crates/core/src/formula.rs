//! Signatures, formulas, substitutions and sequents.
//!
//! Formulas are written in prefix form, `conn(arg, ...)`. An identifier that
//! is not a connective of the signature is a propositional variable, and a
//! nullary connective may be written with or without `()`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};

/// Characters that may not occur in identifiers (value, variable and
/// connective names).
pub const RESERVED: &[char] = &['{', '}', '(', ')', ';', ':', ',', '#', '"'];

pub fn is_ident_char(c: char) -> bool {
    !c.is_whitespace() && !RESERVED.contains(&c)
}

pub fn is_ident(s: &str) -> bool {
    !s.is_empty() && s.chars().all(is_ident_char)
}

/// Connective names with their arities.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Signature {
    connectives: BTreeMap<String, usize>,
}

impl Signature {
    pub fn new<S: Into<String>>(conns: impl IntoIterator<Item = (S, usize)>) -> Result<Self> {
        let mut connectives = BTreeMap::new();
        for (name, arity) in conns {
            let name = name.into();
            if !is_ident(&name) || name.contains("|-") {
                return Err(Error::Signature(format!("bad connective name `{name}`")));
            }
            if connectives.insert(name.clone(), arity).is_some() {
                return Err(Error::Signature(format!("duplicate connective `{name}`")));
            }
        }
        Ok(Signature { connectives })
    }

    /// The signature `{-> /2}` shared by the builtin families.
    pub fn implication() -> Self {
        Signature::new([("->", 2)]).unwrap()
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.connectives.get(name).copied()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.connectives.contains_key(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, usize)> + '_ {
        self.connectives.iter().map(|(k, &v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.connectives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.connectives.is_empty()
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<_> = self.iter().map(|(c, k)| format!("{c} /{k}")).collect();
        write!(f, "{}", parts.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Var(String),
    App(String, Vec<Formula>),
}

impl Formula {
    pub fn var(name: impl Into<String>) -> Self {
        Formula::Var(name.into())
    }

    pub fn app(conn: impl Into<String>, args: Vec<Formula>) -> Self {
        Formula::App(conn.into(), args)
    }

    /// Binary application, the common case for the implication families.
    pub fn bin(conn: &str, a: Formula, b: Formula) -> Self {
        Formula::App(conn.to_string(), vec![a, b])
    }

    /// Number of nested applications; nullary connectives have depth 1.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Var(_) => 0,
            Formula::App(_, args) => 1 + args.iter().map(Formula::depth).max().unwrap_or(0),
        }
    }

    pub fn args(&self) -> &[Formula] {
        match self {
            Formula::Var(_) => &[],
            Formula::App(_, args) => args,
        }
    }

    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Var(v) => {
                out.insert(v.clone());
            }
            Formula::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn substitute(&self, s: &Substitution) -> Formula {
        match self {
            Formula::Var(v) => s.get(v).cloned().unwrap_or_else(|| self.clone()),
            Formula::App(c, args) => {
                Formula::App(c.clone(), args.iter().map(|a| a.substitute(s)).collect())
            }
        }
    }

    /// Checks that every application matches the signature.
    pub fn check(&self, sig: &Signature) -> Result<()> {
        match self {
            Formula::Var(v) if sig.contains(v) => Err(Error::Signature(format!(
                "`{v}` is both a connective and a variable"
            ))),
            Formula::Var(_) => Ok(()),
            Formula::App(c, args) => {
                let expected = sig
                    .arity(c)
                    .ok_or_else(|| Error::UnknownConnective(c.clone()))?;
                if expected != args.len() {
                    return Err(Error::Arity {
                        name: c.clone(),
                        expected,
                        found: args.len(),
                    });
                }
                args.iter().try_for_each(|a| a.check(sig))
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Var(v) => write!(f, "{v}"),
            Formula::App(c, args) if args.is_empty() => write!(f, "{c}"),
            Formula::App(c, args) => {
                write!(f, "{c}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

pub fn depth(f: &Formula) -> usize {
    f.depth()
}

/// Variable-to-formula map, the identity outside its domain.
pub type Substitution = BTreeMap<String, Formula>;

pub fn apply_substitution(f: &Formula, s: &Substitution) -> Formula {
    f.substitute(s)
}

/// Smallest superset of `fs` closed under immediate subformulas.
pub fn subformula_closure<'a>(fs: impl IntoIterator<Item = &'a Formula>) -> BTreeSet<Formula> {
    let mut out = BTreeSet::new();
    let mut stack: Vec<&Formula> = fs.into_iter().collect();
    while let Some(f) = stack.pop() {
        if out.insert(f.clone()) {
            stack.extend(f.args());
        }
    }
    out
}

pub fn is_subformula_closed(fs: &BTreeSet<Formula>) -> Result<()> {
    for f in fs {
        if let Some(missing) = f.args().iter().find(|a| !fs.contains(*a)) {
            return Err(Error::NotClosed(missing.to_string()));
        }
    }
    Ok(())
}

pub const DEFAULT_FORMULA_CAP: usize = 10_000;

/// All formulas over `p0..p(nvars-1)` of depth at most `maxdepth`.
pub fn formulas_up_to(
    sig: &Signature,
    nvars: usize,
    maxdepth: usize,
    cap: usize,
) -> Result<BTreeSet<Formula>> {
    let too_big = |size| Error::CapExceeded {
        what: "bounded formula universe",
        size,
        cap,
    };
    if nvars > cap {
        return Err(too_big(nvars));
    }
    let mut all: Vec<Formula> = (0..nvars).map(|i| Formula::var(format!("p{i}"))).collect();
    let mut frontier_start = 0;
    for _ in 0..maxdepth {
        // New formulas at this level use at least one argument from the
        // previous frontier; everything else was already produced.
        let prev = all.len();
        let mut size = prev;
        for (_, k) in sig.iter() {
            let added = if k == 0 {
                u128::from(frontier_start == 0)
            } else {
                (prev as u128).pow(k as u32) - (frontier_start as u128).pow(k as u32)
            };
            size = size.saturating_add(usize::try_from(added).unwrap_or(usize::MAX));
            if size > cap {
                return Err(too_big(size));
            }
        }
        let mut next = Vec::new();
        for (c, k) in sig.iter() {
            if k == 0 {
                if frontier_start == 0 {
                    next.push(Formula::app(c, vec![]));
                }
                continue;
            }
            let mut idx = vec![0usize; k];
            'tuples: loop {
                if idx.iter().any(|&i| i >= frontier_start) {
                    next.push(Formula::app(c, idx.iter().map(|&i| all[i].clone()).collect()));
                }
                for pos in (0..k).rev() {
                    idx[pos] += 1;
                    if idx[pos] < prev {
                        continue 'tuples;
                    }
                    idx[pos] = 0;
                }
                break;
            }
        }
        frontier_start = prev;
        all.extend(next);
    }
    Ok(all.into_iter().collect())
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sequent {
    pub premises: BTreeSet<Formula>,
    pub conclusions: BTreeSet<Formula>,
}

impl Sequent {
    pub fn new(
        premises: impl IntoIterator<Item = Formula>,
        conclusions: impl IntoIterator<Item = Formula>,
    ) -> Self {
        Sequent {
            premises: premises.into_iter().collect(),
            conclusions: conclusions.into_iter().collect(),
        }
    }

    pub fn formulas(&self) -> impl Iterator<Item = &Formula> + '_ {
        self.premises.iter().chain(self.conclusions.iter())
    }

    pub fn variables(&self) -> BTreeSet<String> {
        self.formulas().flat_map(|f| f.variables()).collect()
    }

    pub fn substitute(&self, s: &Substitution) -> Sequent {
        Sequent {
            premises: self.premises.iter().map(|f| f.substitute(s)).collect(),
            conclusions: self.conclusions.iter().map(|f| f.substitute(s)).collect(),
        }
    }

    pub fn check(&self, sig: &Signature) -> Result<()> {
        self.formulas().try_for_each(|f| f.check(sig))
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |s: &BTreeSet<Formula>| {
            s.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
        };
        let (l, r) = (join(&self.premises), join(&self.conclusions));
        match (l.is_empty(), r.is_empty()) {
            (true, true) => write!(f, "|-"),
            (true, false) => write!(f, "|- {r}"),
            (false, true) => write!(f, "{l} |-"),
            (false, false) => write!(f, "{l} |- {r}"),
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    offset: usize,
    sig: &'a Signature,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Syntax {
            pos: self.offset + self.pos,
            msg: msg.into(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek().filter(|c| c.is_whitespace()) {
            self.pos += c.len_utf8();
        }
    }

    fn ident(&mut self) -> Result<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.peek().filter(|&c| is_ident_char(c)) {
            self.pos += c.len_utf8();
        }
        if start == self.pos {
            return Err(match self.peek() {
                Some(c) => self.err(format!("expected identifier, found `{c}`")),
                None => self.err("expected identifier, found end of input"),
            });
        }
        Ok(&self.src[start..self.pos])
    }

    fn formula(&mut self) -> Result<Formula> {
        let name = self.ident()?;
        self.skip_ws();
        if self.peek() == Some('(') {
            self.pos += 1;
            let expected = self
                .sig
                .arity(name)
                .ok_or_else(|| Error::UnknownConnective(name.to_string()))?;
            let mut args = Vec::new();
            self.skip_ws();
            if self.peek() == Some(')') {
                self.pos += 1;
            } else {
                loop {
                    args.push(self.formula()?);
                    self.skip_ws();
                    match self.peek() {
                        Some(',') => self.pos += 1,
                        Some(')') => {
                            self.pos += 1;
                            break;
                        }
                        _ => return Err(self.err("expected `,` or `)`")),
                    }
                }
            }
            if args.len() != expected {
                return Err(Error::Arity {
                    name: name.to_string(),
                    expected,
                    found: args.len(),
                });
            }
            Ok(Formula::App(name.to_string(), args))
        } else {
            match self.sig.arity(name) {
                Some(0) => Ok(Formula::App(name.to_string(), vec![])),
                Some(expected) => Err(Error::Arity {
                    name: name.to_string(),
                    expected,
                    found: 0,
                }),
                None => Ok(Formula::Var(name.to_string())),
            }
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.src.len()
    }
}

pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula> {
    let mut p = Parser {
        src: text,
        pos: 0,
        offset: 0,
        sig,
    };
    let f = p.formula()?;
    if !p.at_end() {
        return Err(p.err("trailing input"));
    }
    Ok(f)
}

/// Comma-separated formulas; empty (or blank) text gives the empty list.
pub fn parse_formula_list(text: &str, sig: &Signature) -> Result<Vec<Formula>> {
    parse_list_at(text, 0, sig)
}

fn parse_list_at(text: &str, offset: usize, sig: &Signature) -> Result<Vec<Formula>> {
    let mut p = Parser {
        src: text,
        pos: 0,
        offset,
        sig,
    };
    let mut out = Vec::new();
    if p.at_end() {
        return Ok(out);
    }
    loop {
        out.push(p.formula()?);
        p.skip_ws();
        match p.peek() {
            None => return Ok(out),
            Some(',') => p.pos += 1,
            Some(c) => return Err(p.err(format!("expected `,`, found `{c}`"))),
        }
    }
}

/// Parses `premises |- conclusions`.
pub fn parse_sequent(text: &str, sig: &Signature) -> Result<Sequent> {
    let mut depth = 0i32;
    let mut split = None;
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            '|' if depth == 0 && text[i..].starts_with("|-") => {
                split = Some(i);
                break;
            }
            _ => {}
        }
    }
    let i = split.ok_or(Error::Syntax {
        pos: text.len(),
        msg: "expected `|-`".into(),
    })?;
    let premises = parse_list_at(&text[..i], 0, sig)?;
    let conclusions = parse_list_at(&text[i + 2..], i + 2, sig)?;
    Ok(Sequent::new(premises, conclusions))
}
