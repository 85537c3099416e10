//! Workspace files and the `nmx` command line.
//!
//! A workspace file declares one signature and any number of named
//! matrices, rule sets and maps:
//!
//! ```text
//! # comments run to the end of the line
//! signature: -> /2, ¬ /1
//! nmatrix M { values: a b ; designated: b ; table -> { a a : b ; ... } table ¬ { a : b ; b : a ; } }
//! family U 1 1 as U11
//! rules R { "p, ->(p,q) |- q" ; "|- ->(p,p)" }
//! hom H from M to U11 { a : ⊥0 ; b : ⊤0 ; }
//! ```
//!
//! Every command prints a text report, or a JSON [`Document`] with
//! `--json`. Exit codes: 0 when the query was answered positively, 1 when
//! the property was refuted (a witness is printed), 2 on errors.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::compare::{bounded_equivalent_with, witness_chain, PairMode};
use crate::constructions::{
    classify_compatible_quotients, enumerate_compatible_partitions_with, is_compatible,
    product_with, quotient, ultraproduct_with, Partition, Ultrafilter,
};
use crate::error::Error;
use crate::formula::{
    formulas_up_to, parse_formula_list, parse_sequent, subformula_closure, Sequent, Signature,
};
use crate::matrix::{builtin_family, tuple_at, Family, Nmatrix, RawNmatrix};
use crate::morphisms::{find_isomorphism, find_strict_hom, image, HomFlags, HomMap};
use crate::semantics::{
    check_rule_under_all_substitutions_with, entails_class, realized_patterns_with, ruleset_sound,
    Assignment,
};
use crate::Limits;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CliError {
    #[error("{path}: {msg}")]
    Io { path: String, msg: String },

    #[error("{line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("unknown {kind} `{name}`")]
    UnknownName { kind: &'static str, name: String },

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Lib(#[from] Error),
}

// ---------------------------------------------------------------------------
// Workspace files

/// The named objects declared by a workspace file.
#[derive(Clone, Debug, Default)]
pub struct Workspace {
    signature: Option<Signature>,
    matrices: BTreeMap<String, Nmatrix>,
    rules: BTreeMap<String, Vec<Sequent>>,
    homs: BTreeMap<String, HomMap>,
}

impl Workspace {
    pub fn signature(&self) -> Option<&Signature> {
        self.signature.as_ref()
    }

    pub fn matrix(&self, name: &str) -> Result<&Nmatrix, CliError> {
        self.matrices.get(name).ok_or_else(|| CliError::UnknownName {
            kind: "matrix",
            name: name.to_string(),
        })
    }

    pub fn rules(&self, name: &str) -> Result<&[Sequent], CliError> {
        self.rules
            .get(name)
            .map(Vec::as_slice)
            .ok_or_else(|| CliError::UnknownName {
                kind: "rule set",
                name: name.to_string(),
            })
    }

    pub fn hom(&self, name: &str) -> Result<&HomMap, CliError> {
        self.homs.get(name).ok_or_else(|| CliError::UnknownName {
            kind: "map",
            name: name.to_string(),
        })
    }

    pub fn matrix_names(&self) -> impl Iterator<Item = &str> + '_ {
        self.matrices.keys().map(String::as_str)
    }

    pub fn rule_names(&self) -> impl Iterator<Item = &str> + '_ {
        self.rules.keys().map(String::as_str)
    }

    pub fn hom_names(&self) -> impl Iterator<Item = &str> + '_ {
        self.homs.keys().map(String::as_str)
    }

    fn sig(&self) -> Result<&Signature, CliError> {
        self.signature
            .as_ref()
            .ok_or_else(|| CliError::Usage("the workspace declares no signature".into()))
    }
}

pub fn load(path: impl AsRef<Path>) -> Result<Workspace, CliError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })?;
    parse_workspace(&text)
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Word(String),
    Str(String),
    Sym(char),
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn tokenize(text: &str) -> Result<Vec<Spanned>, CliError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1, 1);
    while let Some(&c) = chars.peek() {
        let (l, k) = (line, col);
        let mut bump = |ch: char| {
            if ch == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        };
        match c {
            '#' => {
                while let Some(&ch) = chars.peek() {
                    if ch == '\n' {
                        break;
                    }
                    bump(ch);
                    chars.next();
                }
            }
            c if c.is_whitespace() => {
                bump(c);
                chars.next();
            }
            '{' | '}' | ';' | ':' | ',' => {
                bump(c);
                chars.next();
                out.push(Spanned {
                    tok: Tok::Sym(c),
                    line: l,
                    col: k,
                });
            }
            '(' | ')' => {
                return Err(CliError::Parse {
                    line: l,
                    col: k,
                    msg: format!("unexpected `{c}` outside a quoted sequent"),
                })
            }
            '"' => {
                bump(c);
                chars.next();
                let mut s = String::new();
                loop {
                    match chars.next() {
                        Some('"') => {
                            bump('"');
                            break;
                        }
                        Some(ch) => {
                            bump(ch);
                            s.push(ch);
                        }
                        None => {
                            return Err(CliError::Parse {
                                line: l,
                                col: k,
                                msg: "unterminated string".into(),
                            })
                        }
                    }
                }
                out.push(Spanned {
                    tok: Tok::Str(s),
                    line: l,
                    col: k,
                });
            }
            _ => {
                let mut w = String::new();
                while let Some(&ch) = chars.peek() {
                    if !crate::formula::is_ident_char(ch) {
                        break;
                    }
                    bump(ch);
                    w.push(ch);
                    chars.next();
                }
                out.push(Spanned {
                    tok: Tok::Word(w),
                    line: l,
                    col: k,
                });
            }
        }
    }
    Ok(out)
}

struct FileParser {
    toks: Vec<Spanned>,
    pos: usize,
    end: (usize, usize),
    ws: Workspace,
}

impl FileParser {
    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .map_or(self.end, |t| (t.line, t.col))
    }

    fn err_at(&self, (line, col): (usize, usize), msg: impl Into<String>) -> CliError {
        CliError::Parse {
            line,
            col,
            msg: msg.into(),
        }
    }

    fn err(&self, msg: impl Into<String>) -> CliError {
        self.err_at(self.here(), msg)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.tok.clone());
        self.pos += 1;
        t
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, c: char) -> Result<(), CliError> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{c}`")))
        }
    }

    fn word(&mut self, what: &str) -> Result<String, CliError> {
        match self.peek() {
            Some(Tok::Word(w)) => {
                let w = w.clone();
                self.pos += 1;
                Ok(w)
            }
            _ => Err(self.err(format!("expected {what}"))),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), CliError> {
        let at = self.here();
        match self.word(&format!("`{kw}`"))? {
            w if w == kw => Ok(()),
            w => Err(self.err_at(at, format!("expected `{kw}`, found `{w}`"))),
        }
    }

    /// Words up to (not including) the next symbol.
    fn words(&mut self) -> Vec<String> {
        let mut out = Vec::new();
        while let Some(Tok::Word(w)) = self.peek() {
            out.push(w.clone());
            self.pos += 1;
        }
        out
    }

    fn number(&mut self, what: &str) -> Result<usize, CliError> {
        let at = self.here();
        let w = self.word(what)?;
        w.parse()
            .map_err(|_| self.err_at(at, format!("expected {what}, found `{w}`")))
    }

    fn parse(mut self) -> Result<Workspace, CliError> {
        while self.pos < self.toks.len() {
            let at = self.here();
            let kw = self.word("a declaration")?;
            match kw.as_str() {
                "signature" => self.signature(at)?,
                "nmatrix" => self.nmatrix(at)?,
                "family" => self.family(at)?,
                "rules" => self.rules()?,
                "hom" => self.hom(at)?,
                other => return Err(self.err_at(at, format!("unknown declaration `{other}`"))),
            }
        }
        Ok(self.ws)
    }

    fn signature(&mut self, at: (usize, usize)) -> Result<(), CliError> {
        if self.ws.signature.is_some() {
            return Err(self.err_at(at, "signature declared twice"));
        }
        if !self.ws.matrices.is_empty() {
            return Err(self.err_at(at, "signature must precede every matrix"));
        }
        self.expect_sym(':')?;
        let mut entries = Vec::new();
        if matches!(self.peek(), Some(Tok::Word(_))) {
            loop {
                let at = self.here();
                let w = self.word("a connective")?;
                let (name, arity) = match w.rsplit_once('/') {
                    Some((n, k)) if !n.is_empty() && k.parse::<usize>().is_ok() => {
                        (n.to_string(), k.to_string())
                    }
                    _ => {
                        let k = self.word("`/arity`")?;
                        match k.strip_prefix('/') {
                            Some(k) => (w, k.to_string()),
                            None => return Err(self.err_at(at, format!("expected `/arity` after `{w}`"))),
                        }
                    }
                };
                let arity = arity
                    .parse::<usize>()
                    .map_err(|_| self.err_at(at, format!("bad arity `{arity}`")))?;
                entries.push((name, arity));
                if !self.eat_sym(',') {
                    break;
                }
            }
        }
        let sig = Signature::new(entries).map_err(|e| self.err_at(at, e.to_string()))?;
        self.ws.signature = Some(sig);
        Ok(())
    }

    fn sig_for(&self, at: (usize, usize)) -> Result<Signature, CliError> {
        self.ws
            .signature
            .clone()
            .ok_or_else(|| self.err_at(at, "no signature declared before this declaration"))
    }

    fn add_matrix(&mut self, at: (usize, usize), name: String, m: Nmatrix) -> Result<(), CliError> {
        if self.ws.matrices.contains_key(&name) {
            return Err(self.err_at(at, format!("duplicate matrix name `{name}`")));
        }
        self.ws.matrices.insert(name, m);
        Ok(())
    }

    fn nmatrix(&mut self, at: (usize, usize)) -> Result<(), CliError> {
        let name = self.word("a matrix name")?;
        let signature = self.sig_for(at)?;
        self.expect_sym('{')?;
        let mut raw = RawNmatrix {
            signature,
            ..RawNmatrix::default()
        };
        let (mut seen_values, mut seen_designated) = (false, false);
        while !self.eat_sym('}') {
            let sat = self.here();
            let section = self.word("`values`, `designated` or `table`")?;
            match section.as_str() {
                "values" | "designated" => {
                    let seen = if section == "values" {
                        &mut seen_values
                    } else {
                        &mut seen_designated
                    };
                    if std::mem::replace(seen, true) {
                        return Err(self.err_at(sat, format!("`{section}` given twice")));
                    }
                    self.expect_sym(':')?;
                    let ws = self.words();
                    self.expect_sym(';')?;
                    if section == "values" {
                        raw.values = ws;
                    } else {
                        raw.designated = ws;
                    }
                }
                "table" => {
                    let conn = self.word("a connective")?;
                    if raw.tables.contains_key(&conn) {
                        return Err(self.err_at(sat, format!("table `{conn}` given twice")));
                    }
                    self.expect_sym('{')?;
                    let mut rows = Vec::new();
                    while !self.eat_sym('}') {
                        let args = self.words();
                        self.expect_sym(':')?;
                        let outs = self.words();
                        self.expect_sym(';')?;
                        rows.push((args, outs));
                    }
                    self.eat_sym(';');
                    raw.tables.insert(conn, rows);
                }
                other => return Err(self.err_at(sat, format!("unexpected `{other}` in nmatrix"))),
            }
        }
        let m = Nmatrix::try_from(&raw).map_err(|e| self.err_at(at, format!("nmatrix {name}: {e}")))?;
        self.add_matrix(at, name, m)
    }

    fn family(&mut self, at: (usize, usize)) -> Result<(), CliError> {
        let fat = self.here();
        let kind: Family = self
            .word("a family name")?
            .parse()
            .map_err(|e: Error| self.err_at(fat, e.to_string()))?;
        let n = self.number("the number of undesignated values")?;
        let m = self.number("the number of designated values")?;
        self.keyword("as")?;
        let name = self.word("a matrix name")?;
        let imp = Signature::implication();
        match &self.ws.signature {
            None => self.ws.signature = Some(imp),
            Some(s) if *s == imp => {}
            Some(_) => return Err(self.err_at(at, "builtin families need the signature `-> /2`")),
        }
        let mat = builtin_family(kind, n, m).map_err(|e| self.err_at(at, format!("family {name}: {e}")))?;
        self.add_matrix(at, name, mat)
    }

    fn rules(&mut self) -> Result<(), CliError> {
        let at = self.here();
        let name = self.word("a rule set name")?;
        let sig = self.sig_for(at)?;
        if self.ws.rules.contains_key(&name) {
            return Err(self.err_at(at, format!("duplicate rule set name `{name}`")));
        }
        self.expect_sym('{')?;
        let mut rules = Vec::new();
        while !self.eat_sym('}') {
            let sat = self.here();
            match self.next() {
                Some(Tok::Str(s)) => {
                    let r = parse_sequent(&s, &sig).map_err(|e| self.err_at(sat, e.to_string()))?;
                    rules.push(r);
                }
                _ => return Err(self.err_at(sat, "expected a quoted sequent")),
            }
            if !self.eat_sym(';') && self.peek() != Some(&Tok::Sym('}')) {
                return Err(self.err("expected `;` or `}`"));
            }
        }
        self.ws.rules.insert(name, rules);
        Ok(())
    }

    fn hom(&mut self, at: (usize, usize)) -> Result<(), CliError> {
        let name = self.word("a map name")?;
        if self.ws.homs.contains_key(&name) {
            return Err(self.err_at(at, format!("duplicate map name `{name}`")));
        }
        self.keyword("from")?;
        let sat = self.here();
        let src = self.word("a source matrix")?;
        self.keyword("to")?;
        let tat = self.here();
        let tgt = self.word("a target matrix")?;
        let src = self.ws.matrix(&src).map_err(|e| self.err_at(sat, e.to_string()))?.clone();
        let tgt = self.ws.matrix(&tgt).map_err(|e| self.err_at(tat, e.to_string()))?.clone();
        self.expect_sym('{')?;
        let mut pairs = Vec::new();
        while !self.eat_sym('}') {
            let a = self.word("a source value")?;
            self.expect_sym(':')?;
            let b = self.word("a target value")?;
            if !self.eat_sym(';') && self.peek() != Some(&Tok::Sym('}')) {
                return Err(self.err("expected `;` or `}`"));
            }
            pairs.push((a, b));
        }
        let h = HomMap::from_names(&src, &tgt, &pairs).map_err(|e| self.err_at(at, format!("hom {name}: {e}")))?;
        self.ws.homs.insert(name, h);
        Ok(())
    }
}

/// Parses and validates a whole workspace file.
pub fn parse_workspace(text: &str) -> Result<Workspace, CliError> {
    let toks = tokenize(text)?;
    let lines = text.lines().count().max(1);
    let last = text.lines().last().map_or(0, |l| l.chars().count());
    FileParser {
        toks,
        pos: 0,
        end: (lines, last + 1),
        ws: Workspace::default(),
    }
    .parse()
}

// ---------------------------------------------------------------------------
// Structured output

/// A machine-readable report, one per command.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub command: String,
    /// One of `holds`, `fails`, `sound`, `unsound`, `found`, `none`,
    /// `equivalent`, `not-equivalent`, `counterexample`,
    /// `no-counterexample`, `ok` or `error`.
    pub verdict: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub matrices: Vec<MatrixDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub maps: Vec<MapDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub entries: Vec<EntryDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessDoc {
    /// The refuting matrix, for class and comparison queries.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sequent: Option<String>,
    /// Index of the failing rule within its set.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rule: Option<usize>,
    /// `[formula, value]` pairs.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub assignment: Vec<(String, String)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub name: String,
    pub values: Vec<String>,
    pub designated: Vec<String>,
    /// Per connective, `[arguments, outputs]` rows in tuple order.
    pub tables: BTreeMap<String, crate::matrix::TableRows>,
}

impl MatrixDoc {
    pub fn new(name: &str, m: &Nmatrix) -> Self {
        let tables = m
            .tables()
            .map(|(c, t)| {
                let rows = t
                    .cells()
                    .iter()
                    .enumerate()
                    .map(|(i, cell)| {
                        let args = tuple_at(m.size(), t.arity(), i)
                            .iter()
                            .map(|&a| m.value_name(a).to_string())
                            .collect();
                        let outs = m.names_of(cell).into_iter().map(String::from).collect();
                        (args, outs)
                    })
                    .collect();
                (c.to_string(), rows)
            })
            .collect();
        MatrixDoc {
            name: name.to_string(),
            values: m.values().to_vec(),
            designated: m.names_of(m.designated()).into_iter().map(String::from).collect(),
            tables,
        }
    }

    /// Rebuilds the matrix over `sig`.
    pub fn to_nmatrix(&self, sig: &Signature) -> Result<Nmatrix, Error> {
        Nmatrix::try_from(&RawNmatrix {
            signature: sig.clone(),
            values: self.values.clone(),
            designated: self.designated.clone(),
            tables: self.tables.clone(),
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapDoc {
    pub name: String,
    /// `[source value, target value]` pairs.
    pub pairs: Vec<(String, String)>,
}

/// One line of a listing: a partition, a pattern, an instance.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryDoc {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

// ---------------------------------------------------------------------------
// Commands

#[derive(Debug, Parser)]
#[command(
    name = "nmx",
    version,
    about = "Finite non-deterministic matrices: entailment, morphisms, constructions, comparison"
)]
pub struct Args {
    /// Workspace file with the signature, matrices, rule sets and maps.
    pub file: PathBuf,
    /// Emit a JSON document instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Override the caps on formula universes, substitutions, product
    /// carriers and partition counts.
    #[arg(long, global = true)]
    pub cap: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide a sequent in one matrix or in every matrix of a comma list.
    Entails {
        matrices: String,
        #[arg(allow_hyphen_values = true)]
        sequent: String,
    },
    /// Soundness of one rule.
    RuleSound {
        matrix: String,
        #[arg(allow_hyphen_values = true)]
        rule: String,
    },
    /// Soundness of every rule in a named set.
    RulesetSound { matrix: String, rules: String },
    /// Quotient by blocks of value names separated by `|`.
    Quotient { matrix: String, blocks: String },
    /// List the partitions refining the designated/undesignated split.
    CompatiblePartitions { matrix: String },
    /// Classify every compatible quotient against a rule set.
    SoundQuotients { matrix: String, rules: String },
    /// Image of a declared map.
    Image { hom: String },
    /// Search for a strict homomorphism.
    FindHom {
        source: String,
        target: String,
        #[arg(long)]
        covering: bool,
        #[arg(long)]
        injective: bool,
    },
    /// Search for an isomorphism.
    FindIso { first: String, second: String },
    /// Direct product.
    Product {
        #[arg(required = true)]
        matrices: Vec<String>,
    },
    /// Ultraproduct over the principal ultrafilter at `--index`.
    Ultraproduct {
        #[arg(required = true)]
        matrices: Vec<String>,
        #[arg(long)]
        index: usize,
    },
    /// Realized designation patterns over a bounded universe.
    Patterns {
        matrix: String,
        #[arg(long, default_value_t = 2)]
        vars: usize,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        /// Comma-separated formulas whose subformula closure is the universe.
        #[arg(long)]
        over: Option<String>,
    },
    /// Compare two logics over all formulas with `--vars` variables and
    /// depth up to `--depth`.
    Compare {
        first: String,
        second: String,
        #[arg(long, default_value_t = 2)]
        vars: usize,
        #[arg(long, default_value_t = 2)]
        depth: usize,
    },
    /// Check a rule against all its instances over `p0..p(vars-1)`.
    Kdetermined {
        matrix: String,
        #[arg(allow_hyphen_values = true)]
        rule: String,
        #[arg(long, default_value_t = 1)]
        vars: usize,
    },
    /// Build a mediating pair matrix covering both inputs.
    WitnessChain {
        first: String,
        second: String,
        rules: String,
        #[arg(long, default_value = "look-behind")]
        mode: String,
    },
    /// Print a matrix in workspace syntax.
    Print { matrix: String },
}

/// What a command produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Response {
    pub code: i32,
    pub text: String,
    pub doc: Document,
}

impl Response {
    fn new(command: &str, verdict: &str, code: i32) -> Self {
        Response {
            code,
            text: String::new(),
            doc: Document {
                command: command.to_string(),
                verdict: verdict.to_string(),
                ..Document::default()
            },
        }
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }
}

fn witness(m: &Nmatrix, a: &Assignment) -> WitnessDoc {
    WitnessDoc {
        assignment: a.named(m),
        ..WitnessDoc::default()
    }
}

fn limits(cap: Option<usize>) -> Limits {
    let mut l = Limits::default();
    if let Some(c) = cap {
        l.formulas = c;
        l.substitutions = c;
        l.carrier = c;
        l.partitions = c;
    }
    l
}

fn statement(name: &str, m: &Nmatrix) -> String {
    format!("nmatrix {name} {m}")
}

fn parse_blocks(m: &Nmatrix, text: &str) -> Result<Partition, CliError> {
    let blocks: Vec<Vec<&str>> = text
        .split_whitespace()
        .collect::<Vec<_>>()
        .split(|w| *w == "|")
        .filter(|b| !b.is_empty())
        .map(|b| b.to_vec())
        .collect();
    Ok(Partition::from_names(m, &blocks)?)
}

/// Runs one parsed command against a loaded workspace.
pub fn run(args: &Args, ws: &Workspace) -> Result<Response, CliError> {
    let lim = limits(args.cap);
    let out = match &args.command {
        Command::Entails { matrices, sequent } => {
            let names: Vec<&str> = matrices.split(',').map(str::trim).collect();
            let ms = names
                .iter()
                .map(|n| ws.matrix(n).cloned())
                .collect::<Result<Vec<_>, _>>()?;
            let s = parse_sequent(sequent, ws.sig()?)?;
            let v = entails_class(&ms, &s)?;
            match v.failure {
                None => {
                    let mut r = Response::new("entails", "holds", 0);
                    r.line("HOLDS");
                    r
                }
                Some((i, a)) => {
                    let mut r = Response::new("entails", "fails", 1);
                    if ms.len() > 1 {
                        r.line(format!("FAILS in {}", names[i]));
                    } else {
                        r.line("FAILS");
                    }
                    r.line(format!("witness: {}", a.display(&ms[i])));
                    r.doc.witness = Some(WitnessDoc {
                        matrix: Some(names[i].to_string()),
                        sequent: Some(s.to_string()),
                        ..witness(&ms[i], &a)
                    });
                    r
                }
            }
        }
        Command::RuleSound { matrix, rule } => {
            let m = ws.matrix(matrix)?;
            let s = parse_sequent(rule, ws.sig()?)?;
            let v = ruleset_sound(m, std::slice::from_ref(&s))?;
            sound_response("rule-sound", m, &[s], v.failure)
        }
        Command::RulesetSound { matrix, rules } => {
            let m = ws.matrix(matrix)?;
            let rs = ws.rules(rules)?;
            let v = ruleset_sound(m, rs)?;
            sound_response("ruleset-sound", m, rs, v.failure)
        }
        Command::Quotient { matrix, blocks } => {
            let m = ws.matrix(matrix)?;
            let p = parse_blocks(m, blocks)?;
            let q = quotient(m, &p)?;
            let mut r = Response::new("quotient", "ok", 0);
            let name = format!("{matrix}_q");
            r.line(format!(
                "# partition {} ({})",
                p.display(m),
                if is_compatible(&p, m) { "compatible" } else { "not compatible" }
            ));
            r.line(statement(&name, &q));
            r.doc.matrices.push(MatrixDoc::new(&name, &q));
            r.doc.entries.push(EntryDoc {
                label: p.display(m).to_string(),
                verdict: Some(if is_compatible(&p, m) { "compatible" } else { "incompatible" }.into()),
                detail: None,
            });
            r
        }
        Command::CompatiblePartitions { matrix } => {
            let m = ws.matrix(matrix)?;
            let ps = enumerate_compatible_partitions_with(m, &lim)?;
            let mut r = Response::new("compatible-partitions", "ok", 0);
            for p in &ps {
                r.line(p.display(m).to_string());
                r.doc.entries.push(EntryDoc {
                    label: p.display(m).to_string(),
                    ..EntryDoc::default()
                });
            }
            r.line(format!("{} compatible partitions", ps.len()));
            r
        }
        Command::SoundQuotients { matrix, rules } => {
            let m = ws.matrix(matrix)?;
            let rs = ws.rules(rules)?;
            let entries = classify_compatible_quotients(m, rs, &lim)?;
            let mut r = Response::new("sound-quotients", "ok", 0);
            let mut sound = 0;
            for e in &entries {
                let tag = if e.verdict.sound { "SOUND  " } else { "UNSOUND" };
                sound += usize::from(e.verdict.sound);
                let merged: Vec<String> = e
                    .partition
                    .merged_names(m)
                    .iter()
                    .map(|b| format!("{{{}}}", b.join(" ")))
                    .collect();
                let label = if merged.is_empty() {
                    "identity".to_string()
                } else {
                    format!("merge {}", merged.join(" "))
                };
                let detail = e.verdict.failure.as_ref().map(|(i, a)| {
                    format!("rule `{}` fails: {}", rs[*i], a.display(&e.quotient))
                });
                match &detail {
                    Some(d) => r.line(format!("{tag} {label}  ({d})")),
                    None => r.line(format!("{tag} {label}")),
                }
                r.doc.entries.push(EntryDoc {
                    label,
                    verdict: Some(if e.verdict.sound { "sound" } else { "unsound" }.into()),
                    detail,
                });
            }
            r.line(format!("{sound} of {} compatible quotients are sound", entries.len()));
            r
        }
        Command::Image { hom } => {
            let h = ws.hom(hom)?;
            let img = image(h)?;
            let mut r = Response::new("image", "ok", 0);
            let name = format!("{hom}_image");
            r.line(statement(&name, &img));
            r.doc.matrices.push(MatrixDoc::new(&name, &img));
            r
        }
        Command::FindHom {
            source,
            target,
            covering,
            injective,
        } => {
            let flags = HomFlags {
                covering: *covering,
                injective: *injective,
            };
            let found = find_strict_hom(ws.matrix(source)?, ws.matrix(target)?, flags);
            found_response("find-hom", found)
        }
        Command::FindIso { first, second } => {
            let found = find_isomorphism(ws.matrix(first)?, ws.matrix(second)?);
            found_response("find-iso", found)
        }
        Command::Product { matrices } => {
            let ms = matrices
                .iter()
                .map(|n| ws.matrix(n).cloned())
                .collect::<Result<Vec<_>, _>>()?;
            let p = product_with(&ms, &lim)?;
            matrix_response("product", &matrices.join("_x_"), &p)
        }
        Command::Ultraproduct { matrices, index } => {
            let ms = matrices
                .iter()
                .map(|n| ws.matrix(n).cloned())
                .collect::<Result<Vec<_>, _>>()?;
            let u = Ultrafilter::principal(ms.len(), *index)?;
            let p = ultraproduct_with(&ms, &u, &lim)?;
            matrix_response("ultraproduct", &format!("{}_up{index}", matrices.join("_")), &p)
        }
        Command::Patterns {
            matrix,
            vars,
            depth,
            over,
        } => {
            let m = ws.matrix(matrix)?;
            let theta = match over {
                Some(text) => subformula_closure(&parse_formula_list(text, m.signature())?),
                None => formulas_up_to(m.signature(), *vars, *depth, lim.formulas)?,
            };
            let fam = realized_patterns_with(m, &theta, &lim)?;
            let mut r = Response::new("patterns", "ok", 0);
            for set in fam.sets() {
                let label = format!(
                    "{{{}}}",
                    set.iter().map(|f| f.to_string()).collect::<Vec<_>>().join(", ")
                );
                r.line(&label);
                r.doc.entries.push(EntryDoc {
                    label,
                    ..EntryDoc::default()
                });
            }
            r.line(format!(
                "{} patterns over {} formulas",
                fam.len(),
                fam.universe().len()
            ));
            r
        }
        Command::Compare {
            first,
            second,
            vars,
            depth,
        } => {
            let (m1, m2) = (ws.matrix(first)?, ws.matrix(second)?);
            let rep = bounded_equivalent_with(m1, m2, *vars, *depth, &lim)?;
            let size = rep.universe.len();
            let scope = format!("{size} formulas, vars={vars}, depth={depth}");
            if rep.equivalent() {
                let mut r = Response::new("compare", "equivalent", 0);
                r.line(format!("equivalent over Θ ({scope})"));
                r
            } else {
                let mut r = Response::new("compare", "not-equivalent", 1);
                let (w, holds, fails) = match (&rep.leq_witness, &rep.geq_witness) {
                    (Some(w), _) => (w, first, second),
                    (None, Some(w)) => (w, second, first),
                    (None, None) => unreachable!("inequivalence has a witness"),
                };
                r.line(format!("not equivalent; witness: {w}"));
                r.line(format!("  holds in {holds}, fails in {fails} (Θ: {scope})"));
                r.doc.witness = Some(WitnessDoc {
                    matrix: Some(fails.clone()),
                    sequent: Some(w.to_string()),
                    ..WitnessDoc::default()
                });
                if let (Some(_), Some(other)) = (&rep.leq_witness, &rep.geq_witness) {
                    r.line(format!("  also: {other} holds in {second}, fails in {first}"));
                    r.doc.entries.push(EntryDoc {
                        label: other.to_string(),
                        verdict: Some(format!("fails in {first}")),
                        detail: None,
                    });
                }
                r
            }
        }
        Command::Kdetermined { matrix, rule, vars } => {
            let m = ws.matrix(matrix)?;
            let s = parse_sequent(rule, ws.sig()?)?;
            let rep = check_rule_under_all_substitutions_with(m, &s, *vars, &lim)?;
            let failing = rep.instances.iter().filter(|(_, _, v)| !v.holds).count();
            let cx = rep.is_counterexample();
            let mut r = Response::new(
                "kdetermined",
                if cx { "counterexample" } else { "no-counterexample" },
                if cx { 1 } else { 0 },
            );
            r.line(format!(
                "rule {}: {}",
                rep.rule,
                if rep.verdict.holds { "HOLDS" } else { "FAILS" }
            ));
            r.line(format!(
                "instances over {} variable(s): {}, {} fail",
                vars,
                rep.instances.len(),
                failing
            ));
            if cx {
                r.line(format!(
                    "counterexample: every instance over {vars} variable(s) holds but the rule fails"
                ));
            }
            if let Some(a) = &rep.verdict.witness {
                r.line(format!("witness: {}", a.display(m)));
                r.doc.witness = Some(WitnessDoc {
                    sequent: Some(rep.rule.to_string()),
                    ..witness(m, a)
                });
            }
            for (_, inst, v) in &rep.instances {
                r.doc.entries.push(EntryDoc {
                    label: inst.to_string(),
                    verdict: Some(if v.holds { "holds" } else { "fails" }.into()),
                    detail: None,
                });
            }
            r
        }
        Command::WitnessChain {
            first,
            second,
            rules,
            mode,
        } => {
            let mode: PairMode = mode.parse()?;
            let (m1, m2) = (ws.matrix(first)?, ws.matrix(second)?);
            match witness_chain(m1, m2, ws.rules(rules)?, mode) {
                Some(ch) => {
                    let mut r = Response::new("witness-chain", "found", 0);
                    r.line("FOUND");
                    r.line(statement("mediator", &ch.mediator));
                    r.line(format!("onto {second}: {}", ch.onto_second));
                    r.line(format!("onto {first}: {}", ch.onto_first));
                    r.doc.matrices.push(MatrixDoc::new("mediator", &ch.mediator));
                    r.doc.maps.push(MapDoc {
                        name: format!("onto {second}"),
                        pairs: ch.onto_second.named(),
                    });
                    r.doc.maps.push(MapDoc {
                        name: format!("onto {first}"),
                        pairs: ch.onto_first.named(),
                    });
                    r
                }
                None => {
                    let mut r = Response::new("witness-chain", "none", 1);
                    r.line("NONE");
                    r
                }
            }
        }
        Command::Print { matrix } => matrix_response("print", matrix, ws.matrix(matrix)?),
    };
    Ok(out)
}

fn sound_response(
    cmd: &str,
    m: &Nmatrix,
    rules: &[Sequent],
    failure: Option<(usize, Assignment)>,
) -> Response {
    match failure {
        None => {
            let mut r = Response::new(cmd, "sound", 0);
            r.line("SOUND");
            r
        }
        Some((i, a)) => {
            let mut r = Response::new(cmd, "unsound", 1);
            r.line(format!("UNSOUND: rule `{}` fails", rules[i]));
            r.line(format!("witness: {}", a.display(m)));
            r.doc.witness = Some(WitnessDoc {
                sequent: Some(rules[i].to_string()),
                rule: Some(i),
                ..witness(m, &a)
            });
            r
        }
    }
}

fn found_response(cmd: &str, found: Option<HomMap>) -> Response {
    match found {
        Some(h) => {
            let mut r = Response::new(cmd, "found", 0);
            r.line(format!("FOUND: {h}"));
            r.doc.maps.push(MapDoc {
                name: cmd.to_string(),
                pairs: h.named(),
            });
            r
        }
        None => {
            let mut r = Response::new(cmd, "none", 1);
            r.line("NONE");
            r
        }
    }
}

fn matrix_response(cmd: &str, name: &str, m: &Nmatrix) -> Response {
    let mut r = Response::new(cmd, "ok", 0);
    r.line(statement(name, m));
    r.doc.matrices.push(MatrixDoc::new(name, m));
    r
}

/// Exit code and the two output streams of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Invocation {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses arguments (the first one is the program name), loads the
/// workspace and runs the command.
pub fn run_from_args<I, T>(argv: I) -> Invocation
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Invocation {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Invocation {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let result = load(&args.file).and_then(|ws| run(&args, &ws));
    match result {
        Ok(r) if args.json => Invocation {
            code: r.code,
            stdout: to_json(&r.doc),
            stderr: String::new(),
        },
        Ok(r) => Invocation {
            code: r.code,
            stdout: r.text,
            stderr: String::new(),
        },
        Err(e) => {
            let mut stderr = String::new();
            let _ = writeln!(stderr, "error: {e}");
            let stdout = if args.json {
                to_json(&Document {
                    command: command_name(&args.command).to_string(),
                    verdict: "error".into(),
                    error: Some(e.to_string()),
                    ..Document::default()
                })
            } else {
                String::new()
            };
            Invocation {
                code: 2,
                stdout,
                stderr,
            }
        }
    }
}

fn to_json(doc: &Document) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Entails { .. } => "entails",
        Command::RuleSound { .. } => "rule-sound",
        Command::RulesetSound { .. } => "ruleset-sound",
        Command::Quotient { .. } => "quotient",
        Command::CompatiblePartitions { .. } => "compatible-partitions",
        Command::SoundQuotients { .. } => "sound-quotients",
        Command::Image { .. } => "image",
        Command::FindHom { .. } => "find-hom",
        Command::FindIso { .. } => "find-iso",
        Command::Product { .. } => "product",
        Command::Ultraproduct { .. } => "ultraproduct",
        Command::Patterns { .. } => "patterns",
        Command::Compare { .. } => "compare",
        Command::Kdetermined { .. } => "kdetermined",
        Command::WitnessChain { .. } => "witness-chain",
        Command::Print { .. } => "print",
    }
}
