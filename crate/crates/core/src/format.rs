//! Line-oriented structure files.
//!
//! ```text
//! structure hyperfield          # hypergroup | hyperfield | hyperspace
//! name krasner
//! carrier atoms 0 1             # or: carrier finite -1 0 1 | carrier rationals
//! zero 0
//! one 1
//! hyperadd                      # or: hyperadd = sum
//!   0 + 0 = {0}
//!   0 + 1 = {1}
//!   1 + 0 = {1}
//!   1 + 1 = {0, 1}
//! mul                           # or: mul = product
//!   0 * 0 = 0
//!   ...
//! abs                           # or: abs = absolute
//!   0 = 0
//!   1 = 1
//! ```
//!
//! Hyperspace files add `vectors rationals <d>` (or `vectors atoms ...` /
//! `vectors finite ...`), `theta`, `vector-add`, `star` (`scale`, `cone`,
//! `scale-or-self` or rows `a * v = {...}`), `inner` (`dot` or rows
//! `u . v = q`), `norm` (`max` or rows `v = q`) and the element lists
//! `scalar-samples`, `vector-samples`, `pool`, `universe`, `probes`,
//! `independent`, `orthogonal`. A section header without `=` opens a table;
//! its rows follow until the next directive. `#` starts a comment.
//! Parenthesised and braced groups are single tokens.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::element::{parse_literal, Carrier, Element, FiniteSet, Rational};
use crate::error::{Error, Result};
use crate::hyperspace::{HyperVectorSpace, StarOp};
use crate::hyperstructures::{check_hyperfield, check_hypergroup, rational_hyperfield, Hyperfield, Hypergroup};
use crate::inner::{InnerProduct, Norm};
use crate::setalg::{absolute_rule, negation_rule, ElementMap, HyperOp, ScalarOp};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StructureKind {
    Hypergroup,
    Hyperfield,
    Hyperspace,
}

impl StructureKind {
    pub fn as_str(self) -> &'static str {
        match self {
            StructureKind::Hypergroup => "hypergroup",
            StructureKind::Hyperfield => "hyperfield",
            StructureKind::Hyperspace => "hyperspace",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CarrierDecl {
    /// Named atoms.
    Atoms(Vec<String>),
    /// Rational or vector literals.
    Finite(Vec<Element>),
    Rationals,
    Vectors(usize),
}

impl CarrierDecl {
    pub fn carrier(&self) -> Result<Carrier> {
        match self {
            CarrierDecl::Atoms(names) => Carrier::atoms(names),
            CarrierDecl::Finite(elems) => Carrier::finite(elems.clone()),
            CarrierDecl::Rationals => Ok(Carrier::Rationals),
            CarrierDecl::Vectors(d) => Ok(Carrier::Vectors(*d)),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, CarrierDecl::Atoms(_) | CarrierDecl::Finite(_))
    }
}

/// A built-in rule name or an explicit table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decl<T> {
    Rule(String),
    Table(T),
}

pub type SetTable = BTreeMap<(Element, Element), FiniteSet>;
pub type PointTable = BTreeMap<(Element, Element), Element>;
pub type PairValues = BTreeMap<(Element, Element), Rational>;
pub type Values = BTreeMap<Element, Rational>;

/// Parsed contents of a structure file, before any structure is built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureDoc {
    pub kind: StructureKind,
    pub name: Option<String>,
    pub carrier: CarrierDecl,
    pub zero: Option<Element>,
    pub one: Option<Element>,
    pub commutative: bool,
    pub hyperadd: Option<Decl<SetTable>>,
    pub mul: Option<Decl<PointTable>>,
    pub abs: Option<Decl<Values>>,
    pub vectors: Option<CarrierDecl>,
    pub theta: Option<Element>,
    pub vector_add: Option<Decl<SetTable>>,
    pub star: Option<Decl<SetTable>>,
    pub inner: Option<Decl<PairValues>>,
    pub norm: Option<Decl<Values>>,
    pub scalar_samples: Vec<Element>,
    pub vector_samples: Vec<Element>,
    pub pool: Vec<Element>,
    pub universe: Vec<Element>,
    pub probes: Vec<Element>,
    pub independent: Vec<Element>,
    pub orthogonal: Vec<Element>,
}

impl StructureDoc {
    pub fn new(kind: StructureKind, carrier: CarrierDecl) -> Self {
        StructureDoc {
            kind,
            name: None,
            carrier,
            zero: None,
            one: None,
            commutative: false,
            hyperadd: None,
            mul: None,
            abs: None,
            vectors: None,
            theta: None,
            vector_add: None,
            star: None,
            inner: None,
            norm: None,
            scalar_samples: vec![],
            vector_samples: vec![],
            pool: vec![],
            universe: vec![],
            probes: vec![],
            independent: vec![],
            orthogonal: vec![],
        }
    }
}

const KEYWORDS: &[&str] = &[
    "structure",
    "name",
    "carrier",
    "zero",
    "one",
    "commutative",
    "hyperadd",
    "mul",
    "abs",
    "vectors",
    "theta",
    "vector-add",
    "star",
    "inner",
    "norm",
    "scalar-samples",
    "vector-samples",
    "pool",
    "universe",
    "probes",
    "independent",
    "orthogonal",
];

#[derive(Clone, Debug)]
struct Tok {
    text: String,
    col: usize,
}

fn tokenize(line: &str, lineno: usize) -> Result<Vec<Tok>> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == '#' {
            break;
        }
        let start = i;
        let mut depth = 0i32;
        while i < chars.len() {
            let ch = chars[i];
            match ch {
                '(' | '{' => depth += 1,
                ')' | '}' => {
                    depth -= 1;
                    if depth < 0 {
                        return Err(parse_err(lineno, i + 1, format!("unbalanced {ch:?}")));
                    }
                }
                _ if depth == 0 && ch.is_whitespace() => break,
                _ => {}
            }
            i += 1;
        }
        if depth != 0 {
            return Err(parse_err(lineno, start + 1, "unclosed group"));
        }
        out.push(Tok { text: chars[start..i].iter().collect(), col: start + 1 });
    }
    Ok(out)
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, column, message: message.into() }
}

/// Splits `a, (1, 2), b` at top-level commas.
fn split_top(inner: &str) -> Vec<String> {
    let mut parts = Vec::new();
    let mut depth = 0;
    let mut cur = String::new();
    for ch in inner.chars() {
        match ch {
            '(' | '{' => depth += 1,
            ')' | '}' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(cur.trim().to_string());
                cur.clear();
                continue;
            }
            _ => {}
        }
        cur.push(ch);
    }
    if !cur.trim().is_empty() || !parts.is_empty() {
        parts.push(cur.trim().to_string());
    }
    parts
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Section {
    None,
    HyperAdd,
    Mul,
    Abs,
    VectorAdd,
    Star,
    Inner,
    Norm,
}

struct Parser {
    doc: Option<StructureDoc>,
    kind: Option<StructureKind>,
    scalars: Option<(CarrierDecl, Carrier)>,
    vectors: Option<Carrier>,
    section: Section,
    pending_name: Option<String>,
}

impl Parser {
    fn doc(&mut self, line: usize) -> Result<&mut StructureDoc> {
        self.doc.as_mut().ok_or_else(|| parse_err(line, 1, "`carrier` must come before this directive"))
    }

    fn scalar_carrier(&self, line: usize, col: usize) -> Result<&Carrier> {
        self.scalars.as_ref().map(|(_, c)| c).ok_or_else(|| parse_err(line, col, "no `carrier` declared yet"))
    }

    fn vector_carrier(&self, line: usize, col: usize) -> Result<&Carrier> {
        self.vectors.as_ref().ok_or_else(|| parse_err(line, col, "no `vectors` declared yet"))
    }
}

fn element(carrier: &Carrier, tok: &Tok, line: usize) -> Result<Element> {
    carrier
        .parse_element(&tok.text)
        .ok_or_else(|| parse_err(line, tok.col, format!("{:?} is not an element of {carrier}", tok.text)))
}

fn rational(tok: &Tok, line: usize) -> Result<Rational> {
    crate::element::parse_rational(&tok.text)
        .ok_or_else(|| parse_err(line, tok.col, format!("{:?} is not a rational number", tok.text)))
}

fn set(carrier: &Carrier, tok: &Tok, line: usize) -> Result<FiniteSet> {
    let inner = tok
        .text
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .ok_or_else(|| parse_err(line, tok.col, format!("expected a set `{{...}}`, found {:?}", tok.text)))?;
    let parts = split_top(inner);
    if parts.is_empty() {
        return Err(parse_err(line, tok.col, "empty result set: a hyperoperation maps into non-empty subsets"));
    }
    parts
        .iter()
        .map(|p| {
            carrier
                .parse_element(p)
                .ok_or_else(|| parse_err(line, tok.col, format!("{p:?} is not an element of {carrier}")))
        })
        .collect()
}

fn expect_shape(toks: &[Tok], op: &str, line: usize, shape: &str) -> Result<()> {
    if toks.len() != 5 || toks[1].text != op || toks[3].text != "=" {
        let col = toks.first().map_or(1, |t| t.col);
        return Err(parse_err(line, col, format!("expected a row `{shape}`")));
    }
    Ok(())
}

fn insert_row<K: Ord, V>(map: &mut BTreeMap<K, V>, key: K, value: V, line: usize, col: usize) -> Result<()> {
    if map.insert(key, value).is_some() {
        return Err(parse_err(line, col, "duplicate row"));
    }
    Ok(())
}

fn open_table<T: Default>(slot: &mut Option<Decl<T>>, line: usize, col: usize, name: &str) -> Result<()> {
    if slot.is_some() {
        return Err(parse_err(line, col, format!("`{name}` declared twice")));
    }
    *slot = Some(Decl::Table(T::default()));
    Ok(())
}

fn table_mut<T>(slot: &mut Option<Decl<T>>) -> &mut T {
    match slot {
        Some(Decl::Table(t)) => t,
        _ => unreachable!("rows only follow an open table"),
    }
}

const RULES: &[(&str, &[&str])] = &[
    ("hyperadd", &["sum"]),
    ("mul", &["product"]),
    ("abs", &["absolute"]),
    ("vector-add", &["sum"]),
    ("star", &["scale", "cone", "scale-or-self"]),
    ("inner", &["dot"]),
    ("norm", &["max"]),
];

/// Parses a structure file. Errors carry 1-based line and column.
pub fn parse_structure(text: &str) -> Result<StructureDoc> {
    let mut p =
        Parser { doc: None, kind: None, scalars: None, vectors: None, section: Section::None, pending_name: None };
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let toks = tokenize(raw, line)?;
        let Some(head) = toks.first() else { continue };
        if !KEYWORDS.contains(&head.text.as_str()) {
            parse_row(&mut p, &toks, line)?;
            continue;
        }
        p.section = Section::None;
        let args = &toks[1..];
        let kw = head.text.as_str();
        let need = |n: usize| -> Result<()> {
            if args.len() < n {
                return Err(parse_err(line, head.col, format!("`{kw}` needs an argument")));
            }
            Ok(())
        };

        if let Some((_, allowed)) = RULES.iter().find(|(k, _)| *k == kw) {
            if !args.is_empty() {
                if args.len() != 2 || args[0].text != "=" {
                    return Err(parse_err(
                        line,
                        args[0].col,
                        format!("expected `{kw} = <rule>` or `{kw}` on its own line"),
                    ));
                }
                if !allowed.contains(&args[1].text.as_str()) {
                    return Err(parse_err(
                        line,
                        args[1].col,
                        format!("unknown rule {:?} for `{kw}`; built-ins are {}", args[1].text, allowed.join(", ")),
                    ));
                }
                let rule = args[1].text.clone();
                let finite_scalars = p.scalars.as_ref().is_some_and(|(d, _)| d.is_finite());
                let finite_vectors = p.vectors.as_ref().is_some_and(Carrier::is_finite);
                let on_vectors = matches!(kw, "vector-add" | "star" | "inner" | "norm");
                if (on_vectors && finite_vectors) || (!on_vectors && finite_scalars) {
                    return Err(parse_err(
                        line,
                        args[1].col,
                        "built-in rules apply to rational carriers only; give a table",
                    ));
                }
                let d = p.doc(line)?;
                let slot_taken = match kw {
                    "hyperadd" => d.hyperadd.replace(Decl::Rule(rule)).is_some(),
                    "mul" => d.mul.replace(Decl::Rule(rule)).is_some(),
                    "abs" => d.abs.replace(Decl::Rule(rule)).is_some(),
                    "vector-add" => d.vector_add.replace(Decl::Rule(rule)).is_some(),
                    "star" => d.star.replace(Decl::Rule(rule)).is_some(),
                    "inner" => d.inner.replace(Decl::Rule(rule)).is_some(),
                    _ => d.norm.replace(Decl::Rule(rule)).is_some(),
                };
                if slot_taken {
                    return Err(parse_err(line, head.col, format!("`{kw}` declared twice")));
                }
                continue;
            }
            let on_vectors = matches!(kw, "vector-add" | "star" | "inner" | "norm");
            if on_vectors {
                p.vector_carrier(line, head.col)?;
            }
            let d = p.doc(line)?;
            p.section = match kw {
                "hyperadd" => {
                    open_table(&mut d.hyperadd, line, head.col, kw)?;
                    Section::HyperAdd
                }
                "mul" => {
                    open_table(&mut d.mul, line, head.col, kw)?;
                    Section::Mul
                }
                "abs" => {
                    open_table(&mut d.abs, line, head.col, kw)?;
                    Section::Abs
                }
                "vector-add" => {
                    open_table(&mut d.vector_add, line, head.col, kw)?;
                    Section::VectorAdd
                }
                "star" => {
                    open_table(&mut d.star, line, head.col, kw)?;
                    Section::Star
                }
                "inner" => {
                    open_table(&mut d.inner, line, head.col, kw)?;
                    Section::Inner
                }
                _ => {
                    open_table(&mut d.norm, line, head.col, kw)?;
                    Section::Norm
                }
            };
            continue;
        }

        match kw {
            "structure" => {
                need(1)?;
                if p.kind.is_some() {
                    return Err(parse_err(line, head.col, "`structure` declared twice"));
                }
                p.kind = Some(match args[0].text.as_str() {
                    "hypergroup" => StructureKind::Hypergroup,
                    "hyperfield" => StructureKind::Hyperfield,
                    "hyperspace" => StructureKind::Hyperspace,
                    other => return Err(parse_err(line, args[0].col, format!("unknown structure kind {other:?}"))),
                });
            }
            "name" => {
                need(1)?;
                let name = args.iter().map(|t| t.text.as_str()).collect::<Vec<_>>().join(" ");
                match p.doc.as_mut() {
                    Some(d) => d.name = Some(name),
                    None => p.pending_name = Some(name),
                }
            }
            "carrier" => {
                need(1)?;
                let kind = p.kind.ok_or_else(|| parse_err(line, head.col, "`structure` must come first"))?;
                if p.scalars.is_some() {
                    return Err(parse_err(line, head.col, "`carrier` declared twice"));
                }
                let decl = carrier_decl(args, line, false)?;
                let carrier = decl.carrier().map_err(|e| parse_err(line, args[0].col, e.to_string()))?;
                let mut doc = StructureDoc::new(kind, decl.clone());
                doc.name = p.pending_name.take();
                p.doc = Some(doc);
                p.scalars = Some((decl, carrier));
            }
            "vectors" => {
                need(1)?;
                if p.kind != Some(StructureKind::Hyperspace) {
                    return Err(parse_err(line, head.col, "`vectors` belongs to hyperspace files"));
                }
                if p.vectors.is_some() {
                    return Err(parse_err(line, head.col, "`vectors` declared twice"));
                }
                let decl = carrier_decl(args, line, true)?;
                let carrier = decl.carrier().map_err(|e| parse_err(line, args[0].col, e.to_string()))?;
                p.doc(line)?.vectors = Some(decl);
                p.vectors = Some(carrier);
            }
            "zero" | "one" => {
                need(1)?;
                let e = element(p.scalar_carrier(line, head.col)?, &args[0], line)?;
                let d = p.doc(line)?;
                if kw == "zero" {
                    d.zero = Some(e)
                } else {
                    d.one = Some(e)
                }
            }
            "theta" => {
                need(1)?;
                let e = element(p.vector_carrier(line, head.col)?, &args[0], line)?;
                p.doc(line)?.theta = Some(e);
            }
            "commutative" => p.doc(line)?.commutative = true,
            _ => {
                let on_vectors = !matches!(kw, "scalar-samples" | "pool");
                let carrier = if on_vectors {
                    p.vector_carrier(line, head.col)?.clone()
                } else {
                    p.scalar_carrier(line, head.col)?.clone()
                };
                let elems = args.iter().map(|t| element(&carrier, t, line)).collect::<Result<Vec<_>>>()?;
                let d = p.doc(line)?;
                let slot = match kw {
                    "scalar-samples" => &mut d.scalar_samples,
                    "vector-samples" => &mut d.vector_samples,
                    "pool" => &mut d.pool,
                    "universe" => &mut d.universe,
                    "probes" => &mut d.probes,
                    "independent" => &mut d.independent,
                    _ => &mut d.orthogonal,
                };
                slot.extend(elems);
            }
        }
    }
    let doc =
        p.doc.ok_or_else(|| parse_err(text.lines().count().max(1), 1, "no `structure` and `carrier` declared"))?;
    Ok(doc)
}

fn carrier_decl(args: &[Tok], line: usize, vectors: bool) -> Result<CarrierDecl> {
    let rest = &args[1..];
    match args[0].text.as_str() {
        "atoms" => {
            if rest.is_empty() {
                return Err(parse_err(line, args[0].col, "a carrier needs at least one element"));
            }
            for t in rest {
                if KEYWORDS.contains(&t.text.as_str()) || t.text.starts_with(['(', '{']) {
                    return Err(parse_err(line, t.col, format!("{:?} cannot name an atom", t.text)));
                }
            }
            Ok(CarrierDecl::Atoms(rest.iter().map(|t| t.text.clone()).collect()))
        }
        "finite" => {
            if rest.is_empty() {
                return Err(parse_err(line, args[0].col, "a carrier needs at least one element"));
            }
            let elems = rest
                .iter()
                .map(|t| {
                    parse_literal(&t.text)
                        .ok_or_else(|| parse_err(line, t.col, format!("{:?} is not a literal", t.text)))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(CarrierDecl::Finite(elems))
        }
        "rationals" if !vectors => {
            if let Some(t) = rest.first() {
                return Err(parse_err(line, t.col, "`carrier rationals` takes no elements; use `scalar-samples`"));
            }
            Ok(CarrierDecl::Rationals)
        }
        "rationals" => {
            let t =
                rest.first().ok_or_else(|| parse_err(line, args[0].col, "`vectors rationals` needs a dimension"))?;
            let d: usize =
                t.text.parse().map_err(|_| parse_err(line, t.col, "dimension must be a positive integer"))?;
            if d == 0 || rest.len() > 1 {
                return Err(parse_err(line, t.col, "expected `vectors rationals <dimension>`"));
            }
            Ok(CarrierDecl::Vectors(d))
        }
        other => {
            Err(parse_err(line, args[0].col, format!("unknown carrier form {other:?}; use atoms, finite or rationals")))
        }
    }
}

fn parse_row(p: &mut Parser, toks: &[Tok], line: usize) -> Result<()> {
    let col = toks[0].col;
    match p.section {
        Section::None => Err(parse_err(line, col, format!("unknown directive {:?}", toks[0].text))),
        Section::HyperAdd | Section::VectorAdd => {
            let scalar_side = p.section == Section::HyperAdd;
            expect_shape(toks, "+", line, "x + y = {a, b}")?;
            let c = if p.section == Section::HyperAdd {
                p.scalar_carrier(line, col)?
            } else {
                p.vector_carrier(line, col)?
            }
            .clone();
            let (x, y, s) = (element(&c, &toks[0], line)?, element(&c, &toks[2], line)?, set(&c, &toks[4], line)?);
            let d = p.doc(line)?;
            let slot = if scalar_side { &mut d.hyperadd } else { &mut d.vector_add };
            insert_row(table_mut(slot), (x, y), s, line, col)
        }
        Section::Mul => {
            expect_shape(toks, "*", line, "x * y = z")?;
            let c = p.scalar_carrier(line, col)?.clone();
            let (x, y, z) = (element(&c, &toks[0], line)?, element(&c, &toks[2], line)?, element(&c, &toks[4], line)?);
            insert_row(table_mut(&mut p.doc(line)?.mul), (x, y), z, line, col)
        }
        Section::Star => {
            expect_shape(toks, "*", line, "a * v = {u, w}")?;
            let sc = p.scalar_carrier(line, col)?.clone();
            let vc = p.vector_carrier(line, col)?.clone();
            let (a, v, s) = (element(&sc, &toks[0], line)?, element(&vc, &toks[2], line)?, set(&vc, &toks[4], line)?);
            insert_row(table_mut(&mut p.doc(line)?.star), (a, v), s, line, col)
        }
        Section::Inner => {
            expect_shape(toks, ".", line, "u . v = q")?;
            let c = p.vector_carrier(line, col)?.clone();
            let (u, v, q) = (element(&c, &toks[0], line)?, element(&c, &toks[2], line)?, rational(&toks[4], line)?);
            insert_row(table_mut(&mut p.doc(line)?.inner), (u, v), q, line, col)
        }
        Section::Abs | Section::Norm => {
            if toks.len() != 3 || toks[1].text != "=" {
                return Err(parse_err(line, col, "expected a row `x = q`"));
            }
            let scalar_side = p.section == Section::Abs;
            let c = if p.section == Section::Abs { p.scalar_carrier(line, col)? } else { p.vector_carrier(line, col)? }
                .clone();
            let (x, q) = (element(&c, &toks[0], line)?, rational(&toks[2], line)?);
            let d = p.doc(line)?;
            let slot = if scalar_side { &mut d.abs } else { &mut d.norm };
            insert_row(table_mut(slot), x, q, line, col)
        }
    }
}

fn carrier_line(out: &mut String, head: &str, decl: &CarrierDecl) {
    let body = match decl {
        CarrierDecl::Atoms(names) => format!("atoms {}", names.join(" ")),
        CarrierDecl::Finite(elems) => format!("finite {}", list(elems)),
        CarrierDecl::Rationals => "rationals".into(),
        CarrierDecl::Vectors(d) => format!("rationals {d}"),
    };
    let _ = writeln!(out, "{head} {body}");
}

fn list(elems: &[Element]) -> String {
    elems.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(" ")
}

fn decl_block<T, F>(out: &mut String, head: &str, decl: &Option<Decl<T>>, rows: F)
where
    F: Fn(&T, &mut String),
{
    match decl {
        None => {}
        Some(Decl::Rule(r)) => {
            let _ = writeln!(out, "{head} = {r}");
        }
        Some(Decl::Table(t)) => {
            let _ = writeln!(out, "{head}");
            rows(t, out);
        }
    }
}

fn set_rows(op: &'static str) -> impl Fn(&SetTable, &mut String) {
    move |t, out| {
        for ((x, y), s) in t {
            let _ = writeln!(out, "  {x} {op} {y} = {s}");
        }
    }
}

/// Canonical text for a document; `parse_structure` inverts it.
pub fn serialize_structure(doc: &StructureDoc) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "structure {}", doc.kind.as_str());
    if let Some(n) = &doc.name {
        let _ = writeln!(out, "name {n}");
    }
    carrier_line(&mut out, "carrier", &doc.carrier);
    if let Some(z) = &doc.zero {
        let _ = writeln!(out, "zero {z}");
    }
    if let Some(o) = &doc.one {
        let _ = writeln!(out, "one {o}");
    }
    if doc.commutative {
        out.push_str("commutative\n");
    }
    decl_block(&mut out, "hyperadd", &doc.hyperadd, set_rows("+"));
    decl_block(&mut out, "mul", &doc.mul, |t, out| {
        for ((x, y), z) in t {
            let _ = writeln!(out, "  {x} * {y} = {z}");
        }
    });
    decl_block(&mut out, "abs", &doc.abs, |t, out| {
        for (x, q) in t {
            let _ = writeln!(out, "  {x} = {q}");
        }
    });
    if let Some(v) = &doc.vectors {
        carrier_line(&mut out, "vectors", v);
    }
    if let Some(t) = &doc.theta {
        let _ = writeln!(out, "theta {t}");
    }
    decl_block(&mut out, "vector-add", &doc.vector_add, set_rows("+"));
    decl_block(&mut out, "star", &doc.star, set_rows("*"));
    decl_block(&mut out, "inner", &doc.inner, |t, out| {
        for ((u, v), q) in t {
            let _ = writeln!(out, "  {u} . {v} = {q}");
        }
    });
    decl_block(&mut out, "norm", &doc.norm, |t, out| {
        for (x, q) in t {
            let _ = writeln!(out, "  {x} = {q}");
        }
    });
    for (head, elems) in [
        ("scalar-samples", &doc.scalar_samples),
        ("vector-samples", &doc.vector_samples),
        ("pool", &doc.pool),
        ("universe", &doc.universe),
        ("probes", &doc.probes),
        ("independent", &doc.independent),
        ("orthogonal", &doc.orthogonal),
    ] {
        if !elems.is_empty() {
            let _ = writeln!(out, "{head} {}", list(elems));
        }
    }
    out
}

/// Live objects built from a document.
#[derive(Clone, Debug)]
pub struct Structure {
    pub doc: StructureDoc,
    /// The additive hypergroup of a hypergroup or hyperfield file.
    pub hypergroup: Option<Hypergroup>,
    /// The hyperfield, or the scalars of a hyperspace.
    pub field: Option<Hyperfield>,
    pub space: Option<HyperVectorSpace>,
    pub inner: Option<InnerProduct>,
    pub norm: Option<Norm>,
}

fn cells_in_order(carrier: &Carrier, table: &SetTable, what: &str) -> Result<Vec<FiniteSet>> {
    let elems = carrier.elements().expect("finite");
    let mut cells = Vec::with_capacity(elems.len() * elems.len());
    for x in elems {
        for y in elems {
            cells.push(
                table
                    .get(&(x.clone(), y.clone()))
                    .cloned()
                    .ok_or_else(|| Error::Malformed(format!("{what} has no row for {x}, {y}")))?,
            );
        }
    }
    Ok(cells)
}

fn hyper_op(carrier: &Carrier, decl: &Option<Decl<SetTable>>, what: &str) -> Result<HyperOp> {
    match decl {
        None => Err(Error::Malformed(format!("no `{what}` declared"))),
        Some(Decl::Rule(_)) => Ok(HyperOp::sum(carrier.clone())),
        Some(Decl::Table(t)) => {
            if !carrier.is_finite() {
                return Err(Error::Malformed(format!("`{what}` tables need a finite carrier")));
            }
            HyperOp::table(carrier.clone(), cells_in_order(carrier, t, what)?)
        }
    }
}

fn scalar_op(carrier: &Carrier, decl: &Option<Decl<PointTable>>) -> Result<ScalarOp> {
    match decl {
        None => Err(Error::Malformed("no `mul` declared".into())),
        Some(Decl::Rule(_)) => Ok(ScalarOp::product(carrier.clone())),
        Some(Decl::Table(t)) => {
            let elems =
                carrier.elements().ok_or_else(|| Error::Malformed("`mul` tables need a finite carrier".into()))?;
            let mut cells = Vec::new();
            for x in elems {
                for y in elems {
                    cells.push(
                        t.get(&(x.clone(), y.clone()))
                            .cloned()
                            .ok_or_else(|| Error::Malformed(format!("mul has no row for {x}, {y}")))?,
                    );
                }
            }
            ScalarOp::table(carrier.clone(), cells)
        }
    }
}

fn complete_rows<K: Ord + Clone + std::fmt::Display, V>(keys: &[K], table: &BTreeMap<K, V>, what: &str) -> Result<()> {
    match keys.iter().find(|k| !table.contains_key(k)) {
        Some(k) => Err(Error::Malformed(format!("{what} has no row for {k}"))),
        None => Ok(()),
    }
}

fn build_field(doc: &StructureDoc, carrier: &Carrier) -> Result<Hyperfield> {
    let zero = doc.zero.clone().ok_or_else(|| Error::Malformed("a hyperfield needs `zero`".into()))?;
    let one = doc.one.clone().ok_or_else(|| Error::Malformed("a hyperfield needs `one`".into()))?;
    if !carrier.is_finite() {
        if !matches!(doc.hyperadd, Some(Decl::Rule(_))) || !matches!(doc.mul, Some(Decl::Rule(_))) {
            return Err(Error::Malformed("rational scalars need `hyperadd = sum` and `mul = product`".into()));
        }
        let mut f = rational_hyperfield();
        if zero != f.zero || one != f.one {
            return Err(Error::Malformed("rational scalars have zero 0 and one 1".into()));
        }
        f.abs = doc.abs.as_ref().map(|_| absolute_rule());
        return Ok(f);
    }
    let abs = match &doc.abs {
        None => None,
        Some(Decl::Rule(_)) => Some(absolute_rule()),
        Some(Decl::Table(t)) => {
            complete_rows(carrier.elements().expect("finite"), t, "abs")?;
            Some(ElementMap::table(t.clone()))
        }
    };
    let f = Hyperfield {
        add: hyper_op(carrier, &doc.hyperadd, "hyperadd")?,
        mul: scalar_op(carrier, &doc.mul)?,
        zero,
        one,
        neg: None,
        inv: None,
        abs,
    };
    let report = check_hyperfield(&f, &Default::default())?;
    Ok(f.completed(&report))
}

fn build_group(op: HyperOp, zero: Option<Element>, commutative: bool) -> Result<Hypergroup> {
    let finite = op.carrier().is_finite();
    let mut h = Hypergroup::new(op, commutative);
    if let Some(z) = zero {
        h = h.with_zero(z);
    }
    if finite {
        let report = check_hypergroup(&h, &Default::default())?;
        Ok(h.completed(&report))
    } else {
        if h.zero.is_none() {
            return Err(Error::Malformed("a hypergroup on an infinite carrier needs a zero".into()));
        }
        Ok(h.with_neg(negation_rule()))
    }
}

impl StructureDoc {
    /// Builds live structures. Axioms are not checked here beyond what is
    /// needed to derive negation and inverse maps on finite carriers.
    pub fn build(&self) -> Result<Structure> {
        let carrier = self.carrier.carrier()?;
        let mut s =
            Structure { doc: self.clone(), hypergroup: None, field: None, space: None, inner: None, norm: None };
        match self.kind {
            StructureKind::Hypergroup => {
                let op = hyper_op(&carrier, &self.hyperadd, "hyperadd")?;
                s.hypergroup = Some(build_group(op, self.zero.clone(), self.commutative)?);
            }
            StructureKind::Hyperfield => {
                let f = build_field(self, &carrier)?;
                s.hypergroup = Some(f.additive());
                s.field = Some(f);
            }
            StructureKind::Hyperspace => {
                let f = build_field(self, &carrier)?;
                let vdecl =
                    self.vectors.as_ref().ok_or_else(|| Error::Malformed("a hyperspace needs `vectors`".into()))?;
                let vc = vdecl.carrier()?;
                let theta = self.theta.clone().ok_or_else(|| Error::Malformed("a hyperspace needs `theta`".into()))?;
                let vectors = build_group(hyper_op(&vc, &self.vector_add, "vector-add")?, Some(theta), true)?;
                let star = match &self.star {
                    None => return Err(Error::Malformed("a hyperspace needs `star`".into())),
                    Some(Decl::Rule(r)) => match r.as_str() {
                        "scale" => StarOp::scale(),
                        "cone" => StarOp::cone(),
                        _ => StarOp::scale_or_self(),
                    },
                    Some(Decl::Table(t)) => {
                        if let (Some(se), Some(ve)) = (carrier.elements(), vc.elements()) {
                            for a in se {
                                for v in ve {
                                    if !t.contains_key(&(a.clone(), v.clone())) {
                                        return Err(Error::Malformed(format!("star has no row for {a}, {v}")));
                                    }
                                }
                            }
                        }
                        StarOp::table(t.clone())
                    }
                };
                s.inner = match &self.inner {
                    None => None,
                    Some(Decl::Rule(_)) => Some(InnerProduct::dot()),
                    Some(Decl::Table(t)) => Some(InnerProduct::table(t.clone())),
                };
                s.norm = match &self.norm {
                    None => None,
                    Some(Decl::Rule(_)) => Some(Norm::max()),
                    Some(Decl::Table(t)) => {
                        if let Some(ve) = vc.elements() {
                            complete_rows(ve, t, "norm")?;
                        }
                        Some(Norm::table(t.clone()))
                    }
                };
                s.space = Some(HyperVectorSpace::new(f.clone(), vectors, star));
                s.field = Some(f);
            }
        }
        Ok(s)
    }

    /// Document for a hypergroup on a finite carrier.
    pub fn from_hypergroup(h: &Hypergroup) -> Result<StructureDoc> {
        let carrier = h.carrier();
        let mut doc = StructureDoc::new(StructureKind::Hypergroup, carrier_decl_of(carrier)?);
        doc.zero = h.zero.clone();
        doc.commutative = h.commutative;
        doc.hyperadd = Some(Decl::Table(set_table(&h.add)?));
        Ok(doc)
    }

    /// Document for a hyperfield; rule-backed rational fields become rules.
    pub fn from_hyperfield(f: &Hyperfield) -> Result<StructureDoc> {
        let carrier = f.carrier();
        let mut doc = StructureDoc::new(StructureKind::Hyperfield, carrier_decl_of(carrier)?);
        doc.zero = Some(f.zero.clone());
        doc.one = Some(f.one.clone());
        if carrier.is_finite() {
            doc.hyperadd = Some(Decl::Table(set_table(&f.add)?));
            let elems = carrier.elements().expect("finite");
            let mut mul = PointTable::new();
            for x in elems {
                for y in elems {
                    mul.insert((x.clone(), y.clone()), f.mul.apply(x, y)?);
                }
            }
            doc.mul = Some(Decl::Table(mul));
            if f.abs.is_some() {
                let abs: Values = elems.iter().filter_map(|e| f.abs(e).map(|q| (e.clone(), q))).collect();
                doc.abs = Some(Decl::Table(abs));
            }
        } else {
            doc.hyperadd = Some(Decl::Rule("sum".into()));
            doc.mul = Some(Decl::Rule("product".into()));
            if f.abs.is_some() {
                doc.abs = Some(Decl::Rule("absolute".into()));
            }
        }
        Ok(doc)
    }
}

fn carrier_decl_of(carrier: &Carrier) -> Result<CarrierDecl> {
    Ok(match carrier {
        Carrier::Finite(c) => {
            if c.elements().iter().all(|e| e.as_atom().is_some()) {
                CarrierDecl::Atoms(c.elements().iter().map(|e| e.to_string()).collect())
            } else {
                CarrierDecl::Finite(c.elements().to_vec())
            }
        }
        Carrier::Rationals => CarrierDecl::Rationals,
        Carrier::Vectors(d) => CarrierDecl::Vectors(*d),
    })
}

fn set_table(op: &HyperOp) -> Result<SetTable> {
    let elems = op
        .carrier()
        .elements()
        .ok_or_else(|| Error::Precondition("only finite hyperoperations become tables".into()))?;
    let mut t = SetTable::new();
    for x in elems {
        for y in elems {
            t.insert((x.clone(), y.clone()), op.apply(x, y)?);
        }
    }
    Ok(t)
}
