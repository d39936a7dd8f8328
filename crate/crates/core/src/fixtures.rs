//! Built-in fixtures: the standard small hyperfields, rational hyperspaces,
//! orthogonal sets, and single-cell mutations that must fail their checks.
//!
//! The files under `fixtures/` are the serialized form of [`all`]; a test
//! keeps them in sync.

use std::path::{Path, PathBuf};

use crate::element::{Element, FiniteSet};
use crate::error::{Error, Result};
use crate::format::{parse_structure, serialize_structure, Decl, StructureDoc};
use crate::hyperstructures::{field_as_trivial_hyperfield, krasner_hyperfield, sign_hyperfield, ClassicalField};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expectation {
    /// Every applicable check passes.
    Valid,
    /// One table cell of `base` changed; the structure check must fail.
    Mutant { base: &'static str, cell: String },
}

#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub doc: StructureDoc,
    pub expect: Expectation,
}

impl Fixture {
    pub fn file_name(&self) -> String {
        format!("{}.hyp", self.name)
    }

    pub fn text(&self) -> String {
        serialize_structure(&self.doc)
    }
}

const TRIVIAL_Q2: &str = "\
structure hyperspace
name trivial_q2
carrier rationals
zero 0
one 1
hyperadd = sum
mul = product
abs = absolute
vectors rationals 2
theta (0, 0)
vector-add = sum
star = scale
inner = dot
norm = max
scalar-samples -2 -1 0 1/2 1 2 3
vector-samples (0, 0) (1, 0) (0, 1) (1, 1) (-1, 0) (-1, 2) (1/2, -1)
pool -1 0 1 2
universe (1, 0) (0, 1) (1, 1) (1, -1)
probes (1, 0) (0, 1) (2, 1) (1, -1)
independent (1, 1) (1, 0)
orthogonal (1, 1) (1, -1)
";

const CONE: &str = "\
structure hyperspace
name cone
carrier rationals
zero 0
one 1
hyperadd = sum
mul = product
abs = absolute
vectors rationals 2
theta (0, 0)
vector-add = sum
star = cone
inner = dot
scalar-samples -1 0 1 2
vector-samples (0, 0) (1, 0) (-1, 0) (0, 1) (1, 1)
";

const SCALE_OR_SELF: &str = "\
structure hyperspace
name scale_or_self
carrier rationals
zero 0
one 1
hyperadd = sum
mul = product
vectors rationals 2
theta (0, 0)
vector-add = sum
star = scale-or-self
scalar-samples 0 1 2 3
vector-samples (0, 0) (1, 0)
";

const ORTHOGONAL_Q2: &str = "\
structure hyperspace
name orthogonal_q2
carrier rationals
zero 0
one 1
hyperadd = sum
mul = product
vectors rationals 2
theta (0, 0)
vector-add = sum
star = scale
inner = dot
pool -1 0 1 2
universe (1, 0) (0, 1) (1, 1) (1, -1) (2, 0)
probes (3, 5) (1, 0) (0, 0)
orthogonal (2, 1) (-1, 2)
";

const ORTHOGONAL_Q3: &str = "\
structure hyperspace
name orthogonal_q3
carrier rationals
zero 0
one 1
hyperadd = sum
mul = product
vectors rationals 3
theta (0, 0, 0)
vector-add = sum
star = scale
inner = dot
pool -1 0 1
universe (1, 0, 0) (0, 1, 0) (0, 0, 1) (1, 1, 0) (1, -1, 0) (0, 1, 1)
probes (1, 2, 3) (0, 0, 1)
orthogonal (1, 1, 0) (1, -1, 0) (0, 0, 1)
";

const ORTHONORMAL_Q3: &str = "\
structure hyperspace
name orthonormal_q3
carrier rationals
zero 0
one 1
hyperadd = sum
mul = product
vectors rationals 3
theta (0, 0, 0)
vector-add = sum
star = scale
inner = dot
pool -1 0 1
universe (1, 0, 0) (0, 1, 0) (0, 0, 1) (1, 1, 1)
probes (1, -1, 2)
orthogonal (1, 0, 0) (0, 1, 0) (0, 0, 1)
";

/// Hyperspace fixtures written out literally.
const SPACE_TEXTS: &[&str] = &[TRIVIAL_Q2, CONE, SCALE_OR_SELF, ORTHOGONAL_Q2, ORTHOGONAL_Q3, ORTHONORMAL_Q3];

/// Names of the fixtures that declare an orthogonal set.
pub const ORTHOGONAL_SET_FIXTURES: &[&str] = &["trivial_q2", "orthogonal_q2", "orthogonal_q3", "orthonormal_q3"];

fn named(mut doc: StructureDoc, name: &str) -> StructureDoc {
    doc.name = Some(name.into());
    doc
}

fn base_fields() -> Result<Vec<(&'static str, StructureDoc)>> {
    let gf2 = field_as_trivial_hyperfield(&ClassicalField::prime(2)?)?;
    let gf3 = field_as_trivial_hyperfield(&ClassicalField::prime(3)?)?;
    Ok(vec![
        ("krasner", named(StructureDoc::from_hyperfield(&krasner_hyperfield())?, "krasner")),
        ("sign", named(StructureDoc::from_hyperfield(&sign_hyperfield())?, "sign")),
        ("gf2", named(StructureDoc::from_hyperfield(&gf2)?, "gf2")),
        ("gf3", named(StructureDoc::from_hyperfield(&gf3)?, "gf3")),
    ])
}

/// Additive hypergroup of GF(2).
fn z2() -> Result<StructureDoc> {
    let gf2 = field_as_trivial_hyperfield(&ClassicalField::prime(2)?)?;
    let mut doc = StructureDoc::from_hypergroup(&gf2.additive().with_zero(gf2.zero.clone()))?;
    doc.commutative = true;
    Ok(named(doc, "z2"))
}

enum Cell {
    Add(&'static str, &'static str, &'static [&'static str]),
    Mul(&'static str, &'static str, &'static str),
}

const MUTATIONS: &[(&str, Cell)] = &[
    ("krasner", Cell::Add("1", "1", &["1"])),
    ("krasner", Cell::Add("0", "1", &["0", "1"])),
    ("krasner", Cell::Mul("1", "1", "0")),
    ("krasner", Cell::Add("0", "0", &["0", "1"])),
    ("sign", Cell::Add("1", "1", &["0", "1"])),
    ("sign", Cell::Mul("-1", "-1", "-1")),
    ("sign", Cell::Add("1", "-1", &["0"])),
    ("sign", Cell::Mul("1", "-1", "1")),
    ("gf3", Cell::Add("1", "2", &["1"])),
    ("gf3", Cell::Mul("2", "2", "2")),
    ("gf3", Cell::Add("0", "0", &["1"])),
    ("gf2", Cell::Mul("0", "1", "1")),
    ("gf2", Cell::Add("1", "1", &["1"])),
];

fn mutate(base: &StructureDoc, base_name: &'static str, cell: &Cell) -> Result<Fixture> {
    let carrier = base.carrier.carrier()?;
    let el = |t: &str| carrier.parse_element(t).ok_or_else(|| Error::Domain(format!("{t} is not in {base_name}")));
    let mut doc = base.clone();
    let (tag, desc) = match cell {
        Cell::Add(x, y, set) => {
            let value: FiniteSet = set.iter().map(|t| el(t)).collect::<Result<_>>()?;
            match doc.hyperadd.as_mut() {
                Some(Decl::Table(t)) => t.insert((el(x)?, el(y)?), value.clone()),
                _ => return Err(Error::Precondition(format!("{base_name} has no addition table"))),
            };
            (format!("add_{x}_{y}"), format!("{x} + {y} = {value}"))
        }
        Cell::Mul(x, y, z) => {
            match doc.mul.as_mut() {
                Some(Decl::Table(t)) => t.insert((el(x)?, el(y)?), el(z)?),
                _ => return Err(Error::Precondition(format!("{base_name} has no multiplication table"))),
            };
            (format!("mul_{x}_{y}"), format!("{x} * {y} = {z}"))
        }
    };
    let name = format!("{base_name}_mut_{}", tag.replace('-', "m"));
    doc.name = Some(name.clone());
    Ok(Fixture { name, doc, expect: Expectation::Mutant { base: base_name, cell: desc } })
}

/// Every fixture in a stable order: base hyperfields, the hypergroup, the
/// hyperspaces, then the mutants.
pub fn all() -> Result<Vec<Fixture>> {
    let bases = base_fields()?;
    let mut out: Vec<Fixture> = bases
        .iter()
        .map(|(n, d)| Fixture { name: n.to_string(), doc: d.clone(), expect: Expectation::Valid })
        .collect();
    out.push(Fixture { name: "z2".into(), doc: z2()?, expect: Expectation::Valid });
    for text in SPACE_TEXTS {
        let doc = parse_structure(text)?;
        let name = doc.name.clone().expect("space fixtures are named");
        // scale_or_self ships as a counterexample, not a valid space
        let expect = if name == "scale_or_self" {
            Expectation::Mutant { base: "trivial_q2", cell: "star = scale-or-self".into() }
        } else {
            Expectation::Valid
        };
        out.push(Fixture { name, doc, expect });
    }
    for (base, cell) in MUTATIONS {
        let doc = &bases.iter().find(|(n, _)| n == base).expect("mutation base exists").1;
        out.push(mutate(doc, base, cell)?);
    }
    Ok(out)
}

pub fn mutants() -> Result<Vec<Fixture>> {
    Ok(all()?
        .into_iter()
        .filter(|f| matches!(f.expect, Expectation::Mutant { base, .. } if base != "trivial_q2"))
        .collect())
}

pub fn get(name: &str) -> Result<Fixture> {
    all()?.into_iter().find(|f| f.name == name).ok_or_else(|| Error::Domain(format!("no fixture named {name:?}")))
}

/// Writes every fixture into `dir` and returns the paths written.
pub fn write_all(dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Precondition(format!("{}: {e}", dir.display())))?;
    all()?
        .iter()
        .map(|f| {
            let path = dir.join(f.file_name());
            std::fs::write(&path, f.text()).map_err(|e| Error::Precondition(format!("{}: {e}", path.display())))?;
            Ok(path)
        })
        .collect()
}

/// Elements named in a fixture's text, for tests that need them.
pub fn element(doc: &StructureDoc, token: &str) -> Result<Element> {
    let carrier = match &doc.vectors {
        Some(v) if token.starts_with('(') => v.carrier()?,
        _ => doc.carrier.carrier()?,
    };
    carrier.parse_element(token).ok_or_else(|| Error::Domain(format!("{token} is not an element")))
}
