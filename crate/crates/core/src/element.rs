//! Carrier members, finite sets of them, and the carriers they live in.
//!
//! All arithmetic is exact. An [`Element`] is either a named atom of a
//! declared finite carrier, an exact rational, or a vector of exact
//! rationals. Ordering is total: atoms compare by declaration index,
//! rationals numerically, vectors lexicographically.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar used throughout the crate.
pub type Rational = BigRational;

pub fn rational(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn integer(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses `p`, `-p` or `p/q`.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if text.is_empty() {
        return None;
    }
    match text.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).ok()?;
            let d = BigInt::from_str(d.trim()).ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => BigInt::from_str(text).ok().map(Rational::from_integer),
    }
}

/// A symbolic member of a finite carrier. Identity is the declaration index;
/// the name only matters for display.
#[derive(Clone, Debug)]
pub struct Atom {
    index: u32,
    name: Arc<str>,
}

impl Atom {
    pub fn new(index: u32, name: impl Into<Arc<str>>) -> Self {
        Atom { index, name: name.into() }
    }

    pub fn index(&self) -> u32 {
        self.index
    }

    pub fn name(&self) -> &str {
        &self.name
    }
}

impl PartialEq for Atom {
    fn eq(&self, other: &Self) -> bool {
        self.index == other.index
    }
}

impl Eq for Atom {}

impl PartialOrd for Atom {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Atom {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.index.cmp(&other.index)
    }
}

impl Hash for Atom {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.index.hash(state);
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Element {
    Atom(Atom),
    Rational(Rational),
    Vector(Vec<Rational>),
}

impl Element {
    pub fn atom(index: u32, name: impl Into<Arc<str>>) -> Self {
        Element::Atom(Atom::new(index, name))
    }

    pub fn int(value: i64) -> Self {
        Element::Rational(integer(value))
    }

    pub fn ratio(numer: i64, denom: i64) -> Self {
        Element::Rational(rational(numer, denom))
    }

    /// Integer-coordinate vector.
    pub fn vector<I: IntoIterator<Item = i64>>(coords: I) -> Self {
        Element::Vector(coords.into_iter().map(integer).collect())
    }

    pub fn zero_vector(dim: usize) -> Self {
        Element::Vector(vec![Rational::zero(); dim])
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Element::Rational(q) => Some(q),
            _ => None,
        }
    }

    pub fn as_vector(&self) -> Option<&[Rational]> {
        match self {
            Element::Vector(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_atom(&self) -> Option<&Atom> {
        match self {
            Element::Atom(a) => Some(a),
            _ => None,
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Atom(a) => f.write_str(a.name()),
            Element::Rational(q) => write!(f, "{q}"),
            Element::Vector(v) => {
                f.write_str("(")?;
                for (i, c) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{c}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// Exact vector arithmetic on rational coordinates.
pub mod vector {
    use super::Rational;

    pub fn add(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    pub fn sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    pub fn neg(a: &[Rational]) -> Vec<Rational> {
        a.iter().map(|x| -x).collect()
    }

    pub fn scale(c: &Rational, a: &[Rational]) -> Vec<Rational> {
        a.iter().map(|x| c * x).collect()
    }

    pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }
}

/// A deduplicated, canonically ordered finite set of elements.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FiniteSet(BTreeSet<Element>);

impl FiniteSet {
    pub fn new() -> Self {
        FiniteSet(BTreeSet::new())
    }

    pub fn singleton(e: Element) -> Self {
        let mut s = BTreeSet::new();
        s.insert(e);
        FiniteSet(s)
    }

    pub fn insert(&mut self, e: Element) -> bool {
        self.0.insert(e)
    }

    pub fn contains(&self, e: &Element) -> bool {
        self.0.contains(e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_subset(&self, other: &FiniteSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn extend_from(&mut self, other: &FiniteSet) {
        self.0.extend(other.0.iter().cloned());
    }

    pub fn union(&self, other: &FiniteSet) -> FiniteSet {
        FiniteSet(self.0.union(&other.0).cloned().collect())
    }

    pub fn iter(&self) -> impl Iterator<Item = &Element> + '_ {
        self.0.iter()
    }

    pub fn first(&self) -> Option<&Element> {
        self.0.first()
    }

    pub fn map<F: FnMut(&Element) -> Element>(&self, f: F) -> FiniteSet {
        self.0.iter().map(f).collect()
    }
}

impl FromIterator<Element> for FiniteSet {
    fn from_iter<I: IntoIterator<Item = Element>>(iter: I) -> Self {
        FiniteSet(iter.into_iter().collect())
    }
}

impl IntoIterator for FiniteSet {
    type Item = Element;
    type IntoIter = std::collections::btree_set::IntoIter<Element>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.into_iter()
    }
}

impl<'a> IntoIterator for &'a FiniteSet {
    type Item = &'a Element;
    type IntoIter = std::collections::btree_set::Iter<'a, Element>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for FiniteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

/// An explicitly enumerated carrier. Positions follow declaration order.
#[derive(Clone, Debug)]
pub struct FiniteCarrier {
    elements: Arc<Vec<Element>>,
    index: Arc<HashMap<Element, usize>>,
}

impl FiniteCarrier {
    pub fn new(elements: Vec<Element>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::Domain("a carrier must be non-empty".into()));
        }
        let mut index = HashMap::with_capacity(elements.len());
        for (i, e) in elements.iter().enumerate() {
            if index.insert(e.clone(), i).is_some() {
                return Err(Error::Domain(format!("duplicate carrier element {e}")));
            }
        }
        Ok(FiniteCarrier { elements: Arc::new(elements), index: Arc::new(index) })
    }

    /// Atoms named by the given strings, indexed in order.
    pub fn atoms<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        Self::new(names.iter().enumerate().map(|(i, n)| Element::atom(i as u32, n.as_ref())).collect())
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn position(&self, e: &Element) -> Option<usize> {
        self.index.get(e).copied()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn lookup_name(&self, name: &str) -> Option<&Element> {
        self.elements.iter().find(|e| match e {
            Element::Atom(a) => a.name() == name,
            _ => false,
        })
    }
}

impl PartialEq for FiniteCarrier {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements
    }
}

/// The set an operation is total on.
#[derive(Clone, Debug, PartialEq)]
pub enum Carrier {
    Finite(FiniteCarrier),
    /// All exact rationals.
    Rationals,
    /// All exact rational vectors of the given dimension.
    Vectors(usize),
}

impl Carrier {
    pub fn finite(elements: Vec<Element>) -> Result<Self> {
        FiniteCarrier::new(elements).map(Carrier::Finite)
    }

    pub fn atoms<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        FiniteCarrier::atoms(names).map(Carrier::Finite)
    }

    pub fn contains(&self, e: &Element) -> bool {
        match self {
            Carrier::Finite(c) => c.position(e).is_some(),
            Carrier::Rationals => matches!(e, Element::Rational(_)),
            Carrier::Vectors(d) => matches!(e, Element::Vector(v) if v.len() == *d),
        }
    }

    pub fn elements(&self) -> Option<&[Element]> {
        match self {
            Carrier::Finite(c) => Some(c.elements()),
            _ => None,
        }
    }

    pub fn as_finite(&self) -> Option<&FiniteCarrier> {
        match self {
            Carrier::Finite(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Carrier::Finite(_))
    }

    pub fn check(&self, e: &Element) -> Result<()> {
        if self.contains(e) {
            Ok(())
        } else {
            Err(Error::Domain(format!("{e} is not in the carrier {self}")))
        }
    }

    /// Resolves a token to a member: atom names for atom carriers, rational
    /// literals for rational carriers, `(p, q, ...)` for vectors.
    pub fn parse_element(&self, token: &str) -> Option<Element> {
        let token = token.trim();
        match self {
            Carrier::Finite(c) => {
                if let Some(e) = c.lookup_name(token) {
                    return Some(e.clone());
                }
                let e = parse_literal(token)?;
                c.position(&e).map(|_| e)
            }
            Carrier::Rationals => parse_rational(token).map(Element::Rational),
            Carrier::Vectors(d) => match parse_literal(token)? {
                Element::Vector(v) if v.len() == *d => Some(Element::Vector(v)),
                _ => None,
            },
        }
    }
}

impl fmt::Display for Carrier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Carrier::Finite(c) => {
                let set: FiniteSet = c.elements().iter().cloned().collect();
                write!(f, "{set}")
            }
            Carrier::Rationals => f.write_str("Q"),
            Carrier::Vectors(d) => write!(f, "Q^{d}"),
        }
    }
}

/// Parses a rational or a parenthesised rational vector literal.
pub fn parse_literal(token: &str) -> Option<Element> {
    let token = token.trim();
    if let Some(inner) = token.strip_prefix('(') {
        let inner = inner.strip_suffix(')')?;
        if inner.trim().is_empty() {
            return None;
        }
        let coords: Option<Vec<Rational>> = inner.split(',').map(parse_rational).collect();
        return coords.map(Element::Vector);
    }
    parse_rational(token).map(Element::Rational)
}

/// `|q|` for rationals.
pub fn abs(q: &Rational) -> Rational {
    q.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vectors_order_lexicographically() {
        let a = Element::vector([0, 5]);
        let b = Element::vector([1, -3]);
        let c = Element::Vector(vec![rational(1, 2), integer(9)]);
        let set: FiniteSet = [b.clone(), a.clone(), c.clone()].into_iter().collect();
        let order: Vec<_> = set.iter().cloned().collect();
        assert_eq!(order, vec![a, c, b]);
    }

    #[test]
    fn atoms_order_by_declaration() {
        let carrier = FiniteCarrier::atoms(&["z", "a", "m"]).unwrap();
        let mut sorted = carrier.elements().to_vec();
        sorted.sort();
        assert_eq!(sorted, carrier.elements());
    }

    #[test]
    fn literals_round_trip_through_display() {
        for text in ["-3/4", "0", "7", "(1, -1/2)", "(0, 0, 0)"] {
            let e = parse_literal(text).unwrap();
            assert_eq!(parse_literal(&e.to_string()).unwrap(), e);
        }
        assert_eq!(parse_literal("2/4"), Some(Element::ratio(1, 2)));
        assert!(parse_literal("1/0").is_none());
        assert!(parse_literal("()").is_none());
    }

    #[test]
    fn carriers_resolve_tokens() {
        let q2 = Carrier::Vectors(2);
        assert_eq!(q2.parse_element("(1,2)"), Some(Element::vector([1, 2])));
        assert_eq!(q2.parse_element("(1,2,3)"), None);
        let atoms = Carrier::atoms(&["0", "1"]).unwrap();
        assert_eq!(atoms.parse_element("1"), Some(Element::atom(1, "1")));
        assert!(atoms.parse_element("2").is_none());
        let signs = Carrier::finite(vec![Element::int(-1), Element::int(0), Element::int(1)]).unwrap();
        assert_eq!(signs.parse_element("-1"), Some(Element::int(-1)));
        assert!(signs.parse_element("2").is_none());
    }

    #[test]
    fn duplicate_carrier_members_rejected() {
        assert!(FiniteCarrier::new(vec![Element::int(1), Element::int(1)]).is_err());
        assert!(FiniteCarrier::new(vec![]).is_err());
    }
}
