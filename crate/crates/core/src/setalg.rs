//! Set-valued binary operations and their extension from points to sets.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::element::{vector, Carrier, Element, FiniteSet, Rational};
use crate::error::{Error, Result};

/// Point rule of a hyperoperation: two points to a set.
pub type SetRule = dyn Fn(&Element, &Element) -> FiniteSet + Send + Sync;
/// Point rule of a single-valued binary operation.
pub type PointRule = dyn Fn(&Element, &Element) -> Element + Send + Sync;
/// Partial map on points; `None` means undefined.
pub type MapRule<T> = dyn Fn(&Element) -> Option<T> + Send + Sync;

type HyperFn = Arc<SetRule>;
type PointFn = Arc<PointRule>;

/// A named rule. The name is what structure files refer to.
pub struct Rule<F: ?Sized> {
    pub name: String,
    pub f: Arc<F>,
}

impl<F: ?Sized> Clone for Rule<F> {
    fn clone(&self) -> Self {
        Rule { name: self.name.clone(), f: Arc::clone(&self.f) }
    }
}

impl<F: ?Sized> fmt::Debug for Rule<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Rule({})", self.name)
    }
}

#[derive(Clone, Debug)]
pub enum Backing {
    /// Row-major cells over the positions of a finite carrier.
    Table(Arc<Vec<FiniteSet>>),
    /// Must return a finite set for every pair of the carrier.
    Rule(Rule<SetRule>),
}

/// A hyperoperation: a total map `X x X -> P*(X)`.
#[derive(Clone, Debug)]
pub struct HyperOp {
    carrier: Carrier,
    backing: Backing,
}

impl HyperOp {
    /// Table-backed operation. Cells are row-major over carrier positions and
    /// must be non-empty subsets of the carrier.
    pub fn table(carrier: Carrier, cells: Vec<FiniteSet>) -> Result<Self> {
        let fc = carrier
            .as_finite()
            .ok_or_else(|| Error::Malformed("table-backed operations need a finite carrier".into()))?;
        let n = fc.len();
        if cells.len() != n * n {
            return Err(Error::Malformed(format!("expected {} table cells, got {}", n * n, cells.len())));
        }
        for (i, cell) in cells.iter().enumerate() {
            let (x, y) = (&fc.elements()[i / n], &fc.elements()[i % n]);
            if cell.is_empty() {
                return Err(Error::Malformed(format!("{x} + {y} is empty; hyperoperation results must be non-empty")));
            }
            if let Some(bad) = cell.iter().find(|e| !carrier.contains(e)) {
                return Err(Error::Malformed(format!("{x} + {y} contains {bad}, outside the carrier")));
            }
        }
        Ok(HyperOp { carrier, backing: Backing::Table(Arc::new(cells)) })
    }

    /// Builds a table from a cell function over a finite carrier.
    pub fn from_cells<F>(carrier: Carrier, mut cell: F) -> Result<Self>
    where
        F: FnMut(&Element, &Element) -> FiniteSet,
    {
        let elems = carrier
            .elements()
            .ok_or_else(|| Error::Malformed("table-backed operations need a finite carrier".into()))?
            .to_vec();
        let cells = elems.iter().flat_map(|x| elems.iter().map(move |y| (x, y))).map(|(x, y)| cell(x, y)).collect();
        Self::table(carrier, cells)
    }

    pub fn rule<F>(carrier: Carrier, name: impl Into<String>, f: F) -> Self
    where
        F: Fn(&Element, &Element) -> FiniteSet + Send + Sync + 'static,
    {
        let f: HyperFn = Arc::new(f);
        HyperOp { carrier, backing: Backing::Rule(Rule { name: name.into(), f }) }
    }

    /// `x # y = {x + y}` on rationals or rational vectors.
    pub fn sum(carrier: Carrier) -> Self {
        HyperOp::rule(carrier, "sum", |x, y| FiniteSet::singleton(add_elements(x, y)))
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn backing(&self) -> &Backing {
        &self.backing
    }

    pub fn rule_name(&self) -> Option<&str> {
        match &self.backing {
            Backing::Rule(r) => Some(&r.name),
            Backing::Table(_) => None,
        }
    }

    /// `x # y`.
    pub fn apply(&self, x: &Element, y: &Element) -> Result<FiniteSet> {
        self.carrier.check(x)?;
        self.carrier.check(y)?;
        match &self.backing {
            Backing::Table(cells) => {
                let fc = self.carrier.as_finite().expect("table over finite carrier");
                let (i, j) = (fc.position(x).unwrap(), fc.position(y).unwrap());
                Ok(cells[i * fc.len() + j].clone())
            }
            Backing::Rule(rule) => {
                let out = (rule.f)(x, y);
                if out.is_empty() {
                    return Err(Error::Malformed(format!(
                        "{x} {} {y} is empty; hyperoperation results must be non-empty",
                        rule.name
                    )));
                }
                if let Some(bad) = out.iter().find(|e| !self.carrier.contains(e)) {
                    return Err(Error::Malformed(format!(
                        "{x} {} {y} yields {bad}, outside the carrier {}",
                        rule.name, self.carrier
                    )));
                }
                Ok(out)
            }
        }
    }

    /// `x # A`, the union of `x # a` over `a` in `A`.
    pub fn apply_point_set(&self, x: &Element, set: &FiniteSet) -> Result<FiniteSet> {
        require_nonempty(set)?;
        let mut out = FiniteSet::new();
        for a in set {
            out.extend_from(&self.apply(x, a)?);
        }
        Ok(out)
    }

    /// `A # x`.
    pub fn apply_set_point(&self, set: &FiniteSet, x: &Element) -> Result<FiniteSet> {
        require_nonempty(set)?;
        let mut out = FiniteSet::new();
        for a in set {
            out.extend_from(&self.apply(a, x)?);
        }
        Ok(out)
    }

    /// `A # B`, the union of `a # b` over all pairs.
    pub fn apply_sets(&self, left: &FiniteSet, right: &FiniteSet) -> Result<FiniteSet> {
        require_nonempty(left)?;
        require_nonempty(right)?;
        let mut out = FiniteSet::new();
        for a in left {
            for b in right {
                out.extend_from(&self.apply(a, b)?);
            }
        }
        Ok(out)
    }

    /// Converts a rule over a finite carrier into an explicit table.
    pub fn materialize(&self) -> Result<HyperOp> {
        match &self.backing {
            Backing::Table(_) => Ok(self.clone()),
            Backing::Rule(_) => {
                let elems = self
                    .carrier
                    .elements()
                    .ok_or_else(|| Error::Precondition("cannot tabulate an operation on an infinite carrier".into()))?;
                let mut cells = Vec::with_capacity(elems.len() * elems.len());
                for x in elems {
                    for y in elems {
                        cells.push(self.apply(x, y)?);
                    }
                }
                HyperOp::table(self.carrier.clone(), cells)
            }
        }
    }
}

fn require_nonempty(set: &FiniteSet) -> Result<()> {
    if set.is_empty() {
        Err(Error::Domain("set extension needs a non-empty set".into()))
    } else {
        Ok(())
    }
}

/// `hyper_apply`, the point-point application.
pub fn hyper_apply(op: &HyperOp, x: &Element, y: &Element) -> Result<FiniteSet> {
    op.apply(x, y)
}

/// `x # A`.
pub fn extend_point_set(op: &HyperOp, x: &Element, set: &FiniteSet) -> Result<FiniteSet> {
    op.apply_point_set(x, set)
}

/// `A # B`.
pub fn extend_set_set(op: &HyperOp, left: &FiniteSet, right: &FiniteSet) -> Result<FiniteSet> {
    op.apply_sets(left, right)
}

#[derive(Clone, Debug)]
pub enum ScalarBacking {
    Table(Arc<Vec<Element>>),
    Rule(Rule<PointRule>),
}

/// An ordinary single-valued binary operation, the `·` of a hyperring.
#[derive(Clone, Debug)]
pub struct ScalarOp {
    carrier: Carrier,
    backing: ScalarBacking,
}

impl ScalarOp {
    pub fn table(carrier: Carrier, cells: Vec<Element>) -> Result<Self> {
        let fc = carrier
            .as_finite()
            .ok_or_else(|| Error::Malformed("table-backed operations need a finite carrier".into()))?;
        let n = fc.len();
        if cells.len() != n * n {
            return Err(Error::Malformed(format!("expected {} table cells, got {}", n * n, cells.len())));
        }
        if let Some(bad) = cells.iter().find(|e| !carrier.contains(e)) {
            return Err(Error::Malformed(format!("product {bad} is outside the carrier")));
        }
        Ok(ScalarOp { carrier, backing: ScalarBacking::Table(Arc::new(cells)) })
    }

    pub fn from_cells<F>(carrier: Carrier, mut cell: F) -> Result<Self>
    where
        F: FnMut(&Element, &Element) -> Element,
    {
        let elems = carrier
            .elements()
            .ok_or_else(|| Error::Malformed("table-backed operations need a finite carrier".into()))?
            .to_vec();
        let cells = elems.iter().flat_map(|x| elems.iter().map(move |y| (x, y))).map(|(x, y)| cell(x, y)).collect();
        Self::table(carrier, cells)
    }

    pub fn rule<F>(carrier: Carrier, name: impl Into<String>, f: F) -> Self
    where
        F: Fn(&Element, &Element) -> Element + Send + Sync + 'static,
    {
        let f: PointFn = Arc::new(f);
        ScalarOp { carrier, backing: ScalarBacking::Rule(Rule { name: name.into(), f }) }
    }

    /// Ordinary multiplication of rationals.
    pub fn product(carrier: Carrier) -> Self {
        ScalarOp::rule(carrier, "product", |x, y| match (x, y) {
            (Element::Rational(a), Element::Rational(b)) => Element::Rational(a * b),
            _ => unreachable!("product rule is only attached to rational carriers"),
        })
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn backing(&self) -> &ScalarBacking {
        &self.backing
    }

    pub fn rule_name(&self) -> Option<&str> {
        match &self.backing {
            ScalarBacking::Rule(r) => Some(&r.name),
            ScalarBacking::Table(_) => None,
        }
    }

    pub fn apply(&self, x: &Element, y: &Element) -> Result<Element> {
        self.carrier.check(x)?;
        self.carrier.check(y)?;
        let out = match &self.backing {
            ScalarBacking::Table(cells) => {
                let fc = self.carrier.as_finite().expect("table over finite carrier");
                cells[fc.position(x).unwrap() * fc.len() + fc.position(y).unwrap()].clone()
            }
            ScalarBacking::Rule(rule) => (rule.f)(x, y),
        };
        if !self.carrier.contains(&out) {
            return Err(Error::Malformed(format!("{x} * {y} = {out} is outside the carrier")));
        }
        Ok(out)
    }

    /// `x · A = {x · a : a ∈ A}`.
    pub fn apply_left_set(&self, x: &Element, set: &FiniteSet) -> Result<FiniteSet> {
        set.iter().map(|a| self.apply(x, a)).collect()
    }

    pub fn apply_right_set(&self, set: &FiniteSet, x: &Element) -> Result<FiniteSet> {
        set.iter().map(|a| self.apply(a, x)).collect()
    }
}

/// A unary map given either pointwise or by a rule; partial maps return `None`.
#[derive(Clone, Debug)]
pub enum ElementMap<T> {
    Table(Arc<BTreeMap<Element, T>>),
    Rule(Rule<MapRule<T>>),
}

impl<T: Clone> ElementMap<T> {
    pub fn table(map: BTreeMap<Element, T>) -> Self {
        ElementMap::Table(Arc::new(map))
    }

    pub fn rule<F>(name: impl Into<String>, f: F) -> Self
    where
        F: Fn(&Element) -> Option<T> + Send + Sync + 'static,
    {
        let f: Arc<MapRule<T>> = Arc::new(f);
        ElementMap::Rule(Rule { name: name.into(), f })
    }

    pub fn get(&self, e: &Element) -> Option<T> {
        match self {
            ElementMap::Table(m) => m.get(e).cloned(),
            ElementMap::Rule(r) => (r.f)(e),
        }
    }

    pub fn rule_name(&self) -> Option<&str> {
        match self {
            ElementMap::Rule(r) => Some(&r.name),
            ElementMap::Table(_) => None,
        }
    }
}

/// Sum of two rationals or two equal-length rational vectors.
pub fn add_elements(x: &Element, y: &Element) -> Element {
    match (x, y) {
        (Element::Rational(a), Element::Rational(b)) => Element::Rational(a + b),
        (Element::Vector(a), Element::Vector(b)) => Element::Vector(vector::add(a, b)),
        _ => panic!("cannot add {x} and {y}"),
    }
}

/// Additive inverse of a rational or rational vector.
pub fn negate_element(x: &Element) -> Option<Element> {
    match x {
        Element::Rational(a) => Some(Element::Rational(-a)),
        Element::Vector(a) => Some(Element::Vector(vector::neg(a))),
        Element::Atom(_) => None,
    }
}

/// Negation map for rational or vector carriers.
pub fn negation_rule() -> ElementMap<Element> {
    ElementMap::rule("negate", negate_element)
}

/// `|q|` on rationals.
pub fn absolute_rule() -> ElementMap<Rational> {
    ElementMap::rule("absolute", |e| e.as_rational().map(crate::element::abs))
}
