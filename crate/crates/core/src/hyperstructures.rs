//! Hypergroups, hyperrings and hyperfields, with exhaustive axiom checkers
//! and small fixture constructions.
//!
//! Checkers never stop at the first failure; they return every violation
//! (capped per axiom) with a witness that [`replay`] can re-evaluate.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::element::{Carrier, Element, FiniteSet, Rational};
use crate::error::{Error, Result};
use crate::setalg::{absolute_rule, negation_rule, ElementMap, HyperOp, MapRule, PointRule, ScalarOp};
use crate::violation::{par_violations, CheckOptions, Evidence, Violation, ViolationLog};

pub mod axiom {
    pub const ASSOC: &str = "HG.assoc";
    pub const COMM: &str = "HG.comm";
    pub const ZERO: &str = "HG.zero";
    pub const INVERSE: &str = "HG.inverse";
    pub const REVERSIBLE: &str = "HG.reversible";
    pub const NEG_INVOLUTION: &str = "HG.neg_involution";
    pub const ZERO_IDENTITY: &str = "HG.zero_identity";
    pub const ZERO_UNIQUE: &str = "HG.zero_unique";
    pub const MUL_ASSOC: &str = "HR.mul.assoc";
    pub const DIST_LEFT: &str = "HR.dist.left";
    pub const DIST_RIGHT: &str = "HR.dist.right";
    pub const ABSORB: &str = "HR.absorb";
    pub const IDENTITY: &str = "HF.identity";
    pub const MUL_INVERSE: &str = "HF.inverse";
    pub const MUL_COMM: &str = "HF.mul.comm";
    pub const ABS: &str = "HF.abs";
}

/// A set with one hyperoperation, optionally with a designated zero and
/// negation.
#[derive(Clone, Debug)]
pub struct Hypergroup {
    pub add: HyperOp,
    pub zero: Option<Element>,
    pub neg: Option<ElementMap<Element>>,
    pub commutative: bool,
}

impl Hypergroup {
    pub fn new(add: HyperOp, commutative: bool) -> Self {
        Hypergroup { add, zero: None, neg: None, commutative }
    }

    pub fn with_zero(mut self, zero: Element) -> Self {
        self.zero = Some(zero);
        self
    }

    pub fn with_neg(mut self, neg: ElementMap<Element>) -> Self {
        self.neg = Some(neg);
        self
    }

    pub fn carrier(&self) -> &Carrier {
        self.add.carrier()
    }

    /// Fills zero and negation from a successful check.
    pub fn completed(&self, report: &HypergroupReport) -> Hypergroup {
        let mut out = self.clone();
        if out.zero.is_none() {
            out.zero = report.zero.clone();
        }
        if out.neg.is_none() {
            if let Some(neg) = &report.neg {
                out.neg = Some(ElementMap::table(neg.clone()));
            }
        }
        out
    }

    pub fn negate(&self, e: &Element) -> Option<Element> {
        self.neg.as_ref().and_then(|n| n.get(e))
    }
}

#[derive(Clone, Debug)]
pub struct HypergroupReport {
    pub is_hypergroup: bool,
    /// The accepted zero.
    pub zero: Option<Element>,
    /// Every element with unique two-sided inverses.
    pub zero_candidates: Vec<Element>,
    pub neg: Option<BTreeMap<Element, Element>>,
    pub violations: Vec<Violation>,
}

fn finite_domain(carrier: &Carrier) -> Result<Vec<Element>> {
    carrier
        .elements()
        .map(|e| e.to_vec())
        .ok_or_else(|| Error::Precondition(format!("exhaustive checks need a finite carrier, not {carrier}")))
}

fn associativity_at(op: &HyperOp, x: &Element, domain: &[Element]) -> Result<Vec<Violation>> {
    let mut out = Vec::new();
    for y in domain {
        for z in domain {
            let left = op.apply_point_set(x, &op.apply(y, z)?)?;
            let right = op.apply_set_point(&op.apply(x, y)?, z)?;
            if left != right {
                out.push(Violation::new(axiom::ASSOC, vec![x.clone(), y.clone(), z.clone()], left, right));
            }
        }
    }
    Ok(out)
}

/// Associativity `x # (y # z) = (x # y) # z` over the whole finite carrier.
pub fn check_semihypergroup(h: &Hypergroup, opts: &CheckOptions) -> Result<Vec<Violation>> {
    let domain = finite_domain(h.carrier())?;
    check_semihypergroup_on(h, &domain, opts)
}

pub fn check_semihypergroup_on(h: &Hypergroup, domain: &[Element], opts: &CheckOptions) -> Result<Vec<Violation>> {
    let all = par_violations(domain, opts.jobs, |x| associativity_at(&h.add, x, domain))?;
    let mut log = ViolationLog::new(opts.max_violations);
    log.extend(all);
    Ok(log.into_vec())
}

/// Inverses of every element relative to `zero`: `b` with `zero ∈ a # b` and
/// `zero ∈ b # a`. Returns the per-element inverse sets.
fn inverse_sets(op: &HyperOp, zero: &Element, domain: &[Element]) -> Result<Vec<(Element, FiniteSet)>> {
    let mut out = Vec::with_capacity(domain.len());
    for a in domain {
        let mut inv = FiniteSet::new();
        for b in domain {
            if op.apply(a, b)?.contains(zero) && op.apply(b, a)?.contains(zero) {
                inv.insert(b.clone());
            }
        }
        out.push((a.clone(), inv));
    }
    Ok(out)
}

fn unique_inverses(sets: &[(Element, FiniteSet)]) -> Option<BTreeMap<Element, Element>> {
    sets.iter()
        .map(|(a, inv)| if inv.len() == 1 { Some((a.clone(), inv.first().unwrap().clone())) } else { None })
        .collect()
}

fn reversibility_violations(
    op: &HyperOp,
    neg: &dyn Fn(&Element) -> Option<Element>,
    domain: &[Element],
) -> Result<Vec<Violation>> {
    let mut out = Vec::new();
    for b in domain {
        for c in domain {
            let bc = op.apply(b, c)?;
            let neg_c = neg(c).ok_or_else(|| Error::Precondition(format!("no negative for {c}")))?;
            for a in &bc {
                let back = op.apply(a, &neg_c)?;
                if !back.contains(b) {
                    out.push(Violation::new(
                        axiom::REVERSIBLE,
                        vec![a.clone(), b.clone(), c.clone(), neg_c.clone()],
                        b.clone(),
                        back,
                    ));
                }
            }
        }
    }
    Ok(out)
}

fn commutativity_violations(op: &HyperOp, domain: &[Element]) -> Result<Vec<Violation>> {
    let mut out = Vec::new();
    for (i, x) in domain.iter().enumerate() {
        for y in &domain[i + 1..] {
            let (l, r) = (op.apply(x, y)?, op.apply(y, x)?);
            if l != r {
                out.push(Violation::new(axiom::COMM, vec![x.clone(), y.clone()], l, r));
            }
        }
    }
    Ok(out)
}

/// Associativity, zero with unique two-sided inverses, and reversibility
/// over the whole finite carrier. Searches every element for a zero when
/// none is designated.
pub fn check_hypergroup(h: &Hypergroup, opts: &CheckOptions) -> Result<HypergroupReport> {
    let domain = finite_domain(h.carrier())?;
    check_hypergroup_on(h, &domain, opts)
}

/// As [`check_hypergroup`], quantifying over `domain` only. Infinite
/// carriers need a designated zero and negation.
pub fn check_hypergroup_on(h: &Hypergroup, domain: &[Element], opts: &CheckOptions) -> Result<HypergroupReport> {
    let op = &h.add;
    let mut log = ViolationLog::new(opts.max_violations);
    log.extend(check_semihypergroup_on(h, domain, opts)?);
    if h.commutative {
        log.extend(commutativity_violations(op, domain)?);
    }

    let mut zero_candidates = Vec::new();
    let mut accepted: Vec<(Element, BTreeMap<Element, Element>)> = Vec::new();
    let mut rejected_reasons: Vec<Violation> = Vec::new();

    match (&h.zero, &h.neg, h.carrier().is_finite()) {
        (Some(zero), Some(neg), false) => {
            // Infinite carrier: trust the declared negation, check it is the
            // unique inverse among the sampled elements.
            let mut map = BTreeMap::new();
            let mut ok = true;
            for a in domain {
                let na = neg.get(a).ok_or_else(|| Error::Precondition(format!("no negative for {a}")))?;
                let mut inv: FiniteSet = domain
                    .iter()
                    .filter(|b| {
                        op.apply(a, b).map(|s| s.contains(zero)).unwrap_or(false)
                            && op.apply(b, a).map(|s| s.contains(zero)).unwrap_or(false)
                    })
                    .cloned()
                    .collect();
                if op.apply(a, &na)?.contains(zero) && op.apply(&na, a)?.contains(zero) {
                    inv.insert(na.clone());
                }
                if inv.len() != 1 {
                    ok = false;
                    rejected_reasons.push(Violation::new(
                        axiom::INVERSE,
                        vec![zero.clone(), a.clone()],
                        inv,
                        Evidence::Note("exactly one element".into()),
                    ));
                }
                map.insert(a.clone(), na);
            }
            if ok {
                zero_candidates.push(zero.clone());
                let rev = reversibility_violations(op, &|e| neg.get(e), domain)?;
                if rev.is_empty() {
                    accepted.push((zero.clone(), map));
                } else {
                    rejected_reasons.extend(rev);
                }
            }
        }
        (_, _, false) => {
            return Err(Error::Precondition(
                "hypergroup checks on an infinite carrier need a designated zero and negation".into(),
            ))
        }
        (designated, _, true) => {
            let candidates: Vec<Element> = match designated {
                Some(z) => vec![z.clone()],
                None => domain.to_vec(),
            };
            for z in &candidates {
                let sets = inverse_sets(op, z, domain)?;
                match unique_inverses(&sets) {
                    Some(map) => {
                        zero_candidates.push(z.clone());
                        let rev = reversibility_violations(op, &|e| map.get(e).cloned(), domain)?;
                        if rev.is_empty() {
                            accepted.push((z.clone(), map));
                        } else if designated.is_some() || rejected_reasons.is_empty() {
                            rejected_reasons.extend(rev);
                        }
                    }
                    None => {
                        if designated.is_some() {
                            for (a, inv) in sets.into_iter().filter(|(_, inv)| inv.len() != 1) {
                                rejected_reasons.push(Violation::new(
                                    axiom::INVERSE,
                                    vec![z.clone(), a],
                                    inv,
                                    Evidence::Note("exactly one element".into()),
                                ));
                            }
                        }
                    }
                }
            }
        }
    }

    if h.commutative && accepted.len() > 1 {
        let zeros: Vec<String> = accepted.iter().map(|(z, _)| z.to_string()).collect();
        return Err(Error::Contradiction(format!("commutative structure has several zeros {{{}}}", zeros.join(", "))));
    }

    let (zero, neg) = match accepted.into_iter().next() {
        Some((z, m)) => (Some(z), Some(m)),
        None => {
            if rejected_reasons.is_empty() {
                log.push(Violation::new(
                    axiom::ZERO,
                    vec![],
                    Evidence::Note("no element has unique two-sided inverses".into()),
                    Evidence::Note("a zero element".into()),
                ));
            }
            log.extend(rejected_reasons);
            (None, None)
        }
    };

    let violations = log.into_vec();
    Ok(HypergroupReport { is_hypergroup: violations.is_empty(), zero, zero_candidates, neg, violations })
}

/// Consequences every commutative hypergroup must satisfy: `-(-a) = a`,
/// `0 # a = {a}`, and uniqueness of the zero.
pub fn check_hypergroup_consequences(h: &Hypergroup, opts: &CheckOptions) -> Result<Vec<Violation>> {
    let domain = finite_domain(h.carrier())?;
    let report = check_hypergroup(h, opts)?;
    let (zero, neg) = match (&report.zero, &report.neg) {
        (Some(z), Some(n)) => (z.clone(), n.clone()),
        _ => return Err(Error::Precondition("structure is not a hypergroup".into())),
    };
    let mut log = ViolationLog::new(opts.max_violations);
    for a in &domain {
        let na = &neg[a];
        let nna = &neg[na];
        if nna != a {
            log.push(Violation::new(axiom::NEG_INVOLUTION, vec![a.clone()], nna.clone(), a.clone()));
        }
    }
    if h.commutative {
        for a in &domain {
            let s = h.add.apply(&zero, a)?;
            let expect = FiniteSet::singleton(a.clone());
            if s != expect {
                log.push(Violation::new(axiom::ZERO_IDENTITY, vec![zero.clone(), a.clone()], s, expect));
            }
        }
        for z in domain.iter().filter(|z| **z != zero) {
            let sets = inverse_sets(&h.add, z, &domain)?;
            if let Some(map) = unique_inverses(&sets) {
                if reversibility_violations(&h.add, &|e| map.get(e).cloned(), &domain)?.is_empty() {
                    log.push(Violation::new(
                        axiom::ZERO_UNIQUE,
                        vec![zero.clone(), z.clone()],
                        z.clone(),
                        zero.clone(),
                    ));
                }
            }
        }
    }
    Ok(log.into_vec())
}

/// A commutative hypergroup with a distributive semigroup multiplication.
#[derive(Clone, Debug)]
pub struct Hyperring {
    pub add: HyperOp,
    pub mul: ScalarOp,
    pub zero: Option<Element>,
    pub neg: Option<ElementMap<Element>>,
}

#[derive(Clone, Debug)]
pub struct Hyperfield {
    pub add: HyperOp,
    pub mul: ScalarOp,
    pub zero: Element,
    pub one: Element,
    pub neg: Option<ElementMap<Element>>,
    pub inv: Option<ElementMap<Element>>,
    /// Absolute value, needed only where norms are checked.
    pub abs: Option<ElementMap<Rational>>,
}

impl Hyperfield {
    pub fn carrier(&self) -> &Carrier {
        self.add.carrier()
    }

    pub fn as_hyperring(&self) -> Hyperring {
        Hyperring { add: self.add.clone(), mul: self.mul.clone(), zero: Some(self.zero.clone()), neg: self.neg.clone() }
    }

    pub fn additive(&self) -> Hypergroup {
        Hypergroup { add: self.add.clone(), zero: Some(self.zero.clone()), neg: self.neg.clone(), commutative: true }
    }

    pub fn negate(&self, a: &Element) -> Option<Element> {
        self.neg.as_ref().and_then(|n| n.get(a))
    }

    pub fn abs(&self, a: &Element) -> Option<Rational> {
        self.abs.as_ref().and_then(|m| m.get(a))
    }

    /// Fills negation and inverse maps from a successful check.
    pub fn completed(&self, report: &HyperfieldReport) -> Hyperfield {
        let mut out = self.clone();
        if out.neg.is_none() {
            out.neg = report.neg.clone().map(ElementMap::table);
        }
        if out.inv.is_none() {
            out.inv = report.inv.clone().map(ElementMap::table);
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct HyperringReport {
    pub is_hyperring: bool,
    pub zero: Option<Element>,
    pub neg: Option<BTreeMap<Element, Element>>,
    pub violations: Vec<Violation>,
}

pub fn check_hyperring(r: &Hyperring, opts: &CheckOptions) -> Result<HyperringReport> {
    let domain = finite_domain(r.add.carrier())?;
    check_hyperring_on(r, &domain, opts)
}

pub fn check_hyperring_on(r: &Hyperring, domain: &[Element], opts: &CheckOptions) -> Result<HyperringReport> {
    let additive = Hypergroup { add: r.add.clone(), zero: r.zero.clone(), neg: r.neg.clone(), commutative: true };
    let hg = check_hypergroup_on(&additive, domain, opts)?;
    let mut log = ViolationLog::new(opts.max_violations);
    log.extend(hg.violations.iter().cloned());

    let per_a = par_violations(domain, opts.jobs, |a| {
        let mut out = Vec::new();
        for b in domain {
            let ab = r.mul.apply(a, b)?;
            for c in domain {
                let l = r.mul.apply(&ab, c)?;
                let rr = r.mul.apply(a, &r.mul.apply(b, c)?)?;
                if l != rr {
                    out.push(Violation::new(axiom::MUL_ASSOC, vec![a.clone(), b.clone(), c.clone()], l, rr));
                }
                let sum = r.add.apply(b, c)?;
                let left = r.mul.apply_left_set(a, &sum)?;
                let right = r.add.apply(&ab, &r.mul.apply(a, c)?)?;
                if left != right {
                    out.push(Violation::new(axiom::DIST_LEFT, vec![a.clone(), b.clone(), c.clone()], left, right));
                }
                let left = r.mul.apply_right_set(&sum, a)?;
                let right = r.add.apply(&r.mul.apply(b, a)?, &r.mul.apply(c, a)?)?;
                if left != right {
                    out.push(Violation::new(axiom::DIST_RIGHT, vec![a.clone(), b.clone(), c.clone()], left, right));
                }
            }
        }
        Ok(out)
    })?;
    log.extend(per_a);

    if let Some(zero) = hg.zero.as_ref().or(r.zero.as_ref()) {
        for a in domain {
            for (x, y) in [(a, zero), (zero, a)] {
                let l = r.mul.apply(x, y)?;
                if &l != zero {
                    log.push(Violation::new(axiom::ABSORB, vec![x.clone(), y.clone(), zero.clone()], l, zero.clone()));
                }
            }
        }
    }

    let violations = log.into_vec();
    Ok(HyperringReport { is_hyperring: violations.is_empty(), zero: hg.zero, neg: hg.neg, violations })
}

#[derive(Clone, Debug)]
pub struct HyperfieldReport {
    pub is_hyperfield: bool,
    pub zero: Option<Element>,
    pub one: Element,
    /// Elements `e` with `a · e = a` for every `a`.
    pub identity_candidates: Vec<Element>,
    pub no_identity: bool,
    pub neg: Option<BTreeMap<Element, Element>>,
    pub inv: Option<BTreeMap<Element, Element>>,
    pub violations: Vec<Violation>,
}

pub fn check_hyperfield(f: &Hyperfield, opts: &CheckOptions) -> Result<HyperfieldReport> {
    let domain = finite_domain(f.carrier())?;
    check_hyperfield_on(f, &domain, opts)
}

pub fn check_hyperfield_on(f: &Hyperfield, domain: &[Element], opts: &CheckOptions) -> Result<HyperfieldReport> {
    let ring = check_hyperring_on(&f.as_hyperring(), domain, opts)?;
    let mut log = ViolationLog::new(opts.max_violations);
    log.extend(ring.violations.iter().cloned());

    let mut identity_candidates = Vec::new();
    for e in domain {
        let mut ok = true;
        for a in domain {
            if &f.mul.apply(a, e)? != a {
                ok = false;
                break;
            }
        }
        if ok {
            identity_candidates.push(e.clone());
        }
    }
    for a in domain {
        let a1 = f.mul.apply(a, &f.one)?;
        if &a1 != a {
            log.push(Violation::new(axiom::IDENTITY, vec![a.clone(), f.one.clone()], a1, a.clone()));
        }
    }

    let mut inv = BTreeMap::new();
    for a in domain.iter().filter(|a| **a != f.zero) {
        let declared = f.inv.as_ref().and_then(|m| m.get(a));
        let found = match declared {
            Some(b) if f.mul.apply(a, &b)? == f.one => Some(b),
            _ => {
                let mut hit = None;
                for b in domain {
                    if f.mul.apply(a, b)? == f.one {
                        hit = Some(b.clone());
                        break;
                    }
                }
                hit
            }
        };
        match found {
            Some(b) => {
                inv.insert(a.clone(), b);
            }
            None => {
                let products: FiniteSet = domain.iter().map(|b| f.mul.apply(a, b)).collect::<Result<_>>()?;
                log.push(Violation::new(axiom::MUL_INVERSE, vec![a.clone(), f.one.clone()], products, f.one.clone()));
            }
        }
    }

    for (i, a) in domain.iter().enumerate() {
        for b in &domain[i + 1..] {
            let (l, r) = (f.mul.apply(a, b)?, f.mul.apply(b, a)?);
            if l != r {
                log.push(Violation::new(axiom::MUL_COMM, vec![a.clone(), b.clone()], l, r));
            }
        }
    }

    if let Some(abs) = &f.abs {
        for a in domain {
            let va = abs.get(a).ok_or_else(|| Error::Precondition(format!("no absolute value for {a}")))?;
            let positive =
                if *a == f.zero { num_traits::Zero::is_zero(&va) } else { va > Rational::from_integer(0.into()) };
            if !positive {
                log.push(Violation::new(
                    axiom::ABS,
                    vec![a.clone()],
                    va.clone(),
                    Evidence::Note("|0| = 0, |a| > 0 otherwise".into()),
                ));
            }
            for b in domain {
                let vb = abs.get(b).ok_or_else(|| Error::Precondition(format!("no absolute value for {b}")))?;
                let ab = f.mul.apply(a, b)?;
                let vab = abs.get(&ab).ok_or_else(|| Error::Precondition(format!("no absolute value for {ab}")))?;
                if vab != &va * &vb {
                    log.push(Violation::new(axiom::ABS, vec![a.clone(), b.clone()], vab, &va * &vb));
                }
            }
        }
    }

    let violations = log.into_vec();
    let no_identity = identity_candidates.is_empty();
    Ok(HyperfieldReport {
        is_hyperfield: violations.is_empty(),
        zero: ring.zero,
        one: f.one.clone(),
        identity_candidates,
        no_identity,
        neg: ring.neg,
        inv: Some(inv),
        violations,
    })
}

/// Whether a replayed `(left, right)` pair satisfies the axiom it came from.
pub fn relation_holds(axiom_key: &str, left: &Evidence, right: &Evidence) -> bool {
    match axiom_key {
        axiom::REVERSIBLE => match (left, right) {
            (Evidence::Element(b), Evidence::Set(s)) => s.contains(b),
            _ => false,
        },
        axiom::INVERSE => matches!(left, Evidence::Set(s) if s.len() == 1),
        axiom::MUL_INVERSE => match (left, right) {
            (Evidence::Set(s), Evidence::Element(one)) => s.contains(one),
            _ => false,
        },
        axiom::ZERO | axiom::ZERO_UNIQUE => false,
        _ => left == right,
    }
}

/// Re-evaluates a violation's witness against a hyperfield, returning the
/// recomputed `(left, right)` pair.
pub fn replay(f: &Hyperfield, v: &Violation) -> Result<(Evidence, Evidence)> {
    let w = &v.witness;
    let need = |n: usize| -> Result<()> {
        if w.len() == n {
            Ok(())
        } else {
            Err(Error::Precondition(format!("{} witness needs {n} elements, has {}", v.axiom, w.len())))
        }
    };
    let (add, mul) = (&f.add, &f.mul);
    match v.axiom {
        axiom::ASSOC => {
            need(3)?;
            let l = add.apply_point_set(&w[0], &add.apply(&w[1], &w[2])?)?;
            let r = add.apply_set_point(&add.apply(&w[0], &w[1])?, &w[2])?;
            Ok((l.into(), r.into()))
        }
        axiom::COMM => {
            need(2)?;
            Ok((add.apply(&w[0], &w[1])?.into(), add.apply(&w[1], &w[0])?.into()))
        }
        axiom::INVERSE => {
            need(2)?;
            let domain = finite_domain(f.carrier())?;
            let sets = inverse_sets(add, &w[0], &domain)?;
            let inv = sets.into_iter().find(|(a, _)| a == &w[1]).map(|(_, s)| s).unwrap_or_default();
            Ok((inv.into(), Evidence::Note("exactly one element".into())))
        }
        axiom::REVERSIBLE => {
            need(4)?;
            if !add.apply(&w[1], &w[2])?.contains(&w[0]) {
                return Err(Error::Precondition("witness premise a ∈ b # c does not hold".into()));
            }
            Ok((w[1].clone().into(), add.apply(&w[0], &w[3])?.into()))
        }
        axiom::MUL_ASSOC => {
            need(3)?;
            let l = mul.apply(&mul.apply(&w[0], &w[1])?, &w[2])?;
            let r = mul.apply(&w[0], &mul.apply(&w[1], &w[2])?)?;
            Ok((l.into(), r.into()))
        }
        axiom::DIST_LEFT => {
            need(3)?;
            let l = mul.apply_left_set(&w[0], &add.apply(&w[1], &w[2])?)?;
            let r = add.apply(&mul.apply(&w[0], &w[1])?, &mul.apply(&w[0], &w[2])?)?;
            Ok((l.into(), r.into()))
        }
        axiom::DIST_RIGHT => {
            need(3)?;
            let l = mul.apply_right_set(&add.apply(&w[1], &w[2])?, &w[0])?;
            let r = add.apply(&mul.apply(&w[1], &w[0])?, &mul.apply(&w[2], &w[0])?)?;
            Ok((l.into(), r.into()))
        }
        axiom::ABSORB => {
            need(3)?;
            Ok((mul.apply(&w[0], &w[1])?.into(), w[2].clone().into()))
        }
        axiom::IDENTITY => {
            need(2)?;
            Ok((mul.apply(&w[0], &w[1])?.into(), w[0].clone().into()))
        }
        axiom::MUL_INVERSE => {
            need(2)?;
            let domain = finite_domain(f.carrier())?;
            let products: FiniteSet = domain.iter().map(|b| mul.apply(&w[0], b)).collect::<Result<_>>()?;
            Ok((products.into(), w[1].clone().into()))
        }
        axiom::MUL_COMM => {
            need(2)?;
            Ok((mul.apply(&w[0], &w[1])?.into(), mul.apply(&w[1], &w[0])?.into()))
        }
        other => Err(Error::Precondition(format!("no replay for {other}"))),
    }
}

type UnaryRule = dyn Fn(&Element) -> Element + Send + Sync;

/// A classical field given by single-valued operations.
#[derive(Clone)]
pub struct ClassicalField {
    pub name: String,
    pub carrier: Carrier,
    pub zero: Element,
    pub one: Element,
    add: Arc<PointRule>,
    mul: Arc<PointRule>,
    neg: Arc<UnaryRule>,
    inv: Arc<MapRule<Element>>,
}

impl std::fmt::Debug for ClassicalField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ClassicalField({})", self.name)
    }
}

impl ClassicalField {
    /// GF(p) on atoms named `0..p-1`.
    pub fn prime(p: u32) -> Result<Self> {
        if p < 2 || (2..p).any(|d| p.is_multiple_of(d)) {
            return Err(Error::Domain(format!("{p} is not prime")));
        }
        let names: Vec<String> = (0..p).map(|i| i.to_string()).collect();
        let carrier = Carrier::atoms(&names)?;
        let atom = {
            let names = Arc::new(names);
            move |i: u32| Element::atom(i, names[i as usize].as_str())
        };
        let idx = |e: &Element| e.as_atom().expect("GF(p) element").index();
        let (a1, a2, a3, a4) = (atom.clone(), atom.clone(), atom.clone(), atom.clone());
        Ok(ClassicalField {
            name: format!("GF({p})"),
            carrier,
            zero: atom(0),
            one: atom(1),
            add: Arc::new(move |x, y| a1((idx(x) + idx(y)) % p)),
            mul: Arc::new(move |x, y| a2((idx(x) * idx(y)) % p)),
            neg: Arc::new(move |x| a3((p - idx(x)) % p)),
            inv: Arc::new(move |x| {
                let i = idx(x);
                (1..p).find(|j| (i * j) % p == 1).map(&a4)
            }),
        })
    }

    pub fn rationals() -> Self {
        let q = |e: &Element| e.as_rational().expect("rational element").clone();
        ClassicalField {
            name: "Q".into(),
            carrier: Carrier::Rationals,
            zero: Element::int(0),
            one: Element::int(1),
            add: Arc::new(move |x, y| Element::Rational(q(x) + q(y))),
            mul: Arc::new(move |x, y| Element::Rational(q(x) * q(y))),
            neg: Arc::new(move |x| Element::Rational(-q(x))),
            inv: Arc::new(move |x| {
                let v = q(x);
                if num_traits::Zero::is_zero(&v) {
                    None
                } else {
                    Some(Element::Rational(num_traits::Inv::inv(v)))
                }
            }),
        }
    }

    pub fn add(&self, x: &Element, y: &Element) -> Element {
        (self.add)(x, y)
    }

    pub fn mul(&self, x: &Element, y: &Element) -> Element {
        (self.mul)(x, y)
    }

    pub fn neg(&self, x: &Element) -> Element {
        (self.neg)(x)
    }

    pub fn inv(&self, x: &Element) -> Option<Element> {
        (self.inv)(x)
    }
}

/// Views a classical field as a hyperfield with singleton sums.
pub fn field_as_trivial_hyperfield(field: &ClassicalField) -> Result<Hyperfield> {
    match &field.carrier {
        Carrier::Finite(fc) => {
            let carrier = field.carrier.clone();
            let add = HyperOp::from_cells(carrier.clone(), |x, y| FiniteSet::singleton(field.add(x, y)))?;
            let mul = ScalarOp::from_cells(carrier, |x, y| field.mul(x, y))?;
            let neg = fc.elements().iter().map(|e| (e.clone(), field.neg(e))).collect();
            let inv = fc.elements().iter().filter_map(|e| field.inv(e).map(|i| (e.clone(), i))).collect();
            Ok(Hyperfield {
                add,
                mul,
                zero: field.zero.clone(),
                one: field.one.clone(),
                neg: Some(ElementMap::table(neg)),
                inv: Some(ElementMap::table(inv)),
                abs: None,
            })
        }
        Carrier::Rationals => Ok(rational_hyperfield()),
        Carrier::Vectors(_) => Err(Error::Domain("vectors do not form a field".into())),
    }
}

/// The trivial hyperfield of exact rationals: `a ⊕ b = {a + b}`.
pub fn rational_hyperfield() -> Hyperfield {
    let field = ClassicalField::rationals();
    let inv_field = field.clone();
    Hyperfield {
        add: HyperOp::sum(Carrier::Rationals),
        mul: ScalarOp::product(Carrier::Rationals),
        zero: Element::int(0),
        one: Element::int(1),
        neg: Some(negation_rule()),
        inv: Some(ElementMap::rule("reciprocal", move |e| inv_field.inv(e))),
        abs: Some(absolute_rule()),
    }
}

/// A multiplicative subgroup to quotient a field by.
#[derive(Clone, Debug)]
pub enum Subgroup {
    /// Explicit members, for finite fields.
    Elements(Vec<Element>),
    /// The positive rationals; the quotient of Q is the sign hyperfield.
    PositiveRationals,
}

/// The quotient hyperfield `F / G`: elements are `0` and the cosets `aG`,
/// each represented by its least member, with
/// `[a] ⊕ [b] = {[c] : c ∈ aG + bG}`.
pub fn krasner_quotient(field: &ClassicalField, subgroup: &Subgroup) -> Result<Hyperfield> {
    match subgroup {
        Subgroup::PositiveRationals => {
            if field.carrier != Carrier::Rationals {
                return Err(Error::Domain("the positive rationals are a subgroup of Q only".into()));
            }
            Ok(sign_hyperfield())
        }
        Subgroup::Elements(members) => finite_quotient(field, members),
    }
}

fn finite_quotient(field: &ClassicalField, members: &[Element]) -> Result<Hyperfield> {
    let elems = field
        .carrier
        .elements()
        .ok_or_else(|| Error::Domain("an explicit subgroup needs a finite field".into()))?
        .to_vec();
    let group: FiniteSet = members.iter().cloned().collect();
    if group.is_empty() {
        return Err(Error::Domain("subgroup is empty".into()));
    }
    for g in &group {
        if !field.carrier.contains(g) || *g == field.zero {
            return Err(Error::Domain(format!("{g} is not a non-zero field element")));
        }
        for h in &group {
            if !group.contains(&field.mul(g, h)) {
                return Err(Error::Domain(format!("not a subgroup: {g} * {h} leaves it")));
            }
        }
        match field.inv(g) {
            Some(i) if group.contains(&i) => {}
            _ => return Err(Error::Domain(format!("not a subgroup: inverse of {g} missing"))),
        }
    }
    let rep = |a: &Element| -> Element {
        if *a == field.zero {
            a.clone()
        } else {
            group.iter().map(|g| field.mul(a, g)).min().unwrap()
        }
    };
    let reps: FiniteSet = elems.iter().map(&rep).collect();
    let carrier = Carrier::finite(reps.iter().cloned().collect())?;
    let add = HyperOp::from_cells(carrier.clone(), |a, b| {
        let mut out = FiniteSet::new();
        for g in &group {
            for h in &group {
                out.insert(rep(&field.add(&field.mul(a, g), &field.mul(b, h))));
            }
        }
        out
    })?;
    let mul = ScalarOp::from_cells(carrier, |a, b| rep(&field.mul(a, b)))?;
    let neg = reps.iter().map(|a| (a.clone(), rep(&field.neg(a)))).collect();
    let inv = reps.iter().filter_map(|a| field.inv(a).map(|i| (a.clone(), rep(&i)))).collect();
    Ok(Hyperfield {
        add,
        mul,
        zero: field.zero.clone(),
        one: rep(&field.one),
        neg: Some(ElementMap::table(neg)),
        inv: Some(ElementMap::table(inv)),
        abs: None,
    })
}

fn sign(e: &Element) -> i64 {
    use num_traits::Signed;
    let q = e.as_rational().expect("sign of a rational");
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}

/// The sign hyperfield on `{-1, 0, 1}`: `1 ⊕ -1 = {-1, 0, 1}`, `x ⊕ x = {x}`,
/// `0 ⊕ x = {x}`, sign multiplication, `|x|` as absolute value.
pub fn sign_hyperfield() -> Hyperfield {
    let carrier = Carrier::finite(vec![Element::int(-1), Element::int(0), Element::int(1)]).expect("three signs");
    let add = HyperOp::from_cells(carrier.clone(), |a, b| match (sign(a), sign(b)) {
        (0, s) | (s, 0) => FiniteSet::singleton(Element::int(s)),
        (s, t) if s == t => FiniteSet::singleton(Element::int(s)),
        _ => (-1..=1).map(Element::int).collect(),
    })
    .expect("sign table");
    let mul = ScalarOp::from_cells(carrier.clone(), |a, b| Element::int(sign(a) * sign(b))).expect("sign table");
    let signs = carrier.elements().unwrap().to_vec();
    let neg = signs.iter().map(|a| (a.clone(), Element::int(-sign(a)))).collect();
    let inv = signs.iter().filter(|a| sign(a) != 0).map(|a| (a.clone(), a.clone())).collect();
    let abs = signs.iter().map(|a| (a.clone(), Rational::from_integer(sign(a).abs().into()))).collect();
    Hyperfield {
        add,
        mul,
        zero: Element::int(0),
        one: Element::int(1),
        neg: Some(ElementMap::table(neg)),
        inv: Some(ElementMap::table(inv)),
        abs: Some(ElementMap::table(abs)),
    }
}

/// The Krasner hyperfield on atoms `{0, 1}` with `1 ⊕ 1 = {0, 1}`.
pub fn krasner_hyperfield() -> Hyperfield {
    krasner_quotient(
        &ClassicalField::prime(3).expect("3 is prime"),
        &Subgroup::Elements(vec![Element::atom(1, "1"), Element::atom(2, "2")]),
    )
    .expect("GF(3) modulo its units")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atoms(n: u32) -> Vec<Element> {
        (0..n).map(|i| Element::atom(i, i.to_string())).collect()
    }

    fn table_hypergroup(n: u32, cells: &[&[u32]]) -> Hypergroup {
        let elems = atoms(n);
        let carrier = Carrier::finite(elems.clone()).unwrap();
        let cells = cells.iter().map(|c| c.iter().map(|&i| elems[i as usize].clone()).collect()).collect();
        Hypergroup::new(HyperOp::table(carrier, cells).unwrap(), true)
    }

    fn opts() -> CheckOptions {
        CheckOptions::default()
    }

    #[test]
    fn krasner_addition_is_associative() {
        let h = table_hypergroup(2, &[&[0], &[1], &[1], &[0, 1]]);
        assert!(check_semihypergroup(&h, &opts()).unwrap().is_empty());
    }

    fn associativity_oracle(h: &Hypergroup, e: &[Element]) -> Vec<Vec<Element>> {
        let mut failing = Vec::new();
        for x in e {
            for y in e {
                for z in e {
                    let l = h.add.apply_point_set(x, &h.add.apply(y, z).unwrap()).unwrap();
                    let r = h.add.apply_set_point(&h.add.apply(x, y).unwrap(), z).unwrap();
                    if l != r {
                        failing.push(vec![x.clone(), y.clone(), z.clone()]);
                    }
                }
            }
        }
        failing
    }

    #[test]
    fn mutated_krasner_fails_associativity() {
        // 0 ⊕ 1 = {0}: the only failing triple is (1, 0, 1)
        let h = table_hypergroup(2, &[&[0], &[0], &[1], &[0, 1]]);
        let v = check_semihypergroup(&h, &opts()).unwrap();
        let e = atoms(2);
        let oracle = associativity_oracle(&h, &e);
        assert_eq!(oracle, vec![vec![e[1].clone(), e[0].clone(), e[1].clone()]]);
        let found: Vec<_> = v.iter().map(|v| v.witness.clone()).collect();
        assert_eq!(found, oracle);
    }

    #[test]
    fn idempotent_one_mutation_stays_associative() {
        // 1 ⊕ 1 = {1}, 0 ⊕ 1 = {0, 1} is associative; it fails as a hypergroup instead.
        let h = table_hypergroup(2, &[&[0], &[0, 1], &[1], &[1]]);
        assert!(associativity_oracle(&h, &atoms(2)).is_empty());
        assert!(check_semihypergroup(&h, &opts()).unwrap().is_empty());
        assert!(!check_hypergroup(&h, &opts()).unwrap().is_hypergroup);
    }

    #[test]
    fn rational_addition_on_unclosed_carrier_is_malformed() {
        let carrier = Carrier::finite(vec![Element::int(0), Element::int(1), Element::int(2)]).unwrap();
        let h = Hypergroup::new(HyperOp::sum(carrier), true);
        assert!(matches!(check_semihypergroup(&h, &opts()), Err(Error::Malformed(_))));
    }

    #[test]
    fn z2_and_krasner_are_hypergroups() {
        for cells in [&[&[0][..], &[1], &[1], &[0]][..], &[&[0], &[1], &[1], &[0, 1]]] {
            let h = table_hypergroup(2, cells);
            let r = check_hypergroup(&h, &opts()).unwrap();
            assert!(r.is_hypergroup, "{:?}", r.violations);
            let zero = Element::atom(0, "0");
            let one = Element::atom(1, "1");
            assert_eq!(r.zero, Some(zero.clone()));
            let neg = r.neg.unwrap();
            assert_eq!(neg[&one], one);
            assert_eq!(neg[&zero], zero);
        }
    }

    #[test]
    fn z2_zero_candidates_include_one_but_only_zero_is_accepted() {
        let h = table_hypergroup(2, &[&[0], &[1], &[1], &[0]]);
        let r = check_hypergroup(&h, &opts()).unwrap();
        assert_eq!(r.zero_candidates, atoms(2));
        assert_eq!(r.zero, Some(Element::atom(0, "0")));
    }

    #[test]
    fn no_inverse_for_one() {
        let h = table_hypergroup(2, &[&[0], &[1], &[1], &[1]]).with_zero(Element::atom(0, "0"));
        let r = check_hypergroup(&h, &opts()).unwrap();
        assert!(!r.is_hypergroup);
        assert!(r.violations.iter().any(|v| v.axiom == axiom::INVERSE));
        let undesignated = table_hypergroup(2, &[&[0], &[1], &[1], &[1]]);
        assert!(!check_hypergroup(&undesignated, &opts()).unwrap().is_hypergroup);
    }

    #[test]
    fn consequences_hold_on_krasner_and_z2() {
        for cells in [&[&[0][..], &[1], &[1], &[0]][..], &[&[0], &[1], &[1], &[0, 1]]] {
            let h = table_hypergroup(2, cells);
            assert!(check_hypergroup_consequences(&h, &opts()).unwrap().is_empty());
        }
    }

    #[test]
    fn consequences_need_a_hypergroup() {
        let h = table_hypergroup(2, &[&[0], &[1], &[1], &[1]]);
        assert!(matches!(check_hypergroup_consequences(&h, &opts()), Err(Error::Precondition(_))));
    }

    #[test]
    fn krasner_and_sign_are_hyperfields() {
        for f in [krasner_hyperfield(), sign_hyperfield()] {
            let r = check_hyperfield(&f, &opts()).unwrap();
            assert!(r.is_hyperfield, "{:?}", r.violations);
        }
        let k = krasner_hyperfield();
        let one = Element::atom(1, "1");
        let both: FiniteSet = [Element::atom(0, "0"), one.clone()].into_iter().collect();
        assert_eq!(k.add.apply(&one, &one).unwrap(), both);
    }

    #[test]
    fn mutated_multiplication_fails_identity() {
        let mut k = krasner_hyperfield();
        let c = k.carrier().clone();
        let zero = Element::atom(0, "0");
        k.mul = ScalarOp::from_cells(c, |_, _| zero.clone()).unwrap();
        let r = check_hyperfield(&k, &opts()).unwrap();
        assert!(!r.is_hyperfield);
        assert!(r.violations.iter().any(|v| v.axiom == axiom::IDENTITY));
        assert!(r.no_identity);
    }

    #[test]
    fn prime_fields_embed() {
        for p in [2, 3, 5] {
            let f = field_as_trivial_hyperfield(&ClassicalField::prime(p).unwrap()).unwrap();
            let r = check_hyperfield(&f, &opts()).unwrap();
            assert!(r.is_hyperfield, "GF({p}): {:?}", r.violations);
        }
        assert!(ClassicalField::prime(4).is_err());
    }

    #[test]
    fn rationals_embed_on_samples() {
        let f = field_as_trivial_hyperfield(&ClassicalField::rationals()).unwrap();
        assert_eq!(f.add.apply(&Element::int(2), &Element::int(3)).unwrap(), FiniteSet::singleton(Element::int(5)));
        let samples: Vec<Element> = [-2, -1, 0, 1, 2]
            .iter()
            .map(|&i| Element::int(i))
            .chain([Element::ratio(1, 2), Element::ratio(-1, 2)])
            .collect();
        let r = check_hyperfield_on(&f, &samples, &opts()).unwrap();
        assert!(r.is_hyperfield, "{:?}", r.violations);
    }

    #[test]
    fn quotient_of_gf3_by_units_is_krasner() {
        let k = krasner_hyperfield();
        assert_eq!(k.carrier().elements().unwrap(), &atoms(2)[..]);
        let one = Element::atom(1, "1");
        assert_eq!(k.add.apply(&one, &one).unwrap().len(), 2);
        assert_eq!(k.mul.apply(&one, &one).unwrap(), one);
    }

    #[test]
    fn quotient_by_trivial_subgroup_is_the_field() {
        for p in [2, 3, 5] {
            let field = ClassicalField::prime(p).unwrap();
            let q = krasner_quotient(&field, &Subgroup::Elements(vec![field.one.clone()])).unwrap();
            let t = field_as_trivial_hyperfield(&field).unwrap();
            let elems = t.carrier().elements().unwrap();
            assert_eq!(q.carrier().elements().unwrap(), elems);
            for x in elems {
                for y in elems {
                    assert_eq!(q.add.apply(x, y).unwrap(), t.add.apply(x, y).unwrap());
                    assert_eq!(q.mul.apply(x, y).unwrap(), t.mul.apply(x, y).unwrap());
                }
            }
        }
    }

    #[test]
    fn non_subgroup_rejected() {
        let field = ClassicalField::prime(5).unwrap();
        let two = Element::atom(2, "2");
        assert!(matches!(krasner_quotient(&field, &Subgroup::Elements(vec![two])), Err(Error::Domain(_))));
        let zero = field.zero.clone();
        assert!(krasner_quotient(&field, &Subgroup::Elements(vec![zero])).is_err());
    }

    #[test]
    fn sign_hyperfield_matches_coset_sums_of_representatives() {
        // oracle: a*g + b*h over a sample of positive multipliers, classified by sign
        let f = krasner_quotient(&ClassicalField::rationals(), &Subgroup::PositiveRationals).unwrap();
        let multipliers =
            [Element::ratio(1, 3), Element::ratio(1, 2), Element::int(1), Element::int(2), Element::int(3)];
        let q = ClassicalField::rationals();
        for a in f.carrier().elements().unwrap() {
            for b in f.carrier().elements().unwrap() {
                let mut signs = FiniteSet::new();
                for g in &multipliers {
                    for h in &multipliers {
                        signs.insert(Element::int(sign(&q.add(&q.mul(a, g), &q.mul(b, h)))));
                    }
                }
                assert_eq!(f.add.apply(a, b).unwrap(), signs, "{a} + {b}");
            }
        }
    }

    #[test]
    fn replay_reproduces_reported_values() {
        let mut k = krasner_hyperfield();
        let c = k.carrier().clone();
        let one = Element::atom(1, "1");
        let zero = Element::atom(0, "0");
        k.add = HyperOp::from_cells(c, |x, y| {
            if *x == one && *y == one {
                FiniteSet::singleton(one.clone())
            } else if *x == zero && *y == one {
                [zero.clone(), one.clone()].into_iter().collect()
            } else {
                krasner_hyperfield().add.apply(x, y).unwrap()
            }
        })
        .unwrap();
        let r = check_hyperfield(&k, &CheckOptions::with_cap(100)).unwrap();
        assert!(!r.violations.is_empty());
        for v in &r.violations {
            if matches!(v.axiom, axiom::ZERO) {
                continue;
            }
            let (l, rr) = replay(&k, v).unwrap();
            assert_eq!((&l, &rr), (&v.left, &v.right), "{v}");
            assert!(!relation_holds(v.axiom, &l, &rr), "{v}");
        }
    }
}
