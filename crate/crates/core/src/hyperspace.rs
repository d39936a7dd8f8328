//! Hypervector spaces: a commutative hypergroup of vectors with a set-valued
//! scalar action, plus linear combinations, dependence, weak independence
//! and basis checks.
//!
//! Existential searches over scalars and subsets are bounded by an explicit
//! [`CoefficientPool`] and [`VectorUniverse`]; every verdict is relative to
//! those bounds.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::Signed;

use crate::element::{vector, Carrier, Element, FiniteSet};
use crate::error::{Error, Result};
use crate::hyperstructures::{rational_hyperfield, Hyperfield, Hypergroup};
use crate::setalg::{negation_rule, HyperOp, Rule, SetRule};
use crate::violation::{par_violations, CheckOptions, Violation, ViolationLog};

pub mod axiom {
    pub const VECTOR_DISTRIB: &str = "HVS.vector_distrib";
    pub const SCALAR_DISTRIB: &str = "HVS.scalar_distrib";
    pub const MUL_COMPAT: &str = "HVS.mul_compat";
    pub const NEG_COMPAT: &str = "HVS.neg_compat";
    pub const UNIT: &str = "HVS.unit";
    pub const ZERO_SCALAR: &str = "HVS.zero_scalar";
    pub const ZERO_THETA: &str = "HVS.zero_theta";
    pub const NEG_MEMBERSHIP: &str = "HVS.neg_membership";
}

/// Largest universe [`is_weak_linearly_independent`] enumerates subsets of.
pub const DEFAULT_UNIVERSE_CAP: usize = 12;

#[derive(Clone, Debug)]
pub enum StarBacking {
    /// `a * α = {aα}`.
    Scale,
    /// `a * α = {aα, θ}`.
    Cone,
    /// `a * α = {aα, α}`.
    ScaleOrSelf,
    Table(Arc<BTreeMap<(Element, Element), FiniteSet>>),
    Rule(Rule<SetRule>),
}

/// The external hyperoperation `F x V -> P*(V)`.
#[derive(Clone, Debug)]
pub struct StarOp {
    pub backing: StarBacking,
}

impl StarOp {
    pub fn scale() -> Self {
        StarOp { backing: StarBacking::Scale }
    }

    pub fn cone() -> Self {
        StarOp { backing: StarBacking::Cone }
    }

    pub fn scale_or_self() -> Self {
        StarOp { backing: StarBacking::ScaleOrSelf }
    }

    pub fn table(cells: BTreeMap<(Element, Element), FiniteSet>) -> Self {
        StarOp { backing: StarBacking::Table(Arc::new(cells)) }
    }

    pub fn rule<F>(name: impl Into<String>, f: F) -> Self
    where
        F: Fn(&Element, &Element) -> FiniteSet + Send + Sync + 'static,
    {
        let f: Arc<SetRule> = Arc::new(f);
        StarOp { backing: StarBacking::Rule(Rule { name: name.into(), f }) }
    }

    pub fn builtin_name(&self) -> Option<&str> {
        match &self.backing {
            StarBacking::Scale => Some("scale"),
            StarBacking::Cone => Some("cone"),
            StarBacking::ScaleOrSelf => Some("scale-or-self"),
            StarBacking::Rule(r) => Some(&r.name),
            StarBacking::Table(_) => None,
        }
    }

    fn raw(&self, a: &Element, alpha: &Element) -> Result<FiniteSet> {
        let scaled = || -> Result<(Element, Element)> {
            match (a, alpha) {
                (Element::Rational(c), Element::Vector(v)) => {
                    Ok((Element::Vector(vector::scale(c, v)), Element::zero_vector(v.len())))
                }
                _ => Err(Error::Domain(format!(
                    "built-in scalar actions need a rational and a vector, got {a} and {alpha}"
                ))),
            }
        };
        match &self.backing {
            StarBacking::Scale => Ok(FiniteSet::singleton(scaled()?.0)),
            StarBacking::Cone => {
                let (s, theta) = scaled()?;
                Ok([s, theta].into_iter().collect())
            }
            StarBacking::ScaleOrSelf => Ok([scaled()?.0, alpha.clone()].into_iter().collect()),
            StarBacking::Table(cells) => cells
                .get(&(a.clone(), alpha.clone()))
                .cloned()
                .ok_or_else(|| Error::Malformed(format!("no scalar action cell for {a} * {alpha}"))),
            StarBacking::Rule(r) => Ok((r.f)(a, alpha)),
        }
    }
}

/// `(V, #, *, F)`.
#[derive(Clone, Debug)]
pub struct HyperVectorSpace {
    pub scalars: Hyperfield,
    /// Commutative hypergroup with the zero vector as its zero.
    pub vectors: Hypergroup,
    pub star: StarOp,
    /// Set by callers once [`check_hvs_axioms`] has passed.
    pub verified: bool,
}

impl HyperVectorSpace {
    pub fn new(scalars: Hyperfield, vectors: Hypergroup, star: StarOp) -> Self {
        HyperVectorSpace { scalars, vectors, star, verified: false }
    }

    /// `Q^dim` over the trivial rational hyperfield with singleton vector
    /// addition and the given scalar action.
    pub fn rational(dim: usize, star: StarOp) -> Self {
        let vectors = Hypergroup::new(HyperOp::sum(Carrier::Vectors(dim)), true)
            .with_zero(Element::zero_vector(dim))
            .with_neg(negation_rule());
        HyperVectorSpace::new(rational_hyperfield(), vectors, star)
    }

    pub fn theta(&self) -> Result<&Element> {
        self.vectors.zero.as_ref().ok_or_else(|| Error::Precondition("no zero vector declared".into()))
    }

    pub fn add(&self) -> &HyperOp {
        &self.vectors.add
    }

    /// `a * α`.
    pub fn star(&self, a: &Element, alpha: &Element) -> Result<FiniteSet> {
        self.scalars.carrier().check(a)?;
        self.vectors.carrier().check(alpha)?;
        let out = self.star.raw(a, alpha)?;
        if out.is_empty() {
            return Err(Error::Malformed(format!("{a} * {alpha} is empty")));
        }
        if let Some(bad) = out.iter().find(|e| !self.vectors.carrier().contains(e)) {
            return Err(Error::Malformed(format!("{a} * {alpha} contains {bad}, outside the vectors")));
        }
        Ok(out)
    }

    /// `a * A`, the union of `a * x` over `x` in `A`.
    pub fn star_set(&self, a: &Element, set: &FiniteSet) -> Result<FiniteSet> {
        let mut out = FiniteSet::new();
        for x in set {
            out.extend_from(&self.star(a, x)?);
        }
        Ok(out)
    }

    pub fn neg_vector(&self, alpha: &Element) -> Result<Element> {
        self.vectors.negate(alpha).ok_or_else(|| Error::Precondition(format!("no negative for vector {alpha}")))
    }

    pub fn neg_scalar(&self, a: &Element) -> Result<Element> {
        self.scalars.negate(a).ok_or_else(|| Error::Precondition(format!("no negative for scalar {a}")))
    }
}

/// Scalars and vectors the axiom checks quantify over.
#[derive(Clone, Debug, Default)]
pub struct Samples {
    pub scalars: Vec<Element>,
    pub vectors: Vec<Element>,
}

impl Samples {
    pub fn new(scalars: Vec<Element>, vectors: Vec<Element>) -> Self {
        Samples { scalars, vectors }
    }

    /// Full carriers; fails for infinite ones.
    pub fn full(w: &HyperVectorSpace) -> Result<Self> {
        let need = |c: &Carrier| {
            c.elements()
                .map(|e| e.to_vec())
                .ok_or_else(|| Error::Precondition(format!("carrier {c} needs explicit samples")))
        };
        Ok(Samples { scalars: need(w.scalars.carrier())?, vectors: need(w.vectors.carrier())? })
    }

    /// Explicit samples where given, full carriers where finite.
    pub fn or_full(w: &HyperVectorSpace, scalars: &[Element], vectors: &[Element]) -> Result<Self> {
        let pick = |given: &[Element], c: &Carrier| -> Result<Vec<Element>> {
            if !given.is_empty() {
                Ok(given.to_vec())
            } else {
                c.elements()
                    .map(|e| e.to_vec())
                    .ok_or_else(|| Error::Precondition(format!("carrier {c} needs explicit samples")))
            }
        };
        Ok(Samples { scalars: pick(scalars, w.scalars.carrier())?, vectors: pick(vectors, w.vectors.carrier())? })
    }
}

fn hvs_axioms_for_scalar(w: &HyperVectorSpace, a: &Element, s: &Samples) -> Result<Vec<Violation>> {
    let mut out = Vec::new();
    let add = w.add();
    let theta = w.theta()?;
    let neg_a = w.neg_scalar(a)?;
    for alpha in &s.vectors {
        let a_alpha = w.star(a, alpha)?;
        for beta in &s.vectors {
            let left = w.star_set(a, &add.apply(alpha, beta)?)?;
            let right = add.apply_sets(&a_alpha, &w.star(a, beta)?)?;
            if !left.is_subset(&right) {
                out.push(Violation::new(
                    axiom::VECTOR_DISTRIB,
                    vec![a.clone(), alpha.clone(), beta.clone()],
                    left,
                    right,
                ));
            }
        }
        for b in &s.scalars {
            let b_alpha = w.star(b, alpha)?;
            let mut left = FiniteSet::new();
            for c in &w.scalars.add.apply(a, b)? {
                left.extend_from(&w.star(c, alpha)?);
            }
            let right = add.apply_sets(&a_alpha, &b_alpha)?;
            if !left.is_subset(&right) {
                out.push(Violation::new(axiom::SCALAR_DISTRIB, vec![a.clone(), b.clone(), alpha.clone()], left, right));
            }
            let left = w.star(&w.scalars.mul.apply(a, b)?, alpha)?;
            let right = w.star_set(a, &b_alpha)?;
            if left != right {
                out.push(Violation::new(axiom::MUL_COMPAT, vec![a.clone(), b.clone(), alpha.clone()], left, right));
            }
        }
        let left = w.star(&neg_a, alpha)?;
        let right = w.star(a, &w.neg_vector(alpha)?)?;
        if left != right {
            out.push(Violation::new(axiom::NEG_COMPAT, vec![a.clone(), alpha.clone()], left, right));
        }
    }
    if *a == w.scalars.one {
        for alpha in &s.vectors {
            let one_alpha = w.star(a, alpha)?;
            if !one_alpha.contains(alpha) {
                out.push(Violation::new(axiom::UNIT, vec![alpha.clone()], alpha.clone(), one_alpha));
            }
        }
    }
    if *a == w.scalars.zero {
        for alpha in &s.vectors {
            let zero_alpha = w.star(a, alpha)?;
            if !zero_alpha.contains(theta) {
                out.push(Violation::new(axiom::ZERO_SCALAR, vec![alpha.clone()], theta.clone(), zero_alpha));
            }
        }
    }
    Ok(out)
}

/// Checks the five scalar-action axioms on every sampled tuple:
/// `a*(α#β) ⊆ a*α # a*β`, `(a⊕b)*α ⊆ a*α # b*α`, `(a·b)*α = a*(b*α)`,
/// `(-a)*α = a*(-α)`, and `α ∈ 1*α`, `θ ∈ 0*α`, `0*θ = {θ}`.
///
/// The unit and zero-scalar parts are checked for `1` and `0` whether or not
/// they appear in the samples.
pub fn check_hvs_axioms(w: &HyperVectorSpace, samples: &Samples, opts: &CheckOptions) -> Result<Vec<Violation>> {
    if w.scalars.neg.is_none() || w.vectors.neg.is_none() {
        return Err(Error::Precondition("scalar-action axioms need negation on scalars and vectors".into()));
    }
    let theta = w.theta()?.clone();
    let mut scalars = samples.scalars.clone();
    for c in [&w.scalars.zero, &w.scalars.one] {
        if !scalars.contains(c) {
            scalars.push(c.clone());
        }
    }
    let s = Samples { scalars: samples.scalars.clone(), vectors: samples.vectors.clone() };
    let found = par_violations(&scalars, opts.jobs, |a| {
        let in_samples = samples.scalars.contains(a);
        let mut vs = hvs_axioms_for_scalar(w, a, &s)?;
        if !in_samples {
            vs.retain(|v| matches!(v.axiom, axiom::UNIT | axiom::ZERO_SCALAR));
        }
        Ok(vs)
    })?;
    let mut log = ViolationLog::new(opts.max_violations);
    log.extend(found);
    let zt = w.star(&w.scalars.zero, &theta)?;
    let expect = FiniteSet::singleton(theta.clone());
    if zt != expect {
        log.push(Violation::new(axiom::ZERO_THETA, vec![w.scalars.zero.clone(), theta], zt, expect));
    }
    Ok(log.into_vec())
}

/// `-α ∈ (-1)*α` for every sampled vector.
pub fn check_negation_membership(
    w: &HyperVectorSpace,
    vectors: &[Element],
    opts: &CheckOptions,
) -> Result<Vec<Violation>> {
    let minus_one = w.neg_scalar(&w.scalars.one)?;
    let mut log = ViolationLog::new(opts.max_violations);
    for alpha in vectors {
        let neg = w.neg_vector(alpha)?;
        let set = w.star(&minus_one, alpha)?;
        if !set.contains(&neg) {
            log.push(Violation::new(axiom::NEG_MEMBERSHIP, vec![alpha.clone()], neg, set));
        }
    }
    Ok(log.into_vec())
}

/// Orders coefficients for witness search: zero first, then by absolute
/// value (where defined), positive before negative, then canonically.
fn coefficient_order(f: &Hyperfield, a: &Element, b: &Element) -> Ordering {
    let key = |e: &Element| {
        let nonzero = *e != f.zero;
        let (mag, negative) = match e {
            Element::Rational(q) => (Some(q.abs()), q.is_negative()),
            _ => (f.abs(e), false),
        };
        (nonzero, mag, negative)
    };
    key(a).cmp(&key(b)).then_with(|| a.cmp(b))
}

/// Finite set of scalars searched for coefficients. Always contains `0`,
/// `1` and `-1` (when negation is defined).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientPool(Vec<Element>);

impl CoefficientPool {
    pub fn new(w: &HyperVectorSpace, scalars: impl IntoIterator<Item = Element>) -> Result<Self> {
        let f = &w.scalars;
        let mut all: Vec<Element> = scalars.into_iter().collect();
        all.push(f.zero.clone());
        all.push(f.one.clone());
        if let Some(m) = f.negate(&f.one) {
            all.push(m);
        }
        for a in &all {
            f.carrier().check(a)?;
        }
        all.sort_by(|a, b| coefficient_order(f, a, b));
        all.dedup();
        Ok(CoefficientPool(all))
    }

    pub fn members(&self) -> &[Element] {
        &self.0
    }

    /// A pool enlarged by extra scalars.
    pub fn extended(&self, w: &HyperVectorSpace, extra: impl IntoIterator<Item = Element>) -> Result<Self> {
        CoefficientPool::new(w, self.0.iter().cloned().chain(extra))
    }
}

/// Finite stand-in for `V` when quantifying over subsets `P ⊆ V`. Always
/// contains the zero vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorUniverse(Vec<Element>);

impl VectorUniverse {
    pub fn new(w: &HyperVectorSpace, vectors: impl IntoIterator<Item = Element>) -> Result<Self> {
        let mut all: Vec<Element> = vec![w.theta()?.clone()];
        all.extend(vectors);
        for v in &all {
            w.vectors.carrier().check(v)?;
        }
        let set: FiniteSet = all.into_iter().collect();
        Ok(VectorUniverse(set.into_iter().collect()))
    }

    pub fn members(&self) -> &[Element] {
        &self.0
    }
}

/// `λ₁*α₁ # λ₂*α₂ # … # λₙ*αₙ`, folded left.
pub fn linear_combination(w: &HyperVectorSpace, coeffs: &[Element], vectors: &[Element]) -> Result<FiniteSet> {
    if coeffs.len() != vectors.len() {
        return Err(Error::LengthMismatch { left: coeffs.len(), right: vectors.len() });
    }
    if vectors.is_empty() {
        return Err(Error::Precondition("a linear combination needs at least one term".into()));
    }
    let mut acc = w.star(&coeffs[0], &vectors[0])?;
    for (c, v) in coeffs.iter().zip(vectors).skip(1) {
        acc = w.add().apply_sets(&acc, &w.star(c, v)?)?;
    }
    Ok(acc)
}

/// Index subsets of `0..n`, smallest first, lexicographic within a size.
fn subsets_by_size(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for k in 1..=n {
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            out.push(idx.clone());
            let mut i = k;
            while i > 0 && idx[i - 1] == n - k + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            idx[i - 1] += 1;
            for j in i..k {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    out
}

/// Walks every pool tuple for the vectors at `subset`, lexicographic in
/// pool order, carrying the left-folded hypersum of each prefix. `visit`
/// sees pool indices and the full combination; returning true stops the walk.
fn walk_combinations<F>(
    w: &HyperVectorSpace,
    stars: &[Vec<FiniteSet>],
    subset: &[usize],
    mut visit: F,
) -> Result<Option<Vec<usize>>>
where
    F: FnMut(&[usize], &FiniteSet) -> Result<bool>,
{
    fn go<F>(
        w: &HyperVectorSpace,
        stars: &[Vec<FiniteSet>],
        subset: &[usize],
        digits: &mut Vec<usize>,
        acc: Option<&FiniteSet>,
        visit: &mut F,
    ) -> Result<bool>
    where
        F: FnMut(&[usize], &FiniteSet) -> Result<bool>,
    {
        let depth = digits.len();
        let row = &stars[subset[depth]];
        for (d, term) in row.iter().enumerate() {
            let next = match acc {
                None => term.clone(),
                Some(prev) => w.add().apply_sets(prev, term)?,
            };
            digits.push(d);
            let stop = if depth + 1 == subset.len() {
                visit(digits, &next)?
            } else {
                go(w, stars, subset, digits, Some(&next), visit)?
            };
            if stop {
                return Ok(true);
            }
            digits.pop();
        }
        Ok(false)
    }
    let mut digits = Vec::with_capacity(subset.len());
    Ok(go(w, stars, subset, &mut digits, None, &mut visit)?.then_some(digits))
}

/// `c * α` for every input vector (outer) and pool member (inner).
fn star_table(w: &HyperVectorSpace, vectors: &[Element], pool: &CoefficientPool) -> Result<Vec<Vec<FiniteSet>>> {
    vectors.iter().map(|v| pool.members().iter().map(|c| w.star(c, v)).collect()).collect()
}

fn spread(w: &HyperVectorSpace, n: usize, subset: &[usize], digits: &[usize], pool: &CoefficientPool) -> Vec<Element> {
    let mut full = vec![w.scalars.zero.clone(); n];
    for (&i, &d) in subset.iter().zip(digits) {
        full[i] = pool.members()[d].clone();
    }
    full
}

fn zero_index(w: &HyperVectorSpace, pool: &CoefficientPool) -> usize {
    pool.members().iter().position(|c| *c == w.scalars.zero).expect("pools contain zero")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dependence {
    /// True when some pool-valued, not-all-zero combination of a subset
    /// contains the zero vector. False means independent relative to the pool.
    pub dependent: bool,
    /// Coefficients aligned with the input vectors; zero outside the subset used.
    pub witness: Option<Vec<Element>>,
    pub pool: Vec<Element>,
}

pub fn is_linearly_dependent(w: &HyperVectorSpace, vectors: &[Element], pool: &CoefficientPool) -> Result<Dependence> {
    if vectors.is_empty() {
        return Err(Error::Precondition("dependence needs a non-empty set".into()));
    }
    let theta = w.theta()?.clone();
    let zero = zero_index(w, pool);
    let stars = star_table(w, vectors, pool)?;
    let mut witness = None;
    for subset in subsets_by_size(vectors.len()) {
        let hit = walk_combinations(w, &stars, &subset, |digits, combo| {
            Ok(digits.iter().any(|&d| d != zero) && combo.contains(&theta))
        })?;
        if let Some(digits) = hit {
            witness = Some(spread(w, vectors.len(), &subset, &digits, pool));
            break;
        }
    }
    Ok(Dependence { dependent: witness.is_some(), witness, pool: pool.members().to_vec() })
}

/// Pool-bounded search for coefficients with `target ∈ λ₁*α₁ # … # λₖ*αₖ`
/// over subsets of `vectors`. Returns coefficients aligned with `vectors`.
pub fn find_representation(
    w: &HyperVectorSpace,
    vectors: &[Element],
    target: &Element,
    pool: &CoefficientPool,
) -> Result<Option<Vec<Element>>> {
    w.vectors.carrier().check(target)?;
    let stars = star_table(w, vectors, pool)?;
    for subset in subsets_by_size(vectors.len()) {
        if let Some(digits) = walk_combinations(w, &stars, &subset, |_, combo| Ok(combo.contains(target)))? {
            return Ok(Some(spread(w, vectors.len(), &subset, &digits, pool)));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeakIndependence {
    /// False when some not-all-zero tuple makes the combination equal `0*P`.
    pub independent: bool,
    /// Coefficients aligned with the input and the offending `P`.
    pub counterexample: Option<(Vec<Element>, FiniteSet)>,
    pub tuples_examined: u64,
}

/// For every subset of `vectors` and every not-all-zero pool tuple, asserts
/// that no non-empty `P` drawn from `universe` has `0*P` equal to the
/// combination, where `0*P` is the union of `0*p`.
pub fn is_weak_linearly_independent(
    w: &HyperVectorSpace,
    vectors: &[Element],
    pool: &CoefficientPool,
    universe: &VectorUniverse,
    universe_cap: usize,
) -> Result<WeakIndependence> {
    let u = universe.members();
    if u.len() > universe_cap {
        return Err(Error::Budget(format!(
            "universe has {} vectors; subset enumeration is capped at {universe_cap}",
            u.len()
        )));
    }
    if vectors.is_empty() {
        return Err(Error::Precondition("weak independence needs a non-empty set".into()));
    }
    let zero_images: Vec<FiniteSet> = u.iter().map(|p| w.star(&w.scalars.zero, p)).collect::<Result<_>>()?;
    // least P (by bitmask order over the universe) for each distinct 0*P
    let mut images: HashMap<FiniteSet, u32> = HashMap::new();
    for mask in 1u32..(1u32 << u.len()) {
        let mut set = FiniteSet::new();
        for (i, img) in zero_images.iter().enumerate() {
            if mask & (1 << i) != 0 {
                set.extend_from(img);
            }
        }
        images.entry(set).or_insert(mask);
    }

    let zero = zero_index(w, pool);
    let stars = star_table(w, vectors, pool)?;
    let mut examined = 0u64;
    let mut counterexample = None;
    for subset in subsets_by_size(vectors.len()) {
        let mut hit_mask = 0u32;
        let hit = walk_combinations(w, &stars, &subset, |digits, combo| {
            if digits.iter().all(|&d| d == zero) {
                return Ok(false);
            }
            examined += 1;
            if let Some(&mask) = images.get(combo) {
                hit_mask = mask;
                return Ok(true);
            }
            Ok(false)
        })?;
        if let Some(digits) = hit {
            let p: FiniteSet =
                u.iter().enumerate().filter(|(i, _)| hit_mask & (1 << i) != 0).map(|(_, e)| e.clone()).collect();
            counterexample = Some((spread(w, vectors.len(), &subset, &digits, pool), p));
            break;
        }
    }
    Ok(WeakIndependence { independent: counterexample.is_none(), counterexample, tuples_examined: examined })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisVerdict {
    /// Independence relative to the pool.
    pub independent: bool,
    pub dependence_witness: Option<Vec<Element>>,
    /// Probe and the coefficients that reach it.
    pub representations: Vec<(Element, Vec<Element>)>,
    /// Probes no pool-valued combination reaches.
    pub unreached: Vec<Element>,
    pub is_basis: bool,
}

/// Independence plus pool-bounded representability of every probe.
pub fn is_basis(
    w: &HyperVectorSpace,
    vectors: &[Element],
    probes: &[Element],
    pool: &CoefficientPool,
) -> Result<BasisVerdict> {
    let dep = is_linearly_dependent(w, vectors, pool)?;
    let mut representations = Vec::new();
    let mut unreached = Vec::new();
    for probe in probes {
        match find_representation(w, vectors, probe, pool)? {
            Some(c) => representations.push((probe.clone(), c)),
            None => unreached.push(probe.clone()),
        }
    }
    let is_basis = !dep.dependent && unreached.is_empty();
    Ok(BasisVerdict {
        independent: !dep.dependent,
        dependence_witness: dep.witness,
        representations,
        unreached,
        is_basis,
    })
}

/// Given `α ∈ λ₁*α₁ # … # λₙ*αₙ`, the list `(α, α₁, …, αₙ)` is dependent.
/// The pool is widened by the negated coefficients and `±1`.
pub fn check_dependent_extension(
    w: &HyperVectorSpace,
    basis: &[Element],
    alpha: &Element,
    coeffs: &[Element],
    pool: &CoefficientPool,
) -> Result<Dependence> {
    if !linear_combination(w, coeffs, basis)?.contains(alpha) {
        return Err(Error::Precondition(format!("{alpha} is not in the given combination")));
    }
    let negs: Vec<Element> = coeffs.iter().map(|c| w.neg_scalar(c)).collect::<Result<_>>()?;
    let widened = pool.extended(w, negs.into_iter().chain([w.scalars.one.clone()]))?;
    let mut list = vec![alpha.clone()];
    list.extend(basis.iter().cloned());
    is_linearly_dependent(w, &list, &widened)
}

/// Whether `vectors` contains the zero vector.
pub fn contains_theta(w: &HyperVectorSpace, vectors: &[Element]) -> Result<bool> {
    let theta = w.theta()?;
    Ok(vectors.iter().any(|v| v == theta))
}
