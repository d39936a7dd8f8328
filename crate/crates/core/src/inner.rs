//! Norms and inner products on hypervector spaces, their consequences, and
//! the set-valued Gram–Schmidt process.
//!
//! Every `sup` here is an exact maximum over a finite enumerated set.
//! Quantities involving the induced norm `f(α) = √⟨α,α⟩` are compared in
//! squared form so that all arithmetic stays in exact rationals.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::element::{vector, Element, FiniteSet, Rational};
use crate::error::{Error, Result};
use crate::hyperspace::{
    find_representation, is_weak_linearly_independent, linear_combination, CoefficientPool, HyperVectorSpace, Samples,
    VectorUniverse, WeakIndependence,
};
use crate::setalg::Rule;
use crate::violation::{par_violations, CheckOptions, Violation, ViolationLog};

pub mod axiom {
    pub const NORM_NONNEG: &str = "NORM.nonneg";
    pub const NORM_ZERO: &str = "NORM.zero";
    pub const NORM_TRIANGLE: &str = "NORM.triangle";
    pub const NORM_HOMOGENEOUS: &str = "NORM.homogeneous";
    pub const IP_POSITIVE: &str = "IP.positive";
    pub const IP_ZERO: &str = "IP.zero";
    pub const IP_SYMMETRIC: &str = "IP.symmetric";
    pub const IP_ADDITIVE: &str = "IP.additive";
    pub const IP_HOMOGENEOUS: &str = "IP.homogeneous";
    pub const IP_RIGHT_ADDITIVE: &str = "IP.right_additive";
    pub const IP_RIGHT_HOMOGENEOUS: &str = "IP.right_homogeneous";
    pub const IP_THETA: &str = "IP.theta";
    pub const IP_BILINEAR: &str = "IP.bilinear";
    pub const CAUCHY_SCHWARZ: &str = "IP.cauchy_schwarz";
    pub const INDUCED_NONNEG: &str = "INDUCED.nonneg";
    pub const INDUCED_ZERO: &str = "INDUCED.zero";
    pub const INDUCED_TRIANGLE: &str = "INDUCED.triangle";
    pub const INDUCED_HOMOGENEOUS: &str = "INDUCED.homogeneous";
    pub const PARALLELOGRAM: &str = "IP.parallelogram";
}

type PairFn = dyn Fn(&Element, &Element) -> Rational + Send + Sync;
type UnaryFn = dyn Fn(&Element) -> Rational + Send + Sync;

#[derive(Clone, Debug)]
pub enum InnerBacking {
    /// Coordinatewise dot product on rational vectors.
    Dot,
    Table(Arc<BTreeMap<(Element, Element), Rational>>),
    Rule(Rule<PairFn>),
}

/// `⟨·,·⟩ : V x V -> Q`.
#[derive(Clone, Debug)]
pub struct InnerProduct {
    pub backing: InnerBacking,
}

impl InnerProduct {
    pub fn dot() -> Self {
        InnerProduct { backing: InnerBacking::Dot }
    }

    pub fn table(cells: BTreeMap<(Element, Element), Rational>) -> Self {
        InnerProduct { backing: InnerBacking::Table(Arc::new(cells)) }
    }

    pub fn rule<F>(name: impl Into<String>, f: F) -> Self
    where
        F: Fn(&Element, &Element) -> Rational + Send + Sync + 'static,
    {
        let f: Arc<PairFn> = Arc::new(f);
        InnerProduct { backing: InnerBacking::Rule(Rule { name: name.into(), f }) }
    }

    pub fn eval(&self, a: &Element, b: &Element) -> Result<Rational> {
        match &self.backing {
            InnerBacking::Dot => match (a, b) {
                (Element::Vector(x), Element::Vector(y)) if x.len() == y.len() => Ok(vector::dot(x, y)),
                _ => Err(Error::Domain(format!("dot product needs two vectors of equal length, got {a} and {b}"))),
            },
            InnerBacking::Table(cells) => cells
                .get(&(a.clone(), b.clone()))
                .cloned()
                .ok_or_else(|| Error::Malformed(format!("no inner product value for ({a}, {b})"))),
            InnerBacking::Rule(r) => Ok((r.f)(a, b)),
        }
    }
}

#[derive(Clone, Debug)]
pub enum NormBacking {
    /// `max |xᵢ|` on rational vectors.
    Max,
    Table(Arc<BTreeMap<Element, Rational>>),
    Rule(Rule<UnaryFn>),
}

/// `‖·‖ : V -> Q`.
#[derive(Clone, Debug)]
pub struct Norm {
    pub backing: NormBacking,
}

impl Norm {
    pub fn max() -> Self {
        Norm { backing: NormBacking::Max }
    }

    pub fn table(values: BTreeMap<Element, Rational>) -> Self {
        Norm { backing: NormBacking::Table(Arc::new(values)) }
    }

    pub fn rule<F>(name: impl Into<String>, f: F) -> Self
    where
        F: Fn(&Element) -> Rational + Send + Sync + 'static,
    {
        let f: Arc<UnaryFn> = Arc::new(f);
        Norm { backing: NormBacking::Rule(Rule { name: name.into(), f }) }
    }

    pub fn eval(&self, a: &Element) -> Result<Rational> {
        match &self.backing {
            NormBacking::Max => match a {
                Element::Vector(x) => Ok(x.iter().map(|c| c.abs()).max().unwrap_or_else(Rational::zero)),
                _ => Err(Error::Domain(format!("max norm needs a vector, got {a}"))),
            },
            NormBacking::Table(values) => {
                values.get(a).cloned().ok_or_else(|| Error::Malformed(format!("no norm value for {a}")))
            }
            NormBacking::Rule(r) => Ok((r.f)(a)),
        }
    }
}

/// Exact maximum of a finite non-empty set of rationals, with the
/// arguments that attain it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupValue {
    pub value: Rational,
    pub attained_at: Vec<Element>,
}

impl fmt::Display for SupValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// `sup { g(x) : x ∈ set }`. Ties go to the canonically least `x`.
pub fn sup_over<G>(set: &FiniteSet, mut g: G) -> Result<SupValue>
where
    G: FnMut(&Element) -> Result<Rational>,
{
    let mut best: Option<SupValue> = None;
    for x in set {
        let value = g(x)?;
        if best.as_ref().is_none_or(|b| value > b.value) {
            best = Some(SupValue { value, attained_at: vec![x.clone()] });
        }
    }
    best.ok_or_else(|| Error::Malformed("supremum over an empty set".into()))
}

/// `sup { g(x, y) : x ∈ left, y ∈ right }`.
pub fn sup_over_pairs<G>(left: &FiniteSet, right: &FiniteSet, mut g: G) -> Result<SupValue>
where
    G: FnMut(&Element, &Element) -> Result<Rational>,
{
    let mut best: Option<SupValue> = None;
    for x in left {
        for y in right {
            let value = g(x, y)?;
            if best.as_ref().is_none_or(|b| value > b.value) {
                best = Some(SupValue { value, attained_at: vec![x.clone(), y.clone()] });
            }
        }
    }
    best.ok_or_else(|| Error::Malformed("supremum over an empty set".into()))
}

fn scalar_abs(w: &HyperVectorSpace, a: &Element) -> Result<Rational> {
    if let Some(q) = a.as_rational() {
        return Ok(q.abs());
    }
    w.scalars.abs(a).ok_or_else(|| Error::Precondition(format!("no absolute value declared for scalar {a}")))
}

fn scalar_value(a: &Element) -> Result<Rational> {
    a.as_rational()
        .cloned()
        .ok_or_else(|| Error::Precondition(format!("inner-product scaling needs rational scalars, got {a}")))
}

fn with_theta(w: &HyperVectorSpace, vectors: &[Element]) -> Result<Vec<Element>> {
    let theta = w.theta()?;
    let mut out = vectors.to_vec();
    if !out.contains(theta) {
        out.push(theta.clone());
    }
    Ok(out)
}

fn collect(found: Vec<Violation>, opts: &CheckOptions) -> Vec<Violation> {
    let mut log = ViolationLog::new(opts.max_violations);
    log.extend(found);
    log.into_vec()
}

/// Nonnegativity, `‖α‖ = 0 ⟺ α = θ`, `sup ‖α#β‖ ≤ ‖α‖ + ‖β‖` and
/// `sup ‖a*α‖ ≤ |a|‖α‖` on the samples. The zero vector is always included.
pub fn check_norm_axioms(
    w: &HyperVectorSpace,
    norm: &Norm,
    samples: &Samples,
    opts: &CheckOptions,
) -> Result<Vec<Violation>> {
    let theta = w.theta()?.clone();
    let vectors = with_theta(w, &samples.vectors)?;
    let abs: Vec<Rational> = samples.scalars.iter().map(|a| scalar_abs(w, a)).collect::<Result<_>>()?;
    let found = par_violations(&vectors, opts.jobs, |alpha| {
        let mut out = Vec::new();
        let na = norm.eval(alpha)?;
        if na.is_negative() {
            out.push(Violation::new(axiom::NORM_NONNEG, vec![alpha.clone()], na.clone(), Rational::zero()));
        }
        if na.is_zero() != (*alpha == theta) {
            out.push(Violation::new(axiom::NORM_ZERO, vec![alpha.clone()], na.clone(), Rational::zero()));
        }
        for beta in &vectors {
            let sup = sup_over(&w.add().apply(alpha, beta)?, |x| norm.eval(x))?;
            let bound = &na + norm.eval(beta)?;
            if sup.value > bound {
                out.push(Violation::new(axiom::NORM_TRIANGLE, vec![alpha.clone(), beta.clone()], sup.value, bound));
            }
        }
        for (a, abs_a) in samples.scalars.iter().zip(&abs) {
            let sup = sup_over(&w.star(a, alpha)?, |x| norm.eval(x))?;
            let bound = abs_a * &na;
            if sup.value > bound {
                out.push(Violation::new(axiom::NORM_HOMOGENEOUS, vec![a.clone(), alpha.clone()], sup.value, bound));
            }
        }
        Ok(out)
    })?;
    Ok(collect(found, opts))
}

/// Positivity, `⟨α,α⟩ = 0 ⟺ α = θ`, symmetry, `sup⟨α#β,γ⟩ = ⟨α,γ⟩ + ⟨β,γ⟩`
/// and `sup⟨a*α,β⟩ = a⟨α,β⟩`, exactly, on all sampled tuples. The zero
/// vector is always included.
pub fn check_inner_axioms(
    w: &HyperVectorSpace,
    ip: &InnerProduct,
    samples: &Samples,
    opts: &CheckOptions,
) -> Result<Vec<Violation>> {
    let theta = w.theta()?.clone();
    let vectors = with_theta(w, &samples.vectors)?;
    let scalars: Vec<Rational> = samples.scalars.iter().map(scalar_value).collect::<Result<_>>()?;
    let found = par_violations(&vectors, opts.jobs, |alpha| {
        let mut out = Vec::new();
        let aa = ip.eval(alpha, alpha)?;
        if *alpha != theta && !aa.is_positive() {
            out.push(Violation::new(axiom::IP_POSITIVE, vec![alpha.clone()], aa.clone(), Rational::zero()));
        }
        if aa.is_zero() != (*alpha == theta) {
            out.push(Violation::new(axiom::IP_ZERO, vec![alpha.clone()], aa.clone(), Rational::zero()));
        }
        for beta in &vectors {
            let ab = ip.eval(alpha, beta)?;
            let ba = ip.eval(beta, alpha)?;
            if ab != ba {
                out.push(Violation::new(axiom::IP_SYMMETRIC, vec![alpha.clone(), beta.clone()], ab.clone(), ba));
            }
            let sum = w.add().apply(alpha, beta)?;
            for gamma in &vectors {
                let sup = sup_over(&sum, |d| ip.eval(d, gamma))?;
                let expect = ip.eval(alpha, gamma)? + ip.eval(beta, gamma)?;
                if sup.value != expect {
                    out.push(Violation::new(
                        axiom::IP_ADDITIVE,
                        vec![alpha.clone(), beta.clone(), gamma.clone()],
                        sup.value,
                        expect,
                    ));
                }
            }
            for (a, q) in samples.scalars.iter().zip(&scalars) {
                let sup = sup_over(&w.star(a, alpha)?, |x| ip.eval(x, beta))?;
                let expect = q * &ab;
                if sup.value != expect {
                    out.push(Violation::new(
                        axiom::IP_HOMOGENEOUS,
                        vec![a.clone(), alpha.clone(), beta.clone()],
                        sup.value,
                        expect,
                    ));
                }
            }
        }
        Ok(out)
    })?;
    Ok(collect(found, opts))
}

/// The right-hand forms of the inner-product axioms:
/// `sup⟨α,β#γ⟩ = ⟨α,β⟩ + ⟨α,γ⟩`, `sup⟨α,a*β⟩ = a⟨α,β⟩` and
/// `⟨α,θ⟩ = ⟨θ,α⟩ = 0`.
pub fn check_inner_consequences(
    w: &HyperVectorSpace,
    ip: &InnerProduct,
    samples: &Samples,
    opts: &CheckOptions,
) -> Result<Vec<Violation>> {
    let theta = w.theta()?.clone();
    let vectors = with_theta(w, &samples.vectors)?;
    let scalars: Vec<Rational> = samples.scalars.iter().map(scalar_value).collect::<Result<_>>()?;
    let found = par_violations(&vectors, opts.jobs, |alpha| {
        let mut out = Vec::new();
        for (l, r) in [(alpha, &theta), (&theta, alpha)] {
            let v = ip.eval(l, r)?;
            if !v.is_zero() {
                out.push(Violation::new(axiom::IP_THETA, vec![l.clone(), r.clone()], v, Rational::zero()));
            }
        }
        for beta in &vectors {
            let ab = ip.eval(alpha, beta)?;
            for gamma in &vectors {
                let sup = sup_over(&w.add().apply(beta, gamma)?, |d| ip.eval(alpha, d))?;
                let expect = &ab + ip.eval(alpha, gamma)?;
                if sup.value != expect {
                    out.push(Violation::new(
                        axiom::IP_RIGHT_ADDITIVE,
                        vec![alpha.clone(), beta.clone(), gamma.clone()],
                        sup.value,
                        expect,
                    ));
                }
            }
            for (a, q) in samples.scalars.iter().zip(&scalars) {
                let sup = sup_over(&w.star(a, beta)?, |x| ip.eval(alpha, x))?;
                let expect = q * &ab;
                if sup.value != expect {
                    out.push(Violation::new(
                        axiom::IP_RIGHT_HOMOGENEOUS,
                        vec![a.clone(), alpha.clone(), beta.clone()],
                        sup.value,
                        expect,
                    ));
                }
            }
        }
        Ok(out)
    })?;
    Ok(collect(found, opts))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearExpansion {
    /// `sup ⟨x, y⟩` over `x ∈ α#(a*β)`, `y ∈ γ#(b*δ)`.
    pub enumerated: SupValue,
    /// `⟨α,γ⟩ + a⟨β,γ⟩ + b⟨α,δ⟩ + ab⟨β,δ⟩`.
    pub formula: Rational,
}

impl BilinearExpansion {
    pub fn agrees(&self) -> bool {
        self.enumerated.value == self.formula
    }
}

/// Both sides of the bilinear expansion of `sup⟨α#a*β, γ#b*δ⟩`.
#[allow(clippy::too_many_arguments)]
pub fn bilinear_expand(
    w: &HyperVectorSpace,
    ip: &InnerProduct,
    alpha: &Element,
    a: &Element,
    beta: &Element,
    gamma: &Element,
    b: &Element,
    delta: &Element,
) -> Result<BilinearExpansion> {
    let left = w.add().apply_point_set(alpha, &w.star(a, beta)?)?;
    let right = w.add().apply_point_set(gamma, &w.star(b, delta)?)?;
    let enumerated = sup_over_pairs(&left, &right, |x, y| ip.eval(x, y))?;
    let (qa, qb) = (scalar_value(a)?, scalar_value(b)?);
    let formula = ip.eval(alpha, gamma)?
        + &qa * ip.eval(beta, gamma)?
        + &qb * ip.eval(alpha, delta)?
        + &qa * &qb * ip.eval(beta, delta)?;
    Ok(BilinearExpansion { enumerated, formula })
}

/// Bilinear expansion on every sampled `(α, a, β, γ, b, δ)` produced by `tuples`.
pub fn check_bilinear(
    w: &HyperVectorSpace,
    ip: &InnerProduct,
    tuples: &[[Element; 6]],
    opts: &CheckOptions,
) -> Result<Vec<Violation>> {
    let found = par_violations(tuples, opts.jobs, |t| {
        let e = bilinear_expand(w, ip, &t[0], &t[1], &t[2], &t[3], &t[4], &t[5])?;
        Ok(if e.agrees() {
            vec![]
        } else {
            vec![Violation::new(axiom::IP_BILINEAR, t.to_vec(), e.enumerated.value, e.formula)]
        })
    })?;
    Ok(collect(found, opts))
}

/// `f(α) = √⟨α,α⟩`, held as its exact square.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct InducedNorm {
    pub square: Rational,
}

impl InducedNorm {
    /// `f(α)` itself when the square is a perfect rational square.
    pub fn exact_root(&self) -> Option<Rational> {
        exact_sqrt(&self.square)
    }
}

impl fmt::Display for InducedNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exact_root() {
            Some(r) => write!(f, "{r}"),
            None => write!(f, "√({})", self.square),
        }
    }
}

fn exact_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let root = |n: &BigInt| {
        let r = n.sqrt();
        (&r * &r == *n).then_some(r)
    };
    Some(Rational::new(root(q.numer())?, root(q.denom())?))
}

pub fn induced_norm(ip: &InnerProduct, alpha: &Element) -> Result<InducedNorm> {
    let square = ip.eval(alpha, alpha)?;
    if square.is_negative() {
        return Err(Error::Malformed(format!("⟨{alpha}, {alpha}⟩ = {square} is negative")));
    }
    Ok(InducedNorm { square })
}

/// `√s ≤ √A + √B` for nonnegative `s, A, B`, decided without roots:
/// equivalent to `s - A - B ≤ 2√(AB)`.
pub fn sqrt_sum_bound_holds(s: &Rational, a: &Rational, b: &Rational) -> bool {
    let d = s - a - b;
    if !d.is_positive() {
        return true;
    }
    &d * &d <= Rational::from_integer(4.into()) * a * b
}

/// `⟨α,β⟩² ≤ ⟨α,α⟩⟨β,β⟩` on every pair.
pub fn check_cauchy_schwarz(
    ip: &InnerProduct,
    pairs: &[(Element, Element)],
    opts: &CheckOptions,
) -> Result<Vec<Violation>> {
    let found = par_violations(pairs, opts.jobs, |(a, b)| {
        let ab = ip.eval(a, b)?;
        let left = &ab * &ab;
        let right = ip.eval(a, a)? * ip.eval(b, b)?;
        Ok(if left > right {
            vec![Violation::new(axiom::CAUCHY_SCHWARZ, vec![a.clone(), b.clone()], left, right)]
        } else {
            vec![]
        })
    })?;
    Ok(collect(found, opts))
}

/// The four norm axioms for the induced norm `f`, in squared form.
/// The triangle inequality compares `sup_{x∈α#β} ⟨x,x⟩` with
/// `(f(α)+f(β))²`; homogeneity compares `sup_{x∈a*α} ⟨x,x⟩` with `a²⟨α,α⟩`.
pub fn check_induced_norm(
    w: &HyperVectorSpace,
    ip: &InnerProduct,
    samples: &Samples,
    opts: &CheckOptions,
) -> Result<Vec<Violation>> {
    let theta = w.theta()?.clone();
    let vectors = with_theta(w, &samples.vectors)?;
    let abs: Vec<Rational> = samples.scalars.iter().map(|a| scalar_abs(w, a)).collect::<Result<_>>()?;
    let found = par_violations(&vectors, opts.jobs, |alpha| {
        let mut out = Vec::new();
        let aa = ip.eval(alpha, alpha)?;
        if aa.is_negative() {
            out.push(Violation::new(axiom::INDUCED_NONNEG, vec![alpha.clone()], aa.clone(), Rational::zero()));
        }
        if aa.is_zero() != (*alpha == theta) {
            out.push(Violation::new(axiom::INDUCED_ZERO, vec![alpha.clone()], aa.clone(), Rational::zero()));
        }
        for beta in &vectors {
            let bb = ip.eval(beta, beta)?;
            let sup = sup_over(&w.add().apply(alpha, beta)?, |x| ip.eval(x, x))?;
            if !sqrt_sum_bound_holds(&sup.value, &aa, &bb) {
                out.push(Violation::new(
                    axiom::INDUCED_TRIANGLE,
                    vec![alpha.clone(), beta.clone()],
                    sup.value,
                    aa.clone() + bb,
                ));
            }
        }
        for (a, abs_a) in samples.scalars.iter().zip(&abs) {
            let sup = sup_over(&w.star(a, alpha)?, |x| ip.eval(x, x))?;
            let bound = abs_a * abs_a * &aa;
            if sup.value > bound {
                out.push(Violation::new(axiom::INDUCED_HOMOGENEOUS, vec![a.clone(), alpha.clone()], sup.value, bound));
            }
        }
        Ok(out)
    })?;
    Ok(collect(found, opts))
}

/// `(sup ‖α#β‖² + sup ‖α#(-β)‖², 2‖α‖² + 2‖β‖²)` with the induced norm.
pub fn parallelogram_sides(
    w: &HyperVectorSpace,
    ip: &InnerProduct,
    alpha: &Element,
    beta: &Element,
) -> Result<(Rational, Rational)> {
    let neg_beta = w.neg_vector(beta)?;
    let plus = sup_over(&w.add().apply(alpha, beta)?, |x| ip.eval(x, x))?;
    let minus = sup_over(&w.add().apply(alpha, &neg_beta)?, |x| ip.eval(x, x))?;
    let two = Rational::from_integer(2.into());
    let rhs = &two * ip.eval(alpha, alpha)? + &two * ip.eval(beta, beta)?;
    Ok((plus.value + minus.value, rhs))
}

pub fn check_parallelogram(
    w: &HyperVectorSpace,
    ip: &InnerProduct,
    pairs: &[(Element, Element)],
    opts: &CheckOptions,
) -> Result<Vec<Violation>> {
    let found = par_violations(pairs, opts.jobs, |(a, b)| {
        let (lhs, rhs) = parallelogram_sides(w, ip, a, b)?;
        Ok(if lhs > rhs {
            vec![Violation::new(axiom::PARALLELOGRAM, vec![a.clone(), b.clone()], lhs, rhs)]
        } else {
            vec![]
        })
    })?;
    Ok(collect(found, opts))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orthogonality {
    pub orthogonal: bool,
    pub orthonormal: bool,
    /// First distinct pair with nonzero inner product.
    pub non_orthogonal_pair: Option<(Element, Element)>,
    /// First member with `⟨α,α⟩ ≠ 1`.
    pub non_unit: Option<Element>,
}

pub fn orthogonality(ip: &InnerProduct, set: &[Element]) -> Result<Orthogonality> {
    let mut pair = None;
    'outer: for (i, a) in set.iter().enumerate() {
        for b in &set[i + 1..] {
            if a != b && !ip.eval(a, b)?.is_zero() {
                pair = Some((a.clone(), b.clone()));
                break 'outer;
            }
        }
    }
    let mut non_unit = None;
    for a in set {
        if ip.eval(a, a)? != Rational::from_integer(1.into()) {
            non_unit = Some(a.clone());
            break;
        }
    }
    let orthogonal = pair.is_none();
    Ok(Orthogonality { orthogonal, orthonormal: orthogonal && non_unit.is_none(), non_orthogonal_pair: pair, non_unit })
}

pub fn is_orthogonal_set(ip: &InnerProduct, set: &[Element]) -> Result<bool> {
    Ok(orthogonality(ip, set)?.orthogonal)
}

pub fn is_orthonormal_set(ip: &InnerProduct, set: &[Element]) -> Result<bool> {
    Ok(orthogonality(ip, set)?.orthonormal)
}

/// A non-null orthogonal set should be weakly independent; any
/// counterexample in the result is a finding against the structure.
pub fn check_orthogonal_weak_independence(
    w: &HyperVectorSpace,
    ip: &InnerProduct,
    set: &[Element],
    pool: &CoefficientPool,
    universe: &VectorUniverse,
    universe_cap: usize,
) -> Result<WeakIndependence> {
    let theta = w.theta()?;
    if set.contains(theta) {
        return Err(Error::Precondition("orthogonal set contains the zero vector".into()));
    }
    if let Some((a, b)) = orthogonality(ip, set)?.non_orthogonal_pair {
        return Err(Error::Precondition(format!("{a} and {b} are not orthogonal")));
    }
    is_weak_linearly_independent(w, set, pool, universe, universe_cap)
}

/// `λᵢ = ⟨α,αᵢ⟩ / ⟨αᵢ,αᵢ⟩` for an orthogonal set of nonzero vectors.
pub fn fourier_coefficients(ip: &InnerProduct, alpha: &Element, set: &[Element]) -> Result<Vec<Element>> {
    if let Some((a, b)) = orthogonality(ip, set)?.non_orthogonal_pair {
        return Err(Error::Precondition(format!("{a} and {b} are not orthogonal")));
    }
    set.iter()
        .map(|ai| {
            let nn = ip.eval(ai, ai)?;
            if nn.is_zero() {
                return Err(Error::Precondition(format!("⟨{ai}, {ai}⟩ = 0; the set contains the zero vector")));
            }
            Ok(Element::Rational(ip.eval(alpha, ai)? / nn))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FourierCheck {
    pub coefficients: Vec<Element>,
    pub combination: FiniteSet,
    /// `α ∈ λ₁*α₁ # … # λₙ*αₙ`.
    pub reconstructs: bool,
}

pub fn check_fourier_representation(
    w: &HyperVectorSpace,
    ip: &InnerProduct,
    alpha: &Element,
    set: &[Element],
) -> Result<FourierCheck> {
    let coefficients = fourier_coefficients(ip, alpha, set)?;
    let combination = linear_combination(w, &coefficients, set)?;
    let reconstructs = combination.contains(alpha);
    Ok(FourierCheck { coefficients, combination, reconstructs })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramSchmidtStep {
    /// Position `k` in the input, from 0.
    pub index: usize,
    /// `⟨wₖ,vⱼ⟩ / ⟨vⱼ,vⱼ⟩` for each earlier `vⱼ`.
    pub coefficients: Vec<Rational>,
    /// `T`, the combination of the earlier `vⱼ`.
    pub correction: FiniteSet,
    /// `Cₖ = {wₖ} # (-T)`.
    pub candidates: FiniteSet,
    pub chosen: Element,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramSchmidt {
    pub vectors: Vec<Element>,
    pub steps: Vec<GramSchmidtStep>,
}

/// Set-valued Gram–Schmidt. `v₁ = w₁`; for later `k`, `vₖ` is the
/// canonically least element of `{wₖ} # (-T)` with nonzero `⟨v,v⟩`, where
/// `T` is the combination of `v₁..vₖ₋₁` with coefficients `⟨wₖ,vⱼ⟩/⟨vⱼ,vⱼ⟩`.
pub fn gram_schmidt(w: &HyperVectorSpace, ip: &InnerProduct, input: &[Element]) -> Result<GramSchmidt> {
    let mut vectors: Vec<Element> = Vec::with_capacity(input.len());
    let mut norms: Vec<Rational> = Vec::with_capacity(input.len());
    let mut steps = Vec::with_capacity(input.len());
    for (k, wk) in input.iter().enumerate() {
        w.vectors.carrier().check(wk)?;
        let (coefficients, correction, candidates) = if k == 0 {
            (vec![], FiniteSet::new(), FiniteSet::singleton(wk.clone()))
        } else {
            let coefficients: Vec<Rational> =
                vectors.iter().zip(&norms).map(|(vj, nj)| Ok(ip.eval(wk, vj)? / nj)).collect::<Result<_>>()?;
            let scalars: Vec<Element> = coefficients.iter().cloned().map(Element::Rational).collect();
            let correction = linear_combination(w, &scalars, &vectors)?;
            let mut negated = FiniteSet::new();
            for x in &correction {
                negated.insert(w.neg_vector(x)?);
            }
            let candidates = w.add().apply_point_set(wk, &negated)?;
            (coefficients, correction, candidates)
        };
        let mut chosen = None;
        for c in &candidates {
            let n = ip.eval(c, c)?;
            if !n.is_zero() {
                chosen = Some((c.clone(), n));
                break;
            }
        }
        let Some((vk, nk)) = chosen else {
            return Err(Error::NotIndependent(format!(
                "every candidate for position {} has zero norm: {candidates}",
                k + 1
            )));
        };
        steps.push(GramSchmidtStep { index: k, coefficients, correction, candidates, chosen: vk.clone() });
        vectors.push(vk);
        norms.push(nk);
    }
    Ok(GramSchmidt { vectors, steps })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeReach {
    pub probe: Element,
    pub over_original: Option<Vec<Element>>,
    pub over_orthogonalized: Option<Vec<Element>>,
}

impl ProbeReach {
    pub fn agrees(&self) -> bool {
        self.over_original.is_some() == self.over_orthogonalized.is_some()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanAgreement {
    /// Every probe is reachable over both lists or over neither.
    pub agrees: bool,
    pub probes: Vec<ProbeReach>,
}

/// `pool` widened by the Fourier coefficients of each probe over the
/// orthogonal `set`. Span agreement then turns on membership in the
/// combination, not on whether the pool happens to hold the coordinates.
pub fn widen_pool_by_fourier(
    w: &HyperVectorSpace,
    ip: &InnerProduct,
    pool: &CoefficientPool,
    set: &[Element],
    probes: &[Element],
) -> Result<CoefficientPool> {
    let mut extra = Vec::new();
    for p in probes {
        extra.extend(fourier_coefficients(ip, p, set)?);
    }
    pool.extended(w, extra)
}

/// Pool-bounded comparison of the spans of `original` and `orthogonalized`
/// at each probe.
pub fn check_span_preserved(
    w: &HyperVectorSpace,
    original: &[Element],
    orthogonalized: &[Element],
    pool: &CoefficientPool,
    probes: &[Element],
) -> Result<SpanAgreement> {
    let probes = probes
        .iter()
        .map(|p| {
            Ok(ProbeReach {
                probe: p.clone(),
                over_original: find_representation(w, original, p, pool)?,
                over_orthogonalized: find_representation(w, orthogonalized, p, pool)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SpanAgreement { agrees: probes.iter().all(ProbeReach::agrees), probes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::element::{integer, rational};
    use crate::hyperspace::{StarOp, DEFAULT_UNIVERSE_CAP};

    fn v(x: i64, y: i64) -> Element {
        Element::vector([x, y])
    }

    fn q(i: i64) -> Element {
        Element::int(i)
    }

    fn trivial() -> HyperVectorSpace {
        HyperVectorSpace::rational(2, StarOp::scale())
    }

    fn cone() -> HyperVectorSpace {
        HyperVectorSpace::rational(2, StarOp::cone())
    }

    fn grid() -> Samples {
        Samples::new(
            vec![q(-2), q(-1), q(0), Element::ratio(1, 2), q(1), q(2), q(3)],
            vec![v(0, 0), v(1, 0), v(0, 1), v(1, 1), v(-1, 2), Element::Vector(vec![rational(1, 2), integer(-1)])],
        )
    }

    #[test]
    fn max_norm_on_trivial_and_cone() {
        for w in [trivial(), cone()] {
            assert!(check_norm_axioms(&w, &Norm::max(), &grid(), &CheckOptions::default()).unwrap().is_empty());
        }
    }

    #[test]
    fn mutated_norm_fails_zero_axiom() {
        let norm = Norm::rule("shifted", |x| {
            let base = Norm::max().eval(x).unwrap();
            if base.is_zero() {
                integer(1)
            } else {
                base
            }
        });
        let vs = check_norm_axioms(&trivial(), &norm, &grid(), &CheckOptions::default()).unwrap();
        let zero: Vec<_> = vs.iter().filter(|x| x.axiom == axiom::NORM_ZERO).collect();
        assert_eq!(zero.len(), 1);
        assert_eq!(zero[0].witness, vec![v(0, 0)]);
    }

    #[test]
    fn dot_on_trivial_passes_and_cone_fails_homogeneity() {
        let opts = CheckOptions::with_cap(1000);
        assert!(check_inner_axioms(&trivial(), &InnerProduct::dot(), &grid(), &opts).unwrap().is_empty());
        let samples = Samples::new(vec![q(1)], vec![v(1, 0), v(-1, 0)]);
        let vs = check_inner_axioms(&cone(), &InnerProduct::dot(), &samples, &opts).unwrap();
        let hit = vs
            .iter()
            .find(|x| x.axiom == axiom::IP_HOMOGENEOUS && x.witness == vec![q(1), v(1, 0), v(-1, 0)])
            .expect("cone witness");
        assert_eq!(hit.left, integer(0).into());
        assert_eq!(hit.right, integer(-1).into());
    }

    #[test]
    fn skew_product_breaks_symmetry() {
        let skew = InnerProduct::rule("skew", |a, b| {
            let (x, y) = (a.as_vector().unwrap(), b.as_vector().unwrap());
            vector::dot(x, y) + &x[0] * &y[1] - &x[1] * &y[0]
        });
        let samples = Samples::new(vec![q(1)], vec![v(1, 0), v(0, 1)]);
        let vs = check_inner_axioms(&trivial(), &skew, &samples, &CheckOptions::default()).unwrap();
        let sym = vs.iter().find(|x| x.axiom == axiom::IP_SYMMETRIC).unwrap();
        assert_eq!(sym.witness, vec![v(1, 0), v(0, 1)]);
        assert_eq!((sym.left.clone(), sym.right.clone()), (integer(1).into(), integer(-1).into()));
    }

    #[test]
    fn right_forms_and_theta() {
        let w = trivial();
        let ip = InnerProduct::dot();
        assert!(check_inner_consequences(&w, &ip, &grid(), &CheckOptions::default()).unwrap().is_empty());
        let sum = w.add().apply(&v(3, 4), &v(5, 6)).unwrap();
        assert_eq!(sup_over(&sum, |d| ip.eval(&v(1, 2), d)).unwrap().value, integer(28));
        assert_eq!(sup_over(&w.star(&q(0), &v(3, 1)).unwrap(), |d| ip.eval(&v(1, 2), d)).unwrap().value, integer(0));
    }

    #[test]
    fn bilinear_examples() {
        let w = trivial();
        let ip = InnerProduct::dot();
        let e = bilinear_expand(&w, &ip, &v(1, 0), &q(2), &v(0, 1), &v(1, 1), &q(3), &v(1, -1)).unwrap();
        assert_eq!(e.formula, integer(0));
        assert_eq!(e.enumerated.value, integer(0));
        assert_eq!(e.enumerated.attained_at, vec![v(1, 2), v(4, -2)]);
        let e = bilinear_expand(&w, &ip, &v(0, 0), &q(2), &v(1, 3), &v(0, 0), &q(5), &v(2, 1)).unwrap();
        assert_eq!(e.formula, integer(50));
        assert!(e.agrees());
    }

    #[test]
    fn induced_norm_roots() {
        let ip = InnerProduct::dot();
        assert_eq!(induced_norm(&ip, &v(3, 4)).unwrap().exact_root(), Some(integer(5)));
        assert_eq!(induced_norm(&ip, &v(0, 0)).unwrap().exact_root(), Some(integer(0)));
        let n = induced_norm(&ip, &v(1, 1)).unwrap();
        assert_eq!(n.square, integer(2));
        assert_eq!(n.exact_root(), None);
        assert_eq!(n.to_string(), "√(2)");
        assert_eq!(exact_sqrt(&rational(9, 4)), Some(rational(3, 2)));
        let neg = InnerProduct::rule("neg", |_, _| integer(-1));
        assert!(matches!(induced_norm(&neg, &v(1, 0)), Err(Error::Malformed(_))));
    }

    #[test]
    fn root_free_triangle_decision() {
        // √9 ≤ √4 + √1 fails; √9 ≤ √4 + √4 holds; √8 ≤ √2 + √2 holds with equality
        assert!(!sqrt_sum_bound_holds(&integer(10), &integer(4), &integer(1)));
        assert!(sqrt_sum_bound_holds(&integer(9), &integer(4), &integer(4)));
        assert!(sqrt_sum_bound_holds(&integer(8), &integer(2), &integer(2)));
        assert!(!sqrt_sum_bound_holds(&rational(81, 10), &integer(2), &integer(2)));
    }

    #[test]
    fn cauchy_schwarz_examples() {
        let ip = InnerProduct::dot();
        let pairs = vec![(v(1, 0), v(0, 1)), (v(1, 1), v(1, 1)), (v(1, 2), v(3, 4))];
        assert!(check_cauchy_schwarz(&ip, &pairs, &CheckOptions::default()).unwrap().is_empty());
        let bad = InnerProduct::rule("bad", |a, b| if a == b { integer(1) } else { integer(5) });
        assert_eq!(check_cauchy_schwarz(&bad, &[(v(1, 0), v(0, 1))], &CheckOptions::default()).unwrap().len(), 1);
    }

    #[test]
    fn induced_norm_axioms_on_fixtures() {
        let ip = InnerProduct::dot();
        assert!(check_induced_norm(&trivial(), &ip, &grid(), &CheckOptions::default()).unwrap().is_empty());
        let w = trivial();
        let sup = sup_over(&w.star(&q(2), &v(1, 0)).unwrap(), |x| ip.eval(x, x)).unwrap();
        assert_eq!(sup.value, integer(4));
    }

    #[test]
    fn parallelogram_examples() {
        let w = trivial();
        let ip = InnerProduct::dot();
        assert_eq!(parallelogram_sides(&w, &ip, &v(1, 0), &v(0, 1)).unwrap(), (integer(4), integer(4)));
        assert_eq!(parallelogram_sides(&w, &ip, &v(1, 1), &v(1, 1)).unwrap(), (integer(8), integer(8)));
        assert_eq!(parallelogram_sides(&w, &ip, &v(2, 3), &v(0, 0)).unwrap(), (integer(26), integer(26)));
    }

    #[test]
    fn orthogonality_examples() {
        let ip = InnerProduct::dot();
        let o = orthogonality(&ip, &[v(1, 1), v(1, -1)]).unwrap();
        assert!(o.orthogonal && !o.orthonormal);
        assert!(is_orthonormal_set(&ip, &[v(1, 0), v(0, 1)]).unwrap());
        let o = orthogonality(&ip, &[v(1, 0), v(1, 1)]).unwrap();
        assert_eq!(o.non_orthogonal_pair, Some((v(1, 0), v(1, 1))));
    }

    #[test]
    fn orthogonal_sets_are_weakly_independent() {
        let w = trivial();
        let ip = InnerProduct::dot();
        let pool = CoefficientPool::new(&w, [q(-1), q(0), q(1)]).unwrap();
        let universe = VectorUniverse::new(&w, [v(1, 1), v(1, -1)]).unwrap();
        let r =
            check_orthogonal_weak_independence(&w, &ip, &[v(1, 1), v(1, -1)], &pool, &universe, DEFAULT_UNIVERSE_CAP);
        assert!(r.unwrap().independent);
        let pool = CoefficientPool::new(&w, [q(0), q(1)]).unwrap();
        let universe = VectorUniverse::new(&w, [v(1, 0)]).unwrap();
        assert!(check_orthogonal_weak_independence(&w, &ip, &[v(1, 0)], &pool, &universe, 12).unwrap().independent);
        assert!(matches!(
            check_orthogonal_weak_independence(&w, &ip, &[v(1, 0), v(0, 0)], &pool, &universe, 12),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn fourier_examples() {
        let w = trivial();
        let ip = InnerProduct::dot();
        let s = [v(1, 1), v(1, -1)];
        let f = check_fourier_representation(&w, &ip, &v(3, 5), &s).unwrap();
        assert_eq!(f.coefficients, vec![q(4), q(-1)]);
        assert!(f.reconstructs);
        assert_eq!(fourier_coefficients(&ip, &v(0, 0), &s).unwrap(), vec![q(0), q(0)]);
        assert_eq!(fourier_coefficients(&ip, &v(1, 0), &[v(1, 0), v(0, 1)]).unwrap(), vec![q(1), q(0)]);
        assert!(fourier_coefficients(&ip, &v(1, 0), &[v(1, 0), v(0, 0)]).is_err());
    }

    #[test]
    fn gram_schmidt_examples() {
        let w = trivial();
        let ip = InnerProduct::dot();
        let g = gram_schmidt(&w, &ip, &[v(1, 1), v(1, 0)]).unwrap();
        assert_eq!(g.vectors, vec![v(1, 1), Element::Vector(vec![rational(1, 2), rational(-1, 2)])]);
        assert_eq!(g.steps[1].coefficients, vec![rational(1, 2)]);

        let g = gram_schmidt(&w, &ip, &[v(1, 1), v(1, -1)]).unwrap();
        assert_eq!(g.vectors, vec![v(1, 1), v(1, -1)]);
        assert_eq!(g.steps[1].coefficients, vec![integer(0)]);

        let err = gram_schmidt(&w, &ip, &[v(1, 0), v(2, 0)]).unwrap_err();
        assert!(matches!(err, Error::NotIndependent(_)));
        assert!(err.to_string().contains("input not linearly independent"));
        assert!(matches!(gram_schmidt(&w, &ip, &[v(1, 0), v(0, 1), v(1, 1)]), Err(Error::NotIndependent(_))));
    }

    #[test]
    fn gram_schmidt_on_cone_picks_least_nonzero_candidate() {
        // cone: T contains θ, so C₂ holds w₂ itself alongside the classical value
        let w = cone();
        let g = gram_schmidt(&w, &InnerProduct::dot(), &[v(1, 1), v(1, 0)]).unwrap();
        let step = &g.steps[1];
        assert_eq!(step.candidates.len(), 2);
        assert_eq!(Some(&step.chosen), step.candidates.iter().find(|c| **c != v(0, 0)));
    }

    #[test]
    fn span_examples() {
        let w = trivial();
        let pool = CoefficientPool::new(&w, [q(1), q(2), q(-1), Element::ratio(3, 2)]).unwrap();
        let s = [v(1, 1), v(1, 0)];
        let s2 = [v(1, 1), Element::Vector(vec![rational(1, 2), rational(-1, 2)])];
        let r = check_span_preserved(&w, &s, &s2, &pool, &[v(2, 1), v(0, 0), v(7, 9)]).unwrap();
        assert!(r.agrees);
        assert_eq!(r.probes[0].over_original, Some(vec![q(1), q(1)]));
        assert_eq!(r.probes[0].over_orthogonalized, Some(vec![Element::ratio(3, 2), q(1)]));
        assert_eq!(r.probes[1].over_original, Some(vec![q(0), q(0)]));
        assert!(r.probes[2].over_original.is_none() && r.probes[2].over_orthogonalized.is_none());
    }
}
