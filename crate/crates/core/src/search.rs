//! Exhaustive finite-model search: hypergroup and hyperfield tables on small
//! carriers, and set-valued scalar actions on a finite window of `Q^d`.
//!
//! Tables are held as bitmasks (`cells[i * n + j]` has bit `k` set when
//! `k ∈ i # j`). Each search walks a mixed-radix index space, so the set of
//! tables examined under a budget is the same for any worker count.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::element::{Carrier, Element, FiniteSet, Rational};
use crate::error::{Error, Result};
use crate::hyperstructures::{check_hyperfield, check_hypergroup, Hyperfield, Hypergroup};
use crate::inner::{sup_over, InnerProduct};
use crate::setalg::{HyperOp, ScalarOp};
use crate::violation::{Violation, ViolationLog, DEFAULT_VIOLATION_CAP};

pub const HYPERGROUP_ORDER_CAP: usize = 4;
pub const HYPERFIELD_ORDER_CAP: usize = 3;
pub const STAR_DIMENSION_CAP: usize = 2;
pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SearchKind {
    Hypergroup,
    Hyperfield,
    Star,
}

impl SearchKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SearchKind::Hypergroup => "hypergroup",
            SearchKind::Hyperfield => "hyperfield",
            SearchKind::Star => "star",
        }
    }
}

impl fmt::Display for SearchKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SearchKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hypergroup" => Ok(SearchKind::Hypergroup),
            "hyperfield" => Ok(SearchKind::Hyperfield),
            "star" | "star-op" => Ok(SearchKind::Star),
            _ => Err(Error::Precondition(format!("unknown search kind {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchSpec {
    pub kind: SearchKind,
    /// Carrier size; elements are the atoms `0..order`.
    pub order: usize,
    /// Require `#` to be commutative. Always on for hyperfields.
    pub commutative: bool,
    pub zero: Option<usize>,
    pub one: Option<usize>,
    /// Maximum tables examined.
    pub budget: u64,
    pub jobs: usize,
    /// Symmetry and forced-cell pruning. Never changes the keys found.
    pub prune: bool,
    /// Cells of `#` pinned to a set.
    pub fixed_add: Vec<(usize, usize, Vec<usize>)>,
    /// Cells of `·` pinned to an element.
    pub fixed_mul: Vec<(usize, usize, usize)>,
}

impl SearchSpec {
    pub fn new(kind: SearchKind, order: usize) -> Self {
        let (zero, one) = match kind {
            SearchKind::Hyperfield => (Some(0), Some(1)),
            _ => (None, None),
        };
        SearchSpec {
            kind,
            order,
            commutative: kind == SearchKind::Hyperfield,
            zero,
            one,
            budget: DEFAULT_BUDGET,
            jobs: 1,
            prune: true,
            fixed_add: Vec::new(),
            fixed_mul: Vec::new(),
        }
    }

    pub fn commutative(mut self, yes: bool) -> Self {
        self.commutative = yes;
        self
    }

    pub fn zero(mut self, z: usize) -> Self {
        self.zero = Some(z);
        self
    }

    pub fn one(mut self, o: usize) -> Self {
        self.one = Some(o);
        self
    }

    pub fn budget(mut self, b: u64) -> Self {
        self.budget = b;
        self
    }

    pub fn jobs(mut self, j: usize) -> Self {
        self.jobs = j;
        self
    }

    pub fn prune(mut self, yes: bool) -> Self {
        self.prune = yes;
        self
    }

    pub fn fix_add(mut self, i: usize, j: usize, set: Vec<usize>) -> Self {
        self.fixed_add.push((i, j, set));
        self
    }

    pub fn fix_mul(mut self, i: usize, j: usize, k: usize) -> Self {
        self.fixed_mul.push((i, j, k));
        self
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.order;
        if n == 0 {
            return Err(Error::Precondition("search order must be at least 1".into()));
        }
        if self.budget == 0 {
            return Err(Error::Precondition("search budget must be positive".into()));
        }
        let cap = match self.kind {
            SearchKind::Hypergroup => HYPERGROUP_ORDER_CAP,
            SearchKind::Hyperfield => HYPERFIELD_ORDER_CAP,
            SearchKind::Star => STAR_DIMENSION_CAP,
        };
        if n > cap {
            return Err(Error::Budget(format!("{} search is capped at order {cap}, got {n}", self.kind)));
        }
        if self.kind == SearchKind::Hyperfield {
            if n < 2 {
                return Err(Error::Precondition(
                    "a hyperfield needs distinct zero and one, so order at least 2".into(),
                ));
            }
            match (self.zero, self.one) {
                (Some(z), Some(o)) if z != o => {}
                _ => return Err(Error::Precondition("hyperfield search needs distinct zero and one".into())),
            }
            if !self.commutative {
                return Err(Error::Precondition("hyperfield addition is always commutative".into()));
            }
        }
        for c in self.zero.iter().chain(&self.one) {
            if *c >= n {
                return Err(Error::Precondition(format!("constant {c} is outside 0..{n}")));
            }
        }
        for (i, j, set) in &self.fixed_add {
            if *i >= n || *j >= n || set.is_empty() || set.iter().any(|k| *k >= n) {
                return Err(Error::Precondition(format!("pinned cell {i} + {j} is out of range or empty")));
            }
        }
        for (i, j, k) in &self.fixed_mul {
            if *i >= n || *j >= n || *k >= n {
                return Err(Error::Precondition(format!("pinned cell {i} * {j} is out of range")));
            }
        }
        Ok(())
    }
}

/// One structure found by a search, in canonical labeling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub kind: SearchKind,
    pub order: usize,
    /// Minimal encoding over relabelings fixing the designated constants.
    pub key: String,
    /// Row-major bitmasks of `#`.
    pub add: Vec<u32>,
    /// Row-major table of `·`, for hyperfields.
    pub mul: Option<Vec<usize>>,
    pub zero: Option<usize>,
    pub one: Option<usize>,
    pub digest: String,
}

pub fn atom_names(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

fn atom_carrier(n: usize) -> Carrier {
    Carrier::atoms(&atom_names(n)).expect("distinct atom names")
}

fn mask_set(carrier: &Carrier, mask: u32) -> FiniteSet {
    let elems = carrier.elements().expect("finite");
    elems.iter().enumerate().filter(|(k, _)| mask & (1 << k) != 0).map(|(_, e)| e.clone()).collect()
}

fn add_op(n: usize, cells: &[u32]) -> Result<HyperOp> {
    let carrier = atom_carrier(n);
    let sets = cells.iter().map(|&m| mask_set(&carrier, m)).collect();
    HyperOp::table(carrier, sets)
}

fn mul_op(n: usize, cells: &[usize]) -> Result<ScalarOp> {
    let carrier = atom_carrier(n);
    let elems = carrier.elements().expect("finite").to_vec();
    ScalarOp::table(carrier, cells.iter().map(|&k| elems[k].clone()).collect())
}

impl CatalogEntry {
    pub fn element(&self, i: usize) -> Element {
        atom_carrier(self.order).elements().expect("finite")[i].clone()
    }

    /// The stored `#` as a hypergroup, with the designated zero when there is one.
    pub fn hypergroup(&self) -> Result<Hypergroup> {
        let commutative =
            self.add.iter().enumerate().all(|(c, &m)| m == self.add[(c % self.order) * self.order + c / self.order]);
        let h = Hypergroup::new(add_op(self.order, &self.add)?, commutative);
        Ok(match self.zero {
            Some(z) => h.with_zero(self.element(z)),
            None => h,
        })
    }

    pub fn hyperfield(&self) -> Result<Hyperfield> {
        let mul = self.mul.as_ref().ok_or_else(|| Error::Precondition("entry has no multiplication".into()))?;
        let (z, o) = self.zero.zip(self.one).ok_or_else(|| Error::Precondition("entry has no zero and one".into()))?;
        Ok(Hyperfield {
            add: add_op(self.order, &self.add)?,
            mul: mul_op(self.order, mul)?,
            zero: self.element(z),
            one: self.element(o),
            neg: None,
            inv: None,
            abs: None,
        })
    }

    /// Re-runs the axiom checker the entry was accepted by.
    pub fn replay(&self) -> Result<bool> {
        let opts = Default::default();
        match self.kind {
            SearchKind::Hypergroup => Ok(check_hypergroup(&self.hypergroup()?, &opts)?.is_hypergroup),
            SearchKind::Hyperfield => Ok(check_hyperfield(&self.hyperfield()?, &opts)?.is_hyperfield),
            SearchKind::Star => Err(Error::Precondition("star models are not catalog entries".into())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub kind: SearchKind,
    pub order: usize,
    /// Sorted by key.
    pub entries: Vec<CatalogEntry>,
    pub examined: u64,
    /// Size of the index space (additive tables, plus nested multiplications).
    pub space: u128,
    /// The budget ran out before the space was exhausted.
    pub partial: bool,
}

impl SearchOutcome {
    pub fn keys(&self) -> Vec<&str> {
        self.entries.iter().map(|e| e.key.as_str()).collect()
    }
}

/// Runs `visit` on indices `0..limit` on up to `jobs` threads, returning the
/// hits in index order.
fn scan<T, F>(limit: u64, jobs: usize, visit: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<Option<T>> + Sync,
{
    if jobs <= 1 || limit < 2 {
        let mut out = Vec::new();
        for i in 0..limit {
            if let Some(t) = visit(i)? {
                out.push(t);
            }
        }
        return Ok(out);
    }
    use rayon::prelude::*;
    let chunks = (jobs as u64 * 8).min(limit);
    let size = limit.div_ceil(chunks);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Precondition(format!("thread pool: {e}")))?;
    let parts: Vec<Result<Vec<T>>> = pool.install(|| {
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut out = Vec::new();
                for i in c * size..((c + 1) * size).min(limit) {
                    if let Some(t) = visit(i)? {
                        out.push(t);
                    }
                }
                Ok(out)
            })
            .collect()
    });
    let mut out = Vec::new();
    for p in parts {
        out.extend(p?);
    }
    Ok(out)
}

/// Free cells of a table, each with its admissible values; the last cell
/// varies fastest.
#[derive(Clone, Debug)]
struct Layout<V> {
    n: usize,
    base: Vec<V>,
    free: Vec<(usize, Vec<V>)>,
    mirror: bool,
}

impl<V: Copy> Layout<V> {
    fn space(&self) -> u128 {
        self.free.iter().map(|(_, vs)| vs.len() as u128).product()
    }

    fn decode(&self, mut idx: u64) -> Vec<V> {
        let mut cells = self.base.clone();
        for (cell, values) in self.free.iter().rev() {
            let r = values.len() as u64;
            let v = values[(idx % r) as usize];
            idx /= r;
            cells[*cell] = v;
            if self.mirror {
                let (i, j) = (cell / self.n, cell % self.n);
                cells[j * self.n + i] = v;
            }
        }
        cells
    }
}

fn permutations_fixing(n: usize, fixed: &[usize]) -> Vec<Vec<usize>> {
    fn go(n: usize, fixed: &[usize], cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        let i = cur.len();
        if i == n {
            out.push(cur.clone());
            return;
        }
        for k in 0..n {
            if used[k] || (fixed.contains(&i) && k != i) || (fixed.contains(&k) && k != i) {
                continue;
            }
            used[k] = true;
            cur.push(k);
            go(n, fixed, cur, used, out);
            cur.pop();
            used[k] = false;
        }
    }
    let mut out = Vec::new();
    go(n, fixed, &mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn relabel_mask(mask: u32, p: &[usize]) -> u32 {
    p.iter().enumerate().filter(|(k, _)| mask & (1 << k) != 0).fold(0, |acc, (_, &to)| acc | (1 << to))
}

fn relabel_add(n: usize, cells: &[u32], p: &[usize]) -> Vec<u32> {
    let mut out = vec![0; n * n];
    for i in 0..n {
        for j in 0..n {
            out[p[i] * n + p[j]] = relabel_mask(cells[i * n + j], p);
        }
    }
    out
}

fn relabel_mul(n: usize, cells: &[usize], p: &[usize]) -> Vec<usize> {
    let mut out = vec![0; n * n];
    for i in 0..n {
        for j in 0..n {
            out[p[i] * n + p[j]] = p[cells[i * n + j]];
        }
    }
    out
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(".")
}

/// Canonical key of a hypergroup table: `hg{n}:` and the minimal row-major
/// mask encoding over relabelings fixing `fixed`.
pub fn hypergroup_key(n: usize, cells: &[u32], fixed: &[usize]) -> (String, Vec<u32>) {
    let best = permutations_fixing(n, fixed).iter().map(|p| relabel_add(n, cells, p)).min().expect("identity");
    (format!("hg{n}:{}", join(&best)), best)
}

/// Canonical key of a hyperfield: `hf{n}:` then the additive masks and the
/// multiplication table, minimal over relabelings fixing zero and one.
pub fn hyperfield_key(n: usize, add: &[u32], mul: &[usize], fixed: &[usize]) -> (String, Vec<u32>, Vec<usize>) {
    let (a, m) = permutations_fixing(n, fixed)
        .iter()
        .map(|p| (relabel_add(n, add, p), relabel_mul(n, mul, p)))
        .min()
        .expect("identity");
    (format!("hf{n}:{}|{}", join(&a), join(&m)), a, m)
}

fn extend_row(n: usize, cells: &[u32], a: usize, mask: u32) -> u32 {
    (0..n).filter(|x| mask & (1 << x) != 0).fold(0, |acc, x| acc | cells[a * n + x])
}

fn extend_col(n: usize, cells: &[u32], mask: u32, c: usize) -> u32 {
    (0..n).filter(|x| mask & (1 << x) != 0).fold(0, |acc, x| acc | cells[x * n + c])
}

/// `a # (b # c) = (a # b) # c` for all `a, b, c`.
pub fn masks_associative(n: usize, cells: &[u32]) -> bool {
    (0..n).all(|a| {
        (0..n).all(|b| {
            (0..n).all(|c| extend_row(n, cells, a, cells[b * n + c]) == extend_col(n, cells, cells[a * n + b], c))
        })
    })
}

fn masks_commutative(n: usize, cells: &[u32]) -> bool {
    (0..n).all(|i| (0..n).all(|j| cells[i * n + j] == cells[j * n + i]))
}

fn point_associative(n: usize, cells: &[usize]) -> bool {
    (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| cells[a * n + cells[b * n + c]] == cells[cells[a * n + b] * n + c])))
}

fn point_commutative(n: usize, cells: &[usize]) -> bool {
    (0..n).all(|i| (0..n).all(|j| cells[i * n + j] == cells[j * n + i]))
}

fn to_mask(set: &[usize]) -> u32 {
    set.iter().fold(0, |acc, k| acc | (1 << k))
}

fn add_layout(spec: &SearchSpec) -> Layout<u32> {
    let n = spec.order;
    let all: Vec<u32> = (1..(1u32 << n)).collect();
    let mut base = vec![0u32; n * n];
    let mut fixed: BTreeMap<usize, u32> = BTreeMap::new();
    for (i, j, set) in &spec.fixed_add {
        fixed.insert(i * n + j, to_mask(set));
    }
    let mirror = spec.prune && spec.commutative;
    let forced_zero = if mirror { spec.zero } else { None };
    let mut free = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let cell = i * n + j;
            if mirror && j < i {
                continue;
            }
            if let Some(z) = forced_zero {
                if i == z || j == z {
                    // a commutative hypergroup has 0 # a = {a}
                    let other = if i == z { j } else { i };
                    base[cell] = 1 << other;
                    base[j * n + i] = 1 << other;
                    continue;
                }
            }
            let values = match fixed.get(&cell) {
                Some(&m) => vec![m],
                None => all.clone(),
            };
            free.push((cell, values));
        }
    }
    Layout { n, base, free, mirror }
}

fn pinned_add_ok(spec: &SearchSpec, cells: &[u32]) -> bool {
    spec.fixed_add.iter().all(|(i, j, set)| cells[i * spec.order + j] == to_mask(set))
}

fn hypergroup_digest(report_zero: &Option<Element>, n: usize) -> String {
    match report_zero {
        Some(z) => format!("hypergroup of order {n}, zero {z}, all axioms pass"),
        None => format!("hypergroup of order {n}, all axioms pass"),
    }
}

fn accept_hypergroup(spec: &SearchSpec, cells: &[u32]) -> Result<Option<CatalogEntry>> {
    let n = spec.order;
    if !pinned_add_ok(spec, cells) || !masks_associative(n, cells) {
        return Ok(None);
    }
    if spec.commutative && !masks_commutative(n, cells) {
        return Ok(None);
    }
    let carrier = atom_carrier(n);
    let mut h = Hypergroup::new(add_op(n, cells)?, spec.commutative);
    if let Some(z) = spec.zero {
        h = h.with_zero(carrier.elements().expect("finite")[z].clone());
    }
    let report = check_hypergroup(&h, &Default::default())?;
    if !report.is_hypergroup {
        return Ok(None);
    }
    let fixed: Vec<usize> = spec.zero.into_iter().collect();
    let (key, canonical) = hypergroup_key(n, cells, &fixed);
    Ok(Some(CatalogEntry {
        kind: SearchKind::Hypergroup,
        order: n,
        key,
        add: canonical,
        mul: None,
        zero: spec.zero,
        one: None,
        digest: hypergroup_digest(if spec.zero.is_some() { &report.zero } else { &None }, n),
    }))
}

fn dedup(found: Vec<CatalogEntry>) -> Vec<CatalogEntry> {
    let mut by_key: BTreeMap<String, CatalogEntry> = BTreeMap::new();
    for e in found {
        by_key.entry(e.key.clone()).or_insert(e);
    }
    by_key.into_values().collect()
}

/// Every hypergroup table on `0..order` satisfying the spec, one entry per
/// canonical key.
pub fn enumerate_hypergroups(spec: &SearchSpec) -> Result<SearchOutcome> {
    spec.validate()?;
    if spec.kind != SearchKind::Hypergroup {
        return Err(Error::Precondition("spec is not a hypergroup search".into()));
    }
    let layout = add_layout(spec);
    let space = layout.space();
    let limit = space.min(spec.budget as u128) as u64;
    let found = scan(limit, spec.jobs, |idx| accept_hypergroup(spec, &layout.decode(idx)))?;
    Ok(SearchOutcome {
        kind: SearchKind::Hypergroup,
        order: spec.order,
        entries: dedup(found),
        examined: limit,
        space,
        partial: space > spec.budget as u128,
    })
}

fn mul_layout(spec: &SearchSpec) -> Layout<usize> {
    let n = spec.order;
    let (z, o) = (spec.zero.expect("validated"), spec.one.expect("validated"));
    let all: Vec<usize> = (0..n).collect();
    let mut fixed: BTreeMap<usize, usize> = BTreeMap::new();
    for (i, j, k) in &spec.fixed_mul {
        fixed.insert(i * n + j, *k);
    }
    let mut base = vec![0usize; n * n];
    let mut free = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let cell = i * n + j;
            if spec.prune {
                if j < i {
                    continue;
                }
                if i == z || j == z {
                    base[cell] = z;
                    base[j * n + i] = z;
                    continue;
                }
                if i == o || j == o {
                    let other = if i == o { j } else { i };
                    base[cell] = other;
                    base[j * n + i] = other;
                    continue;
                }
            }
            let values = match fixed.get(&cell) {
                Some(&k) => vec![k],
                None => all.clone(),
            };
            free.push((cell, values));
        }
    }
    Layout { n, base, free, mirror: spec.prune }
}

fn accept_hyperfield(spec: &SearchSpec, add: &[u32], mul: &[usize]) -> Result<Option<CatalogEntry>> {
    let n = spec.order;
    if spec.fixed_mul.iter().any(|(i, j, k)| mul[i * n + j] != *k) {
        return Ok(None);
    }
    if !point_associative(n, mul) || !point_commutative(n, mul) {
        return Ok(None);
    }
    let (z, o) = (spec.zero.expect("validated"), spec.one.expect("validated"));
    let carrier = atom_carrier(n);
    let elems = carrier.elements().expect("finite");
    let f = Hyperfield {
        add: add_op(n, add)?,
        mul: mul_op(n, mul)?,
        zero: elems[z].clone(),
        one: elems[o].clone(),
        neg: None,
        inv: None,
        abs: None,
    };
    if !check_hyperfield(&f, &Default::default())?.is_hyperfield {
        return Ok(None);
    }
    let (key, a, m) = hyperfield_key(n, add, mul, &[z, o]);
    Ok(Some(CatalogEntry {
        kind: SearchKind::Hyperfield,
        order: n,
        key,
        add: a,
        mul: Some(m),
        zero: Some(z),
        one: Some(o),
        digest: format!("hyperfield of order {n}, zero {z}, one {o}, all axioms pass"),
    }))
}

/// Hyperfields on `0..order`: commutative hypergroup additions with the
/// designated zero, each paired with every admissible multiplication.
pub fn enumerate_hyperfields(spec: &SearchSpec) -> Result<SearchOutcome> {
    spec.validate()?;
    if spec.kind != SearchKind::Hyperfield {
        return Err(Error::Precondition("spec is not a hyperfield search".into()));
    }
    let additive = SearchSpec { kind: SearchKind::Hypergroup, one: None, fixed_mul: vec![], ..spec.clone() };
    let layout = add_layout(&additive);
    let add_space = layout.space();
    let add_limit = add_space.min(spec.budget as u128) as u64;
    let sums: Vec<Vec<u32>> = scan(add_limit, spec.jobs, |idx| {
        let cells = layout.decode(idx);
        Ok(accept_hypergroup(&additive, &cells)?.map(|_| cells))
    })?;

    let mul = mul_layout(spec);
    let mul_space = mul.space();
    let mut remaining = spec.budget - add_limit;
    let mut work: Vec<(usize, u64)> = Vec::new();
    for (s, _) in sums.iter().enumerate() {
        let take = mul_space.min(remaining as u128) as u64;
        remaining -= take;
        work.push((s, take));
    }
    let examined = add_limit + work.iter().map(|(_, t)| t).sum::<u64>();
    let space = add_space + sums.len() as u128 * mul_space;
    let partial = add_space > add_limit as u128 || work.iter().any(|(_, t)| (*t as u128) < mul_space);

    let mut found = Vec::new();
    for (s, take) in work {
        let add = &sums[s];
        found.extend(scan(take, spec.jobs, |idx| accept_hyperfield(spec, add, &mul.decode(idx)))?);
    }
    Ok(SearchOutcome {
        kind: SearchKind::Hyperfield,
        order: spec.order,
        entries: dedup(found),
        examined,
        space,
        partial,
    })
}

/// How candidate result sets are proposed for each star cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CandidateShape {
    /// Every non-empty subset of the window.
    AllSubsets,
    /// Every singleton subset of the window.
    Singletons,
    /// Only `{aα, θ}`, when `aα` lies in the window.
    Cone,
}

impl FromStr for CandidateShape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" | "subsets" => Ok(CandidateShape::AllSubsets),
            "singletons" => Ok(CandidateShape::Singletons),
            "cone" => Ok(CandidateShape::Cone),
            _ => Err(Error::Precondition(format!("unknown candidate shape {s:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct StarSearchConfig {
    /// Dimension `d` of `Q^d`; the window is `θ` and `±eᵢ`.
    pub dim: usize,
    /// Scalars the star is defined on.
    pub pool: Vec<Rational>,
    pub shape: CandidateShape,
    pub budget: u64,
    pub jobs: usize,
    pub max_violations: usize,
}

impl StarSearchConfig {
    pub fn new(dim: usize) -> Self {
        StarSearchConfig {
            dim,
            pool: vec![-Rational::one(), Rational::zero(), Rational::one()],
            shape: CandidateShape::AllSubsets,
            budget: DEFAULT_BUDGET,
            jobs: 1,
            max_violations: DEFAULT_VIOLATION_CAP,
        }
    }

    pub fn shape(mut self, shape: CandidateShape) -> Self {
        self.shape = shape;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarModel {
    pub cells: BTreeMap<(Element, Element), FiniteSet>,
    pub non_singleton: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarSearchOutcome {
    pub window: Vec<Element>,
    pub pool: Vec<Element>,
    /// Surviving candidates per cell after the single-cell filters.
    pub candidates: BTreeMap<(Element, Element), Vec<FiniteSet>>,
    /// Why candidates were dropped, capped per axiom.
    pub rejections: Vec<Violation>,
    pub models: Vec<StarModel>,
    pub non_singleton_models: usize,
    pub examined: u64,
    pub space: u128,
    pub partial: bool,
}

pub mod star_axiom {
    pub const HOMOGENEOUS: &str = "IP.homogeneous";
    pub const UNIT: &str = "HVS.unit";
    pub const ZERO_SCALAR: &str = "HVS.zero_scalar";
    pub const ZERO_THETA: &str = "HVS.zero_theta";
    pub const VECTOR_DISTRIB: &str = "HVS.vector_distrib";
    pub const SCALAR_DISTRIB: &str = "HVS.scalar_distrib";
    pub const MUL_COMPAT: &str = "HVS.mul_compat";
    pub const NEG_COMPAT: &str = "HVS.neg_compat";
}

fn window(dim: usize) -> Vec<Element> {
    let mut out: Vec<Element> = vec![Element::zero_vector(dim)];
    for i in 0..dim {
        for s in [1i64, -1] {
            out.push(Element::vector((0..dim).map(|k| if k == i { s } else { 0 })));
        }
    }
    out.sort();
    out
}

fn vec_add(a: &Element, b: &Element) -> Element {
    Element::Vector(crate::element::vector::add(a.as_vector().expect("vector"), b.as_vector().expect("vector")))
}

fn set_sum(a: &FiniteSet, b: &FiniteSet) -> FiniteSet {
    a.iter().flat_map(|x| b.iter().map(move |y| vec_add(x, y))).collect()
}

fn scaled(a: &Rational, v: &Element) -> Element {
    Element::Vector(crate::element::vector::scale(a, v.as_vector().expect("vector")))
}

/// Searches set-valued scalar actions `a * α` for `a` in the pool and `α` in
/// the window `{θ, ±eᵢ}` of `Q^d`, with the usual vector sum and the given
/// inner product. Cells are first filtered on the conditions that involve
/// only one cell (`sup⟨a*α,β⟩ = a⟨α,β⟩` for every window `β`, `α ∈ 1*α`,
/// `θ ∈ 0*α`, `0*θ = {θ}`); combinations of survivors are then checked on
/// every tuple whose values stay inside the defined cells.
pub fn search_star_models(cfg: &StarSearchConfig, ip: &InnerProduct) -> Result<StarSearchOutcome> {
    if cfg.dim == 0 {
        return Err(Error::Precondition("star search needs dimension at least 1".into()));
    }
    if cfg.dim > STAR_DIMENSION_CAP {
        return Err(Error::Budget(format!("star search is capped at dimension {STAR_DIMENSION_CAP}, got {}", cfg.dim)));
    }
    if cfg.budget == 0 {
        return Err(Error::Precondition("search budget must be positive".into()));
    }
    let win = window(cfg.dim);
    let theta = Element::zero_vector(cfg.dim);
    let mut pool: Vec<Rational> = cfg.pool.clone();
    pool.sort();
    pool.dedup();
    let pool_elems: Vec<Element> = pool.iter().cloned().map(Element::Rational).collect();
    let subsets: Vec<FiniteSet> = (1u32..(1 << win.len()))
        .map(|m| win.iter().enumerate().filter(|(k, _)| m & (1 << k) != 0).map(|(_, e)| e.clone()).collect())
        .collect();

    let mut log = ViolationLog::new(cfg.max_violations);
    let mut candidates: BTreeMap<(Element, Element), Vec<FiniteSet>> = BTreeMap::new();
    for (a, ae) in pool.iter().zip(&pool_elems) {
        for alpha in &win {
            let raw: Vec<FiniteSet> = match cfg.shape {
                CandidateShape::AllSubsets => subsets.clone(),
                CandidateShape::Singletons => win.iter().cloned().map(FiniteSet::singleton).collect(),
                CandidateShape::Cone => {
                    let s = scaled(a, alpha);
                    if win.contains(&s) {
                        vec![[s, theta.clone()].into_iter().collect()]
                    } else {
                        vec![]
                    }
                }
            };
            let mut keep = Vec::new();
            for set in raw {
                let mut ok = true;
                for beta in &win {
                    let sup = sup_over(&set, |x| ip.eval(x, beta))?;
                    let expect = a * ip.eval(alpha, beta)?;
                    if sup.value != expect {
                        ok = false;
                        log.push(Violation::new(
                            star_axiom::HOMOGENEOUS,
                            vec![ae.clone(), alpha.clone(), beta.clone()],
                            sup.value,
                            expect,
                        ));
                    }
                }
                if a.is_one() && !set.contains(alpha) {
                    ok = false;
                    log.push(Violation::new(star_axiom::UNIT, vec![alpha.clone()], alpha.clone(), set.clone()));
                }
                if a.is_zero() && !set.contains(&theta) {
                    ok = false;
                    log.push(Violation::new(star_axiom::ZERO_SCALAR, vec![alpha.clone()], theta.clone(), set.clone()));
                }
                if a.is_zero() && *alpha == theta && set != FiniteSet::singleton(theta.clone()) {
                    ok = false;
                    log.push(Violation::new(
                        star_axiom::ZERO_THETA,
                        vec![ae.clone(), theta.clone()],
                        set.clone(),
                        FiniteSet::singleton(theta.clone()),
                    ));
                }
                if ok {
                    keep.push(set);
                }
            }
            candidates.insert((ae.clone(), alpha.clone()), keep);
        }
    }

    let cells: Vec<(Element, Element)> = candidates.keys().cloned().collect();
    let options: Vec<&Vec<FiniteSet>> = cells.iter().map(|c| &candidates[c]).collect();
    let space: u128 = options.iter().map(|o| o.len() as u128).product();
    let limit = space.min(cfg.budget as u128) as u64;

    let pool_set: std::collections::BTreeSet<&Rational> = pool.iter().collect();
    let check = |idx: u64| -> Result<Option<StarModel>> {
        let mut table: BTreeMap<(Element, Element), FiniteSet> = BTreeMap::new();
        let mut rest = idx;
        for (cell, opts) in cells.iter().zip(&options).rev() {
            let r = opts.len() as u64;
            table.insert(cell.clone(), opts[(rest % r) as usize].clone());
            rest /= r;
        }
        let star = |a: &Rational, v: &Element| table.get(&(Element::Rational(a.clone()), v.clone()));
        let star_set = |a: &Rational, s: &FiniteSet| -> Option<FiniteSet> {
            let mut out = FiniteSet::new();
            for x in s {
                out.extend_from(star(a, x)?);
            }
            Some(out)
        };
        for a in &pool {
            for alpha in &win {
                let aa = star(a, alpha).expect("cell");
                for beta in &win {
                    let sum = vec_add(alpha, beta);
                    if let Some(left) = star(a, &sum) {
                        if !left.is_subset(&set_sum(aa, star(a, beta).expect("cell"))) {
                            return Ok(None);
                        }
                    }
                }
                for b in &pool {
                    let ab_sum = a + b;
                    if pool_set.contains(&ab_sum) {
                        let left = star(&ab_sum, alpha).expect("cell");
                        if !left.is_subset(&set_sum(aa, star(b, alpha).expect("cell"))) {
                            return Ok(None);
                        }
                    }
                    let ab = a * b;
                    if pool_set.contains(&ab) {
                        let right = star_set(a, star(b, alpha).expect("cell"));
                        if right.as_ref() != Some(star(&ab, alpha).expect("cell")) {
                            return Ok(None);
                        }
                    }
                }
                let na = -a;
                let neg_alpha = scaled(&-Rational::one(), alpha);
                if pool_set.contains(&na) && star(&na, alpha) != star(a, &neg_alpha) {
                    return Ok(None);
                }
            }
        }
        let non_singleton = table.values().any(|s| s.len() > 1);
        Ok(Some(StarModel { cells: table, non_singleton }))
    };
    let models = scan(limit, cfg.jobs, check)?;
    let non_singleton_models = models.iter().filter(|m| m.non_singleton).count();
    Ok(StarSearchOutcome {
        window: win,
        pool: pool_elems,
        candidates,
        rejections: log.into_vec(),
        models,
        non_singleton_models,
        examined: limit,
        space,
        partial: space > cfg.budget as u128,
    })
}
