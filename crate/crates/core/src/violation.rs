//! Axiom violations and the capped log checkers collect them into.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::element::{Element, FiniteSet, Rational};

/// Default number of violations kept per axiom.
pub const DEFAULT_VIOLATION_CAP: usize = 16;

/// One side of a failed comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Evidence {
    Set(FiniteSet),
    Element(Element),
    Scalar(Rational),
    /// Free-form description, for failures that are not a two-sided comparison.
    Note(String),
}

impl fmt::Display for Evidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Evidence::Set(s) => write!(f, "{s}"),
            Evidence::Element(e) => write!(f, "{e}"),
            Evidence::Scalar(q) => write!(f, "{q}"),
            Evidence::Note(n) => f.write_str(n),
        }
    }
}

impl From<FiniteSet> for Evidence {
    fn from(s: FiniteSet) -> Self {
        Evidence::Set(s)
    }
}

impl From<Element> for Evidence {
    fn from(e: Element) -> Self {
        Evidence::Element(e)
    }
}

impl From<Rational> for Evidence {
    fn from(q: Rational) -> Self {
        Evidence::Scalar(q)
    }
}

/// A failed axiom instance: a stable axiom key, the witness tuple that
/// triggers it, and the two values that should have been related.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub axiom: &'static str,
    pub witness: Vec<Element>,
    pub left: Evidence,
    pub right: Evidence,
}

impl Violation {
    pub fn new(
        axiom: &'static str,
        witness: Vec<Element>,
        left: impl Into<Evidence>,
        right: impl Into<Evidence>,
    ) -> Self {
        Violation { axiom, witness, left: left.into(), right: right.into() }
    }

    pub fn to_record(&self) -> ViolationRecord {
        ViolationRecord {
            axiom: self.axiom.to_string(),
            witness: self.witness.iter().map(|e| e.to_string()).collect(),
            left: self.left.to_string(),
            right: self.right.to_string(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let witness: Vec<String> = self.witness.iter().map(|e| e.to_string()).collect();
        write!(f, "{} at ({}): {} vs {}", self.axiom, witness.join(", "), self.left, self.right)
    }
}

/// Serializable form of a [`Violation`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ViolationRecord {
    pub axiom: String,
    pub witness: Vec<String>,
    pub left: String,
    pub right: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CheckOptions {
    /// Violations kept per axiom key.
    pub max_violations: usize,
    /// Worker threads for enumeration-heavy checks.
    pub jobs: usize,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { max_violations: DEFAULT_VIOLATION_CAP, jobs: 1 }
    }
}

impl CheckOptions {
    pub fn with_cap(max_violations: usize) -> Self {
        CheckOptions { max_violations, ..Default::default() }
    }
}

/// Collects violations, keeping at most `cap` per axiom and counting the rest.
#[derive(Clone, Debug)]
pub struct ViolationLog {
    cap: usize,
    kept: Vec<Violation>,
    counts: BTreeMap<&'static str, usize>,
}

impl ViolationLog {
    pub fn new(cap: usize) -> Self {
        ViolationLog { cap, kept: Vec::new(), counts: BTreeMap::new() }
    }

    pub fn push(&mut self, v: Violation) {
        let count = self.counts.entry(v.axiom).or_insert(0);
        *count += 1;
        if *count <= self.cap {
            self.kept.push(v);
        }
    }

    pub fn extend<I: IntoIterator<Item = Violation>>(&mut self, vs: I) {
        for v in vs {
            self.push(v);
        }
    }

    pub fn is_empty(&self) -> bool {
        self.kept.is_empty()
    }

    /// Total violations seen, including those dropped by the cap.
    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn into_vec(self) -> Vec<Violation> {
        self.kept
    }
}

/// Evaluates `check` over `items` on up to `jobs` threads, concatenating the
/// per-item violation lists in input order so the result is independent of
/// the worker count.
pub(crate) fn par_violations<T, F>(items: &[T], jobs: usize, check: F) -> crate::Result<Vec<Violation>>
where
    T: Sync,
    F: Fn(&T) -> crate::Result<Vec<Violation>> + Sync + Send,
{
    if jobs <= 1 || items.len() < 2 {
        let mut out = Vec::new();
        for item in items {
            out.extend(check(item)?);
        }
        return Ok(out);
    }
    use rayon::prelude::*;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| crate::Error::Precondition(format!("thread pool: {e}")))?;
    let parts: Vec<crate::Result<Vec<Violation>>> = pool.install(|| items.par_iter().map(&check).collect());
    let mut out = Vec::new();
    for part in parts {
        out.extend(part?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cap_is_per_axiom() {
        let mut log = ViolationLog::new(2);
        for _ in 0..5 {
            log.push(Violation::new("A", vec![], Evidence::Note("x".into()), Evidence::Note("y".into())));
        }
        log.push(Violation::new("B", vec![], Evidence::Note("x".into()), Evidence::Note("y".into())));
        assert_eq!(log.total(), 6);
        let kept = log.into_vec();
        assert_eq!(kept.len(), 3);
        assert_eq!(kept.iter().filter(|v| v.axiom == "A").count(), 2);
    }

    #[test]
    fn parallel_merge_keeps_input_order() {
        let items: Vec<i64> = (0..50).collect();
        let check = |i: &i64| {
            Ok(if i % 3 == 0 {
                vec![Violation::new(
                    "M",
                    vec![Element::int(*i)],
                    Evidence::Note(String::new()),
                    Evidence::Note(String::new()),
                )]
            } else {
                vec![]
            })
        };
        let one = par_violations(&items, 1, check).unwrap();
        let four = par_violations(&items, 4, check).unwrap();
        assert_eq!(one, four);
        assert_eq!(one.len(), 17);
    }
}
