//! Acceptance gate: one line per criterion, each with its runtime limit.
//! Runs as a plain binary (`harness = false`) so the lines always print.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hyperspaces::element::{Element, Rational};
use hyperspaces::fixtures::{self, Expectation, ORTHOGONAL_SET_FIXTURES};
use hyperspaces::format::{parse_structure, serialize_structure};
use hyperspaces::hyperspace::{
    axiom as hvs_axiom, check_hvs_axioms, CoefficientPool, HyperVectorSpace, Samples, StarOp, VectorUniverse,
    DEFAULT_UNIVERSE_CAP,
};
use hyperspaces::hyperstructures::{
    check_hyperfield, check_hypergroup, check_hypergroup_consequences, relation_holds, replay,
};
use hyperspaces::inner::{
    axiom as ip_axiom, bilinear_expand, check_cauchy_schwarz, check_fourier_representation, check_induced_norm,
    check_inner_axioms, check_inner_consequences, check_orthogonal_weak_independence, check_span_preserved,
    gram_schmidt, is_orthogonal_set, parallelogram_sides, widen_pool_by_fourier, InnerProduct,
};
use hyperspaces::report::parse_report;
use hyperspaces::search::{enumerate_hypergroups, SearchKind, SearchSpec};
use hyperspaces::violation::{CheckOptions, Evidence};
use hyperspaces::Error;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn vecq(xs: &[Rational]) -> Element {
    Element::Vector(xs.to_vec())
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    q(rng.random_range(-6..=6), rng.random_range(1..=4))
}

fn random_vector(rng: &mut ChaCha8Rng, d: usize) -> Vec<Rational> {
    (0..d).map(|_| random_rational(rng)).collect()
}

/// Classical dot product, written out independently of the library.
fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

fn axpy(c: &Rational, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
    x.iter().zip(y).map(|(xi, yi)| c * xi + yi).collect()
}

/// Rank by exact Gaussian elimination.
fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = &m[i][c] / &m[r][c];
                let pivot = m[r].clone();
                m[i] = axpy(&-f, &pivot, &m[i]);
            }
        }
        r += 1;
    }
    r
}

/// Classical Gram-Schmidt over exact rationals.
fn classical_gram_schmidt(input: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let mut out: Vec<Vec<Rational>> = Vec::new();
    for w in input {
        let mut v = w.clone();
        for u in &out {
            let c = dot(w, u) / dot(u, u);
            v = axpy(&-c, u, &v);
        }
        out.push(v);
    }
    out
}

fn space(name: &str) -> Result<(HyperVectorSpace, Option<InnerProduct>, hyperspaces::format::StructureDoc), String> {
    let f = fixtures::get(name).map_err(|e| e.to_string())?;
    let s = f.doc.build().map_err(|e| e.to_string())?;
    Ok((s.space.ok_or("not a hyperspace")?, s.inner, f.doc))
}

fn criterion_1() -> Outcome {
    let opts = CheckOptions::default();
    let mut bases = 0;
    let mut mutants = 0;
    for f in fixtures::all().map_err(|e| e.to_string())? {
        let s = f.doc.build().map_err(|e| e.to_string())?;
        let (Some(field), None) = (s.field, s.space) else { continue };
        let r = check_hyperfield(&field, &opts).map_err(|e| e.to_string())?;
        match f.expect {
            Expectation::Valid => {
                ensure!(r.is_hyperfield, "{} fails: {:?}", f.name, r.violations.first());
                bases += 1;
            }
            Expectation::Mutant { .. } => {
                ensure!(!r.is_hyperfield, "{} passes", f.name);
                let mut replayed = 0;
                for v in &r.violations {
                    if let Ok((l, rr)) = replay(&field, v) {
                        ensure!(l == v.left && rr == v.right, "{}: replay of {v} gives {l} vs {rr}", f.name);
                        ensure!(!relation_holds(v.axiom, &l, &rr), "{}: replayed {v} holds", f.name);
                        replayed += 1;
                    }
                }
                ensure!(replayed > 0, "{}: no violation replays", f.name);
                mutants += 1;
            }
        }
    }
    ensure!(bases == 4, "expected 4 base hyperfields, saw {bases}");
    ensure!(mutants >= 10, "only {mutants} mutants");
    Ok(format!("{bases} hyperfields pass, {mutants} single-cell mutants fail with replayable witnesses"))
}

fn criterion_2() -> Outcome {
    let opts = CheckOptions::default();
    let mut total = 0;
    for n in 1..=3 {
        let spec = SearchSpec::new(SearchKind::Hypergroup, n).commutative(true).jobs(4);
        let out = enumerate_hypergroups(&spec).map_err(|e| e.to_string())?;
        ensure!(!out.partial, "order {n} census is partial");
        for e in &out.entries {
            let h = e.hypergroup().map_err(|e| e.to_string())?;
            let vs = check_hypergroup_consequences(&h, &opts).map_err(|e| e.to_string())?;
            ensure!(vs.is_empty(), "{}: {}", e.key, vs[0]);
            // independent oracle on the bitmask table
            let cell = |i: usize, j: usize| e.add[i * n + j];
            let zeros: Vec<usize> = (0..n).filter(|&z| (0..n).all(|a| cell(z, a) == 1 << a)).collect();
            ensure!(zeros.len() == 1, "{}: zeros {zeros:?}", e.key);
            let z = zeros[0];
            let report = check_hypergroup(&h, &opts).map_err(|e| e.to_string())?;
            ensure!(report.zero == Some(e.element(z)), "{}: zero disagrees", e.key);
            let neg = |a: usize| -> Result<usize, String> {
                let inv: Vec<usize> = (0..n).filter(|&b| cell(a, b) & (1 << z) != 0).collect();
                match inv.as_slice() {
                    [b] => Ok(*b),
                    _ => Err(format!("{}: {a} has inverses {inv:?}", e.key)),
                }
            };
            for a in 0..n {
                ensure!(neg(neg(a)?)? == a, "{}: -(-{a}) != {a}", e.key);
            }
        }
        total += out.entries.len();
    }
    Ok(format!("{total} commutative hypergroups of order <= 3, all consequences hold"))
}

fn criterion_3() -> Outcome {
    let opts = CheckOptions::default();
    for name in ["trivial_q2", "cone"] {
        let (w, _, doc) = space(name)?;
        let samples = Samples::new(doc.scalar_samples.clone(), doc.vector_samples.clone());
        let vs = check_hvs_axioms(&w, &samples, &opts).map_err(|e| e.to_string())?;
        ensure!(vs.is_empty(), "{name}: {}", vs[0]);
    }
    let (w, _, doc) = space("scale_or_self")?;
    let samples = Samples::new(doc.scalar_samples.clone(), doc.vector_samples.clone());
    let vs = check_hvs_axioms(&w, &samples, &CheckOptions::with_cap(64)).map_err(|e| e.to_string())?;
    let e1 = Element::vector([1, 0]);
    let witness = vec![Element::int(2), Element::int(3), e1.clone()];
    let hit = vs
        .iter()
        .find(|v| v.axiom == hvs_axiom::MUL_COMPAT && v.witness == witness)
        .ok_or("no mul-compat witness (2, 3, (1, 0))")?;
    let left: hyperspaces::element::FiniteSet = [Element::vector([6, 0]), e1.clone()].into_iter().collect();
    let right: hyperspaces::element::FiniteSet = [6, 3, 2, 1].into_iter().map(|x| Element::vector([x, 0])).collect();
    ensure!(
        hit.left == Evidence::Set(left) && hit.right == Evidence::Set(right),
        "witness sides {} vs {}",
        hit.left,
        hit.right
    );
    Ok("trivial_q2 and cone satisfy the hypervector axioms; scale-or-self fails mul-compat at (2, 3, (1, 0))".into())
}

fn criterion_4() -> Outcome {
    let w = HyperVectorSpace::rational(2, StarOp::scale());
    let ip = InnerProduct::dot();
    let opts = CheckOptions::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0x4c_454d_4d41);
    let tuples = 500;
    for t in 0..tuples {
        let (a, b) = (random_rational(&mut rng), random_rational(&mut rng));
        let vs: Vec<Vec<Rational>> = (0..4).map(|_| random_vector(&mut rng, 2)).collect();
        let [al, be, ga, de] = [&vs[0], &vs[1], &vs[2], &vs[3]];
        let e = |v: &Vec<Rational>| vecq(v);
        let (ea, eb) = (Element::Rational(a.clone()), Element::Rational(b.clone()));

        let exp = bilinear_expand(&w, &ip, &e(al), &ea, &e(be), &e(ga), &eb, &e(de)).map_err(|e| e.to_string())?;
        let oracle = dot(al, ga) + &a * dot(be, ga) + &b * dot(al, de) + &a * &b * dot(be, de);
        let direct = dot(&axpy(&a, be, al), &axpy(&b, de, ga));
        ensure!(oracle == direct, "oracle self-check failed at tuple {t}");
        ensure!(
            exp.enumerated.value == oracle && exp.formula == oracle,
            "bilinear at tuple {t}: {} / {} vs {oracle}",
            exp.enumerated.value,
            exp.formula
        );

        let samples = Samples::new(vec![ea, eb], vec![e(al), e(be)]);
        let c = check_inner_consequences(&w, &ip, &samples, &opts).map_err(|e| e.to_string())?;
        ensure!(c.is_empty(), "consequence at tuple {t}: {}", c[0]);

        let lhs = dot(al, be) * dot(al, be);
        ensure!(lhs <= dot(al, al) * dot(be, be), "oracle Cauchy-Schwarz at {t}");
        let cs = check_cauchy_schwarz(&ip, &[(e(al), e(be))], &opts).map_err(|e| e.to_string())?;
        ensure!(cs.is_empty(), "Cauchy-Schwarz at tuple {t}: {}", cs[0]);

        let n = check_induced_norm(&w, &ip, &samples, &opts).map_err(|e| e.to_string())?;
        ensure!(n.is_empty(), "induced norm at tuple {t}: {}", n[0]);

        let (pl, pr) = parallelogram_sides(&w, &ip, &e(al), &e(be)).map_err(|e| e.to_string())?;
        let sum = axpy(&Rational::one(), al, be);
        let diff = axpy(&-Rational::one(), be, al);
        let classical = dot(&sum, &sum) + dot(&diff, &diff);
        let two = q(2, 1);
        ensure!(
            pl == classical && pr == &two * dot(al, al) + &two * dot(be, be) && pl == pr,
            "parallelogram at tuple {t}"
        );
    }
    Ok(format!("{tuples} exact tuples: bilinear expansion, inner consequences, Cauchy-Schwarz, induced norm and parallelogram equality"))
}

fn criterion_5() -> Outcome {
    let (w, ip, doc) = space("cone")?;
    let ip = ip.ok_or("cone has no inner product")?;
    let samples = Samples::new(doc.scalar_samples.clone(), doc.vector_samples.clone());
    let vs = check_inner_axioms(&w, &ip, &samples, &CheckOptions::with_cap(64)).map_err(|e| e.to_string())?;
    let witness = vec![Element::int(1), Element::vector([1, 0]), Element::vector([-1, 0])];
    let v = vs.iter().find(|v| v.witness == witness).ok_or("witness (1, (1, 0), (-1, 0)) missing")?;
    ensure!(v.axiom == ip_axiom::IP_HOMOGENEOUS, "axiom {}", v.axiom);
    ensure!(v.left == Evidence::Scalar(q(0, 1)) && v.right == Evidence::Scalar(q(-1, 1)), "{} vs {}", v.left, v.right);
    Ok("cone fails homogeneity at a=1, (1, 0), (-1, 0): sup 0 vs -1".into())
}

fn criterion_6() -> Outcome {
    let ip = InnerProduct::dot();
    let mut rng = ChaCha8Rng::seed_from_u64(0x4753);
    let mut cases = 0;
    while cases < 100 {
        let d = if cases % 2 == 0 { 2 } else { 3 };
        let k = if d == 2 { 2 } else { rng.random_range(2..=3) };
        let input: Vec<Vec<Rational>> = (0..k).map(|_| random_vector(&mut rng, d)).collect();
        if rank(&input) < k {
            continue;
        }
        cases += 1;
        let w = HyperVectorSpace::rational(d, StarOp::scale());
        let elems: Vec<Element> = input.iter().map(|v| vecq(v)).collect();
        let gs = gram_schmidt(&w, &ip, &elems).map_err(|e| format!("case {cases}: {e}"))?;
        let oracle: Vec<Element> = classical_gram_schmidt(&input).iter().map(|v| vecq(v)).collect();
        ensure!(gs.vectors == oracle, "case {cases}: {:?} vs oracle {:?}", gs.vectors, oracle);
        ensure!(is_orthogonal_set(&ip, &gs.vectors).map_err(|e| e.to_string())?, "case {cases}: not orthogonal");
        for x in &elems {
            let f = check_fourier_representation(&w, &ip, x, &gs.vectors).map_err(|e| e.to_string())?;
            ensure!(f.reconstructs, "case {cases}: {x} not reconstructed");
        }
        // probes are pool combinations of the input
        let coeffs = [[1, 1, 0], [1, -1, 1], [2, 0, -1], [0, 0, 0]];
        let probes: Vec<Element> = coeffs
            .iter()
            .map(|c| {
                let mut acc = vec![Rational::zero(); d];
                for (ci, v) in c.iter().zip(&input) {
                    acc = axpy(&q(*ci, 1), v, &acc);
                }
                vecq(&acc)
            })
            .collect();
        let base = CoefficientPool::new(&w, [Element::int(2)]).map_err(|e| e.to_string())?;
        let pool = widen_pool_by_fourier(&w, &ip, &base, &gs.vectors, &probes).map_err(|e| e.to_string())?;
        let span = check_span_preserved(&w, &elems, &gs.vectors, &pool, &probes).map_err(|e| e.to_string())?;
        ensure!(span.agrees, "case {cases}: span disagreement {:?}", span.probes.iter().find(|p| !p.agrees()));
        ensure!(span.probes.iter().all(|p| p.over_original.is_some()), "case {cases}: a pool probe is unreached");
    }
    Ok(format!(
        "{cases} fixed-seed cases agree with classical Gram-Schmidt, are orthogonal, reconstruct and preserve span"
    ))
}

fn criterion_7() -> Outcome {
    let w = HyperVectorSpace::rational(2, StarOp::scale());
    let ip = InnerProduct::dot();
    let expect_dependent = |input: &[Element]| -> Result<(), String> {
        match gram_schmidt(&w, &ip, input) {
            Err(e @ Error::NotIndependent(_)) if e.to_string().starts_with("input not linearly independent") => Ok(()),
            other => Err(format!("{input:?}: {other:?}")),
        }
    };
    expect_dependent(&[Element::vector([1, 0]), Element::vector([2, 0])])?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x3d);
    for _ in 0..50 {
        let three: Vec<Element> = (0..3).map(|_| vecq(&random_vector(&mut rng, 2))).collect();
        expect_dependent(&three)?;
    }
    Ok("((1, 0), (2, 0)) and 50 random triples in Q^2 are rejected as not linearly independent".into())
}

fn criterion_8() -> Outcome {
    for name in ORTHOGONAL_SET_FIXTURES {
        let (w, ip, doc) = space(name)?;
        let ip = ip.ok_or("no inner product")?;
        let pool = CoefficientPool::new(&w, doc.pool.iter().cloned()).map_err(|e| e.to_string())?;
        let universe = VectorUniverse::new(&w, doc.universe.iter().cloned()).map_err(|e| e.to_string())?;
        let r = check_orthogonal_weak_independence(&w, &ip, &doc.orthogonal, &pool, &universe, DEFAULT_UNIVERSE_CAP)
            .map_err(|e| format!("{name}: {e}"))?;
        ensure!(r.independent, "{name}: counterexample {:?}", r.counterexample);
    }
    Ok(format!(
        "{} orthogonal-set fixtures are weakly independent under their pool and universe",
        ORTHOGONAL_SET_FIXTURES.len()
    ))
}

fn criterion_9() -> Outcome {
    let base = SearchSpec::new(SearchKind::Hypergroup, 2).commutative(true).zero(0);
    let run = |s: SearchSpec| enumerate_hypergroups(&s).map_err(|e| e.to_string());
    let one = run(base.clone().jobs(1))?;
    let four = run(base.clone().jobs(4))?;
    let unpruned = run(base.clone().jobs(4).prune(false))?;
    let keys = one.keys();
    ensure!(keys.contains(&"hg2:1.2.2.1") && keys.contains(&"hg2:1.2.2.3"), "keys {keys:?}");
    ensure!(four.keys() == keys, "1 vs 4 workers differ");
    ensure!(unpruned.keys() == keys, "pruned vs unpruned differ");
    let three_one = run(SearchSpec::new(SearchKind::Hypergroup, 3).commutative(true).zero(0).jobs(1))?;
    let three_four = run(SearchSpec::new(SearchKind::Hypergroup, 3).commutative(true).zero(0).jobs(4))?;
    ensure!(three_one.keys() == three_four.keys(), "order 3: 1 vs 4 workers differ");
    Ok(format!("census {keys:?} contains Z2 and Krasner; identical for 1 and 4 workers and with pruning off"))
}

fn run_cli(args: &[&str], report: &Path) -> Result<i32, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_hyperspaces"))
        .args(args)
        .arg("--report")
        .arg(report)
        .output()
        .map_err(|e| e.to_string())?;
    let code = out.status.code().ok_or("killed by signal")?;
    let text = std::fs::read_to_string(report).map_err(|e| format!("{args:?}: no report: {e}"))?;
    let r = parse_report(&text).map_err(|e| format!("{args:?}: report fails schema: {e}"))?;
    ensure!(r.exit_code == code, "{args:?}: report says {} but process exited {code}", r.exit_code);
    Ok(code)
}

fn criterion_10() -> Outcome {
    let shipped = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let all = fixtures::all().map_err(|e| e.to_string())?;
    for f in &all {
        let path = shipped.join(f.file_name());
        let text = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
        ensure!(text == f.text(), "{} differs from the built-in fixture", path.display());
        let doc = parse_structure(&text).map_err(|e| e.to_string())?;
        let again = parse_structure(&serialize_structure(&doc)).map_err(|e| e.to_string())?;
        ensure!(again == doc, "{} does not round-trip", f.name);
    }
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let report = tmp.path().join("report.json");
    let file = |n: &str| shipped.join(format!("{n}.hyp")).display().to_string();
    let bad = tmp.path().join("empty_cell.hyp");
    std::fs::write(
        &bad,
        fixtures::get("krasner").map_err(|e| e.to_string())?.text().replace("1 + 1 = {0, 1}", "1 + 1 = {}"),
    )
    .map_err(|e| e.to_string())?;
    let bad = bad.display().to_string();
    let scenarios: [(&[&str], i32); 6] = [
        (&["verify", &file("krasner"), "--all"], 0),
        (&["verify", &file("cone"), "--check", "inner.axioms"], 1),
        (&["verify", &file("krasner"), "--check", "no.such.check"], 2),
        (&["verify", &bad], 2),
        (&["search", "--kind", "hypergroup", "--order", "9"], 3),
        (&["gram-schmidt", &file("trivial_q2"), "(1, 0)", "(2, 0)"], 1),
    ];
    for (args, want) in scenarios {
        let got = run_cli(args, &report)?;
        ensure!(got == want, "{args:?}: exit {got}, want {want}");
    }
    Ok(format!(
        "{} fixtures round-trip and match the shipped files; exit codes 0/1/2/3 hold; every report validates",
        all.len()
    ))
}

/// Name, time limit and body of one criterion.
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("axiom-checker soundness", Duration::from_secs(1), criterion_1),
        ("commutative census consequences", Duration::from_secs(30), criterion_2),
        ("hypervector-space fixtures", Duration::from_secs(5), criterion_3),
        ("inner-product theorem suite", Duration::from_secs(10), criterion_4),
        ("cone inner-product counterexample", Duration::from_secs(1), criterion_5),
        ("Gram-Schmidt oracle equivalence", Duration::from_secs(10), criterion_6),
        ("dependent-input detection", Duration::from_secs(1), criterion_7),
        ("orthogonal sets weakly independent", Duration::from_secs(5), criterion_8),
        ("search reproducibility", Duration::from_secs(60), criterion_9),
        ("CLI contract", Duration::from_secs(5), criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, limit, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if took > *limit => Err(format!("took {took:.2?}, limit {limit:?} ({msg})")),
            other => other,
        };
        match outcome {
            Ok(msg) => println!("criterion {:>2} PASS [{name}] {took:.2?} (limit {limit:?}): {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL [{name}] {took:.2?} (limit {limit:?}): {msg}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
