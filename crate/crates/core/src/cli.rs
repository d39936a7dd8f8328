//! Command-line front end: `verify`, `gram-schmidt`, `search`, `fixtures`.
//!
//! Exit codes: 0 all checks pass, 1 violations or dependent input,
//! 2 input error (parse, unknown selector, inapplicable check),
//! 3 budget or cap exceeded.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::element::Element;
use crate::error::{Error, Result};
use crate::fixtures;
use crate::format::{parse_structure, serialize_structure, Structure, StructureDoc};
use crate::hyperspace::{
    check_hvs_axioms, check_negation_membership, is_basis, is_linearly_dependent, CoefficientPool, HyperVectorSpace,
    Samples, VectorUniverse, DEFAULT_UNIVERSE_CAP,
};
use crate::hyperstructures::{
    check_hyperfield, check_hypergroup, check_hypergroup_consequences, check_hyperring, check_semihypergroup,
    Hypergroup,
};
use crate::inner::{
    check_bilinear, check_cauchy_schwarz, check_fourier_representation, check_induced_norm, check_inner_axioms,
    check_inner_consequences, check_norm_axioms, check_orthogonal_weak_independence, check_parallelogram,
    check_span_preserved, gram_schmidt, orthogonality, widen_pool_by_fourier, InnerProduct,
};
use crate::report::{Bounds, CheckRecord, Report, EXIT_INPUT};
use crate::search::{
    atom_names, enumerate_hyperfields, enumerate_hypergroups, search_star_models, CandidateShape, SearchKind,
    SearchSpec, StarSearchConfig, DEFAULT_BUDGET,
};
use crate::violation::{CheckOptions, Violation, DEFAULT_VIOLATION_CAP};

/// Check selectors accepted by `verify --check`, in `--all` order.
pub const CHECK_IDS: &[&str] = &[
    "semihypergroup",
    "hypergroup",
    "hypergroup.consequences",
    "hyperring",
    "hyperfield",
    "hvs.axioms",
    "negation.membership",
    "dependence",
    "basis",
    "norm.axioms",
    "inner.axioms",
    "inner.consequences",
    "bilinear",
    "cauchy-schwarz",
    "induced-norm",
    "parallelogram",
    "orthogonal",
    "weak-independence",
    "fourier",
    "gram-schmidt",
];

#[derive(Debug, Parser)]
#[command(
    name = "hyperspaces",
    version,
    about = "Exact checks for hyperfields, hypervector spaces and inner-product hyperspaces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run axiom and theorem checks on a structure file.
    Verify(VerifyArgs),
    /// Orthogonalize vectors in an inner-product hyperspace.
    GramSchmidt(GramSchmidtArgs),
    /// Enumerate small hypergroups, hyperfields or star operations.
    Search(SearchArgs),
    /// Write or list the built-in fixture files.
    Fixtures(FixturesArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// Write the JSON report here.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Violations kept per axiom.
    #[arg(long, default_value_t = DEFAULT_VIOLATION_CAP)]
    pub max_violations: usize,
    /// Print the JSON report to stdout instead of the human form.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub file: PathBuf,
    /// Run every check that applies to the file (the default).
    #[arg(long, conflicts_with = "check")]
    pub all: bool,
    /// Run only these checks; repeatable.
    #[arg(long)]
    pub check: Vec<String>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct GramSchmidtArgs {
    pub file: PathBuf,
    /// Input vectors such as "(1, 1)"; defaults to the file's `independent` list.
    pub vectors: Vec<String>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// hypergroup, hyperfield or star.
    #[arg(long)]
    pub kind: SearchKind,
    /// Carrier size; for `star`, the vector dimension.
    #[arg(long)]
    pub order: usize,
    #[arg(long)]
    pub commutative: bool,
    /// Index of the designated zero.
    #[arg(long)]
    pub zero: Option<usize>,
    /// Index of the designated one.
    #[arg(long)]
    pub one: Option<usize>,
    /// Disable symmetry and forced-cell pruning.
    #[arg(long)]
    pub no_prune: bool,
    /// Maximum tables examined.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    /// Star candidate shape: all, singletons or cone.
    #[arg(long, default_value = "all")]
    pub shape: CandidateShape,
    /// Catalog directory for `.hyp` entries and `index.tsv`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct FixturesArgs {
    /// Directory to write into; without it the names are listed.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

/// Parses arguments and runs; returns the process exit code.
pub fn run_from<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli, out),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = write!(out, "{e}");
            code
        }
    }
}

pub fn run(cli: Cli, out: &mut dyn Write) -> i32 {
    let start = Instant::now();
    let (mut report, report_path, json) = match cli.command {
        Command::Verify(a) => (cmd_verify(&a), a.common.report.clone(), a.common.json),
        Command::GramSchmidt(a) => (cmd_gram_schmidt(&a), a.common.report.clone(), a.common.json),
        Command::Search(a) => (cmd_search(&a), a.common.report.clone(), a.common.json),
        Command::Fixtures(a) => (cmd_fixtures(&a), a.report.clone(), false),
    };
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    if let Some(path) = report_path {
        if let Err(e) = std::fs::write(&path, report.to_json() + "\n") {
            report.abort(&Error::Precondition(format!("cannot write report {}: {e}", path.display())));
        }
    }
    let _ = if json { writeln!(out, "{}", report.to_json()) } else { write!(out, "{}", report.render_human()) };
    report.exit_code
}

fn opts(c: &Common) -> CheckOptions {
    CheckOptions { max_violations: c.max_violations.max(1), jobs: c.jobs.max(1) }
}

/// Reads, parses and builds a structure file.
pub fn load(path: &Path) -> Result<Structure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Precondition(format!("cannot read {}: {e}", path.display())))?;
    parse_structure(&text)?.build()
}

fn strings(xs: &[Element]) -> Vec<String> {
    xs.iter().map(|e| e.to_string()).collect()
}

fn with_violations(mut rec: CheckRecord, vs: &[Violation]) -> CheckRecord {
    rec.violations = vs.iter().map(Violation::to_record).collect();
    if vs.is_empty() {
        rec
    } else {
        rec.fail()
    }
}

/// The additive hypergroup a structure-level check applies to.
fn target_group(s: &Structure) -> Option<&Hypergroup> {
    let g = match &s.space {
        Some(w) => &w.vectors,
        None => s.hypergroup.as_ref()?,
    };
    g.carrier().is_finite().then_some(g)
}

fn applies(id: &str, s: &Structure) -> bool {
    let d = &s.doc;
    let space = s.space.is_some();
    let inner = space && s.inner.is_some();
    // sample-driven checks need explicit samples on infinite carriers
    let sampled = s.space.as_ref().is_some_and(|w| Samples::or_full(w, &d.scalar_samples, &d.vector_samples).is_ok());
    match id {
        "semihypergroup" | "hypergroup" => target_group(s).is_some(),
        "hypergroup.consequences" => target_group(s).is_some_and(|g| g.commutative),
        "hyperring" | "hyperfield" => s.field.as_ref().is_some_and(|f| f.carrier().is_finite()),
        "hvs.axioms" | "negation.membership" => sampled,
        "dependence" => space && !d.independent.is_empty(),
        "basis" => space && !d.independent.is_empty() && !d.probes.is_empty(),
        "norm.axioms" => sampled && s.norm.is_some(),
        "inner.axioms" | "inner.consequences" | "bilinear" | "cauchy-schwarz" | "induced-norm" | "parallelogram" => {
            sampled && inner
        }
        "orthogonal" | "weak-independence" => inner && !d.orthogonal.is_empty(),
        "fourier" => inner && !d.orthogonal.is_empty() && !d.probes.is_empty(),
        "gram-schmidt" => inner && !d.independent.is_empty(),
        _ => false,
    }
}

fn cmd_verify(args: &VerifyArgs) -> Report {
    let mut report = Report::new("verify", Some(args.file.display().to_string()));
    if let Some(bad) = args.check.iter().find(|c| !CHECK_IDS.contains(&c.as_str())) {
        report.abort(&Error::Precondition(format!("unknown check {bad:?}; known checks: {}", CHECK_IDS.join(", "))));
        return report;
    }
    let s = match load(&args.file) {
        Ok(s) => s,
        Err(e) => {
            report.abort(&e);
            return report;
        }
    };
    let ids: Vec<&str> = if args.check.is_empty() {
        CHECK_IDS.iter().copied().filter(|id| applies(id, &s)).collect()
    } else {
        args.check.iter().map(String::as_str).collect()
    };
    let o = opts(&args.common);
    for id in ids {
        let rec = if applies(id, &s) {
            run_check(id, &s, &o).unwrap_or_else(|e| CheckRecord::new(id).errored(&e))
        } else {
            let e = Error::Precondition(format!("check {id:?} does not apply to this {} file", s.doc.kind.as_str()));
            CheckRecord::new(id).errored(&e)
        };
        report.checks.push(rec);
    }
    report.settle();
    report
}

/// Runs one applicable check.
pub fn run_check(id: &str, s: &Structure, o: &CheckOptions) -> Result<CheckRecord> {
    let rec = CheckRecord::new(id);
    if let Some(g) = target_group(s).filter(|_| id.starts_with("semihypergroup") || id.starts_with("hypergroup")) {
        return match id {
            "semihypergroup" => Ok(with_violations(rec, &check_semihypergroup(g, o)?)),
            "hypergroup" => {
                let r = check_hypergroup(g, o)?;
                let mut rec = with_violations(rec, &r.violations);
                rec = rec.detail(format!("zero candidates: {}", strings(&r.zero_candidates).join(" ")));
                if let Some(neg) = &r.neg {
                    let pairs: Vec<String> = neg.iter().map(|(a, b)| format!("-{a} = {b}")).collect();
                    rec = rec.detail(format!("negation: {}", pairs.join(", ")));
                }
                Ok(if r.is_hypergroup { rec } else { rec.fail() })
            }
            _ => Ok(with_violations(rec, &check_hypergroup_consequences(g, o)?)),
        };
    }
    if id == "hyperring" || id == "hyperfield" {
        let f = s.field.as_ref().expect("applicable");
        return if id == "hyperring" {
            let r = check_hyperring(&f.as_hyperring(), o)?;
            let rec = with_violations(rec, &r.violations);
            Ok(if r.is_hyperring { rec } else { rec.fail() })
        } else {
            let r = check_hyperfield(f, o)?;
            let mut rec = with_violations(rec, &r.violations);
            if let Some(inv) = &r.inv {
                let pairs: Vec<String> = inv.iter().map(|(a, b)| format!("{a}^-1 = {b}")).collect();
                rec = rec.detail(format!("inverses: {}", pairs.join(", ")));
            }
            Ok(if r.is_hyperfield { rec } else { rec.fail() })
        };
    }
    let w = s.space.as_ref().expect("applicable");
    space_check(id, s, w, o)
}

fn pool_of(w: &HyperVectorSpace, d: &StructureDoc) -> Result<CoefficientPool> {
    CoefficientPool::new(w, d.pool.iter().cloned())
}

fn pairs(xs: &[Element]) -> Vec<(Element, Element)> {
    xs.iter().flat_map(|a| xs.iter().map(move |b| (a.clone(), b.clone()))).collect()
}

/// Bilinear tuples: every scalar pair against cyclic windows of four vectors.
fn bilinear_tuples(samples: &Samples) -> Vec<[Element; 6]> {
    let v = &samples.vectors;
    let n = v.len();
    let mut out = Vec::new();
    for a in &samples.scalars {
        for b in &samples.scalars {
            for i in 0..n {
                let q = |k: usize| v[(i + k) % n].clone();
                out.push([q(0), a.clone(), q(1), q(2), b.clone(), q(3)]);
            }
        }
    }
    out
}

fn space_check(id: &str, s: &Structure, w: &HyperVectorSpace, o: &CheckOptions) -> Result<CheckRecord> {
    let d = &s.doc;
    let mut rec = CheckRecord::new(id);
    let samples = || Samples::or_full(w, &d.scalar_samples, &d.vector_samples);
    let sample_bounds =
        |sm: &Samples| Bounds { scalars: strings(&sm.scalars), vectors: strings(&sm.vectors), ..Default::default() };
    let ip = || s.inner.as_ref().expect("applicable");
    match id {
        "hvs.axioms" => {
            let sm = samples()?;
            rec.bounds = Some(sample_bounds(&sm));
            Ok(with_violations(rec, &check_hvs_axioms(w, &sm, o)?))
        }
        "negation.membership" => {
            let sm = samples()?;
            rec.bounds = Some(sample_bounds(&sm));
            Ok(with_violations(rec, &check_negation_membership(w, &sm.vectors, o)?))
        }
        "dependence" => {
            let pool = pool_of(w, d)?;
            rec.bounds = Some(Bounds { pool: strings(pool.members()), ..Default::default() });
            let dep = is_linearly_dependent(w, &d.independent, &pool)?;
            match dep.witness {
                Some(c) if dep.dependent => Ok(rec
                    .detail(format!("declared independent set is dependent: coefficients {}", strings(&c).join(" ")))
                    .fail()),
                _ => Ok(rec.detail("no pool combination with a nonzero coefficient contains theta")),
            }
        }
        "basis" => {
            let pool = pool_of(w, d)?;
            rec.bounds =
                Some(Bounds { pool: strings(pool.members()), probes: strings(&d.probes), ..Default::default() });
            let v = is_basis(w, &d.independent, &d.probes, &pool)?;
            for (p, c) in &v.representations {
                rec = rec.detail(format!("{p} reached with coefficients {}", strings(c).join(" ")));
            }
            if let Some(c) = &v.dependence_witness {
                rec = rec.detail(format!("dependent: coefficients {}", strings(c).join(" ")));
            }
            if !v.unreached.is_empty() {
                rec = rec.detail(format!("unreached probes: {}", strings(&v.unreached).join(" ")));
            }
            Ok(if v.is_basis { rec } else { rec.fail() })
        }
        "norm.axioms" => {
            let sm = samples()?;
            rec.bounds = Some(sample_bounds(&sm));
            Ok(with_violations(rec, &check_norm_axioms(w, s.norm.as_ref().expect("applicable"), &sm, o)?))
        }
        "inner.axioms" | "inner.consequences" | "induced-norm" => {
            let sm = samples()?;
            rec.bounds = Some(sample_bounds(&sm));
            let vs = match id {
                "inner.axioms" => check_inner_axioms(w, ip(), &sm, o)?,
                "inner.consequences" => check_inner_consequences(w, ip(), &sm, o)?,
                _ => check_induced_norm(w, ip(), &sm, o)?,
            };
            Ok(with_violations(rec, &vs))
        }
        "bilinear" => {
            let sm = samples()?;
            rec.bounds = Some(sample_bounds(&sm));
            let tuples = bilinear_tuples(&sm);
            rec = rec.detail(format!("{} tuples", tuples.len()));
            Ok(with_violations(rec, &check_bilinear(w, ip(), &tuples, o)?))
        }
        "cauchy-schwarz" | "parallelogram" => {
            let sm = samples()?;
            rec.bounds = Some(sample_bounds(&sm));
            let ps = pairs(&sm.vectors);
            let vs = if id == "cauchy-schwarz" {
                check_cauchy_schwarz(ip(), &ps, o)?
            } else {
                check_parallelogram(w, ip(), &ps, o)?
            };
            Ok(with_violations(rec, &vs))
        }
        "orthogonal" => {
            let r = orthogonality(ip(), &d.orthogonal)?;
            rec = rec.detail(format!("orthonormal: {}", r.orthonormal));
            match r.non_orthogonal_pair {
                Some((a, b)) => Ok(rec.detail(format!("<{a}, {b}> is not 0")).fail()),
                None => Ok(rec),
            }
        }
        "weak-independence" => {
            let pool = pool_of(w, d)?;
            let universe = VectorUniverse::new(w, d.universe.iter().cloned())?;
            rec.bounds = Some(Bounds {
                pool: strings(pool.members()),
                universe: strings(universe.members()),
                ..Default::default()
            });
            let r = check_orthogonal_weak_independence(w, ip(), &d.orthogonal, &pool, &universe, DEFAULT_UNIVERSE_CAP)?;
            rec = rec.detail(format!(
                "P ranges over subsets of the declared universe; {} tuples examined",
                r.tuples_examined
            ));
            match r.counterexample {
                Some((c, p)) => {
                    Ok(rec.detail(format!("coefficients {} equal 0*P for P = {p}", strings(&c).join(" "))).fail())
                }
                None => Ok(rec),
            }
        }
        "fourier" => {
            rec.bounds = Some(Bounds { probes: strings(&d.probes), ..Default::default() });
            let mut ok = true;
            for p in &d.probes {
                let f = check_fourier_representation(w, ip(), p, &d.orthogonal)?;
                ok &= f.reconstructs;
                rec = rec.detail(format!(
                    "{p}: coefficients {} {}",
                    strings(&f.coefficients).join(" "),
                    if f.reconstructs { "reconstruct it" } else { "do not reconstruct it" }
                ));
            }
            Ok(if ok { rec } else { rec.fail() })
        }
        "gram-schmidt" => gram_schmidt_record(w, ip(), &d.independent, d, rec),
        other => Err(Error::Precondition(format!("unknown check {other:?}"))),
    }
}

/// Runs Gram-Schmidt and records the log, the orthogonality verdict, Fourier
/// reconstruction of each input and span agreement on the probes.
fn gram_schmidt_record(
    w: &HyperVectorSpace,
    ip: &InnerProduct,
    input: &[Element],
    d: &StructureDoc,
    mut rec: CheckRecord,
) -> Result<CheckRecord> {
    rec = rec.detail(format!("input: {}", strings(input).join(" ")));
    let gs = match gram_schmidt(w, ip, input) {
        Ok(gs) => gs,
        Err(Error::NotIndependent(m)) => {
            return Ok(rec
                .detail(format!("input not linearly independent: {m}"))
                .detail("a candidate set inside {theta} means the vector is a combination of the earlier ones")
                .fail())
        }
        Err(e) => return Err(e),
    };
    for st in &gs.steps {
        let coeffs: Vec<String> = st.coefficients.iter().map(|c| c.to_string()).collect();
        rec = rec.detail(format!(
            "step {}: coefficients [{}] correction {} candidates {} chosen {}",
            st.index + 1,
            coeffs.join(", "),
            st.correction,
            st.candidates,
            st.chosen
        ));
    }
    rec = rec.detail(format!("output: {}", strings(&gs.vectors).join(" ")));
    let mut ok = true;
    let orth = orthogonality(ip, &gs.vectors)?;
    ok &= orth.orthogonal;
    rec = rec.detail(format!("output orthogonal: {}", orth.orthogonal));
    for v in input {
        let f = check_fourier_representation(w, ip, v, &gs.vectors)?;
        ok &= f.reconstructs;
        rec = rec.detail(format!(
            "{v} = combination with coefficients {}: {}",
            strings(&f.coefficients).join(" "),
            f.reconstructs
        ));
    }
    let pool = widen_pool_by_fourier(w, ip, &pool_of(w, d)?, &gs.vectors, &d.probes)?;
    rec.bounds = Some(Bounds { pool: strings(pool.members()), probes: strings(&d.probes), ..Default::default() });
    let span = check_span_preserved(w, input, &gs.vectors, &pool, &d.probes)?;
    for p in &span.probes {
        let show = |c: &Option<Vec<Element>>| c.as_ref().map_or("unreached".to_string(), |c| strings(c).join(" "));
        rec = rec.detail(format!(
            "probe {}: original [{}] orthogonalized [{}]",
            p.probe,
            show(&p.over_original),
            show(&p.over_orthogonalized)
        ));
    }
    ok &= span.agrees;
    Ok(if ok { rec } else { rec.fail() })
}

fn cmd_gram_schmidt(args: &GramSchmidtArgs) -> Report {
    let mut report = Report::new("gram-schmidt", Some(args.file.display().to_string()));
    let run = || -> Result<Vec<CheckRecord>> {
        let s = load(&args.file)?;
        let (Some(w), Some(ip)) = (s.space.as_ref(), s.inner.as_ref()) else {
            return Err(Error::Precondition("gram-schmidt needs a hyperspace file with `inner`".into()));
        };
        let input = if args.vectors.is_empty() {
            s.doc.independent.clone()
        } else {
            args.vectors
                .iter()
                .map(|t| {
                    w.vectors
                        .carrier()
                        .parse_element(t)
                        .ok_or_else(|| Error::Domain(format!("{t:?} is not a vector of this space")))
                })
                .collect::<Result<Vec<_>>>()?
        };
        if input.is_empty() {
            return Err(Error::Precondition("no input vectors given and no `independent` list in the file".into()));
        }
        let o = opts(&args.common);
        // the space must be an inner-product hyperspace on its samples before orthogonalizing
        let mut recs = vec![space_check("hvs.axioms", &s, w, &o)?, space_check("inner.axioms", &s, w, &o)?];
        if recs.iter().all(|r| r.violations.is_empty()) {
            recs.push(gram_schmidt_record(w, ip, &input, &s.doc, CheckRecord::new("gram-schmidt"))?);
        }
        Ok(recs)
    };
    match run() {
        Ok(recs) => {
            report.checks = recs;
            report.settle();
        }
        Err(e) => report.abort(&e),
    }
    report
}

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::Precondition(format!("{}: {e}", path.display()))
}

fn cmd_search(args: &SearchArgs) -> Report {
    let mut report = Report::new("search", None);
    let id = format!("search.{}", args.kind);
    match search_record(args, &id) {
        Ok(rec) => {
            report.checks.push(rec);
            report.settle();
        }
        Err(e) => report.abort(&e),
    }
    report
}

fn search_record(args: &SearchArgs, id: &str) -> Result<CheckRecord> {
    let mut rec = CheckRecord::new(id);
    if args.kind == SearchKind::Star {
        let mut cfg = StarSearchConfig::new(args.order).shape(args.shape);
        cfg.budget = args.budget;
        cfg.jobs = args.common.jobs.max(1);
        cfg.max_violations = args.common.max_violations.max(1);
        let r = search_star_models(&cfg, &InnerProduct::dot())?;
        rec.bounds = Some(Bounds { pool: strings(&r.pool), universe: strings(&r.window), ..Default::default() });
        rec.violations = r.rejections.iter().map(Violation::to_record).collect();
        rec = rec
            .detail(format!("examined {} of {} assignments", r.examined, r.space))
            .detail(format!("models: {}", r.models.len()))
            .detail(format!("non-singleton models: {}", r.non_singleton_models));
        for (i, m) in r.models.iter().enumerate().take(args.common.max_violations.max(1)) {
            let cells: Vec<String> = m.cells.iter().map(|((a, v), s)| format!("{a}*{v}={s}")).collect();
            rec = rec.detail(format!("model {}: {}", i + 1, cells.join("; ")));
        }
        if r.partial {
            return Ok(rec.errored(&Error::Budget(format!("budget of {} exhausted; results are partial", args.budget))));
        }
        return Ok(rec);
    }

    let mut spec = SearchSpec::new(args.kind, args.order)
        .commutative(args.commutative || args.kind == SearchKind::Hyperfield)
        .budget(args.budget)
        .jobs(args.common.jobs.max(1))
        .prune(!args.no_prune);
    if let Some(z) = args.zero {
        spec = spec.zero(z);
    }
    if let Some(o) = args.one {
        spec = spec.one(o);
    }
    let outcome = match args.kind {
        SearchKind::Hypergroup => enumerate_hypergroups(&spec)?,
        _ => enumerate_hyperfields(&spec)?,
    };
    rec = rec
        .detail(format!("carrier: {}", atom_names(args.order).join(" ")))
        .detail(format!("examined {} of {} tables", outcome.examined, outcome.space))
        .detail(format!("{} {}(s) up to relabeling", outcome.entries.len(), args.kind));
    let mut index = String::from("kind\tsize\tkey\tpath\n");
    if let Some(dir) = &args.out {
        std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    }
    for (i, entry) in outcome.entries.iter().enumerate() {
        let mut doc = match args.kind {
            SearchKind::Hypergroup => StructureDoc::from_hypergroup(&entry.hypergroup()?)?,
            _ => StructureDoc::from_hyperfield(&entry.hyperfield()?)?,
        };
        doc.name = Some(entry.key.clone());
        let file = format!("{}-{}-{:04}.hyp", args.kind, args.order, i + 1);
        rec = rec.detail(format!("{} digest {} -> {file}", entry.key, entry.digest));
        index.push_str(&format!("{}\t{}\t{}\t{file}\n", args.kind, args.order, entry.key));
        if let Some(dir) = &args.out {
            let path = dir.join(&file);
            std::fs::write(&path, serialize_structure(&doc)).map_err(|e| io_err(&path, e))?;
        }
    }
    if let Some(dir) = &args.out {
        let path = dir.join("index.tsv");
        std::fs::write(&path, index).map_err(|e| io_err(&path, e))?;
    }
    if outcome.partial {
        return Ok(rec.errored(&Error::Budget(format!("budget of {} exhausted; results are partial", args.budget))));
    }
    Ok(rec)
}

fn cmd_fixtures(args: &FixturesArgs) -> Report {
    let mut report = Report::new("fixtures", args.out.as_ref().map(|p| p.display().to_string()));
    let run = || -> Result<CheckRecord> {
        let mut rec = CheckRecord::new("fixtures");
        match &args.out {
            Some(dir) => {
                for p in fixtures::write_all(dir)? {
                    rec = rec.detail(format!("wrote {}", p.display()));
                }
            }
            None => {
                for f in fixtures::all()? {
                    rec = rec.detail(format!("{} ({})", f.file_name(), f.doc.kind.as_str()));
                }
            }
        }
        Ok(rec)
    };
    match run() {
        Ok(rec) => {
            report.checks.push(rec);
            report.settle();
        }
        Err(e) => report.abort(&e),
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::{parse_report, EXIT_BUDGET, EXIT_PASS, EXIT_VIOLATIONS};

    fn run_args(args: &[&str]) -> (i32, String) {
        let mut out = Vec::new();
        let code = run_from(std::iter::once("hyperspaces").chain(args.iter().copied()), &mut out);
        (code, String::from_utf8(out).unwrap())
    }

    fn fixture_file(dir: &Path, name: &str) -> String {
        let f = fixtures::get(name).unwrap();
        let path = dir.join(f.file_name());
        std::fs::write(&path, f.text()).unwrap();
        path.display().to_string()
    }

    #[test]
    fn verify_exit_codes() {
        let dir = tempfile::tempdir().unwrap();
        let krasner = fixture_file(dir.path(), "krasner");
        let (code, text) = run_args(&["verify", &krasner, "--all"]);
        assert_eq!(code, EXIT_PASS, "{text}");
        assert!(text.contains("[PASS] hyperfield"));

        let cone = fixture_file(dir.path(), "cone");
        let (code, text) = run_args(&["verify", &cone, "--check", "inner.axioms", "--json"]);
        assert_eq!(code, EXIT_VIOLATIONS);
        let r = parse_report(&text).unwrap();
        assert!(r.checks[0].violations.iter().any(|v| v.witness == ["1", "(1, 0)", "(-1, 0)"]));

        let (code, _) = run_args(&["verify", &krasner, "--check", "no.such.check"]);
        assert_eq!(code, EXIT_INPUT);
        let (code, _) = run_args(&["verify", &krasner, "--check", "inner.axioms"]);
        assert_eq!(code, EXIT_INPUT);
        let (code, _) = run_args(&["search", "--kind", "hypergroup", "--order", "9"]);
        assert_eq!(code, EXIT_BUDGET);
    }

    #[test]
    fn gram_schmidt_command() {
        let dir = tempfile::tempdir().unwrap();
        let q2 = fixture_file(dir.path(), "trivial_q2");
        let (code, text) = run_args(&["gram-schmidt", &q2, "(1, 1)", "(1, 0)"]);
        assert_eq!(code, EXIT_PASS, "{text}");
        assert!(text.contains("output: (1, 1) (1/2, -1/2)"), "{text}");
        let (code, text) = run_args(&["gram-schmidt", &q2, "(1, 0)", "(2, 0)"]);
        assert_eq!(code, EXIT_VIOLATIONS);
        assert!(text.contains("input not linearly independent"));
        let (code, _) = run_args(&["gram-schmidt", &q2, "(1, 0, 0)"]);
        assert_eq!(code, EXIT_INPUT);
    }

    #[test]
    fn search_writes_catalog() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("cat");
        let report = dir.path().join("r.json");
        let args = ["search", "--kind", "hypergroup", "--order", "2", "--commutative", "--zero", "0", "--out"];
        let mut args: Vec<&str> = args.to_vec();
        let (o, r) = (out.display().to_string(), report.display().to_string());
        args.extend([o.as_str(), "--report", r.as_str()]);
        let (code, _) = run_args(&args);
        assert_eq!(code, EXIT_PASS);
        let index = std::fs::read_to_string(out.join("index.tsv")).unwrap();
        assert!(index.contains("hg2:1.2.2.1") && index.contains("hg2:1.2.2.3"));
        for line in index.lines().skip(1) {
            let path = out.join(line.split('\t').nth(3).unwrap());
            let s = load(&path).unwrap();
            assert!(check_hypergroup(s.hypergroup.as_ref().unwrap(), &CheckOptions::default()).unwrap().is_hypergroup);
        }
        parse_report(&std::fs::read_to_string(report).unwrap()).unwrap();
    }
}
