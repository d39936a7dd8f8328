//! Reads a structure file, builds it, runs checks through the CLI layer and
//! prints the JSON report that `verify --report` would write.

use hyperspaces::cli::{run_check, CHECK_IDS};
use hyperspaces::format::{parse_structure, serialize_structure};
use hyperspaces::report::{parse_report, Report};
use hyperspaces::violation::CheckOptions;

const TEXT: &str = "\
structure hyperfield
name three-element quotient   # a comment
carrier atoms 0 1 2
zero 0
one 1
hyperadd
  0 + 0 = {0}
  0 + 1 = {1}
  0 + 2 = {2}
  1 + 0 = {1}
  1 + 1 = {1, 2}
  1 + 2 = {0, 1, 2}
  2 + 0 = {2}
  2 + 1 = {0, 1, 2}
  2 + 2 = {1, 2}
mul
  0 * 0 = 0
  0 * 1 = 0
  0 * 2 = 0
  1 * 0 = 0
  1 * 1 = 1
  1 * 2 = 2
  2 * 0 = 0
  2 * 1 = 2
  2 * 2 = 1
";

fn main() -> hyperspaces::Result<()> {
    let doc = parse_structure(TEXT)?;
    println!("canonical form:\n{}", serialize_structure(&doc));
    let s = doc.build()?;
    let mut report = Report::new("verify", Some("inline".into()));
    for id in CHECK_IDS.iter().filter(|id| ["hypergroup", "hyperring", "hyperfield"].contains(id)) {
        report.checks.push(run_check(id, &s, &CheckOptions::default())?);
    }
    report.settle();
    print!("{}", report.render_human());
    let json = report.to_json();
    parse_report(&json).map_err(hyperspaces::Error::Malformed)?;
    println!("{json}");

    match parse_structure(&TEXT.replace("1 + 1 = {1, 2}", "1 + 1 = {}")) {
        Ok(_) => println!("unexpected parse"),
        Err(e) => println!("empty cell: {e}"),
    }
    Ok(())
}
