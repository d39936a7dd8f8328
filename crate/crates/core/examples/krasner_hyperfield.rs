//! Builds the Krasner hyperfield as GF(3) modulo its units, checks the
//! hyperfield axioms, and shows a one-cell mutation failing with a witness
//! that replays through the tables.

use hyperspaces::element::Element;
use hyperspaces::fixtures;
use hyperspaces::hyperstructures::{
    check_hyperfield, krasner_quotient, relation_holds, replay, ClassicalField, Subgroup,
};
use hyperspaces::violation::CheckOptions;

fn main() -> hyperspaces::Result<()> {
    let opts = CheckOptions::default();
    let gf3 = ClassicalField::prime(3)?;
    let units = Subgroup::Elements(vec![Element::atom(1, "1"), Element::atom(2, "2")]);
    let krasner = krasner_quotient(&gf3, &units)?;
    let elems = krasner.carrier().elements().expect("finite").to_vec();
    println!("Krasner hyperfield on {{{}}}", elems.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(", "));
    for a in &elems {
        for b in &elems {
            println!("  {a} + {b} = {}    {a} * {b} = {}", krasner.add.apply(a, b)?, krasner.mul.apply(a, b)?);
        }
    }
    let report = check_hyperfield(&krasner, &opts)?;
    println!("hyperfield: {}", report.is_hyperfield);

    // GF(5) modulo its squares {1, 4} is a three-element quotient hyperfield
    let gf5 = ClassicalField::prime(5)?;
    let squares = Subgroup::Elements(vec![Element::atom(1, "1"), Element::atom(4, "4")]);
    let quotient = krasner_quotient(&gf5, &squares)?;
    println!(
        "GF(5)/{{1, 4}} has {} elements; hyperfield: {}",
        quotient.carrier().elements().unwrap().len(),
        check_hyperfield(&quotient, &opts)?.is_hyperfield
    );

    let mutant = fixtures::get("krasner_mut_add_1_1")?;
    let field = mutant.doc.build()?.field.expect("hyperfield fixture");
    let report = check_hyperfield(&field, &opts)?;
    println!("{} ({:?}): hyperfield = {}", mutant.name, mutant.expect, report.is_hyperfield);
    for v in report.violations.iter().take(3) {
        print!("  {v}");
        match replay(&field, v) {
            Ok((l, r)) => println!("  [replayed: {l} vs {r}, holds = {}]", relation_holds(v.axiom, &l, &r)),
            Err(_) => println!(),
        }
    }
    Ok(())
}
