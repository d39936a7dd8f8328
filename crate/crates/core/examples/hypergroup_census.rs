//! Counts commutative hypergroups of order at most 3 up to relabeling and
//! confirms the consequences of the hypergroup axioms on every one found.

use hyperspaces::hyperstructures::check_hypergroup_consequences;
use hyperspaces::search::{enumerate_hypergroups, SearchKind, SearchSpec};
use hyperspaces::violation::CheckOptions;

fn main() -> hyperspaces::Result<()> {
    let jobs = std::thread::available_parallelism().map_or(1, |n| n.get());
    for n in 1..=3 {
        let spec = SearchSpec::new(SearchKind::Hypergroup, n).commutative(true).jobs(jobs);
        let out = enumerate_hypergroups(&spec)?;
        println!("order {n}: {} hypergroups ({} of {} tables examined)", out.entries.len(), out.examined, out.space);
        for e in &out.entries {
            let vs = check_hypergroup_consequences(&e.hypergroup()?, &CheckOptions::default())?;
            println!("  {}  consequences violated: {}", e.key, vs.len());
        }
    }
    let with_zero = enumerate_hypergroups(&SearchSpec::new(SearchKind::Hypergroup, 2).commutative(true).zero(0))?;
    println!("order 2 with designated zero 0: {:?}", with_zero.keys());
    Ok(())
}
