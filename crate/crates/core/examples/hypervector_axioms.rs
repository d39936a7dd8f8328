//! Checks the hypervector-space axioms for three scalar actions on Q^2: the
//! classical scaling, the cone action a*v = {av, θ}, and a*v = {av, v}.

use hyperspaces::element::Element;
use hyperspaces::hyperspace::{check_hvs_axioms, check_negation_membership, HyperVectorSpace, Samples, StarOp};
use hyperspaces::violation::CheckOptions;

fn main() -> hyperspaces::Result<()> {
    let scalars: Vec<Element> = [-2, -1, 0, 1, 2, 3].into_iter().map(Element::int).collect();
    let vectors = vec![Element::vector([0, 0]), Element::vector([1, 0]), Element::vector([1, -2])];
    let samples = Samples::new(scalars, vectors.clone());
    for star in [StarOp::scale(), StarOp::cone(), StarOp::scale_or_self()] {
        let name = star.builtin_name().unwrap_or("custom").to_string();
        let w = HyperVectorSpace::rational(2, star);
        let vs = check_hvs_axioms(&w, &samples, &CheckOptions::with_cap(2))?;
        let neg = check_negation_membership(&w, &vectors, &CheckOptions::default())?;
        println!("{name}: {} axiom violations, -α ∈ (-1)*α fails {} times", vs.len(), neg.len());
        for v in vs.iter().take(4) {
            println!("  {v}");
        }
    }
    Ok(())
}
