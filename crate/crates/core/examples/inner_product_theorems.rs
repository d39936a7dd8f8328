//! Inner-product consequences on Q^2 with the dot product: the bilinear
//! expansion, Cauchy-Schwarz, the induced norm and the parallelogram law,
//! followed by the cone action, which breaks homogeneity.

use hyperspaces::element::Element;
use hyperspaces::hyperspace::{HyperVectorSpace, Samples, StarOp};
use hyperspaces::inner::{
    bilinear_expand, check_cauchy_schwarz, check_induced_norm, check_inner_axioms, induced_norm, parallelogram_sides,
    InnerProduct,
};
use hyperspaces::violation::CheckOptions;

fn main() -> hyperspaces::Result<()> {
    let ip = InnerProduct::dot();
    let w = HyperVectorSpace::rational(2, StarOp::scale());
    let v = |x, y| Element::vector([x, y]);
    let (a, b) = (Element::int(2), Element::ratio(-1, 3));

    let e = bilinear_expand(&w, &ip, &v(1, 2), &a, &v(0, 1), &v(3, -1), &b, &v(1, 1))?;
    println!(
        "bilinear: enumerated sup {} at [{}], formula {}",
        e.enumerated.value,
        e.enumerated.attained_at.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "),
        e.formula
    );

    let pairs = [(v(1, 2), v(3, -1)), (v(2, 2), v(1, 1))];
    println!("Cauchy-Schwarz violations: {}", check_cauchy_schwarz(&ip, &pairs, &CheckOptions::default())?.len());
    println!("‖(1, 1)‖ = {}, ‖(3, 4)‖ = {}", induced_norm(&ip, &v(1, 1))?, induced_norm(&ip, &v(3, 4))?);

    let samples = Samples::new(vec![a.clone(), b.clone(), Element::int(0)], vec![v(1, 2), v(3, -1), v(0, 0)]);
    println!("induced-norm violations: {}", check_induced_norm(&w, &ip, &samples, &CheckOptions::default())?.len());
    let (lhs, rhs) = parallelogram_sides(&w, &ip, &v(1, 2), &v(3, -1))?;
    println!("parallelogram: {lhs} vs {rhs}");

    let cone = HyperVectorSpace::rational(2, StarOp::cone());
    let samples = Samples::new(vec![Element::int(1)], vec![v(1, 0), v(-1, 0)]);
    for viol in check_inner_axioms(&cone, &ip, &samples, &CheckOptions::default())? {
        println!("cone: {viol}");
    }
    Ok(())
}
