//! Pool-bounded linear dependence, bases and weak independence in the
//! trivial hypervector space Q^2.

use hyperspaces::element::Element;
use hyperspaces::hyperspace::{
    is_basis, is_linearly_dependent, is_weak_linearly_independent, linear_combination, CoefficientPool,
    HyperVectorSpace, StarOp, VectorUniverse, DEFAULT_UNIVERSE_CAP,
};

fn show(xs: &[Element]) -> String {
    xs.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(", ")
}

fn main() -> hyperspaces::Result<()> {
    let w = HyperVectorSpace::rational(2, StarOp::scale());
    let pool = CoefficientPool::new(&w, [Element::int(2), Element::int(-2), Element::int(3)])?;
    println!("pool in search order: {}", show(pool.members()));

    let v = |x, y| Element::vector([x, y]);
    let combo = linear_combination(&w, &[Element::int(2), Element::int(-1)], &[v(1, 2), v(2, 4)])?;
    println!("2*(1, 2) # -1*(2, 4) = {combo}");

    for set in [vec![v(1, 2), v(2, 4)], vec![v(1, 0), v(0, 1)], vec![v(1, 1), v(1, -1), v(3, 1)]] {
        let d = is_linearly_dependent(&w, &set, &pool)?;
        println!("{{{}}}: dependent = {}, witness = {:?}", show(&set), d.dependent, d.witness.map(|c| show(&c)));
    }

    let probes = [v(3, 2), v(-1, 4), v(5, 5)];
    let b = is_basis(&w, &[v(1, 0), v(0, 1)], &probes, &pool)?;
    println!("basis over probes: {}; unreached: [{}]", b.is_basis, show(&b.unreached));
    for (p, c) in &b.representations {
        println!("  {p} = combination with coefficients ({})", show(c));
    }

    let universe = VectorUniverse::new(&w, [v(1, 0), v(0, 1), v(1, 1)])?;
    let weak = is_weak_linearly_independent(&w, &[v(1, 0), v(0, 1)], &pool, &universe, DEFAULT_UNIVERSE_CAP)?;
    println!("weakly independent: {} after {} tuples", weak.independent, weak.tuples_examined);
    Ok(())
}
