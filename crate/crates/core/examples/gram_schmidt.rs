//! Set-valued Gram-Schmidt in Q^3: the per-step candidate sets, the chosen
//! vectors, Fourier reconstruction of the input, and the dependent case.

use hyperspaces::element::Element;
use hyperspaces::hyperspace::{HyperVectorSpace, StarOp};
use hyperspaces::inner::{check_fourier_representation, gram_schmidt, is_orthogonal_set, InnerProduct};

fn main() -> hyperspaces::Result<()> {
    let w = HyperVectorSpace::rational(3, StarOp::scale());
    let ip = InnerProduct::dot();
    let input = [Element::vector([1, 1, 0]), Element::vector([1, 0, 1]), Element::vector([0, 1, 1])];
    let gs = gram_schmidt(&w, &ip, &input)?;
    for st in &gs.steps {
        let coeffs: Vec<String> = st.coefficients.iter().map(|c| c.to_string()).collect();
        println!(
            "v{}: coefficients [{}], candidates {}, chosen {}",
            st.index + 1,
            coeffs.join(", "),
            st.candidates,
            st.chosen
        );
    }
    println!("orthogonal: {}", is_orthogonal_set(&ip, &gs.vectors)?);
    for x in &input {
        let f = check_fourier_representation(&w, &ip, x, &gs.vectors)?;
        let c: Vec<String> = f.coefficients.iter().map(|c| c.to_string()).collect();
        println!("{x} has Fourier coefficients ({}); reconstructs: {}", c.join(", "), f.reconstructs);
    }
    match gram_schmidt(&w, &ip, &[Element::vector([1, 0, 0]), Element::vector([2, 0, 0])]) {
        Ok(_) => println!("unexpected success"),
        Err(e) => println!("dependent input: {e}"),
    }
    Ok(())
}
