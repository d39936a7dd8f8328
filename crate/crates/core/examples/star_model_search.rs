//! Searches set-valued scalar actions on a small window of Q^d that are
//! compatible with the dot product, and reports whether any model has a
//! cell with more than one vector.

use hyperspaces::inner::InnerProduct;
use hyperspaces::search::{search_star_models, CandidateShape, StarSearchConfig};

fn main() -> hyperspaces::Result<()> {
    let ip = InnerProduct::dot();
    for (dim, shape) in [
        (1, CandidateShape::Singletons),
        (1, CandidateShape::Cone),
        (1, CandidateShape::AllSubsets),
        (2, CandidateShape::Singletons),
    ] {
        let out = search_star_models(&StarSearchConfig::new(dim).shape(shape), &ip)?;
        println!(
            "dim {dim}, {shape:?}: window of {} vectors, {} models, {} with a non-singleton cell, {} assignments examined{}",
            out.window.len(),
            out.models.len(),
            out.non_singleton_models,
            out.examined,
            if out.partial { " (partial)" } else { "" }
        );
        if let Some(v) = out.rejections.first() {
            println!("  first rejection: {v}");
        }
    }
    Ok(())
}
