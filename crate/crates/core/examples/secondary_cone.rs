//! Exact secondary cones: the two cones of the twice-punctured torus and the
//! central cone of the thrice-punctured sphere.
//!
//!     cargo run --example secondary_cone

use hypfan::cli::load_surface;
use hypfan::fan::cone_at;
use hypfan::Weighting;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/surfaces");
    let t2 = load_surface(format!("{dir}/t2.json"))?;
    for w in [[9, 3], [3, 9], [1, 1]] {
        let c = cone_at(&t2, &Weighting::from_ints(&w)?)?;
        println!("torus, w = {w:?}: {}", c.to_json());
    }
    let s3 = load_surface(format!("{dir}/s3.json"))?;
    let c = cone_at(&s3, &Weighting::from_ints(&[1, 1, 1])?)?;
    for f in &c.facets {
        println!("sphere facet: {f:?} . w >= 0");
    }
    Ok(())
}
