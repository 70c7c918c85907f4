//! Approximate GKZ vectors by developing the universal cover.
//!
//!     cargo run --release --example gkz_vector

use hypfan::cli::load_surface;
use hypfan::develop::{gkz_after_flips, gkz_vector_with, Anchor, GkzFormula};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let d = load_surface(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/surfaces/t2.json"))?;
    let tol = 1e-5;
    // flip logs from the input triangulation
    for (name, flips) in [("D", vec![]), ("D'", vec![0, 1, 2, 0]), ("T", vec![0]), ("T'", vec![1, 4])] {
        let g = gkz_after_flips(&d, &flips, tol, None)?;
        let (e, a) = Anchor::base(&d, None)?.replay(&d, &flips)?;
        let s = gkz_vector_with(&e, &a, tol, GkzFormula::TriangleSum)?;
        println!(
            "{name:>2}: phi = ({:.6}, {:.6})  summed-vertex ({:.5}, {:.5})  {} triangles",
            g.phi[0], g.phi[1], s.phi[0], s.phi[1], g.triangles_developed
        );
    }
    Ok(())
}
