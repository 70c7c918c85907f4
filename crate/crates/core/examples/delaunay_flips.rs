//! Flip the twice-punctured torus to the Delaunay triangulation for a few weights.
//!
//!     cargo run --example delaunay_flips

use hypfan::cli::load_surface;
use hypfan::exact::format_rational;
use hypfan::Weighting;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let d = load_surface(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/surfaces/t2.json"))?;
    let w0: Vec<String> = d.cusp_weights().iter().map(format_rational).collect();
    println!("cusp weights of the decoration: ({})", w0.join(", "));
    for w in [[9, 3], [1, 1], [3, 9], [1, 5]] {
        let w = Weighting::from_ints(&w)?;
        let run = d.make_delaunay(&w)?;
        let margins: Vec<String> = run.surface.delaunay_margins(&w)?.iter().map(format_rational).collect();
        println!("w = {w}: flips {:?}, margins [{}]", run.flips, margins.join(", "));
    }
    Ok(())
}
