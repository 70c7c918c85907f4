//! Enumerate and validate the secondary fan of a surface file.
//!
//!     cargo run --example enumerate_fan -- examples/surfaces/t2b.json

use hypfan::cli::load_surface;
use hypfan::exact::int;
use hypfan::fan::enumerate_fan;
use hypfan::Weighting;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/examples/surfaces/t2b.json").into());
    let d = load_surface(&path)?;
    let start = Weighting::new(vec![int(1); d.num_cusps()])?;
    let fan = enumerate_fan(&d, &start, 0)?;
    let check = fan.validate()?;
    println!("f-vector {:?}; {} interior walls", fan.f_vector, check.interior_facets);
    for (i, (c, rays)) in fan.maximal_cones.iter().zip(&fan.cone_rays).enumerate() {
        let kind = if c.label.is_triangulation() { "triangulation".to_string() } else { format!("weak edges {:?}", c.label.weak_edges) };
        println!("cone {i}: rays {rays:?}, {kind}");
    }
    Ok(())
}
