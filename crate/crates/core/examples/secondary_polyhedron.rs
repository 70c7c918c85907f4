//! Fan, GKZ vertices and the normal-fan check for every bundled surface.
//!
//!     cargo run --release --example secondary_polyhedron

use hypfan::cli::load_surface;
use hypfan::exact::int;
use hypfan::fan::enumerate_fan;
use hypfan::polyhedron::{check_normal_fan, secondary_polyhedron};
use hypfan::Weighting;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for name in ["t1", "t2", "t2b", "s3", "t3"] {
        let d = load_surface(format!("{}/examples/surfaces/{name}.json", env!("CARGO_MANIFEST_DIR")))?;
        let fan = enumerate_fan(&d, &Weighting::new(vec![int(1); d.num_cusps()])?, 0)?;
        let p = secondary_polyhedron(&d, &fan, 1e-5)?;
        let r = check_normal_fan(&p, &fan, 1e-3)?;
        println!(
            "{name}: {} vertices, {} bounded edges, worst margin {:?}, wall gap {:.1e}",
            p.vertices.len(),
            p.bounded_edges.len(),
            r.worst_margin,
            r.worst_wall_gap
        );
        for v in &p.vertices {
            let phi: Vec<String> = v.gkz.phi.iter().map(|x| format!("{x:.5}")).collect();
            println!("    ({})", phi.join(", "));
        }
    }
    Ok(())
}
