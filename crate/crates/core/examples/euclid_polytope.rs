//! Secondary polytopes of small planar point sets.
//!
//!     cargo run --example euclid_polytope

use hypfan::euclid::PointConfiguration;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let configs: [(&str, &[&[i64]]); 3] = [
        ("square", &[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]),
        ("square with a point inside", &[&[0, 0], &[4, 0], &[0, 4], &[4, 4], &[1, 2]]),
        ("hexagon", &[&[1, 0], &[1, 1], &[0, 1], &[-1, 0], &[-1, -1], &[0, -1]]),
    ];
    for (name, pts) in configs {
        let a = PointConfiguration::from_ints(pts)?;
        let p = a.secondary_polytope()?;
        println!("{name}: {} triangulations, dim {}, f-vector {:?}", p.triangulations.len(), p.dim, p.f_vector);
    }
    Ok(())
}
