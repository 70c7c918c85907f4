//! Write SVG pictures of the fans of the twice-punctured torus and the
//! thrice-punctured sphere.
//!
//!     cargo run --example plot_fan -- /tmp

use hypfan::cli::{load_surface, render, SCHEMA};
use hypfan::exact::int;
use hypfan::fan::enumerate_fan;
use hypfan::Weighting;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args().nth(1).unwrap_or_else(|| std::env::temp_dir().display().to_string());
    for name in ["t2", "t2b", "s3"] {
        let d = load_surface(format!("{}/examples/surfaces/{name}.json", env!("CARGO_MANIFEST_DIR")))?;
        let fan = enumerate_fan(&d, &Weighting::new(vec![int(1); d.num_cusps()])?, 0)?;
        let mut doc = fan.to_json();
        doc["schema"] = SCHEMA.into();
        doc["kind"] = "fan".into();
        let path = format!("{out}/{name}-fan.svg");
        std::fs::write(&path, render(&doc)?)?;
        println!("wrote {path}");
    }
    Ok(())
}
