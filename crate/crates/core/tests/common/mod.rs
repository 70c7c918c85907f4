#![allow(dead_code)]

use hypfan::cli::load_surface;
use hypfan::exact::rat;
use hypfan::{DecoratedSurface, Weighting};
use proptest::prelude::*;

pub const NAMES: [&str; 5] = ["t1", "t2", "t2b", "s3", "t3"];

pub fn path(name: &str) -> String {
    format!("{}/examples/surfaces/{name}.json", env!("CARGO_MANIFEST_DIR"))
}

pub fn surface(name: &str) -> DecoratedSurface {
    load_surface(path(name)).unwrap()
}

pub fn weighting(n: usize) -> impl Strategy<Value = Weighting> {
    prop::collection::vec((1i64..=60, 1i64..=12), n)
        .prop_map(|v| Weighting::new(v.into_iter().map(|(p, q)| rat(p, q)).collect()).unwrap())
}
