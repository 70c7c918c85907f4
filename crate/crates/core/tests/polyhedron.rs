mod common;

use hypfan::exact::int;
use hypfan::fan::{enumerate_fan, SecondaryFan};
use hypfan::polyhedron::{check_normal_fan, lifting_check, secondary_polyhedron, secondary_polyhedron_with, PolyhedronError};
use hypfan::develop::rotation;
use hypfan::{DecoratedSurface, Weighting};
use proptest::prelude::*;

fn setup(name: &str) -> (DecoratedSurface, SecondaryFan) {
    let d = common::surface(name);
    let ones = Weighting::new(vec![int(1); d.num_cusps()]).unwrap();
    let fan = enumerate_fan(&d, &ones, 0).unwrap();
    (d, fan)
}

#[test]
fn twice_punctured_torus_has_one_bounded_edge() {
    let (d, fan) = setup("t2");
    let p = secondary_polyhedron(&d, &fan, 1e-5).unwrap();
    assert_eq!(p.vertices.len(), 2);
    assert_eq!(p.bounded_edges, vec![(0, 1)]);
    assert!(p.ambiguous.is_empty());
    let report = check_normal_fan(&p, &fan, 1e-4).unwrap();
    assert!(report.passed && report.worst_margin.unwrap() > 0.0);
}

#[test]
fn coarse_cones_have_consistent_refinements() {
    for name in ["t1", "t3"] {
        let (d, fan) = setup(name);
        let p = secondary_polyhedron(&d, &fan, 1e-5).unwrap();
        let gaps: Vec<f64> = p.vertices.iter().filter_map(|v| v.refinement_gap).collect();
        assert!(!gaps.is_empty(), "{name}");
        assert!(gaps.iter().all(|&g| g <= 1e-4), "{name}: {gaps:?}");
        check_normal_fan(&p, &fan, 1e-3).unwrap();
    }
}

#[test]
fn lifting_prefers_refining_triangulations() {
    let (d, fan) = setup("t2");
    let t_list = vec![vec![], vec![0, 1, 2, 0], vec![0], vec![1, 4], vec![2, 3]];
    let r = lifting_check(&d, &fan, &t_list, 1e-5).unwrap();
    assert!(r.passed);
    // the two-flip triangulations never refine a sampled decomposition and are never maximal
    for s in &r.samples {
        assert!(s.argmax < 3);
        assert!(!s.refines[3] && !s.refines[4]);
    }
}

#[test]
fn mismatched_fan_is_rejected() {
    let (d, _) = setup("t2");
    let (_, other) = setup("s3");
    assert_eq!(secondary_polyhedron(&d, &other, 1e-5).unwrap_err(), PolyhedronError::DimensionMismatch);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn perturbed_vertices_are_caught(name in prop::sample::select(&["t2", "t2b", "s3", "t3"][..]), v in 0usize..16, coord in 0usize..3, sign in prop::bool::ANY) {
        let (d, fan) = setup(name);
        let p = secondary_polyhedron(&d, &fan, 1e-5).unwrap();
        let v = v % p.vertices.len();
        let delta = if sign { 0.1 } else { -0.1 };
        let bad = p.perturbed(v, coord % fan.n, delta);
        let caught = matches!(check_normal_fan(&bad, &fan, 1e-3), Err(PolyhedronError::NormalFanMismatch { .. }));
        prop_assert!(caught);
    }

    #[test]
    fn normal_fan_holds_from_any_base_point(name in prop::sample::select(&["t2", "t2b", "s3"][..]), theta in -3.0f64..3.0) {
        let (d, fan) = setup(name);
        let p = secondary_polyhedron_with(&d, &fan, 1e-5, Some(&rotation(theta))).unwrap();
        prop_assert!(check_normal_fan(&p, &fan, 1e-3).unwrap().passed);
    }
}
