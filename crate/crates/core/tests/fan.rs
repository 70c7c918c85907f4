mod common;

use hypfan::exact::int;
use hypfan::fan::{cone_at, enumerate_fan, wall_cross, FanError, SecondaryFan};
use hypfan::{cone_equal, Weighting};
use num_bigint::BigInt;
use proptest::prelude::*;
use std::sync::OnceLock;

fn fans() -> &'static Vec<(&'static str, SecondaryFan)> {
    static F: OnceLock<Vec<(&str, SecondaryFan)>> = OnceLock::new();
    F.get_or_init(|| {
        common::NAMES
            .iter()
            .map(|&n| {
                let d = common::surface(n);
                let ones = Weighting::new(vec![int(1); d.num_cusps()]).unwrap();
                (n, enumerate_fan(&d, &ones, 0).unwrap())
            })
            .collect()
    })
}

fn fan(name: &str) -> &'static SecondaryFan {
    &fans().iter().find(|(n, _)| *n == name).unwrap().1
}

#[test]
fn example_f_vectors() {
    assert_eq!(fan("t1").f_vector, vec![1]);
    assert_eq!(fan("t2").f_vector, vec![3, 2]);
    assert_eq!(fan("t2b").f_vector, vec![10, 9]);
    assert_eq!(fan("s3").f_vector, vec![6, 9, 4]);
    let big = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
    assert_eq!(fan("t2").rays, vec![big(&[0, 1]), big(&[1, 0]), big(&[1, 1])]);
}

#[test]
fn three_punctured_torus_has_coarse_cones() {
    let f = fan("t3");
    assert!(f.maximal_cones.iter().any(|c| !c.label.is_triangulation()));
    f.validate().unwrap();
}

#[test]
fn walls_are_shared_and_cross_back() {
    for (name, f) in fans() {
        for (a, b, normal) in f.walls() {
            let there = wall_cross(&f.maximal_cones[a], &normal).unwrap();
            assert!(cone_equal(&there, &f.maximal_cones[b]).unwrap(), "{name}: wall {a}-{b}");
            let fa = f.cone_face(a);
            let fb = f.cone_face(b);
            let common = f.common_coarsening(fa, fb).unwrap().expect("adjacent cones meet");
            assert_eq!(f.faces[common].dim, f.n - 1);
        }
    }
}

#[test]
fn boundary_facets_cannot_be_crossed() {
    let f = fan("t2");
    let c = &f.maximal_cones[0];
    let boundary = c.facets.iter().find(|x| c.is_boundary_facet(x)).unwrap();
    assert_eq!(wall_cross(c, boundary).unwrap_err(), FanError::BoundaryFacet);
}

#[test]
fn json_is_deterministic() {
    let d = common::surface("t2b");
    let ones = Weighting::new(vec![int(1); 2]).unwrap();
    let a = enumerate_fan(&d, &ones, 5).unwrap().to_json();
    let b = enumerate_fan(&d, &ones, 5).unwrap().to_json();
    assert_eq!(a, b);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn fan_covers_the_orthant(name in prop::sample::select(&common::NAMES[..]), w in common::weighting(3)) {
        let f = fan(name);
        let w = Weighting::new(w.as_slice()[..f.n].to_vec()).unwrap();
        let holders: Vec<usize> = (0..f.maximal_cones.len()).filter(|&i| f.maximal_cones[i].contains(w.as_slice())).collect();
        prop_assert!(!holders.is_empty());
        let d = common::surface(name);
        let c = cone_at(&d, &w).unwrap();
        if c.is_full() {
            prop_assert_eq!(holders.len(), 1);
            prop_assert!(cone_equal(&c, &f.maximal_cones[holders[0]]).unwrap());
        } else {
            let face = f.face_id(&c.rays.iter().map(|r| f.rays.binary_search(r).unwrap()).collect::<Vec<_>>());
            prop_assert!(face.is_some());
        }
    }
}
