mod common;

use hypfan::cones::{dd_facets, dd_rays, Generators};
use hypfan::exact::{dot, to_rational};
use hypfan::fan::cone_at;
use hypfan::{cone_equal, delaunay_decomposition, secondary_cone, ConeError, Weighting};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

#[test]
fn rejects_non_delaunay_weight() {
    let d = common::surface("t2");
    let err = secondary_cone(&d, &Weighting::from_ints(&[3, 9]).unwrap()).unwrap_err();
    assert!(matches!(err, ConeError::NotDelaunayForWeight(_)));
}

#[test]
fn boundary_weight_gives_lower_dimensional_cone() {
    let d = common::surface("t2");
    let c = secondary_cone(&d, &Weighting::from_ints(&[1, 1]).unwrap()).unwrap();
    assert_eq!(c.dim, 1);
    assert_eq!(c.rays, vec![big(&[1, 1])]);
    assert_eq!(c.label.weak_edges, vec![0, 1, 2]);
    let label = delaunay_decomposition(&d, &Weighting::from_ints(&[1, 1]).unwrap()).unwrap();
    assert_eq!(label.kept_edges(), vec![3, 4, 5]);
}

#[test]
fn cone_equality_ignores_reference() {
    let d = common::surface("t2b");
    let w = Weighting::from_ints(&[2, 1]).unwrap();
    let a = cone_at(&d, &w).unwrap();
    let b = cone_at(&d.ptolemy_flip(0).unwrap(), &w).unwrap();
    assert!(cone_equal(&a, &b).unwrap());
}

#[test]
fn dd_square_pyramid() {
    // cone over a square: 4 rays, 4 facets
    let ineqs = vec![big(&[1, 0, 1]), big(&[-1, 0, 1]), big(&[0, 1, 1]), big(&[0, -1, 1])];
    let g = dd_rays(3, &ineqs, &[]).unwrap();
    assert_eq!(g.rays.len(), 4);
    assert!(g.lineality.is_empty());
    let f = dd_facets(3, &g).unwrap();
    let mut got = f.facets.clone();
    got.sort();
    let mut want = ineqs.clone();
    want.sort();
    assert_eq!(got, want);
}

#[test]
fn dd_handles_lineality_and_empty() {
    let g = dd_rays(3, &[big(&[0, 0, 1])], &[]).unwrap();
    assert_eq!((g.rays.len(), g.lineality.len()), (1, 2));
    assert!(matches!(dd_rays(2, &[big(&[1, 0]), big(&[-1, 0])], &[big(&[0, 1])]), Err(ConeError::EmptyCone)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn weight_lies_in_its_cone(name in prop::sample::select(&common::NAMES[..]), w in common::weighting(3)) {
        let d = common::surface(name);
        let w = Weighting::new(w.as_slice()[..d.num_cusps()].to_vec()).unwrap();
        let c = cone_at(&d, &w).unwrap();
        prop_assert!(c.contains(w.as_slice()));
        for r in &c.rays {
            prop_assert!(r.iter().all(|x| !x.is_negative()));
            prop_assert!(c.contains_int(r));
        }
        // relative interior: strictly inside every facet that is not an equation
        for f in &c.facets {
            prop_assert!(dot(&to_rational(f), w.as_slice()).is_positive());
        }
        for e in &c.equations {
            prop_assert!(dot(&to_rational(e), w.as_slice()).is_zero());
        }
    }

    #[test]
    fn dd_round_trip(rows in prop::collection::vec(prop::collection::vec(-3i64..=3, 3), 3..7)) {
        let ineqs: Vec<Vec<BigInt>> = rows.iter().map(|r| big(r)).collect();
        let Ok(g) = dd_rays(3, &ineqs, &[]) else { return Ok(()) };
        for r in &g.rays {
            for a in &ineqs {
                prop_assert!(!dot(&to_rational(a), &to_rational(r)).is_negative());
            }
        }
        let f = dd_facets(3, &g).unwrap();
        let g2 = dd_rays(3, &f.facets, &f.equations).unwrap();
        let again = dd_facets(3, &Generators { rays: g2.rays.clone(), lineality: g2.lineality.clone() }).unwrap();
        prop_assert_eq!(&g2.rays, &g.rays);
        prop_assert_eq!(again.facets, f.facets);
    }
}
