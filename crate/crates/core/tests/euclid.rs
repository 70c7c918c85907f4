use hypfan::euclid::{EuclidError, PointConfiguration};
use hypfan::exact::{int, rat, Rational};
use num_traits::Zero;
use proptest::prelude::*;

fn hexagon() -> PointConfiguration {
    PointConfiguration::from_ints(&[&[1, 0], &[1, 1], &[0, 1], &[-1, 0], &[-1, -1], &[0, -1]]).unwrap()
}

fn square() -> PointConfiguration {
    PointConfiguration::from_ints(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]).unwrap()
}

fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| int(x)).collect()
}

#[test]
fn hexagon_is_associahedron() {
    let p = hexagon().secondary_polytope().unwrap();
    assert_eq!(p.triangulations.len(), 14);
    assert_eq!(p.dim, 3);
    assert_eq!(p.f_vector, vec![14, 21, 9]);
}

#[test]
fn square_is_segment() {
    let a = square();
    let p = a.secondary_polytope().unwrap();
    assert_eq!((p.dim, p.vertices.len()), (1, 2));
    let other = a.gkz_vector(&[vec![0, 1, 2], vec![1, 2, 3]]).unwrap();
    assert_eq!(other, vec![rat(1, 2), int(1), int(1), rat(1, 2)]);
}

#[test]
fn square_cones_meet_in_hyperplane() {
    let a = square();
    let c1 = a.secondary_cone(&[vec![0, 1, 3], vec![0, 2, 3]]).unwrap();
    let c2 = a.secondary_cone(&[vec![0, 1, 2], vec![1, 2, 3]]).unwrap();
    assert_eq!(c1.dim, 4);
    assert_eq!(c2.inequalities.len(), 1);
    let sum: Vec<_> = c1.inequalities[0].iter().zip(&c2.inequalities[0]).map(|(x, y)| x + y).collect();
    assert!(sum.iter().all(Zero::is_zero));
    let tie = ints(&[1, 5, 2, 6]);
    assert!(c1.contains(&tie) && c2.contains(&tie));
}

#[test]
fn affine_heights_give_trivial_subdivision() {
    let a = hexagon();
    for w in [ints(&[0; 6]), ints(&[1, 2, 1, -1, -2, -1])] {
        let sub = a.regular_subdivision(&w).unwrap();
        assert_eq!(sub.cells, vec![(0..6).collect::<Vec<_>>()]);
    }
}

#[test]
fn non_regular_triangulation_has_thin_cone() {
    // the "mother of all examples": inner triangle slightly rotated
    let a = PointConfiguration::from_ints(&[&[0, 0], &[40, 0], &[20, 35], &[17, 9], &[24, 10], &[19, 16]]).unwrap();
    let ts = a.triangulations().unwrap();
    let thin = ts.iter().filter(|t| a.secondary_cone(t).unwrap().dim < a.len()).count();
    assert!(thin > 0);
    let p = a.secondary_polytope().unwrap();
    assert_eq!(p.dim, 3);
    assert_eq!(p.vertices.len(), ts.len() - thin);
}

#[test]
fn too_many_points() {
    let pts: Vec<Vec<i64>> = (0..11).map(|i| vec![i, i * i]).collect();
    let refs: Vec<&[i64]> = pts.iter().map(|p| p.as_slice()).collect();
    let a = PointConfiguration::from_ints(&refs).unwrap();
    assert_eq!(a.secondary_polytope(), Err(EuclidError::TooManyPoints(11)));
}

#[test]
fn rejects_non_triangulation() {
    let a = square();
    assert_eq!(a.gkz_vector(&[vec![0, 1, 2, 3]]), Err(EuclidError::NotATriangulation));
    assert!(a.secondary_cone(&[vec![0, 1, 9]]).is_err());
}

#[test]
fn parses_json() {
    let v = serde_json::json!({"points": [["0", "0"], [1, 0], ["0", "1/2"]]});
    let a = PointConfiguration::from_json(&v).unwrap();
    assert_eq!(a.points()[2][1], rat(1, 2));
    assert!(PointConfiguration::from_json(&serde_json::json!({"points": [[0.5, 1]]})).is_err());
}

fn general_points() -> impl Strategy<Value = PointConfiguration> {
    prop::collection::vec((-6i64..=6, -6i64..=6), 6).prop_filter_map("general position", |pts| {
        let rows: Vec<Vec<i64>> = pts.iter().map(|&(x, y)| vec![x, y]).collect();
        let refs: Vec<&[i64]> = rows.iter().map(|p| p.as_slice()).collect();
        let a = PointConfiguration::from_ints(&refs).ok()?;
        a.triangulations().ok().map(|_| a)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn cone_membership_iff_refinement(a in general_points(), ws in prop::collection::vec(prop::collection::vec(-3i64..=3, 6), 8)) {
        let ts = a.triangulations().unwrap();
        let cones: Vec<_> = ts.iter().map(|t| a.secondary_cone(t).unwrap()).collect();
        for w in ws {
            let w = ints(&w);
            let sub = a.regular_subdivision(&w).unwrap();
            for (t, c) in ts.iter().zip(&cones) {
                prop_assert_eq!(c.contains(&w), PointConfiguration::refines(t, &sub));
            }
        }
    }

    #[test]
    fn gkz_sums_to_three_areas(a in general_points()) {
        let ts = a.triangulations().unwrap();
        let total = |t: &Vec<Vec<usize>>| a.gkz_vector(t).unwrap().into_iter().fold(Rational::zero(), |s, x| s + x);
        let first = total(&ts[0]);
        for t in &ts {
            prop_assert_eq!(total(t), first.clone());
        }
    }

    #[test]
    fn gkz_maximizer_refines(a in general_points(), w in prop::collection::vec(-9i64..=9, 6)) {
        let w = ints(&w);
        let ts = a.triangulations().unwrap();
        let score = |t: &Vec<Vec<usize>>| hypfan::exact::dot(&a.gkz_vector(t).unwrap(), &w);
        let best = ts.iter().map(score).max().unwrap();
        let sub = a.regular_subdivision(&w).unwrap();
        for t in ts.iter().filter(|t| score(t) == best) {
            prop_assert!(PointConfiguration::refines(t, &sub));
        }
    }
}
