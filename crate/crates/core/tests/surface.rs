mod common;

use hypfan::surface::{next, prev, CombinatorialSurface, SurfaceError};
use proptest::prelude::*;

fn check(s: &CombinatorialSurface, cusps: usize, genus: usize) -> Result<(), TestCaseError> {
    prop_assert_eq!(s.num_cusps(), cusps);
    prop_assert_eq!(s.genus(), genus);
    let mut corners = 0;
    for h in 0..s.num_half_edges() {
        prop_assert_eq!(s.pair(s.pair(h)), h);
        prop_assert_ne!(s.pair(h), h);
        prop_assert_eq!(s.tail_cusp(s.pair(h)), s.head_cusp(h));
    }
    for i in 0..s.num_cusps() {
        corners += s.corner_list(i).unwrap().len();
    }
    prop_assert_eq!(corners, s.num_half_edges());
    Ok(())
}

#[test]
fn next_and_prev_cycle() {
    for h in 0..12 {
        assert_eq!(next(next(next(h))), h);
        assert_eq!(prev(next(h)), h);
        assert_eq!(next(h) / 3, h / 3);
    }
}

#[test]
fn example_topology() {
    let expect = [("t1", 1, 1), ("t2", 2, 1), ("t2b", 2, 1), ("s3", 3, 0), ("t3", 3, 1)];
    for (name, cusps, genus) in expect {
        let s = common::surface(name);
        assert_eq!((s.surface().num_cusps(), s.surface().genus()), (cusps, genus), "{name}");
    }
}

#[test]
fn rejects_broken_pairings() {
    assert!(CombinatorialSurface::new(1, &[(0, 1), (1, 2)]).is_err());
    assert!(CombinatorialSurface::new(2, &[(0, 3), (1, 4), (2, 2)]).is_err());
    assert_eq!(
        CombinatorialSurface::new(4, &[(0, 3), (1, 4), (2, 5), (6, 9), (7, 10), (8, 11)]).unwrap_err(),
        SurfaceError::Disconnected
    );
    assert!(matches!(
        CombinatorialSurface::new(2, &[(0, 3), (1, 4), (2, 9)]),
        Err(SurfaceError::PairingNotInvolution(_))
    ));
    let torus = CombinatorialSurface::new(2, &[(0, 3), (1, 4), (2, 5)]).unwrap();
    assert_eq!(torus.flip(7).unwrap_err(), SurfaceError::BadEdgeIndex(7));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn flips_preserve_topology(name in prop::sample::select(&common::NAMES[..]), picks in prop::collection::vec(0usize..64, 1..25)) {
        let d = common::surface(name);
        let mut s = d.surface().clone();
        let (cusps, genus) = (s.num_cusps(), s.genus());
        for p in picks {
            let e = p % s.num_edges();
            if s.is_self_folded(e) {
                prop_assert!(s.flip(e).is_err());
                continue;
            }
            s = s.flip(e).unwrap().surface;
            check(&s, cusps, genus)?;
        }
    }

    #[test]
    fn flipped_edge_changes_endpoints(name in prop::sample::select(&common::NAMES[1..]), e in 0usize..9) {
        let s = common::surface(name).surface().clone();
        let e = e % s.num_edges();
        prop_assume!(!s.is_self_folded(e));
        let [h, g] = s.half_edges(e);
        let f = s.flip(e).unwrap().surface;
        let [h2, _] = f.half_edges(e);
        let old = [s.tail_cusp(prev(h)), s.tail_cusp(prev(g))];
        let mut new = [f.tail_cusp(h2), f.head_cusp(h2)];
        let mut old_sorted = old;
        old_sorted.sort();
        new.sort();
        prop_assert_eq!(new, old_sorted);
    }
}
