//! Property tests for the structural invariants that do not reduce to a
//! finite frozen table: closure laws, span laws, and file-format round
//! trips.

use flagpg::adjembed::{GeometricHyperplane, HyperplaneFile, Provenance};
use flagpg::flaggeometry::FlagGeometry;
use flagpg::gf::Field;
use flagpg::hyperplanelab::{subspace_closure, FlagSet};
use flagpg::projspace::ProjSpace;
use proptest::prelude::*;
use std::sync::Arc;

fn hexagon() -> FlagGeometry {
    FlagGeometry::build(Arc::new(Field::of_order(2).unwrap()), 2, 1 << 20).unwrap()
}

fn pg32() -> ProjSpace {
    ProjSpace::new(Arc::new(Field::of_order(2).unwrap()), 3)
}

proptest! {
    #[test]
    fn closure_is_extensive_monotone_idempotent(indices in proptest::collection::btree_set(0usize..21, 0..12),
                                                extra in proptest::collection::btree_set(0usize..21, 0..6)) {
        let g = hexagon();
        let s = FlagSet::from_indices(21, &indices.iter().copied().collect::<Vec<_>>());
        let closed = subspace_closure(&g, &s);
        prop_assert!(s.is_subset_of(&closed));
        prop_assert_eq!(&subspace_closure(&g, &closed), &closed);
        // monotone: closing a superset dominates
        let mut sup = s.clone();
        for &i in &extra {
            sup.insert(i);
        }
        let closed_sup = subspace_closure(&g, &sup);
        prop_assert!(closed.is_subset_of(&closed_sup));
    }

    #[test]
    fn span_is_idempotent_and_monotone(a in proptest::collection::vec(0u32..15, 1..4),
                                       b in proptest::collection::vec(0u32..15, 1..4)) {
        let pg = pg32();
        let sa = pg.subspace_of_points(&a).unwrap();
        let both: Vec<u32> = a.iter().chain(b.iter()).copied().collect();
        let sab = pg.subspace_of_points(&both).unwrap();
        // idempotent: spanning the span changes nothing
        let again = pg.subspace_of_points(&sa.points).unwrap();
        prop_assert_eq!(&again, &sa);
        // monotone
        prop_assert!(sa.points.iter().all(|p| sab.contains_point(*p)));
        // the span contains exactly the points of every sub-span
        if let Some(meet) = pg.meet(&sa, &sab).unwrap() {
            prop_assert_eq!(meet.points, sa.points);
        }
    }

    #[test]
    fn pair_classification_is_symmetric(a in 0u32..21, b in 0u32..21) {
        let g = hexagon();
        prop_assert_eq!(g.pair_class(a, b), g.pair_class(b, a));
    }

    #[test]
    fn hyperplane_file_round_trips(indices in proptest::collection::btree_set(0usize..105, 1..60),
                                   rle in any::<bool>()) {
        let set = FlagSet::from_indices(105, &indices.iter().copied().collect::<Vec<_>>());
        let h = GeometricHyperplane { set: set.clone(), provenance: Provenance::Raw };
        let file = HyperplaneFile::from_hyperplane(&h, rle);
        let json = serde_json::to_string(&file).unwrap();
        let back: HyperplaneFile = serde_json::from_str(&json).unwrap();
        let (restored, _) = back.into_parts(105).unwrap();
        prop_assert_eq!(restored, set);
    }
}
