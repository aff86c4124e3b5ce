//! The library's skeleton and homology against the reference computations
//! in `common`, on every bundled triangulation and on random bistellar
//! neighbours of them.

mod common;

use common::{data, h1_z2_rank, integral_h1, naive_tv, RawSkeleton, BUNDLED};
use proptest::prelude::*;
use turaev_viro::coloring::count_admissible;
use turaev_viro::triangulation::{
    candidate_23_moves, candidate_32_moves, homology_z2, parse_triangulation, GluingTable, Skeleton,
};
use turaev_viro::tv::{ColorMode, StateSum};

fn table(name: &str) -> GluingTable {
    parse_triangulation(&data(name)).unwrap()
}

#[test]
fn bundled_skeleta_match_reference() {
    for &(name, ..) in BUNDLED {
        let s = Skeleton::new(&table(name)).unwrap();
        let raw = RawSkeleton::new(&data(name));
        assert_eq!(s.vertex_count(), raw.vertices, "{name}");
        assert_eq!(s.edge_count(), raw.edges, "{name}");
        assert_eq!(s.triangle_count(), raw.triangles.len(), "{name}");
        assert_eq!(homology_z2(&s).h1_z2_rank, h1_z2_rank(&raw), "{name}");
    }
}

#[test]
fn bundled_integral_homology() {
    for &(name, free, torsion) in BUNDLED {
        assert_eq!(integral_h1(&RawSkeleton::new(&data(name))), (free, torsion.to_vec()), "{name}");
    }
}

#[test]
fn bundled_files_are_oriented_and_closed() {
    for &(name, ..) in BUNDLED {
        let t = table(name);
        assert!(t.is_oriented(), "{name}");
        let s = Skeleton::new(&t).unwrap();
        assert_eq!(s.edge_count(), s.tetrahedron_count() + s.vertex_count(), "{name}");
    }
}

/// Applies `moves` as indices into the candidate lists, alternating kinds
/// by the parity of each index; inapplicable moves are skipped.
fn walk(start: &GluingTable, moves: &[usize], cap: usize) -> GluingTable {
    let mut t = start.clone();
    for &m in moves {
        let s = Skeleton::new(&t).unwrap();
        let up = candidate_23_moves(&s);
        let down = candidate_32_moves(&s);
        let next = if m % 2 == 0 && t.size() < cap && !up.is_empty() {
            t.pachner_23(up[m / 2 % up.len()])
        } else if !down.is_empty() {
            t.pachner_32(down[m / 2 % down.len()])
        } else {
            continue;
        };
        if let Ok(moved) = next {
            t = moved;
        }
    }
    t
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn moves_preserve_homology_and_vertices(input in 0..BUNDLED.len(), moves in prop::collection::vec(0usize..64, 1..8)) {
        let (name, free, torsion) = BUNDLED[input];
        let start = table(name);
        let moved = walk(&start, &moves, start.size() + 4);
        let raw = RawSkeleton::new(&moved.to_json());
        prop_assert_eq!(integral_h1(&raw), (free, torsion.to_vec()));
        let s = Skeleton::new(&moved).unwrap();
        prop_assert_eq!(s.vertex_count(), Skeleton::new(&start).unwrap().vertex_count());
        prop_assert_eq!(homology_z2(&s).h1_z2_rank, h1_z2_rank(&raw));
        prop_assert!(moved.is_oriented());
    }

    #[test]
    fn pruned_counts_match_full_enumeration(input in 0..BUNDLED.len(), moves in prop::collection::vec(0usize..64, 0..3), r in (1u32..4).prop_map(|k| 2 * k + 1)) {
        let start = table(BUNDLED[input].0);
        let moved = walk(&start, &moves, 4);
        prop_assume!(moved.size() <= 4);
        let raw = RawSkeleton::new(&moved.to_json());
        let (_, expected) = naive_tv(&raw, r);
        let plan = StateSum::new(&moved, ColorMode::General).unwrap();
        prop_assert_eq!(count_admissible(&plan.context(r)), expected);
    }
}
