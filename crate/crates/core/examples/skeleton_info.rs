//! Vertices, edges, triangles and mod-2 homology of a triangulation.
//!
//! cargo run --example skeleton_info -- [path/to/triangulation.json]

use turaev_viro::triangulation::{homology_z2, parse_triangulation, Skeleton};

fn main() -> anyhow::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/lens_13_5_3tet.json").into());
    let table = parse_triangulation(&std::fs::read_to_string(&path)?)?;
    let skeleton = Skeleton::new(&table)?;
    let homology = homology_z2(&skeleton);

    println!("{path}");
    println!(
        "  {} tetrahedra, {} triangles, {} edges, {} vertices",
        skeleton.tetrahedron_count(),
        skeleton.triangle_count(),
        skeleton.edge_count(),
        skeleton.vertex_count()
    );
    println!("  oriented gluings: {}", table.is_oriented());
    println!("  rank H1(M; Z/2) = {}", homology.h1_z2_rank);
    println!("  integer colors only: {}", homology.integer_fast_path_allowed());
    for e in 0..skeleton.edge_count() {
        println!("  edge {e}: degree {}, endpoints {:?}", skeleton.edge_degree(e), skeleton.edge_endpoints(e));
    }
    Ok(())
}
