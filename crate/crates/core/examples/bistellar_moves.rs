//! A 2-3 move followed by the inverse 3-2 move, with TV_r unchanged along
//! the way.
//!
//! cargo run --release --example bistellar_moves -- [path]

use turaev_viro::triangulation::{candidate_23_moves, candidate_32_moves, parse_triangulation, Skeleton};
use turaev_viro::tv::{tv_invariant, TvOptions};

fn main() -> anyhow::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/lens_3_1_3tet.json").into());
    let table = parse_triangulation(&std::fs::read_to_string(&path)?)?;
    let options = TvOptions::default();

    let Some(&triangle) = candidate_23_moves(&Skeleton::new(&table)?).first() else {
        println!("no 2-3 move applies");
        return Ok(());
    };
    let up = table.pachner_23(triangle)?;
    let edges = candidate_32_moves(&Skeleton::new(&up)?);
    let down = edges.iter().find_map(|&e| up.pachner_32(e).ok().filter(|t| t.is_isomorphic(&table)));

    println!("2-3 on triangle {triangle}: {} -> {} tetrahedra", table.size(), up.size());
    println!("3-2 back to an isomorphic triangulation: {}", down.is_some());
    for r in [5, 7, 9] {
        let before = tv_invariant(&table, r, &options)?;
        let after = tv_invariant(&up, r, &options)?;
        println!("  TV_{r}: {} | {}", before.value_string(), after.value_string());
    }
    Ok(())
}
