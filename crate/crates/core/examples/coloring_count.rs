//! Admissible colorings and backtracking nodes, with and without the
//! restriction to integer colors.
//!
//! cargo run --release --example coloring_count -- [path] [r_max]

use turaev_viro::coloring::{enumerate_admissible, AdmissibilityContext};
use turaev_viro::triangulation::{homology_z2, parse_triangulation, Skeleton};

fn main() -> anyhow::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args.next().unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/lens_13_5_3tet.json").into());
    let r_max: u32 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(21);

    let skeleton = Skeleton::new(&parse_triangulation(&std::fs::read_to_string(&path)?)?)?;
    let fast = homology_z2(&skeleton).integer_fast_path_allowed();
    println!("integer colors suffice: {fast}");
    println!("{:>4} {:>12} {:>12} {:>12}", "r", "all", "integer", "nodes");
    for r in (3..=r_max).step_by(2) {
        let all = enumerate_admissible(&AdmissibilityContext::new(&skeleton, r, false), &mut |_: &[u32]| {});
        let int = enumerate_admissible(&AdmissibilityContext::new(&skeleton, r, true), &mut |_: &[u32]| {});
        println!("{r:>4} {:>12} {:>12} {:>12}", all.admissible_count, int.admissible_count, all.nodes_visited);
    }
    Ok(())
}
