//! Random walk of bistellar moves that keeps the triangulation whose
//! admissibility polytope is smallest, then writes it out.
//!
//! cargo run --release --example simplify_walk -- [path] [steps] [seed]

use turaev_viro::triangulation::parse_triangulation;
use turaev_viro::tv::optimize_triangulation;

fn main() -> anyhow::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args.next().unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/graph_z3_5tet.json").into());
    let steps: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(40);
    let seed: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(1);

    let table = parse_triangulation(&std::fs::read_to_string(&path)?)?;
    let (best, report) = optimize_triangulation(&table, steps, seed, 200_000, table.size() + 3)?;
    let sizes: Vec<usize> = report.visited.iter().map(|v| v.0).collect();
    println!("sizes visited: {sizes:?}");
    println!("{} moves applied, best: {} tetrahedra, volume {:.4e}", report.moves_applied, report.best_size, report.best_volume);
    println!("{}", best.to_json());
    Ok(())
}
