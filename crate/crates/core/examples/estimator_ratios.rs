//! How well vol(P) (r-2)^d predicts the number of admissible colorings, and
//! how many search nodes the backtracking spends per coloring.
//!
//! cargo run --release --example estimator_ratios -- [path] [r_max]

use turaev_viro::triangulation::parse_triangulation;
use turaev_viro::tv::estimator_report;

fn main() -> anyhow::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args.next().unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/lens_13_5_3tet.json").into());
    let r_max: u32 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(41);

    let table = parse_triangulation(&std::fs::read_to_string(&path)?)?;
    let orders: Vec<u32> = (3..=r_max).step_by(2).collect();
    let (volume, rows) = estimator_report(&table, &orders)?;
    println!("polytope volume {volume:.6e}");
    println!("{:>4} {:>10} {:>14} {:>10} {:>10}", "r", "colorings", "estimate", "ratio", "nodes/col");
    for row in rows {
        println!(
            "{:>4} {:>10} {:>14.1} {:>10.4} {:>10.4}",
            row.r,
            row.admissible,
            row.estimator,
            row.estimate_ratio.unwrap_or(f64::NAN),
            row.tree_ratio.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
