//! TV_r of the one-tetrahedron 3-sphere against its closed form
//! (2/r) sin^2(2π/r), and of any other triangulation given on the command line.
//!
//! cargo run --release --example single_invariant -- [path] [r]

use turaev_viro::triangulation::parse_triangulation;
use turaev_viro::tv::{tv_invariant, TvOptions};

fn main() -> anyhow::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args.next().unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/s3_1tet.json").into());
    let r: u32 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(15);

    let table = parse_triangulation(&std::fs::read_to_string(&path)?)?;
    let record = tv_invariant(&table, r, &TvOptions::default())?;
    println!("TV_{r} = {}", record.value_string());
    println!(
        "  {} admissible colorings, {} search nodes, {} bits, {:?}",
        record.admissible_count, record.nodes_visited, record.bits_used, record.wall_time
    );
    let closed_form = 2.0 / r as f64 * (2.0 * std::f64::consts::PI / r as f64).sin().powi(2);
    println!("  (2/r) sin^2(2π/r) = {closed_form:.15e}");
    Ok(())
}
