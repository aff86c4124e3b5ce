//! TV_r for a range of odd r, the quantity (2π/r) log TV_r and the running
//! maximum S_r of its distance to a limit, written as CSV.
//!
//! cargo run --release --example invariant_sequence -- [path] [r_max] [limit]

use turaev_viro::triangulation::parse_triangulation;
use turaev_viro::tv::{tv_sequence, write_csv, TvOptions};

fn main() -> anyhow::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args.next().unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/graph_z3_5tet.json").into());
    let r_max: u32 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(25);
    let limit: f64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(0.0);

    let table = parse_triangulation(&std::fs::read_to_string(&path)?)?;
    let mut series = tv_sequence(&table, 3, r_max, &TvOptions::default(), Vec::new(), |rec| {
        eprintln!("r = {:>3}: {} bits, {:?}", rec.r, rec.bits_used, rec.wall_time);
        Ok(())
    })?;
    series.target_limit = Some(limit);
    write_csv(&series, std::io::stdout().lock())?;
    Ok(())
}
