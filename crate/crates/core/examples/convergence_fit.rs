//! Fits a log(x+b)/(x+b) to the running maximum S_r and a/(x+b)+c to
//! (2π/r) log TV_r, for a bundled graph manifold whose limit is 0.
//!
//! cargo run --release --example convergence_fit -- [r_max]

use turaev_viro::triangulation::parse_triangulation;
use turaev_viro::tv::{fit_constant, fit_model1, fit_model2, log_quantity, s_r, tv_sequence, TvOptions};

fn main() -> anyhow::Result<()> {
    let r_max: u32 = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(31);
    let table = parse_triangulation(include_str!("../data/graph_z3_5tet.json"))?;
    let mut series = tv_sequence(&table, 11, r_max, &TvOptions::default(), Vec::new(), |_| Ok(()))?;
    series.target_limit = Some(0.0);

    let sr: Vec<(f64, f64)> = s_r(&series)?.into_iter().map(|(r, s)| (r as f64, s)).collect();
    let mut lq = Vec::new();
    for rec in &series.records {
        if let Some(y) = log_quantity(rec)? {
            lq.push((rec.r as f64, y));
        }
    }
    for (r, s) in &sr {
        println!("r = {r:>2}: S_r = {s:.4}");
    }
    let m1 = fit_model1(&sr)?;
    println!("S_r ~ a log(r+b)/(r+b): a = {:.4}, b = {:.4}, rss {:.3e}", m1.params[0], m1.params[1], m1.rss);
    println!("constant fit rss {:.3e}", fit_constant(&sr)?.rss);
    let m2 = fit_model2(&lq)?;
    println!("(2π/r) log TV_r ~ a/(r+b)+c: c = {:.4}, rss {:.3e}", m2.params[2], m2.rss);
    Ok(())
}
