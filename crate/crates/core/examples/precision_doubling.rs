//! The same invariant started from 32 bits: the width doubles until two
//! evaluations agree, and the terms of the sum cancel by many orders of
//! magnitude.
//!
//! cargo run --release --example precision_doubling -- [path] [r]

use turaev_viro::arith::PrecisionPolicy;
use turaev_viro::triangulation::parse_triangulation;
use turaev_viro::tv::{tv_with_plan, ColorMode, StateSum, TvOptions};

fn main() -> anyhow::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args.next().unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/lens_13_5_3tet.json").into());
    let r: u32 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(33);

    let plan = StateSum::new(&parse_triangulation(&std::fs::read_to_string(&path)?)?, ColorMode::Auto)?;
    let ctx = plan.context(r);
    for bits in [32, 64, 128, 256] {
        let (eval, _) = plan.evaluate(&ctx, bits)?;
        println!(
            "{bits:>4} bits: value {:+.12e}, sum of |terms| {:.3e}",
            eval.value.to_f64(),
            eval.magnitude.to_f64()
        );
    }
    let options = TvOptions { policy: PrecisionPolicy { initial_bits: 32, ..Default::default() }, ..Default::default() };
    let record = tv_with_plan(&plan, r, &options, 32)?;
    println!("accepted at {} bits: {}", record.bits_used, record.value_string());
    Ok(())
}
