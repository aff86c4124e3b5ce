//! The admissibility polytope of a triangulation: its inequalities, lattice
//! point counts at a few dilations and two volume estimates.
//!
//! cargo run --release --example admissibility_polytope -- [path]

use turaev_viro::polytope::{
    build_polytope, count_lattice_points, default_dilations, ehrhart_volume_fit, mc_volume,
};
use turaev_viro::triangulation::{parse_triangulation, Skeleton};

fn main() -> anyhow::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/graph_z3_5tet.json").into());
    let skeleton = Skeleton::new(&parse_triangulation(&std::fs::read_to_string(&path)?)?)?;
    let polytope = build_polytope(&skeleton);

    println!("dimension {}, {} inequalities", polytope.dim, polytope.rows.len());
    for row in polytope.rows.iter().take(8) {
        println!("  {:?} . x <= {}", row.coeffs, row.rhs_halves as f64 / 2.0);
    }
    for k in [2, 4, 8, 16] {
        println!("  lattice points of {k}P: {}", count_lattice_points(&polytope, k));
    }
    let fit = ehrhart_volume_fit(&polytope, &default_dilations(polytope.dim))?;
    let mc = mc_volume(&polytope, 1_000_000, 0)?;
    println!("volume from lattice counts: {:.6e} +- {:.1e}", fit.value, fit.std_error);
    println!("volume from sampling:       {:.6e} +- {:.1e}", mc.value, mc.std_error);
    Ok(())
}
