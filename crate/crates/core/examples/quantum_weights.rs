//! Quantum integers, the three kinds of state-sum weights and the quantum
//! 6j symbol at a root of unity.
//!
//! cargo run --example quantum_weights -- [r]

use turaev_viro::arith::{edge_weight, quantum_integer, tet_weight, triangle_weight, vertex_weight, WeightSystem};

fn main() -> anyhow::Result<()> {
    let r: u32 = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(7);
    let ws = WeightSystem::new(r, 128)?;
    for n in 0..r {
        println!("[{n}] = {}", quantum_integer(n, r, 128)?.to_decimal(20));
    }
    println!("vertex weight {}", vertex_weight(&ws).to_decimal(20));
    // colors are doubled spins
    println!("edge weight of color 2: {}", edge_weight(2, &ws).to_decimal(20));
    println!("triangle (2,2,2): {}", triangle_weight(2, 2, 2, &ws)?.to_decimal(20));
    println!("6j (2,2,2,2,2,2): {}", tet_weight([2; 6], &ws)?.to_decimal(20));
    println!("6j (1,1,2,1,1,2): {}", tet_weight([1, 1, 2, 1, 1, 2], &ws)?.to_decimal(20));
    Ok(())
}
