pub mod arith;
pub mod cli;
pub mod coloring;
pub mod polytope;
pub mod triangulation;
pub mod tv;
