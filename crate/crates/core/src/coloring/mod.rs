//! Admissible colorings of the edges of a triangulation and their
//! enumeration by pruned backtracking.
//!
//! Colors are stored doubled: an edge carrying the half-integer color
//! `θ ∈ {0, 1/2, …, (r-2)/2}` stores `2θ ∈ {0, …, r-2}`.

mod enumerate;
mod order;

pub use enumerate::{count_admissible, enumerate_admissible, enumerate_partitioned, ColoringVisitor, EnumStats};
pub use order::order_edges;

use crate::triangulation::Skeleton;

/// An assignment of doubled colors to edges, indexed by edge class.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Coloring {
    pub doubled: Vec<u32>,
}

/// Whether the doubled colors of the three sides of a triangle satisfy the
/// parity, triangle and upper-bound conditions at order `r`.
#[inline]
pub fn triangle_admissible(a: u32, b: u32, c: u32, r: u32) -> bool {
    let s = a + b + c;
    s % 2 == 0 && a <= b + c && b <= a + c && c <= a + b && s <= 2 * (r - 2)
}

/// Everything the enumerator needs to know about a triangulation at a
/// fixed order `r`.
#[derive(Clone, Debug)]
pub struct AdmissibilityContext {
    pub r: u32,
    /// Edge classes of the sides of each triangle; repetitions allowed.
    pub triangles: Vec<[usize; 3]>,
    pub edge_order: Vec<usize>,
    /// Restrict to even doubled colors (integer colors).
    pub integer_only: bool,
    /// For each position `k` of `edge_order`, the triangles whose last
    /// ordered edge sits at position `k`.
    pub triangles_by_last_edge: Vec<Vec<usize>>,
}

impl AdmissibilityContext {
    /// Builds the context for `skeleton` at order `r`, with the greedy edge
    /// order of [`order_edges`].
    pub fn new(skeleton: &Skeleton, r: u32, integer_only: bool) -> Self {
        let triangles: Vec<[usize; 3]> = skeleton.triangles().iter().map(|t| t.edges).collect();
        let edge_order = order_edges(skeleton);
        Self::with_order(triangles, edge_order, r, integer_only)
    }

    /// Builds a context from raw triangle triples and an explicit edge order.
    pub fn with_order(triangles: Vec<[usize; 3]>, edge_order: Vec<usize>, r: u32, integer_only: bool) -> Self {
        assert!(r >= 3, "order r must be at least 3");
        let mut position = vec![usize::MAX; edge_order.len()];
        for (k, &e) in edge_order.iter().enumerate() {
            position[e] = k;
        }
        let mut triangles_by_last_edge = vec![Vec::new(); edge_order.len()];
        for (i, tri) in triangles.iter().enumerate() {
            let last = tri.iter().map(|&e| position[e]).max().expect("three sides");
            triangles_by_last_edge[last].push(i);
        }
        AdmissibilityContext { r, triangles, edge_order, integer_only, triangles_by_last_edge }
    }

    pub fn edge_count(&self) -> usize {
        self.edge_order.len()
    }

    /// Largest doubled color.
    pub fn max_color(&self) -> u32 {
        self.r - 2
    }
}

/// Checks every triangle of `ctx` against `c`, and the color range (and
/// parity in integer mode) of every edge.
pub fn check_admissible(c: &Coloring, ctx: &AdmissibilityContext) -> bool {
    if c.doubled.len() != ctx.edge_count() {
        return false;
    }
    let in_range = |x: u32| x <= ctx.max_color() && (!ctx.integer_only || x % 2 == 0);
    c.doubled.iter().all(|&x| in_range(x))
        && ctx.triangles.iter().all(|t| {
            triangle_admissible(c.doubled[t[0]], c.doubled[t[1]], c.doubled[t[2]], ctx.r)
        })
}
