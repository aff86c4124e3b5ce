use std::ops::AddAssign;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use super::{triangle_admissible, AdmissibilityContext};

/// Callbacks driven by the enumerator. `colors` is indexed by edge class and
/// only the edges at positions `0..=depth` of the order are meaningful.
pub trait ColoringVisitor {
    /// A consistent partial coloring has just been extended at `depth`.
    fn descend(&mut self, _depth: usize, _colors: &[u32]) {}
    /// A complete admissible coloring.
    fn leaf(&mut self, colors: &[u32]);
}

impl<F: FnMut(&[u32])> ColoringVisitor for F {
    fn leaf(&mut self, colors: &[u32]) {
        self(colors)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EnumStats {
    /// Consistent partial colorings reached, leaves included.
    pub nodes_visited: u64,
    pub admissible_count: u64,
    pub wall_time: Duration,
}

impl AddAssign for EnumStats {
    fn add_assign(&mut self, rhs: Self) {
        self.nodes_visited += rhs.nodes_visited;
        self.admissible_count += rhs.admissible_count;
        self.wall_time += rhs.wall_time;
    }
}

struct Search<'a, V> {
    ctx: &'a AdmissibilityContext,
    colors: Vec<u32>,
    visitor: &'a mut V,
    stats: EnumStats,
}

/// Candidate colors for position `depth`: an interval, a step, and the
/// triangles that still need a per-color check (those meeting the edge
/// more than once).
fn candidates(ctx: &AdmissibilityContext, depth: usize, colors: &[u32]) -> Option<(u32, u32, u32)> {
    let edge = ctx.edge_order[depth];
    let max = ctx.max_color() as i64;
    let (mut lo, mut hi) = (0i64, max);
    let mut parity = ctx.integer_only.then_some(0u32);
    for &t in &ctx.triangles_by_last_edge[depth] {
        let [x, y, z] = ctx.triangles[t];
        let (a, b) = match (x == edge, y == edge, z == edge) {
            (true, false, false) => (colors[y], colors[z]),
            (false, true, false) => (colors[x], colors[z]),
            (false, false, true) => (colors[x], colors[y]),
            _ => continue,
        };
        let (a, b) = (a as i64, b as i64);
        lo = lo.max((a - b).abs());
        hi = hi.min((a + b).min(2 * max - a - b));
        let p = ((a + b) % 2) as u32;
        match parity {
            Some(q) if q != p => return None,
            _ => parity = Some(p),
        }
    }
    if let Some(p) = parity {
        if (lo as u32) % 2 != p {
            lo += 1;
        }
    }
    (lo <= hi).then(|| (lo as u32, hi as u32, if parity.is_some() { 2 } else { 1 }))
}

impl<V: ColoringVisitor> Search<'_, V> {
    fn degenerate_ok(&self, depth: usize) -> bool {
        let edge = self.ctx.edge_order[depth];
        self.ctx.triangles_by_last_edge[depth].iter().all(|&t| {
            let [x, y, z] = self.ctx.triangles[t];
            let repeated = [x, y, z].iter().filter(|&&e| e == edge).count() > 1;
            !repeated || triangle_admissible(self.colors[x], self.colors[y], self.colors[z], self.ctx.r)
        })
    }

    fn try_color(&mut self, depth: usize, color: u32) {
        let edge = self.ctx.edge_order[depth];
        self.colors[edge] = color;
        if !self.degenerate_ok(depth) {
            return;
        }
        self.stats.nodes_visited += 1;
        self.visitor.descend(depth, &self.colors);
        if depth + 1 == self.ctx.edge_count() {
            self.stats.admissible_count += 1;
            self.visitor.leaf(&self.colors);
        } else {
            self.expand(depth + 1);
        }
    }

    fn expand(&mut self, depth: usize) {
        let Some((lo, hi, step)) = candidates(self.ctx, depth, &self.colors) else { return };
        let mut c = lo;
        while c <= hi {
            self.try_color(depth, c);
            c += step;
        }
    }
}

/// Visits every admissible coloring once, in lexicographic order of the
/// colors along `ctx.edge_order`.
pub fn enumerate_admissible<V: ColoringVisitor>(ctx: &AdmissibilityContext, visitor: &mut V) -> EnumStats {
    let start = Instant::now();
    let mut search = Search { ctx, colors: vec![0; ctx.edge_count()], visitor, stats: EnumStats::default() };
    if ctx.edge_count() > 0 {
        search.expand(0);
    }
    let mut stats = search.stats;
    stats.wall_time = start.elapsed();
    stats
}

/// Splits the search by the color of the first ordered edge and runs the
/// parts on the current rayon pool, one fresh visitor per part. Results
/// come back in ascending first-edge color.
pub fn enumerate_partitioned<V, F>(ctx: &AdmissibilityContext, make: F) -> Vec<(u32, V, EnumStats)>
where
    V: ColoringVisitor + Send,
    F: Fn(u32) -> V + Sync,
{
    if ctx.edge_count() == 0 {
        return Vec::new();
    }
    let firsts: Vec<u32> = match candidates(ctx, 0, &vec![0; ctx.edge_count()]) {
        Some((lo, hi, step)) => (lo..=hi).step_by(step as usize).collect(),
        None => Vec::new(),
    };
    firsts
        .into_par_iter()
        .map(|color| {
            let start = Instant::now();
            let mut visitor = make(color);
            let mut search = Search {
                ctx,
                colors: vec![0; ctx.edge_count()],
                visitor: &mut visitor,
                stats: EnumStats::default(),
            };
            search.try_color(0, color);
            let mut stats = search.stats;
            stats.wall_time = start.elapsed();
            (color, visitor, stats)
        })
        .collect()
}

/// Number of admissible colorings.
pub fn count_admissible(ctx: &AdmissibilityContext) -> u64 {
    enumerate_admissible(ctx, &mut |_: &[u32]| {}).admissible_count
}
