//! The admissibility polytope of a triangulation: lattice-point counts of
//! its dilations, volume estimates, and the resulting coloring-count
//! estimator.

mod count;
mod volume;

pub use count::count_lattice_points;
pub use volume::{default_dilations, ehrhart_samples, ehrhart_volume, ehrhart_volume_fit, fit_leading_coefficient, mc_volume, EhrhartSample, VolumeEstimate, VolumeMethod};

use serde::Serialize;
use thiserror::Error;

use crate::triangulation::Skeleton;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolytopeError {
    #[error("a volume fit needs at least {needed} even dilations, got {got}")]
    InsufficientSamples { needed: usize, got: usize },
    #[error("dilation {0} is not a positive even integer")]
    OddDilation(u64),
    #[error("no Monte-Carlo sample out of {samples} fell inside the polytope")]
    DegenerateEstimate { samples: u64 },
    #[error("the least-squares system for the volume fit is singular")]
    SingularFit,
}

/// One inequality `sum(coeffs[i] * x[i]) <= rhs_halves / 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Row {
    pub coeffs: Vec<i32>,
    pub rhs_halves: i32,
}

impl Row {
    /// Whether `(1/4, ..., 1/4)` satisfies the row strictly.
    fn strictly_holds_at_quarter(&self) -> bool {
        self.coeffs.iter().sum::<i32>() < 2 * self.rhs_halves
    }
}

/// `{x : A x <= b}` over edge space, with `0 <= x_i <= 1/2` among the rows.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdmissibilityPolytope {
    pub dim: usize,
    pub rows: Vec<Row>,
}

impl AdmissibilityPolytope {
    /// Builds a polytope from raw rows, dropping zero rows and repeats.
    ///
    /// # Panics
    /// If some row has the wrong length.
    pub fn from_rows(dim: usize, rows: impl IntoIterator<Item = Row>) -> Self {
        let mut seen = std::collections::HashSet::new();
        let mut kept = Vec::new();
        for row in rows {
            assert_eq!(row.coeffs.len(), dim, "row length must equal the dimension");
            if row.coeffs.iter().all(|&c| c == 0) {
                continue;
            }
            if seen.insert(row.clone()) {
                kept.push(row);
            }
        }
        AdmissibilityPolytope { dim, rows: kept }
    }

    /// Whether `(1/4, ..., 1/4)` lies strictly inside every row.
    pub fn quarter_point_is_interior(&self) -> bool {
        self.rows.iter().all(Row::strictly_holds_at_quarter)
    }

    /// Whether a real point satisfies every row.
    pub fn contains(&self, x: &[f64]) -> bool {
        self.rows.iter().all(|row| {
            let lhs: f64 = row.coeffs.iter().zip(x).map(|(&c, &xi)| c as f64 * xi).sum();
            2.0 * lhs <= row.rhs_halves as f64
        })
    }

    /// The box `[0, 1/2]^dim`.
    pub fn cube(dim: usize) -> Self {
        Self::from_rows(dim, box_rows(dim))
    }

    /// The simplex `x_i >= 0, x_1 + ... + x_dim <= 1/2`.
    pub fn simplex(dim: usize) -> Self {
        let mut rows: Vec<Row> = box_rows(dim).filter(|r| r.rhs_halves == 0).collect();
        rows.push(Row { coeffs: vec![1; dim], rhs_halves: 1 });
        Self::from_rows(dim, rows)
    }
}

fn unit(dim: usize, i: usize, value: i32) -> Vec<i32> {
    let mut v = vec![0; dim];
    v[i] = value;
    v
}

fn box_rows(dim: usize) -> impl Iterator<Item = Row> {
    (0..dim).flat_map(move |i| {
        [Row { coeffs: unit(dim, i, -1), rhs_halves: 0 }, Row { coeffs: unit(dim, i, 1), rhs_halves: 1 }]
    })
}

/// Rows of `P_T`: `0 <= x_e <= 1/2` for every edge, and for every triangle
/// with sides `(a, b, c)` the three triangle inequalities and `a + b + c <= 1`,
/// with repeated sides collected into a single coefficient.
pub fn build_polytope(skeleton: &Skeleton) -> AdmissibilityPolytope {
    let dim = skeleton.edge_count();
    let mut rows: Vec<Row> = box_rows(dim).collect();
    for tri in skeleton.triangles() {
        for i in 0..3 {
            let mut coeffs = vec![0; dim];
            for (j, &e) in tri.edges.iter().enumerate() {
                coeffs[e] += if i == j { 1 } else { -1 };
            }
            rows.push(Row { coeffs, rhs_halves: 0 });
        }
        let mut coeffs = vec![0; dim];
        for &e in &tri.edges {
            coeffs[e] += 1;
        }
        rows.push(Row { coeffs, rhs_halves: 2 });
    }
    let polytope = AdmissibilityPolytope::from_rows(dim, rows);
    debug_assert!(polytope.quarter_point_is_interior());
    polytope
}

/// `vol(P_T) * (r - 2)^dim`, the expected number of integer admissible
/// colorings at order `r`.
pub fn coloring_estimator(volume: f64, dim: usize, r: u32) -> f64 {
    volume * (r.saturating_sub(2) as f64).powi(dim as i32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangulation::GluingTable;

    #[test]
    fn duplicates_and_zero_rows_are_dropped() {
        let r = |c: Vec<i32>, h| Row { coeffs: c, rhs_halves: h };
        let p = AdmissibilityPolytope::from_rows(2, [r(vec![1, 0], 1), r(vec![0, 0], 0), r(vec![1, 0], 1)]);
        assert_eq!(p.rows.len(), 1);
    }

    #[test]
    fn sphere_polytope_is_two_dimensional_with_interior_quarter_point() {
        let t = GluingTable::from_json(include_str!("../../data/s3_1tet.json")).unwrap();
        let p = build_polytope(&Skeleton::new(&t).unwrap());
        assert_eq!(p.dim, 2);
        assert!(p.quarter_point_is_interior());
        assert!(p.rows.len() <= 2 * (1 + 1) + 4 * 2);
    }

    #[test]
    fn estimator_vanishes_at_order_two() {
        assert_eq!(coloring_estimator(0.1, 3, 2), 0.0);
        assert_eq!(coloring_estimator(0.25, 2, 12), 25.0);
    }
}
