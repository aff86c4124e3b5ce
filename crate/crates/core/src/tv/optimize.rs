use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{ColorMode, StateSum, TvError};
use crate::coloring::enumerate_admissible;
use crate::polytope::{build_polytope, coloring_estimator, ehrhart_volume, mc_volume, PolytopeError};
use crate::triangulation::{candidate_23_moves, candidate_32_moves, GluingTable, Skeleton};

#[derive(Clone, Debug, Serialize)]
pub struct OptimizeReport {
    /// `(size, volume)` after every step; the volume is only estimated for
    /// triangulations of the smallest size seen so far.
    pub visited: Vec<(usize, Option<f64>)>,
    pub moves_applied: usize,
    pub best_size: usize,
    pub best_volume: f64,
}

/// Random walk of bistellar moves. Each step picks 2-3 or 3-2 uniformly
/// among the kinds that have a candidate, then a candidate uniformly. Sizes
/// stay within `size_cap`. Returns the smallest triangulation met whose
/// admissibility polytope has the least Monte-Carlo volume.
pub fn optimize_triangulation(
    table: &GluingTable,
    steps: usize,
    seed: u64,
    mc_samples: u64,
    size_cap: usize,
) -> Result<(GluingTable, OptimizeReport), TvError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut volumes: HashMap<Vec<u32>, f64> = HashMap::new();
    let mut volume_of = |t: &GluingTable, skeleton: &Skeleton| -> f64 {
        *volumes.entry(t.canonical_code()).or_insert_with(|| {
            match mc_volume(&build_polytope(skeleton), mc_samples, seed) {
                Ok(v) => v.value,
                Err(PolytopeError::DegenerateEstimate { .. }) => 0.0,
                Err(e) => panic!("unexpected volume error: {e}"),
            }
        })
    };

    let mut current = table.clone();
    let mut skeleton = Skeleton::new(&current)?;
    let mut best = current.clone();
    let mut best_volume = volume_of(&current, &skeleton);
    let mut report = OptimizeReport { visited: Vec::new(), moves_applied: 0, best_size: best.size(), best_volume };

    for _ in 0..steps {
        let ups = if current.size() < size_cap { candidate_23_moves(&skeleton) } else { Vec::new() };
        let downs = candidate_32_moves(&skeleton);
        let kinds: Vec<bool> = [(true, !ups.is_empty()), (false, !downs.is_empty())]
            .into_iter()
            .filter_map(|(up, ok)| ok.then_some(up))
            .collect();
        let Some(&up) = kinds.choose(&mut rng) else { break };
        let moved = if up {
            current.pachner_23(ups[rng.gen_range(0..ups.len())])
        } else {
            current.pachner_32(downs[rng.gen_range(0..downs.len())])
        };
        let Ok(next) = moved else {
            report.visited.push((current.size(), None));
            continue;
        };
        current = next;
        skeleton = Skeleton::new(&current)?;
        report.moves_applied += 1;
        let size = current.size();
        let volume = (size <= best.size()).then(|| volume_of(&current, &skeleton));
        if let Some(v) = volume {
            if size < best.size() || v < best_volume {
                best = current.clone();
                best_volume = v;
            }
        }
        report.visited.push((size, volume));
    }
    report.best_size = best.size();
    report.best_volume = best_volume;
    Ok((best, report))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EstimatorRow {
    pub r: u32,
    pub admissible: u64,
    pub estimator: f64,
    /// `max(estimator / admissible, admissible / estimator)`.
    pub estimate_ratio: Option<f64>,
    pub nodes_visited: u64,
    /// `nodes_visited / admissible`.
    pub tree_ratio: Option<f64>,
}

/// Compares the polytope-volume estimate `vol(P_T) (r-2)^e` with the actual
/// number of admissible colorings, and the backtracking tree size with it,
/// for each `r` in `orders`. The volume comes from lattice-point counts.
pub fn estimator_report(table: &GluingTable, orders: &[u32]) -> Result<(f64, Vec<EstimatorRow>), TvError> {
    let plan = StateSum::new(table, ColorMode::Auto)?;
    let polytope = build_polytope(plan.skeleton());
    let volume = ehrhart_volume(&polytope).map_err(|e| TvError::DegenerateFit(e.to_string()))?.value;
    let rows = orders
        .iter()
        .map(|&r| {
            let stats = enumerate_admissible(&plan.context(r), &mut |_: &[u32]| {});
            let estimator = coloring_estimator(volume, polytope.dim, r);
            let adm = stats.admissible_count;
            EstimatorRow {
                r,
                admissible: adm,
                estimator,
                estimate_ratio: (adm > 0 && estimator > 0.0).then(|| (estimator / adm as f64).max(adm as f64 / estimator)),
                nodes_visited: stats.nodes_visited,
                tree_ratio: (adm > 0).then(|| stats.nodes_visited as f64 / adm as f64),
            }
        })
        .collect();
    Ok((volume, rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> GluingTable {
        GluingTable::from_json(include_str!("../../data/s3_1tet.json")).unwrap()
    }

    #[test]
    fn estimator_close_to_count_on_s3() {
        let (volume, rows) = estimator_report(&s3(), &[21]).unwrap();
        assert!((volume - 7.0 / 72.0).abs() < 1e-12);
        assert!(rows[0].estimate_ratio.unwrap() <= 2.0);
        assert!(rows[0].tree_ratio.unwrap() >= 1.0);
    }

    #[test]
    fn walk_never_returns_a_larger_triangulation() {
        let table = GluingTable::from_json(include_str!("../../data/rp3_2tet.json")).unwrap();
        let (best, report) = optimize_triangulation(&table, 20, 3, 2000, 4).unwrap();
        assert!(best.size() <= 2);
        assert!(report.moves_applied > 0);
        assert!(report.visited.iter().all(|&(size, _)| size <= 4));
    }
}
