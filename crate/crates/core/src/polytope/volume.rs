use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{count_lattice_points, AdmissibilityPolytope, PolytopeError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VolumeMethod {
    MonteCarlo,
    EhrhartFit,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VolumeEstimate {
    pub value: f64,
    pub std_error: f64,
    pub method: VolumeMethod,
    /// Sample count for Monte-Carlo, the dilations used for a fit.
    pub provenance: Vec<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EhrhartSample {
    pub k: u64,
    pub count: u64,
}

/// Lattice-point counts at the given dilations.
pub fn ehrhart_samples(p: &AdmissibilityPolytope, dilations: &[u64]) -> Vec<EhrhartSample> {
    dilations.iter().map(|&k| EhrhartSample { k, count: count_lattice_points(p, k) }).collect()
}

/// Eight even dilations in the upper half of a range whose largest count
/// stays around a few million points.
pub fn default_dilations(dim: usize) -> Vec<u64> {
    let budget: f64 = 4e6;
    let k_max = (2.0 * budget.powf(1.0 / dim.max(1) as f64)).clamp(16.0, 400.0) as u64 & !1;
    let k_min = (k_max / 2) & !1;
    let step = ((k_max - k_min) / 7).max(2) & !1;
    (0..8).map(|i| k_max - i * step).filter(|&k| k >= 2).rev().collect()
}

/// Volume from a least-squares fit of `count(k) ≈ c_d k^d + c_{d-1} k^{d-1} + c_{d-2} k^{d-2}`
/// over even dilations; the leading coefficient is the volume.
pub fn ehrhart_volume_fit(p: &AdmissibilityPolytope, dilations: &[u64]) -> Result<VolumeEstimate, PolytopeError> {
    if let Some(&k) = dilations.iter().find(|&&k| k == 0 || k % 2 == 1) {
        return Err(PolytopeError::OddDilation(k));
    }
    let samples = ehrhart_samples(p, dilations);
    fit_leading_coefficient(p.dim, &samples)
}

pub fn fit_leading_coefficient(dim: usize, samples: &[EhrhartSample]) -> Result<VolumeEstimate, PolytopeError> {
    let terms = dim.min(2) + 1;
    if samples.len() < 3 {
        return Err(PolytopeError::InsufficientSamples { needed: 3, got: samples.len() });
    }
    let k_max = samples.iter().map(|s| s.k).max().unwrap() as f64;
    // columns (k / k_max)^(d - j), rows scaled by k_max^-d
    let x = DMatrix::from_fn(samples.len(), terms, |i, j| (samples[i].k as f64 / k_max).powi((dim - j) as i32));
    let y = DVector::from_fn(samples.len(), |i, _| samples[i].count as f64 / k_max.powi(dim as i32));
    let svd = x.clone().svd(true, true);
    let beta = svd.solve(&y, 1e-12).map_err(|_| PolytopeError::SingularFit)?;
    let residual = &y - &x * &beta;
    let dof = samples.len().saturating_sub(terms).max(1) as f64;
    let sigma2 = residual.norm_squared() / dof;
    let xtx = x.transpose() * &x;
    let inv = xtx.try_inverse().ok_or(PolytopeError::SingularFit)?;
    Ok(VolumeEstimate {
        value: beta[0],
        std_error: (sigma2 * inv[(0, 0)]).max(0.0).sqrt(),
        method: VolumeMethod::EhrhartFit,
        provenance: samples.iter().map(|s| s.k).collect(),
    })
}

/// Periods tried by [`ehrhart_volume`], and the largest lattice count it
/// computes while looking for one.
const PERIODS: [u64; 7] = [2, 4, 6, 8, 12, 16, 24];
const PERIOD_COUNT_BUDGET: u64 = 20_000_000;

/// Exact volume when the counts restricted to `k = q m` for one of a few
/// even periods `q` are a polynomial in `m`: `dim + 3` consecutive values
/// with vanishing `(dim + 1)`-th differences, and the volume read from the
/// `dim`-th difference. Falls back to [`ehrhart_volume_fit`] over
/// [`default_dilations`] when no period is found before the counts grow
/// past a few tens of millions.
pub fn ehrhart_volume(p: &AdmissibilityPolytope) -> Result<VolumeEstimate, PolytopeError> {
    let d = p.dim;
    'period: for q in PERIODS {
        let mut counts = Vec::with_capacity(d + 3);
        for m in 1..=(d as u64 + 3) {
            let c = count_lattice_points(p, q * m);
            if c > PERIOD_COUNT_BUDGET {
                break 'period;
            }
            counts.push(c as i128);
        }
        let mut diffs = counts;
        for _ in 0..d {
            diffs = diffs.windows(2).map(|w| w[1] - w[0]).collect();
        }
        if diffs.iter().all(|&x| x == diffs[0]) {
            let factorial: f64 = (1..=d).map(|i| i as f64).product();
            return Ok(VolumeEstimate {
                value: diffs[0] as f64 / factorial / (q as f64).powi(d as i32),
                std_error: 0.0,
                method: VolumeMethod::EhrhartFit,
                provenance: (1..=(d as u64 + 3)).map(|m| q * m).collect(),
            });
        }
    }
    ehrhart_volume_fit(p, &default_dilations(d))
}

const BLOCK: u64 = 1 << 14;

/// Rejection sampling in `[0, 1/2]^dim`. Samples are drawn in fixed-size
/// blocks, each from its own stream of a ChaCha generator seeded with
/// `seed`, so the estimate does not depend on the thread count.
pub fn mc_volume(p: &AdmissibilityPolytope, samples: u64, seed: u64) -> Result<VolumeEstimate, PolytopeError> {
    let blocks = samples.div_ceil(BLOCK);
    let hits: u64 = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b);
            let n = BLOCK.min(samples - b * BLOCK);
            let mut x = vec![0.0; p.dim];
            (0..n)
                .filter(|_| {
                    x.iter_mut().for_each(|xi| *xi = rng.gen_range(0.0..0.5));
                    p.contains(&x)
                })
                .count() as u64
        })
        .sum();
    if hits == 0 {
        return Err(PolytopeError::DegenerateEstimate { samples });
    }
    let box_volume = 0.5f64.powi(p.dim as i32);
    let fraction = hits as f64 / samples as f64;
    Ok(VolumeEstimate {
        value: fraction * box_volume,
        std_error: (fraction * (1.0 - fraction) / samples as f64).sqrt() * box_volume,
        method: VolumeMethod::MonteCarlo,
        provenance: vec![samples],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::Row;

    #[test]
    fn box_volume_from_fit() {
        let est = ehrhart_volume_fit(&AdmissibilityPolytope::cube(2), &[10, 20, 30, 40]).unwrap();
        assert!((est.value - 0.25).abs() < 1e-9);
    }

    #[test]
    fn exact_volumes_from_periodic_counts() {
        let cube = ehrhart_volume(&AdmissibilityPolytope::cube(3)).unwrap();
        assert_eq!((cube.value, cube.std_error), (0.125, 0.0));
        let simplex = ehrhart_volume(&AdmissibilityPolytope::simplex(4)).unwrap();
        assert!((simplex.value - 0.0625 / 24.0).abs() < 1e-15);
        // counts along even k alone are not polynomial here
        let p = AdmissibilityPolytope::from_rows(
            2,
            [
                Row { coeffs: vec![-1, 0], rhs_halves: 0 },
                Row { coeffs: vec![0, -1], rhs_halves: 0 },
                Row { coeffs: vec![2, 1], rhs_halves: 1 },
                Row { coeffs: vec![0, 1], rhs_halves: 1 },
            ],
        );
        let est = ehrhart_volume(&p).unwrap();
        assert_eq!(est.provenance[0], 4);
        assert!((est.value - 1.0 / 16.0).abs() < 1e-15);
    }

    #[test]
    fn simplex_volume_from_monte_carlo() {
        let p = AdmissibilityPolytope::simplex(3);
        let est = mc_volume(&p, 200_000, 7).unwrap();
        let exact = 0.125 / 6.0;
        assert!((est.value - exact).abs() <= 3.0 * est.std_error);
    }

    #[test]
    fn monte_carlo_is_reproducible() {
        let p = AdmissibilityPolytope::simplex(2);
        assert_eq!(mc_volume(&p, 50_000, 3).unwrap(), mc_volume(&p, 50_000, 3).unwrap());
    }

    #[test]
    fn default_dilations_are_even_and_increasing() {
        for d in 1..12 {
            let ks = default_dilations(d);
            assert!(ks.len() >= 3);
            assert!(ks.iter().all(|k| k % 2 == 0));
            assert!(ks.windows(2).all(|w| w[0] < w[1]));
        }
    }
}
