use serde::Serialize;

use super::TvError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FitModel {
    /// `a log(x + b) / (x + b)`
    Model1,
    /// `a / (x + b) + c`
    Model2,
    /// `c`
    Constant,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FitResult {
    pub model: FitModel,
    /// `[a, b]`, `[a, b, c]` or `[c]`.
    pub params: Vec<f64>,
    pub rss: f64,
    pub points_used: usize,
}

impl FitResult {
    pub fn eval(&self, x: f64) -> f64 {
        match (self.model, &self.params[..]) {
            (FitModel::Model1, &[a, b]) => a * (x + b).ln() / (x + b),
            (FitModel::Model2, &[a, b, c]) => a / (x + b) + c,
            (FitModel::Constant, &[c]) => c,
            _ => unreachable!("parameter count matches the model"),
        }
    }
}

const GRID: usize = 400;
const REL_WIDTH: f64 = 1e-6;

/// Linear parameters and rss for a fixed shift `b`, or `None` if singular.
type Inner = dyn Fn(f64) -> Option<(Vec<f64>, f64)>;

/// Scans a geometric grid of shifts `b` with `x + b` from just above zero
/// to ten times the largest `x`, then refines the best one by
/// golden-section search.
fn search_shift(points: &[(f64, f64)], inner: &Inner) -> Result<(f64, Vec<f64>, f64), TvError> {
    let min_x = points.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let max_x = points.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    let lo = 1e-6 * max_x.abs().max(1.0);
    let hi = 10.0 * max_x.abs().max(1.0) + min_x.abs();
    let ratio = (hi / lo).powf(1.0 / (GRID - 1) as f64);
    let grid: Vec<f64> = (0..GRID).map(|i| lo * ratio.powi(i as i32)).collect();
    let rss_at = |u: f64| inner(u - min_x).map_or(f64::INFINITY, |(_, rss)| rss);
    let scores: Vec<f64> = grid.iter().map(|&u| rss_at(u)).collect();
    let best = (0..GRID)
        .filter(|&i| scores[i].is_finite())
        .min_by(|&i, &j| scores[i].total_cmp(&scores[j]))
        .ok_or_else(|| TvError::DegenerateFit("no shift gives a solvable system".into()))?;
    let (mut a, mut b) = (grid[best.saturating_sub(1)], grid[(best + 1).min(GRID - 1)]);
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let (mut fc, mut fd) = (rss_at(c), rss_at(d));
    while (b - a) > REL_WIDTH * b.abs() {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = rss_at(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = rss_at(d);
        }
    }
    let mut u = 0.5 * (a + b);
    if rss_at(u) > scores[best] {
        u = grid[best];
    }
    let shift = u - min_x;
    let (params, rss) = inner(shift).ok_or_else(|| TvError::DegenerateFit("singular at the optimum".into()))?;
    Ok((shift, params, rss))
}

fn require(model: &'static str, points: &[(f64, f64)], needed: usize) -> Result<(), TvError> {
    if points.len() < needed {
        return Err(TvError::InsufficientPoints { model, needed, got: points.len() });
    }
    Ok(())
}

/// Least-squares fit of `a log(x + b) / (x + b)`.
pub fn fit_model1(points: &[(f64, f64)]) -> Result<FitResult, TvError> {
    require("model 1", points, 4)?;
    let owned = points.to_vec();
    let inner = move |b: f64| {
        let g: Vec<f64> = owned.iter().map(|&(x, _)| (x + b).ln() / (x + b)).collect();
        let gg: f64 = g.iter().map(|v| v * v).sum();
        if !(gg > 1e-300) {
            return None;
        }
        let a = g.iter().zip(&owned).map(|(gi, p)| gi * p.1).sum::<f64>() / gg;
        let rss = g.iter().zip(&owned).map(|(gi, p)| (p.1 - a * gi).powi(2)).sum();
        Some((vec![a], rss))
    };
    let (b, params, rss) = search_shift(points, &inner)?;
    Ok(FitResult { model: FitModel::Model1, params: vec![params[0], b], rss, points_used: points.len() })
}

/// Least-squares fit of `a / (x + b) + c`.
pub fn fit_model2(points: &[(f64, f64)]) -> Result<FitResult, TvError> {
    require("model 2", points, 5)?;
    let owned = points.to_vec();
    let inner = move |b: f64| {
        let n = owned.len() as f64;
        let g: Vec<f64> = owned.iter().map(|&(x, _)| 1.0 / (x + b)).collect();
        let (sg, sgg): (f64, f64) = (g.iter().sum(), g.iter().map(|v| v * v).sum());
        let sy: f64 = owned.iter().map(|p| p.1).sum();
        let sgy: f64 = g.iter().zip(&owned).map(|(gi, p)| gi * p.1).sum();
        let det = n * sgg - sg * sg;
        if det.abs() <= 1e-14 * n * sgg {
            return None;
        }
        let a = (n * sgy - sg * sy) / det;
        let c = (sgg * sy - sg * sgy) / det;
        let rss = g.iter().zip(&owned).map(|(gi, p)| (p.1 - a * gi - c).powi(2)).sum();
        Some((vec![a, c], rss))
    };
    let (b, params, rss) = search_shift(points, &inner)?;
    Ok(FitResult { model: FitModel::Model2, params: vec![params[0], b, params[1]], rss, points_used: points.len() })
}

/// The mean, as a baseline for the residuals of the other models.
pub fn fit_constant(points: &[(f64, f64)]) -> Result<FitResult, TvError> {
    require("constant", points, 1)?;
    let mean = points.iter().map(|p| p.1).sum::<f64>() / points.len() as f64;
    let rss = points.iter().map(|p| (p.1 - mean).powi(2)).sum();
    Ok(FitResult { model: FitModel::Constant, params: vec![mean], rss, points_used: points.len() })
}
