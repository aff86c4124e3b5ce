//! Turaev-Viro invariants: the state sum over admissible colorings, series
//! over odd orders, convergence diagnostics and model fits.

mod fit;
mod optimize;
mod series;

pub use fit::{fit_constant, fit_model1, fit_model2, FitModel, FitResult};
pub use optimize::{estimator_report, optimize_triangulation, EstimatorRow, OptimizeReport};
pub use series::{log_quantity, s_r, tv_sequence, write_csv, TVRecord, TVSeries};

use std::time::{Duration, Instant};

use rug::Float;
use thiserror::Error;

use crate::arith::{with_precision_doubling, ArithError, Evaluation, PrecisionPolicy, TetScratch, WeightSystem};
use crate::coloring::{enumerate_partitioned, AdmissibilityContext, ColoringVisitor, EnumStats};
use crate::triangulation::{homology_z2, GluingTable, Skeleton, TriangulationError};

#[derive(Debug, Error)]
pub enum TvError {
    #[error(transparent)]
    Triangulation(#[from] TriangulationError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("TV_{r} = {value} is negative beyond the zero threshold")]
    ConventionViolation { r: u32, value: String },
    #[error("no target limit was given")]
    MissingTarget,
    #[error("{model} needs at least {needed} points, got {got}")]
    InsufficientPoints { model: &'static str, needed: usize, got: usize },
    #[error("fit is degenerate: {0}")]
    DegenerateFit(String),
    #[error("bad series record on line {line}: {message}")]
    BadRecord { line: usize, message: String },
    #[error("orders must be odd and increasing, got {0}..{1}")]
    BadRange(u32, u32),
}

/// Which colors the enumeration ranges over.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ColorMode {
    /// Integer colors only when the triangulation allows it.
    #[default]
    Auto,
    /// Integer colors only, whether or not that gives the invariant.
    IntegerOnly,
    /// All half-integer colors.
    General,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct TvOptions {
    pub policy: PrecisionPolicy,
    pub mode: ColorMode,
}

/// Local edges of a tetrahedron in the order `(a, b, c, d, e, f)` of the
/// Racah sum: `01, 02, 12, 23, 13, 03`.
const RACAH_EDGES: [usize; 6] = [0, 1, 3, 5, 4, 2];

/// The fixed, order-independent part of a state sum: what gets multiplied
/// in once each position of the edge order is colored.
#[derive(Clone, Debug)]
pub struct StateSum {
    skeleton: Skeleton,
    integer_only: bool,
    edge_order: Vec<usize>,
    tet_edges: Vec<[usize; 6]>,
    tets_by_last_edge: Vec<Vec<usize>>,
}

impl StateSum {
    pub fn new(table: &GluingTable, mode: ColorMode) -> Result<Self, TriangulationError> {
        let skeleton = Skeleton::new(table)?;
        let integer_only = match mode {
            ColorMode::Auto => homology_z2(&skeleton).integer_fast_path_allowed(),
            ColorMode::IntegerOnly => true,
            ColorMode::General => false,
        };
        let edge_order = crate::coloring::order_edges(&skeleton);
        let mut position = vec![0; edge_order.len()];
        for (k, &e) in edge_order.iter().enumerate() {
            position[e] = k;
        }
        let tet_edges: Vec<[usize; 6]> = (0..table.size())
            .map(|t| {
                let local = skeleton.tet_edges(t);
                RACAH_EDGES.map(|i| local[i])
            })
            .collect();
        let mut tets_by_last_edge = vec![Vec::new(); edge_order.len()];
        for (t, edges) in tet_edges.iter().enumerate() {
            let last = edges.iter().map(|&e| position[e]).max().unwrap();
            tets_by_last_edge[last].push(t);
        }
        Ok(StateSum { skeleton, integer_only, edge_order, tet_edges, tets_by_last_edge })
    }

    pub fn skeleton(&self) -> &Skeleton {
        &self.skeleton
    }

    pub fn integer_only(&self) -> bool {
        self.integer_only
    }

    pub fn context(&self, r: u32) -> AdmissibilityContext {
        let triangles = self.skeleton.triangles().iter().map(|t| t.edges).collect();
        AdmissibilityContext::with_order(triangles, self.edge_order.clone(), r, self.integer_only)
    }

    /// One evaluation of the state sum at `bits`, on the current rayon pool.
    pub fn evaluate(&self, ctx: &AdmissibilityContext, bits: u32) -> Result<(Evaluation, EnumStats), ArithError> {
        let ws = WeightSystem::new(ctx.r, bits)?;
        let parts = enumerate_partitioned(ctx, |_| Accumulator::new(self, ctx, &ws));
        let mut value = Float::with_val(bits, 0);
        let mut magnitude = Float::with_val(bits, 0);
        let mut stats = EnumStats::default();
        for (_, acc, s) in parts {
            value += &acc.sum;
            magnitude += &acc.magnitude;
            stats += s;
        }
        let mut scale = Float::with_val(bits, 1);
        for _ in 0..self.skeleton.vertex_count() {
            scale *= ws.eta2();
        }
        value *= &scale;
        magnitude *= &scale;
        Ok((Evaluation { value, magnitude }, stats))
    }
}

/// Keeps one running product per depth of the edge order.
struct Accumulator<'a> {
    plan: &'a StateSum,
    ctx: &'a AdmissibilityContext,
    ws: &'a WeightSystem,
    products: Vec<Float>,
    factor: Float,
    scratch: TetScratch,
    sum: Float,
    magnitude: Float,
}

impl<'a> Accumulator<'a> {
    fn new(plan: &'a StateSum, ctx: &'a AdmissibilityContext, ws: &'a WeightSystem) -> Self {
        let bits = ws.bits();
        Accumulator {
            plan,
            ctx,
            ws,
            products: vec![Float::new(bits); ctx.edge_count()],
            factor: Float::new(bits),
            scratch: TetScratch::new(bits),
            sum: Float::with_val(bits, 0),
            magnitude: Float::with_val(bits, 0),
        }
    }
}

impl ColoringVisitor for Accumulator<'_> {
    fn descend(&mut self, depth: usize, colors: &[u32]) {
        let (done, rest) = self.products.split_at_mut(depth);
        let product = &mut rest[0];
        match done.last() {
            Some(prev) => {
                rug::Assign::assign(&mut *product, prev);
                *product *= self.ws.edge(colors[self.ctx.edge_order[depth]]);
            }
            None => rug::Assign::assign(&mut *product, self.ws.edge(colors[self.ctx.edge_order[depth]])),
        }
        for &t in &self.ctx.triangles_by_last_edge[depth] {
            let [a, b, c] = self.ctx.triangles[t];
            self.ws.triangle_into(&mut self.factor, colors[a], colors[b], colors[c]);
            *product *= &self.factor;
        }
        for &t in &self.plan.tets_by_last_edge[depth] {
            let colored = self.plan.tet_edges[t].map(|e| colors[e]);
            self.ws.tet_into(&mut self.factor, &mut self.scratch, colored);
            *product *= &self.factor;
        }
    }

    fn leaf(&mut self, _colors: &[u32]) {
        let term = self.products.last().unwrap();
        self.sum += term;
        if term.is_sign_negative() {
            self.magnitude -= term;
        } else {
            self.magnitude += term;
        }
    }
}

fn check_order(r: u32) -> Result<(), TvError> {
    if r < 3 || r % 2 == 0 {
        return Err(ArithError::EvenOrderUnsupported(r).into());
    }
    Ok(())
}

/// `TV_r` of a closed triangulation, verified by precision doubling
/// starting at `options.policy.initial_bits`.
pub fn tv_invariant(table: &GluingTable, r: u32, options: &TvOptions) -> Result<TVRecord, TvError> {
    let plan = StateSum::new(table, options.mode)?;
    tv_with_plan(&plan, r, options, options.policy.initial_bits)
}

/// As [`tv_invariant`], reusing a prepared [`StateSum`] and an explicit
/// starting width.
pub fn tv_with_plan(plan: &StateSum, r: u32, options: &TvOptions, starting_bits: u32) -> Result<TVRecord, TvError> {
    check_order(r)?;
    let start = Instant::now();
    let ctx = plan.context(r);
    let mut stats = EnumStats::default();
    let outcome = with_precision_doubling(
        |bits| -> Result<Evaluation, TvError> {
            let (eval, s) = plan.evaluate(&ctx, bits)?;
            stats = s;
            Ok(eval)
        },
        &options.policy,
        starting_bits,
    )?;
    Ok(TVRecord {
        r,
        value: outcome.value,
        declared_zero: outcome.declared_zero,
        bits_used: outcome.bits_used,
        admissible_count: stats.admissible_count,
        nodes_visited: stats.nodes_visited,
        wall_time: start.elapsed(),
    })
}

/// A single fixed-width evaluation with no verification, for reference
/// values and diagnostics.
pub fn tv_fixed_precision(table: &GluingTable, r: u32, bits: u32, mode: ColorMode) -> Result<(Float, EnumStats), TvError> {
    check_order(r)?;
    let plan = StateSum::new(table, mode)?;
    let (eval, stats) = plan.evaluate(&plan.context(r), bits)?;
    Ok((eval.value, stats))
}

pub(crate) fn millis(d: Duration) -> u64 {
    d.as_millis() as u64
}
