//! Uniform `m × n` composite application of the single-cell rule.
//!
//! Per-cell bounds are summed, so the composite bound is still a certificate
//! whenever the sup-norm is. Cells may be evaluated concurrently; values and
//! bounds are combined by a fixed pairwise reduction over row-major cell
//! order, so parallel and serial execution produce identical bits.

use rayon::prelude::*;

use crate::bounds::{error_bound, optimal_params};
use crate::domain::{BivariateFn, CertifiedValue, ParamMode, ParamSet, QuadConfig, Rectangle};
use crate::error::{Error, Result};
use crate::rule::cubature_value_with_bound;
use crate::supnorm::resolve_supnorm;

/// One convergence-study row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub m: u32,
    pub n: u32,
    pub value: f64,
    pub certified_bound: f64,
    /// `|value − oracle|` when a reference value was supplied.
    pub true_error: Option<f64>,
}

/// A convergence study over a list of grids, in input order.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositeReport {
    pub rows: Vec<ConvergenceRow>,
    pub function_id: String,
}

/// Rule parameters for one cell under the given mode.
fn cell_theta(cell: &Rectangle, mode: &ParamMode) -> ParamSet {
    match mode {
        ParamMode::Midpoint => ParamSet::for_midpoint_rule(cell),
        ParamMode::Trapezoid => ParamSet::for_trapezoid_rule(cell),
        ParamMode::Optimal => optimal_params(cell),
        ParamMode::Custom(rel) => rel.theta_for(cell),
    }
}

/// Pairwise (tree) sum in slice order. Reassociation-free: any execution
/// that fills the slice identically reduces to identical bits.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        len => {
            let mid = len / 2;
            pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn integrate_cells(
    f: &BivariateFn,
    rect: &Rectangle,
    m: u32,
    n: u32,
    mode: &ParamMode,
    cfg: &QuadConfig,
    supnorm: f64,
    parallel: bool,
) -> Result<(f64, f64)> {
    let indices: Vec<(u32, u32)> = (0..m).flat_map(|i| (0..n).map(move |j| (i, j))).collect();

    let per_cell = |&(i, j): &(u32, u32)| -> Result<(f64, f64)> {
        let run = || -> Result<(f64, f64)> {
            let cell = rect.cell(i, j, m, n)?;
            let theta = cell_theta(&cell, mode);
            let bound = error_bound(&cell, &theta, supnorm)?.total;
            let terms = cubature_value_with_bound(f, &cell, &theta, cfg, bound)?;
            Ok((terms.value, bound))
        };
        run().map_err(|e| Error::CellFailure {
            i,
            j,
            source: Box::new(e),
        })
    };

    let cells: Vec<(f64, f64)> = if parallel {
        indices.par_iter().map(per_cell).collect::<Result<_>>()?
    } else {
        indices.iter().map(per_cell).collect::<Result<_>>()?
    };

    let values: Vec<f64> = cells.iter().map(|c| c.0).collect();
    let bounds: Vec<f64> = cells.iter().map(|c| c.1).collect();
    Ok((pairwise_sum(&values), pairwise_sum(&bounds)))
}

fn run(
    f: &BivariateFn,
    rect: &Rectangle,
    m: u32,
    n: u32,
    mode: &ParamMode,
    cfg: &QuadConfig,
    parallel: bool,
) -> Result<CertifiedValue> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidInput(format!(
            "grid must be at least 1 x 1, got {m} x {n}"
        )));
    }
    // one sup-norm for the whole rectangle: a valid over-estimate per cell
    let (supnorm, provenance) = resolve_supnorm(f, rect)?;
    let (value, bound) = integrate_cells(f, rect, m, n, mode, cfg, supnorm, parallel)?;
    Ok(CertifiedValue {
        value,
        bound,
        supnorm_used: supnorm,
        supnorm_provenance: provenance,
        cells: (m, n),
        param_mode: *mode,
    })
}

/// Integrates `f` over `rect` on a uniform `m × n` grid of cells, applying
/// the single-cell rule with mode-determined parameters per cell and summing
/// values and certified bounds.
pub fn integrate_composite(
    f: &BivariateFn,
    rect: &Rectangle,
    m: u32,
    n: u32,
    mode: &ParamMode,
    cfg: &QuadConfig,
) -> Result<CertifiedValue> {
    run(f, rect, m, n, mode, cfg, false)
}

/// [`integrate_composite`] with cells evaluated on the rayon thread pool.
/// Output is bit-identical to the serial version.
pub fn integrate_composite_parallel(
    f: &BivariateFn,
    rect: &Rectangle,
    m: u32,
    n: u32,
    mode: &ParamMode,
    cfg: &QuadConfig,
) -> Result<CertifiedValue> {
    run(f, rect, m, n, mode, cfg, true)
}

/// Runs [`integrate_composite`] once per grid level and tabulates the
/// results; `true_error` is filled when `oracle_value` is supplied.
pub fn convergence_table(
    f: &BivariateFn,
    rect: &Rectangle,
    levels: &[(u32, u32)],
    mode: &ParamMode,
    cfg: &QuadConfig,
    oracle_value: Option<f64>,
) -> Result<CompositeReport> {
    if levels.is_empty() {
        return Err(Error::InvalidInput("levels must be nonempty".into()));
    }
    let mut rows = Vec::with_capacity(levels.len());
    for &(m, n) in levels {
        let cv = integrate_composite(f, rect, m, n, mode, cfg)?;
        rows.push(ConvergenceRow {
            m,
            n,
            value: cv.value,
            certified_bound: cv.bound,
            true_error: oracle_value.map(|o| (cv.value - o).abs()),
        });
    }
    Ok(CompositeReport {
        rows,
        function_id: f.name().to_string(),
    })
}
