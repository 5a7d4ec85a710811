//! Deterministic parallel parameter maps and position sweeps.
//!
//! Every grid cell is an independent solve. Cells are evaluated on a rayon
//! pool and gathered by index, so results do not depend on the number of
//! workers or on completion order.

mod axis;
mod map;
mod position;
mod result;

pub use axis::{AxisKind, SweepAxis};
pub use map::{run_map, MapConfig, MapObservable};
pub use position::{place_emitters, run_position_sweep, Placement, PositionSweepConfig};
pub use result::{CellFailure, SweepResult};

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Default upper bound on the number of cells of one sweep.
pub const DEFAULT_CELL_BUDGET: usize = 100_000;

fn check_budget(cells: usize, budget: usize) -> Result<()> {
    if cells > budget {
        return Err(Error::CellBudget { cells, budget });
    }
    Ok(())
}

/// Evaluates `f` on every cell index, in parallel, returning results in
/// index order.
fn evaluate_cells<F>(cells: usize, workers: Option<usize>, f: F) -> Result<Vec<Result<Vec<f64>>>>
where
    F: Fn(usize) -> Result<Vec<f64>> + Sync + Send,
{
    let run = || (0..cells).into_par_iter().map(&f).collect::<Vec<_>>();
    match workers {
        None => Ok(run()),
        Some(0) => Err(Error::InvalidSweep("worker count must be >= 1".into())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidSweep(format!("cannot start worker pool: {e}")))?;
            Ok(pool.install(run))
        }
    }
}

/// Assembles per-cell outcomes into grids, recording failures as NaN cells.
fn assemble(
    axes: Vec<SweepAxis>,
    observables: Vec<String>,
    outcomes: Vec<Result<Vec<f64>>>,
) -> SweepResult {
    let n_obs = observables.len();
    let mut grids = vec![Vec::with_capacity(outcomes.len()); n_obs];
    let mut failures = Vec::new();
    for (cell, out) in outcomes.into_iter().enumerate() {
        match out {
            Ok(vals) => {
                for (g, v) in grids.iter_mut().zip(vals) {
                    g.push(v);
                }
            }
            Err(e) => {
                for g in grids.iter_mut() {
                    g.push(f64::NAN);
                }
                failures.push(CellFailure {
                    cell,
                    message: e.to_string(),
                });
            }
        }
    }
    SweepResult {
        axes,
        observables,
        grids,
        failures,
        metadata: vec![("code_version".into(), env!("CARGO_PKG_VERSION").into())],
    }
}
