//! Grid construction and cell-parallel evaluation.
//!
//! Sweep cells are independent, so they can be evaluated in parallel; the
//! `parallel` feature (on by default) fans work out with rayon once a grid
//! is large enough to be worth it. Results are always assembled in index
//! order and the *lowest-indexed* failing cell determines the reported
//! error, so output is identical whichever path ran.

use crate::error::Result;

/// Grids below this many cells are evaluated sequentially even when the
/// `parallel` feature is enabled; thread fan-out costs more than it saves
/// on tiny sweeps.
pub const PARALLEL_THRESHOLD: usize = 128;

/// Evenly spaced values from `min` to `max` inclusive.
///
/// A single point collapses to `[min]`; endpoints are set exactly rather
/// than recomputed through arithmetic, so they survive round-tripping.
pub fn linspace(min: f64, max: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![min],
        _ => {
            let step = (max - min) / (points - 1) as f64;
            (0..points)
                .map(|i| {
                    if i == points - 1 {
                        max
                    } else {
                        min + i as f64 * step
                    }
                })
                .collect()
        }
    }
}

/// Logarithmically spaced values from `min` to `max` inclusive; both must
/// be strictly positive. Endpoints are exact.
pub fn logspace(min: f64, max: f64, points: usize) -> Vec<f64> {
    assert!(
        min > 0.0 && max > 0.0,
        "logspace endpoints must be positive, got [{min}, {max}]"
    );
    match points {
        0 => Vec::new(),
        1 => vec![min],
        _ => {
            let (lo, hi) = (min.log10(), max.log10());
            let step = (hi - lo) / (points - 1) as f64;
            (0..points)
                .map(|i| {
                    if i == 0 {
                        min
                    } else if i == points - 1 {
                        max
                    } else {
                        10f64.powf(lo + i as f64 * step)
                    }
                })
                .collect()
        }
    }
}

/// Evaluates `eval` for every cell index in `0..n` and collects the rows in
/// index order. The parallel path is taken for grids of at least
/// [`PARALLEL_THRESHOLD`] cells when the `parallel` feature is enabled.
///
/// Error handling is deterministic: if several cells fail, the error from
/// the lowest index is returned regardless of scheduling.
pub fn map_cells<F>(n: usize, eval: F) -> Result<Vec<Vec<f64>>>
where
    F: Fn(usize) -> Result<Vec<f64>> + Sync,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        if n >= PARALLEL_THRESHOLD {
            let cells: Vec<Result<Vec<f64>>> = (0..n).into_par_iter().map(&eval).collect();
            let mut rows = Vec::with_capacity(n);
            for cell in cells {
                rows.push(cell?);
            }
            return Ok(rows);
        }
    }
    (0..n).map(eval).collect()
}
