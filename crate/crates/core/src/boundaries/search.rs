//! Threshold-crossing search on a logarithmic grid with bisection refinement.
//!
//! The set `S = {r : member(f(r))}` is located on the grid first; the
//! boundary (inf or sup of `S`) is then refined by bisection inside the grid
//! cell where membership flips. Returned values are the in-set endpoint of
//! the final bisection interval, so re-evaluating the scan there satisfies
//! the defining inequality.

use rayon::prelude::*;

use crate::error::Result;
use crate::grid::LogGrid;

/// Relative width at which bisection stops.
pub const BISECTION_RTOL: f64 = 1e-9;
const MAX_BISECTIONS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryStatus {
    Found(f64),
    /// The set extends to the top of the search bracket.
    Unbounded,
    /// The set is empty inside the bracket.
    NotFound,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryResult {
    pub status: BoundaryStatus,
    /// `(lo, hi)` of the search bracket; `None` for closed-form boundaries.
    pub bracket: Option<(f64, f64)>,
    /// Membership changes observed on the grid.
    pub crossings: usize,
    /// Found at the lower edge of the bracket (the true inf may be smaller).
    pub at_lower_edge: bool,
    /// The boundary formula is not meaningful for this geometry (e.g. N = 1).
    pub degenerate: bool,
}

impl BoundaryResult {
    pub fn closed_form(value: f64, degenerate: bool) -> Self {
        Self {
            status: BoundaryStatus::Found(value),
            bracket: None,
            crossings: 0,
            at_lower_edge: false,
            degenerate,
        }
    }

    pub fn value(&self) -> Option<f64> {
        match self.status {
            BoundaryStatus::Found(v) => Some(v),
            _ => None,
        }
    }
}

/// Grid used by every searched boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchGrid(pub LogGrid);

impl Default for SearchGrid {
    fn default() -> Self {
        SearchGrid(LogGrid {
            lo: 1e-3,
            hi: 1e6,
            points_per_decade: 400,
        })
    }
}

impl SearchGrid {
    pub fn bracket(&self) -> (f64, f64) {
        (self.0.lo, self.0.hi)
    }
}

fn scan_grid<F>(scan: &F, grid: &[f64]) -> Result<Vec<f64>>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    grid.par_iter().map(|&r| scan(r)).collect()
}

fn count_crossings(member: &[bool]) -> usize {
    member.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Bisects between an out-of-set radius and an in-set radius; returns the
/// in-set end once the interval is narrower than `BISECTION_RTOL`.
pub fn bisect<F, P>(scan: &F, member: &P, mut outside: f64, mut inside: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
    P: Fn(f64) -> bool,
{
    for _ in 0..MAX_BISECTIONS {
        if (outside - inside).abs() <= BISECTION_RTOL * outside.abs().max(inside.abs()) {
            break;
        }
        let mid = 0.5 * (outside + inside);
        if member(scan(mid)?) {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    Ok(inside)
}

/// `inf {r : member(f(r))}` within the grid bracket.
pub fn find_first<F, P>(scan: &F, member: P, grid: &SearchGrid) -> Result<BoundaryResult>
where
    F: Fn(f64) -> Result<f64> + Sync,
    P: Fn(f64) -> bool,
{
    let radii = grid.0.points();
    let values = scan_grid(scan, &radii)?;
    let inside: Vec<bool> = values.iter().map(|&v| member(v)).collect();
    let crossings = count_crossings(&inside);
    let mut result = BoundaryResult {
        status: BoundaryStatus::NotFound,
        bracket: Some(grid.bracket()),
        crossings,
        at_lower_edge: false,
        degenerate: false,
    };
    match inside.iter().position(|&m| m) {
        None => {}
        Some(0) => {
            result.status = BoundaryStatus::Found(radii[0]);
            result.at_lower_edge = true;
        }
        Some(i) => {
            let r = bisect(scan, &member, radii[i - 1], radii[i])?;
            result.status = BoundaryStatus::Found(r);
        }
    }
    Ok(result)
}

/// `sup {r : member(f(r))}` within the grid bracket; `Unbounded` when the
/// top of the bracket is a member.
pub fn find_last<F, P>(scan: &F, member: P, grid: &SearchGrid) -> Result<BoundaryResult>
where
    F: Fn(f64) -> Result<f64> + Sync,
    P: Fn(f64) -> bool,
{
    let radii = grid.0.points();
    let values = scan_grid(scan, &radii)?;
    let inside: Vec<bool> = values.iter().map(|&v| member(v)).collect();
    let crossings = count_crossings(&inside);
    let mut result = BoundaryResult {
        status: BoundaryStatus::NotFound,
        bracket: Some(grid.bracket()),
        crossings,
        at_lower_edge: false,
        degenerate: false,
    };
    match inside.iter().rposition(|&m| m) {
        None => {}
        Some(i) if i + 1 == radii.len() => result.status = BoundaryStatus::Unbounded,
        Some(i) => {
            let r = bisect(scan, &member, radii[i + 1], radii[i])?;
            result.status = BoundaryStatus::Found(r);
        }
    }
    Ok(result)
}

/// `inf {r : f(r) ≤ threshold}`.
pub fn find_first_below<F>(scan: &F, threshold: f64, grid: &SearchGrid) -> Result<BoundaryResult>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    find_first(scan, |v| v <= threshold, grid)
}

/// `inf {r : f(r) ≥ threshold}`.
pub fn find_first_above<F>(scan: &F, threshold: f64, grid: &SearchGrid) -> Result<BoundaryResult>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    find_first(scan, |v| v >= threshold, grid)
}

/// `sup {r : f(r) ≥ threshold}`.
pub fn find_last_above<F>(scan: &F, threshold: f64, grid: &SearchGrid) -> Result<BoundaryResult>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    find_last(scan, |v| v >= threshold, grid)
}

/// `sup {r : f(r) ≤ threshold}`.
pub fn find_last_below<F>(scan: &F, threshold: f64, grid: &SearchGrid) -> Result<BoundaryResult>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    find_last(scan, |v| v <= threshold, grid)
}
