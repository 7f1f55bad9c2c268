use crate::error::{Error, Result};

/// Logarithmically spaced radii `lo·10^{i/ppd}`, closed at both ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogGrid {
    pub lo: f64,
    pub hi: f64,
    pub points_per_decade: u32,
}

impl LogGrid {
    pub fn new(lo: f64, hi: f64, points_per_decade: u32) -> Result<Self> {
        if !(lo > 0.0) || !(hi > lo) || !hi.is_finite() {
            return Err(Error::InvalidInput(format!(
                "grid bounds must satisfy 0 < lo < hi (got {lo}, {hi})"
            )));
        }
        if points_per_decade == 0 {
            return Err(Error::InvalidInput("grid needs at least one point per decade".into()));
        }
        Ok(Self {
            lo,
            hi,
            points_per_decade,
        })
    }

    pub fn points(&self) -> Vec<f64> {
        let decades = (self.hi / self.lo).log10();
        let steps = (decades * self.points_per_decade as f64).round().max(1.0) as usize;
        let ppd = self.points_per_decade as f64;
        let mut out: Vec<f64> = (0..steps)
            .map(|i| self.lo * 10f64.powf(i as f64 / ppd))
            .take_while(|&r| r < self.hi)
            .collect();
        out.push(self.hi);
        out
    }
}

/// Rejects empty, non-positive, non-finite or non-increasing grids.
pub fn check_increasing(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidInput("radius grid is empty".into()));
    }
    for (i, r) in grid.iter().enumerate() {
        if !(*r > 0.0) || !r.is_finite() {
            return Err(Error::InvalidInput(format!("grid point {i} ({r}) must be positive and finite")));
        }
    }
    if let Some(i) = grid.windows(2).position(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidInput(format!(
            "radius grid must be strictly increasing (points {} and {}: {} then {})",
            i,
            i + 1,
            grid[i],
            grid[i + 1]
        )));
    }
    Ok(())
}
