//! Uniform time grids and state trajectories.

use crate::error::{QslError, Result};
use crate::state::StateVector;

/// A uniform time grid with `n_steps` points including both endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    t_start: f64,
    t_end: f64,
    n_steps: usize,
}

impl TimeGrid {
    pub fn new(t_start: f64, t_end: f64, n_steps: usize) -> Result<Self> {
        if !(t_start.is_finite() && t_end.is_finite()) {
            return Err(QslError::NonFinite { context: "time grid endpoints" });
        }
        if t_end <= t_start {
            return Err(QslError::InvalidParameter(format!(
                "time window must be increasing, got [{t_start}, {t_end}]"
            )));
        }
        if n_steps < 2 {
            return Err(QslError::InvalidParameter(format!(
                "a grid needs at least 2 points, got {n_steps}"
            )));
        }
        Ok(Self { t_start, t_end, n_steps })
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn dt(&self) -> f64 {
        (self.t_end - self.t_start) / (self.n_steps - 1) as f64
    }

    pub fn point(&self, k: usize) -> f64 {
        if k + 1 == self.n_steps {
            self.t_end
        } else {
            self.t_start + self.dt() * k as f64
        }
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_steps).map(|k| self.point(k))
    }

    /// A grid on the same window with roughly `1/factor` of the intervals.
    pub fn coarsened(&self, factor: usize) -> Result<Self> {
        let n = ((self.n_steps - 1) / factor.max(1)).max(1) + 1;
        Self::new(self.t_start, self.t_end, n)
    }
}

/// A time grid paired with one state per grid point.
#[derive(Debug, Clone)]
pub struct Trajectory {
    grid: TimeGrid,
    states: Vec<StateVector>,
}

impl Trajectory {
    pub fn new(grid: TimeGrid, states: Vec<StateVector>) -> Result<Self> {
        if states.len() != grid.n_steps() {
            return Err(QslError::GridMismatch);
        }
        let dim = states[0].dim();
        if states.iter().any(|s| s.dim() != dim) {
            return Err(QslError::DimensionMismatch { expected: dim, found: 0 });
        }
        Ok(Self { grid, states })
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    pub fn state(&self, k: usize) -> &StateVector {
        &self.states[k]
    }

    pub fn states(&self) -> &[StateVector] {
        &self.states
    }

    pub fn last(&self) -> &StateVector {
        self.states.last().expect("trajectory is never empty")
    }

    /// Largest deviation of any state norm from 1.
    pub fn max_norm_drift(&self) -> f64 {
        self.states
            .iter()
            .map(|s| (s.norm() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

/// Trapezoidal cumulative integral of samples on a grid; entry 0 is 0.
pub fn cumulative_trapezoid(grid: &TimeGrid, samples: &[f64]) -> Vec<f64> {
    debug_assert_eq!(samples.len(), grid.n_steps());
    let dt = grid.dt();
    let mut out = Vec::with_capacity(samples.len());
    let mut acc = 0.0;
    out.push(0.0);
    for k in 1..samples.len() {
        acc += 0.5 * dt * (samples[k - 1] + samples[k]);
        out.push(acc);
    }
    out
}

/// Plain trapezoidal integral over the whole grid.
pub fn trapezoid(grid: &TimeGrid, samples: &[f64]) -> f64 {
    debug_assert_eq!(samples.len(), grid.n_steps());
    let dt = grid.dt();
    let mut acc = 0.0;
    for k in 1..samples.len() {
        acc += 0.5 * dt * (samples[k - 1] + samples[k]);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_points_are_uniform_and_hit_endpoints() {
        let g = TimeGrid::new(-1.0, 3.0, 9).unwrap();
        let pts: Vec<f64> = g.points().collect();
        assert_eq!(pts.len(), 9);
        assert_eq!(pts[0], -1.0);
        assert_eq!(pts[8], 3.0);
        for w in pts.windows(2) {
            assert!((w[1] - w[0] - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn invalid_grids_are_rejected() {
        assert!(TimeGrid::new(0.0, 0.0, 10).is_err());
        assert!(TimeGrid::new(1.0, 0.0, 10).is_err());
        assert!(TimeGrid::new(0.0, 1.0, 1).is_err());
    }

    #[test]
    fn coarsened_grid_keeps_the_window() {
        let g = TimeGrid::new(0.0, 1.0, 101).unwrap();
        let h = g.coarsened(2).unwrap();
        assert_eq!(h.n_steps(), 51);
        assert_eq!(h.t_end(), 1.0);
    }

    #[test]
    fn trapezoid_integrates_linear_functions_exactly() {
        let g = TimeGrid::new(0.0, 2.0, 21).unwrap();
        let f: Vec<f64> = g.points().map(|t| 3.0 * t + 1.0).collect();
        let total = trapezoid(&g, &f);
        assert!((total - 8.0).abs() < 1e-12);
        let cum = cumulative_trapezoid(&g, &f);
        assert_eq!(cum[0], 0.0);
        assert!((cum[20] - total).abs() < 1e-15);
    }
}
