use serde::Serialize;

use crate::error::{Error, Result};

/// Uniform grid on `[0, t_max]` with `samples` points, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimeGrid {
    t_max: f64,
    samples: usize,
}

impl TimeGrid {
    pub fn new(t_max: f64, samples: usize) -> Result<Self> {
        if samples < 2 {
            return Err(Error::InvalidGrid(format!(
                "need at least 2 samples, got {samples}"
            )));
        }
        if !(t_max.is_finite() && t_max > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "t_max must be positive, got {t_max}"
            )));
        }
        Ok(TimeGrid { t_max, samples })
    }

    /// Accepts an explicit list of times if it is a uniform, strictly
    /// increasing grid starting at zero.
    pub fn from_times(times: &[f64]) -> Result<Self> {
        if times.len() < 2 {
            return Err(Error::InvalidGrid(format!(
                "need at least 2 samples, got {}",
                times.len()
            )));
        }
        if times[0] != 0.0 {
            return Err(Error::InvalidGrid(format!(
                "grid must start at 0, starts at {}",
                times[0]
            )));
        }
        let step = times[1] - times[0];
        if !(step > 0.0) {
            return Err(Error::InvalidGrid("times are not increasing".into()));
        }
        for (k, pair) in times.windows(2).enumerate() {
            let d = pair[1] - pair[0];
            if !(d > 0.0) {
                return Err(Error::InvalidGrid("times are not increasing".into()));
            }
            if (d - step).abs() > 1e-9 * step.max(1.0) {
                return Err(Error::InvalidGrid(format!(
                    "non-uniform spacing at index {}",
                    k + 1
                )));
            }
        }
        let grid = TimeGrid::new(*times.last().unwrap(), times.len())?;
        Ok(grid)
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    pub fn step(&self) -> f64 {
        self.t_max / (self.samples - 1) as f64
    }

    /// `k·t_max/(samples−1)`; the last point is exactly `t_max`.
    pub fn time(&self, k: usize) -> f64 {
        if k + 1 == self.samples {
            self.t_max
        } else {
            k as f64 * self.step()
        }
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.samples).map(move |k| self.time(k))
    }
}
