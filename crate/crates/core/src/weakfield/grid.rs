use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::WeakfieldError;

/// Leapfrog with the 7-point Laplacian is stable for `dt ≤ h/√3`.
pub const MAX_CFL: f64 = 0.577_350_269_189_625_7;

/// Uniform cube `[0, length]³` with `points` samples per axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub points: usize,
    pub length: f64,
    pub cfl: f64,
    pub steps: usize,
}

impl GridSpec {
    pub fn new(points: usize, length: f64, cfl: f64, steps: usize) -> Result<Self, WeakfieldError> {
        let g = GridSpec {
            points,
            length,
            cfl,
            steps,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<(), WeakfieldError> {
        if self.points < 5 {
            return Err(WeakfieldError::GridTooSmall(self.points));
        }
        if !(self.cfl > 0.0 && self.cfl <= MAX_CFL) {
            return Err(WeakfieldError::Cfl {
                cfl: self.cfl,
                max: MAX_CFL,
            });
        }
        Ok(())
    }

    pub fn h(&self) -> f64 {
        self.length / (self.points - 1) as f64
    }

    pub fn dt(&self) -> f64 {
        self.cfl * self.h()
    }

    pub fn final_time(&self) -> f64 {
        self.steps as f64 * self.dt()
    }

    pub fn len(&self) -> usize {
        self.points * self.points * self.points
    }

    pub fn is_empty(&self) -> bool {
        self.points == 0
    }

    #[inline]
    pub fn index(&self, x: usize, y: usize, z: usize) -> usize {
        (z * self.points + y) * self.points + x
    }

    #[inline]
    pub fn coords(&self, idx: usize) -> (usize, usize, usize) {
        let n = self.points;
        (idx % n, (idx / n) % n, idx / (n * n))
    }

    pub fn position(&self, x: usize, y: usize, z: usize) -> [f64; 3] {
        let h = self.h();
        [x as f64 * h, y as f64 * h, z as f64 * h]
    }

    #[inline]
    pub fn is_interior(&self, x: usize, y: usize, z: usize) -> bool {
        let n = self.points;
        x > 0 && y > 0 && z > 0 && x + 1 < n && y + 1 < n && z + 1 < n
    }
}

/// Multi-component field on one time slice; component `c` is stored
/// contiguously with `x` fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    pub grid: GridSpec,
    pub comps: Vec<Vec<f64>>,
}

impl GridField {
    pub fn zeros(grid: GridSpec, ncomp: usize) -> Self {
        GridField {
            grid,
            comps: vec![vec![0.0; grid.len()]; ncomp],
        }
    }

    pub fn from_fn(
        grid: GridSpec,
        ncomp: usize,
        f: impl Fn(usize, [f64; 3]) -> f64 + Sync,
    ) -> Self {
        let comps = (0..ncomp)
            .map(|c| {
                (0..grid.len())
                    .into_par_iter()
                    .map(|idx| {
                        let (x, y, z) = grid.coords(idx);
                        f(c, grid.position(x, y, z))
                    })
                    .collect()
            })
            .collect();
        GridField { grid, comps }
    }

    pub fn ncomp(&self) -> usize {
        self.comps.len()
    }

    pub fn scale(&mut self, s: f64) {
        for c in &mut self.comps {
            c.par_iter_mut().for_each(|v| *v *= s);
        }
    }

    /// Pointwise Euclidean norm over components.
    pub fn pointwise_norm(&self) -> Vec<f64> {
        (0..self.grid.len())
            .into_par_iter()
            .map(|i| self.comps.iter().map(|c| c[i] * c[i]).sum::<f64>().sqrt())
            .collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.comps
            .iter()
            .map(|c| plane_reduce(&self.grid, c, |v| v.abs(), f64::max))
            .fold(0.0, f64::max)
    }

    /// `sqrt(Σ v² h³)` over all components.
    pub fn l2_norm(&self) -> f64 {
        let h3 = self.grid.h().powi(3);
        let s: f64 = self
            .comps
            .iter()
            .map(|c| plane_reduce(&self.grid, c, |v| v * v, |a, b| a + b))
            .sum();
        (s * h3).sqrt()
    }

    pub fn all_finite(&self) -> bool {
        self.comps
            .iter()
            .all(|c| c.par_iter().all(|v| v.is_finite()))
    }
}

/// Reduction that is identical for every thread count: planes in parallel,
/// plane results combined in order.
pub(crate) fn plane_reduce(
    grid: &GridSpec,
    data: &[f64],
    map: impl Fn(f64) -> f64 + Sync,
    combine: impl Fn(f64, f64) -> f64 + Sync + Copy,
) -> f64 {
    let plane = grid.points * grid.points;
    let partial: Vec<f64> = data
        .par_chunks(plane)
        .map(|chunk| chunk.iter().fold(0.0, |acc, &v| combine(acc, map(v))))
        .collect();
    partial.into_iter().fold(0.0, combine)
}
