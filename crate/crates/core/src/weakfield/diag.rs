use std::collections::VecDeque;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::grid::{plane_reduce, GridField, GridSpec};
use super::ops::{laplacian, WaveSolver};
use super::source::ConormalSourceSpec;
use super::WeakfieldError;

/// Share of second-difference energy near the light-cone front of `Y`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TubeReport {
    /// Time since the centre of the source window.
    pub elapsed: f64,
    pub half_width: f64,
    /// Cells this close to the outer faces are excluded.
    pub padding: f64,
    pub measured_cells: usize,
    pub tube_energy: f64,
    pub total_energy: f64,
    pub ratio: f64,
}

/// Pointwise energy density used by [`lightcone_energy_diag`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnergyMeasure {
    /// `|∇ₕ g|²` from centred differences.
    Gradient,
    /// `|Δₕ g|²`.
    Laplacian,
}

/// Energy inside `{ |dist(x, Y) − (t − t꜀)| ≤ max(2w, 4h) }` divided by the
/// energy over the measurement region, at time `t`. A field without energy
/// reports ratio 1.
///
/// Symmetric ten-component fields count off-diagonal entries twice.
pub fn lightcone_energy_diag(
    field: &GridField,
    spec: &ConormalSourceSpec,
    t: f64,
    measure: EnergyMeasure,
) -> TubeReport {
    let g = field.grid;
    let h = g.h();
    let half_width = (2.0 * spec.width).max(4.0 * h);
    let elapsed = t - spec.window.center;
    let padding = measurement_padding(spec, &g, t);
    let n = g.points;
    let inv_2h = 0.5 / h;
    let dens = match measure {
        EnergyMeasure::Laplacian => laplacian(field)
            .comps
            .into_iter()
            .map(|c| c.into_iter().map(|v| v * v).collect())
            .collect(),
        EnergyMeasure::Gradient => field
            .comps
            .iter()
            .map(|c| {
                (0..g.len())
                    .into_par_iter()
                    .map(|i| {
                        let (x, y, z) = g.coords(i);
                        if !g.is_interior(x, y, z) {
                            return 0.0;
                        }
                        [1, n, n * n]
                            .iter()
                            .map(|&s| ((c[i + s] - c[i - s]) * inv_2h).powi(2))
                            .sum()
                    })
                    .collect()
            })
            .collect::<Vec<Vec<f64>>>(),
    };
    let weights: Vec<f64> = if field.ncomp() == 10 {
        super::ops::STRESS_INDEX
            .iter()
            .map(|(a, b)| if a == b { 1.0 } else { 2.0 })
            .collect()
    } else {
        vec![1.0; field.ncomp()]
    };
    let per_plane: Vec<(f64, f64, usize)> = (0..g.points)
        .into_par_iter()
        .map(|z| {
            let mut acc = (0.0, 0.0, 0usize);
            for y in 0..g.points {
                for x in 0..g.points {
                    let p = g.position(x, y, z);
                    if p.iter().any(|&c| c < padding || c > g.length - padding) {
                        continue;
                    }
                    let i = g.index(x, y, z);
                    let e: f64 = dens.iter().zip(&weights).map(|(c, w)| w * c[i]).sum();
                    acc.1 += e;
                    acc.2 += 1;
                    if (spec.distance_to_patch(p) - elapsed).abs() <= half_width {
                        acc.0 += e;
                    }
                }
            }
            acc
        })
        .collect();
    let (tube, total, cells) = per_plane
        .into_iter()
        .fold((0.0, 0.0, 0), |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2));
    TubeReport {
        elapsed,
        half_width,
        padding,
        measured_cells: cells,
        tube_energy: tube,
        total_energy: total,
        ratio: if total > 0.0 { tube / total } else { 1.0 },
    }
}

/// Depth from the outer faces excluded from measurements at time `t`: as far
/// as waves reflected before `t` can travel back, plus one cell.
pub fn measurement_padding(spec: &ConormalSourceSpec, g: &GridSpec, t: f64) -> f64 {
    reflection_padding(spec, g, t) + g.h()
}

fn reflection_padding(spec: &ConormalSourceSpec, g: &GridSpec, t: f64) -> f64 {
    let n = spec.normal();
    let mut nearest = f64::INFINITY;
    for k in 0..3 {
        let reach = (spec.extents[0] + spec.width) * spec.span[0][k].abs()
            + (spec.extents[1] + spec.width) * spec.span[1][k].abs()
            + spec.width * n[k].abs();
        nearest = nearest
            .min(spec.base[k] - reach)
            .min(g.length - spec.base[k] - reach);
    }
    (t - spec.window.start() - nearest).max(0.0)
}

/// Cells farther than `padding` from every outer face.
pub fn measurement_mask(g: &GridSpec, padding: f64) -> Vec<bool> {
    (0..g.len())
        .into_par_iter()
        .map(|i| {
            let (x, y, z) = g.coords(i);
            g.position(x, y, z)
                .iter()
                .all(|&c| c >= padding && c <= g.length - padding)
        })
        .collect()
}

/// Face-neighbour (L1) grid distance to the nearest cell of `support`.
pub fn l1_distance(grid: &GridSpec, support: &[bool]) -> Vec<u32> {
    let n = grid.points;
    let mut dist = vec![u32::MAX; grid.len()];
    let mut queue = VecDeque::new();
    for (i, &s) in support.iter().enumerate() {
        if s {
            dist[i] = 0;
            queue.push_back(i);
        }
    }
    while let Some(i) = queue.pop_front() {
        let (x, y, z) = grid.coords(i);
        let d = dist[i] + 1;
        let mut visit = |j: usize| {
            if dist[j] == u32::MAX {
                dist[j] = d;
                queue.push_back(j);
            }
        };
        if x > 0 {
            visit(i - 1);
        }
        if x + 1 < n {
            visit(i + 1);
        }
        if y > 0 {
            visit(i - n);
        }
        if y + 1 < n {
            visit(i + n);
        }
        if z > 0 {
            visit(i - n * n);
        }
        if z + 1 < n {
            visit(i + n * n);
        }
    }
    dist
}

/// `max |field|` beyond grid distance `radius` divided by `max |field|`.
pub fn causality_leak(field: &GridField, dist: &[u32], radius: u32) -> f64 {
    let total = field.max_abs();
    if total == 0.0 {
        return 0.0;
    }
    let outside = field
        .comps
        .iter()
        .map(|c| {
            c.par_iter()
                .zip(dist.par_iter())
                .filter(|(_, d)| **d > radius)
                .map(|(v, _)| v.abs())
                .reduce(|| 0.0, f64::max)
        })
        .fold(0.0, f64::max);
    outside / total
}

/// Errors of the solver against `u = sin πx sin πy sin πz (1 − cos t)` on the
/// unit cube at `t = 1/2`, with the observed order between consecutive levels.
///
/// `levels` are cells per axis; each must divide 1/(cfl·h) evenly for the
/// final time to be hit exactly, which holds for multiples of 4 at cfl 0.4.
pub fn manufactured_convergence(
    levels: &[usize],
) -> Result<(Vec<(usize, f64)>, Vec<f64>), WeakfieldError> {
    use std::f64::consts::PI;
    let t_end = 0.5;
    let cfl = 0.4;
    let mut errs = Vec::new();
    for &cells in levels {
        let h = 1.0 / cells as f64;
        let steps = (t_end / (cfl * h)).round() as usize;
        let grid = GridSpec::new(cells + 1, 1.0, cfl, steps)?;
        let shape = GridField::from_fn(grid, 1, |_, p| {
            (PI * p[0]).sin() * (PI * p[1]).sin() * (PI * p[2]).sin()
        });
        let mut w = WaveSolver::new(grid, 1);
        for n in 0..steps {
            let t = n as f64 * grid.dt();
            let amp = t.cos() + 3.0 * PI * PI * (1.0 - t.cos());
            let s = &shape.comps[0];
            w.step_with(|cell, out| {
                out[0] = amp * s[cell];
                0.0
            })?;
        }
        let exact = 1.0 - (steps as f64 * grid.dt()).cos();
        let u = &w.raw()[..];
        let sq = plane_reduce(
            &grid,
            &u.iter()
                .zip(&shape.comps[0])
                .map(|(a, s)| a - exact * s)
                .collect::<Vec<_>>(),
            |v| v * v,
            |a, b| a + b,
        );
        errs.push((cells, (sq * h * h * h).sqrt()));
    }
    let orders = errs
        .windows(2)
        .map(|w| (w[0].1 / w[1].1).ln() / (w[1].0 as f64 / w[0].0 as f64).ln())
        .collect();
    Ok((errs, orders))
}
