use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::diag::{
    causality_leak, l1_distance, lightcone_energy_diag, measurement_mask, measurement_padding,
    EnergyMeasure, TubeReport,
};
use super::grid::{GridField, GridSpec};
use super::ops::{deinterleave, divergence, gauge_residual, interleave, MetricSolver, WaveSolver};
use super::source::{ConormalSource, ConormalSourceSpec};
use super::WeakfieldError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub grid: GridSpec,
    pub source: ConormalSourceSpec,
    /// Second amplitude for the quadratic-response check.
    #[serde(default)]
    pub response_lambda: Option<f64>,
    /// Step at which leakage outside the numerical domain of influence is
    /// measured.
    #[serde(default)]
    pub leak_check_step: Option<usize>,
    #[serde(default = "default_measure")]
    pub energy_measure: EnergyMeasure,
}

fn default_measure() -> EnergyMeasure {
    EnergyMeasure::Gradient
}

/// Points per axis of the coarsest refinement level.
pub const COARSE_POINTS: usize = 48;

impl SimulationConfig {
    /// Unit cube with `points` per axis, run to `t = 0.405`. The source is a
    /// square patch of half-extent `1/16` with profile half-width of three
    /// cells of the coarse mesh, held fixed in physical units across meshes.
    pub fn standard(points: usize, cfl: f64) -> Result<Self, WeakfieldError> {
        let probe = GridSpec::new(points, 1.0, cfl, 0)?;
        let final_time = 0.405;
        let steps = (final_time / probe.dt()).round() as usize;
        let grid = GridSpec::new(points, 1.0, cfl, steps)?;
        let coarse_h = grid.length / (COARSE_POINTS - 1) as f64;
        let mut source = ConormalSourceSpec::centered(&grid, grid.length / 16.0, 3.0);
        source.width = 3.0 * coarse_h;
        source.window.center = source.width;
        source.window.half_width = source.width;
        Ok(SimulationConfig {
            grid,
            source,
            response_lambda: Some(2.0),
            leak_check_step: Some(points / 4),
            energy_measure: EnergyMeasure::Gradient,
        })
    }
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self::standard(96, 0.2).expect("default grid is valid")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StepRecord {
    pub step: usize,
    pub t: f64,
    pub phi_max: f64,
    pub g1_max: f64,
    pub h2_00_violation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    pub final_time: f64,
    /// Largest `max(Ĥ₂,₀₀, 0) / Σ F²` over all points and steps.
    pub h2_00_max_violation: f64,
    /// Most negative `Ĥ₂,₀₀` at the last level.
    pub h2_00_min: f64,
    pub phi_max: f64,
    pub g1_max: f64,
    pub g1_l2: f64,
    /// `max |g₁|` at points farther than the source width from `Y` and its cone.
    pub g1_max_off_source: f64,
    pub response_lambda: Option<f64>,
    /// `‖g₁(λ)‖ / ‖g₁(1)‖`.
    pub response_ratio: Option<f64>,
    pub leak_check_step: Option<usize>,
    pub causality_leak: Option<f64>,
    /// Lorenz-gauge residual over the measurement region.
    pub gauge_residual_max: f64,
    /// Residual divided by `max |∂φ̇|`.
    pub gauge_residual_relative: f64,
    pub tube: TubeReport,
}

#[derive(Debug, Clone)]
pub struct SimulationOutput {
    pub config: SimulationConfig,
    pub phi: GridField,
    pub g1: GridField,
    /// `Ĥ₂,₀₀` at the level before the last.
    pub h2_00: Vec<f64>,
    pub timeline: Vec<StepRecord>,
    pub diagnostics: Diagnostics,
}

struct Run {
    phi: WaveSolver,
    g1: MetricSolver,
    timeline: Vec<StepRecord>,
    violation: f64,
    leak: Option<f64>,
}

fn integrate(
    grid: &GridSpec,
    source: &ConormalSource,
    leak_step: Option<usize>,
) -> Result<Run, WeakfieldError> {
    let dt = grid.dt();
    let spatial = interleave(&source.spatial);
    let div = divergence(&source.spatial);
    let mut phi = WaveSolver::new(*grid, 4);
    let mut g1 = MetricSolver::new(*grid);
    let mut timeline = Vec::with_capacity(grid.steps);
    let mut violation = 0.0f64;
    let mut leak = None;
    let mut charge = 0.0;
    let mut last_w = source.window(0.0);
    for n in 0..grid.steps {
        let t = n as f64 * dt;
        let w = source.window(t);
        if n > 0 {
            charge += 0.5 * dt * (last_w + w);
        }
        last_w = w;
        // 𝒥^α = (−div S · ∫W, S W); the potential source is h_{βα}𝒥^α.
        let current = |cell: usize| -> [f64; 4] {
            [
                -div[cell] * charge,
                spatial[3 * cell] * w,
                spatial[3 * cell + 1] * w,
                spatial[3 * cell + 2] * w,
            ]
        };
        phi.step_with(|cell, out| {
            let j = current(cell);
            out[0] = -j[0];
            out[1..4].copy_from_slice(&j[1..4]);
            0.0
        })?;
        let stats = g1.step_raw(phi.raw_prev(), phi.raw_dt(), current)?;
        violation = violation.max(stats.h2_00_violation);
        let phi_max = phi
            .raw()
            .par_iter()
            .map(|v| v.abs())
            .reduce(|| 0.0, f64::max);
        timeline.push(StepRecord {
            step: n + 1,
            t: t + dt,
            phi_max,
            g1_max: stats.g1_max,
            h2_00_violation: stats.h2_00_violation,
        });
        if leak_step == Some(n + 1) {
            let support: Vec<bool> = (0..grid.len())
                .map(|i| div[i] != 0.0 || (0..3).any(|c| spatial[3 * i + c] != 0.0))
                .collect();
            let dist = l1_distance(grid, &support);
            let radius = (n + 1) as u32 + 3;
            let a = causality_leak(&phi.state(), &dist, radius);
            let b = causality_leak(&g1.state(), &dist, radius);
            leak = Some(a.max(b));
        }
    }
    Ok(Run {
        phi,
        g1,
        timeline,
        violation,
        leak,
    })
}

pub fn run_simulation(config: &SimulationConfig) -> Result<SimulationOutput, WeakfieldError> {
    let grid = config.grid;
    grid.validate()?;
    let source = ConormalSource::build(&config.source, &grid)?;
    let run = integrate(
        &grid,
        &source,
        config.leak_check_step.filter(|&s| s <= grid.steps),
    )?;
    let response_ratio = match config.response_lambda {
        Some(l) => {
            let scaled = integrate(&grid, &source.scaled(l), None)?;
            Some(scaled.g1.state().l2_norm() / run.g1.state().l2_norm())
        }
        None => None,
    };
    let g1 = run.g1.state();
    let phi = run.phi.state();
    let phi_prev = deinterleave(run.phi.raw_prev(), grid, 4);
    let dphi = run.phi.time_derivative();
    let residual = gauge_residual(&phi_prev, &dphi);
    let fstrength = super::ops::field_strength(&phi_prev, &dphi);
    let scale = fstrength.max_abs().max(dphi.max_abs());
    let h2_00 = super::ops::em_stress(&fstrength).comps.swap_remove(0);
    let t = grid.final_time();
    let tube = lightcone_energy_diag(&g1, &config.source, t, config.energy_measure);
    let norm = g1.pointwise_norm();
    let elapsed = t - config.source.window.center;
    let g1_max_off_source = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let (x, y, z) = grid.coords(i);
            let d = config.source.distance_to_patch(grid.position(x, y, z));
            if d > 2.0 * config.source.width && (d - elapsed).abs() > 2.0 * config.source.width {
                norm[i]
            } else {
                0.0
            }
        })
        .reduce(|| 0.0, f64::max);
    let mask = measurement_mask(&grid, measurement_padding(&config.source, &grid, t));
    let gauge_residual_max = residual.comps[0]
        .par_iter()
        .zip(mask.par_iter())
        .map(|(r, &m)| if m { r.abs() } else { 0.0 })
        .reduce(|| 0.0, f64::max);
    let diagnostics = Diagnostics {
        final_time: t,
        h2_00_max_violation: run.violation,
        h2_00_min: h2_00.iter().copied().fold(0.0, f64::min),
        phi_max: phi.max_abs(),
        g1_max: g1.max_abs(),
        g1_l2: g1.l2_norm(),
        g1_max_off_source,
        response_lambda: config.response_lambda,
        response_ratio,
        leak_check_step: config.leak_check_step,
        causality_leak: run.leak,
        gauge_residual_max,
        gauge_residual_relative: if scale > 0.0 {
            gauge_residual_max / scale
        } else {
            0.0
        },
        tube,
    };
    Ok(SimulationOutput {
        config: config.clone(),
        phi,
        g1,
        h2_00,
        timeline: run.timeline,
        diagnostics,
    })
}

impl SimulationOutput {
    /// Mid-plane (`z = points/2`) samples of `|g₁|` and `Ĥ₂,₀₀` as CSV.
    pub fn slice_csv(&self) -> String {
        let g = self.g1.grid;
        let z = g.points / 2;
        let norm = self.g1.pointwise_norm();
        let mut out = String::from("x,y,g1_norm,h2_00\n");
        for y in 0..g.points {
            for x in 0..g.points {
                let i = g.index(x, y, z);
                let p = g.position(x, y, z);
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    crate::scalar::format_f64(p[0]),
                    crate::scalar::format_f64(p[1]),
                    crate::scalar::format_f64(norm[i]),
                    crate::scalar::format_f64(self.h2_00[i])
                ));
            }
        }
        out
    }

    pub fn timeline_csv(&self) -> String {
        let f = crate::scalar::format_f64;
        let mut out = String::from("step,t,phi_max,g1_max,h2_00_violation\n");
        for r in &self.timeline {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                r.step,
                f(r.t),
                f(r.phi_max),
                f(r.g1_max),
                f(r.h2_00_violation)
            ));
        }
        out
    }

    /// 8-bit PGM of the mid-plane of `|g₁|`, scaled to its maximum.
    pub fn g1_pgm(&self) -> Vec<u8> {
        pgm_slice(&self.g1.pointwise_norm(), &self.g1.grid)
    }

    /// 8-bit PGM of the mid-plane of `−Ĥ₂,₀₀`, scaled to its maximum.
    pub fn h2_00_pgm(&self) -> Vec<u8> {
        let neg: Vec<f64> = self.h2_00.iter().map(|v| -v).collect();
        pgm_slice(&neg, &self.g1.grid)
    }
}

pub fn pgm_slice(values: &[f64], g: &GridSpec) -> Vec<u8> {
    let z = g.points / 2;
    let plane = &values[g.index(0, 0, z)..g.index(0, 0, z + 1)];
    let max = plane.iter().copied().fold(0.0f64, f64::max);
    let mut out = format!("P5\n{} {}\n255\n", g.points, g.points).into_bytes();
    out.extend(plane.iter().map(|v| {
        if max > 0.0 {
            (v.max(0.0) / max * 255.0).round() as u8
        } else {
            0
        }
    }));
    out
}
