//! Weak-field generation of a metric perturbation by an electromagnetic source
//! on Minkowski space.
//!
//! A conormal current `𝒥̄` on a small patch `Y` drives the linearized potential
//! `φ̇` through `(∂ₜ² − Δ)φ̇_β = h_{βα}𝒥^α`, with `𝒥⁰` completed from the
//! continuity equation. The quadratic stress `Ĥ₂(F)` of `F = dφ̇` then drives
//! `g₁ = −Q_h(Ĥ₂ + (𝒥^α φ̇_α) h)`. Both solves use second-order centred
//! differences and leapfrog stepping from zero past data, with homogeneous
//! Dirichlet values on the outer faces.

mod diag;
mod grid;
mod ops;
mod sim;
mod source;

pub use diag::{
    causality_leak, l1_distance, lightcone_energy_diag, manufactured_convergence, measurement_mask,
    measurement_padding, EnergyMeasure, TubeReport,
};
pub use grid::{GridField, GridSpec, MAX_CFL};
pub use ops::{
    complete_current, divergence, em_stress, field_strength, gauge_residual, laplacian,
    metric_correction, wave_solve, CurrentIntegrator, MetricSolver, MetricStepStats, WaveSolver,
    STRESS_INDEX,
};
pub use sim::{
    pgm_slice, run_simulation, Diagnostics, SimulationConfig, SimulationOutput, StepRecord,
    COARSE_POINTS,
};
pub use source::{bump, ConormalSource, ConormalSourceSpec, TemporalWindow, WindowKind};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WeakfieldError {
    #[error("time step violates the stability bound: cfl = {cfl} > {max}")]
    Cfl { cfl: f64, max: f64 },
    #[error("grid needs at least 5 points per axis, got {0}")]
    GridTooSmall(usize),
    #[error("source geometry leaves the grid: {0}")]
    OutOfGrid(String),
    #[error("invalid source specification: {0}")]
    BadSource(String),
    #[error("non-finite value in {field} at step {step}")]
    NonFinite { field: &'static str, step: usize },
}
