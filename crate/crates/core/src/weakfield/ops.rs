use rayon::prelude::*;

use super::grid::{GridField, GridSpec};
use super::WeakfieldError;

/// Storage order of the ten independent components of a symmetric 4×4 field.
pub const STRESS_INDEX: [(usize, usize); 10] = [
    (0, 0),
    (0, 1),
    (0, 2),
    (0, 3),
    (1, 1),
    (1, 2),
    (1, 3),
    (2, 2),
    (2, 3),
    (3, 3),
];

const F_INDEX: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
const H: [f64; 4] = [-1.0, 1.0, 1.0, 1.0];

pub(crate) fn interleave(f: &GridField) -> Vec<f64> {
    let k = f.ncomp();
    let mut out = vec![0.0; k * f.grid.len()];
    out.par_chunks_mut(k).enumerate().for_each(|(i, cell)| {
        for (c, v) in cell.iter_mut().enumerate() {
            *v = f.comps[c][i];
        }
    });
    out
}

pub(crate) fn deinterleave(data: &[f64], grid: GridSpec, k: usize) -> GridField {
    let comps = (0..k)
        .map(|c| data.par_iter().skip(c).step_by(k).copied().collect())
        .collect();
    GridField { grid, comps }
}

/// One leapfrog step for `k` interleaved components, written into `prev`.
///
/// `src(cell, out)` fills the source at the current level and returns a
/// diagnostic value that is reduced with `max`. With `first`, `prev` is
/// ignored and the Taylor start from zero velocity is used. Returns
/// `(max diagnostic, max |new value|)`.
#[allow(clippy::too_many_arguments)]
pub(crate) fn leapfrog<S>(
    grid: &GridSpec,
    k: usize,
    prev: &mut [f64],
    cur: &[f64],
    dtout: Option<&mut [f64]>,
    first: bool,
    src: S,
) -> (f64, f64)
where
    S: Fn(usize, &mut [f64]) -> f64 + Sync,
{
    let n = grid.points;
    let h = grid.h();
    let dt = grid.dt();
    let dt2 = dt * dt;
    let inv_h2 = 1.0 / (h * h);
    let inv_2dt = 0.5 / dt;
    let (sx, sy, sz) = (k, k * n, k * n * n);
    let plane = n * n * k;
    let body = |z: usize, p: &mut [f64], mut d: Option<&mut [f64]>| -> (f64, f64) {
        if z == 0 || z + 1 == n {
            return (f64::NEG_INFINITY, 0.0);
        }
        let mut s = [0.0f64; 16];
        let mut diag = f64::NEG_INFINITY;
        let mut amax = 0.0f64;
        for y in 1..n - 1 {
            for x in 1..n - 1 {
                let cell = grid.index(x, y, z);
                diag = diag.max(src(cell, &mut s[..k]));
                let local = (y * n + x) * k;
                for (c, sc) in s[..k].iter().enumerate() {
                    let i = cell * k + c;
                    let u = cur[i];
                    let lap = (cur[i + sx]
                        + cur[i - sx]
                        + cur[i + sy]
                        + cur[i - sy]
                        + cur[i + sz]
                        + cur[i - sz]
                        - 6.0 * u)
                        * inv_h2;
                    let next = if first {
                        u + 0.5 * dt2 * (lap + sc)
                    } else {
                        2.0 * u - p[local + c] + dt2 * (lap + sc)
                    };
                    if let Some(d) = d.as_deref_mut() {
                        let old = if first { next } else { p[local + c] };
                        d[local + c] = (next - old) * inv_2dt;
                    }
                    p[local + c] = next;
                    amax = amax.max(next.abs());
                }
            }
        }
        (diag, amax)
    };
    let partial: Vec<(f64, f64)> = match dtout {
        Some(d) => prev
            .par_chunks_mut(plane)
            .zip(d.par_chunks_mut(plane))
            .enumerate()
            .map(|(z, (p, d))| body(z, p, Some(d)))
            .collect(),
        None => prev
            .par_chunks_mut(plane)
            .enumerate()
            .map(|(z, p)| body(z, p, None))
            .collect(),
    };
    partial.into_iter().fold((f64::NEG_INFINITY, 0.0), |a, b| {
        (
            a.0.max(b.0),
            if b.1.is_nan() || a.1.is_nan() {
                f64::NAN
            } else {
                a.1.max(b.1)
            },
        )
    })
}

/// 7-point Laplacian; zero on the boundary faces.
pub fn laplacian(u: &GridField) -> GridField {
    let g = u.grid;
    let n = g.points;
    let inv_h2 = 1.0 / (g.h() * g.h());
    let comps = u
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
                    (c[i + 1] + c[i - 1] + c[i + n] + c[i - n] + c[i + n * n] + c[i - n * n]
                        - 6.0 * c[i])
                        * inv_h2
                })
                .collect()
        })
        .collect();
    GridField { grid: g, comps }
}

/// Centred-difference divergence of a three-component field.
pub fn divergence(j: &GridField) -> Vec<f64> {
    let g = j.grid;
    let n = g.points;
    let inv_2h = 0.5 / g.h();
    let strides = [1, n, n * n];
    (0..g.len())
        .into_par_iter()
        .map(|i| {
            let (x, y, z) = g.coords(i);
            if !g.is_interior(x, y, z) {
                return 0.0;
            }
            (0..3)
                .map(|a| (j.comps[a][i + strides[a]] - j.comps[a][i - strides[a]]) * inv_2h)
                .sum()
        })
        .collect()
}

/// Streaming `𝒥⁰(tₙ) = −∫₀^{tₙ} div 𝒥̄ ds` by the trapezoid rule.
#[derive(Debug, Clone)]
pub struct CurrentIntegrator {
    dt: f64,
    last_div: Option<Vec<f64>>,
    j0: Vec<f64>,
}

impl CurrentIntegrator {
    pub fn new(grid: &GridSpec) -> Self {
        CurrentIntegrator {
            dt: grid.dt(),
            last_div: None,
            j0: vec![0.0; grid.len()],
        }
    }

    /// Feed `𝒥̄` at the next level (starting with `t = 0`); returns `𝒥⁰` there.
    pub fn push(&mut self, jbar: &GridField) -> &[f64] {
        let div = divergence(jbar);
        if let Some(last) = &self.last_div {
            let half = 0.5 * self.dt;
            self.j0
                .par_iter_mut()
                .zip(last.par_iter().zip(div.par_iter()))
                .for_each(|(q, (a, b))| *q -= half * (a + b));
        }
        self.last_div = Some(div);
        &self.j0
    }
}

/// `𝒥⁰` for each slice of `𝒥̄` sampled at `tₙ = n dt`.
pub fn complete_current(jbar: &[GridField], grid: &GridSpec) -> Vec<GridField> {
    let mut acc = CurrentIntegrator::new(grid);
    jbar.iter()
        .map(|s| GridField {
            grid: *grid,
            comps: vec![acc.push(s).to_vec()],
        })
        .collect()
}

/// Leapfrog solver for `(∂ₜ² − Δ)u = s` with zero past data.
#[derive(Debug, Clone)]
pub struct WaveSolver {
    pub grid: GridSpec,
    k: usize,
    cur: Vec<f64>,
    prev: Vec<f64>,
    dt_cur: Vec<f64>,
    step: usize,
}

impl WaveSolver {
    pub fn new(grid: GridSpec, k: usize) -> Self {
        assert!(k <= 16);
        let len = grid.len() * k;
        WaveSolver {
            grid,
            k,
            cur: vec![0.0; len],
            prev: vec![0.0; len],
            dt_cur: vec![0.0; len],
            step: 0,
        }
    }

    pub fn steps_taken(&self) -> usize {
        self.step
    }

    pub fn time(&self) -> f64 {
        self.step as f64 * self.grid.dt()
    }

    pub(crate) fn raw(&self) -> &[f64] {
        &self.cur
    }

    /// The level before [`raw`](Self::raw).
    pub(crate) fn raw_prev(&self) -> &[f64] {
        &self.prev
    }

    pub(crate) fn raw_dt(&self) -> &[f64] {
        &self.dt_cur
    }

    /// Advance one step with `src(cell, out)` sampled at the current level.
    /// Afterwards [`time_derivative`](Self::time_derivative) holds the centred
    /// derivative at the level that was just left.
    pub(crate) fn step_with<S>(&mut self, src: S) -> Result<f64, WeakfieldError>
    where
        S: Fn(usize, &mut [f64]) -> f64 + Sync,
    {
        let first = self.step == 0;
        let (diag, amax) = leapfrog(
            &self.grid,
            self.k,
            &mut self.prev,
            &self.cur,
            Some(&mut self.dt_cur),
            first,
            src,
        );
        if !amax.is_finite() {
            return Err(WeakfieldError::NonFinite {
                field: "wave",
                step: self.step,
            });
        }
        std::mem::swap(&mut self.prev, &mut self.cur);
        self.step += 1;
        Ok(diag)
    }

    pub fn step(&mut self, src: &GridField) -> Result<(), WeakfieldError> {
        let k = self.k;
        self.step_with(|cell, out| {
            for (c, o) in out.iter_mut().enumerate().take(k) {
                *o = src.comps[c][cell];
            }
            0.0
        })
        .map(|_| ())
    }

    pub fn state(&self) -> GridField {
        deinterleave(&self.cur, self.grid, self.k)
    }

    /// Centred time derivative one level behind [`state`](Self::state).
    pub fn time_derivative(&self) -> GridField {
        deinterleave(&self.dt_cur, self.grid, self.k)
    }
}

/// Runs `grid.steps` steps; `source(n, tₙ)` gives the source at level `n`.
pub fn wave_solve(
    grid: &GridSpec,
    k: usize,
    mut source: impl FnMut(usize, f64) -> GridField,
) -> Result<GridField, WeakfieldError> {
    grid.validate()?;
    let mut w = WaveSolver::new(*grid, k);
    for n in 0..grid.steps {
        let s = source(n, n as f64 * grid.dt());
        w.step(&s)?;
    }
    Ok(w.state())
}

#[inline]
pub(crate) fn cell_field_strength(
    phi: &[f64],
    dphi: &[f64],
    cell: usize,
    strides: [usize; 3],
    inv_2h: f64,
) -> [[f64; 4]; 4] {
    let mut d = [[0.0; 4]; 4];
    for b in 0..4 {
        d[0][b] = dphi[4 * cell + b];
        for a in 0..3 {
            d[a + 1][b] =
                (phi[4 * (cell + strides[a]) + b] - phi[4 * (cell - strides[a]) + b]) * inv_2h;
        }
    }
    let mut f = [[0.0; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            f[a][b] = d[a][b] - d[b][a];
        }
    }
    f
}

/// `Ĥ₂,αβ = −2(h^{aa} F_{αa} F_{βa} − ¼ h_{αβ} h^{aa} h^{bb} F_{ab}²)` in
/// [`STRESS_INDEX`] order.
#[inline]
pub(crate) fn cell_h2hat(f: &[[f64; 4]; 4]) -> [f64; 10] {
    let mut tr = 0.0;
    for a in 0..4 {
        for b in 0..4 {
            tr += H[a] * H[b] * f[a][b] * f[a][b];
        }
    }
    let mut out = [0.0; 10];
    for (slot, &(al, be)) in STRESS_INDEX.iter().enumerate() {
        let mut s = 0.0;
        for a in 0..4 {
            s += H[a] * f[al][a] * f[be][a];
        }
        if al == be {
            s -= 0.25 * H[al] * tr;
        }
        out[slot] = -2.0 * s;
    }
    out
}

fn strides(grid: &GridSpec) -> [usize; 3] {
    let n = grid.points;
    [1, n, n * n]
}

/// `F_{αβ} = ∂_α φ̇_β − ∂_β φ̇_α` from a potential and its time derivative,
/// in the order 01, 02, 03, 12, 13, 23.
pub fn field_strength(phi: &GridField, dphi: &GridField) -> GridField {
    let g = phi.grid;
    let (p, d) = (interleave(phi), interleave(dphi));
    let st = strides(&g);
    let inv_2h = 0.5 / g.h();
    let mut out = vec![0.0; 6 * g.len()];
    out.par_chunks_mut(6).enumerate().for_each(|(cell, o)| {
        let (x, y, z) = g.coords(cell);
        if g.is_interior(x, y, z) {
            let f = cell_field_strength(&p, &d, cell, st, inv_2h);
            for (slot, &(a, b)) in F_INDEX.iter().enumerate() {
                o[slot] = f[a][b];
            }
        }
    });
    deinterleave(&out, g, 6)
}

/// `Ĥ₂(F)` from the six components produced by [`field_strength`].
pub fn em_stress(f: &GridField) -> GridField {
    let g = f.grid;
    let src = interleave(f);
    let mut out = vec![0.0; 10 * g.len()];
    out.par_chunks_mut(10).enumerate().for_each(|(cell, o)| {
        let mut m = [[0.0; 4]; 4];
        for (slot, &(a, b)) in F_INDEX.iter().enumerate() {
            m[a][b] = src[6 * cell + slot];
            m[b][a] = -m[a][b];
        }
        o.copy_from_slice(&cell_h2hat(&m));
    });
    deinterleave(&out, g, 10)
}

/// Lorenz-gauge residual `−∂ₜφ̇₀ + ∂ᵢφ̇ᵢ` on interior points.
pub fn gauge_residual(phi: &GridField, dphi: &GridField) -> GridField {
    let g = phi.grid;
    let st = strides(&g);
    let inv_2h = 0.5 / g.h();
    let r = (0..g.len())
        .into_par_iter()
        .map(|i| {
            let (x, y, z) = g.coords(i);
            if !g.is_interior(x, y, z) {
                return 0.0;
            }
            -dphi.comps[0][i]
                + (0..3)
                    .map(|a| (phi.comps[a + 1][i + st[a]] - phi.comps[a + 1][i - st[a]]) * inv_2h)
                    .sum::<f64>()
        })
        .collect();
    GridField {
        grid: g,
        comps: vec![r],
    }
}

/// Statistics from one metric step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricStepStats {
    /// Largest `max(Ĥ₂,₀₀, 0) / Σ F²` over the slice.
    pub h2_00_violation: f64,
    pub g1_max: f64,
}

/// Streaming solver for `(∂ₜ² − Δ)g₁ = −(Ĥ₂ + (𝒥^α φ̇_α) h)`.
#[derive(Debug, Clone)]
pub struct MetricSolver {
    inner: WaveSolver,
}

impl MetricSolver {
    pub fn new(grid: GridSpec) -> Self {
        MetricSolver {
            inner: WaveSolver::new(grid, 10),
        }
    }

    /// Advance with `φ̇`, `∂ₜφ̇` (interleaved, 4 components) and a current
    /// `j(cell) = 𝒥^α` at the same level.
    pub(crate) fn step_raw<J>(
        &mut self,
        phi: &[f64],
        dphi: &[f64],
        j: J,
    ) -> Result<MetricStepStats, WeakfieldError>
    where
        J: Fn(usize) -> [f64; 4] + Sync,
    {
        let g = self.inner.grid;
        let st = strides(&g);
        let inv_2h = 0.5 / g.h();
        let step = self.inner.step;
        let first = step == 0;
        let (viol, amax) = leapfrog(
            &g,
            10,
            &mut self.inner.prev,
            &self.inner.cur,
            None,
            first,
            |cell, out| {
                let f = cell_field_strength(phi, dphi, cell, st, inv_2h);
                let h2 = cell_h2hat(&f);
                let cur = j(cell);
                let jp: f64 = (0..4).map(|a| cur[a] * phi[4 * cell + a]).sum();
                for (slot, &(a, b)) in STRESS_INDEX.iter().enumerate() {
                    let metric = if a == b { H[a] } else { 0.0 };
                    out[slot] = -(h2[slot] + jp * metric);
                }
                let f2: f64 = f.iter().flatten().map(|v| v * v).sum();
                if h2[0] > 0.0 {
                    h2[0] / f2.max(f64::MIN_POSITIVE)
                } else {
                    0.0
                }
            },
        );
        if !amax.is_finite() {
            return Err(WeakfieldError::NonFinite { field: "g1", step });
        }
        std::mem::swap(&mut self.inner.prev, &mut self.inner.cur);
        self.inner.step += 1;
        Ok(MetricStepStats {
            h2_00_violation: viol.max(0.0),
            g1_max: amax,
        })
    }

    pub fn state(&self) -> GridField {
        self.inner.state()
    }
}

/// `g₁` after `phi.len() − 1` steps, from sampled `φ̇ₙ` and `𝒥ₙ^α`.
///
/// `∂ₜφ̇` is taken by centred differences of consecutive slices, so the last
/// slice only enters through that difference.
pub fn metric_correction(
    phi: &[GridField],
    current: &[GridField],
    grid: &GridSpec,
) -> Result<GridField, WeakfieldError> {
    grid.validate()?;
    let mut solver = MetricSolver::new(*grid);
    let inv_2dt = 0.5 / grid.dt();
    for n in 0..phi.len().saturating_sub(1) {
        let back = if n == 0 { &phi[1] } else { &phi[n - 1] };
        let mut dphi = phi[n + 1].clone();
        for (d, b) in dphi.comps.iter_mut().zip(&back.comps) {
            d.iter_mut()
                .zip(b)
                .for_each(|(d, b)| *d = (*d - b) * inv_2dt);
        }
        let (p, d) = (interleave(&phi[n]), interleave(&dphi));
        let jn = &current[n];
        solver.step_raw(&p, &d, |cell| [0, 1, 2, 3].map(|a| jn.comps[a][cell]))?;
    }
    Ok(solver.state())
}
