use serde::{Deserialize, Serialize};

use super::metric::{inner, inner_scale, Christoffel, WarpedProduct};
use super::ode::{integrate, OdeOptions, Stop};
use super::{CausalError, Point};

/// Integrator settings shared by every geodesic computation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceOptions {
    pub rtol: f64,
    pub atol: f64,
    pub h_init: f64,
    pub h_max: f64,
    pub h_min: f64,
    /// Largest accepted `|g(γ̇, γ̇)(s) − g(θ, θ)|` relative to `Σ|g_{μν}θ^μθ^ν|`.
    pub drift_tol: f64,
}

impl Default for TraceOptions {
    fn default() -> Self {
        TraceOptions {
            rtol: 1e-11,
            atol: 1e-13,
            h_init: 1e-3,
            h_max: 0.1,
            h_min: 1e-13,
            drift_tol: 1e-9,
        }
    }
}

impl TraceOptions {
    fn ode(&self) -> OdeOptions {
        OdeOptions {
            rtol: self.rtol,
            atol: self.atol,
            h_init: self.h_init,
            h_max: self.h_max,
            h_min: self.h_min,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExitReason {
    Horizon,
    LeftChart,
    Stopped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeodesicSample {
    pub s: f64,
    pub x: Point,
    pub v: Point,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeodesicCurve {
    pub x0: Point,
    pub theta: Point,
    pub samples: Vec<GeodesicSample>,
    pub exit: ExitReason,
    pub options: TraceOptions,
    /// `max_s |g(γ̇, γ̇)(s) − g(θ, θ)|`.
    pub norm_drift: f64,
}

impl GeodesicCurve {
    pub fn end(&self) -> &GeodesicSample {
        self.samples
            .last()
            .expect("a curve has at least its initial sample")
    }

    /// Cubic Hermite interpolation of the position at parameter `s`.
    pub fn position(&self, s: f64) -> Option<Point> {
        let k = self.samples.partition_point(|p| p.s < s);
        if k == 0 {
            return (self.samples.first()?.s == s).then(|| self.samples[0].x);
        }
        let (a, b) = (self.samples.get(k - 1)?, self.samples.get(k)?);
        Some(hermite(a, b, (s - a.s) / (b.s - a.s)).0)
    }
}

/// Position and velocity on the Hermite cubic through `a` and `b` at `u ∈ [0, 1]`.
pub(crate) fn hermite(a: &GeodesicSample, b: &GeodesicSample, u: f64) -> (Point, Point) {
    let h = b.s - a.s;
    let (u2, u3) = (u * u, u * u * u);
    let (h00, h10, h01, h11) = (
        2.0 * u3 - 3.0 * u2 + 1.0,
        u3 - 2.0 * u2 + u,
        -2.0 * u3 + 3.0 * u2,
        u3 - u2,
    );
    let (d00, d10, d01, d11) = (
        6.0 * u2 - 6.0 * u,
        3.0 * u2 - 4.0 * u + 1.0,
        -6.0 * u2 + 6.0 * u,
        3.0 * u2 - 2.0 * u,
    );
    let mut x = [0.0; 4];
    let mut v = [0.0; 4];
    for m in 0..4 {
        x[m] = h00 * a.x[m] + h10 * h * a.v[m] + h01 * b.x[m] + h11 * h * b.v[m];
        v[m] = (d00 * a.x[m] + d01 * b.x[m]) / h + d10 * a.v[m] + d11 * b.v[m];
    }
    (x, v)
}

fn split(y: &[f64]) -> (Point, Point) {
    ([y[0], y[1], y[2], y[3]], [y[4], y[5], y[6], y[7]])
}

fn contract(gam: &Christoffel, u: &Point, w: &Point) -> Point {
    let mut out = [0.0; 4];
    for (m, o) in out.iter_mut().enumerate() {
        let mut s = 0.0;
        for a in 0..4 {
            for b in 0..4 {
                s += gam[m][a][b] * u[a] * w[b];
            }
        }
        *o = -s;
    }
    out
}

fn geodesic_rhs<M: WarpedProduct + ?Sized>(
    metric: &M,
    y: &[f64],
    d: &mut [f64],
) -> Result<(), CausalError> {
    let (x, v) = split(y);
    let gam = metric.christoffel(&x)?;
    let a = contract(&gam, &v, &v);
    d[..4].copy_from_slice(&v);
    d[4..8].copy_from_slice(&a);
    Ok(())
}

fn check_direction<M: WarpedProduct + ?Sized>(
    metric: &M,
    x: &Point,
    theta: &Point,
) -> Result<(), CausalError> {
    if theta.iter().all(|c| *c == 0.0) {
        return Err(CausalError::ZeroDirection);
    }
    metric.check(x)
}

/// `γ_{x,θ}(s) = exp_x(sθ)` for `s ∈ [0, horizon]`, stopping early when the
/// curve leaves the chart.
pub fn geodesic_trace<M: WarpedProduct + ?Sized>(
    metric: &M,
    x: Point,
    theta: Point,
    horizon: f64,
    opts: &TraceOptions,
) -> Result<GeodesicCurve, CausalError> {
    trace_until(metric, x, theta, horizon, opts, |_| false)
}

/// Like [`geodesic_trace`], also stopping after the first sample for which
/// `stop` holds.
pub(crate) fn trace_until<M, S>(
    metric: &M,
    x: Point,
    theta: Point,
    horizon: f64,
    opts: &TraceOptions,
    mut stop: S,
) -> Result<GeodesicCurve, CausalError>
where
    M: WarpedProduct + ?Sized,
    S: FnMut(&GeodesicSample) -> bool,
{
    check_direction(metric, &x, &theta)?;
    let g0 = metric.metric(&x);
    let n0 = inner(&g0, &theta, &theta);
    let scale = inner_scale(&g0, &theta, &theta);
    let bound = opts.drift_tol * scale;
    let drift = |y: &[f64]| {
        let (p, v) = split(y);
        (metric.norm(&p, &v) - n0).abs()
    };
    let mut samples = Vec::new();
    let mut norm_drift = 0.0f64;
    let mut stopped = false;
    let y0: Vec<f64> = x.iter().chain(theta.iter()).copied().collect();
    let out = integrate(
        |_, y, d| geodesic_rhs(metric, y, d),
        0.0,
        &y0,
        horizon,
        &opts.ode(),
        |y| drift(y) <= bound,
        |s, y, _| {
            let (p, v) = split(y);
            norm_drift = norm_drift.max(drift(y));
            let sample = GeodesicSample { s, x: p, v };
            stopped = stop(&sample);
            samples.push(sample);
            Ok(!stopped)
        },
    )?;
    let exit = match out.stop {
        Stop::Reached => ExitReason::Horizon,
        Stop::LeftChart => ExitReason::LeftChart,
        Stop::Observer => ExitReason::Stopped,
    };
    Ok(GeodesicCurve {
        x0: x,
        theta,
        samples,
        exit,
        options: *opts,
        norm_drift,
    })
}

/// `∂_λ Γ^μ_{αβ}` by centred differences of the Christoffel symbols.
fn christoffel_derivative<M: WarpedProduct + ?Sized>(
    metric: &M,
    x: &Point,
) -> Result<[Christoffel; 4], CausalError> {
    let mut out = [[[[0.0; 4]; 4]; 4]; 4];
    for (l, dl) in out.iter_mut().enumerate() {
        let step = 1e-5 * x[l].abs().max(1.0);
        let (mut xp, mut xm) = (*x, *x);
        xp[l] += step;
        xm[l] -= step;
        let (gp, gm) = (metric.christoffel(&xp)?, metric.christoffel(&xm)?);
        for m in 0..4 {
            for a in 0..4 {
                for b in 0..4 {
                    dl[m][a][b] = (gp[m][a][b] - gm[m][a][b]) / (2.0 * step);
                }
            }
        }
    }
    Ok(out)
}

const VAR_DIM: usize = 40;

/// Geodesic plus four Jacobi fields `J_k` with `J_k(0) = 0`, `J_k'(0) = e_k`.
/// Layout: `x, v, J_0..J_3, J_0'..J_3'`.
fn variational_rhs<M: WarpedProduct + ?Sized>(
    metric: &M,
    y: &[f64],
    d: &mut [f64],
) -> Result<(), CausalError> {
    let (x, v) = split(y);
    let gam = metric.christoffel(&x)?;
    let dgam = christoffel_derivative(metric, &x)?;
    d[..4].copy_from_slice(&v);
    d[4..8].copy_from_slice(&contract(&gam, &v, &v));
    for k in 0..4 {
        let j: Point = std::array::from_fn(|m| y[8 + 4 * k + m]);
        let jp: Point = std::array::from_fn(|m| y[24 + 4 * k + m]);
        let lin = contract(&gam, &v, &jp);
        for m in 0..4 {
            let mut curv = 0.0;
            for (l, dl) in dgam.iter().enumerate() {
                let mut s = 0.0;
                for a in 0..4 {
                    for b in 0..4 {
                        s += dl[m][a][b] * v[a] * v[b];
                    }
                }
                curv += s * j[l];
            }
            d[8 + 4 * k + m] = jp[m];
            d[24 + 4 * k + m] = 2.0 * lin[m] - curv;
        }
    }
    Ok(())
}

fn det4(m: &[[f64; 4]; 4]) -> f64 {
    let mut total = 0.0;
    for c in 0..4 {
        let minor: [[f64; 3]; 3] = std::array::from_fn(|r| {
            let cols: Vec<usize> = (0..4).filter(|&k| k != c).collect();
            std::array::from_fn(|k| m[r + 1][cols[k]])
        });
        let d3 = minor[0][0] * (minor[1][1] * minor[2][2] - minor[1][2] * minor[2][1])
            - minor[0][1] * (minor[1][0] * minor[2][2] - minor[1][2] * minor[2][0])
            + minor[0][2] * (minor[1][0] * minor[2][1] - minor[1][1] * minor[2][0]);
        let sign = if c % 2 == 0 { 1.0 } else { -1.0 };
        total += sign * m[0][c] * d3;
    }
    total
}

/// `N(s) = det M(s) / s⁴` and `N'(s)`, where the columns of `M` are the
/// Jacobi fields. `N(0) = 1`.
fn jacobi_scaled(s: f64, y: &[f64]) -> (f64, f64) {
    let col = |base: usize, k: usize, r: usize| y[base + 4 * k + r];
    let m: [[f64; 4]; 4] = std::array::from_fn(|r| std::array::from_fn(|k| col(8, k, r)));
    let det = det4(&m);
    let mut ddet = 0.0;
    for k in 0..4 {
        let mut mk = m;
        for (r, row) in mk.iter_mut().enumerate() {
            row[k] = col(24, k, r);
        }
        ddet += det4(&mk);
    }
    let s4 = s.powi(4);
    (det / s4, (ddet * s - 4.0 * det) / (s4 * s))
}

/// Smallest `s ∈ (0, horizon]` at which `γ_{x,θ}(s)` is conjugate to `x`.
///
/// A zero of the Jacobi determinant is bracketed either by a sign change of
/// `N` or, for roots of even order, by `N'` turning from negative to
/// non-negative at a point where `|N| < 10⁻⁶`. Brackets are refined by
/// bisection, re-integrating from the bracket start.
pub fn first_conjugate_time<M: WarpedProduct + ?Sized>(
    metric: &M,
    x: Point,
    theta: Point,
    horizon: f64,
    opts: &TraceOptions,
) -> Result<Option<f64>, CausalError> {
    check_direction(metric, &x, &theta)?;
    let g = metric.metric(&x);
    let n = inner(&g, &theta, &theta);
    if n.abs() > 1e-10 * inner_scale(&g, &theta, &theta) {
        return Err(CausalError::NotLightlike(n));
    }
    let mut y0 = vec![0.0; VAR_DIM];
    y0[..4].copy_from_slice(&x);
    y0[4..8].copy_from_slice(&theta);
    for k in 0..4 {
        y0[24 + 4 * k + k] = 1.0;
    }
    let ode = opts.ode();
    let rhs = |_: f64, y: &[f64], d: &mut [f64]| variational_rhs(metric, y, d);
    let s_floor = 1e-6 * horizon.max(1.0);

    let fine = OdeOptions {
        rtol: opts.rtol * 0.1,
        atol: opts.atol * 0.1,
        ..ode
    };
    let mut start = (0.0, y0);
    loop {
        let mut prev: Option<(f64, Vec<f64>, f64, f64)> = None;
        let mut bracket: Option<(f64, Vec<f64>, f64, Vec<f64>, bool)> = None;
        integrate(
            rhs,
            start.0,
            &start.1,
            horizon,
            &ode,
            |_| true,
            |s, y, _| {
                if s < s_floor {
                    return Ok(true);
                }
                let (nv, dn) = jacobi_scaled(s, y);
                if let Some((sp, yp, np, dnp)) = &prev {
                    if np.signum() != nv.signum() || nv == 0.0 {
                        bracket = Some((*sp, yp.clone(), s, y.to_vec(), false));
                    } else if *dnp < 0.0 && dn >= 0.0 {
                        bracket = Some((*sp, yp.clone(), s, y.to_vec(), true));
                    }
                }
                if bracket.is_some() {
                    return Ok(false);
                }
                prev = Some((s, y.to_vec(), nv, dn));
                Ok(true)
            },
        )?;
        let Some((a, ya, b, yb, derivative)) = bracket else {
            return Ok(None);
        };
        let probe = |t: f64| -> Result<(f64, f64), CausalError> {
            let out = integrate(rhs, a, &ya, t, &fine, |_| true, |_, _, _| Ok(true))?;
            Ok(jacobi_scaled(t, &out.y))
        };
        let pick = |v: (f64, f64)| if derivative { v.1 } else { v.0 };
        let fa = pick(jacobi_scaled(a, &ya));
        let (mut lo, mut hi) = (a, b);
        while hi - lo > 1e-13 * hi.max(1.0) {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let fm = pick(probe(mid)?);
            if fm.signum() == fa.signum() && fm != 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let root = 0.5 * (lo + hi);
        if !derivative || probe(root)?.0.abs() < 1e-6 {
            return Ok(Some(root));
        }
        start = (b, yb);
    }
}
