use serde::{Deserialize, Serialize};

use super::grid::{GridField, GridSpec};
use super::WeakfieldError;

/// `exp(1 − 1/(1 − s²))` on `|s| < 1`, zero outside; peak value 1.
///
/// With `smoothness = Some(k)` the profile is `(1 − s²)^k` instead.
pub fn bump(s: f64, smoothness: Option<u32>) -> f64 {
    if s.abs() >= 1.0 {
        return 0.0;
    }
    let q = 1.0 - s * s;
    match smoothness {
        None => (1.0 - 1.0 / q).exp(),
        Some(k) => q.powi(k as i32),
    }
}

fn bump_derivative(s: f64, smoothness: Option<u32>) -> f64 {
    if s.abs() >= 1.0 {
        return 0.0;
    }
    let q = 1.0 - s * s;
    match smoothness {
        None => bump(s, None) * (-2.0 * s / (q * q)),
        Some(0) => 0.0,
        Some(k) => -2.0 * s * k as f64 * q.powi(k as i32 - 1),
    }
}

fn bump_integral(smoothness: Option<u32>) -> f64 {
    let m = 20_000;
    let ds = 2.0 / m as f64;
    (0..m)
        .map(|i| bump(-1.0 + (i as f64 + 0.5) * ds, smoothness))
        .sum::<f64>()
        * ds
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WindowKind {
    /// `bump'((t − c)/τ)`: integrates to zero, so no charge is left behind.
    ZeroMean,
    /// `bump((t − c)/τ)`.
    Positive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TemporalWindow {
    pub center: f64,
    pub half_width: f64,
    pub kind: WindowKind,
}

impl TemporalWindow {
    pub fn eval(&self, t: f64, smoothness: Option<u32>) -> f64 {
        let s = (t - self.center) / self.half_width;
        match self.kind {
            WindowKind::ZeroMean => bump_derivative(s, smoothness),
            WindowKind::Positive => bump(s, smoothness),
        }
    }

    pub fn start(&self) -> f64 {
        self.center - self.half_width
    }

    pub fn end(&self) -> f64 {
        self.center + self.half_width
    }
}

/// Current `𝒥̄ⁱ` concentrated near a flat rectangle `Y`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConormalSourceSpec {
    /// Centre of `Y`.
    pub base: [f64; 3],
    /// Orthonormal spanning directions of `Y`.
    pub span: [[f64; 3]; 2],
    /// Half-lengths of `Y` along `span`.
    pub extents: [f64; 2],
    /// Half-width of the normal profile.
    pub width: f64,
    /// Spatial amplitude `𝒥̄ⁱ`.
    pub amplitude: [f64; 3],
    pub window: TemporalWindow,
    /// `None` for the C^∞ bump, `Some(k)` for `(1 − s²)^k`.
    #[serde(default)]
    pub smoothness: Option<u32>,
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

impl ConormalSourceSpec {
    /// Square patch centred in the grid, normal to `z`, current along `x`, with
    /// a zero-mean window that starts at `t = 0`.
    pub fn centered(grid: &GridSpec, half_extent: f64, width_cells: f64) -> Self {
        let c = grid.length / 2.0;
        let w = width_cells * grid.h();
        ConormalSourceSpec {
            base: [c, c, c],
            span: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]],
            extents: [half_extent, half_extent],
            width: w,
            amplitude: [1.0, 0.0, 0.0],
            window: TemporalWindow {
                center: w,
                half_width: w,
                kind: WindowKind::ZeroMean,
            },
            smoothness: None,
        }
    }

    pub fn normal(&self) -> [f64; 3] {
        cross(self.span[0], self.span[1])
    }

    /// Coordinates of `p` relative to `Y`: (along span 0, along span 1, normal).
    pub fn local(&self, p: [f64; 3]) -> [f64; 3] {
        let d = sub(p, self.base);
        [
            dot(d, self.span[0]),
            dot(d, self.span[1]),
            dot(d, self.normal()),
        ]
    }

    /// Euclidean distance from `p` to the rectangle `Y`.
    pub fn distance_to_patch(&self, p: [f64; 3]) -> f64 {
        let [u, v, n] = self.local(p);
        let du = (u.abs() - self.extents[0]).max(0.0);
        let dv = (v.abs() - self.extents[1]).max(0.0);
        (du * du + dv * dv + n * n).sqrt()
    }

    /// Radius of the support around `Y`.
    pub fn support_radius(&self) -> f64 {
        self.width * std::f64::consts::SQRT_2
    }

    pub fn validate(&self, grid: &GridSpec) -> Result<(), WeakfieldError> {
        let orth = dot(self.span[0], self.span[1]).abs();
        let unit = (dot(self.span[0], self.span[0]) - 1.0)
            .abs()
            .max((dot(self.span[1], self.span[1]) - 1.0).abs());
        if orth > 1e-12 || unit > 1e-12 {
            return Err(WeakfieldError::BadSource(
                "span directions must be orthonormal".into(),
            ));
        }
        if !(self.width > 0.0 && self.window.half_width > 0.0)
            || self.extents.iter().any(|e| *e < 0.0)
        {
            return Err(WeakfieldError::BadSource(
                "widths must be positive and extents non-negative".into(),
            ));
        }
        if self.window.start() < 0.0 {
            return Err(WeakfieldError::BadSource(
                "temporal window must start at t >= 0".into(),
            ));
        }
        let h = grid.h();
        let margin = h;
        for &su in &[-1.0, 1.0] {
            for &sv in &[-1.0, 1.0] {
                for &sn in &[-1.0, 1.0] {
                    let mut p = self.base;
                    let n = self.normal();
                    for k in 0..3 {
                        p[k] += su * (self.extents[0] + self.width) * self.span[0][k]
                            + sv * (self.extents[1] + self.width) * self.span[1][k]
                            + sn * self.width * n[k];
                    }
                    if p.iter().any(|&c| c < margin || c > grid.length - margin) {
                        return Err(WeakfieldError::OutOfGrid(format!(
                            "corner {p:?} is within one cell of the boundary"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Space–time separable current `𝒥̄(t, x) = S(x) W(t)`.
#[derive(Debug, Clone)]
pub struct ConormalSource {
    pub spec: ConormalSourceSpec,
    /// Three components of `S`.
    pub spatial: GridField,
}

impl ConormalSource {
    /// Normal profile normalized to unit integral, smooth plateau along `Y`.
    pub fn build(spec: &ConormalSourceSpec, grid: &GridSpec) -> Result<Self, WeakfieldError> {
        grid.validate()?;
        spec.validate(grid)?;
        let norm = 1.0 / (spec.width * bump_integral(spec.smoothness));
        let plateau = |u: f64, a: f64| {
            let over = u.abs() - a;
            if over <= 0.0 {
                1.0
            } else {
                bump(over / spec.width, spec.smoothness)
            }
        };
        let spatial = GridField::from_fn(*grid, 3, |c, p| {
            if spec.amplitude[c] == 0.0 {
                return 0.0;
            }
            let [u, v, n] = spec.local(p);
            let profile = bump(n / spec.width, spec.smoothness) * norm;
            if profile == 0.0 {
                return 0.0;
            }
            spec.amplitude[c] * profile * plateau(u, spec.extents[0]) * plateau(v, spec.extents[1])
        });
        Ok(ConormalSource {
            spec: spec.clone(),
            spatial,
        })
    }

    pub fn window(&self, t: f64) -> f64 {
        self.spec.window.eval(t, self.spec.smoothness)
    }

    /// `𝒥̄` at time `t`.
    pub fn slice(&self, t: f64) -> GridField {
        let mut f = self.spatial.clone();
        f.scale(self.window(t));
        f
    }

    pub fn scaled(&self, lambda: f64) -> Self {
        let mut s = self.clone();
        s.spatial.scale(lambda);
        for a in &mut s.spec.amplitude {
            *a *= lambda;
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bump_shape() {
        assert_eq!(bump(0.0, None), 1.0);
        assert_eq!(bump(1.0, None), 0.0);
        assert!((bump_integral(Some(1)) - 4.0 / 3.0).abs() < 1e-8);
        let h = 1e-6;
        for s in [-0.7, -0.2, 0.3, 0.9] {
            let fd = (bump(s + h, None) - bump(s - h, None)) / (2.0 * h);
            assert!((fd - bump_derivative(s, None)).abs() < 1e-6);
        }
    }

    #[test]
    fn zero_mean_window_integrates_to_zero() {
        let w = TemporalWindow {
            center: 1.0,
            half_width: 0.5,
            kind: WindowKind::ZeroMean,
        };
        let m = 100_000;
        let dt = 1.0 / m as f64;
        let total: f64 = (0..m)
            .map(|i| w.eval(0.5 + (i as f64 + 0.5) * dt, None))
            .sum::<f64>()
            * dt;
        assert!(total.abs() < 1e-9);
    }

    #[test]
    fn distance_to_rectangle() {
        let g = GridSpec::new(33, 1.0, 0.3, 1).unwrap();
        let s = ConormalSourceSpec::centered(&g, 0.1, 3.0);
        assert_eq!(s.distance_to_patch([0.5, 0.5, 0.7]), 0.19999999999999996);
        assert!((s.distance_to_patch([0.9, 0.5, 0.5]) - 0.3).abs() < 1e-12);
        assert!((s.distance_to_patch([0.9, 0.9, 0.5]) - 0.3 * 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn out_of_grid_is_rejected() {
        let g = GridSpec::new(33, 1.0, 0.3, 1).unwrap();
        let s = ConormalSourceSpec::centered(&g, 0.49, 3.0);
        assert!(matches!(
            ConormalSource::build(&s, &g),
            Err(WeakfieldError::OutOfGrid(_))
        ));
    }
}
