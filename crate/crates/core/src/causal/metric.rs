use serde::{Deserialize, Serialize};

use super::{CausalError, Point};

/// `Γ[μ][α][β] = Γ^μ_{αβ}`.
pub type Christoffel = [[[f64; 4]; 4]; 4];

/// A metric `−β dt² + κ` given by its lapse and spatial part.
///
/// Only `lapse` and `spatial` are required; derivatives fall back to centred
/// differences.
pub trait WarpedProduct: Sync {
    fn lapse(&self, x: &Point) -> f64;

    fn spatial(&self, x: &Point) -> [[f64; 3]; 3];

    /// `∂_λ g_{μν}` as `[λ][μ][ν]`.
    fn metric_derivative(&self, x: &Point) -> [[[f64; 4]; 4]; 4] {
        let mut d = [[[0.0; 4]; 4]; 4];
        for (l, dl) in d.iter_mut().enumerate() {
            let step = 1e-6 * (1.0 + x[l].abs());
            let (mut xp, mut xm) = (*x, *x);
            xp[l] += step;
            xm[l] -= step;
            let (gp, gm) = (self.metric(&xp), self.metric(&xm));
            for m in 0..4 {
                for n in 0..4 {
                    dl[m][n] = (gp[m][n] - gm[m][n]) / (2.0 * step);
                }
            }
        }
        d
    }

    /// Whether `x` lies in the coordinate chart.
    fn in_chart(&self, x: &Point) -> bool {
        x.iter().all(|c| c.is_finite())
    }

    fn metric(&self, x: &Point) -> [[f64; 4]; 4] {
        let mut g = [[0.0; 4]; 4];
        g[0][0] = -self.lapse(x);
        let k = self.spatial(x);
        for i in 0..3 {
            for j in 0..3 {
                g[i + 1][j + 1] = k[i][j];
            }
        }
        g
    }

    /// Lapse positive and spatial part positive definite at `x`.
    fn check(&self, x: &Point) -> Result<(), CausalError> {
        let fail = |reason: &str| CausalError::Metric {
            point: *x,
            reason: reason.into(),
        };
        if !self.in_chart(x) {
            return Err(CausalError::OutsideChart(*x));
        }
        let b = self.lapse(x);
        if !(b > 0.0 && b.is_finite()) {
            return Err(fail("lapse is not positive"));
        }
        let k = self.spatial(x);
        let m1 = k[0][0];
        let m2 = k[0][0] * k[1][1] - k[0][1] * k[1][0];
        let m3 = det3(&k);
        if !(m1 > 0.0 && m2 > 0.0 && m3 > 0.0) {
            return Err(fail("spatial metric is not positive definite"));
        }
        Ok(())
    }

    fn christoffel(&self, x: &Point) -> Result<Christoffel, CausalError> {
        self.check(x)?;
        let g = self.metric(x);
        let inv = inverse_block(&g);
        let d = self.metric_derivative(x);
        let mut lower = [[[0.0; 4]; 4]; 4];
        for l in 0..4 {
            for a in 0..4 {
                for b in a..4 {
                    let v = 0.5 * (d[b][l][a] + d[a][l][b] - d[l][a][b]);
                    lower[l][a][b] = v;
                    lower[l][b][a] = v;
                }
            }
        }
        let mut gam = [[[0.0; 4]; 4]; 4];
        for m in 0..4 {
            for a in 0..4 {
                for b in 0..4 {
                    gam[m][a][b] = (0..4).map(|l| inv[m][l] * lower[l][a][b]).sum();
                }
            }
        }
        Ok(gam)
    }

    fn norm(&self, x: &Point, v: &Point) -> f64 {
        inner(&self.metric(x), v, v)
    }
}

pub(crate) fn inner(g: &[[f64; 4]; 4], u: &Point, v: &Point) -> f64 {
    let mut s = 0.0;
    for a in 0..4 {
        for b in 0..4 {
            s += g[a][b] * u[a] * v[b];
        }
    }
    s
}

/// `Σ |g_{μν} u^μ v^ν|`, a scale for relative norm checks.
pub(crate) fn inner_scale(g: &[[f64; 4]; 4], u: &Point, v: &Point) -> f64 {
    let mut s = 0.0;
    for a in 0..4 {
        for b in 0..4 {
            s += (g[a][b] * u[a] * v[b]).abs();
        }
    }
    s
}

fn det3(k: &[[f64; 3]; 3]) -> f64 {
    k[0][0] * (k[1][1] * k[2][2] - k[1][2] * k[2][1])
        - k[0][1] * (k[1][0] * k[2][2] - k[1][2] * k[2][0])
        + k[0][2] * (k[1][0] * k[2][1] - k[1][1] * k[2][0])
}

pub(crate) fn inverse3(k: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let d = det3(k);
    let mut inv = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let (r0, r1) = ((j + 1) % 3, (j + 2) % 3);
            let (c0, c1) = ((i + 1) % 3, (i + 2) % 3);
            inv[i][j] = (k[r0][c0] * k[r1][c1] - k[r0][c1] * k[r1][c0]) / d;
        }
    }
    inv
}

/// Inverse of a metric with vanishing time–space block.
fn inverse_block(g: &[[f64; 4]; 4]) -> [[f64; 4]; 4] {
    let k = [
        [g[1][1], g[1][2], g[1][3]],
        [g[2][1], g[2][2], g[2][3]],
        [g[3][1], g[3][2], g[3][3]],
    ];
    let ki = inverse3(&k);
    let mut inv = [[0.0; 4]; 4];
    inv[0][0] = 1.0 / g[0][0];
    for i in 0..3 {
        for j in 0..3 {
            inv[i + 1][j + 1] = ki[i][j];
        }
    }
    inv
}

/// Named metric families with `β ≡ 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum WarpedMetric {
    Minkowski,
    /// `κ = 4R²/(1 + |y|²)² δ`: the round 3-sphere of radius `R` in
    /// stereographic coordinates. The chart stops at `|y| = chart_radius`.
    RoundSphere {
        radius: f64,
        #[serde(default = "default_chart_radius")]
        chart_radius: f64,
    },
    /// `κ_ij = δ_ij + ε y_i y_j`.
    PerturbedFlat {
        epsilon: f64,
    },
}

fn default_chart_radius() -> f64 {
    1e3
}

impl WarpedMetric {
    pub fn unit_sphere() -> Self {
        WarpedMetric::RoundSphere {
            radius: 1.0,
            chart_radius: default_chart_radius(),
        }
    }
}

impl WarpedProduct for WarpedMetric {
    fn lapse(&self, _x: &Point) -> f64 {
        1.0
    }

    fn spatial(&self, x: &Point) -> [[f64; 3]; 3] {
        let y = [x[1], x[2], x[3]];
        let mut k = [[0.0; 3]; 3];
        match self {
            WarpedMetric::Minkowski => {
                for (i, row) in k.iter_mut().enumerate() {
                    row[i] = 1.0;
                }
            }
            WarpedMetric::RoundSphere { radius, .. } => {
                let s = 1.0 + y.iter().map(|c| c * c).sum::<f64>();
                let c = 4.0 * radius * radius / (s * s);
                for (i, row) in k.iter_mut().enumerate() {
                    row[i] = c;
                }
            }
            WarpedMetric::PerturbedFlat { epsilon } => {
                for i in 0..3 {
                    for j in 0..3 {
                        k[i][j] = if i == j { 1.0 } else { 0.0 } + epsilon * y[i] * y[j];
                    }
                }
            }
        }
        k
    }

    fn metric_derivative(&self, x: &Point) -> [[[f64; 4]; 4]; 4] {
        let y = [x[1], x[2], x[3]];
        let mut d = [[[0.0; 4]; 4]; 4];
        match self {
            WarpedMetric::Minkowski => {}
            WarpedMetric::RoundSphere { radius, .. } => {
                let s = 1.0 + y.iter().map(|c| c * c).sum::<f64>();
                let base = -16.0 * radius * radius / (s * s * s);
                for l in 0..3 {
                    for i in 0..3 {
                        d[l + 1][i + 1][i + 1] = base * y[l];
                    }
                }
            }
            WarpedMetric::PerturbedFlat { epsilon } => {
                for l in 0..3 {
                    for i in 0..3 {
                        for j in 0..3 {
                            let dil = if i == l { y[j] } else { 0.0 };
                            let djl = if j == l { y[i] } else { 0.0 };
                            d[l + 1][i + 1][j + 1] = epsilon * (dil + djl);
                        }
                    }
                }
            }
        }
        d
    }

    fn in_chart(&self, x: &Point) -> bool {
        if !x.iter().all(|c| c.is_finite()) {
            return false;
        }
        match self {
            WarpedMetric::RoundSphere { chart_radius, .. } => {
                x[1] * x[1] + x[2] * x[2] + x[3] * x[3] <= chart_radius * chart_radius
            }
            _ => true,
        }
    }
}

/// Wraps a metric so that only its values are used and every derivative
/// comes from centred differences.
#[derive(Debug, Clone)]
pub struct FiniteDifference<M>(pub M);

impl<M: WarpedProduct> WarpedProduct for FiniteDifference<M> {
    fn lapse(&self, x: &Point) -> f64 {
        self.0.lapse(x)
    }

    fn spatial(&self, x: &Point) -> [[f64; 3]; 3] {
        self.0.spatial(x)
    }

    fn in_chart(&self, x: &Point) -> bool {
        self.0.in_chart(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn analytic_and_numeric_derivatives_agree() {
        let x = [0.3, -0.4, 0.2, 0.7];
        for m in [
            WarpedMetric::unit_sphere(),
            WarpedMetric::PerturbedFlat { epsilon: 0.3 },
        ] {
            let a = m.metric_derivative(&x);
            let b = FiniteDifference(m.clone()).metric_derivative(&x);
            for l in 0..4 {
                for i in 0..4 {
                    for j in 0..4 {
                        assert!((a[l][i][j] - b[l][i][j]).abs() < 1e-8);
                    }
                }
            }
        }
    }

    #[test]
    fn christoffel_is_symmetric_and_flat_vanishes() {
        let x = [0.0, 0.5, -0.1, 0.3];
        let g = WarpedMetric::unit_sphere().christoffel(&x).unwrap();
        for m in 0..4 {
            for a in 0..4 {
                for b in 0..4 {
                    assert_eq!(g[m][a][b], g[m][b][a]);
                }
            }
        }
        assert!(WarpedMetric::Minkowski
            .christoffel(&x)
            .unwrap()
            .iter()
            .flatten()
            .flatten()
            .all(|v| *v == 0.0));
    }

    #[test]
    fn parses_named_families() {
        let m: WarpedMetric =
            serde_json::from_str(r#"{"family": "round-sphere", "radius": 2.0}"#).unwrap();
        assert_eq!(
            m,
            WarpedMetric::RoundSphere {
                radius: 2.0,
                chart_radius: 1e3
            }
        );
        assert!(serde_json::from_str::<WarpedMetric>(r#"{"family": "kerr"}"#).is_err());
    }

    #[test]
    fn degenerate_metric_is_reported() {
        let m = WarpedMetric::PerturbedFlat { epsilon: -1.0 };
        assert!(matches!(
            m.christoffel(&[0.0, 2.0, 0.0, 0.0]),
            Err(CausalError::Metric { .. })
        ));
    }
}
