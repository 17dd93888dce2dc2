use super::geodesic::{geodesic_trace, ExitReason, TraceOptions};
use super::metric::{inner, WarpedProduct};
use super::ode::{integrate, Stop};
use super::{CausalError, Point};

/// Charts whose proper-volume Jacobian `|det ∂Φ/∂z| √|det g|` falls below this
/// are reported as not injective.
pub const FERMI_INJECTIVITY_FLOOR: f64 = 1e-6;

const FRAME_TOL: f64 = 1e-10;

/// `Φ(z⁰, z⃗) = exp_{μ(z⁰)}(Σ zʲ Zⱼ(z⁰))` where `μ` is the geodesic through `p`
/// with velocity `Z₀` and `Zⱼ` are parallel along `μ`.
#[derive(Debug, Clone)]
pub struct FermiChart<M> {
    metric: M,
    origin: Point,
    frame0: [Point; 4],
    options: TraceOptions,
}

fn gram<M: WarpedProduct>(metric: &M, x: &Point, frame: &[Point; 4]) -> [[f64; 4]; 4] {
    let g = metric.metric(x);
    std::array::from_fn(|a| std::array::from_fn(|b| inner(&g, &frame[a], &frame[b])))
}

/// Largest entry of `|G − diag(−1, 1, 1, 1)|`.
pub(crate) fn gram_deviation(g: &[[f64; 4]; 4]) -> f64 {
    let mut dev = 0.0f64;
    for (a, row) in g.iter().enumerate() {
        for (b, v) in row.iter().enumerate() {
            let target = match (a == b, a) {
                (true, 0) => -1.0,
                (true, _) => 1.0,
                _ => 0.0,
            };
            dev = dev.max((v - target).abs());
        }
    }
    dev
}

fn det4(m: &[[f64; 4]; 4]) -> f64 {
    let mut a = *m;
    let mut det = 1.0;
    for c in 0..4 {
        let piv = (c..4)
            .max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))
            .unwrap_or(c);
        if a[piv][c] == 0.0 {
            return 0.0;
        }
        if piv != c {
            a.swap(piv, c);
            det = -det;
        }
        det *= a[c][c];
        for r in c + 1..4 {
            let f = a[r][c] / a[c][c];
            for k in c..4 {
                a[r][k] -= f * a[c][k];
            }
        }
    }
    det
}

impl<M: WarpedProduct> FermiChart<M> {
    /// `frame0[0]` must be future-pointing and `frame0` orthonormal at `origin`.
    pub fn new(
        metric: M,
        origin: Point,
        frame0: [Point; 4],
        options: TraceOptions,
    ) -> Result<Self, CausalError> {
        metric.check(&origin)?;
        let dev = gram_deviation(&gram(&metric, &origin, &frame0));
        if dev > FRAME_TOL || frame0[0][0] <= 0.0 {
            return Err(CausalError::BadFrame(dev));
        }
        Ok(FermiChart {
            metric,
            origin,
            frame0,
            options,
        })
    }

    pub fn metric(&self) -> &M {
        &self.metric
    }

    /// `μ(z⁰)` and the transported frame there.
    pub fn frame_at(&self, z0: f64) -> Result<(Point, [Point; 4]), CausalError> {
        if z0 == 0.0 {
            return Ok((self.origin, self.frame0));
        }
        let dir = z0.signum();
        let mut y0 = vec![0.0; 24];
        y0[..4].copy_from_slice(&self.origin);
        for m in 0..4 {
            y0[4 + m] = dir * self.frame0[0][m];
        }
        for a in 1..4 {
            y0[4 + 4 * a..8 + 4 * a].copy_from_slice(&self.frame0[a]);
        }
        let metric = &self.metric;
        let rhs = |_: f64, y: &[f64], d: &mut [f64]| {
            let x: Point = std::array::from_fn(|m| y[m]);
            let gam = metric.christoffel(&x)?;
            for a in 0..4 {
                for m in 0..4 {
                    let mut s = 0.0;
                    for p in 0..4 {
                        for q in 0..4 {
                            s += gam[m][p][q] * y[4 + p] * y[4 + 4 * a + q];
                        }
                    }
                    d[4 + 4 * a + m] = -s;
                }
            }
            d[..4].copy_from_slice(&y[4..8]);
            Ok(())
        };
        let out = integrate(
            rhs,
            0.0,
            &y0,
            z0.abs(),
            &self.options_ode(),
            |_| true,
            |_, _, _| Ok(true),
        )?;
        if out.stop != Stop::Reached {
            return Err(CausalError::OutsideChart(std::array::from_fn(|m| out.y[m])));
        }
        let x: Point = std::array::from_fn(|m| out.y[m]);
        let frame: [Point; 4] = std::array::from_fn(|a| {
            std::array::from_fn(|m| {
                if a == 0 {
                    dir * out.y[4 + m]
                } else {
                    out.y[4 + 4 * a + m]
                }
            })
        });
        Ok((x, frame))
    }

    /// Gram matrix of the transported frame at `μ(z⁰)`.
    pub fn frame_gram(&self, z0: f64) -> Result<[[f64; 4]; 4], CausalError> {
        let (x, frame) = self.frame_at(z0)?;
        Ok(gram(&self.metric, &x, &frame))
    }

    /// `Φ(z)` without the injectivity check.
    pub fn map_unchecked(&self, z: Point) -> Result<Point, CausalError> {
        let (base, frame) = self.frame_at(z[0])?;
        let w: Point = std::array::from_fn(|m| (1..4).map(|j| z[j] * frame[j][m]).sum());
        if w.iter().all(|c| *c == 0.0) {
            return Ok(base);
        }
        let curve = geodesic_trace(&self.metric, base, w, 1.0, &self.options)?;
        let end = curve.end();
        if curve.exit != ExitReason::Horizon {
            return Err(CausalError::OutsideChart(end.x));
        }
        Ok(end.x)
    }

    /// Proper-volume Jacobian `|det ∂Φ/∂z| √|det g(Φ(z))|`, by centred differences.
    pub fn volume_jacobian(&self, z: Point) -> Result<f64, CausalError> {
        let step = 1e-5;
        let mut jac = [[0.0; 4]; 4];
        for a in 0..4 {
            let (mut zp, mut zm) = (z, z);
            zp[a] += step;
            zm[a] -= step;
            let (p, m) = (self.map_unchecked(zp)?, self.map_unchecked(zm)?);
            for (r, row) in jac.iter_mut().enumerate() {
                row[a] = (p[r] - m[r]) / (2.0 * step);
            }
        }
        let x = self.map_unchecked(z)?;
        let g = self.metric.metric(&x);
        Ok(det4(&jac).abs() * det4(&g).abs().sqrt())
    }

    /// `Φ(z)`, failing with [`CausalError::ChartInvalid`] where the chart stops
    /// being a local diffeomorphism.
    pub fn map(&self, z: Point) -> Result<Point, CausalError> {
        let det = self.volume_jacobian(z)?;
        if det < FERMI_INJECTIVITY_FLOOR {
            return Err(CausalError::ChartInvalid { z, det });
        }
        self.map_unchecked(z)
    }

    fn options_ode(&self) -> super::ode::OdeOptions {
        let o = &self.options;
        super::ode::OdeOptions {
            rtol: o.rtol,
            atol: o.atol,
            h_init: o.h_init,
            h_max: o.h_max,
            h_min: o.h_min,
        }
    }
}
