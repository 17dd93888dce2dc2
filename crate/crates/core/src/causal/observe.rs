use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::geodesic::{hermite, trace_until, GeodesicSample, TraceOptions};
use super::metric::WarpedProduct;
use super::{CausalError, Point};
use crate::scalar::format_f64;

/// Tubes of coordinate radius `radius` around the static worldlines
/// `t ↦ (t, c)` for `t ∈ [t_min, t_max]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObserverRegion {
    pub centers: Vec<[f64; 3]>,
    pub radius: f64,
    pub t_range: [f64; 2],
}

impl ObserverRegion {
    pub fn contains(&self, x: &Point) -> bool {
        x[0] >= self.t_range[0]
            && x[0] <= self.t_range[1]
            && self
                .centers
                .iter()
                .any(|c| spatial_distance(x, c) <= self.radius)
    }

    fn validate<M: WarpedProduct + ?Sized>(&self, metric: &M) -> Result<(), CausalError> {
        if !(self.radius > 0.0) || !(self.t_range[0] <= self.t_range[1]) {
            return Err(CausalError::BadRegion(
                "radius must be positive and t_range ordered".into(),
            ));
        }
        for c in &self.centers {
            for t in self.t_range {
                let x = [t, c[0], c[1], c[2]];
                if metric.check(&x).is_err() {
                    return Err(CausalError::BadRegion(format!(
                        "worldline point {x:?} is outside the chart"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Directions `n(θ_i, φ_j)` at cell centres of a `polar × azimuth` grid on the
/// unit sphere, in a `κ`-orthonormal frame at the source.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanResolution {
    pub polar: usize,
    pub azimuth: usize,
}

impl FanResolution {
    pub fn count(&self) -> usize {
        self.polar * self.azimuth
    }

    /// Largest angular spacing between neighbouring directions.
    pub fn cell_angle(&self) -> f64 {
        let pi = std::f64::consts::PI;
        (pi / self.polar as f64).max(2.0 * pi / self.azimuth as f64)
    }

    pub fn direction(&self, k: usize) -> [f64; 3] {
        let pi = std::f64::consts::PI;
        let (i, j) = (k / self.azimuth, k % self.azimuth);
        let th = pi * (i as f64 + 0.5) / self.polar as f64;
        let ph = 2.0 * pi * (j as f64 + 0.5) / self.azimuth as f64;
        [th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos()]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservationSample {
    pub worldline: usize,
    pub direction: usize,
    pub arrival: f64,
    pub point: Point,
    /// Coordinate distance from the worldline at closest approach.
    pub distance: f64,
    pub earliest: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservationSet {
    pub source: Point,
    pub region: ObserverRegion,
    pub resolution: FanResolution,
    pub samples: Vec<ObservationSample>,
}

impl ObservationSet {
    pub fn earliest(&self) -> impl Iterator<Item = &ObservationSample> {
        self.samples.iter().filter(|s| s.earliest)
    }

    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("worldline,direction,nx,ny,nz,arrival,t,x,y,z,distance,earliest\n");
        for s in &self.samples {
            let n = self.resolution.direction(s.direction);
            let fields: Vec<String> = n
                .iter()
                .chain(std::iter::once(&s.arrival))
                .chain(s.point.iter())
                .chain(std::iter::once(&s.distance))
                .map(|v| format_f64(*v))
                .collect();
            out.push_str(&format!(
                "{},{},{},{}\n",
                s.worldline,
                s.direction,
                fields.join(","),
                u8::from(s.earliest)
            ));
        }
        out
    }
}

fn spatial_distance(x: &Point, c: &[f64; 3]) -> f64 {
    ((x[1] - c[0]).powi(2) + (x[2] - c[1]).powi(2) + (x[3] - c[2]).powi(2)).sqrt()
}

/// `κ`-orthonormal basis at `x` by Gram–Schmidt on the coordinate basis.
fn spatial_frame<M: WarpedProduct + ?Sized>(metric: &M, x: &Point) -> [[f64; 3]; 3] {
    let k = metric.spatial(x);
    let dot = |a: &[f64; 3], b: &[f64; 3]| -> f64 {
        (0..3)
            .map(|i| (0..3).map(|j| k[i][j] * a[i] * b[j]).sum::<f64>())
            .sum()
    };
    let mut e = [[0.0; 3]; 3];
    for i in 0..3 {
        let mut v = [0.0; 3];
        v[i] = 1.0;
        for j in 0..i {
            let p = dot(&v, &e[j]);
            for c in 0..3 {
                v[c] -= p * e[j][c];
            }
        }
        let n = dot(&v, &v).sqrt();
        e[i] = v.map(|c| c / n);
    }
    e
}

const SUBDIVISIONS: usize = 32;

/// Local minima of `|y(s) − c|` along the Hermite interpolant of one segment,
/// as `(u, distance², point)`.
fn segment_minima(a: &GeodesicSample, b: &GeodesicSample, c: &[f64; 3]) -> Vec<(f64, Point)> {
    let slope = |u: f64| {
        let (x, v) = hermite(a, b, u);
        (0..3).map(|i| (x[i + 1] - c[i]) * v[i + 1]).sum::<f64>()
    };
    let mut found = Vec::new();
    let mut prev = slope(0.0);
    for k in 1..=SUBDIVISIONS {
        let (u0, u1) = (
            (k - 1) as f64 / SUBDIVISIONS as f64,
            k as f64 / SUBDIVISIONS as f64,
        );
        let cur = slope(u1);
        if prev < 0.0 && cur >= 0.0 {
            let (mut lo, mut hi) = (u0, u1);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if slope(mid) < 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let u = 0.5 * (lo + hi);
            found.push((a.s + u * (b.s - a.s), hermite(a, b, u).0));
        }
        prev = cur;
    }
    found
}

/// Samples of `𝒫_V(q) = 𝓛⁺_q ∩ V`: for each fan direction and each worldline,
/// every closest approach of the null geodesic that lies inside the tube.
/// Earliest flags are set as by [`earliest_observation_set`].
pub fn observation_set<M: WarpedProduct + ?Sized>(
    metric: &M,
    q: Point,
    region: &ObserverRegion,
    resolution: FanResolution,
    opts: &TraceOptions,
) -> Result<ObservationSet, CausalError> {
    metric.check(&q)?;
    region.validate(metric)?;
    if resolution.count() == 0 {
        return Err(CausalError::BadRegion("empty direction fan".into()));
    }
    let frame = spatial_frame(metric, &q);
    let lapse = metric.lapse(&q).sqrt();
    let t_stop = region.t_range[1] + region.radius;
    let horizon = 1e3 * (t_stop - q[0]).abs().max(1.0);
    let per_direction: Vec<Result<Vec<ObservationSample>, CausalError>> = (0..resolution.count())
        .into_par_iter()
        .map(|d| {
            let mut out = Vec::new();
            if q[0] > t_stop {
                return Ok(out);
            }
            let n = resolution.direction(d);
            let mut theta = [1.0 / lapse, 0.0, 0.0, 0.0];
            for (i, e) in frame.iter().enumerate() {
                for c in 0..3 {
                    theta[c + 1] += n[i] * e[c];
                }
            }
            let curve = trace_until(metric, q, theta, horizon, opts, |s| s.x[0] > t_stop)?;
            for pair in curve.samples.windows(2) {
                for (w, c) in region.centers.iter().enumerate() {
                    for (arrival, point) in segment_minima(&pair[0], &pair[1], c) {
                        let distance = spatial_distance(&point, c);
                        if distance < region.radius
                            && point[0] >= region.t_range[0]
                            && point[0] <= region.t_range[1]
                        {
                            out.push(ObservationSample {
                                worldline: w,
                                direction: d,
                                arrival,
                                point,
                                distance,
                                earliest: false,
                            });
                        }
                    }
                }
            }
            Ok(out)
        })
        .collect();
    let mut samples = Vec::new();
    for r in per_direction {
        samples.extend(r?);
    }
    samples.sort_by(|a, b| {
        a.worldline
            .cmp(&b.worldline)
            .then(a.direction.cmp(&b.direction))
            .then(a.arrival.total_cmp(&b.arrival))
    });
    mark_earliest(&mut samples);
    Ok(ObservationSet {
        source: q,
        region: region.clone(),
        resolution,
        samples,
    })
}

fn mark_earliest(samples: &mut [ObservationSample]) {
    let mut best: std::collections::BTreeMap<usize, usize> = Default::default();
    for (k, s) in samples.iter().enumerate() {
        let e = best.entry(s.worldline).or_insert(k);
        let b = &samples[*e];
        if s.point[0] < b.point[0] || (s.point[0] == b.point[0] && s.direction < b.direction) {
            *e = k;
        }
    }
    for s in samples.iter_mut() {
        s.earliest = false;
    }
    for k in best.into_values() {
        samples[k].earliest = true;
    }
}

/// `ℰ_V(q)`: per worldline, only the sample with the smallest time coordinate.
/// Along a static worldline later points are reached from earlier ones by a
/// future-pointing time-like path inside `V`.
pub fn earliest_observation_set(obs: &ObservationSet) -> ObservationSet {
    let mut samples = obs.samples.clone();
    mark_earliest(&mut samples);
    samples.retain(|s| s.earliest);
    ObservationSet {
        samples,
        ..obs.clone()
    }
}

/// Hausdorff distance between the earliest points of two sets, in coordinates.
/// Infinite when exactly one of them is empty.
pub fn hausdorff_distance(a: &ObservationSet, b: &ObservationSet) -> f64 {
    let pa: Vec<Point> = a.earliest().map(|s| s.point).collect();
    let pb: Vec<Point> = b.earliest().map(|s| s.point).collect();
    match (pa.is_empty(), pb.is_empty()) {
        (true, true) => return 0.0,
        (true, false) | (false, true) => return f64::INFINITY,
        _ => {}
    }
    let d = |x: &Point, y: &Point| {
        x.iter()
            .zip(y)
            .map(|(u, v)| (u - v).powi(2))
            .sum::<f64>()
            .sqrt()
    };
    let directed = |p: &[Point], q: &[Point]| {
        p.iter()
            .map(|x| q.iter().map(|y| d(x, y)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    directed(&pa, &pb).max(directed(&pb, &pa))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fan_directions_are_unit() {
        let r = FanResolution {
            polar: 7,
            azimuth: 12,
        };
        for k in 0..r.count() {
            let n = r.direction(k);
            assert!((n.iter().map(|c| c * c).sum::<f64>() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn closest_approach_on_a_line() {
        let a = GeodesicSample {
            s: 0.0,
            x: [0.0, -1.0, 0.5, 0.0],
            v: [1.0, 1.0, 0.0, 0.0],
        };
        let b = GeodesicSample {
            s: 2.0,
            x: [2.0, 1.0, 0.5, 0.0],
            v: [1.0, 1.0, 0.0, 0.0],
        };
        let m = segment_minima(&a, &b, &[0.2, 0.0, 0.0]);
        assert_eq!(m.len(), 1);
        assert!((m[0].0 - 1.2).abs() < 1e-12 && (m[0].1[1] - 0.2).abs() < 1e-12);
    }
}
