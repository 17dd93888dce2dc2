//! Independent references for the causal-geometry tests.
#![allow(dead_code)]

/// First zero of the transverse Jacobi field `j'' + K j = 0`, `j(0) = 0`,
/// `j'(0) = 1`, by fixed-step RK4 followed by secant refinement.
pub fn jacobi_first_zero(curvature: f64, step: f64, limit: f64) -> Option<f64> {
    let f = |y: [f64; 2]| [y[1], -curvature * y[0]];
    let rk4 = |y: [f64; 2], h: f64| {
        let k1 = f(y);
        let k2 = f([y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]]);
        let k3 = f([y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]]);
        let k4 = f([y[0] + h * k3[0], y[1] + h * k3[1]]);
        [
            y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        ]
    };
    let mut y = [0.0, 1.0];
    let mut s = 0.0;
    while s < limit {
        let next = rk4(y, step);
        if next[0] <= 0.0 {
            let (mut lo, mut hi) = (0.0, step);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if rk4(y, mid)[0] > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return Some(s + 0.5 * (lo + hi));
        }
        y = next;
        s += step;
    }
    None
}

/// Stereographic coordinate of the unit-sphere point at polar angle `chi`.
pub fn stereographic(chi: f64) -> f64 {
    (chi / 2.0).tan()
}

/// Inverse stereographic projection of `y ∈ ℝ³` onto the unit sphere in ℝ⁴.
pub fn to_sphere(y: [f64; 3]) -> [f64; 4] {
    let r2 = y.iter().map(|c| c * c).sum::<f64>();
    let d = 1.0 + r2;
    [
        2.0 * y[0] / d,
        2.0 * y[1] / d,
        2.0 * y[2] / d,
        (r2 - 1.0) / d,
    ]
}

/// Gram determinant of three vectors of ℝ⁴; zero iff they are dependent.
pub fn gram3(a: [f64; 4], b: [f64; 4], c: [f64; 4]) -> f64 {
    let v = [a, b, c];
    let g: Vec<Vec<f64>> = (0..3)
        .map(|i| {
            (0..3)
                .map(|j| (0..4).map(|k| v[i][k] * v[j][k]).sum())
                .collect()
        })
        .collect();
    g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1])
        - g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0])
        + g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0])
}

/// Arrival time of the future light cone of `q` at the static worldline through `c` in Minkowski space.
pub fn minkowski_arrival(q: [f64; 4], c: [f64; 3]) -> f64 {
    q[0] + ((c[0] - q[1]).powi(2) + (c[1] - q[2]).powi(2) + (c[2] - q[3]).powi(2)).sqrt()
}
