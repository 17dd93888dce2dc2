use super::CausalError;

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
/// Fifth-order weights minus the embedded fourth-order weights.
const E: [f64; 7] = [
    35.0 / 384.0 - 5179.0 / 57600.0,
    0.0,
    500.0 / 1113.0 - 7571.0 / 16695.0,
    125.0 / 192.0 - 393.0 / 640.0,
    -2187.0 / 6784.0 + 92097.0 / 339200.0,
    11.0 / 84.0 - 187.0 / 2100.0,
    -1.0 / 40.0,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub h_init: f64,
    pub h_max: f64,
    pub h_min: f64,
}

/// Why the integration stopped before reaching the end point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Stop {
    Reached,
    LeftChart,
    Observer,
}

pub(crate) struct Outcome {
    pub y: Vec<f64>,
    pub stop: Stop,
}

/// Adaptive Dormand–Prince 5(4) from `s0` to `s_end`.
///
/// `f` failing with [`CausalError::OutsideChart`] shrinks the step; once the
/// step underflows there the integration stops with [`Stop::LeftChart`].
/// `valid` can veto an otherwise accepted step. `observe` sees every accepted
/// `(s, y, y')` and returns `false` to stop.
pub(crate) fn integrate<F, V, O>(
    f: F,
    s0: f64,
    y0: &[f64],
    s_end: f64,
    opts: &OdeOptions,
    valid: V,
    mut observe: O,
) -> Result<Outcome, CausalError>
where
    F: Fn(f64, &[f64], &mut [f64]) -> Result<(), CausalError>,
    V: Fn(&[f64]) -> bool,
    O: FnMut(f64, &[f64], &[f64]) -> Result<bool, CausalError>,
{
    let n = y0.len();
    let mut y = y0.to_vec();
    let mut s = s0;
    let mut k: Vec<Vec<f64>> = vec![vec![0.0; n]; 7];
    f(s, &y, &mut k[0])?;
    if !observe(s, &y, &k[0])? {
        return Ok(Outcome {
            y,
            stop: Stop::Observer,
        });
    }
    let mut h = opts.h_init.min(opts.h_max).min(s_end - s);
    let mut tmp = vec![0.0; n];
    let mut y_new = vec![0.0; n];
    while s < s_end {
        h = h.min(s_end - s);
        let mut chart_fail = false;
        for stage in 1..7 {
            for i in 0..n {
                tmp[i] = y[i] + h * (0..stage).map(|j| A[stage][j] * k[j][i]).sum::<f64>();
            }
            let (head, tail) = k.split_at_mut(stage);
            let _ = head;
            match f(s + C[stage] * h, &tmp, &mut tail[0]) {
                Ok(()) => {}
                Err(CausalError::OutsideChart(_)) => {
                    chart_fail = true;
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        if chart_fail {
            h *= 0.25;
            if h < opts.h_min {
                return Ok(Outcome {
                    y,
                    stop: Stop::LeftChart,
                });
            }
            continue;
        }
        y_new.copy_from_slice(&tmp);
        let mut err = 0.0f64;
        for i in 0..n {
            let e = h * (0..7).map(|j| E[j] * k[j][i]).sum::<f64>();
            let sc = opts.atol + opts.rtol * y[i].abs().max(y_new[i].abs());
            err = err.max((e / sc).abs());
        }
        if !err.is_finite() {
            err = f64::INFINITY;
        }
        if err <= 1.0 && valid(&y_new) {
            s += h;
            std::mem::swap(&mut y, &mut y_new);
            k.swap(0, 6);
            if !observe(s, &y, &k[0])? {
                return Ok(Outcome {
                    y,
                    stop: Stop::Observer,
                });
            }
            let grow = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            h = (h * grow).min(opts.h_max);
        } else {
            let shrink = if err.is_finite() && err > 1.0 {
                (0.9 * err.powf(-0.2)).clamp(0.1, 0.5)
            } else {
                0.5
            };
            h *= shrink;
            if h < opts.h_min {
                return Err(CausalError::StepUnderflow(s));
            }
        }
    }
    Ok(Outcome {
        y,
        stop: Stop::Reached,
    })
}
