//! Adaptive embedded Runge–Kutta pair (Dormand–Prince 5(4)) with FSAL,
//! PI-free classical step control, and exact landing on requested output
//! times.

use crate::error::{MuntzError, Result};

#[derive(Debug, Clone, Copy)]
pub struct Rk45Options {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_steps: usize,
}

impl Default for Rk45Options {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-10,
            max_steps: 10_000_000,
        }
    }
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
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
/// 5th-order solution weights (row 7 of A doubles as b, FSAL pair).
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
/// Embedded 4th-order weights.
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrate y' = rhs(t, y) from t0 to t_end, returning the state at every
/// requested output time (each hit exactly by step clipping).
pub fn integrate_rk45(
    rhs: &mut dyn FnMut(f64, &[f64], &mut [f64]),
    t0: f64,
    y0: &[f64],
    t_end: f64,
    output_times: &[f64],
    opts: &Rk45Options,
) -> Result<Vec<(f64, Vec<f64>)>> {
    let dim = y0.len();
    let mut outputs: Vec<f64> = output_times.to_vec();
    outputs.retain(|&t| t > t0 && t <= t_end);
    outputs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    outputs.dedup();

    let mut results: Vec<(f64, Vec<f64>)> = Vec::with_capacity(outputs.len() + 1);
    if output_times.iter().any(|&t| t <= t0) {
        results.push((t0, y0.to_vec()));
    }

    let mut t = t0;
    let mut y = y0.to_vec();
    let mut k: Vec<Vec<f64>> = vec![vec![0.0; dim]; 7];
    rhs(t, &y, &mut k[0]);

    // initial step from the scale of the first derivative
    let d0 = y.iter().fold(0.0_f64, |m, v| m.max(v.abs())).max(1e-6);
    let d1 = k[0].iter().fold(0.0_f64, |m, v| m.max(v.abs())).max(1e-6);
    let mut h = (0.01 * d0 / d1).min((t_end - t0) / 10.0).max(1e-8);

    let mut next_output = 0usize;
    let mut y_stage = vec![0.0; dim];
    let mut y5 = vec![0.0; dim];
    let mut err_vec = vec![0.0; dim];

    for _step in 0..opts.max_steps {
        if t >= t_end && next_output >= outputs.len() {
            return Ok(results);
        }
        let mut clipped = h.min(t_end - t);
        if next_output < outputs.len() {
            clipped = clipped.min(outputs[next_output] - t);
        }
        let h_try = clipped.max(0.0);
        if h_try < 16.0 * f64::EPSILON * t.abs().max(1.0) {
            return Err(MuntzError::StepSizeCollapse { t });
        }

        // stages 2..7 (k[0] comes from FSAL)
        for s in 1..7 {
            for i in 0..dim {
                let mut acc = 0.0;
                for (j, kj) in k.iter().enumerate().take(s) {
                    let a = A[s][j];
                    if a != 0.0 {
                        acc += a * kj[i];
                    }
                }
                y_stage[i] = y[i] + h_try * acc;
            }
            let (head, tail) = k.split_at_mut(s);
            let _ = head;
            rhs(t + C[s] * h_try, &y_stage, &mut tail[0]);
        }
        for i in 0..dim {
            let mut acc5 = 0.0;
            let mut acc_err = 0.0;
            for s in 0..7 {
                if B5[s] != 0.0 {
                    acc5 += B5[s] * k[s][i];
                }
                let d = B5[s] - B4[s];
                if d != 0.0 {
                    acc_err += d * k[s][i];
                }
            }
            y5[i] = y[i] + h_try * acc5;
            err_vec[i] = h_try * acc_err;
        }
        // scaled RMS error
        let mut err = 0.0;
        for i in 0..dim {
            let sc = opts.abs_tol + opts.rel_tol * y[i].abs().max(y5[i].abs());
            let e = err_vec[i] / sc;
            err += e * e;
        }
        err = (err / dim as f64).sqrt();

        if err <= 1.0 {
            t += h_try;
            y.copy_from_slice(&y5);
            k.swap(0, 6); // FSAL: the last stage is the next first stage
            if next_output < outputs.len()
                && (t - outputs[next_output]).abs() <= 4.0 * f64::EPSILON * t.abs().max(1.0)
            {
                results.push((outputs[next_output], y.clone()));
                next_output += 1;
            }
            let factor = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            h = (h_try * factor).max(1e-14);
        } else {
            let factor = (0.9 * err.powf(-0.2)).clamp(0.1, 1.0);
            h = h_try * factor;
            // a rejected stage invalidates FSAL
            rhs(t, &y, &mut k[0]);
        }
    }
    Err(MuntzError::StepSizeCollapse { t })
}
