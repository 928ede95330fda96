//! Dormand–Prince 5(4) with embedded error control.
//!
//! States are flat `f64` slices; complex systems interleave (re, im) pairs.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub initial_step: Option<f64>,
    pub max_step: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            initial_step: None,
            max_step: f64::INFINITY,
            max_steps: 10_000_000,
        }
    }
}

/// Per-run statistics.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OdeStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// difference between the 5th and 4th order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Integrates `dy/dt = rhs(t, y)` from `t0` and returns the state at each of
/// the strictly increasing `outputs` (all ≥ `t0`).
///
/// Steps are clipped to land exactly on the output times, which keeps the
/// samples free of interpolation error.
pub fn integrate<F>(
    mut rhs: F,
    t0: f64,
    y0: &[f64],
    outputs: &[f64],
    opts: OdeOptions,
) -> Result<(Vec<Vec<f64>>, OdeStats)>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    let n = y0.len();
    if outputs.windows(2).any(|w| !(w[0] < w[1])) || outputs.first().is_some_and(|&t| t < t0) {
        return Err(Error::invalid("outputs", "output times must increase from t0"));
    }
    let mut stats = OdeStats::default();
    let mut t = t0;
    let mut y = y0.to_vec();
    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut k5 = vec![0.0; n];
    let mut k6 = vec![0.0; n];
    let mut k7 = vec![0.0; n];
    let mut tmp = vec![0.0; n];
    let mut y_new = vec![0.0; n];

    rhs(t, &y, &mut k1);
    stats.evaluations += 1;

    let mut h = match opts.initial_step {
        Some(h) => h,
        None => initial_step(&y, &k1, opts),
    };
    let mut out = Vec::with_capacity(outputs.len());
    let mut steps = 0usize;

    for &t_target in outputs {
        while t < t_target {
            if steps >= opts.max_steps {
                return Err(Error::Ode {
                    t,
                    reason: format!("step limit {} exceeded", opts.max_steps),
                });
            }
            steps += 1;
            let remaining = t_target - t;
            let mut step = h.min(opts.max_step);
            let mut clipped = false;
            if step >= remaining {
                step = remaining;
                clipped = true;
            }
            if step <= 16.0 * f64::EPSILON * t.abs().max(1.0) {
                return Err(Error::Ode {
                    t,
                    reason: format!("step size underflow (h = {step:e})"),
                });
            }

            for i in 0..n {
                tmp[i] = y[i] + step * A21 * k1[i];
            }
            rhs(t + C2 * step, &tmp, &mut k2);
            for i in 0..n {
                tmp[i] = y[i] + step * (A31 * k1[i] + A32 * k2[i]);
            }
            rhs(t + C3 * step, &tmp, &mut k3);
            for i in 0..n {
                tmp[i] = y[i] + step * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
            }
            rhs(t + C4 * step, &tmp, &mut k4);
            for i in 0..n {
                tmp[i] = y[i] + step * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
            }
            rhs(t + C5 * step, &tmp, &mut k5);
            for i in 0..n {
                tmp[i] = y[i]
                    + step * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
            }
            rhs(t + step, &tmp, &mut k6);
            for i in 0..n {
                y_new[i] = y[i]
                    + step * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i] + A75 * k5[i] + A76 * k6[i]);
            }
            rhs(t + step, &y_new, &mut k7);
            stats.evaluations += 6;

            let mut err = 0.0f64;
            for i in 0..n {
                let e = step
                    * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
                let scale = opts.abs_tol + opts.rel_tol * y[i].abs().max(y_new[i].abs());
                let r = e / scale;
                err += r * r;
            }
            let err = (err / n.max(1) as f64).sqrt();
            if !err.is_finite() {
                return Err(Error::Ode {
                    t,
                    reason: "non-finite error estimate".into(),
                });
            }

            if err <= 1.0 {
                t = if clipped { t_target } else { t + step };
                std::mem::swap(&mut y, &mut y_new);
                std::mem::swap(&mut k1, &mut k7);
                stats.accepted += 1;
                let factor = if err == 0.0 {
                    5.0
                } else {
                    (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
                };
                // a clipped step says nothing about the natural step size
                if !clipped || step * factor > h {
                    h = step * factor;
                }
            } else {
                stats.rejected += 1;
                h = step * (0.9 * err.powf(-0.2)).clamp(0.1, 1.0);
            }
        }
        out.push(y.clone());
    }
    Ok((out, stats))
}

fn initial_step(y: &[f64], dy: &[f64], opts: OdeOptions) -> f64 {
    let mut d0 = 0.0f64;
    let mut d1 = 0.0f64;
    for (yi, fi) in y.iter().zip(dy) {
        let sc = opts.abs_tol + opts.rel_tol * yi.abs();
        d0 += (yi / sc).powi(2);
        d1 += (fi / sc).powi(2);
    }
    let n = y.len().max(1) as f64;
    let (d0, d1) = ((d0 / n).sqrt(), (d1 / n).sqrt());
    let h = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    h.min(opts.max_step)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn exponential_decay() {
        let outs: Vec<f64> = (1..=10).map(|i| i as f64).collect();
        let (ys, stats) = integrate(
            |_, y, dy| dy[0] = -0.3 * y[0],
            0.0,
            &[2.0],
            &outs,
            OdeOptions {
                rel_tol: 1e-11,
                abs_tol: 1e-14,
                ..Default::default()
            },
        )
        .unwrap();
        for (t, y) in outs.iter().zip(&ys) {
            assert_relative_eq!(y[0], 2.0 * (-0.3 * t).exp(), max_relative = 1e-9);
        }
        assert!(stats.accepted > 0);
    }

    #[test]
    fn harmonic_oscillator_conserves_energy() {
        let outs = [50.0];
        let (ys, _) = integrate(
            |_, y, dy| {
                dy[0] = y[1];
                dy[1] = -y[0];
            },
            0.0,
            &[1.0, 0.0],
            &outs,
            OdeOptions {
                rel_tol: 1e-11,
                abs_tol: 1e-13,
                ..Default::default()
            },
        )
        .unwrap();
        assert!((ys[0][0] - 50f64.cos()).abs() < 1e-8);
        assert!((ys[0][0].powi(2) + ys[0][1].powi(2) - 1.0).abs() < 1e-8);
    }

    #[test]
    fn output_at_start_returns_initial_state() {
        let (ys, _) = integrate(|_, _, dy| dy[0] = 1.0, 3.0, &[7.0], &[3.0, 4.0], OdeOptions::default()).unwrap();
        assert_eq!(ys[0][0], 7.0);
        assert_relative_eq!(ys[1][0], 8.0, max_relative = 1e-12);
    }

    #[test]
    fn step_limit_is_reported() {
        let err = integrate(
            |_, y, dy| dy[0] = y[0],
            0.0,
            &[1.0],
            &[10.0],
            OdeOptions {
                max_steps: 3,
                ..Default::default()
            },
        )
        .unwrap_err();
        assert!(matches!(err, Error::Ode { .. }));
        assert!(integrate(|_, _, _| {}, 1.0, &[0.0], &[0.5], OdeOptions::default()).is_err());
    }
}
