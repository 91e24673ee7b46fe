//! Embedded Dormand-Prince 4(5) integrator for small first-order systems.
//!
//! The integrator steps adaptively under a relative/absolute error target,
//! optionally clamping steps so requested sample abscissae are hit exactly,
//! and supports both integration directions.

use crate::error::{Error, Result};

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
// Fifth-order solution weights (also the last stage row, FSAL).
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// Embedded fourth-order weights.
const B1E: f64 = 5179.0 / 57600.0;
const B3E: f64 = 7571.0 / 16695.0;
const B4E: f64 = 393.0 / 640.0;
const B5E: f64 = -92097.0 / 339200.0;
const B6E: f64 = 187.0 / 2100.0;
const B7E: f64 = 1.0 / 40.0;

/// Error-control settings.
#[derive(Debug, Clone, Copy)]
pub struct StepControl {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for StepControl {
    fn default() -> Self {
        StepControl { rtol: 1e-9, atol: 1e-11, max_steps: 20_000_000 }
    }
}

/// Integration output. `at_samples[i]` is the state at `samples[i]`;
/// `steps` holds every accepted step when requested.
pub struct Solution<const N: usize> {
    pub x_end: f64,
    pub y_end: [f64; N],
    pub at_samples: Vec<[f64; N]>,
    pub steps: Vec<(f64, [f64; N])>,
    pub n_steps: usize,
}

fn err_norm<const N: usize>(err: &[f64; N], y0: &[f64; N], y1: &[f64; N], ctrl: &StepControl) -> f64 {
    let mut acc = 0.0;
    for i in 0..N {
        let scale = ctrl.atol + ctrl.rtol * y0[i].abs().max(y1[i].abs());
        let r = err[i] / scale;
        acc += r * r;
    }
    (acc / N as f64).sqrt()
}

/// Integrate dy/dx = f(x, y) from x0 to x1 (either direction).
///
/// `max_step` bounds |h| as a function of the current state; `samples` must be
/// sorted in the direction of travel and lie within [x0, x1].
pub fn integrate<const N: usize, F, H>(
    f: F,
    max_step: H,
    x0: f64,
    x1: f64,
    y0: [f64; N],
    ctrl: &StepControl,
    samples: Option<&[f64]>,
    record_steps: bool,
) -> Result<Solution<N>>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
    H: Fn(f64, &[f64; N]) -> f64,
{
    let dir = if x1 >= x0 { 1.0 } else { -1.0 };
    let span = (x1 - x0).abs();
    let mut x = x0;
    let mut y = y0;
    let mut k1 = f(x, &y);
    let mut out = Solution {
        x_end: x0,
        y_end: y0,
        at_samples: Vec::with_capacity(samples.map_or(0, |s| s.len())),
        steps: Vec::new(),
        n_steps: 0,
    };
    if record_steps {
        out.steps.push((x, y));
    }

    let mut sample_idx = 0;
    let samples = samples.unwrap_or(&[]);
    // Consume samples coinciding with the start point.
    while sample_idx < samples.len() && (samples[sample_idx] - x) * dir <= 0.0 {
        out.at_samples.push(y);
        sample_idx += 1;
    }
    if span == 0.0 {
        out.x_end = x;
        out.y_end = y;
        return Ok(out);
    }

    let mut h = (span / 100.0).min(max_step(x, &y)).max(span * 1e-12);
    let h_floor = span.max(x0.abs()).max(x1.abs()).max(1.0) * 1e-15;

    while (x1 - x) * dir > 0.0 {
        if out.n_steps >= ctrl.max_steps {
            return Err(Error::StiffnessFailure { x, h: h * dir });
        }
        h = h.min(max_step(x, &y)).min((x1 - x) * dir);
        // Clamp onto the next sample point so it is hit exactly.
        let mut hit_sample = false;
        if sample_idx < samples.len() {
            let to_sample = (samples[sample_idx] - x) * dir;
            if to_sample <= h {
                h = to_sample;
                hit_sample = true;
            }
        }
        if h < h_floor {
            if hit_sample {
                // Degenerate spacing; emit current state.
                out.at_samples.push(y);
                sample_idx += 1;
                continue;
            }
            return Err(Error::StiffnessFailure { x, h: h * dir });
        }
        let hs = h * dir;

        let k2 = f(x + 0.2 * hs, &add(&y, &[(A21, &k1)], hs));
        let k3 = f(x + 0.3 * hs, &add(&y, &[(A31, &k1), (A32, &k2)], hs));
        let k4 = f(x + 0.8 * hs, &add(&y, &[(A41, &k1), (A42, &k2), (A43, &k3)], hs));
        let k5 = f(
            x + 8.0 / 9.0 * hs,
            &add(&y, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)], hs),
        );
        let k6 = f(
            x + hs,
            &add(&y, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)], hs),
        );
        let y5 = add(&y, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)], hs);
        let k7 = f(x + hs, &y5);

        let mut err = [0.0; N];
        for i in 0..N {
            let e = (B1 - B1E) * k1[i] + (B3 - B3E) * k3[i] + (B4 - B4E) * k4[i]
                + (B5 - B5E) * k5[i]
                + (B6 - B6E) * k6[i]
                - B7E * k7[i];
            err[i] = hs * e;
        }
        let en = err_norm(&err, &y, &y5, ctrl);

        if en <= 1.0 || h <= h_floor * 4.0 {
            x += hs;
            y = y5;
            k1 = k7; // FSAL
            out.n_steps += 1;
            if record_steps {
                out.steps.push((x, y));
            }
            if hit_sample {
                out.at_samples.push(y);
                sample_idx += 1;
                // Duplicated sample abscissae resolve to the same state.
                while sample_idx < samples.len() && (samples[sample_idx] - x) * dir <= 0.0 {
                    out.at_samples.push(y);
                    sample_idx += 1;
                }
            }
            let grow = if en > 0.0 { 0.9 * en.powf(-0.2) } else { 5.0 };
            h *= grow.clamp(0.2, 5.0);
        } else {
            h *= (0.9 * en.powf(-0.2)).clamp(0.1, 0.9);
        }
    }

    // Any samples left at the terminal point.
    while sample_idx < samples.len() {
        out.at_samples.push(y);
        sample_idx += 1;
    }
    out.x_end = x;
    out.y_end = y;
    Ok(out)
}

#[inline]
fn add<const N: usize>(y: &[f64; N], terms: &[(f64, &[f64; N])], h: f64) -> [f64; N] {
    let mut out = *y;
    for i in 0..N {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        out[i] += h * acc;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay() {
        let sol = integrate::<1, _, _>(
            |_x, y| [-y[0]],
            |_, _| 10.0,
            0.0,
            5.0,
            [1.0],
            &StepControl::default(),
            None,
            false,
        )
        .unwrap();
        assert!((sol.y_end[0] - (-5.0f64).exp()).abs() < 1e-9);
    }

    #[test]
    fn backward_integration() {
        // y' = cos(x), from pi back to 0.
        let sol = integrate::<1, _, _>(
            |x, _| [x.cos()],
            |_, _| 0.5,
            std::f64::consts::PI,
            0.0,
            [0.0],
            &StepControl::default(),
            None,
            false,
        )
        .unwrap();
        assert!((sol.y_end[0] - 0.0f64.sin() + std::f64::consts::PI.sin()).abs() < 1e-9);
    }

    #[test]
    fn samples_are_hit_exactly() {
        let samples = [0.5, 1.0, 1.5];
        let sol = integrate::<1, _, _>(
            |x, _| [2.0 * x],
            |_, _| 1.0,
            0.0,
            2.0,
            [0.0],
            &StepControl::default(),
            Some(&samples),
            false,
        )
        .unwrap();
        assert_eq!(sol.at_samples.len(), 3);
        for (s, v) in samples.iter().zip(&sol.at_samples) {
            assert!((v[0] - s * s).abs() < 1e-10, "at {s}: {}", v[0]);
        }
    }
}
