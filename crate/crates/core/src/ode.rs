//! Adaptive Dormand-Prince 5(4) integration of a two-component first-order
//! system, sampled at caller-provided output points.

use crate::error::{Error, Result};

pub type State = [f64; 2];

#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub relative: f64,
    pub absolute: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            relative: 1e-11,
            absolute: 1e-300,
        }
    }
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
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// fifth minus fourth order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn axpy(y: &State, h: f64, terms: &[(f64, &State)]) -> State {
    let mut out = *y;
    for (c, k) in terms {
        out[0] += h * c * k[0];
        out[1] += h * c * k[1];
    }
    out
}

/// Integrate `y' = f(t, y)` from `(t0, y0)` and return the state at each
/// point of the strictly increasing `outputs` (all `> t0`).
pub fn integrate<F>(f: F, t0: f64, y0: State, outputs: &[f64], tol: Tolerance) -> Result<Vec<State>>
where
    F: Fn(f64, &State) -> State,
{
    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, &y);
    let mut h = outputs
        .first()
        .map(|&t1| (t1 - t0) * 1e-3)
        .unwrap_or(0.0);
    let mut out = Vec::with_capacity(outputs.len());
    let max_steps = 50_000_000usize;
    let mut steps = 0usize;

    for &target in outputs {
        if target <= t {
            return Err(Error::InvalidInput(format!(
                "output points must increase strictly past t0; got {target} after {t}"
            )));
        }
        while t < target {
            steps += 1;
            if steps > max_steps {
                return Err(Error::Integration {
                    r: t,
                    reason: "step budget exhausted".into(),
                });
            }
            let last = t + h >= target;
            let step = if last { target - t } else { h };

            let k2 = f(t + C2 * step, &axpy(&y, step, &[(A21, &k1)]));
            let k3 = f(t + C3 * step, &axpy(&y, step, &[(A31, &k1), (A32, &k2)]));
            let k4 = f(t + C4 * step, &axpy(&y, step, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
            let k5 = f(
                t + C5 * step,
                &axpy(&y, step, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
            );
            let k6 = f(
                t + step,
                &axpy(&y, step, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
            );
            let y_new = axpy(&y, step, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
            let k7 = f(t + step, &y_new);

            let mut err = 0.0_f64;
            for i in 0..2 {
                let e = step
                    * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
                let sc = tol.absolute + tol.relative * y[i].abs().max(y_new[i].abs());
                err = err.max((e / sc).abs());
            }
            if !err.is_finite() {
                return Err(Error::Integration {
                    r: t,
                    reason: "non-finite error estimate".into(),
                });
            }

            if err <= 1.0 {
                t = if last { target } else { t + step };
                y = y_new;
                k1 = k7;
            }
            let factor = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            // Only let a truncated final step shrink h, never grow it.
            if !(last && err <= 1.0 && factor > 1.0) {
                h = step * factor;
            }
            if h <= f64::EPSILON * t.abs() {
                return Err(Error::Integration {
                    r: t,
                    reason: "step size underflow".into(),
                });
            }
        }
        out.push(y);
    }
    Ok(out)
}
