//! Free-scattering phase from outward integration of the flux-on radial
//! equation `f'' + f'/r + (k^2 - nu^2/r^2) f = 0`.
//!
//! The solution is started regular at the origin and fitted in the tail to
//! `M(kr) cos(theta(kr) + delta)`, where `theta` is the flux-free reference
//! phase `kr - |m| pi/2 - pi/4` plus the order-`nu` large-argument
//! corrections of the Bessel phase function, and `M` the matching modulus.
//! Only `delta mod pi` is observable this way.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use crate::analytic::{reduce_mod_pi, FluxChannel, Method, PhaseShiftRecord};
use crate::error::{Error, Result};
use crate::ode::{integrate, Tolerance};

#[derive(Debug, Clone, Copy)]
pub struct FreePhaseOptions {
    pub tolerance: Tolerance,
    /// Fit samples per wavelength in the tail window.
    pub samples_per_wavelength: usize,
    /// Largest acceptable relative fit residual.
    pub residual_threshold: f64,
}

impl Default for FreePhaseOptions {
    fn default() -> Self {
        Self {
            tolerance: Tolerance::default(),
            samples_per_wavelength: 20,
            residual_threshold: 1e-3,
        }
    }
}

/// Largest order the renormalized integration handles without overflow.
const MAX_ORDER: f64 = 200.0;

/// Large-`x` phase correction `theta_nu(x) - x + (nu/2 + 1/4) pi`.
fn phase_correction(nu: f64, x: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let z = 4.0 * x;
    (mu - 1.0) / (2.0 * z)
        + (mu - 1.0) * (mu - 25.0) / (6.0 * z.powi(3))
        + (mu - 1.0) * (mu * mu - 114.0 * mu + 1073.0) / (5.0 * z.powi(5))
        + (mu - 1.0) * (5.0 * mu.powi(3) - 1535.0 * mu * mu + 54703.0 * mu - 375733.0) / (14.0 * z.powi(7))
}

/// Large-`x` modulus `sqrt(J^2 + Y^2)` up to the constant `sqrt(2/pi)`.
fn modulus(nu: f64, x: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let z = 2.0 * x;
    let series = 1.0
        + (mu - 1.0) / (2.0 * z * z)
        + 3.0 * (mu - 1.0) * (mu - 9.0) / (8.0 * z.powi(4))
        + 15.0 * (mu - 1.0) * (mu - 9.0) * (mu - 25.0) / (48.0 * z.powi(6));
    (series / x).sqrt()
}

pub fn free_phase_numeric(channel: &FluxChannel, k: f64, r_max: f64) -> Result<PhaseShiftRecord> {
    free_phase_numeric_with(channel, k, r_max, &FreePhaseOptions::default())
}

pub fn free_phase_numeric_with(
    channel: &FluxChannel,
    k: f64,
    r_max: f64,
    opts: &FreePhaseOptions,
) -> Result<PhaseShiftRecord> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::InvalidInput(format!("wave number must be positive, got {k}")));
    }
    if !(k * r_max >= 200.0) {
        return Err(Error::InvalidInput(format!(
            "k r_max = {} is below 200; the asymptotic fit needs the deep asymptotic regime",
            k * r_max
        )));
    }
    let nu = channel.nu();
    if nu > MAX_ORDER {
        return Err(Error::InvalidInput(format!("order {nu} exceeds {MAX_ORDER}")));
    }

    // Regular start f = r^nu (1 - (kr)^2 / (4(nu+1))), rescaled to f(r0) = 1.
    let r0 = 1e-6 / k;
    let series = 1.0 - (k * r0).powi(2) / (4.0 * (nu + 1.0));
    let slope = nu / r0 - k * k * r0 / (2.0 * (nu + 1.0) * series);
    let rhs = |r: f64, y: &[f64; 2]| [y[1], -y[1] / r - (k * k - nu * nu / (r * r)) * y[0]];

    // March to the window start in doubling segments, renormalizing so the
    // r^nu growth cannot overflow.
    let window_start = 0.75 * r_max;
    let mut r = r0;
    let mut y = [1.0, slope];
    while r < window_start {
        let next = (2.0 * r).min(window_start);
        y = integrate(rhs, r, y, &[next], opts.tolerance)?[0];
        let scale = y[0].abs().max(y[1].abs() * next);
        if scale > 0.0 {
            y = [y[0] / scale, y[1] / scale];
        }
        r = next;
    }

    let wavelength = 2.0 * PI / k;
    let samples = ((r_max - window_start) / wavelength * opts.samples_per_wavelength as f64)
        .ceil()
        .max(200.0) as usize;
    let step = (r_max - window_start) / samples as f64;
    let points: Vec<f64> = (1..=samples).map(|i| window_start + i as f64 * step).collect();
    let states = integrate(rhs, window_start, y, &points, opts.tolerance)?;

    // Linear least squares f = a C + b S.
    let free = channel.free_order();
    let (mut cc, mut cs, mut ss, mut fc, mut fs, mut ff) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    let mut basis = Vec::with_capacity(samples);
    for (&r, s) in points.iter().zip(&states) {
        let x = k * r;
        let theta = x - free * FRAC_PI_2 - FRAC_PI_4 + phase_correction(nu, x);
        let m = modulus(nu, x);
        let (c, sn) = (m * theta.cos(), m * theta.sin());
        let f = s[0];
        cc += c * c;
        cs += c * sn;
        ss += sn * sn;
        fc += f * c;
        fs += f * sn;
        ff += f * f;
        basis.push((c, sn, f));
    }
    let det = cc * ss - cs * cs;
    let a = (fc * ss - fs * cs) / det;
    let b = (fs * cc - fc * cs) / det;
    let resid: f64 = basis.iter().map(|(c, s, f)| (f - a * c - b * s).powi(2)).sum();
    let relative = (resid / ff).sqrt();
    if !relative.is_finite() || relative > opts.residual_threshold {
        return Err(Error::FitResidual {
            residual: relative,
            threshold: opts.residual_threshold,
        });
    }

    let delta = (-b).atan2(a);
    Ok(PhaseShiftRecord {
        channel: *channel,
        value: reduce_mod_pi(delta),
        method: Method::Ode,
        uncertainty: relative,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::phase_shift_analytic;

    #[test]
    fn zero_flux_gives_zero() {
        for k in [0.5, 1.0, 3.0] {
            let rec = free_phase_numeric(&FluxChannel::new(0, 0.0), k, 250.0 / k).unwrap();
            assert!(rec.value.abs() < 1e-6, "k={k}: {}", rec.value);
            assert_eq!(rec.method, Method::Ode);
        }
    }

    #[test]
    fn half_flux_s_wave() {
        let c = FluxChannel::new(0, 0.5);
        let rec = free_phase_numeric(&c, 1.0, 200.0).unwrap();
        assert!((rec.value + FRAC_PI_4).abs() < 1e-4, "{}", rec.value);
    }

    #[test]
    fn even_flux_reduces_to_zero() {
        let c = FluxChannel::new(0, 2.0);
        assert!((phase_shift_analytic(&c).value + PI).abs() < 1e-15);
        let rec = free_phase_numeric(&c, 1.0, 200.0).unwrap();
        assert!(rec.value.abs() < 1e-4, "{}", rec.value);
        assert!(rec.deviation_from(-PI).abs() < 1e-4);
    }

    #[test]
    fn value_lies_in_reduced_range() {
        for alpha in [0.9, 1.1, 2.6] {
            let rec = free_phase_numeric(&FluxChannel::new(-2, alpha), 2.0, 120.0).unwrap();
            assert!(rec.value > -FRAC_PI_2 && rec.value <= FRAC_PI_2);
        }
    }

    #[test]
    fn rejects_shallow_asymptotics() {
        assert!(free_phase_numeric(&FluxChannel::new(0, 0.5), 1.0, 50.0).is_err());
        assert!(free_phase_numeric(&FluxChannel::new(0, 0.5), 0.0, 500.0).is_err());
    }

    #[test]
    fn tight_residual_threshold_trips() {
        let opts = FreePhaseOptions {
            residual_threshold: 1e-16,
            ..FreePhaseOptions::default()
        };
        let r = free_phase_numeric_with(&FluxChannel::new(0, 0.5), 1.0, 200.0, &opts);
        assert!(matches!(r, Err(Error::FitResidual { .. })));
    }
}
