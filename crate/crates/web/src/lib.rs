//! Browser bindings for three interactive views: the differential cross
//! section, the log-determinant staircase, and the confined spectrum.
//!
//! Each view has a plain Rust function returning `Result<_, String>`, which
//! the native tests exercise, and a thin `#[wasm_bindgen]` wrapper.

use ab_phase::fredholm::{level_counting, log_fredholm_sum, FredholmConfig};
use ab_phase::radial::{richardson_spectrum, RadialGrid};
use ab_phase::scattering::{cross_section_table, symmetric_angles, AbelOptions, DEFAULT_FORWARD_CONE};
use ab_phase::{phase_shift_analytic, spectrum_analytic, FluxChannel};
use wasm_bindgen::prelude::*;

/// Sampled curve with an optional second series on the same abscissae.
#[wasm_bindgen]
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    xs: Vec<f64>,
    ys: Vec<f64>,
    extra: Vec<f64>,
    reference: f64,
}

#[wasm_bindgen]
impl Curve {
    #[wasm_bindgen(getter)]
    pub fn xs(&self) -> Vec<f64> {
        self.xs.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn ys(&self) -> Vec<f64> {
        self.ys.clone()
    }

    /// Uncertainty, integer staircase or numeric levels, depending on the view.
    #[wasm_bindgen(getter)]
    pub fn extra(&self) -> Vec<f64> {
        self.extra.clone()
    }

    /// A scalar drawn as a guide line (e.g. the analytic phase over pi).
    #[wasm_bindgen(getter)]
    pub fn reference(&self) -> f64 {
        self.reference
    }
}

const MAX_ANGLES: usize = 400;
const MAX_SAMPLES: usize = 1000;
const MAX_TERMS: f64 = 2e6;

/// `dcs(phi)` on a mirror-symmetric grid; `extra` holds the uncertainties.
pub fn cross_section_curve(alpha: f64, k: f64, per_side: usize) -> Result<Curve, String> {
    if per_side == 0 || per_side > MAX_ANGLES {
        return Err(format!("angles per side must lie in 1..={MAX_ANGLES}"));
    }
    let angles = symmetric_angles(DEFAULT_FORWARD_CONE, per_side);
    let table = cross_section_table(alpha, k, &angles, &AbelOptions::default()).map_err(|e| e.to_string())?;
    Ok(Curve {
        xs: table.rows.iter().map(|r| r.angle).collect(),
        ys: table.rows.iter().map(|r| r.dcs).collect(),
        extra: table.rows.iter().map(|r| r.dcs_uncertainty).collect(),
        reference: 0.0,
    })
}

/// `-Im log D / pi` against energy at fixed `omega` and `eps = ratio * omega`.
/// `extra` is the integer count difference; `reference` is `delta / pi`.
pub fn staircase_curve(m: i64, alpha: f64, omega: f64, ratio: f64, e_max: f64, samples: usize) -> Result<Curve, String> {
    if samples < 2 || samples > MAX_SAMPLES {
        return Err(format!("samples must lie in 2..={MAX_SAMPLES}"));
    }
    if !(omega > 0.0 && e_max > 0.0 && ratio > 0.0) {
        return Err("omega, ratio and the energy range must be positive".into());
    }
    let channel = FluxChannel::new(m, alpha);
    let shift = (channel.nu() - channel.free_order()).abs();
    let needed = (30.0 * e_max / omega).max(5e4 * ratio.max(0.1) * (1.0 + shift)).ceil();
    if needed > MAX_TERMS {
        return Err(format!("this range needs {needed:.0} terms; raise omega or lower the ratio"));
    }
    let n_max = needed as usize;

    let mut xs = Vec::with_capacity(samples);
    let mut ys = Vec::with_capacity(samples);
    let mut extra = Vec::with_capacity(samples);
    for i in 0..samples {
        let energy = e_max * (i + 1) as f64 / samples as f64;
        let run = log_fredholm_sum(&FredholmConfig::new(channel, energy, omega, ratio * omega, n_max))
            .map_err(|e| e.to_string())?;
        let count = level_counting(&channel, energy, omega).map_err(|e| e.to_string())?;
        xs.push(energy);
        ys.push(run.phase / std::f64::consts::PI);
        extra.push(count.difference() as f64);
    }
    Ok(Curve {
        xs,
        ys,
        extra,
        reference: phase_shift_analytic(&channel).value / std::f64::consts::PI,
    })
}

/// Levels `E_n / omega` for `n < levels`: analytic in `ys`, radial solver in `extra`.
pub fn spectrum_curve(m: i64, alpha: f64, levels: usize) -> Result<Curve, String> {
    if levels == 0 || levels > 40 {
        return Err("levels must lie in 1..=40".into());
    }
    let channel = FluxChannel::new(m, alpha);
    let analytic = spectrum_analytic(&channel, 1.0, levels as u32 - 1).map_err(|e| e.to_string())?;
    // A wider box keeps the upper levels clear of the wall.
    let rho_max = 12.0_f64.max(2.0 * (4.0 * levels as f64 + 2.0 + channel.nu()).sqrt() + 6.0);
    let grid = RadialGrid::new(rho_max, 1200).map_err(|e| e.to_string())?;
    let numeric = richardson_spectrum(&channel, &grid, levels).map_err(|e| e.to_string())?;
    Ok(Curve {
        xs: (0..levels).map(|n| n as f64).collect(),
        ys: analytic.reduced_energies(),
        extra: numeric.extrapolated,
        reference: channel.nu(),
    })
}

#[wasm_bindgen(js_name = crossSection)]
pub fn cross_section_js(alpha: f64, k: f64, per_side: usize) -> Result<Curve, JsError> {
    cross_section_curve(alpha, k, per_side).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = staircase)]
pub fn staircase_js(m: i32, alpha: f64, omega: f64, ratio: f64, e_max: f64, samples: usize) -> Result<Curve, JsError> {
    staircase_curve(m as i64, alpha, omega, ratio, e_max, samples).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = spectrum)]
pub fn spectrum_js(m: i32, alpha: f64, levels: usize) -> Result<Curve, JsError> {
    spectrum_curve(m as i64, alpha, levels).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cross_section_is_symmetric_for_half_flux() {
        let c = cross_section_curve(0.5, 1.0, 10).unwrap();
        assert_eq!(c.xs.len(), 19);
        let n = c.ys.len();
        for i in 0..n / 2 {
            assert!((c.ys[i] - c.ys[n - 2 - i]).abs() <= c.extra[i] + c.extra[n - 2 - i]);
        }
        assert!(cross_section_curve(0.5, 1.0, 0).is_err());
        assert!(cross_section_curve(0.5, -1.0, 5).is_err());
    }

    #[test]
    fn sharp_staircase_matches_counting() {
        let c = staircase_curve(0, 0.5, 0.1, 1e-3, 2.0, 37).unwrap();
        for (y, count) in c.ys.iter().zip(&c.extra) {
            assert_eq!(y.round(), *count, "{y}");
        }
        assert_eq!(c.reference, -0.25);
    }

    #[test]
    fn smoothed_staircase_approaches_the_phase() {
        let c = staircase_curve(0, 0.5, 0.005, 10.0, 2.0, 8).unwrap();
        let last = *c.ys.last().unwrap();
        assert!((last - c.reference).abs() < 0.01, "{last}");
    }

    #[test]
    fn staircase_rejects_bad_ranges() {
        assert!(staircase_curve(0, 0.5, 0.0, 1.0, 1.0, 10).is_err());
        assert!(staircase_curve(0, 0.5, 1e-6, 10.0, 10.0, 10).is_err());
        assert!(staircase_curve(0, 0.5, 0.1, 1.0, 1.0, 1).is_err());
    }

    #[test]
    fn numeric_levels_track_the_tower() {
        let c = spectrum_curve(1, 0.25, 8).unwrap();
        for (a, n) in c.ys.iter().zip(&c.extra) {
            assert!((a - n).abs() < 1e-6 * a, "{a} vs {n}");
        }
        assert_eq!(c.ys[0], 2.25);
    }
}
