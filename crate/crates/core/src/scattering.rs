//! Scattering amplitude and differential cross section assembled from the
//! per-channel phase shifts.
//!
//! ```text
//! f(phi) = (2 pi i k)^(-1/2) sum_m (exp(2 i delta_m) - 1) exp(i m phi)
//! ```
//!
//! `exp(2 i delta_m) - 1` does not decay in `m`, so the series is Abel
//! regularized with `exp(-eta |m|)` and extrapolated to `eta -> 0` by a
//! Richardson table over `eta_0, eta_0/2, ...`. The regularized sum is
//! analytic in `eta` with singularities at `eta = +-i phi`, so the starting
//! `eta_0` is capped at a fraction of the angular distance to the forward
//! direction. The cutoff is raised as needed so `exp(-eta |m|)` is
//! negligible at the smallest `eta`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::analytic::{phase_shift_analytic, FluxChannel};
use crate::error::{Error, Result};
use crate::summation::ComplexNeumaierSum;

/// Half-opening of the excluded forward cone, 5 degrees.
pub const DEFAULT_FORWARD_CONE: f64 = 5.0 * PI / 180.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AbelOptions {
    /// Minimum partial-wave cutoff `|m| <= m_cut`.
    pub m_cut: usize,
    /// Largest starting regulator.
    pub abel_eta: f64,
    /// Number of halvings in the Richardson table.
    pub levels: usize,
    /// `eta_0 <= cone_fraction * min(|phi|, 2 pi - |phi|)`.
    pub cone_fraction: f64,
    /// Cutoff is at least `tail / eta_min`, making `exp(-eta m_cut) <= exp(-tail)`.
    pub tail: f64,
    pub forward_cone: f64,
    /// An angle is flagged non-convergent when its amplitude spread exceeds
    /// `spread_threshold * (1 + |f|)`.
    pub spread_threshold: f64,
}

impl Default for AbelOptions {
    fn default() -> Self {
        Self {
            m_cut: 200,
            abel_eta: 0.1,
            levels: 6,
            cone_fraction: 0.25,
            tail: 32.0,
            forward_cone: DEFAULT_FORWARD_CONE,
            spread_threshold: 1e-3,
        }
    }
}

impl AbelOptions {
    fn validate(&self) -> Result<()> {
        if self.m_cut < 50 {
            return Err(Error::InvalidInput(format!("m_cut must be at least 50, got {}", self.m_cut)));
        }
        if !(self.abel_eta > 0.0 && self.abel_eta <= 0.1) {
            return Err(Error::InvalidInput(format!(
                "abel_eta must lie in (0, 0.1], got {}",
                self.abel_eta
            )));
        }
        if self.levels < 3 {
            return Err(Error::InvalidInput("Richardson table needs at least 3 levels".into()));
        }
        if !(self.forward_cone > 0.0 && self.forward_cone < PI) {
            return Err(Error::InvalidInput("forward cone must lie in (0, pi)".into()));
        }
        Ok(())
    }

    /// Starting regulator and cutoff used at `angle`.
    pub fn schedule_for(&self, angle: f64) -> (f64, usize) {
        let distance = angle.abs().min(2.0 * PI - angle.abs());
        let eta0 = self.abel_eta.min(self.cone_fraction * distance);
        let eta_min = eta0 / 2f64.powi(self.levels as i32 - 1);
        let cutoff = (self.tail / eta_min).ceil() as usize;
        (eta0, cutoff.max(self.m_cut))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AmplitudeSample {
    pub angle: f64,
    /// In units of `1/sqrt(k)`.
    pub amplitude: Complex64,
    /// `|amplitude|^2`.
    pub dcs: f64,
    /// Spread of the Richardson table at this angle.
    pub uncertainty: f64,
    pub dcs_uncertainty: f64,
    pub converged: bool,
    /// Partial-wave cutoff actually used.
    pub cutoff: usize,
}

/// `exp(2 i delta_m)` for one channel; unimodular.
pub fn partial_wave_s_matrix(channel: &FluxChannel) -> Complex64 {
    let (s, c) = (2.0 * phase_shift_analytic(channel).value).sin_cos();
    Complex64::new(c, s)
}

fn prefactor(k: f64) -> Complex64 {
    Complex64::new(0.0, 2.0 * PI * k).sqrt().inv()
}

/// `exp(2 i delta_m) - 1` for `m = -cutoff..=cutoff`.
fn coefficients(alpha: f64, cutoff: usize) -> Vec<Complex64> {
    let c = cutoff as i64;
    (-c..=c)
        .map(|m| partial_wave_s_matrix(&FluxChannel::new(m, alpha)) - 1.0)
        .collect()
}

fn regularized(coeffs: &[Complex64], phases: &[Complex64], cutoff: usize, eta: f64) -> Complex64 {
    let mut acc = ComplexNeumaierSum::new();
    for (i, (c, p)) in coeffs.iter().zip(phases).enumerate() {
        let m = i.abs_diff(cutoff) as f64;
        acc.add(c * p * (-eta * m).exp());
    }
    acc.value()
}

/// One Abel-regularized partial sum at fixed `eta`, without extrapolation.
pub fn abel_regularized_sum(alpha: f64, k: f64, angle: f64, cutoff: usize, eta: f64) -> Complex64 {
    let coeffs = coefficients(alpha, cutoff);
    let c = cutoff as i64;
    let phases: Vec<Complex64> = (-c..=c)
        .map(|m| {
            let (s, co) = (m as f64 * angle).sin_cos();
            Complex64::new(co, s)
        })
        .collect();
    prefactor(k) * regularized(&coeffs, &phases, cutoff, eta)
}

pub fn amplitude_partial_wave(alpha: f64, k: f64, angles: &[f64], opts: &AbelOptions) -> Result<Vec<AmplitudeSample>> {
    opts.validate()?;
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::InvalidInput(format!("wave number must be positive, got {k}")));
    }
    if !alpha.is_finite() {
        return Err(Error::InvalidInput("alpha must be finite".into()));
    }
    for &a in angles {
        if !(a.abs() <= PI) || a.abs() < opts.forward_cone {
            return Err(Error::InvalidInput(format!(
                "angle {a} outside [-pi, pi] minus the forward cone |phi| < {}",
                opts.forward_cone
            )));
        }
    }
    let max_cutoff = angles.iter().map(|&a| opts.schedule_for(a).1).max().unwrap_or(opts.m_cut);
    let all_coeffs = coefficients(alpha, max_cutoff);
    let pre = prefactor(k);

    let samples = angles
        .iter()
        .map(|&angle| {
            let (eta0, cutoff) = opts.schedule_for(angle);
            let offset = max_cutoff - cutoff;
            let coeffs = &all_coeffs[offset..offset + 2 * cutoff + 1];
            let c = cutoff as i64;
            let phases: Vec<Complex64> = (-c..=c)
                .map(|m| {
                    let (s, co) = (m as f64 * angle).sin_cos();
                    Complex64::new(co, s)
                })
                .collect();

            let mut table: Vec<Vec<Complex64>> = vec![(0..opts.levels)
                .map(|j| pre * regularized(coeffs, &phases, cutoff, eta0 / 2f64.powi(j as i32)))
                .collect()];
            for j in 1..opts.levels {
                let factor = 2f64.powi(j as i32);
                let prev = &table[j - 1];
                let next = (0..prev.len() - 1)
                    .map(|i| (prev[i + 1] * factor - prev[i]) / (factor - 1.0))
                    .collect();
                table.push(next);
            }
            let best = table[opts.levels - 1][0];
            let below = &table[opts.levels - 2];
            let spread = (best - below[0]).norm().max((best - below[1]).norm());
            let uncertainty = spread.max(1e-13 * best.norm());
            let magnitude = best.norm();
            AmplitudeSample {
                angle,
                amplitude: best,
                dcs: magnitude * magnitude,
                uncertainty,
                dcs_uncertainty: 2.0 * magnitude * uncertainty + uncertainty * uncertainty,
                converged: uncertainty <= opts.spread_threshold * (1.0 + magnitude),
                cutoff,
            }
        })
        .collect();
    Ok(samples)
}

/// `count` angles evenly spaced on `[cone, pi]` and their mirror images on
/// `[-pi, -cone]`, ascending; `-pi` is dropped as it duplicates `pi`.
pub fn symmetric_angles(cone: f64, count: usize) -> Vec<f64> {
    let positive: Vec<f64> = match count {
        0 => Vec::new(),
        1 => vec![PI],
        _ => (0..count)
            .map(|i| cone + (PI - cone) * i as f64 / (count - 1) as f64)
            .collect(),
    };
    let mut out: Vec<f64> = positive.iter().rev().filter(|&&a| a < PI).map(|a| -a).collect();
    out.extend(positive);
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossSectionTable {
    pub alpha: f64,
    pub k: f64,
    pub rows: Vec<AmplitudeSample>,
}

impl CrossSectionTable {
    pub fn max_dcs(&self) -> f64 {
        self.rows.iter().map(|r| r.dcs).fold(0.0, f64::max)
    }

    pub fn all_converged(&self) -> bool {
        self.rows.iter().all(|r| r.converged)
    }
}

pub fn cross_section_table(alpha: f64, k: f64, angles: &[f64], opts: &AbelOptions) -> Result<CrossSectionTable> {
    Ok(CrossSectionTable {
        alpha,
        k,
        rows: amplitude_partial_wave(alpha, k, angles, opts)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn angles() -> Vec<f64> {
        symmetric_angles(DEFAULT_FORWARD_CONE, 19)
    }

    #[test]
    fn zero_flux_is_null() {
        let t = cross_section_table(0.0, 1.0, &angles(), &AbelOptions::default()).unwrap();
        assert!(t.rows.iter().all(|r| r.amplitude == Complex64::new(0.0, 0.0) && r.dcs == 0.0));
    }

    #[test]
    fn integer_flux_is_null() {
        for alpha in [1.0, 2.0, 3.0, -1.0] {
            let t = cross_section_table(alpha, 1.0, &angles(), &AbelOptions::default()).unwrap();
            assert!(t.max_dcs() <= 1e-6, "alpha={alpha}: {}", t.max_dcs());
        }
    }

    #[test]
    fn s_matrix_is_unimodular() {
        for m in -20..=20 {
            for alpha in [0.0, 0.3, 0.5, 1.7, -2.25] {
                let s = partial_wave_s_matrix(&FluxChannel::new(m, alpha));
                assert!((s.norm() - 1.0).abs() <= 2.0 * f64::EPSILON);
            }
        }
    }

    #[test]
    fn half_flux_is_mirror_symmetric() {
        let t = cross_section_table(0.5, 1.0, &angles(), &AbelOptions::default()).unwrap();
        let n = t.rows.len();
        for i in 0..n / 2 {
            let (a, b) = (&t.rows[i], &t.rows[n - 2 - i]);
            assert!((a.angle + b.angle).abs() < 1e-15);
            let tol = a.dcs_uncertainty + b.dcs_uncertainty;
            assert!((a.dcs - b.dcs).abs() <= tol, "{} vs {} (tol {tol})", a.dcs, b.dcs);
        }
        assert!(t.all_converged());
    }

    #[test]
    fn angle_grid_shape() {
        let a = symmetric_angles(0.1, 5);
        assert_eq!(a.len(), 9);
        assert_eq!(*a.last().unwrap(), PI);
        assert!(a.windows(2).all(|w| w[1] > w[0]));
        assert!(a.iter().all(|x| x.abs() >= 0.1));
    }

    #[test]
    fn rejects_forward_angles_and_bad_options() {
        let o = AbelOptions::default();
        assert!(amplitude_partial_wave(0.5, 1.0, &[0.0], &o).is_err());
        assert!(amplitude_partial_wave(0.5, 1.0, &[0.01], &o).is_err());
        assert!(amplitude_partial_wave(0.5, 1.0, &[4.0], &o).is_err());
        assert!(amplitude_partial_wave(0.5, 0.0, &[1.0], &o).is_err());
        assert!(amplitude_partial_wave(0.5, 1.0, &[1.0], &AbelOptions { m_cut: 10, ..o }).is_err());
        assert!(amplitude_partial_wave(0.5, 1.0, &[1.0], &AbelOptions { abel_eta: 0.2, ..o }).is_err());
    }

    #[test]
    fn schedule_respects_cone_and_tail() {
        let o = AbelOptions::default();
        let (eta0, cutoff) = o.schedule_for(PI);
        assert_eq!(eta0, 0.1);
        assert!((cutoff as f64) * eta0 / 32.0 >= o.tail);
        let (eta0, _) = o.schedule_for(DEFAULT_FORWARD_CONE);
        assert!((eta0 - 0.25 * DEFAULT_FORWARD_CONE).abs() < 1e-15);
    }
}
