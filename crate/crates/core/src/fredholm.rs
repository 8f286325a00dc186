//! Phase shifts from the log-Fredholm determinant of the confined channel.
//!
//! With both towers `E_n = omega (2n + 1 + nu)` (flux on) and
//! `omega (2n + 1 + |m|)` (flux off) known in closed form,
//!
//! ```text
//! log D_m(E + i eps) = sum_n [ Log(E - E_n^flux + i eps) - Log(E - E_n^free + i eps) ]
//! delta_m            = -Im log D_m
//! ```
//!
//! and `delta_m` follows in the double limit `eps, omega -> 0` at fixed
//! `eps/omega`. For `eps >> 2 omega` the level staircase is smoothed and the
//! phase approaches `delta_m` linearly in `omega`; for `eps << 2 omega`
//! `-Im log D / pi` is the integer count difference below `E`.
//!
//! Only the imaginary part is physical; the real part drifts
//! logarithmically with the truncation and is reported for completeness.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::Serialize;

use crate::analytic::{FluxChannel, Method, PhaseShiftRecord};
use crate::error::{Error, Result};
use crate::summation::{ComplexNeumaierSum, NeumaierSum};

pub const DEFAULT_N_MAX: usize = 1_000_000;
pub const DEFAULT_SMOOTHING_RATIO: f64 = 10.0;
/// Required `2 omega n_max / E`.
const TAIL_DOMINANCE: f64 = 50.0;
const TAIL_LIMIT: f64 = 1e-6;

/// Number of levels strictly below `energy` in each tower.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LevelCount {
    pub channel: FluxChannel,
    pub energy: f64,
    pub omega: f64,
    pub count_flux: u64,
    pub count_free: u64,
}

impl LevelCount {
    pub fn difference(&self) -> i64 {
        self.count_flux as i64 - self.count_free as i64
    }
}

fn count_below(energy: f64, omega: f64, order: f64) -> u64 {
    // #{n >= 0 : 2n < E/omega - 1 - order}
    let x = energy / omega - 1.0 - order;
    if x <= 0.0 {
        0
    } else {
        (x / 2.0).ceil() as u64
    }
}

pub fn level_counting(channel: &FluxChannel, energy: f64, omega: f64) -> Result<LevelCount> {
    if !(energy > 0.0 && omega > 0.0) {
        return Err(Error::InvalidInput(format!(
            "energy and omega must be positive, got E={energy}, omega={omega}"
        )));
    }
    Ok(LevelCount {
        channel: *channel,
        energy,
        omega,
        count_flux: count_below(energy, omega, channel.nu()),
        count_free: count_below(energy, omega, channel.free_order()),
    })
}

/// Parameters of one regularized log-determinant evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FredholmConfig {
    pub channel: FluxChannel,
    pub energy: f64,
    pub omega: f64,
    /// Imaginary offset standing in for `+i0`; a negative value evaluates
    /// at `E - i|eps|`.
    pub epsilon: f64,
    pub n_max: usize,
}

impl FredholmConfig {
    pub fn new(channel: FluxChannel, energy: f64, omega: f64, epsilon: f64, n_max: usize) -> Self {
        Self {
            channel,
            energy,
            omega,
            epsilon,
            n_max,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.energy > 0.0 && self.omega > 0.0) || !self.energy.is_finite() || !self.omega.is_finite() {
            return Err(Error::InvalidInput(format!(
                "energy and omega must be positive and finite, got E={}, omega={}",
                self.energy, self.omega
            )));
        }
        if self.epsilon == 0.0 || !self.epsilon.is_finite() {
            return Err(Error::InvalidInput("epsilon must be finite and nonzero".into()));
        }
        if (self.n_max as f64) * 2.0 * self.omega < TAIL_DOMINANCE * self.energy {
            return Err(Error::InvalidInput(format!(
                "n_max = {} too small: need 2 omega n_max >= {TAIL_DOMINANCE} E",
                self.n_max
            )));
        }
        Ok(())
    }
}

/// Configuration and result of one evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FredholmRun {
    pub channel: FluxChannel,
    pub energy: f64,
    pub omega: f64,
    pub epsilon: f64,
    pub n_max: usize,
    /// `|eps| / omega`.
    pub smoothing_ratio: f64,
    pub log_det: Complex64,
    /// `-Im log_det`.
    pub phase: f64,
}

/// Truncated level sum with principal-branch logs and compensated summation.
pub fn log_fredholm_sum(config: &FredholmConfig) -> Result<FredholmRun> {
    config.validate()?;
    let FredholmConfig {
        channel,
        energy,
        omega,
        epsilon,
        n_max,
    } = *config;
    let nu = channel.nu();
    let free = channel.free_order();
    let tail_start = n_max - n_max / 10;

    let mut total = ComplexNeumaierSum::new();
    let mut tail = NeumaierSum::new();
    if nu != free {
        for n in 0..=n_max {
            let base = 2.0 * n as f64 + 1.0;
            let flux = Complex64::new(energy - omega * (base + nu), epsilon).ln();
            let reference = Complex64::new(energy - omega * (base + free), epsilon).ln();
            let term = flux - reference;
            total.add(term);
            if n > tail_start {
                tail.add(term.im);
            }
        }
    }
    let tail = tail.value().abs();
    if tail > TAIL_LIMIT {
        return Err(Error::TruncationTooShort { tail });
    }
    let log_det = total.value();
    Ok(FredholmRun {
        channel,
        energy,
        omega,
        epsilon,
        n_max,
        smoothing_ratio: epsilon.abs() / omega,
        log_det,
        phase: -log_det.im,
    })
}

/// Imaginary part of the small-omega integral form of `log D_m`.
///
/// `Im Log(E - x - c + i0)` is `pi` for `x > E - c` and zero below, so the
/// two integrands differ only on a window of length `omega (nu - |m|)` and
/// `Im log D = (1/2 omega) pi omega (nu - |m|)`.
pub fn integral_limit_phase(channel: &FluxChannel) -> f64 {
    let window = channel.nu() - channel.free_order();
    -FRAC_PI_2 * window
}

/// `(omega, epsilon)` pairs with `omega` strictly decreasing at fixed ratio.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OmegaSchedule {
    pub omegas: Vec<f64>,
    pub ratio: f64,
}

impl OmegaSchedule {
    pub fn new(omegas: Vec<f64>, ratio: f64) -> Result<Self> {
        if omegas.len() < 3 {
            return Err(Error::InvalidInput(format!(
                "omega schedule needs at least 3 entries, got {}",
                omegas.len()
            )));
        }
        if omegas.iter().any(|&w| !(w > 0.0)) || omegas.windows(2).any(|p| p[1] >= p[0]) {
            return Err(Error::InvalidInput("omegas must be positive and strictly decreasing".into()));
        }
        if !(ratio > 0.0) || !ratio.is_finite() {
            return Err(Error::InvalidInput(format!("epsilon/omega must be positive, got {ratio}")));
        }
        Ok(Self { omegas, ratio })
    }

    /// `omega_0, omega_0/2, ...` with `count` entries.
    pub fn halving(omega0: f64, count: usize, ratio: f64) -> Result<Self> {
        Self::new((0..count).map(|i| omega0 / 2f64.powi(i as i32)).collect(), ratio)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.omegas.iter().map(move |&w| (w, self.ratio * w))
    }
}

impl Default for OmegaSchedule {
    fn default() -> Self {
        Self {
            omegas: vec![1e-2, 5e-3, 2.5e-3, 1.25e-3],
            ratio: DEFAULT_SMOOTHING_RATIO,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OmegaExtrapolation {
    pub record: PhaseShiftRecord,
    pub runs: Vec<FredholmRun>,
    /// Coefficient `c1` of `phase(omega) = delta + c1 omega`.
    pub slope: f64,
    /// Intercepts of the fits of degree 2 up to `runs.len() - 1`, used for
    /// the model-error estimate.
    pub higher_intercepts: Vec<f64>,
}

/// Least-squares polynomial fit, returns coefficients lowest order first.
fn polyfit(x: &[f64], y: &[f64], degree: usize) -> Vec<f64> {
    let k = degree + 1;
    let mut a = nalgebra::DMatrix::<f64>::zeros(x.len(), k);
    for (i, &xi) in x.iter().enumerate() {
        for j in 0..k {
            a[(i, j)] = xi.powi(j as i32);
        }
    }
    let b = nalgebra::DVector::from_column_slice(y);
    let svd = a.svd(true, true);
    svd.solve(&b, 1e-300).expect("svd solve").iter().copied().collect()
}

const MONOTONE_TOLERANCE: f64 = 1e-10;

/// Run the schedule and extrapolate `phase(omega)` linearly to `omega = 0`.
///
/// The uncertainty adds the intercept standard error to a model-error
/// estimate built from the higher-degree fits through the same points.
pub fn extrapolate_omega(
    channel: &FluxChannel,
    energy: f64,
    schedule: &OmegaSchedule,
    n_max: usize,
) -> Result<OmegaExtrapolation> {
    let runs = schedule
        .pairs()
        .map(|(omega, eps)| log_fredholm_sum(&FredholmConfig::new(*channel, energy, omega, eps, n_max)))
        .collect::<Result<Vec<_>>>()?;
    let x: Vec<f64> = runs.iter().map(|r| r.omega).collect();
    let y: Vec<f64> = runs.iter().map(|r| r.phase).collect();

    let steps: Vec<f64> = y.windows(2).map(|p| p[1] - p[0]).collect();
    for a in &steps {
        for b in &steps {
            if a * b < 0.0 && a.abs().min(b.abs()) > MONOTONE_TOLERANCE {
                return Err(Error::StaircaseNotSmoothed {
                    jump: a.abs().min(b.abs()),
                });
            }
        }
    }

    let line = polyfit(&x, &y, 1);
    let n = x.len() as f64;
    let residual_ss: f64 = x
        .iter()
        .zip(&y)
        .map(|(xi, yi)| (yi - line[0] - line[1] * xi).powi(2))
        .sum();
    let mean_x = x.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|xi| (xi - mean_x).powi(2)).sum();
    let sigma2 = residual_ss / (n - 2.0);
    let intercept_se = (sigma2 * (1.0 / n + mean_x * mean_x / sxx)).sqrt();
    // The linear intercept's bias is estimated against the interpolating
    // polynomial, and that estimate's own error by the next-lower degree.
    let higher: Vec<f64> = (2..x.len()).map(|d| polyfit(&x, &y, d)[0]).collect();
    let top = *higher.last().expect("at least three runs");
    let below = if higher.len() >= 2 { higher[higher.len() - 2] } else { line[0] };
    let uncertainty = intercept_se + (line[0] - top).abs() + (top - below).abs();

    Ok(OmegaExtrapolation {
        record: PhaseShiftRecord {
            channel: *channel,
            value: line[0],
            method: Method::Fredholm,
            uncertainty,
        },
        runs,
        slope: line[1],
        higher_intercepts: higher,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::phase_shift_analytic;
    use std::f64::consts::{FRAC_PI_4, PI};

    fn ch(m: i64, alpha: f64) -> FluxChannel {
        FluxChannel::new(m, alpha)
    }

    /// Direct enumeration of both towers.
    fn enumerate(energy: f64, omega: f64, order: f64) -> u64 {
        (0..100_000u64)
            .take_while(|&n| omega * (2.0 * n as f64 + 1.0 + order) < energy)
            .count() as u64
    }

    #[test]
    fn counting_examples() {
        let c = level_counting(&ch(0, 0.0), 10.0, 1.0).unwrap();
        assert_eq!((c.count_flux, c.count_free), (5, 5));
        let c = level_counting(&ch(0, 0.5), 10.0, 1.0).unwrap();
        assert_eq!((c.count_flux, c.count_free), (5, 5));
        let c = level_counting(&ch(0, 0.5), 10.2, 1.0).unwrap();
        assert_eq!((c.count_flux, c.count_free), (5, 5));
        let c = level_counting(&ch(0, 0.5), 9.4, 1.0).unwrap();
        assert_eq!((c.count_flux, c.count_free), (4, 5));
        assert_eq!(c.difference(), -1);
        // Strictly below: E on a level does not count it.
        let c = level_counting(&ch(0, 0.0), 9.0, 1.0).unwrap();
        assert_eq!(c.count_free, 4);
        assert!(level_counting(&ch(0, 0.5), -1.0, 1.0).is_err());
    }

    #[test]
    fn counting_matches_enumeration() {
        for &(m, alpha) in &[(0, 0.5), (2, 0.3), (-1, 0.75), (3, -4.2)] {
            for &(e, w) in &[(10.0, 1.0), (3.7, 0.11), (0.9, 0.5), (55.5, 0.37)] {
                let c = level_counting(&ch(m, alpha), e, w).unwrap();
                assert_eq!(c.count_flux, enumerate(e, w, ch(m, alpha).nu()));
                assert_eq!(c.count_free, enumerate(e, w, (m as f64).abs()));
            }
        }
    }

    #[test]
    fn flux_levels_shift_up() {
        for alpha in [0.1, 0.5, 0.9] {
            let c = level_counting(&ch(2, alpha), 17.3, 0.3).unwrap();
            assert!(c.count_flux <= c.count_free);
        }
    }

    #[test]
    fn zero_flux_cancels_exactly() {
        for m in [-3, 0, 4] {
            let run = log_fredholm_sum(&FredholmConfig::new(ch(m, 0.0), 1.0, 1e-3, 1e-2, 100_000)).unwrap();
            assert_eq!(run.log_det, Complex64::new(0.0, 0.0));
            assert_eq!(run.phase, 0.0);
        }
        // nu == |m| with nonzero flux: m = -1, alpha = 2 gives nu = 1.
        let run = log_fredholm_sum(&FredholmConfig::new(ch(-1, 2.0), 1.0, 1e-3, 1e-2, 100_000)).unwrap();
        assert_eq!(run.log_det, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn half_flux_examples() {
        let run = log_fredholm_sum(&FredholmConfig::new(ch(0, 0.5), 1.0, 1e-3, 1e-2, 1_000_000)).unwrap();
        assert!((run.phase + FRAC_PI_4).abs() < 0.01, "{}", run.phase);
        assert_eq!(run.phase, -run.log_det.im);
        let run = log_fredholm_sum(&FredholmConfig::new(ch(-1, 0.5), 1.0, 1e-3, 1e-2, 1_000_000)).unwrap();
        assert!((run.phase - FRAC_PI_4).abs() < 0.01, "{}", run.phase);
    }

    #[test]
    fn matches_high_precision_reference() {
        // Same truncated sums evaluated with 30-digit arithmetic.
        let cases = [
            (ch(0, 0.5), -0.782_896_371_789_768_98),
            (ch(-1, 0.5), 0.782_895_120_665_522_44),
        ];
        for (c, reference) in cases {
            let run = log_fredholm_sum(&FredholmConfig::new(c, 1.0, 1e-3, 1e-2, 1_000_000)).unwrap();
            assert!((run.phase - reference).abs() < 1e-10, "{c}: {} vs {reference}", run.phase);
        }
    }

    #[test]
    fn conjugation_under_epsilon_flip() {
        let c = FredholmConfig::new(ch(1, 0.75), 2.0, 0.01, 0.02, 1_000_000);
        let plus = log_fredholm_sum(&c).unwrap();
        let minus = log_fredholm_sum(&FredholmConfig { epsilon: -c.epsilon, ..c }).unwrap();
        assert_eq!(minus.log_det, plus.log_det.conj());
    }

    #[test]
    fn config_preconditions() {
        let base = FredholmConfig::new(ch(0, 0.5), 1.0, 1e-3, 1e-2, 1_000_000);
        assert!(log_fredholm_sum(&FredholmConfig { n_max: 1000, ..base }).is_err());
        assert!(log_fredholm_sum(&FredholmConfig { epsilon: 0.0, ..base }).is_err());
        assert!(log_fredholm_sum(&FredholmConfig { omega: 0.0, ..base }).is_err());
        assert!(log_fredholm_sum(&FredholmConfig { energy: -1.0, ..base }).is_err());
    }

    #[test]
    fn large_smoothing_trips_truncation_check() {
        // Wide Lorentzians keep the tail heavy at modest n_max.
        let c = FredholmConfig::new(ch(0, 0.5), 1.0, 0.01, 50.0, 2_500);
        assert!(matches!(log_fredholm_sum(&c), Err(Error::TruncationTooShort { .. })));
    }

    #[test]
    fn integral_limit_examples() {
        assert_eq!(integral_limit_phase(&ch(0, 0.5)), -FRAC_PI_4);
        assert_eq!(integral_limit_phase(&ch(0, 0.0)), 0.0);
        assert!((integral_limit_phase(&ch(2, 0.3)) + 0.15 * PI).abs() < 1e-15);
        assert_eq!(integral_limit_phase(&ch(2, 0.3)), phase_shift_analytic(&ch(2, 0.3)).value);
    }

    #[test]
    fn extrapolation_examples() {
        let s = OmegaSchedule::new(vec![1e-2, 5e-3, 2.5e-3], 10.0).unwrap();
        let x = extrapolate_omega(&ch(0, 0.5), 1.0, &s, DEFAULT_N_MAX).unwrap();
        assert!((x.record.value + 0.7854).abs() < 0.005, "{:?}", x.record);
        assert_eq!(x.record.method, Method::Fredholm);

        let x = extrapolate_omega(&ch(0, 0.0), 1.0, &s, DEFAULT_N_MAX).unwrap();
        assert_eq!(x.record.value, 0.0);
        assert_eq!(x.record.uncertainty, 0.0);
        assert!(x.runs.iter().all(|r| r.phase == 0.0));

        let x = extrapolate_omega(&ch(1, 0.75), 1.0, &s, DEFAULT_N_MAX).unwrap();
        assert!((x.record.value + 1.1781).abs() < 0.01, "{:?}", x.record);
    }

    #[test]
    fn uncertainty_covers_the_error() {
        for (m, alpha) in [(0, 0.5), (1, 0.75), (2, 0.3), (3, -0.6)] {
            for energy in [0.5, 2.0] {
                let c = ch(m, alpha);
                let x = extrapolate_omega(&c, energy, &OmegaSchedule::default(), DEFAULT_N_MAX).unwrap();
                let err = (x.record.value - phase_shift_analytic(&c).value).abs();
                assert!(err <= x.record.uncertainty, "{c} E={energy}: {err:e} > {:e}", x.record.uncertainty);
                assert!(x.record.uncertainty < 0.01);
            }
        }
    }

    #[test]
    fn schedule_validation() {
        assert!(OmegaSchedule::new(vec![1e-2, 5e-3], 10.0).is_err());
        assert!(OmegaSchedule::new(vec![1e-2, 5e-3, 5e-3], 10.0).is_err());
        assert!(OmegaSchedule::new(vec![1e-2, 5e-3, 1e-3], 0.0).is_err());
        let s = OmegaSchedule::halving(1e-2, 4, 10.0).unwrap();
        assert_eq!(s.omegas, vec![1e-2, 5e-3, 2.5e-3, 1.25e-3]);
    }

    #[test]
    fn unsmoothed_staircase_is_rejected() {
        // eps << spacing: the phase jumps by multiples of pi between omegas.
        let s = OmegaSchedule::new(vec![1e-2, 7e-3, 4.3e-3, 3.1e-3], 1e-3).unwrap();
        let r = extrapolate_omega(&ch(0, 0.5), 1.0, &s, DEFAULT_N_MAX);
        assert!(matches!(r, Err(Error::StaircaseNotSmoothed { .. })), "{r:?}");
    }
}
