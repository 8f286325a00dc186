//! Closed-form channel quantities: effective Bessel order, phase shift,
//! Casimir value, lowest-weight branches and the confined spectrum.
//!
//! Everything here is exact arithmetic on `f64` and serves as the reference
//! the numerical routes are checked against.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// One partial wave: integer angular momentum `m` in the presence of a flux
/// parameter `alpha`.
///
/// The effective order `nu = |m + alpha|` is computed on construction and
/// never stored independently of `(m, alpha)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FluxChannel {
    m: i64,
    alpha: f64,
    nu: f64,
}

impl FluxChannel {
    pub fn new(m: i64, alpha: f64) -> Self {
        Self {
            m,
            alpha,
            nu: (m as f64 + alpha).abs(),
        }
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Effective Bessel order `|m + alpha|`.
    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// Order of the flux-free reference channel, `|m|`.
    pub fn free_order(&self) -> f64 {
        (self.m as f64).abs()
    }

    /// `nu == 0`: the two lowest-weight branches coincide at 1/2.
    ///
    /// The upper-branch analysis is applied here as a limit; callers that
    /// report results should surface this flag.
    pub fn is_double_root(&self) -> bool {
        self.nu == 0.0
    }
}

impl fmt::Display for FluxChannel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(m={}, alpha={})", self.m, self.alpha)
    }
}

/// Which route produced a phase shift.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Analytic,
    Fredholm,
    Ode,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Analytic => "analytic",
            Method::Fredholm => "fredholm",
            Method::Ode => "ode",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A phase shift in radians tagged with the route that produced it.
///
/// `Ode` values only determine the phase modulo pi and are stored reduced
/// into `(-pi/2, pi/2]`; the other routes are unreduced.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseShiftRecord {
    pub channel: FluxChannel,
    pub value: f64,
    pub method: Method,
    pub uncertainty: f64,
}

impl PhaseShiftRecord {
    /// Signed distance to `reference`, taken modulo pi for the `Ode` route.
    pub fn deviation_from(&self, reference: f64) -> f64 {
        match self.method {
            Method::Ode => reduce_mod_pi(self.value - reference),
            _ => self.value - reference,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Level {
    pub n: u32,
    pub energy: f64,
}

/// Confined spectrum of one channel, `E_n = omega (2n + 1 + nu)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumTable {
    pub channel: FluxChannel,
    pub omega: f64,
    pub levels: Vec<Level>,
}

impl SpectrumTable {
    /// Energies in units of omega.
    pub fn reduced_energies(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.energy / self.omega).collect()
    }
}

/// Reduce an angle into `(-pi/2, pi/2]`.
pub fn reduce_mod_pi(x: f64) -> f64 {
    let mut r = x - PI * (x / PI).round();
    if r <= -FRAC_PI_2 {
        r += PI;
    } else if r > FRAC_PI_2 {
        r -= PI;
    }
    r
}

pub fn effective_order(channel: &FluxChannel) -> f64 {
    channel.nu()
}

/// `delta_m = -(pi/2) (|m + alpha| - |m|)`, unreduced.
pub fn phase_shift_analytic(channel: &FluxChannel) -> PhaseShiftRecord {
    PhaseShiftRecord {
        channel: *channel,
        value: -FRAC_PI_2 * (channel.nu() - channel.free_order()),
        method: Method::Analytic,
        uncertainty: 0.0,
    }
}

/// Casimir `J3^2 - K1^2 - K2^2 = ((m + alpha)^2 - 1) / 4`.
pub fn casimir_value(channel: &FluxChannel) -> f64 {
    let nu = channel.nu();
    (nu * nu - 1.0) / 4.0
}

/// Both roots of `e0 (e0 - 1) = C`: `(1 + nu)/2` and `(1 - nu)/2`.
pub fn e0_candidates(channel: &FluxChannel) -> (f64, f64) {
    let nu = channel.nu();
    (0.5 * (1.0 + nu), 0.5 * (1.0 - nu))
}

/// The upper branch, the only one with a non-negative derivative with
/// respect to `(m + alpha)^2`.
pub fn e0_select(channel: &FluxChannel) -> f64 {
    e0_candidates(channel).0
}

pub fn spectrum_analytic(channel: &FluxChannel, omega: f64, n_max: u32) -> Result<SpectrumTable> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::InvalidInput(format!(
            "oscillator frequency must be positive and finite, got {omega}"
        )));
    }
    let nu = channel.nu();
    let levels = (0..=n_max)
        .map(|n| Level {
            n,
            energy: omega * (2.0 * n as f64 + 1.0 + nu),
        })
        .collect();
    Ok(SpectrumTable {
        channel: *channel,
        omega,
        levels,
    })
}
