//! Phase shifts, spectra and scattering for a charged particle around a
//! thin solenoid of flux `alpha` (in flux-quantum units).
//!
//! Three independent routes to the per-channel phase shift are provided:
//! the closed form in [`analytic`], the spectral-flow route in
//! [`fredholm`] (a regularized determinant over the confined spectrum), and
//! outward integration of the free radial equation in [`radial`]. The
//! [`o21`] module builds the finite-dimensional discrete-series matrices
//! behind the confined spectrum, and [`scattering`] assembles the
//! amplitude and cross section.

pub mod analytic;
pub mod error;
pub mod fredholm;
pub mod o21;
pub mod ode;
pub mod radial;
pub mod scattering;
pub mod summation;
pub mod tridiag;

pub use analytic::{
    casimir_value, e0_candidates, e0_select, effective_order, phase_shift_analytic, spectrum_analytic, FluxChannel,
    Level, Method, PhaseShiftRecord, SpectrumTable,
};
pub use error::{Error, Result};
pub use fredholm::{extrapolate_omega, level_counting, log_fredholm_sum, FredholmConfig, FredholmRun, OmegaSchedule};
pub use o21::{admissibility_check, algebra_residuals, build_discrete_series, Admissibility, AlgebraResidualReport};
pub use radial::{build_confined_hamiltonian, free_phase_numeric, solve_spectrum, RadialGrid};
pub use scattering::{amplitude_partial_wave, cross_section_table, AbelOptions, AmplitudeSample, CrossSectionTable};
