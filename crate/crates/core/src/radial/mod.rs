//! Finite-difference verification of the confined spectrum.
//!
//! The dimensionless radial problem for one channel is
//!
//! ```text
//! -(1/rho) (rho f')' + (nu^2 / rho^2) f + rho^2 f = lambda f,   lambda = 2E/omega
//! ```
//!
//! Two symmetric tridiagonal discretizations are provided:
//!
//! * [`Discretization::RegularFactor`] (cell-centred grid): writes
//!   `f = rho^nu g`, so `g` is smooth and even, and discretizes
//!   `-(1/w)(w g')' + rho^2 g` with weight `w = rho^(2 nu + 1)` by finite
//!   volumes with exact cell moments. Second order for every `nu >= 0`.
//! * [`Discretization::LiouvilleNormalForm`] (vertex grid): the
//!   `u = sqrt(rho) f` form `-u'' + ((nu^2 - 1/4)/rho^2 + rho^2) u` with a
//!   three-point Laplacian. Second order only for `nu >= 1/2`; the
//!   `rho^(nu + 1/2)` behaviour at the origin degrades it to `h^(2 nu)` below
//!   that, and to logarithmic convergence at `nu = 0`.

mod free;

pub use free::{free_phase_numeric, free_phase_numeric_with, FreePhaseOptions};

use serde::Serialize;

use crate::analytic::FluxChannel;
use crate::error::{Error, Result};
use crate::tridiag::SymTridiagonal;

pub const DEFAULT_RHO_MAX: f64 = 12.0;
pub const DEFAULT_NUM_POINTS: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Centering {
    /// `rho_j = j h`, `j = 1..N`, `h = rho_max / (N + 1)`.
    Vertex,
    /// `rho_j = (j - 1/2) h`, `j = 1..N`, `h = rho_max / N`.
    Cell,
}

/// Uniform grid on `(0, rho_max)`; both ends are Dirichlet boundaries and
/// neither is a node.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadialGrid {
    rho_max: f64,
    num_points: usize,
    centering: Centering,
}

impl RadialGrid {
    /// Cell-centred grid, used by the default discretization.
    pub fn new(rho_max: f64, num_points: usize) -> Result<Self> {
        Self::with_centering(rho_max, num_points, Centering::Cell)
    }

    pub fn vertex(rho_max: f64, num_points: usize) -> Result<Self> {
        Self::with_centering(rho_max, num_points, Centering::Vertex)
    }

    pub fn with_centering(rho_max: f64, num_points: usize, centering: Centering) -> Result<Self> {
        if !(rho_max > 0.0) || !rho_max.is_finite() {
            return Err(Error::InvalidInput(format!("rho_max must be positive, got {rho_max}")));
        }
        if num_points < 16 {
            return Err(Error::InvalidInput(format!(
                "radial grid needs at least 16 points, got {num_points}"
            )));
        }
        Ok(Self {
            rho_max,
            num_points,
            centering,
        })
    }

    pub fn rho_max(&self) -> f64 {
        self.rho_max
    }

    pub fn num_points(&self) -> usize {
        self.num_points
    }

    pub fn centering(&self) -> Centering {
        self.centering
    }

    pub fn spacing(&self) -> f64 {
        match self.centering {
            Centering::Vertex => self.rho_max / (self.num_points + 1) as f64,
            Centering::Cell => self.rho_max / self.num_points as f64,
        }
    }

    /// Node `i` (0-based).
    pub fn node(&self, i: usize) -> f64 {
        let h = self.spacing();
        match self.centering {
            Centering::Vertex => (i + 1) as f64 * h,
            Centering::Cell => (i as f64 + 0.5) * h,
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.num_points).map(|i| self.node(i)).collect()
    }

    /// Same box with half the spacing.
    pub fn refined(&self) -> Self {
        let num_points = match self.centering {
            Centering::Vertex => 2 * self.num_points + 1,
            Centering::Cell => 2 * self.num_points,
        };
        Self { num_points, ..*self }
    }
}

impl Default for RadialGrid {
    fn default() -> Self {
        Self {
            rho_max: DEFAULT_RHO_MAX,
            num_points: DEFAULT_NUM_POINTS,
            centering: Centering::Cell,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Discretization {
    RegularFactor,
    LiouvilleNormalForm,
}

impl Discretization {
    pub fn for_centering(c: Centering) -> Self {
        match c {
            Centering::Cell => Discretization::RegularFactor,
            Centering::Vertex => Discretization::LiouvilleNormalForm,
        }
    }
}

/// Symmetric tridiagonal discretization of one confined channel.
///
/// Eigenvalues approximate `2 (2n + 1 + nu)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProblem {
    pub channel: FluxChannel,
    pub grid: RadialGrid,
    pub discretization: Discretization,
    order: f64,
    matrix: SymTridiagonal,
    /// Per-node factor turning `v_j^2` into the `rho^-2` moment.
    inv_rho2: Vec<f64>,
    /// Per-node factor turning `v_j` into `u(rho_j) = sqrt(rho) f`.
    amplitude: Vec<f64>,
}

impl RadialProblem {
    pub fn diagonal(&self) -> &[f64] {
        self.matrix.diagonal()
    }

    pub fn offdiagonal(&self) -> &[f64] {
        self.matrix.offdiagonal()
    }

    pub fn matrix(&self) -> &SymTridiagonal {
        &self.matrix
    }

    /// The Bessel order the matrix was built for.
    pub fn order(&self) -> f64 {
        self.order
    }

    /// `u(rho_j)` at the nodes for a unit eigenvector, normalized so that
    /// `integral u^2 d rho ~ 1`.
    pub fn radial_amplitude(&self, eigenvector: &[f64]) -> Vec<f64> {
        eigenvector.iter().zip(&self.amplitude).map(|(v, a)| v * a).collect()
    }

    fn for_order(channel: FluxChannel, order: f64, grid: RadialGrid) -> Self {
        match Discretization::for_centering(grid.centering) {
            Discretization::LiouvilleNormalForm => liouville(channel, order, grid),
            Discretization::RegularFactor => regular_factor(channel, order, grid),
        }
    }
}

fn liouville(channel: FluxChannel, nu: f64, grid: RadialGrid) -> RadialProblem {
    let h = grid.spacing();
    let n = grid.num_points();
    let centrifugal = nu * nu - 0.25;
    let nodes = grid.nodes();
    let diagonal = nodes
        .iter()
        .map(|&r| 2.0 / (h * h) + centrifugal / (r * r) + r * r)
        .collect();
    let offdiagonal = vec![-1.0 / (h * h); n - 1];
    RadialProblem {
        channel,
        grid,
        discretization: Discretization::LiouvilleNormalForm,
        order: nu,
        matrix: SymTridiagonal::new(diagonal, offdiagonal).expect("shape"),
        inv_rho2: nodes.iter().map(|r| 1.0 / (r * r)).collect(),
        amplitude: vec![1.0 / h.sqrt(); n],
    }
}

/// `ln integral_i^{i+1} t^q dt` for `q > -1`; `+inf` when the moment diverges.
fn ln_cell_moment(q: f64, i: usize) -> f64 {
    let a = q + 1.0;
    if a <= 0.0 {
        return if i == 0 { f64::INFINITY } else { ln_cell_moment_neg(q, i) };
    }
    if i == 0 {
        return -a.ln();
    }
    let lo = i as f64;
    let hi = lo + 1.0;
    a * hi.ln() + (-(a * (lo / hi).ln()).exp_m1()).ln() - a.ln()
}

// q <= -1 away from the origin (not reached for nu > 0, kept total).
fn ln_cell_moment_neg(q: f64, i: usize) -> f64 {
    let lo = i as f64;
    let hi = lo + 1.0;
    let a = q + 1.0;
    if a == 0.0 {
        (hi / lo).ln().ln()
    } else {
        // (lo^a - hi^a)/(-a), both positive
        a * lo.ln() + (-(a * (hi / lo).ln()).exp_m1()).ln() - (-a).ln()
    }
}

fn regular_factor(channel: FluxChannel, nu: f64, grid: RadialGrid) -> RadialProblem {
    let h = grid.spacing();
    let n = grid.num_points();
    let p = 2.0 * nu + 1.0;
    let inv_h2 = 1.0 / (h * h);

    // Normalized (t = rho/h) cell moments of t^p, t^(p+2), t^(p-2).
    let ln_w: Vec<f64> = (0..n).map(|i| ln_cell_moment(p, i)).collect();
    // Face i sits at t = i + 1, between cells i and i + 1.
    let ln_face: Vec<f64> = (0..n).map(|i| p * ((i + 1) as f64).ln()).collect();

    let mut diagonal = Vec::with_capacity(n);
    for i in 0..n {
        let right = if i + 1 < n {
            (ln_face[i] - ln_w[i]).exp()
        } else {
            // Dirichlet at rho_max: the boundary face is half a cell away.
            2.0 * (ln_face[i] - ln_w[i]).exp()
        };
        let left = if i > 0 { (ln_face[i - 1] - ln_w[i]).exp() } else { 0.0 };
        let potential = h * h * (ln_cell_moment(p + 2.0, i) - ln_w[i]).exp();
        diagonal.push((right + left) * inv_h2 + potential);
    }
    let offdiagonal = (0..n - 1)
        .map(|i| -(ln_face[i] - 0.5 * (ln_w[i] + ln_w[i + 1])).exp() * inv_h2)
        .collect();

    let inv_rho2 = (0..n)
        .map(|i| (ln_cell_moment(p - 2.0, i) - ln_w[i]).exp() * inv_h2)
        .collect();
    // u = rho^(nu + 1/2) g and v = sqrt(W) g with W = h^(p+1) exp(ln_w).
    let amplitude = (0..n)
        .map(|i| {
            let r = grid.node(i);
            ((nu + 0.5) * r.ln() - 0.5 * (ln_w[i] + (p + 1.0) * h.ln())).exp()
        })
        .collect();

    RadialProblem {
        channel,
        grid,
        discretization: Discretization::RegularFactor,
        order: nu,
        matrix: SymTridiagonal::new(diagonal, offdiagonal).expect("shape"),
        inv_rho2,
        amplitude,
    }
}

/// Discretize the confined radial Hamiltonian of `channel` on `grid`.
///
/// The scheme follows the grid centering (see [`Discretization`]).
pub fn build_confined_hamiltonian(channel: &FluxChannel, grid: &RadialGrid) -> RadialProblem {
    RadialProblem::for_order(*channel, channel.nu(), *grid)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenResult {
    /// Ascending, in units where they approximate `2E/omega`.
    pub eigenvalues: Vec<f64>,
    /// Unit 2-norm, largest component positive.
    pub eigenvectors: Vec<Vec<f64>>,
}

impl EigenResult {
    /// `E/omega = lambda/2`.
    pub fn reduced_energies(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|l| 0.5 * l).collect()
    }
}

const OUTER_FRACTION: f64 = 0.05;
const OUTER_WEIGHT_LIMIT: f64 = 1e-8;

pub fn solve_spectrum(problem: &RadialProblem, n_levels: usize) -> Result<EigenResult> {
    let n = problem.grid.num_points();
    if n_levels == 0 || n_levels > n {
        return Err(Error::InvalidInput(format!(
            "requested {n_levels} levels from a {n}-point grid"
        )));
    }
    let eigenvalues = problem.matrix.lowest_eigenvalues(n_levels);
    let top = *eigenvalues.last().expect("n_levels >= 1");
    if top <= 0.0 || top.sqrt() >= problem.grid.rho_max() {
        return Err(Error::BoxTooSmall {
            level: n_levels - 1,
            weight: 1.0,
        });
    }
    let eigenvectors: Vec<Vec<f64>> = eigenvalues
        .iter()
        .map(|&l| problem.matrix.eigenvector(l))
        .collect();

    let first_outer = ((1.0 - OUTER_FRACTION) * n as f64).floor() as usize;
    let v = eigenvectors.last().expect("n_levels >= 1");
    let outer: f64 = v[first_outer..].iter().map(|x| x * x).sum();
    if outer > OUTER_WEIGHT_LIMIT {
        return Err(Error::BoxTooSmall {
            level: n_levels - 1,
            weight: outer,
        });
    }
    Ok(EigenResult {
        eigenvalues,
        eigenvectors,
    })
}

/// Reduced energies on `grid` and on the refined grid, plus the
/// `h^2` Richardson combination `(4 fine - coarse)/3`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtrapolatedSpectrum {
    pub coarse: Vec<f64>,
    pub fine: Vec<f64>,
    pub extrapolated: Vec<f64>,
}

pub fn richardson_spectrum(channel: &FluxChannel, grid: &RadialGrid, n_levels: usize) -> Result<ExtrapolatedSpectrum> {
    let coarse = solve_spectrum(&build_confined_hamiltonian(channel, grid), n_levels)?.reduced_energies();
    let fine = solve_spectrum(&build_confined_hamiltonian(channel, &grid.refined()), n_levels)?.reduced_energies();
    let extrapolated = coarse
        .iter()
        .zip(&fine)
        .map(|(c, f)| (4.0 * f - c) / 3.0)
        .collect();
    Ok(ExtrapolatedSpectrum {
        coarse,
        fine,
        extrapolated,
    })
}

/// Discrete `<rho^-2>` of eigenpair `level`, equal to the `<Q^-2>` of the
/// rescaled coordinate. Infinite when `nu = 0` on the cell-centred scheme.
pub fn expectation_inv_rho2(problem: &RadialProblem, result: &EigenResult, level: usize) -> Result<f64> {
    let v = result.eigenvectors.get(level).ok_or_else(|| {
        Error::InvalidInput(format!(
            "level {level} not available ({} eigenpairs)",
            result.eigenvectors.len()
        ))
    })?;
    let norm: f64 = v.iter().map(|x| x * x).sum();
    let moment: f64 = v.iter().zip(&problem.inv_rho2).map(|(x, w)| x * x * w).sum();
    Ok(moment / norm)
}

/// Both sides of `d m0 / d (m + alpha)^2 = <Q^-2>/4`, with `m0 = E/(2 omega)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HellmannCheck {
    /// Central difference of `m0` in `nu^2`.
    pub lhs: f64,
    /// `<rho^-2>/4` at the unshifted order.
    pub rhs: f64,
}

pub fn hellmann_check(channel: &FluxChannel, level: usize, grid: &RadialGrid, dnu2: f64) -> Result<HellmannCheck> {
    let nu2 = channel.nu() * channel.nu();
    if !(dnu2 > 0.0) || dnu2 >= nu2 {
        return Err(Error::InvalidInput(format!(
            "difference step must satisfy 0 < dnu2 < nu^2 = {nu2}, got {dnu2}"
        )));
    }
    let m0 = |order: f64| -> Result<f64> {
        let problem = RadialProblem::for_order(*channel, order, *grid);
        Ok(solve_spectrum(&problem, level + 1)?.eigenvalues[level] / 4.0)
    };
    let lhs = (m0((nu2 + dnu2).sqrt())? - m0((nu2 - dnu2).sqrt())?) / (2.0 * dnu2);

    let problem = build_confined_hamiltonian(channel, grid);
    let result = solve_spectrum(&problem, level + 1)?;
    let rhs = 0.25 * expectation_inv_rho2(&problem, &result, level)?;
    Ok(HellmannCheck { lhs, rhs })
}
