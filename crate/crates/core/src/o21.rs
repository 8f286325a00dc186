//! Truncated matrix realization of the o(2,1) generators in the
//! lowest-weight discrete series, with residual checks of the algebra.
//!
//! In the basis `|n>`, `n = 0..N-1`:
//!
//! ```text
//! J3 |n>        = (e0 + n) |n>
//! <n+1|K+|n>    = sqrt((n + 1)(n + 2 e0))
//! K1 = (K+ + K-)/2,   K2 = (K+ - K-)/(2i)
//! ```
//!
//! `K+` maps `|N-1>` out of the truncated space, so every algebraic check is
//! restricted to the interior block `0..N-1` (the last state excluded).

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Generators of one truncated discrete-series representation.
///
/// `K1` and `K2` are stored through the real ladder elements
/// `<n+1|K+|n>`; the sign convention is `K2[n, n+1] = +i r_n / 2`,
/// `K2[n+1, n] = -i r_n / 2`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeneratorTriple {
    e0: f64,
    j3: Vec<f64>,
    ladder: Vec<f64>,
}

impl GeneratorTriple {
    pub fn dimension(&self) -> usize {
        self.j3.len()
    }

    pub fn e0(&self) -> f64 {
        self.e0
    }

    pub fn j3_diagonal(&self) -> &[f64] {
        &self.j3
    }

    /// `<n+1|K+|n>` for `n = 0..N-2`.
    pub fn raising_elements(&self) -> &[f64] {
        &self.ladder
    }

    /// First off-diagonal of the real symmetric `K1`.
    pub fn k1_offdiagonal(&self) -> Vec<f64> {
        self.ladder.iter().map(|r| 0.5 * r).collect()
    }

    /// Magnitudes of the first off-diagonal of `K2`.
    pub fn k2_offdiagonal(&self) -> Vec<f64> {
        self.k1_offdiagonal()
    }

    pub fn j3_matrix(&self) -> DMatrix<Complex64> {
        let n = self.dimension();
        DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(self.j3[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    pub fn k1_matrix(&self) -> DMatrix<Complex64> {
        let n = self.dimension();
        let mut k = DMatrix::zeros(n, n);
        for (i, r) in self.ladder.iter().enumerate() {
            k[(i + 1, i)] = Complex64::new(0.5 * r, 0.0);
            k[(i, i + 1)] = Complex64::new(0.5 * r, 0.0);
        }
        k
    }

    pub fn k2_matrix(&self) -> DMatrix<Complex64> {
        let n = self.dimension();
        let mut k = DMatrix::zeros(n, n);
        for (i, r) in self.ladder.iter().enumerate() {
            k[(i + 1, i)] = Complex64::new(0.0, -0.5 * r);
            k[(i, i + 1)] = Complex64::new(0.0, 0.5 * r);
        }
        k
    }

    /// Dense `J3^2 - K1^2 - K2^2 - e0(e0-1) 1` over the full truncated space.
    pub fn casimir_defect_matrix(&self) -> DMatrix<Complex64> {
        let j3 = self.j3_matrix();
        let k1 = self.k1_matrix();
        let k2 = self.k2_matrix();
        let n = self.dimension();
        let target = self.e0 * (self.e0 - 1.0);
        &j3 * &j3 - &k1 * &k1 - &k2 * &k2 - DMatrix::from_diagonal_element(n, n, target.into())
    }
}

/// Max-abs residuals of the three commutators and the Casimir on the
/// interior block.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlgebraResidualReport {
    /// `[J3, K1] - i K2`
    pub commutator_j3k1: f64,
    /// `[J3, K2] + i K1`
    pub commutator_j3k2: f64,
    /// `[K1, K2] + i J3`
    pub commutator_k1k2: f64,
    /// `J3^2 - K1^2 - K2^2 - e0(e0-1)`
    pub casimir_deviation: f64,
    pub interior_size: usize,
}

impl AlgebraResidualReport {
    pub fn max_residual(&self) -> f64 {
        self.commutator_j3k1
            .max(self.commutator_j3k2)
            .max(self.commutator_k1k2)
            .max(self.casimir_deviation)
    }
}

pub fn build_discrete_series(e0: f64, dimension: usize) -> Result<GeneratorTriple> {
    if !e0.is_finite() {
        return Err(Error::InvalidInput(format!("lowest weight must be finite, got {e0}")));
    }
    if e0 < 0.5 {
        return Err(Error::LowestWeightTooSmall { e0 });
    }
    if dimension < 2 {
        return Err(Error::InvalidInput(format!(
            "truncation dimension must be at least 2, got {dimension}"
        )));
    }
    let j3 = (0..dimension).map(|n| e0 + n as f64).collect();
    let ladder = (0..dimension - 1)
        .map(|n| {
            let n = n as f64;
            ((n + 1.0) * (n + 2.0 * e0)).sqrt()
        })
        .collect();
    Ok(GeneratorTriple { e0, j3, ladder })
}

fn commutator(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    a * b - b * a
}

fn interior_max_abs(m: &DMatrix<Complex64>, size: usize) -> f64 {
    let mut worst = 0.0_f64;
    for j in 0..size {
        for i in 0..size {
            worst = worst.max(m[(i, j)].norm());
        }
    }
    worst
}

/// Residuals computed by explicit dense complex matrix arithmetic.
pub fn algebra_residuals(triple: &GeneratorTriple) -> AlgebraResidualReport {
    let i = Complex64::new(0.0, 1.0);
    let j3 = triple.j3_matrix();
    let k1 = triple.k1_matrix();
    let k2 = triple.k2_matrix();
    let interior = triple.dimension() - 1;

    let d1 = commutator(&j3, &k1) - k2.map(|z| i * z);
    let d2 = commutator(&j3, &k2) + k1.map(|z| i * z);
    let d3 = commutator(&k1, &k2) + j3.map(|z| i * z);
    let dc = triple.casimir_defect_matrix();

    AlgebraResidualReport {
        commutator_j3k1: interior_max_abs(&d1, interior),
        commutator_j3k2: interior_max_abs(&d2, interior),
        commutator_k1k2: interior_max_abs(&d3, interior),
        casimir_deviation: interior_max_abs(&dc, interior),
        interior_size: interior,
    }
}

/// Why a lowest weight fails the unitarity/positivity conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Violation {
    /// `Im(e0) != 0`: the representation is not unitary.
    NotReal,
    /// `e0 <= 0`, i.e. `Phi = -e0 >= 0`: the J3 spectrum is not positive.
    NonPositiveSpectrum,
    NonFinite,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Violation::NotReal => "unitarity violated: e0 has a nonzero imaginary part",
            Violation::NonPositiveSpectrum => {
                "positivity violated: J3 spectrum e0 + n is not positive (Phi = -e0 >= 0)"
            }
            Violation::NonFinite => "e0 is not finite",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Admissibility {
    Admissible,
    Inadmissible(Violation),
}

impl Admissibility {
    pub fn is_admissible(&self) -> bool {
        matches!(self, Admissibility::Admissible)
    }

    pub fn reason(&self) -> String {
        match self {
            Admissibility::Admissible => "admissible D+ representation".to_string(),
            Admissibility::Inadmissible(v) => v.to_string(),
        }
    }
}

/// D+ admissibility of a (possibly complex) lowest weight: real, and
/// `Phi = -e0 < 0`.
pub fn admissibility_check(e0: Complex64) -> Admissibility {
    if !e0.re.is_finite() || !e0.im.is_finite() {
        return Admissibility::Inadmissible(Violation::NonFinite);
    }
    if e0.im != 0.0 {
        return Admissibility::Inadmissible(Violation::NotReal);
    }
    let phi = -e0.re;
    if !(e0.re > 0.0 && phi < 0.0) {
        return Admissibility::Inadmissible(Violation::NonPositiveSpectrum);
    }
    Admissibility::Admissible
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{casimir_value, e0_select, spectrum_analytic, FluxChannel};

    #[test]
    fn two_state_example() {
        let t = build_discrete_series(0.75, 2).unwrap();
        assert_eq!(t.j3_diagonal(), &[0.75, 1.75]);
        assert!((t.raising_elements()[0] - 1.5_f64.sqrt()).abs() < 1e-15);
        assert!((t.raising_elements()[0] - 1.224_744_9).abs() < 1e-7);

        let t = build_discrete_series(0.5, 2).unwrap();
        assert_eq!(t.raising_elements()[0], 1.0);
        let r = algebra_residuals(&t);
        assert_eq!(r.interior_size, 1);
        assert!(r.max_residual() <= 1e-15);
    }

    #[test]
    fn two_state_interior_closure_by_hand() {
        // With N = 2 the interior is the 1x1 block on |0>.
        // [K1,K2]_00 = (K1 K2 - K2 K1)_00 = 2 * (r/2) * (i r/2) ... = i r^2 / 2
        // and must equal -i J3_00 = -i e0 ... with the sign absorbed by
        // K2_01 = +i r/2, K2_10 = -i r/2:
        //   (K1 K2)_00 = K1_01 K2_10 = (r/2)(-i r/2) = -i r^2/4
        //   (K2 K1)_00 = K2_01 K1_10 = (i r/2)(r/2)  =  i r^2/4
        // so [K1,K2]_00 = -i r^2/2 = -i (1 * 2 e0)/2 = -i e0.
        let t = build_discrete_series(0.75, 2).unwrap();
        let r = t.raising_elements()[0];
        let k1k2 = Complex64::new(0.0, -r * r / 2.0);
        assert!((k1k2 - Complex64::new(0.0, -0.75)).norm() < 1e-15);
    }

    #[test]
    fn residuals_at_64_and_128() {
        let r = algebra_residuals(&build_discrete_series(0.75, 64).unwrap());
        assert!(r.max_residual() <= 1e-12, "{r:?}");
        let r = algebra_residuals(&build_discrete_series(1.875, 64).unwrap());
        assert!(r.max_residual() <= 1e-12, "{r:?}");

        let ch = FluxChannel::new(1, 0.25);
        let e0 = e0_select(&ch);
        assert_eq!(e0, 1.125);
        assert!((e0 * (e0 - 1.0) - casimir_value(&ch)).abs() < 1e-15);
        assert_eq!(casimir_value(&ch), 0.140625);
        // Entries of K1^2 + K2^2 reach (e0 + N)^2 ~ 1.7e4 here, so the
        // deviation is bounded by a few ulps of that, not by 1e-12.
        let r = algebra_residuals(&build_discrete_series(e0, 128).unwrap());
        let floor = 4.0 * f64::EPSILON * (e0 + 128.0).powi(2);
        assert!(r.casimir_deviation <= floor, "{r:?}");
        assert_eq!(r.interior_size, 127);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(
            build_discrete_series(0.25, 8),
            Err(Error::LowestWeightTooSmall { .. })
        ));
        assert!(build_discrete_series(0.75, 1).is_err());
        assert!(build_discrete_series(f64::NAN, 8).is_err());
    }

    #[test]
    fn hermiticity_as_stored() {
        let t = build_discrete_series(1.3, 12).unwrap();
        let j3 = t.j3_matrix();
        let k1 = t.k1_matrix();
        let k2 = t.k2_matrix();
        assert_eq!(j3, j3.adjoint());
        assert_eq!(k1, k1.transpose());
        assert!(k1.iter().all(|z| z.im == 0.0));
        // K2 is Hermitian; as i * (real antisymmetric) it is anti-Hermitian
        // up to the factor i.
        assert_eq!(k2, k2.adjoint());
        let a = k2.map(|z| z * Complex64::new(0.0, -1.0));
        assert!(a.iter().all(|z| z.im == 0.0));
        assert_eq!(a, -a.transpose());
    }

    #[test]
    fn only_first_offdiagonals_are_populated() {
        let t = build_discrete_series(0.9, 9).unwrap();
        for k in [t.k1_matrix(), t.k2_matrix()] {
            for i in 0usize..9 {
                for j in 0..9 {
                    if i.abs_diff(j) != 1 {
                        assert_eq!(k[(i, j)], Complex64::new(0.0, 0.0));
                    }
                }
            }
        }
    }

    #[test]
    fn spectrum_matches_analytic_tower() {
        for (m, alpha) in [(0, 0.5), (1, 0.25), (-3, 0.25), (2, 0.0)] {
            let ch = FluxChannel::new(m, alpha);
            let n = 32;
            let t = build_discrete_series(e0_select(&ch), n).unwrap();
            let omega = 0.37;
            let s = spectrum_analytic(&ch, omega, (n - 1) as u32).unwrap();
            for (j3, level) in t.j3_diagonal().iter().zip(&s.levels) {
                let e = 2.0 * omega * j3;
                assert!((e - level.energy).abs() <= 1e-13 * level.energy);
            }
        }
    }

    #[test]
    fn casimir_defect_sits_on_last_state() {
        for &n in &[4usize, 16, 64] {
            let e0 = 0.75;
            let t = build_discrete_series(e0, n).unwrap();
            let d = t.casimir_defect_matrix();
            let last = d[(n - 1, n - 1)];
            // Missing K- K+ / 2 contribution of the state pushed out.
            let expected = n as f64 * (n as f64 - 1.0 + 2.0 * e0) / 2.0;
            assert!((last.re - expected).abs() <= 1e-10 * expected, "{last} vs {expected}");
            assert!(algebra_residuals(&t).casimir_deviation < 1e-12);
        }
    }

    #[test]
    fn admissibility_examples() {
        assert!(admissibility_check(0.75.into()).is_admissible());
        assert!(admissibility_check(0.5.into()).is_admissible());
        assert_eq!(
            admissibility_check((-0.25).into()),
            Admissibility::Inadmissible(Violation::NonPositiveSpectrum)
        );
        assert_eq!(
            admissibility_check(0.0.into()),
            Admissibility::Inadmissible(Violation::NonPositiveSpectrum)
        );
        assert_eq!(
            admissibility_check(Complex64::new(0.75, 0.1)),
            Admissibility::Inadmissible(Violation::NotReal)
        );
        assert!(admissibility_check((-0.25).into()).reason().contains("positivity"));
    }
}
