//! Lowest eigenpairs of a real symmetric tridiagonal matrix.
//!
//! Eigenvalues come from bisection on the Sturm sequence count, eigenvectors
//! from inverse iteration with a partially pivoted tridiagonal LU.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    diagonal: Vec<f64>,
    offdiagonal: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diagonal: Vec<f64>, offdiagonal: Vec<f64>) -> Result<Self> {
        if diagonal.is_empty() || offdiagonal.len() + 1 != diagonal.len() {
            return Err(Error::InvalidInput(format!(
                "tridiagonal shape mismatch: {} diagonal vs {} off-diagonal entries",
                diagonal.len(),
                offdiagonal.len()
            )));
        }
        Ok(Self {
            diagonal,
            offdiagonal,
        })
    }

    pub fn len(&self) -> usize {
        self.diagonal.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diagonal.is_empty()
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    pub fn offdiagonal(&self) -> &[f64] {
        &self.offdiagonal
    }

    /// Number of eigenvalues strictly below `x`.
    pub fn count_below(&self, x: f64) -> usize {
        let tiny = f64::MIN_POSITIVE.sqrt();
        let mut count = 0;
        let mut q = self.diagonal[0] - x;
        if q < 0.0 {
            count += 1;
        }
        for i in 1..self.diagonal.len() {
            if q == 0.0 {
                q = tiny;
            }
            let e = self.offdiagonal[i - 1];
            q = self.diagonal[i] - x - e * e / q;
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut r = 0.0;
            if i > 0 {
                r += self.offdiagonal[i - 1].abs();
            }
            if i + 1 < n {
                r += self.offdiagonal[i].abs();
            }
            lo = lo.min(self.diagonal[i] - r);
            hi = hi.max(self.diagonal[i] + r);
        }
        (lo, hi)
    }

    /// The `k`-th smallest eigenvalue (0-based) by bisection to full precision.
    pub fn eigenvalue(&self, k: usize) -> f64 {
        let (mut lo, mut hi) = self.gershgorin();
        let scale = lo.abs().max(hi.abs());
        for _ in 0..256 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi || hi - lo <= 2.0 * f64::EPSILON * scale.min(mid.abs().max(f64::MIN_POSITIVE)) {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Ascending list of the `count` smallest eigenvalues.
    pub fn lowest_eigenvalues(&self, count: usize) -> Vec<f64> {
        (0..count.min(self.len())).map(|k| self.eigenvalue(k)).collect()
    }

    /// Unit eigenvector for a converged eigenvalue.
    pub fn eigenvector(&self, lambda: f64) -> Vec<f64> {
        let n = self.len();
        let scale = self.gershgorin().1.abs().max(self.gershgorin().0.abs());
        // Nudge off the exact eigenvalue so the factorization stays finite.
        let shift = lambda + 4.0 * f64::EPSILON * scale;
        let lu = TridiagLu::factor(self, shift);
        let mut x = vec![1.0 / (n as f64).sqrt(); n];
        for _ in 0..4 {
            x = lu.solve(&x);
            normalize(&mut x);
        }
        // Fix the sign so the largest component is positive.
        let (imax, _) = x
            .iter()
            .enumerate()
            .fold((0, 0.0_f64), |acc, (i, v)| if v.abs() > acc.1 { (i, v.abs()) } else { acc });
        if x[imax] < 0.0 {
            x.iter_mut().for_each(|v| *v = -*v);
        }
        x
    }
}

fn normalize(x: &mut [f64]) {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > 0.0 {
        x.iter_mut().for_each(|v| *v /= norm);
    }
}

/// LU with partial pivoting of `T - shift I`; `U` has two super-diagonals.
struct TridiagLu {
    u0: Vec<f64>,
    u1: Vec<f64>,
    u2: Vec<f64>,
    l: Vec<f64>,
    swapped: Vec<bool>,
}

impl TridiagLu {
    fn factor(t: &SymTridiagonal, shift: f64) -> Self {
        let n = t.len();
        let tiny = f64::EPSILON * t.gershgorin().1.abs().max(1.0);
        let mut u0 = vec![0.0; n];
        let mut u1 = vec![0.0; n];
        let mut u2 = vec![0.0; n];
        let mut l = vec![0.0; n];
        let mut swapped = vec![false; n];

        // Row i of the active matrix: (d, e_next, 0) after fill-in handling.
        let mut d = t.diagonal[0] - shift;
        let mut e = if n > 1 { t.offdiagonal[0] } else { 0.0 };
        let mut f = 0.0;
        for i in 0..n - 1 {
            let sub = t.offdiagonal[i];
            let next_d = t.diagonal[i + 1] - shift;
            let next_e = if i + 2 < n { t.offdiagonal[i + 1] } else { 0.0 };
            if sub.abs() > d.abs() {
                swapped[i] = true;
                u0[i] = sub;
                u1[i] = next_d;
                u2[i] = next_e;
                let m = d / sub;
                l[i] = m;
                d = e - m * next_d;
                e = f - m * next_e;
                f = 0.0;
            } else {
                if d == 0.0 {
                    d = tiny;
                }
                u0[i] = d;
                u1[i] = e;
                u2[i] = f;
                let m = sub / d;
                l[i] = m;
                d = next_d - m * e;
                e = next_e;
                f = 0.0;
            }
        }
        if d == 0.0 {
            d = tiny;
        }
        u0[n - 1] = d;
        Self {
            u0,
            u1,
            u2,
            l,
            swapped,
        }
    }

    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = b.len();
        let mut y = b.to_vec();
        for i in 0..n - 1 {
            if self.swapped[i] {
                y.swap(i, i + 1);
            }
            y[i + 1] -= self.l[i] * y[i];
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut s = y[i];
            if i + 1 < n {
                s -= self.u1[i] * x[i + 1];
            }
            if i + 2 < n {
                s -= self.u2[i] * x[i + 2];
            }
            x[i] = s / self.u0[i];
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    /// Discrete Laplacian tridiag(-1, 2, -1): eigenvalues 2 - 2 cos(k pi/(n+1)).
    fn laplacian(n: usize) -> SymTridiagonal {
        SymTridiagonal::new(vec![2.0; n], vec![-1.0; n - 1]).unwrap()
    }

    #[test]
    fn laplacian_eigenvalues() {
        let n = 50;
        let t = laplacian(n);
        for (k, lam) in t.lowest_eigenvalues(6).iter().enumerate() {
            let exact = 2.0 - 2.0 * ((k + 1) as f64 * PI / (n + 1) as f64).cos();
            assert!((lam - exact).abs() < 1e-14, "{k}: {lam} vs {exact}");
        }
        assert!((t.eigenvalue(n - 1) - (2.0 - 2.0 * (n as f64 * PI / (n + 1) as f64).cos())).abs() < 1e-13);
    }

    #[test]
    fn laplacian_eigenvectors() {
        let n = 40;
        let t = laplacian(n);
        for k in 0..3 {
            let lam = t.eigenvalue(k);
            let v = t.eigenvector(lam);
            let mut exact: Vec<f64> = (1..=n)
                .map(|j| ((k + 1) as f64 * j as f64 * PI / (n + 1) as f64).sin())
                .collect();
            normalize(&mut exact);
            let dot: f64 = v.iter().zip(&exact).map(|(a, b)| a * b).sum();
            assert!((dot.abs() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn count_below_brackets() {
        let t = laplacian(10);
        assert_eq!(t.count_below(-1.0), 0);
        assert_eq!(t.count_below(5.0), 10);
        assert_eq!(t.count_below(2.0 + 1e-9), 5);
    }

    #[test]
    fn pivoting_path() {
        // Small diagonal, large coupling forces row swaps.
        let t = SymTridiagonal::new(vec![1e-3, -2e-3, 3e-3, 0.0, 1.0], vec![5.0, 4.0, 3.0, 2.0]).unwrap();
        for k in 0..5 {
            let lam = t.eigenvalue(k);
            let v = t.eigenvector(lam);
            // residual |T v - lam v|
            let n = 5;
            let mut r = 0.0_f64;
            for i in 0..n {
                let mut s = t.diagonal[i] * v[i] - lam * v[i];
                if i > 0 {
                    s += t.offdiagonal[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    s += t.offdiagonal[i] * v[i + 1];
                }
                r = r.max(s.abs());
            }
            assert!(r < 1e-12, "k={k} residual {r}");
        }
    }

    #[test]
    fn shape_is_checked() {
        assert!(SymTridiagonal::new(vec![1.0, 2.0], vec![]).is_err());
        assert!(SymTridiagonal::new(vec![], vec![]).is_err());
    }
}
