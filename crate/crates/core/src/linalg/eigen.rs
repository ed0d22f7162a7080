//! Cyclic Jacobi eigensolver for complex Hermitian matrices.

use serde::{Deserialize, Serialize};

use super::matrix::{ComplexMatrix, C64};
use crate::error::{Error, Result};
use crate::tolerance::tolerances;

const MAX_SWEEPS: usize = 100;

/// Eigenvalues in descending order with matching unitary eigenvector columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HermitianEigenDecomp {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigenDecomp {
    /// `λ_k` with the 1-based descending convention.
    pub fn lambda(&self, k: usize) -> f64 {
        self.eigenvalues[k - 1]
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    /// `V f(Λ) V*`.
    pub fn reassemble(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let fl: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        self.with_values(&fl)
    }

    /// `V diag(values) V*`.
    pub fn with_values(&self, fl: &[f64]) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let mut out = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let mut acc = C64::new(0.0, 0.0);
                for k in 0..n {
                    acc += v[(i, k)] * fl[k] * v[(j, k)].conj();
                }
                out[(i, j)] = acc;
                out[(j, i)] = acc.conj();
            }
            out[(i, i)].im = 0.0;
        }
        out
    }
}

/// Checks finiteness and relative Hermitian symmetry.
pub fn check_hermitian(s: &ComplexMatrix) -> Result<()> {
    s.ensure_square()?;
    s.ensure_finite()?;
    let asym = s.asymmetry();
    if asym > tolerances().symmetry * (1.0 + s.frobenius_norm()) {
        return Err(Error::NotHermitian { asymmetry: asym });
    }
    Ok(())
}

/// Full eigendecomposition of a Hermitian matrix.
pub fn hermitian_eig(s: &ComplexMatrix) -> Result<HermitianEigenDecomp> {
    check_hermitian(s)?;
    Ok(jacobi(s.hermitian_part()))
}

/// Eigenvalues only, descending.
pub fn hermitian_eigenvalues(s: &ComplexMatrix) -> Result<Vec<f64>> {
    hermitian_eig(s).map(|d| d.eigenvalues)
}

fn jacobi(mut a: ComplexMatrix) -> HermitianEigenDecomp {
    let n = a.rows();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();

    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= f64::EPSILON * 1e-2 * scale || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]).then(i.cmp(&j)));
    let eigenvalues = order.iter().map(|&i| diag[i]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    HermitianEigenDecomp {
        eigenvalues,
        eigenvectors,
    }
}

/// One Jacobi rotation annihilating `a[p][q]`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    if mag < f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
        a[(p, q)] = C64::new(0.0, 0.0);
        a[(q, p)] = C64::new(0.0, 0.0);
        return;
    }
    // Phase so that the pivot becomes real, then the classical real rotation.
    let phase = apq / mag;
    let theta = (aqq - app) / (2.0 * mag);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    // J = [[c, s], [-s·conj(phase), c·conj(phase)]] acting on coordinates (p, q).
    let j_pp = C64::new(c, 0.0);
    let j_pq = C64::new(s, 0.0);
    let j_qp = -phase.conj() * s;
    let j_qq = phase.conj() * c;

    let n = a.rows();
    // A ← A J
    for i in 0..n {
        let aip = a[(i, p)];
        let aiq = a[(i, q)];
        a[(i, p)] = aip * j_pp + aiq * j_qp;
        a[(i, q)] = aip * j_pq + aiq * j_qq;
    }
    // A ← J* A
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = j_pp.conj() * apk + j_qp.conj() * aqk;
        a[(q, k)] = j_pq.conj() * apk + j_qq.conj() * aqk;
    }
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)].im = 0.0;
    a[(q, q)].im = 0.0;
    // V ← V J
    for i in 0..n {
        let vip = v[(i, p)];
        let viq = v[(i, q)];
        v[(i, p)] = vip * j_pp + viq * j_qp;
        v[(i, q)] = vip * j_pq + viq * j_qq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn residuals(s: &ComplexMatrix, d: &HermitianEigenDecomp) -> (f64, f64) {
        let rec = d.reassemble(|l| l);
        let n = s.rows();
        let vv = d.eigenvectors.adjoint_mul(&d.eigenvectors);
        (
            (&rec - s).frobenius_norm(),
            (&vv - &ComplexMatrix::identity(n)).frobenius_norm(),
        )
    }

    #[test]
    fn identity_and_swap() {
        let d = hermitian_eig(&ComplexMatrix::identity(3)).unwrap();
        assert_eq!(d.eigenvalues, vec![1.0, 1.0, 1.0]);
        let swap = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let d = hermitian_eig(&swap).unwrap();
        assert!((d.eigenvalues[0] - 1.0).abs() < 1e-15);
        assert!((d.eigenvalues[1] + 1.0).abs() < 1e-15);
    }

    #[test]
    fn complex_hermitian_reconstructs() {
        let s = ComplexMatrix::from_rows(&[
            &[C64::new(2.0, 0.0), C64::new(1.0, -1.0), C64::new(0.0, 0.5)],
            &[C64::new(1.0, 1.0), C64::new(-1.0, 0.0), C64::new(0.3, 0.0)],
            &[C64::new(0.0, -0.5), C64::new(0.3, 0.0), C64::new(0.5, 0.0)],
        ]);
        let d = hermitian_eig(&s).unwrap();
        let (rec, orth) = residuals(&s, &d);
        assert!(rec < 1e-13, "{rec}");
        assert!(orth < 1e-13, "{orth}");
        assert!(d.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn rejects_non_hermitian() {
        let x = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(hermitian_eig(&x), Err(Error::NotHermitian { .. })));
        let mut bad = ComplexMatrix::identity(2);
        bad[(0, 0)] = C64::new(f64::INFINITY, 0.0);
        assert_eq!(hermitian_eig(&bad), Err(Error::NonFinite));
    }

    #[test]
    fn empty_and_scalar() {
        let d = hermitian_eig(&ComplexMatrix::zeros(0, 0)).unwrap();
        assert!(d.eigenvalues.is_empty());
        let d = hermitian_eig(&ComplexMatrix::diag_real(&[-3.5])).unwrap();
        assert_eq!(d.eigenvalues, vec![-3.5]);
    }

    #[test]
    fn deterministic_bits() {
        let s = ComplexMatrix::from_fn(5, 5, |i, j| {
            if i == j {
                C64::new(i as f64, 0.0)
            } else if i < j {
                C64::new(0.1 * (i + j) as f64, 0.2 * i as f64)
            } else {
                C64::new(0.1 * (i + j) as f64, -0.2 * j as f64)
            }
        });
        assert_eq!(hermitian_eig(&s).unwrap(), hermitian_eig(&s).unwrap());
    }
}
