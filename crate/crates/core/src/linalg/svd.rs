//! Singular value decomposition by one-sided (Hestenes) Jacobi rotations.

use serde::{Deserialize, Serialize};

use super::matrix::{dot, vec_norm, ComplexMatrix, C64};
use crate::error::Result;

const MAX_SWEEPS: usize = 80;

/// `X = U Σ V*` with both factors square unitary and `Σ` descending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularDecomp {
    pub u_factor: ComplexMatrix,
    pub v_factor: ComplexMatrix,
    pub singular_values: Vec<f64>,
}

impl SingularDecomp {
    pub fn max(&self) -> f64 {
        self.singular_values.first().copied().unwrap_or(0.0)
    }

    /// `U[:, :k] Σ V[:, :k]*`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let m = self.u_factor.rows();
        let n = self.v_factor.rows();
        let mut out = ComplexMatrix::zeros(m, n);
        for (k, &s) in self.singular_values.iter().enumerate() {
            for i in 0..m {
                let us = self.u_factor[(i, k)] * s;
                for j in 0..n {
                    out[(i, j)] += us * self.v_factor[(j, k)].conj();
                }
            }
        }
        out
    }
}

pub fn svd_decompose(x: &ComplexMatrix) -> Result<SingularDecomp> {
    x.ensure_finite()?;
    if x.rows() >= x.cols() {
        Ok(tall_svd(x))
    } else {
        let t = tall_svd(&x.adjoint());
        Ok(SingularDecomp {
            u_factor: t.v_factor,
            v_factor: t.u_factor,
            singular_values: t.singular_values,
        })
    }
}

pub fn singular_values(x: &ComplexMatrix) -> Result<Vec<f64>> {
    svd_decompose(x).map(|d| d.singular_values)
}

/// Largest singular value `‖X‖∞`.
pub fn operator_norm(x: &ComplexMatrix) -> Result<f64> {
    Ok(singular_values(x)?.first().copied().unwrap_or(0.0))
}

fn tall_svd(x: &ComplexMatrix) -> SingularDecomp {
    let m = x.rows();
    let n = x.cols();
    let mut w: Vec<Vec<C64>> = (0..n).map(|j| x.column(j)).collect();
    let mut v: Vec<Vec<C64>> = (0..n)
        .map(|j| {
            let mut e = vec![C64::new(0.0, 0.0); n];
            e[j] = C64::new(1.0, 0.0);
            e
        })
        .collect();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: f64 = w[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = w[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma = dot(&w[p], &w[q]);
                let g = gamma.norm();
                if g == 0.0 || g <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                // Diagonalize the 2x2 Gram block [[alpha, gamma], [conj(gamma), beta]].
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta == 0.0 {
                    1.0
                } else {
                    zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let j_pp = C64::new(c, 0.0);
                let j_pq = C64::new(s, 0.0);
                let j_qp = -phase.conj() * s;
                let j_qq = phase.conj() * c;
                for cols in [&mut w, &mut v] {
                    let (lo, hi) = cols.split_at_mut(q);
                    let cp = &mut lo[p];
                    let cq = &mut hi[0];
                    for (a, b) in cp.iter_mut().zip(cq.iter_mut()) {
                        let (ap, aq) = (*a, *b);
                        *a = ap * j_pp + aq * j_qp;
                        *b = ap * j_pq + aq * j_qq;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = w.iter().map(|c| vec_norm(c)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]).then(i.cmp(&j)));

    let singular_values: Vec<f64> = order.iter().map(|&i| norms[i]).collect();
    let v_cols: Vec<Vec<C64>> = order.iter().map(|&i| v[i].clone()).collect();
    let mut u_cols: Vec<Vec<C64>> = Vec::with_capacity(m);
    let tiny = f64::MIN_POSITIVE.sqrt() * (1.0 + singular_values.first().copied().unwrap_or(0.0));
    for &i in &order {
        if norms[i] > tiny {
            u_cols.push(w[i].iter().map(|z| z / norms[i]).collect());
        } else {
            break;
        }
    }
    let rank = u_cols.len();
    let mut singular_values = singular_values;
    for s in singular_values.iter_mut().skip(rank) {
        *s = 0.0;
    }
    complete_orthonormal(&mut u_cols, m);

    SingularDecomp {
        u_factor: ComplexMatrix::from_columns(m, &u_cols),
        v_factor: ComplexMatrix::from_columns(n, &v_cols),
        singular_values,
    }
}

/// Extends orthonormal columns to a basis of `C^dim`, trying standard basis
/// vectors in index order.
pub fn complete_orthonormal(cols: &mut Vec<Vec<C64>>, dim: usize) {
    let mut k = 0;
    while cols.len() < dim && k < dim {
        let mut e = vec![C64::new(0.0, 0.0); dim];
        e[k] = C64::new(1.0, 0.0);
        k += 1;
        // Two Gram-Schmidt passes for stability.
        for _ in 0..2 {
            for c in cols.iter() {
                let proj = dot(c, &e);
                for (ei, ci) in e.iter_mut().zip(c) {
                    *ei -= proj * ci;
                }
            }
        }
        let nrm = vec_norm(&e);
        if nrm > 0.5 / (dim as f64).sqrt() {
            cols.push(e.into_iter().map(|z| z / nrm).collect());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nilpotent_and_unitary() {
        let x = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let d = svd_decompose(&x).unwrap();
        assert_eq!(d.singular_values, vec![1.0, 0.0]);
        assert!((&d.reconstruct() - &x).frobenius_norm() < 1e-15);

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let u = ComplexMatrix::from_rows(&[
            &[C64::new(h, 0.0), C64::new(0.0, h)],
            &[C64::new(0.0, h), C64::new(h, 0.0)],
        ]);
        let d = svd_decompose(&u).unwrap();
        for s in d.singular_values {
            assert!((s - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn wide_matrix_and_zero() {
        let x = ComplexMatrix::from_real_rows(&[&[3.0, 0.0, 4.0]]);
        let d = svd_decompose(&x).unwrap();
        assert_eq!(d.singular_values.len(), 1);
        assert!((d.singular_values[0] - 5.0).abs() < 1e-14);
        assert_eq!(d.u_factor.rows(), 1);
        assert_eq!(d.v_factor.rows(), 3);
        assert!((&d.reconstruct() - &x).frobenius_norm() < 1e-14);

        let z = svd_decompose(&ComplexMatrix::zeros(3, 3)).unwrap();
        assert_eq!(z.singular_values, vec![0.0; 3]);
        let uu = z.u_factor.adjoint_mul(&z.u_factor);
        assert!((&uu - &ComplexMatrix::identity(3)).frobenius_norm() < 1e-15);
    }
}
