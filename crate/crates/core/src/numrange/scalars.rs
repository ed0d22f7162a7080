use serde::{Deserialize, Serialize};

use super::support::golden_min;
use crate::error::Result;
use crate::linalg::{operator_norm, ComplexMatrix, C64};

/// `dist(X, ℂI) = min_λ ‖X − λI‖∞` with its minimizer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalarDistance {
    pub dist: f64,
    pub minimizer: C64,
}

/// Minimizes the convex function `λ ↦ ‖X − λI‖∞`.
///
/// Partial minimization preserves convexity, so a golden-section search over
/// `Re λ` whose objective is itself a golden-section search over `Im λ`
/// converges to the global minimum without smoothness assumptions. The
/// minimizer lies in `W(X)`, inside the search box `|Re λ|, |Im λ| ≤ ‖X‖∞`.
pub fn dist_to_scalars(x: &ComplexMatrix) -> Result<ScalarDistance> {
    let n = x.ensure_square()?;
    x.ensure_finite()?;
    if n == 0 {
        return Ok(ScalarDistance {
            dist: 0.0,
            minimizer: C64::new(0.0, 0.0),
        });
    }
    let radius = operator_norm(x)?;
    if radius == 0.0 {
        return Ok(ScalarDistance {
            dist: 0.0,
            minimizer: C64::new(0.0, 0.0),
        });
    }
    let tol = 1e-11 * (1.0 + radius);
    let f = |l: C64| -> Result<f64> { operator_norm(&x.shift(-l)) };
    let inner = |re: f64| -> Result<(f64, f64)> { golden_min(|im| f(C64::new(re, im)), -radius, radius, tol) };
    let (re, _) = golden_min(|re| Ok(inner(re)?.1), -radius, radius, tol)?;
    let (im, _) = inner(re)?;
    let minimizer = C64::new(re, im);
    Ok(ScalarDistance {
        dist: f(minimizer)?,
        minimizer,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_scalar() {
        let d = dist_to_scalars(&ComplexMatrix::identity(3)).unwrap();
        assert!(d.dist < 1e-9);
        assert!((d.minimizer - C64::new(1.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn nilpotent_distance_is_one() {
        let x = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let d = dist_to_scalars(&x).unwrap();
        assert!((d.dist - 1.0).abs() < 1e-10);
        assert!(d.minimizer.norm() < 1e-5);
    }

    #[test]
    fn symmetric_spectrum() {
        let d = dist_to_scalars(&ComplexMatrix::diag_real(&[1.0, -1.0])).unwrap();
        assert!((d.dist - 1.0).abs() < 1e-10);
        // The objective is quadratically flat along the imaginary axis.
        assert!(d.minimizer.re.abs() < 1e-9);
        assert!(d.minimizer.im.abs() < 1e-4);
    }
}
