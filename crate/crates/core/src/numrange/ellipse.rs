use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};

/// Numerical range of a 2×2 matrix: an elliptical disc with foci at the
/// eigenvalues (a segment when `minor_axis` is zero).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ellipse {
    pub focus1: C64,
    pub focus2: C64,
    /// Full length of the minor axis.
    pub minor_axis: f64,
}

impl Ellipse {
    pub fn center(&self) -> C64 {
        (self.focus1 + self.focus2) * 0.5
    }

    pub fn semi_minor(&self) -> f64 {
        self.minor_axis * 0.5
    }

    pub fn semi_major(&self) -> f64 {
        let f = (self.focus1 - self.focus2).norm() * 0.5;
        self.semi_minor().hypot(f)
    }

    /// Largest inscribed disc diameter, equal to the minor axis.
    pub fn indiameter(&self) -> f64 {
        self.minor_axis
    }

    pub fn is_segment(&self) -> bool {
        self.minor_axis == 0.0
    }

    /// Support function in direction `e^{iθ}`.
    pub fn support(&self, theta: f64) -> f64 {
        let dir = C64::from_polar(1.0, theta);
        let c = self.center();
        let axis = self.focus1 - self.focus2;
        let psi = if axis.norm() > 0.0 { axis.arg() } else { 0.0 };
        let (a, b) = (self.semi_major(), self.semi_minor());
        let rel = theta - psi;
        (c.re * dir.re + c.im * dir.im) + (a * a * rel.cos().powi(2) + b * b * rel.sin().powi(2)).sqrt()
    }
}

/// Eigenvalues of a 2×2 matrix, `τ ± sqrt(a² + bc)` with `X − τI = [[a, b], [c, −a]]`.
pub(crate) fn eigenvalues_2x2(x: &ComplexMatrix) -> (C64, C64) {
    let tau = (x[(0, 0)] + x[(1, 1)]) * 0.5;
    let a = x[(0, 0)] - tau;
    let disc = (a * a + x[(0, 1)] * x[(1, 0)]).sqrt();
    (tau + disc, tau - disc)
}

/// Squared minor axis of `W(C)` for 2×2 `C`, computed translation-free as
/// `2|a|² + |b|² + |c|² − 2|a² + bc|`.
pub(crate) fn minor_axis_sq_2x2(x: &ComplexMatrix) -> f64 {
    let tau = (x[(0, 0)] + x[(1, 1)]) * 0.5;
    let a = x[(0, 0)] - tau;
    let b = x[(0, 1)];
    let c = x[(1, 0)];
    (2.0 * a.norm_sqr() + b.norm_sqr() + c.norm_sqr() - 2.0 * (a * a + b * c).norm()).max(0.0)
}

/// Closed-form numerical range of a 2×2 matrix (elliptical range theorem).
pub fn ellipse_2x2(x: &ComplexMatrix) -> Result<Ellipse> {
    if x.rows() != 2 || x.cols() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "ellipse_2x2 needs a 2x2 matrix, got {}x{}",
            x.rows(),
            x.cols()
        )));
    }
    x.ensure_finite()?;
    let (l1, l2) = eigenvalues_2x2(x);
    Ok(Ellipse {
        focus1: l1,
        focus2: l2,
        minor_axis: minor_axis_sq_2x2(x).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nilpotent_disc() {
        let e = ellipse_2x2(&ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]])).unwrap();
        assert_eq!(e.focus1, C64::new(0.0, 0.0));
        assert_eq!(e.focus2, C64::new(0.0, 0.0));
        assert_eq!(e.minor_axis, 1.0);
        assert!((e.support(1.234) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn diagonal_is_segment() {
        let e = ellipse_2x2(&ComplexMatrix::diag(&[C64::new(1.0, 1.0), C64::new(-2.0, 0.5)])).unwrap();
        assert_eq!(e.minor_axis, 0.0);
        assert!(e.is_segment());
    }

    #[test]
    fn weighted_shift_foci() {
        // [[0,1],[2,0]]: foci ±√2, minor axis √(5−4) = 1.
        let e = ellipse_2x2(&ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[2.0, 0.0]])).unwrap();
        let s2 = 2f64.sqrt();
        assert!((e.focus1.re.abs() - s2).abs() < 1e-15);
        assert!((e.focus1 + e.focus2).norm() < 1e-15);
        assert!((e.minor_axis - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_wrong_shape() {
        assert!(ellipse_2x2(&ComplexMatrix::identity(3)).is_err());
    }
}
