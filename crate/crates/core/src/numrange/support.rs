use crate::error::Result;
use crate::linalg::{hermitian_eig, ComplexMatrix, C64};

/// Support data of `W(X)` in direction `e^{iθ}` and its opposite.
#[derive(Debug, Clone, Copy)]
pub(crate) struct SupportPair {
    pub h: f64,
    pub point: C64,
    /// `h(θ+π)`
    pub h_opposite: f64,
    pub point_opposite: C64,
}

/// `Re(e^{-iθ}X) = (e^{-iθ}X + e^{iθ}X*)/2`.
fn rotated_hermitian_part(x: &ComplexMatrix, theta: f64) -> ComplexMatrix {
    let w = C64::from_polar(1.0, -theta);
    let n = x.rows();
    ComplexMatrix::from_fn(n, n, |i, j| (w * x[(i, j)] + (w * x[(j, i)]).conj()) * 0.5)
}

pub(crate) fn support_pair(x: &ComplexMatrix, theta: f64) -> Result<SupportPair> {
    let n = x.ensure_square()?;
    x.ensure_finite()?;
    let d = hermitian_eig(&rotated_hermitian_part(x, theta))?;
    let top = d.eigenvectors.column(0);
    let bottom = d.eigenvectors.column(n - 1);
    Ok(SupportPair {
        h: d.max(),
        point: x.bilinear(&top, &top),
        h_opposite: -d.min(),
        point_opposite: x.bilinear(&bottom, &bottom),
    })
}

/// Support function `h(θ) = λ₁(Re(e^{-iθ}X))` and a point of `W(X)` attaining it.
pub fn support_function(x: &ComplexMatrix, theta: f64) -> Result<(f64, C64)> {
    let n = x.ensure_square()?;
    if n == 0 {
        return Err(crate::Error::DimensionTooSmall { n: 0, min: 1 });
    }
    let p = support_pair(x, theta)?;
    Ok((p.h, p.point))
}

/// Golden-section minimization of `f` on `[a, b]`.
pub(crate) fn golden_min(
    mut f: impl FnMut(f64) -> Result<f64>,
    mut a: f64,
    mut b: f64,
    tol: f64,
) -> Result<(f64, f64)> {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while (b - a).abs() > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d)?;
        }
    }
    Ok(if fc <= fd { (c, fc) } else { (d, fd) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_support_values() {
        let (h, p) = support_function(&ComplexMatrix::identity(2), 0.0).unwrap();
        assert!((h - 1.0).abs() < 1e-15);
        assert!((p - C64::new(1.0, 0.0)).norm() < 1e-15);

        let nil = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        for k in 0..12 {
            let (h, _) = support_function(&nil, k as f64 * 0.5).unwrap();
            assert!((h - 0.5).abs() < 1e-15);
        }

        let d = ComplexMatrix::diag_real(&[1.0, -1.0]);
        let (h, _) = support_function(&d, std::f64::consts::FRAC_PI_2).unwrap();
        assert!(h.abs() < 1e-15);
    }

    #[test]
    fn golden_finds_parabola_minimum() {
        let (x, fx) = golden_min(|t| Ok((t - 0.3) * (t - 0.3)), -1.0, 1.0, 1e-10).unwrap();
        assert!((x - 0.3).abs() < 1e-9);
        assert!(fx < 1e-17);
    }
}
