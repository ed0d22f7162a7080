//! Functional calculus, moduli, polar decomposition, norms and PSD tests.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::eigen::{check_hermitian, hermitian_eig, HermitianEigenDecomp};
use super::matrix::{ComplexMatrix, C64};
use super::svd::svd_decompose;
use crate::error::{Error, Result};
use crate::tolerance::tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// `|X*| = (XX*)^{1/2}`
    Left,
    /// `|X| = (X*X)^{1/2}`
    Right,
}

/// Left or right modulus of a square matrix.
pub fn matrix_abs(x: &ComplexMatrix, side: Side) -> Result<ComplexMatrix> {
    x.ensure_square()?;
    let d = svd_decompose(x)?;
    let basis = match side {
        Side::Left => &d.u_factor,
        Side::Right => &d.v_factor,
    };
    let dec = HermitianEigenDecomp {
        eigenvalues: d.singular_values.clone(),
        eigenvectors: basis.clone(),
    };
    Ok(dec.reassemble(|s| s))
}

/// `f(S)` for Hermitian PSD `S`.
///
/// Eigenvalues inside the PSD tolerance band below zero are clamped to zero
/// before `f` is applied.
pub fn func_apply(f: impl Fn(f64) -> f64, s: &ComplexMatrix) -> Result<ComplexMatrix> {
    let d = hermitian_eig(s)?;
    let band = tolerances().psd * (1.0 + d.max().abs().max(d.min().abs()));
    if d.min() < -band {
        return Err(Error::NotPsd {
            min_eigenvalue: d.min(),
        });
    }
    let mut values = Vec::with_capacity(d.eigenvalues.len());
    for &l in &d.eigenvalues {
        let v = f(l.max(0.0));
        if !v.is_finite() {
            return Err(Error::FunctionDomain(l));
        }
        values.push(v);
    }
    Ok(d.with_values(&values))
}

/// Polar decomposition `X = U·|X|`.
///
/// `U = u_factor·v_factor*`; on the kernel the leftover singular vectors are
/// paired in index order, so `U` is unitary even for singular `X`.
pub fn polar_decompose(x: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    x.ensure_square()?;
    let d = svd_decompose(x)?;
    let u = d.u_factor.matmul(&d.v_factor.adjoint());
    let modulus = HermitianEigenDecomp {
        eigenvalues: d.singular_values.clone(),
        eigenvectors: d.v_factor.clone(),
    }
    .reassemble(|s| s);
    Ok((u, modulus))
}

/// Schatten exponent in `[1, ∞]`; `∞` is spelled `inf` in text and JSON.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct SchattenP(f64);

impl SchattenP {
    pub const ONE: Self = Self(1.0);
    pub const TWO: Self = Self(2.0);
    pub const INF: Self = Self(f64::INFINITY);

    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            Err(Error::BadExponent(p))
        } else {
            Ok(Self(p))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    /// ℓ_p norm of a list of nonnegative values.
    pub fn lp(self, values: impl IntoIterator<Item = f64>) -> f64 {
        let p = self.0;
        if p.is_infinite() {
            values.into_iter().fold(0.0, |m, s| m.max(s.abs()))
        } else if p == 1.0 {
            values.into_iter().map(f64::abs).sum()
        } else if p == 2.0 {
            values.into_iter().map(|s| s * s).sum::<f64>().sqrt()
        } else {
            let vals: Vec<f64> = values.into_iter().map(f64::abs).collect();
            let m = vals.iter().copied().fold(0.0, f64::max);
            if m == 0.0 {
                return 0.0;
            }
            m * vals.iter().map(|s| (s / m).powf(p)).sum::<f64>().powf(1.0 / p)
        }
    }
}

impl fmt::Display for SchattenP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_infinite() {
            write!(f, "inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl FromStr for SchattenP {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if matches!(t, "inf" | "Inf" | "INF" | "∞" | "infinity") {
            return Ok(Self::INF);
        }
        let p: f64 = t
            .parse()
            .map_err(|_| Error::Parse(format!("bad Schatten exponent {t:?}")))?;
        Self::new(p)
    }
}

impl Serialize for SchattenP {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_infinite() {
            ser.serialize_str("inf")
        } else {
            ser.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for SchattenP {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(de)? {
            Raw::Num(p) => SchattenP::new(p).map_err(serde::de::Error::custom),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Schatten p-norm: ℓ_p norm of the singular values.
pub fn schatten_norm(s: &ComplexMatrix, p: f64) -> Result<f64> {
    let p = SchattenP::new(p)?;
    schatten(s, p)
}

pub fn schatten(s: &ComplexMatrix, p: SchattenP) -> Result<f64> {
    if p.value() == 2.0 {
        s.ensure_finite()?;
        return Ok(s.frobenius_norm());
    }
    let d = svd_decompose(s)?;
    Ok(p.lp(d.singular_values))
}

/// Schatten norm of a Hermitian matrix from its eigenvalues.
pub fn hermitian_schatten(eigenvalues: &[f64], p: SchattenP) -> f64 {
    p.lp(eigenvalues.iter().map(|l| l.abs()))
}

/// `(λ_min, is_psd)` with the relative PSD tolerance.
pub fn min_eig_psd_check(s: &ComplexMatrix) -> Result<(f64, bool)> {
    let d = hermitian_eig(s)?;
    Ok(psd_verdict(&d.eigenvalues, tolerances().psd))
}

pub(crate) fn psd_verdict(eigenvalues: &[f64], rel_tol: f64) -> (f64, bool) {
    if eigenvalues.is_empty() {
        return (0.0, true);
    }
    let min = *eigenvalues.last().unwrap();
    let max = eigenvalues[0];
    let norm = max.abs().max(min.abs());
    (min, min >= -rel_tol * (1.0 + norm))
}

/// `‖X*X − XX*‖_F / (1 + ‖X‖_F²)`.
pub fn normality_defect(x: &ComplexMatrix) -> Result<f64> {
    x.ensure_square()?;
    x.ensure_finite()?;
    let xx = x.adjoint_mul(x);
    let xxa = x.matmul(&x.adjoint());
    let f = x.frobenius_norm();
    Ok((&xx - &xxa).frobenius_norm() / (1.0 + f * f))
}

/// Inverse of a Hermitian positive definite matrix.
pub fn inverse_pd(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let d = hermitian_eig(a)?;
    let floor = 1e-10 * (1.0 + d.max().abs());
    if d.min() <= floor {
        return Err(Error::NotPd {
            min_eigenvalue: d.min(),
        });
    }
    Ok(d.reassemble(|l| 1.0 / l))
}

/// Inverse of an invertible Hermitian matrix, with `min |λ|`.
pub fn inverse_hermitian(a: &ComplexMatrix) -> Result<(ComplexMatrix, f64)> {
    let d = hermitian_eig(a)?;
    let min_abs = d.eigenvalues.iter().map(|l| l.abs()).fold(f64::INFINITY, f64::min);
    if !(min_abs > 0.0) {
        return Err(Error::SingularX(min_abs));
    }
    Ok((d.reassemble(|l| 1.0 / l), min_abs))
}

/// Eigenvalues of a normal matrix.
///
/// `X = H₁ + iH₂` with commuting Hermitian parts; the eigenvectors of
/// `H₁ + γH₂` for an irrational `γ` diagonalize both, and the eigenvalues are
/// read off as Rayleigh quotients.
pub fn normal_eigenvalues(x: &ComplexMatrix) -> Result<Vec<C64>> {
    x.ensure_square()?;
    let h1 = x.hermitian_part();
    let h2 = ComplexMatrix::from_fn(x.rows(), x.cols(), |i, j| {
        (x[(i, j)] - x[(j, i)].conj()) * C64::new(0.0, -0.5)
    });
    const GAMMA: f64 = 0.754_877_666_246_692_7;
    let mix = &h1 + &h2.scale_real(GAMMA);
    let d = hermitian_eig(&mix)?;
    let n = x.rows();
    Ok((0..n)
        .map(|k| {
            let v = d.eigenvectors.column(k);
            x.bilinear(&v, &v)
        })
        .collect())
}

/// Checks Hermitian symmetry without decomposing.
pub fn ensure_hermitian(s: &ComplexMatrix) -> Result<()> {
    check_hermitian(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nilpotent() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]])
    }

    #[test]
    fn moduli_of_nilpotent() {
        let r = matrix_abs(&nilpotent(), Side::Right).unwrap();
        let l = matrix_abs(&nilpotent(), Side::Left).unwrap();
        assert!((&r - &ComplexMatrix::diag_real(&[0.0, 1.0])).frobenius_norm() < 1e-15);
        assert!((&l - &ComplexMatrix::diag_real(&[1.0, 0.0])).frobenius_norm() < 1e-15);
    }

    #[test]
    fn func_apply_sqrt_and_errors() {
        let s = ComplexMatrix::diag_real(&[4.0, 9.0]);
        let r = func_apply(f64::sqrt, &s).unwrap();
        assert!((&r - &ComplexMatrix::diag_real(&[2.0, 3.0])).frobenius_norm() < 1e-14);
        let neg = ComplexMatrix::diag_real(&[1.0, -1.0]);
        assert!(matches!(func_apply(f64::sqrt, &neg), Err(Error::NotPsd { .. })));
        assert!(matches!(
            func_apply(|t| 1.0 / t, &ComplexMatrix::diag_real(&[1.0, 0.0])),
            Err(Error::FunctionDomain(_))
        ));
    }

    #[test]
    fn polar_of_nilpotent_and_unitary() {
        let (u, m) = polar_decompose(&nilpotent()).unwrap();
        assert!((&u.matmul(&m) - &nilpotent()).frobenius_norm() < 1e-15);
        let uu = u.adjoint_mul(&u);
        assert!((&uu - &ComplexMatrix::identity(2)).frobenius_norm() < 1e-15);

        let w = ComplexMatrix::from_real_rows(&[&[0.0, -1.0], &[1.0, 0.0]]);
        let (u, m) = polar_decompose(&w).unwrap();
        assert!((&u - &w).frobenius_norm() < 1e-14);
        assert!((&m - &ComplexMatrix::identity(2)).frobenius_norm() < 1e-14);
    }

    #[test]
    fn schatten_identity_and_bad_exponent() {
        let i4 = ComplexMatrix::identity(4);
        assert_eq!(schatten_norm(&i4, f64::INFINITY).unwrap(), 1.0);
        assert!((schatten_norm(&i4, 2.0).unwrap() - 2.0).abs() < 1e-15);
        assert!((schatten_norm(&i4, 1.0).unwrap() - 4.0).abs() < 1e-14);
        for p in [1.0, 1.5, 2.0, 3.0, f64::INFINITY] {
            assert!((schatten_norm(&nilpotent(), p).unwrap() - 1.0).abs() < 1e-14);
        }
        assert_eq!(schatten_norm(&i4, 0.5), Err(Error::BadExponent(0.5)));
    }

    #[test]
    fn schatten_p_parsing() {
        assert_eq!("inf".parse::<SchattenP>().unwrap(), SchattenP::INF);
        assert_eq!("1.5".parse::<SchattenP>().unwrap().value(), 1.5);
        assert!("0.9".parse::<SchattenP>().is_err());
        let json = serde_json::to_string(&vec![SchattenP::TWO, SchattenP::INF]).unwrap();
        assert_eq!(json, r#"[2.0,"inf"]"#);
        let back: Vec<SchattenP> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, vec![SchattenP::TWO, SchattenP::INF]);
    }

    #[test]
    fn psd_checks() {
        assert_eq!(min_eig_psd_check(&ComplexMatrix::identity(3)).unwrap(), (1.0, true));
        let (m, ok) = min_eig_psd_check(&ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 1.0]])).unwrap();
        assert!((m + 1.0).abs() < 1e-14);
        assert!(!ok);
    }

    #[test]
    fn normality_defect_values() {
        let d = normality_defect(&nilpotent()).unwrap();
        assert!((d - 2f64.sqrt() / 2.0).abs() < 1e-15);
        assert_eq!(normality_defect(&ComplexMatrix::identity(3)).unwrap(), 0.0);
        let h = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, -1.0]]);
        assert_eq!(normality_defect(&h).unwrap(), 0.0);
    }

    #[test]
    fn normal_spectrum_of_diagonal() {
        let x = ComplexMatrix::diag(&[C64::new(0.0, 0.0), C64::new(1.0, 1.0), C64::new(2.0, 2.0)]);
        let mut ev = normal_eigenvalues(&x).unwrap();
        ev.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert!((ev[2] - C64::new(2.0, 2.0)).norm() < 1e-14);
        assert!(ev[0].norm() < 1e-14);
    }
}
