//! Positive 2×2 block matrices `[[A, X], [X*, B]]`.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    check_hermitian, func_apply, hermitian_eig, inverse_pd, min_eig_psd_check, normal_eigenvalues, normality_defect,
    operator_norm, svd_decompose, ComplexMatrix, HermitianEigenDecomp, C64,
};
use crate::numrange::is_essentially_hermitian;
use crate::rng::{
    complex_normal, haar_unitary, random_contraction, random_hermitian, random_psd, rng_from_seed, uniform, DetRng,
};
use crate::tolerance::tolerances;

/// A validated positive block matrix. Construct through [`assemble`] or one
/// of the builders; deserialization re-validates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawBlock", into = "RawBlock")]
pub struct BlockPositive {
    a_block: ComplexMatrix,
    x_block: ComplexMatrix,
    b_block: ComplexMatrix,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBlock {
    #[serde(rename = "A")]
    a: ComplexMatrix,
    #[serde(rename = "X")]
    x: ComplexMatrix,
    #[serde(rename = "B")]
    b: ComplexMatrix,
}

impl TryFrom<RawBlock> for BlockPositive {
    type Error = Error;

    fn try_from(raw: RawBlock) -> Result<Self> {
        assemble(&raw.a, &raw.x, &raw.b)
    }
}

impl From<BlockPositive> for RawBlock {
    fn from(bp: BlockPositive) -> Self {
        RawBlock {
            a: bp.a_block,
            x: bp.x_block,
            b: bp.b_block,
        }
    }
}

impl BlockPositive {
    pub fn n(&self) -> usize {
        self.x_block.rows()
    }

    pub fn a_block(&self) -> &ComplexMatrix {
        &self.a_block
    }

    pub fn x_block(&self) -> &ComplexMatrix {
        &self.x_block
    }

    pub fn b_block(&self) -> &ComplexMatrix {
        &self.b_block
    }

    /// The assembled `2n×2n` matrix.
    pub fn block(&self) -> ComplexMatrix {
        ComplexMatrix::block2(&self.a_block, &self.x_block, &self.x_block.adjoint(), &self.b_block)
            .expect("blocks validated at construction")
    }

    /// `A + B`.
    pub fn partial_trace_sum(&self) -> ComplexMatrix {
        (&self.a_block + &self.b_block).hermitian_part()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("matrices serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// `A + B` of a block matrix.
pub fn partial_trace_sum(bp: &BlockPositive) -> ComplexMatrix {
    bp.partial_trace_sum()
}

fn check_psd(m: &ComplexMatrix) -> Result<()> {
    let (min, ok) = min_eig_psd_check(m)?;
    if ok {
        Ok(())
    } else {
        Err(Error::NotPsd { min_eigenvalue: min })
    }
}

/// Validates and assembles `[[A, X], [X*, B]]`.
///
/// `A` and `B` must be Hermitian PSD and the block matrix PSD with
/// `λ_min ≥ −1e-9·(1+‖·‖∞)`. The diagonal blocks are stored exactly
/// Hermitian.
pub fn assemble(a: &ComplexMatrix, x: &ComplexMatrix, b: &ComplexMatrix) -> Result<BlockPositive> {
    let n = x.ensure_square()?;
    for (name, m) in [("A", a), ("B", b)] {
        if m.rows() != n || m.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "{name} is {}x{} but X is {n}x{n}",
                m.rows(),
                m.cols()
            )));
        }
    }
    for m in [a, x, b] {
        m.ensure_finite()?;
    }
    check_hermitian(a)?;
    check_hermitian(b)?;
    let a = a.hermitian_part();
    let b = b.hermitian_part();
    check_psd(&a)?;
    check_psd(&b)?;
    let block = ComplexMatrix::block2(&a, x, &x.adjoint(), &b)?;
    let d = hermitian_eig(&block)?;
    let norm = d.max().abs().max(d.min().abs());
    if d.min() < -tolerances().block_psd * (1.0 + norm) {
        return Err(Error::NotPsd {
            min_eigenvalue: d.min(),
        });
    }
    Ok(BlockPositive {
        a_block: a,
        x_block: x.clone(),
        b_block: b,
    })
}

fn sqrt_psd(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    func_apply(f64::sqrt, m)
}

/// `X = A^{1/2} K B^{1/2}` for a contraction `K`.
pub fn from_contraction(a: &ComplexMatrix, b: &ComplexMatrix, k: &ComplexMatrix) -> Result<BlockPositive> {
    let n = k.ensure_square()?;
    if a.rows() != n || b.rows() != n {
        return Err(Error::DimensionMismatch("A, B and K must share a dimension".into()));
    }
    let norm = operator_norm(k)?;
    if norm > 1.0 + 1e-10 {
        return Err(Error::NotContraction(norm));
    }
    check_hermitian(a)?;
    check_hermitian(b)?;
    let x = &(&sqrt_psd(a)? * k) * &sqrt_psd(b)?;
    assemble(a, &x, b)
}

/// Schur completion `B = X*A⁻¹X + S`.
pub fn from_schur(a: &ComplexMatrix, x: &ComplexMatrix, s: &ComplexMatrix) -> Result<BlockPositive> {
    let n = x.ensure_square()?;
    if a.rows() != n || s.rows() != n || a.cols() != n || s.cols() != n {
        return Err(Error::DimensionMismatch("A, X and S must share a dimension".into()));
    }
    check_hermitian(s)?;
    check_psd(&s.hermitian_part())?;
    let a_inv = inverse_pd(a)?;
    let b = (&(&x.adjoint() * &(&a_inv * x)) + s).hermitian_part();
    assemble(a, x, &b)
}

/// `[[|X*|, X], [X*, |X|]]`.
pub fn witness_modulus(x: &ComplexMatrix) -> Result<BlockPositive> {
    x.ensure_square()?;
    x.ensure_finite()?;
    let d = svd_decompose(x)?;
    let modulus = |basis: &ComplexMatrix| {
        HermitianEigenDecomp {
            eigenvalues: d.singular_values.clone(),
            eigenvectors: basis.clone(),
        }
        .reassemble(|s| s)
    };
    assemble(&modulus(&d.u_factor), x, &modulus(&d.v_factor))
}

/// `A = diag(a, b)`, `B = diag(b, a)`, `X = [[0, a], [b, 0]]`.
pub fn intro_equality_example(a: f64, b: f64) -> Result<BlockPositive> {
    for v in [a, b] {
        if !(v >= 0.0) || !v.is_finite() {
            return Err(Error::NegativeInput(format!("{v}")));
        }
    }
    assemble(
        &ComplexMatrix::diag_real(&[a, b]),
        &ComplexMatrix::from_real_rows(&[&[0.0, a], &[b, 0.0]]),
        &ComplexMatrix::diag_real(&[b, a]),
    )
}

/// Pair `(f, g)` with `f(t)g(t) = t²` and `f(0) = g(0) = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum FunctionPair {
    /// `f(t) = t^{2α}`, `g(t) = t^{2−2α}`.
    Power { alpha: f64 },
    /// `f = g = t`.
    Identity,
}

impl FunctionPair {
    pub fn power(alpha: f64) -> Result<Self> {
        if alpha > 0.0 && alpha < 1.0 {
            Ok(Self::Power { alpha })
        } else {
            Err(Error::BadAlpha(alpha))
        }
    }

    /// The exponent `α` of `f(t) = t^{2α}`; `1/2` for the identity pair.
    pub fn alpha(&self) -> f64 {
        match *self {
            Self::Power { alpha } => alpha,
            Self::Identity => 0.5,
        }
    }

    pub fn f(&self, t: f64) -> f64 {
        match *self {
            Self::Power { alpha } => pow0(t, 2.0 * alpha),
            Self::Identity => t,
        }
    }

    pub fn g(&self, t: f64) -> f64 {
        match *self {
            Self::Power { alpha } => pow0(t, 2.0 - 2.0 * alpha),
            Self::Identity => t,
        }
    }
}

fn pow0(t: f64, e: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        t.powf(e)
    }
}

/// Off-diagonal families for [`sample_random`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SampleKind {
    /// `X = A^{1/2}KB^{1/2}` for random PSD `A, B` and a random contraction.
    General,
    /// Normal `X` with spectrum in the closed disc of radius `radius` about
    /// `center`.
    NormalOffdiag { radius: f64, center: C64 },
    /// `X = e^{iφ}H + μI` with `H` Hermitian.
    EssentiallyHermitianOffdiag,
    /// Unitary `X`.
    UnitaryOffdiag,
}

impl SampleKind {
    /// Parses `general`, `normal`, `essentially_hermitian` or `unitary`;
    /// `radius` and `center` are used by `normal` only.
    pub fn from_name(name: &str, radius: f64, center: C64) -> Result<Self> {
        let kind = match name {
            "general" => Self::General,
            "normal" | "normal_offdiag" => Self::NormalOffdiag { radius, center },
            "essentially_hermitian" | "essentially_hermitian_offdiag" => Self::EssentiallyHermitianOffdiag,
            "unitary" | "unitary_offdiag" => Self::UnitaryOffdiag,
            other => return Err(Error::BadKind(other.to_string())),
        };
        kind.validate()?;
        Ok(kind)
    }

    fn validate(&self) -> Result<()> {
        if let Self::NormalOffdiag { radius, center } = *self {
            if !(radius >= 0.0) || !radius.is_finite() || !center.re.is_finite() || !center.im.is_finite() {
                return Err(Error::BadKind(format!(
                    "normal_offdiag radius {radius}, center {center}"
                )));
            }
        }
        Ok(())
    }
}

/// Diagonal blocks `t|X*| + P`, `|X|/t + Q` with random PSD `P, Q` and
/// `t ∈ [1/2, 2]`; the modulus witness keeps the block PSD for any `X`.
fn blocks_around(x: &ComplexMatrix, rng: &mut DetRng) -> Result<BlockPositive> {
    let n = x.rows();
    let w = witness_modulus(x)?;
    let t = 0.5 + 1.5 * uniform(rng);
    let cp = uniform(rng);
    let cq = uniform(rng);
    let a = &w.a_block.scale_real(t) + &random_psd(n, rng).scale_real(cp);
    let b = &w.b_block.scale_real(1.0 / t) + &random_psd(n, rng).scale_real(cq);
    assemble(&a, x, &b)
}

/// Deterministic random instance of the given family. Family constraints
/// are re-checked on the result.
pub fn sample_random(n: usize, kind: SampleKind, seed: u64) -> Result<BlockPositive> {
    if n == 0 {
        return Err(Error::DimensionTooSmall { n, min: 1 });
    }
    kind.validate()?;
    let mut rng = rng_from_seed(seed);
    let bp = match kind {
        SampleKind::General => {
            let a = random_psd(n, &mut rng);
            let b = random_psd(n, &mut rng);
            let k = random_contraction(n, &mut rng);
            from_contraction(&a, &b, &k)?
        }
        SampleKind::NormalOffdiag { radius, center } => {
            let v = haar_unitary(n, &mut rng);
            let eig: Vec<C64> = (0..n)
                .map(|_| {
                    let rho = uniform(&mut rng);
                    let phi = uniform(&mut rng) * TAU;
                    center + C64::from_polar(radius * rho, phi)
                })
                .collect();
            let x = &(&v * &ComplexMatrix::diag(&eig)) * &v.adjoint();
            blocks_around(&x, &mut rng)?
        }
        SampleKind::EssentiallyHermitianOffdiag => {
            let h = random_hermitian(n, &mut rng);
            let phase = C64::from_polar(1.0, uniform(&mut rng) * TAU);
            let mu = complex_normal(&mut rng);
            let x = h.scale(phase).shift(mu);
            blocks_around(&x, &mut rng)?
        }
        SampleKind::UnitaryOffdiag => {
            let x = haar_unitary(n, &mut rng);
            blocks_around(&x, &mut rng)?
        }
    };
    post_check(&bp, kind)?;
    Ok(bp)
}

fn post_check(bp: &BlockPositive, kind: SampleKind) -> Result<()> {
    let x = bp.x_block();
    let fail = |what: String| Err(Error::HypothesisFailed(what));
    match kind {
        SampleKind::General => Ok(()),
        SampleKind::NormalOffdiag { radius, center } => {
            let defect = normality_defect(x)?;
            if defect > tolerances().normality {
                return fail(format!("normality defect {defect:e}"));
            }
            for l in normal_eigenvalues(x)? {
                let d = (l - center).norm();
                if d > radius + 1e-9 {
                    return Err(Error::SpectrumOutsideDisc { distance: d, radius });
                }
            }
            Ok(())
        }
        SampleKind::EssentiallyHermitianOffdiag => {
            if is_essentially_hermitian(x)? {
                Ok(())
            } else {
                fail("width of W(X) above tolerance".into())
            }
        }
        SampleKind::UnitaryOffdiag => {
            let n = x.rows();
            let defect = (&x.adjoint_mul(x) - &ComplexMatrix::identity(n)).max_abs();
            if defect > 1e-9 {
                fail(format!("unitarity defect {defect:e}"))
            } else {
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn assemble_examples() {
        let i = ComplexMatrix::identity(2);
        assert!(assemble(&i, &i, &i).is_ok());
        assert!(matches!(
            assemble(&i, &i.scale_real(2.0), &i),
            Err(Error::NotPsd { .. })
        ));
        assert!(matches!(
            assemble(&ComplexMatrix::identity(3), &i, &i),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn intro_family() {
        let bp = intro_equality_example(1.0, 0.0).unwrap();
        assert_eq!(bp.partial_trace_sum(), ComplexMatrix::identity(2));
        assert!(matches!(
            intro_equality_example(-1.0, 0.0),
            Err(Error::NegativeInput(_))
        ));
    }

    #[test]
    fn function_pairs() {
        let p = FunctionPair::power(0.3).unwrap();
        for t in [0.0, 0.5, 2.0, 7.0] {
            assert!((p.f(t) * p.g(t) - t * t).abs() < 1e-12 * (1.0 + t * t));
        }
        assert_eq!(FunctionPair::power(0.0), Err(Error::BadAlpha(0.0)));
        assert_eq!(FunctionPair::Identity.f(3.0), 3.0);
    }

    #[test]
    fn kinds_parse() {
        assert!(SampleKind::from_name("normal", -1.0, C64::new(0.0, 0.0)).is_err());
        assert!(matches!(
            SampleKind::from_name("weird", 0.0, C64::new(0.0, 0.0)),
            Err(Error::BadKind(_))
        ));
    }

    #[test]
    fn json_round_trip_revalidates() {
        let bp = intro_equality_example(2.0, 1.0).unwrap();
        let back = BlockPositive::from_json(&bp.to_json()).unwrap();
        assert_eq!(bp, back);
        let bad = r#"{"A":{"rows":1,"cols":1,"data":[[1,0]]},"X":{"rows":1,"cols":1,"data":[[5,0]]},"B":{"rows":1,"cols":1,"data":[[1,0]]}}"#;
        assert!(BlockPositive::from_json(bad).is_err());
    }
}
